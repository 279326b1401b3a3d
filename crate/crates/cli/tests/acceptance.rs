//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Two criteria are not attainable as written; see "Known shortfalls" in the
//! README. Each of them still prints FAIL, and the run only tolerates that
//! FAIL when the failure is exactly the documented one.

#[path = "../../core/tests/props/mod.rs"]
mod props;

use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use encoded_transfer::driver::{extend, random_trials, Extension, RunConfig, TargetsFile, TrialConfig};
use encoded_transfer::error::Error;
use encoded_transfer::mp;
use encoded_transfer::network::{NetworkFile, Subspace};
use encoded_transfer::transfer::{encoding_vectors, Eigenpair};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use proptest::strategy::Strategy;
use rug::{Float, Rational};

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when a failure is exactly the documented shortfall.
    documented: bool,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, documented: false }
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn run_extend(network: &str, targets: Option<&str>) -> (encoded_transfer::Result<Extension>, Duration) {
    let net = NetworkFile::from_json(&read(network)).and_then(|f| f.to_network()).expect("network file");
    let targets = targets.map(|t| TargetsFile::from_json(&read(t)).expect("targets file"));
    let start = Instant::now();
    let ext = extend(&net, &RunConfig::default(), targets.as_ref());
    (ext, start.elapsed())
}

fn f64s(xs: &[Float]) -> Vec<f64> {
    xs.iter().map(|x| x.to_f64()).collect()
}

fn within(got: &[f64], want: &[f64], tol: f64) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol)
}

fn one_minus(x: &Float) -> f64 {
    Float::with_val(x.prec(), 1 - x).to_f64()
}

fn pi_times(q: (i32, i32), prec: u32) -> Float {
    mp::pi(prec) * Rational::from(q)
}

fn close(a: &Float, b: &Float, tol: f64) -> bool {
    Float::with_val(a.prec(), a - b).abs() <= tol
}

fn criterion_1() -> Outcome {
    let (ext, took) = run_extend("fig5.json", Some("fig5_targets.json"));
    let ext = match ext {
        Ok(e) => e,
        Err(e) => return Outcome::new(false, format!("extend failed: {e}")),
    };
    let couplings = f64s(&ext.chain.couplings);
    let j = ext.j.to_f64();
    let fid = one_minus(&ext.fidelity.min);
    let t0_ok = close(&ext.design.t0, &pi_times((2, 1), ext.design.prec()), 1e-20);
    let pass = within(&couplings, &[1.39235, 0.971614, 0.840558], 1e-5)
        && (j - 1.21745).abs() <= 1e-5
        && fid <= 1e-10
        && t0_ok
        && ext.design.region_size == 5
        && took < Duration::from_secs(10);
    Outcome::new(
        pass,
        format!("couplings {couplings:?}, J {j:.6}, 1-F {fid:.1e}, t0=2pi {t0_ok}, region {} sites, {:.2?}", ext.design.region_size, took),
    )
}

fn criterion_2() -> Outcome {
    const PRINTED: [f64; 3] = [1.868, 0.517, 1.642];
    let check = |targets: &str| -> Result<(bool, bool, String), String> {
        let (ext, took) = run_extend("fig6.json", Some(targets));
        let ext = ext.map_err(|e| format!("{targets}: {e}"))?;
        let couplings = f64s(&ext.chain.couplings);
        let j = ext.j.to_f64();
        let fid = one_minus(&ext.fidelity.min);
        let t0_ok = close(&ext.design.t0, &pi_times((41, 10), ext.design.prec()), 1e-20);
        let values = within(&couplings, &PRINTED, 1e-3) && (j - 1.201).abs() <= 1e-3;
        let transfer = fid <= 1e-10 && t0_ok && took < Duration::from_secs(10);
        Ok((values, transfer, format!("couplings {:.4?}, J {j:.4}, 1-F {fid:.1e}, t0=41pi/10 {t0_ok}, {took:.2?}", couplings)))
    };
    let printed = match check("fig6_targets.json") {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e),
    };
    let corrected = check("fig6_targets_90.json");
    let pass = printed.0 && printed.1;
    let mut out = Outcome::new(pass, format!("as printed (-70/41): {}", printed.2));
    if let Ok(c) = &corrected {
        out.detail += &format!("; with -90/41: {}", c.2);
        // the printed couplings belong to the 90/41 assignment
        out.documented = !printed.0 && printed.1 && c.0 && c.1;
    }
    out
}

fn criterion_3() -> Outcome {
    let prec = 256;
    let r37 = Float::with_val(prec, 37).sqrt() / 10u32;
    let c3 = (Float::with_val(prec, 7) / 10u32).sqrt() * 3u32 / 8u32;
    let restriction = |sign: i32| vec![mp::one(prec), Float::with_val(prec, &r37 * sign), Float::with_val(prec, -&c3)];
    let eigs: Vec<Eigenpair> = [-1, 1]
        .into_iter()
        .map(|s| Eigenpair { value: mp::one(prec), subspace: Subspace::Plus, vector: restriction(s), controlled: false })
        .collect();
    let vs = match encoding_vectors(&eigs, 3) {
        Ok(v) => v,
        Err(e) => return Outcome::new(false, format!("encoding_vectors failed: {e}")),
    };
    if vs.len() != 1 {
        return Outcome::new(false, format!("{} encoding vectors", vs.len()));
    }
    let v = &vs[0];
    let want = [Float::with_val(prec, 7).sqrt() * 3u32, Float::new(prec), Float::with_val(prec, 10).sqrt() * 8u32];
    let cos = mp::dot(v, &want) / (mp::norm(v) * mp::norm(&want));
    let parallel = Float::with_val(prec, 1 - cos.abs()).to_f64();
    let cross = eigs.iter().map(|e| mp::dot(&e.vector, v).abs().to_f64()).fold(0.0, f64::max);
    Outcome::new(parallel < 1e-20 && cross < 1e-20, format!("1-|cos| to 3sqrt7|1>+8sqrt10|3> {parallel:.1e}, cross products {cross:.1e}"))
}

fn criterion_4() -> Outcome {
    let (ext, took) = run_extend("uniform42.json", None);
    let ext = match ext {
        Ok(e) => e,
        Err(e) => return Outcome::new(false, format!("extend failed: {e}")),
    };
    let cert = &ext.certificate;
    let fid = one_minus(&ext.fidelity.min);
    let sv = ext.min_singular_value();
    let sv_ok = sv <= 1 && one_minus(&sv) <= 1e-4;
    let pass = cert.real_roots && cert.j_squared_positive && cert.interlacing.holds && fid <= 1e-8 && sv_ok && took < Duration::from_secs(60);
    Outcome::new(
        pass,
        format!(
            "real roots {}, J^2>0 {}, interlacing {}, 1-F {fid:.1e}, 1-min sv {:.2e}, shrink {}, {took:.2?}",
            cert.real_roots,
            cert.j_squared_positive,
            cert.interlacing.holds,
            one_minus(&sv),
            ext.shrink.map_or("-".into(), |s| s.to_string())
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut cfg = TrialConfig::default();
    cfg.run.seed = 1;
    cfg.run.trials = 20;
    let start = Instant::now();
    let rows = match random_trials(&cfg) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("trials failed: {e}")),
    };
    let took = start.elapsed();
    let eighth = Rational::from((1, 8));
    let parse = |s: &Option<String>| s.as_deref().and_then(|x| x.parse::<f64>().ok()).unwrap_or(f64::NAN);
    let succeeded = rows.iter().filter(|r| r.success && r.shrink.as_ref().is_some_and(|s| *s >= eighth)).count();
    let length_ok = rows.iter().all(|r| r.n_total == Some(120));
    let fid_ok = rows.iter().all(|r| 1.0 - parse(&r.fidelity) <= 1e-8);
    let ghz: Vec<f64> = rows.iter().map(|r| parse(&r.ghz_f)).collect();
    let low: Vec<usize> = rows.iter().zip(&ghz).filter(|(_, &g)| !(g >= 0.999)).map(|(r, _)| r.trial).collect();
    let worst = ghz.iter().cloned().fold(f64::INFINITY, f64::min);
    let rest = rows.len() == 20 && succeeded == 20 && length_ok && fid_ok && took < Duration::from_secs(600);
    let mut out = Outcome::new(
        rest && low.is_empty(),
        format!("{succeeded}/20 succeeded with shrink >= 1/8, length 120 {length_ok}, 1-F <= 1e-8 {fid_ok}, GHZ F < 0.999 in trials {low:?} (worst {worst:.5}), {took:.1?}"),
    );
    out.documented = rest && !low.is_empty();
    out
}

fn criterion_6() -> Outcome {
    let (ext, _) = run_extend("dark_state.json", None);
    // eigenvalues of the 2x2 block [[0, sqrt 2], [sqrt 2, 0]]: (a + d)/2 +- sqrt(((a - d)/2)^2 + b^2)
    let b = 2f64.sqrt();
    let oracle = [b, -b];
    let reported = match ext {
        Err(Error::SharedEigenvalues(v)) => v.iter().filter_map(|s| s.parse::<f64>().ok()).collect::<Vec<_>>(),
        Err(e) => return Outcome::new(false, format!("unexpected error {e}")),
        Ok(_) => return Outcome::new(false, "extension succeeded".into()),
    };
    let mut sorted = reported.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let values_ok = within(&sorted, &oracle, 1e-15);
    let out = std::env::temp_dir().join(format!("acceptance-dark-{}.json", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_est"))
        .args(["extend", data("dark_state.json").to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .expect("run est");
    let _ = std::fs::remove_file(&out);
    let code = status.status.code();
    Outcome::new(values_ok && code.is_some_and(|c| c != 0), format!("shared {reported:?}, est extend exit {code:?}"))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_property<S: Strategy>(name: &str, cases: u32, strategy: S, check: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>) -> Result<String, String>
where
    S::Value: std::fmt::Debug,
{
    let mut r = runner(cases);
    r.run(&strategy, check).map(|_| format!("{name} {cases}")).map_err(|e| format!("{name}: {e}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let emitted = AtomicUsize::new(0);
    let slopes = AtomicUsize::new(0);
    let interlaced = AtomicUsize::new(0);
    let results = [
        run_property("eq1", 100, props::eq1_case(), props::check_eq1),
        run_property("round-trip", 200, props::chain_case(), props::check_round_trip),
        run_property("interlacing<=>weights", 100, props::interlace_case(), |c| {
            let mut p = c.p_roots.clone();
            p.sort_by(|a, b| b.partial_cmp(a).unwrap());
            if p.iter().enumerate().all(|(k, x)| c.q_roots[k] > *x && *x > c.q_roots[k + 1]) {
                interlaced.fetch_add(1, Ordering::Relaxed);
            }
            props::check_interlacing_weights(c)
        }),
        run_property("pair-pinning", 100, props::pin_case(), props::check_pair_pinning),
        run_property("cauchy", 100, props::cauchy_case(), props::check_cauchy),
        run_property("pst-parity", 100, props::parity_case(), |c| {
            if props::emit_spectrum(&c)?.is_some() {
                emitted.fetch_add(1, Ordering::Relaxed);
            }
            props::check_pst_parity(c)
        }),
        run_property("creation-slope", 100, props::flank_case(), |c| {
            if props::creation_slope(&c)?.is_some() {
                slopes.fetch_add(1, Ordering::Relaxed);
            }
            props::check_creation_slope(c)
        }),
    ];
    let took = start.elapsed();
    let (emitted, slopes, interlaced) = (emitted.into_inner(), slopes.into_inner(), interlaced.into_inner());
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    // the checks are vacuous when most cases are skipped
    let exercised = emitted >= 50 && slopes >= 50 && interlaced >= 20;
    let pass = failures.is_empty() && exercised && took < Duration::from_secs(300);
    let summary = if failures.is_empty() {
        results.iter().map(|r| r.clone().unwrap()).collect::<Vec<_>>().join(", ")
    } else {
        failures.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("; ")
    };
    Outcome::new(pass, format!("{summary}; spectra emitted {emitted}, slopes fitted {slopes}, interlaced cases {interlaced}, {took:.1?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("Fig. 5 reproduction", criterion_1),
        ("Fig. 6 reproduction", criterion_2),
        ("Fig. 3 encoding vector", criterion_3),
        ("uniform chain N = 42", criterion_4),
        ("random chains", criterion_5),
        ("dark state rejection", criterion_6),
        ("property suites", criterion_7),
    ];
    let mut unexpected = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && o.documented { " [documented shortfall]" } else { "" };
        println!("criterion {} {verdict} {title}: {}{note}", k + 1, o.detail);
        if !o.pass && !o.documented {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed outside the documented shortfalls");
        std::process::exit(1);
    }
}
