//! Property checks shared by the proptest suite and the acceptance target.
//! Every check takes a generated case and returns a `TestCaseError` on breach.

#![allow(dead_code)]

use encoded_transfer::exact::ExactReal;
use encoded_transfer::inverse::{chain_polynomials, reconstruct_tridiagonal, solve_points, weights_of, InterpolationPoint, JMode, TridiagonalChain};
use encoded_transfer::linalg::Mat;
use encoded_transfer::network::{symmetrize, SpinNetwork, Subspace, SupportedBlock};
use encoded_transfer::selector::{pair_pinning_select, PinningMode, TargetSpectrum};
use encoded_transfer::spectral::{check_strict_interlacing, isolate_real_roots, verify_identity_eq1, MonicPolynomial};
use encoded_transfer::transfer::{cauchy_determinant, direct_cauchy_determinant, flanking_creation_error};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rug::{Float, Rational};

pub const PREC: u32 = 256;

pub fn f(x: f64) -> Float {
    Float::with_val(PREC, x)
}

pub fn tol(e: i32) -> Float {
    encoded_transfer::mp::pow10(PREC, e)
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn min_gap(v: &[f64]) -> f64 {
    let s = sorted_desc(v.to_vec());
    s.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min)
}

fn symmetric(n: usize, upper: &[f64]) -> Mat {
    let mut m = Mat::zeros(n, n, PREC);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = f(upper[k]);
            m[(j, i)] = f(upper[k]);
            k += 1;
        }
    }
    m
}

fn tridiagonal(fields: &[f64], couplings: &[f64]) -> Mat {
    let d: Vec<Float> = fields.iter().map(|&x| f(x)).collect();
    let o: Vec<Float> = couplings.iter().map(|&x| f(x)).collect();
    Mat::tridiagonal(&d, &o, PREC)
}

fn block(fields: &[f64], couplings: &[f64]) -> Result<SupportedBlock, TestCaseError> {
    SupportedBlock::from_tridiagonal(tridiagonal(fields, couplings), &tol(-30)).map_err(|e| TestCaseError::fail(e.to_string()))
}

fn fail(e: impl ToString) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

// Q_H = Q_A Q_C - J^2 P_A P_C

#[derive(Clone, Debug)]
pub struct Eq1Case {
    pub na: usize,
    pub nc: usize,
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub j: f64,
    pub z: Vec<f64>,
}

pub fn eq1_case() -> impl Strategy<Value = Eq1Case> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(na, nc)| {
        (
            prop::collection::vec(-1.0f64..1.0, na * (na + 1) / 2),
            prop::collection::vec(-1.0f64..1.0, nc * (nc + 1) / 2),
            0.0f64..2.0,
            prop::collection::vec(-3.0f64..3.0, 10),
        )
            .prop_map(move |(a, c, j, z)| Eq1Case { na, nc, a, c, j, z })
    })
}

pub fn check_eq1(case: Eq1Case) -> Result<(), TestCaseError> {
    let a = symmetric(case.na, &case.a);
    let c = symmetric(case.nc, &case.c);
    let z: Vec<Float> = case.z.iter().map(|&x| f(x)).collect();
    let r = verify_identity_eq1(&a, &c, &f(case.j), &z).map_err(fail)?;
    prop_assert!(r < tol(-25), "residual {}", r.to_f64());
    Ok(())
}

// char / principal polynomials -> weights -> chain

#[derive(Clone, Debug)]
pub struct ChainCase {
    pub couplings: Vec<f64>,
    pub fields: Vec<f64>,
}

pub fn chain_case() -> impl Strategy<Value = ChainCase> {
    (1usize..=10).prop_flat_map(|n| {
        (prop::collection::vec(0.1f64..2.0, n - 1), prop::collection::vec(-1.0f64..1.0, n))
            .prop_map(|(couplings, fields)| ChainCase { couplings, fields })
    })
}

pub fn check_round_trip(case: ChainCase) -> Result<(), TestCaseError> {
    let chain = TridiagonalChain { couplings: case.couplings.iter().map(|&x| f(x)).collect(), fields: case.fields.iter().map(|&x| f(x)).collect() };
    let (q, p) = chain_polynomials(&chain);
    let w = weights_of(&q, &p).map_err(fail)?;
    let back = reconstruct_tridiagonal(&w).map_err(fail)?;
    prop_assert_eq!(back.couplings.len(), chain.couplings.len());
    let floor = tol(-30);
    for (x, y) in chain.couplings.iter().chain(&chain.fields).zip(back.couplings.iter().chain(&back.fields)) {
        let err = Float::with_val(PREC, x - y).abs();
        let bound = Float::with_val(PREC, x.as_abs().clone() * tol(-15)).max(&floor);
        prop_assert!(err <= bound, "{} came back as {}", x.to_f64(), y.to_f64());
    }
    Ok(())
}

// strict interlacing of P's roots in Q's <=> positive partial fraction weights

#[derive(Clone, Debug)]
pub struct InterlaceCase {
    pub q_roots: Vec<f64>,
    pub p_roots: Vec<f64>,
}

pub fn interlace_case() -> impl Strategy<Value = InterlaceCase> {
    (1usize..=7).prop_flat_map(|n| {
        (prop::collection::vec(-3.0f64..3.0, n), prop::collection::vec(0.02f64..0.98, n - 1), prop::collection::vec(-3.0f64..3.0, n - 1), any::<bool>())
            .prop_filter("separated roots", |(q, ..)| min_gap(q) > 1e-3)
            .prop_map(|(q, t, free, interlaced)| {
                let q = sorted_desc(q);
                let p = if interlaced { q.windows(2).zip(&t).map(|(w, t)| w[1] + t * (w[0] - w[1])).collect() } else { free };
                InterlaceCase { q_roots: q, p_roots: p }
            })
    })
}

pub fn check_interlacing_weights(case: InterlaceCase) -> Result<(), TestCaseError> {
    for p in &case.p_roots {
        prop_assume!(case.q_roots.iter().all(|q| (p - q).abs() > 1e-6));
    }
    let q = MonicPolynomial::from_roots(&case.q_roots.iter().map(|&x| f(x)).collect::<Vec<_>>(), PREC);
    let p = MonicPolynomial::from_roots(&case.p_roots.iter().map(|&x| f(x)).collect::<Vec<_>>(), PREC);
    let holds = check_strict_interlacing(&q, &p).map_err(fail)?.holds;
    let positive = weights_of(&q, &p).is_ok();
    prop_assert_eq!(holds, positive, "interlacing {} but positive weights {}", holds, positive);
    Ok(())
}

// mu(lambda^sigma) = sigma eps on interleaved points puts one root of Q in each (lambda^-_i, lambda^+_i)

#[derive(Clone, Debug)]
pub struct PinCase {
    /// Descending; even positions are `lambda^+`.
    pub points: Vec<f64>,
    pub eps: f64,
}

pub fn pin_case() -> impl Strategy<Value = PinCase> {
    (1usize..=5).prop_flat_map(|n| {
        (prop::collection::vec(-3.0f64..3.0, 2 * n), 0.01f64..10.0)
            .prop_filter("separated points", |(v, _)| min_gap(v) > 1e-3)
            .prop_map(|(v, eps)| PinCase { points: sorted_desc(v), eps })
    })
}

pub fn check_pair_pinning(case: PinCase) -> Result<(), TestCaseError> {
    // mu J^2 P = Q with mu = sigma / eps means P / Q = sigma eps / J^2
    let points: Vec<InterpolationPoint> = case
        .points
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let sigma = if k % 2 == 0 { 1.0 } else { -1.0 };
            InterpolationPoint { lambda: f(x), mu: f(sigma) / f(case.eps) }
        })
        .collect();
    let r = solve_points(&points, &JMode::Unknown).map_err(fail)?;
    let iso = isolate_real_roots(&r.q);
    prop_assert_eq!(iso.nonreal, 0);
    let roots: Vec<f64> = iso.with_multiplicity().iter().map(|x| x.to_f64()).collect();
    prop_assert_eq!(roots.len(), case.points.len() / 2);
    for pair in case.points.chunks(2) {
        let inside = roots.iter().filter(|&&x| pair[1] < x && x < pair[0]).count();
        prop_assert_eq!(inside, 1, "{} roots in ({}, {})", inside, pair[1], pair[0]);
    }
    Ok(())
}

// |det 1/(x_i - y_j)| by the product formula and by elimination

#[derive(Clone, Debug)]
pub struct CauchyCase {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

pub fn cauchy_case() -> impl Strategy<Value = CauchyCase> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec(-3.0f64..3.0, 2 * n)
            .prop_filter("distinct values", |v| min_gap(v) > 1e-3)
            .prop_map(move |v| CauchyCase { x: v[..n].to_vec(), y: v[n..].to_vec() })
    })
}

pub fn check_cauchy(case: CauchyCase) -> Result<(), TestCaseError> {
    let x: Vec<Float> = case.x.iter().map(|&v| f(v)).collect();
    let y: Vec<Float> = case.y.iter().map(|&v| f(v)).collect();
    let product = cauchy_determinant(&x, &y).map_err(fail)?;
    let direct = direct_cauchy_determinant(&x, &y);
    let err = Float::with_val(PREC, &product - &direct).abs();
    prop_assert!(err <= Float::with_val(PREC, &direct * tol(-20)), "product {} direct {}", product.to_f64(), direct.to_f64());
    Ok(())
}

// every emitted target spectrum has one phase per subspace at t0, the two opposite

#[derive(Clone, Debug)]
pub enum ParityCase {
    /// Field free chain with its joining coupling, mirrored.
    Even { couplings: Vec<f64>, j_prime: f64, shrink: u32 },
    /// Two unrelated blocks with fields.
    General { plus: (Vec<f64>, Vec<f64>), minus: (Vec<f64>, Vec<f64>), shrink: u32 },
}

fn tri_case(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (prop::collection::vec(-1.0f64..1.0, n), prop::collection::vec(0.5f64..1.5, n - 1))
}

pub fn parity_case() -> impl Strategy<Value = ParityCase> {
    let even = (1usize..=8).prop_flat_map(|n| {
        (prop::collection::vec(0.5f64..1.5, n - 1), 0.5f64..1.5, 1u32..=3)
            .prop_map(|(couplings, j_prime, shrink)| ParityCase::Even { couplings, j_prime, shrink })
    });
    let general = (1usize..=5, 1usize..=5).prop_flat_map(|(a, b)| {
        (tri_case(a), tri_case(b), 1u32..=3).prop_map(|(plus, minus, shrink)| ParityCase::General { plus, minus, shrink })
    });
    prop_oneof![even, general]
}

fn rational_of(x: f64) -> ExactReal {
    ExactReal::rational(Rational::from_f64(x).unwrap())
}

pub fn emit_spectrum(case: &ParityCase) -> Result<Option<TargetSpectrum>, TestCaseError> {
    let (cp, cm, mode, shrink) = match case {
        ParityCase::Even { couplings, j_prime, shrink } => {
            let w: Vec<ExactReal> = couplings.iter().map(|&x| rational_of(x)).collect();
            let net = SpinNetwork::chain(&w).map_err(fail)?;
            let sys = symmetrize(&net, &rational_of(*j_prime), PREC).map_err(fail)?;
            let (cp, cm) = sys.reduced_blocks(&tol(-30)).map_err(fail)?;
            (cp, cm, PinningMode::Even, *shrink)
        }
        ParityCase::General { plus, minus, shrink } => (block(&plus.0, &plus.1)?, block(&minus.0, &minus.1)?, PinningMode::General, *shrink),
    };
    let shrink = Rational::from((1, 1u32 << shrink));
    Ok(pair_pinning_select(&cp, &cm, &shrink, mode).ok())
}

pub fn check_pst_parity(case: ParityCase) -> Result<(), TestCaseError> {
    let Some(spec) = emit_spectrum(&case)? else {
        return Ok(());
    };
    let mut phase: [Option<(Float, Float)>; 2] = [None, None];
    let limit = tol(-25);
    for t in &spec.targets {
        let x = Float::with_val(PREC, &t.value * &spec.t0);
        let (s, c) = x.sin_cos(Float::new(PREC));
        let slot = (t.subspace == Subspace::Minus) as usize;
        match &phase[slot] {
            None => phase[slot] = Some((c, s)),
            Some((c0, s0)) => {
                let d = Float::with_val(PREC, &c - c0).abs().max(&Float::with_val(PREC, &s - s0).abs());
                prop_assert!(d < limit, "phase spread {} within subspace", d.to_f64());
            }
        }
    }
    if let [Some((c0, s0)), Some((c1, s1))] = &phase {
        let d = Float::with_val(PREC, c0 + c1).abs().max(&Float::with_val(PREC, s0 + s1).abs());
        prop_assert!(d < limit, "subspace phases not opposite: {}", d.to_f64());
    }
    Ok(())
}

// creation error of a flanked eigenvector halves twice when eps halves

#[derive(Clone, Debug)]
pub struct FlankCase {
    pub fields: Vec<f64>,
    pub couplings: Vec<f64>,
    pub index: prop::sample::Index,
}

pub fn flank_case() -> impl Strategy<Value = FlankCase> {
    // two sites leave the error without an eps^2 term
    (3usize..=8).prop_flat_map(|n| (tri_case(n), any::<prop::sample::Index>()).prop_map(|((fields, couplings), index)| FlankCase { fields, couplings, index }))
}

pub fn creation_slope(case: &FlankCase) -> Result<Option<f64>, TestCaseError> {
    let b = block(&case.fields, &case.couplings)?;
    let eta: Vec<f64> = b.eigenvalues().iter().map(|x| x.to_f64()).collect();
    let i = case.index.index(eta.len());
    let gap = eta.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, x)| (x - eta[i]).abs()).fold(f64::INFINITY, f64::min);
    if gap < 1e-3 {
        return Ok(None);
    }
    // eigenvalues() and the decomposition inside the error share ascending order
    let eps = f(gap) >> 12;
    let e1 = flanking_creation_error(&b, i, &eps).map_err(fail)?;
    let e2 = flanking_creation_error(&b, i, &Float::with_val(PREC, &eps >> 1)).map_err(fail)?;
    Ok(Some((e1.to_f64() / e2.to_f64()).log2()))
}

pub fn check_creation_slope(case: FlankCase) -> Result<(), TestCaseError> {
    let Some(slope) = creation_slope(&case)? else {
        return Ok(());
    };
    prop_assert!((1.8..=2.2).contains(&slope), "slope {}", slope);
    Ok(())
}
