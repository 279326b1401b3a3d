use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use encoded_transfer::driver::{
    exit_code, extend, parse_rational, random_trials, verify, DesignFile, RunConfig, TargetsFile, TrialConfig, TrialRow, PRNG_NAME,
};
use encoded_transfer::exact::ExactReal;
use encoded_transfer::mp;
use encoded_transfer::network::{MirrorMode, NetworkFile};
use encoded_transfer::transfer::{assemble, state_creation_map, ghz_fidelity, RegionMode, TransferDesign};
use encoded_transfer::Result;

/// Design and check perfect encoded state transfer extensions of spin networks.
#[derive(Parser)]
#[command(name = "est", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Working precision in bits; linear solves use twice this.
    #[arg(long, default_value_t = 256)]
    precision: u32,
    /// Coupling between a network and its mirror copy.
    #[arg(long, default_value = "1")]
    jprime: String,
    /// Encoding region: auto, NA or NA+1.
    #[arg(long, default_value = "auto")]
    region: String,
    /// Mirror handling: auto (use a symmetry when present) or always (double the network).
    #[arg(long, default_value = "auto")]
    mirror: String,
    #[arg(long, default_value = "1/2")]
    shrink_start: String,
    #[arg(long, default_value = "1/64")]
    shrink_floor: String,
}

impl Common {
    fn config(&self, seed: u64, trials: usize) -> Result<RunConfig> {
        let cfg = RunConfig {
            precision_bits: self.precision,
            shrink_start: parse_rational(&self.shrink_start)?,
            shrink_floor: parse_rational(&self.shrink_floor)?,
            j_prime: ExactReal::parse(&self.jprime)?,
            region: RegionMode::parse(&self.region)?,
            mirror: match self.mirror.as_str() {
                "always" => MirrorMode::Always,
                "auto" => MirrorMode::Auto,
                other => return Err(encoded_transfer::Error::InvalidConfig(format!("unknown mirror mode {other}"))),
            },
            seed,
            trials,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Design an extension for a network file and write design.json.
    Extend {
        network: PathBuf,
        /// Explicit controlled spectrum: {"plus": [...], "minus": [...], "t0_over_pi": "p/q"}.
        #[arg(long)]
        targets: Option<PathBuf>,
        #[arg(long, default_value = "design.json")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute the invariants and the fidelity of a stored design.
    Verify { design: PathBuf },
    /// Seeded trials on random chains, written as CSV.
    RandomTrials {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Couplings per random chain; the last one joins it to its mirror and
        /// replaces --jprime.
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value = "0.9")]
        lo: String,
        #[arg(long, default_value = "1.1")]
        hi: String,
        #[arg(long, default_value = "summary.csv")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalue table of a design as CSV (value, subspace, controlled).
    Spectrum {
        design: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singular values of the state creation map of a design.
    Creation {
        design: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_extend(network: &Path, targets: Option<&Path>, out: &Path, common: &Common) -> Result<i32> {
    let cfg = common.config(0, 0)?;
    let file = NetworkFile::from_json(&read(network)?)?;
    let net = file.to_network()?;
    let targets = targets.map(|p| read(p).and_then(|t| TargetsFile::from_json(&t))).transpose()?;
    match extend(&net, &cfg, targets.as_ref()) {
        Ok(ext) => {
            let design = DesignFile::from_extension(&ext, &file, &cfg, targets.as_ref());
            fs::write(out, design.to_json()?)?;
            println!("J = {}", mp::to_decimal(&ext.j, 12));
            println!(
                "couplings (outer first) = {}",
                ext.chain.couplings.iter().map(|c| mp::to_decimal(c, 12)).collect::<Vec<_>>().join(", ")
            );
            println!("t0 = {}", mp::to_decimal(&ext.design.t0, 15));
            println!("encoding region = {} sites, {} vector(s)", ext.design.region_size, ext.design.encode.len());
            println!("fidelity = {}", mp::to_decimal(&ext.fidelity.min, 20));
            println!("min singular value = {}", mp::to_decimal(&ext.min_singular_value(), 20));
            println!("wrote {}", out.display());
            Ok(if ext.succeeded() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(exit_code(&e))
        }
    }
}

fn cmd_verify(path: &Path) -> Result<i32> {
    let file = DesignFile::from_json(&read(path)?)?;
    let report = verify(&file)?;
    let prec = 2 * file.precision_bits;
    println!("mirror symmetric: {}", report.mirror_symmetric);
    println!("targets in spectrum: {}", report.targets_found);
    println!("unitarity defect: {}", mp::to_decimal(&report.unitarity_defect, 6));
    println!("encoding leak: {}", mp::to_decimal(&report.encoding_leak, 6));
    if let Some(f) = &report.fidelity {
        println!("fidelity: {}", mp::to_decimal(&f.min, 20));
        println!("phase: {} {:+}i", mp::to_decimal(&f.phase.0, 12), f.phase.1.to_f64());
    }
    for m in &report.messages {
        println!("note: {m}");
    }
    let ok = report.passed(prec);
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { 0 } else { 1 })
}

fn rebuild(file: &DesignFile) -> Result<TransferDesign> {
    let prec = 2 * file.precision_bits;
    let net = file.network.to_network()?;
    let mirror = if file.mirror_mode.as_deref() == Some("always") { MirrorMode::Always } else { MirrorMode::Auto };
    let sys = encoded_transfer::network::symmetrize_mode(&net, &ExactReal::parse(&file.j_prime)?, mirror, prec)?;
    let (chain, j) = file.chain.to_chain(prec)?;
    let spec = file.targets.to_spectrum(prec)?;
    let region = match file.layout.as_ref().map(|l| l.region_size) {
        Some(r) if r == chain.len() => RegionMode::Chain,
        Some(r) if r == chain.len() + 1 => RegionMode::ChainPlusInput,
        _ => RegionMode::Auto,
    };
    let t0 = spec.t0.clone();
    TransferDesign::build(assemble(&chain, &sys, &j), &sys.sides, &spec, &t0, region)
}

fn cmd_spectrum(path: &Path, out: Option<&Path>) -> Result<i32> {
    let design = rebuild(&DesignFile::from_json(&read(path)?)?)?;
    let mut text = String::from("value,subspace,controlled\n");
    for e in &design.eigen {
        text += &format!("{},{},{}\n", mp::to_decimal(&e.value, 30), e.subspace.symbol(), e.controlled);
    }
    emit(out, &text)?;
    Ok(0)
}

fn cmd_creation(path: &Path, out: Option<&Path>) -> Result<i32> {
    let design = rebuild(&DesignFile::from_json(&read(path)?)?)?;
    let map = state_creation_map(&design)?;
    let report = serde_json::json!({
        "p_out": design.p_out.iter().map(|k| k + 1).collect::<Vec<_>>(),
        "p_in": design.p_in.iter().map(|k| k + 1).collect::<Vec<_>>(),
        "singular_values": map.singular_values.iter().map(|s| mp::to_decimal(s, 30)).collect::<Vec<_>>(),
        "min_singular_value": map.singular_values.last().map(|s| mp::to_decimal(s, 30)),
        "ghz_F": mp::to_decimal(&ghz_fidelity(&map.singular_values), 30),
    });
    emit(out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(0)
}

fn cmd_random_trials(trials: usize, seed: u64, n: usize, lo: &str, hi: &str, out: &Path, common: &Common) -> Result<i32> {
    let cfg = TrialConfig { run: common.config(seed, trials)?, chain_len: n, lo: parse_rational(lo)?, hi: parse_rational(hi)? };
    let rows = random_trials(&cfg)?;
    let mut text = format!("{}\n", TrialRow::HEADER);
    for r in &rows {
        text += &r.csv();
        text.push('\n');
    }
    fs::write(out, text)?;
    let meta = serde_json::json!({
        "prng": PRNG_NAME,
        "seed": seed,
        "trials": trials,
        "n": n,
        "lo": lo,
        "hi": hi,
        "precision_bits": cfg.run.precision_bits,
    });
    let meta_path = meta_path(out);
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")?;
    let ok = rows.iter().filter(|r| r.success).count();
    println!("{ok}/{} trials succeeded; wrote {} and {}", rows.len(), out.display(), meta_path.display());
    Ok(if ok == rows.len() { 0 } else { 1 })
}

/// `summary.csv` -> `summary.meta.json`.
fn meta_path(out: &Path) -> std::path::PathBuf {
    out.with_extension("meta.json")
}

fn run(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Extend { network, targets, out, common } => cmd_extend(network, targets.as_deref(), out, common),
        Command::Verify { design } => cmd_verify(design),
        Command::RandomTrials { trials, seed, n, lo, hi, out, common } => cmd_random_trials(*trials, *seed, *n, lo, hi, out, common),
        Command::Spectrum { design, out } => cmd_spectrum(design, out.as_deref()),
        Command::Creation { design, out } => cmd_creation(design, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
