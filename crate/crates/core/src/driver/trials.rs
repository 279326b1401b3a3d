//! Seeded random chain trials. Trial `k` draws from ChaCha20 seeded with the
//! run seed on stream `k`, so results do not depend on scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use rug::Rational;

use super::{extend, exit_code, RunConfig};
use crate::error::Result;
use crate::exact::{parse_decimal, ExactReal};
use crate::mp;
use crate::network::SpinNetwork;

pub const PRNG_NAME: &str = "ChaCha20 (rand_chacha 0.3), stream = trial index, u = (next_u64 >> 11) * 2^-53";

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub run: RunConfig,
    pub chain_len: usize,
    pub lo: Rational,
    pub hi: Rational,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig { run: RunConfig::default(), chain_len: 20, lo: Rational::from((9, 10)), hi: Rational::from((11, 10)) }
    }
}

/// `chain_len` couplings `lo + (hi - lo) u`, rounded to 12 decimals. The last
/// one joins the chain to its mirror.
pub fn random_chain(cfg: &TrialConfig, trial: u64) -> Result<Vec<ExactReal>> {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.run.seed);
    rng.set_stream(trial);
    let lo = cfg.lo.to_f64();
    let span = cfg.hi.to_f64() - lo;
    (0..cfg.chain_len)
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            let text = format!("{:.12}", lo + span * u);
            let q = parse_decimal(&text).map_err(crate::error::Error::Parse)?;
            Ok(ExactReal::rational(q))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub exit_code: i32,
    pub shrink: Option<Rational>,
    pub delta: Option<String>,
    pub t0: Option<String>,
    pub fidelity: Option<String>,
    pub min_singular_value: Option<String>,
    pub ghz_f: Option<String>,
    pub n_total: Option<usize>,
}

impl TrialRow {
    pub const HEADER: &'static str = "trial,seed,success,shrink,delta,t0,fidelity,min_singular_value,ghz_f,n_total";

    pub fn csv(&self) -> String {
        let o = |x: &Option<String>| x.clone().unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.seed,
            self.success,
            self.shrink.as_ref().map(|s| s.to_string()).unwrap_or_default(),
            o(&self.delta),
            o(&self.t0),
            o(&self.fidelity),
            o(&self.min_singular_value),
            o(&self.ghz_f),
            self.n_total.map(|n| n.to_string()).unwrap_or_default()
        )
    }
}

fn run_trial(cfg: &TrialConfig, trial: usize) -> Result<TrialRow> {
    let mut couplings = random_chain(cfg, trial as u64)?;
    let mut run = cfg.run.clone();
    if let Some(j) = couplings.pop() {
        run.j_prime = j;
    }
    let net = SpinNetwork::chain(&couplings)?;
    let mut row = TrialRow {
        trial,
        seed: cfg.run.seed,
        success: false,
        exit_code: 0,
        shrink: None,
        delta: None,
        t0: None,
        fidelity: None,
        min_singular_value: None,
        ghz_f: None,
        n_total: None,
    };
    match extend(&net, &run, None) {
        Ok(ext) => {
            row.success = ext.succeeded();
            row.exit_code = if row.success { 0 } else { 1 };
            row.shrink = ext.shrink.clone();
            row.delta = Some(mp::to_decimal(&ext.targets.delta, 20));
            row.t0 = Some(mp::to_decimal(&ext.design.t0, 20));
            row.fidelity = Some(mp::to_decimal(&ext.fidelity.min, 20));
            row.min_singular_value = Some(mp::to_decimal(&ext.min_singular_value(), 20));
            row.ghz_f = Some(mp::to_decimal(&ext.ghz, 20));
            row.n_total = Some(ext.design.dim());
        }
        Err(e) => {
            log::warn!("trial {trial}: {e}");
            row.exit_code = exit_code(&e);
        }
    }
    Ok(row)
}

/// Runs the trials in parallel; rows come back in trial order.
pub fn random_trials(cfg: &TrialConfig) -> Result<Vec<TrialRow>> {
    cfg.run.validate()?;
    (0..cfg.run.trials).into_par_iter().map(|k| run_trial(cfg, k)).collect()
}
