//! End to end pipelines behind the command line tool: extension design,
//! verification of stored designs and seeded random trials.

mod design_file;
mod trials;

pub use design_file::{DesignFile, TargetsFile, FORMAT};
pub use trials::{random_chain, random_trials, TrialConfig, TrialRow, PRNG_NAME};

use log::{debug, info};
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::inverse::{
    certify_conditions, reconstruct_tridiagonal, solve_field_free, solve_interpolation, to_spectral_weights, Certificate, JMode,
    RationalInterpolant, SpectralWeights, TridiagonalChain,
};
use crate::mp::{self, Prec};
use crate::network::{
    classify_field_free_even, support_tolerance, symmetrize_mode, Classification, MirrorMode, SpinNetwork, SupportedBlock,
    SymmetrizedSystem,
};
use crate::selector::{pair_pinning_select, pst_parity_check, verify_distinct_subspace_spectra, PinningMode, TargetSpectrum};
use crate::transfer::{
    assemble, containment_residual, encoded_transfer_fidelity, ghz_fidelity, state_creation_map, CreationMap, FidelityReport,
    RegionMode, TransferDesign,
};

/// Fidelity a design must reach to count as a success.
pub fn fidelity_gate(prec: Prec) -> Float {
    mp::one(prec) - mp::pow10(prec, -8)
}

/// Parses `p/q`, an integer or a decimal, with optional sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let x = ExactReal::parse(s)?;
    if !x.is_rational() {
        return Err(Error::Parse(format!("{s:?} is not rational")));
    }
    Ok(x.coeff().clone())
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision_bits: Prec,
    pub shrink_start: Rational,
    pub shrink_floor: Rational,
    pub j_prime: ExactReal,
    pub region: RegionMode,
    pub mirror: MirrorMode,
    pub seed: u64,
    pub trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: mp::DEFAULT_PREC,
            shrink_start: Rational::from((1, 2)),
            shrink_floor: Rational::from((1, 64)),
            j_prime: ExactReal::one(),
            region: RegionMode::Auto,
            mirror: MirrorMode::Auto,
            seed: 0,
            trials: 20,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 128 {
            return Err(Error::InvalidConfig(format!("precision {} is below 128 bits", self.precision_bits)));
        }
        if !(self.shrink_floor > 0 && self.shrink_floor <= self.shrink_start && self.shrink_start <= 1) {
            return Err(Error::InvalidConfig("shrink bounds must satisfy 0 < floor <= start <= 1".into()));
        }
        if self.j_prime.is_zero() {
            return Err(Error::InvalidConfig("J' must be nonzero".into()));
        }
        Ok(())
    }

    /// Precision of every internal computation; the interpolation system needs double the working precision.
    pub fn solve_prec(&self) -> Prec {
        2 * self.precision_bits
    }
}

/// Everything produced by a successful extension.
#[derive(Clone, Debug)]
pub struct Extension {
    pub system: SymmetrizedSystem,
    pub blocks: (SupportedBlock, SupportedBlock),
    pub classification: Classification,
    pub shared: Vec<Float>,
    pub targets: TargetSpectrum,
    pub shrink: Option<Rational>,
    pub attempts: usize,
    pub interpolant: RationalInterpolant,
    pub certificate: Certificate,
    pub weights: SpectralWeights,
    pub chain: TridiagonalChain,
    pub j: Float,
    pub design: TransferDesign,
    pub fidelity: FidelityReport,
    pub containment: Float,
    pub creation: CreationMap,
    pub ghz: Float,
}

impl Extension {
    pub fn succeeded(&self) -> bool {
        self.fidelity.min >= fidelity_gate(self.design.prec())
    }

    pub fn min_singular_value(&self) -> Float {
        self.creation.singular_values.last().cloned().unwrap_or_else(|| mp::one(self.design.prec()))
    }
}

/// Process exit status for a failed extension.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SharedEigenvalues(_) => 2,
        Error::ShrinkFloorReached => 3,
        _ => 1,
    }
}

fn pinning_mode(c: &Classification) -> PinningMode {
    match (c.field_free && c.bipartite, c.even) {
        (true, true) => PinningMode::Even,
        (true, false) => PinningMode::OddFieldFree,
        _ => PinningMode::General,
    }
}

struct Solved {
    interpolant: RationalInterpolant,
    certificate: Certificate,
    weights: SpectralWeights,
    chain: TridiagonalChain,
}

fn solve_and_reconstruct(cp: &SupportedBlock, cm: &SupportedBlock, targets: &TargetSpectrum, half: bool) -> Result<Solved> {
    let interpolant = if half {
        match solve_field_free(cp, cm, targets) {
            Err(Error::ParityMismatch(why)) => {
                debug!("half size solve unavailable ({why}); using the full system");
                solve_interpolation(cp, cm, targets, &JMode::Unknown)?
            }
            r => r?,
        }
    } else {
        solve_interpolation(cp, cm, targets, &JMode::Unknown)?
    };
    let certificate = certify_conditions(&interpolant);
    if !certificate.passes() {
        return Err(Error::CertificationFailed(format!(
            "real roots {}, J^2 > 0 {}, interlacing {}",
            certificate.real_roots, certificate.j_squared_positive, certificate.interlacing.holds
        )));
    }
    let weights = to_spectral_weights(&interpolant)?;
    let chain = reconstruct_tridiagonal(&weights)?;
    Ok(Solved { interpolant, certificate, weights, chain })
}

/// Failures that a smaller pinning scale can cure.
fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::CertificationFailed(_)
            | Error::NegativeJSquared(_)
            | Error::NonPositiveWeight { .. }
            | Error::ComplexRoots(_)
            | Error::CoincidentRoots(_)
            | Error::SingularSystem
            | Error::BreakdownAtStep(_)
            | Error::PoleTarget(_)
            | Error::NoParityRepresentative(_)
            | Error::InvalidConfig(_)
    )
}

/// Designs an extension of `net`. With `targets` the given controlled
/// spectrum is used as is; otherwise pair pinning with a shrinking scale.
pub fn extend(net: &SpinNetwork, cfg: &RunConfig, targets: Option<&TargetsFile>) -> Result<Extension> {
    cfg.validate()?;
    let prec = cfg.solve_prec();
    let system = symmetrize_mode(net, &cfg.j_prime, cfg.mirror, prec)?;
    let (cp, cm) = system.reduced_blocks(&support_tolerance(prec))?;
    let classification = classify_field_free_even(&system);
    let mode = pinning_mode(&classification);
    let half = classification.half_size_applicable();
    let shared = verify_distinct_subspace_spectra(&cp, &cm);
    info!(
        "central network: {} sites, supported blocks {} + {}, mode {:?}, {} shared eigenvalues",
        system.dim(),
        cp.dim(),
        cm.dim(),
        mode,
        shared.len()
    );
    let shared_error = || Error::SharedEigenvalues(shared.iter().map(|x| mp::to_decimal(x, 20)).collect());

    let (spec, shrink, attempts, solved) = match targets {
        Some(t) => {
            let spec = t.to_spectrum(prec)?;
            let solved = solve_and_reconstruct(&cp, &cm, &spec, half)?;
            (spec, None, 1, solved)
        }
        None => {
            let mut shrink = cfg.shrink_start.clone();
            let mut attempts = 0;
            loop {
                attempts += 1;
                let attempt = pair_pinning_select(&cp, &cm, &shrink, mode).and_then(|spec| {
                    let solved = solve_and_reconstruct(&cp, &cm, &spec, half)?;
                    Ok((spec, solved))
                });
                match attempt {
                    Ok((spec, solved)) => break (spec, Some(shrink), attempts, solved),
                    Err(e) if retryable(&e) => {
                        debug!("shrink {shrink}: {e}");
                        shrink /= 2;
                        if shrink < cfg.shrink_floor {
                            return Err(if shared.is_empty() { Error::ShrinkFloorReached } else { shared_error() });
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    };
    let tol = mp::pow10(prec, -25);
    if !pst_parity_check(&spec, &tol) {
        return Err(Error::CertificationFailed("target spectrum fails the transfer parity check".into()));
    }
    let j = solved.interpolant.j().ok_or_else(|| Error::NegativeJSquared(mp::to_decimal(&solved.interpolant.j_squared, 20)))?;
    let containment = containment_residual(&solved.chain, &j, &cp, &cm, &spec)?;
    let asm = assemble(&solved.chain, &system, &j);
    let design = TransferDesign::build(asm, &system.sides, &spec, &spec.t0, cfg.region)?;
    let fidelity = encoded_transfer_fidelity(&design);
    let creation = state_creation_map(&design)?;
    let ghz = ghz_fidelity(&creation.singular_values);
    info!("J = {}, fidelity {}", mp::to_decimal(&j, 12), mp::to_decimal(&fidelity.min, 20));
    Ok(Extension {
        system,
        blocks: (cp, cm),
        classification,
        shared,
        targets: spec,
        shrink,
        attempts,
        interpolant: solved.interpolant,
        certificate: solved.certificate,
        weights: solved.weights,
        chain: solved.chain,
        j,
        design,
        fidelity,
        containment,
        creation,
        ghz,
    })
}

/// Outcome of re-checking a stored design.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub mirror_symmetric: bool,
    pub targets_found: bool,
    pub unitarity_defect: Float,
    pub encoding_leak: Float,
    pub fidelity: Option<FidelityReport>,
    pub messages: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self, prec: Prec) -> bool {
        let tiny = mp::pow10(prec, -20);
        self.mirror_symmetric
            && self.targets_found
            && self.unitarity_defect < tiny
            && self.encoding_leak < tiny
            && self.fidelity.as_ref().map_or(false, |f| f.min >= fidelity_gate(prec))
    }
}

/// Rebuilds the Hamiltonian from the stored network, chain and targets and
/// recomputes every invariant and the transfer fidelity.
pub fn verify(file: &DesignFile) -> Result<VerifyReport> {
    let prec = 2 * file.precision_bits;
    let net = file.network.to_network()?;
    let mirror = match file.mirror_mode.as_deref() {
        Some("always") => MirrorMode::Always,
        _ => MirrorMode::Auto,
    };
    let j_prime = ExactReal::parse(&file.j_prime)?;
    let system = symmetrize_mode(&net, &j_prime, mirror, prec)?;
    let (chain, j) = file.chain.to_chain(prec)?;
    let spec = file.targets.to_spectrum(prec)?;
    let t0 = match &file.t0 {
        Some(s) => mp::parse_real(prec, s)?,
        None => spec.t0.clone(),
    };
    let asm = assemble(&chain, &system, &j);
    let mirror_symmetric = asm.mirror_symmetric();
    let region = match file.layout.as_ref().map(|l| l.region_size) {
        Some(r) if r == chain.len() => RegionMode::Chain,
        Some(r) if r == chain.len() + 1 => RegionMode::ChainPlusInput,
        _ => RegionMode::Auto,
    };
    let mut messages = Vec::new();
    let mut report = VerifyReport {
        mirror_symmetric,
        targets_found: false,
        unitarity_defect: Float::new(prec),
        encoding_leak: Float::new(prec),
        fidelity: None,
        messages: vec![],
    };
    match TransferDesign::build(asm, &system.sides, &spec, &t0, region) {
        Ok(mut design) => {
            report.targets_found = true;
            if let Some(stored) = file.encoding.as_ref().filter(|e| !e.vectors.is_empty()) {
                let vectors = stored.to_vectors(prec)?;
                if vectors.iter().all(|v| v.len() == design.region_size) {
                    design.encode = vectors;
                } else {
                    messages.push("stored encoding vectors do not match the region; recomputed".into());
                }
            }
            report.unitarity_defect = design.unitarity_defect();
            report.encoding_leak = design.encoding_leak();
            report.fidelity = Some(encoded_transfer_fidelity(&design));
        }
        Err(e) => messages.push(e.to_string()),
    }
    if !mirror_symmetric {
        messages.push("assembled Hamiltonian is not mirror symmetric".into());
    }
    report.messages = messages;
    Ok(report)
}
