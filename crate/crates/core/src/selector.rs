//! Choice of the controlled target spectrum: band feasibility, pair pinning
//! on a perfect transfer grid, rounding onto such a grid and the factor of
//! five refinement.

use std::cmp::Ordering;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::mp::{self, Prec};
use crate::network::{SupportedBlock, Subspace};

/// A target eigenvalue `half_units * delta / 2` assigned to a symmetry subspace.
#[derive(Clone, Debug)]
pub struct Target {
    pub value: Float,
    pub subspace: Subspace,
    pub half_units: i64,
}

/// Controlled spectrum with its transfer time `t0 = pi / delta`.
///
/// At `t0` a target with numerator `m` picks up the phase `exp(-i pi m / 2)`,
/// so all `+` numerators share one residue mod 4 and all `-` numerators the
/// residue two steps away.
#[derive(Clone, Debug)]
pub struct TargetSpectrum {
    /// Sorted by decreasing value.
    pub targets: Vec<Target>,
    pub delta: Float,
    pub t0: Float,
}

/// Residue classes (mod 4) of the half unit numerators in each subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    /// `+` at `(2n + 1/2) delta`, `-` at `(2n - 1/2) delta`.
    HalfOdd,
    /// `+` at `2n delta`, `-` at `(2n + 1) delta`.
    Integer,
}

impl Grid {
    pub fn residue(self, s: Subspace) -> i64 {
        match (self, s) {
            (Grid::HalfOdd, Subspace::Plus) => 1,
            (Grid::HalfOdd, Subspace::Minus) => 3,
            (Grid::Integer, Subspace::Plus) => 0,
            (Grid::Integer, Subspace::Minus) => 2,
        }
    }
}

impl TargetSpectrum {
    pub fn new(mut targets: Vec<Target>, delta: Float) -> Self {
        targets.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap_or(Ordering::Equal));
        let t0 = mp::pi(delta.prec()) / &delta;
        TargetSpectrum { targets, delta, t0 }
    }

    /// Targets given exactly as rationals together with `t0 / pi`.
    pub fn from_rationals(plus: &[Rational], minus: &[Rational], t0_over_pi: &Rational, prec: Prec) -> Result<Self> {
        if *t0_over_pi <= 0 {
            return Err(Error::InvalidConfig("transfer time must be positive".into()));
        }
        let mut targets = Vec::new();
        for (list, s) in [(plus, Subspace::Plus), (minus, Subspace::Minus)] {
            for q in list {
                let m = Rational::from(q * t0_over_pi) * 2u32;
                if *m.denom() != 1 {
                    return Err(Error::InvalidConfig(format!("target {q} is not on the grid of t0 = {t0_over_pi} pi")));
                }
                let half_units = m.numer().to_i64().ok_or_else(|| Error::InvalidConfig("target too large".into()))?;
                targets.push(Target { value: Float::with_val(prec, q), subspace: s, half_units });
            }
        }
        let delta = Float::with_val(prec, Rational::from(t0_over_pi.recip_ref()));
        let spec = TargetSpectrum::new(targets, delta);
        spec.check_parity()?;
        Ok(spec)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn prec(&self) -> Prec {
        self.delta.prec()
    }

    pub fn in_subspace(&self, s: Subspace) -> Vec<Float> {
        self.targets.iter().filter(|t| t.subspace == s).map(|t| t.value.clone()).collect()
    }

    pub fn lambda_plus(&self) -> Vec<Float> {
        self.in_subspace(Subspace::Plus)
    }

    pub fn lambda_minus(&self) -> Vec<Float> {
        self.in_subspace(Subspace::Minus)
    }

    /// `exp(-i lambda t0)` of the `+` targets as `(re, im)`; the `-` targets carry its negative.
    pub fn phase(&self) -> (i32, i32) {
        let r = self.targets.iter().find(|t| t.subspace == Subspace::Plus).map_or(0, |t| t.half_units.rem_euclid(4));
        match r {
            0 => (1, 0),
            1 => (0, -1),
            2 => (-1, 0),
            _ => (0, 1),
        }
    }

    /// All numerators of one subspace share a residue mod 4, the other
    /// subspace sits two steps away, and every value equals `m delta / 2`.
    pub fn check_parity(&self) -> Result<()> {
        let prec = self.prec();
        let tol = mp::pow10(prec, -25);
        let mut residue = [None::<i64>; 2];
        for t in &self.targets {
            let slot = (t.subspace == Subspace::Minus) as usize;
            let r = t.half_units.rem_euclid(4);
            match residue[slot] {
                None => residue[slot] = Some(r),
                Some(x) if x != r => return Err(Error::InvalidConfig("targets of one subspace have mixed parity".into())),
                _ => {}
            }
            let grid = Float::with_val(prec, &self.delta * t.half_units) / 2u32;
            if !mp::close(&grid, &t.value, &tol) {
                return Err(Error::InvalidConfig(format!("target {} is off its grid point", mp::to_decimal(&t.value, 20))));
            }
        }
        if let [Some(a), Some(b)] = residue {
            if (a - b).rem_euclid(4) != 2 {
                return Err(Error::InvalidConfig("subspaces do not carry opposite phases".into()));
            }
        }
        for w in self.targets.windows(2) {
            if w[0].value == w[1].value {
                return Err(Error::InvalidConfig("repeated target".into()));
            }
        }
        Ok(())
    }
}

/// Checks that every `lambda t0 / pi` is a half integer of the right class,
/// directly from the values and the transfer time.
pub fn pst_parity_check(spec: &TargetSpectrum, tol: &Float) -> bool {
    let prec = spec.prec();
    let pi = mp::pi(prec);
    let mut residue = [None::<i64>; 2];
    for t in &spec.targets {
        let x = Float::with_val(prec, &t.value * &spec.t0) / &pi * 2u32;
        let m = x.clone().round();
        if Float::with_val(prec, &x - &m).abs() > *tol {
            return false;
        }
        let r = m.to_integer().map(|i| i.mod_u(4) as i64).unwrap_or(-1);
        let slot = (t.subspace == Subspace::Minus) as usize;
        match residue[slot] {
            None => residue[slot] = Some(r),
            Some(x) if x != r => return false,
            _ => {}
        }
    }
    match residue {
        [Some(a), Some(b)] => (a - b).rem_euclid(4) == 2,
        _ => true,
    }
}

/// An interval between consecutive breakpoints of `mu_+` and `mu_-`.
#[derive(Clone, Debug)]
pub struct FeasibilityBand {
    pub lo: Option<Float>,
    pub hi: Option<Float>,
    pub sign_plus: i8,
    pub sign_minus: i8,
}

impl FeasibilityBand {
    /// Same sign bands accept at most one target; opposite sign bands any number.
    pub fn same_sign(&self) -> bool {
        self.sign_plus == self.sign_minus
    }

    pub fn capacity(&self) -> Option<usize> {
        if self.same_sign() {
            Some(1)
        } else {
            None
        }
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo.as_ref().map_or(true, |lo| x > lo) && self.hi.as_ref().map_or(true, |hi| x < hi)
    }
}

pub fn feasibility_bands(cp: &SupportedBlock, cm: &SupportedBlock) -> Vec<FeasibilityBand> {
    let prec = cp.matrix.prec();
    let mut breaks: Vec<Float> = Vec::new();
    for b in [cp, cm] {
        breaks.extend(b.eigenvalues().iter().cloned());
        breaks.extend(b.principal_roots().iter().cloned());
    }
    breaks.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    breaks.dedup_by(|a, b| a == b);
    let sign = |b: &SupportedBlock, z: &Float| -> i8 {
        let tol = Float::new(prec);
        match b.measure().eval(z, &tol).ok().and_then(|v| v.cmp0()) {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    };
    let mut out = Vec::with_capacity(breaks.len() + 1);
    let mut hi: Option<Float> = None;
    for k in 0..=breaks.len() {
        let lo = breaks.get(k).cloned();
        let probe = match (&lo, &hi) {
            (Some(a), Some(b)) => Float::with_val(prec, a + b) / 2u32,
            (Some(a), None) => Float::with_val(prec, a + 1u32),
            (None, Some(b)) => Float::with_val(prec, b - 1u32),
            (None, None) => Float::new(prec),
        };
        out.push(FeasibilityBand { lo: lo.clone(), hi: hi.clone(), sign_plus: sign(cp, &probe), sign_minus: sign(cm, &probe) });
        hi = lo;
    }
    out
}

/// Whether no same sign band holds more than one target.
pub fn band_capacity_respected(bands: &[FeasibilityBand], spec: &TargetSpectrum) -> bool {
    bands.iter().all(|b| !b.same_sign() || spec.targets.iter().filter(|t| b.contains(&t.value)).count() <= 1)
}

/// Signs of `mu_sigma` at each target over the descending target list
/// alternate, starting positive.
pub fn mu_signs_alternate(spec: &TargetSpectrum, cp: &SupportedBlock, cm: &SupportedBlock) -> bool {
    let tol = Float::new(spec.prec());
    let mut expect = Ordering::Greater;
    for t in &spec.targets {
        let b = if t.subspace == Subspace::Plus { cp } else { cm };
        match b.measure().eval(&t.value, &tol).ok().and_then(|v| v.cmp0()) {
            Some(o) if o == expect => expect = expect.reverse(),
            _ => return false,
        }
    }
    true
}

/// Eigenvalues common to both blocks (closer than `1e-10` of their distance to any other eigenvalue).
pub fn verify_distinct_subspace_spectra(cp: &SupportedBlock, cm: &SupportedBlock) -> Vec<Float> {
    let prec = cp.matrix.prec();
    let rel = mp::pow10(prec, -10);
    let mut all: Vec<Float> = cp.eigenvalues().iter().chain(cm.eigenvalues()).cloned().collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let mut shared = Vec::new();
    for a in cp.eigenvalues() {
        for b in cm.eigenvalues() {
            let d = Float::with_val(prec, a - b).abs();
            let mut gap = Float::with_val(prec, rug::float::Special::Infinity);
            for x in &all {
                let e = Float::with_val(prec, x - a).abs();
                if e > d && e < gap {
                    gap = e;
                }
            }
            if gap.is_infinite() {
                gap = mp::one(prec);
            }
            if d <= Float::with_val(prec, &gap * &rel) {
                shared.push(a.clone());
            }
        }
    }
    shared
}

/// How targets are laid out around the block eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinningMode {
    /// Field free and even: `Lambda- = -Lambda+`.
    Even,
    /// Field free, bipartite, with the mirror preserving colours: each subspace
    /// is symmetric under negation.
    OddFieldFree,
    General,
}

impl PinningMode {
    pub fn grid(self) -> Grid {
        match self {
            PinningMode::OddFieldFree => Grid::Integer,
            _ => Grid::HalfOdd,
        }
    }
}

/// The two ingredients of the pinning scale.
#[derive(Clone, Debug)]
pub struct PinningScale {
    /// Closest approach of a block eigenvalue to a root of its principal polynomial.
    pub delta1: Float,
    /// Half the smallest nonzero distance between eigenvalues of different blocks.
    pub delta2: Float,
}

impl PinningScale {
    pub fn of(cp: &SupportedBlock, cm: &SupportedBlock) -> Self {
        let prec = cp.matrix.prec();
        let inf = Float::with_val(prec, rug::float::Special::Infinity);
        let mut d1 = inf.clone();
        for b in [cp, cm] {
            for l in b.eigenvalues() {
                for g in b.principal_roots() {
                    let d = Float::with_val(prec, l - g).abs();
                    if d < d1 {
                        d1 = d;
                    }
                }
            }
        }
        let zero = Float::with_val(prec, 1) >> (prec / 2);
        let mut d2 = inf;
        for l in cp.eigenvalues() {
            for g in cm.eigenvalues() {
                let d = Float::with_val(prec, l - g).abs();
                if d > zero && d < d2 {
                    d2 = d;
                }
            }
        }
        d2 /= 2u32;
        PinningScale { delta1: d1, delta2: d2 }
    }

    pub fn base(&self) -> Float {
        let m = self.delta1.clone().min(&self.delta2);
        if m.is_infinite() {
            mp::one(m.prec())
        } else {
            m
        }
    }
}

/// Largest numerator `m` of residue `r` (mod 4) with `m delta / 2 < lambda`.
fn below(lambda: &Float, delta: &Float, r: i64) -> i64 {
    let prec = lambda.prec();
    let x = Float::with_val(prec, lambda * 2u32) / delta;
    let mut k = Float::with_val(prec, &x - r) / 4u32;
    k.floor_mut();
    let mut m = k.to_integer().and_then(|i| i.to_i64()).expect("grid index fits i64") * 4 + r;
    while Float::with_val(prec, delta * m) / 2u32 >= *lambda {
        m -= 4;
    }
    while Float::with_val(prec, delta * (m + 4)) / 2u32 < *lambda {
        m += 4;
    }
    m
}

fn above(lambda: &Float, delta: &Float, r: i64) -> i64 {
    let neg = Float::with_val(lambda.prec(), -lambda);
    -below(&neg, delta, (-r).rem_euclid(4))
}

fn target(delta: &Float, m: i64, s: Subspace) -> Target {
    Target { value: Float::with_val(delta.prec(), delta * m) / 2u32, subspace: s, half_units: m }
}

/// Two targets of the subspace's grid class flanking every block eigenvalue,
/// each the grid point nearest the eigenvalue on its side.
pub fn pair_pinning_select(cp: &SupportedBlock, cm: &SupportedBlock, shrink: &Rational, mode: PinningMode) -> Result<TargetSpectrum> {
    let prec = cp.matrix.prec();
    let scale = PinningScale::of(cp, cm);
    let delta = Float::with_val(prec, shrink) * scale.base();
    let grid = mode.grid();
    let zero_tol = Float::with_val(prec, 1) >> (prec / 2);
    let mut targets = Vec::new();
    let flank = |lambda: &Float, s: Subspace, targets: &mut Vec<Target>| {
        let r = grid.residue(s);
        targets.push(target(&delta, below(lambda, &delta, r), s));
        targets.push(target(&delta, above(lambda, &delta, r), s));
    };
    match mode {
        PinningMode::Even => {
            for l in cp.eigenvalues() {
                flank(l, Subspace::Plus, &mut targets);
            }
            let mirrored: Vec<Target> = targets.iter().map(|t| target(&delta, -t.half_units, Subspace::Minus)).collect();
            targets.extend(mirrored);
        }
        PinningMode::OddFieldFree => {
            for (b, s) in [(cp, Subspace::Plus), (cm, Subspace::Minus)] {
                for l in b.eigenvalues() {
                    if l.cmp_abs(&zero_tol) != Some(Ordering::Greater) {
                        let m = above(&Float::new(prec), &delta, grid.residue(s));
                        targets.push(target(&delta, m, s));
                        targets.push(target(&delta, -m, s));
                    } else if *l > 0 {
                        let mut pair = Vec::new();
                        flank(l, s, &mut pair);
                        for t in pair {
                            targets.push(target(&delta, -t.half_units, s));
                            targets.push(t);
                        }
                    }
                }
            }
        }
        PinningMode::General => {
            for (b, s) in [(cp, Subspace::Plus), (cm, Subspace::Minus)] {
                for l in b.eigenvalues() {
                    flank(l, s, &mut targets);
                }
            }
        }
    }
    let spec = TargetSpectrum::new(targets, delta);
    let expected = 2 * (cp.dim() + cm.dim());
    if spec.len() != expected {
        return Err(Error::NoParityRepresentative(format!("{} targets for {} eigenvalues", spec.len(), expected / 2)));
    }
    // windows never hold a block eigenvalue or a repeated target at this delta
    for b in [cp, cm] {
        for l in b.eigenvalues() {
            if spec.targets.iter().any(|t| t.value == *l) {
                return Err(Error::NoParityRepresentative(mp::to_decimal(l, 20)));
            }
        }
    }
    spec.check_parity()?;
    Ok(spec)
}

/// Rounds descending eigenvalues onto `epsilon` times integers of alternating
/// parity, even at the top.
pub fn round_to_pst_spectrum(eigs: &[Float], epsilon: &Float) -> Result<Vec<i64>> {
    let prec = epsilon.prec();
    let two_eps = Float::with_val(prec, epsilon * 2u32);
    for w in eigs.windows(2) {
        if Float::with_val(prec, &w[0] - &w[1]) <= two_eps {
            return Err(Error::EpsilonTooLarge(mp::to_decimal(epsilon, 20)));
        }
    }
    Ok(eigs
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let parity = (k % 2) as i64;
            let x = Float::with_val(prec, l / epsilon);
            let y = Float::with_val(prec, &x - parity) / 2u32;
            let r = y.round().to_integer().and_then(|i| i.to_i64()).expect("fits i64");
            2 * r + parity
        })
        .collect())
}

/// 5-adic valuation of a nonzero integer.
pub fn valuation5(m: i64) -> u32 {
    if m == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    let mut x = m;
    while x % 5 == 0 {
        x /= 5;
        v += 1;
    }
    v
}

/// Result of the factor of five refinement.
#[derive(Clone, Debug)]
pub struct Factor5 {
    pub spectrum: TargetSpectrum,
    /// Every numerator is divisible by `5^k`, so transfer also happens at `t0 / 5^k`.
    pub k: u32,
}

/// Replaces each target numerator by the admissible alternative with the most
/// factors of five. `choices[i]` lists the numerators admissible for target
/// `i`; all must share its residue mod 4. Ties keep the current numerator.
pub fn refine_targets_factor5(spec: &TargetSpectrum, choices: &[Vec<i64>]) -> Result<Factor5> {
    let mut targets = spec.targets.clone();
    for (t, alts) in targets.iter_mut().zip(choices) {
        let mut best = t.half_units;
        for &m in alts {
            if (m - t.half_units).rem_euclid(4) != 0 {
                return Err(Error::InvalidConfig(format!("alternative {m} changes the phase class")));
            }
            if valuation5(m) > valuation5(best) {
                best = m;
            }
        }
        *t = target(&spec.delta, best, t.subspace);
    }
    let refined = TargetSpectrum::new(targets, spec.delta.clone());
    refined.check_parity()?;
    let k = refined.targets.iter().map(|t| valuation5(t.half_units)).min().unwrap_or(0);
    Ok(Factor5 { spectrum: refined, k: if k == u32::MAX { 0 } else { k } })
}

/// `pi / Delta` with `Delta` the smallest gap between distinct eigenvalues of the two blocks.
pub fn transfer_time_bound(cp: &SupportedBlock, cm: &SupportedBlock) -> Option<Float> {
    let prec = cp.matrix.prec();
    let tol = Float::with_val(prec, 1) >> (prec / 2);
    let mut all: Vec<Float> = cp.eigenvalues().iter().chain(cm.eigenvalues()).cloned().collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let mut gap: Option<Float> = None;
    for w in all.windows(2) {
        let d = Float::with_val(prec, &w[1] - &w[0]);
        if d > tol && gap.as_ref().map_or(true, |g| d < *g) {
            gap = Some(d);
        }
    }
    gap.map(|g| mp::pi(prec) / g)
}

/// Integer `m` as a float, for reporting.
pub fn numerator_value(delta: &Float, m: i64) -> Float {
    let mut v = Float::with_val(delta.prec(), delta * m);
    v /= 2u32;
    v
}
