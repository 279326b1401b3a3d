//! Recovery of the extension chain from the controlled spectrum: the linear
//! interpolation problem for `J^2 P_A / Q_A`, its certification, and the
//! Jacobi reconstruction of the chain.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::linalg::{solve_full_pivot, Mat};
use crate::mp::{self, Prec};
use crate::network::{Subspace, SupportedBlock};
use crate::selector::TargetSpectrum;
use crate::spectral::{check_strict_interlacing, isolate_real_roots, Interlacing, MonicPolynomial};

/// Whether the boundary coupling is prescribed.
#[derive(Clone, Debug)]
pub enum JMode {
    Known(Float),
    Unknown,
}

/// Shape of the linear system that produced an interpolant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveKind {
    Full,
    /// `N_A` even: `F(z) = z A(z^2) / B(z^2)`.
    HalfEven,
    /// `N_A` odd: `F(z) = A(z^2) / (z B(z^2))`.
    HalfOdd,
}

impl SolveKind {
    pub fn name(self) -> &'static str {
        match self {
            SolveKind::Full => "full",
            SolveKind::HalfEven => "half-even",
            SolveKind::HalfOdd => "half-odd",
        }
    }
}

/// `F(z) = J^2 P_A(z) / Q_A(z)` with both polynomials monic.
#[derive(Clone, Debug)]
pub struct RationalInterpolant {
    pub p: MonicPolynomial,
    pub q: MonicPolynomial,
    pub j_squared: Float,
    pub kind: SolveKind,
    /// Largest relative residual of `mu J^2 P_A - Q_A` over the targets.
    pub residual: Float,
    pub pivot_ratio: Float,
}

impl RationalInterpolant {
    pub fn n_a(&self) -> usize {
        self.q.degree()
    }

    pub fn prec(&self) -> Prec {
        self.q.prec()
    }

    /// `J`, or `None` when `J^2` is not positive.
    pub fn j(&self) -> Option<Float> {
        (self.j_squared > 0).then(|| self.j_squared.clone().sqrt())
    }

    pub fn eval(&self, z: &Float) -> Float {
        Float::with_val(self.prec(), &self.j_squared * self.p.eval(z)) / self.q.eval(z)
    }
}

/// A target with the value of `mu_{C_sigma}` there.
#[derive(Clone, Debug)]
pub struct InterpolationPoint {
    pub lambda: Float,
    pub mu: Float,
}

/// Evaluates the block measures at every target.
pub fn interpolation_data(cp: &SupportedBlock, cm: &SupportedBlock, targets: &TargetSpectrum) -> Result<Vec<InterpolationPoint>> {
    let prec = cp.matrix.prec();
    let tol = Float::with_val(prec, 1) >> (prec / 2);
    targets
        .targets
        .iter()
        .map(|t| {
            let b = if t.subspace == Subspace::Plus { cp } else { cm };
            let lambda = Float::with_val(prec, &t.value);
            match b.measure().eval(&lambda, &tol) {
                Ok(mu) => Ok(InterpolationPoint { lambda, mu }),
                Err(Error::PoleAt(s)) => Err(Error::PoleTarget(s)),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Solves the interpolation problem over all targets.
pub fn solve_interpolation(cp: &SupportedBlock, cm: &SupportedBlock, targets: &TargetSpectrum, mode: &JMode) -> Result<RationalInterpolant> {
    solve_points(&interpolation_data(cp, cm, targets)?, mode)
}

/// Solves `mu_k J^2 P_A(lambda_k) = Q_A(lambda_k)` for every point.
pub fn solve_points(points: &[InterpolationPoint], mode: &JMode) -> Result<RationalInterpolant> {
    let count = points.len();
    let n = match mode {
        JMode::Unknown if count % 2 == 0 && count > 0 => count / 2,
        JMode::Known(_) if count % 2 == 1 => (count + 1) / 2,
        _ => return Err(Error::InvalidConfig(format!("{count} targets do not fit the boundary coupling mode"))),
    };
    let prec = points[0].lambda.prec();
    let s = scale_of(points.iter().map(|p| &p.lambda), prec);
    let rows: Vec<Row> = points
        .iter()
        .map(|p| {
            let x = Float::with_val(prec, &p.lambda / &s);
            Row { alpha: Float::with_val(prec, &p.mu * &s), beta: mp::one(prec), y: x }
        })
        .collect();
    let lead = match mode {
        JMode::Known(j) => Some(Float::with_val(prec, j.square_ref()) / Float::with_val(prec, s.square_ref())),
        JMode::Unknown => None,
    };
    let (u, v, pivot_ratio) = solve_rows(&rows, n - 1, n, lead)?;
    finish(points, u, v, &s, SolveKind::Full, pivot_ratio)
}

/// Field free solve on the positive member of each `+-` target pair.
pub fn solve_field_free(cp: &SupportedBlock, cm: &SupportedBlock, targets: &TargetSpectrum) -> Result<RationalInterpolant> {
    let points = interpolation_data(cp, cm, targets)?;
    let prec = cp.matrix.prec();
    let mut positive = Vec::new();
    for (t, p) in targets.targets.iter().zip(&points) {
        if t.half_units == 0 {
            return Err(Error::ParityMismatch("target at zero".into()));
        }
        let partner = targets.targets.iter().position(|o| o.half_units == -t.half_units);
        let Some(k) = partner else {
            return Err(Error::ParityMismatch(format!("target {} has no negated partner", mp::to_decimal(&t.value, 20))));
        };
        let sum = Float::with_val(prec, &p.mu + &points[k].mu).abs();
        let size = Float::with_val(prec, p.mu.as_abs().clone() + points[k].mu.as_abs().clone());
        if sum > Float::with_val(prec, &size * mp::pow10(prec, -20)) {
            return Err(Error::ParityMismatch(format!("mu is not odd at {}", mp::to_decimal(&t.value, 20))));
        }
        if t.half_units > 0 {
            positive.push(p.clone());
        }
    }
    let n = points.len();
    if n == 0 || n % 2 != 0 {
        return Err(Error::ParityMismatch("unpaired targets".into()));
    }
    let n_a = n / 2;
    let m = n_a / 2;
    let s = scale_of(positive.iter().map(|p| &p.lambda), prec);
    let even = n_a % 2 == 0;
    let rows: Vec<Row> = positive
        .iter()
        .map(|p| {
            let x = Float::with_val(prec, &p.lambda / &s);
            let mus = Float::with_val(prec, &p.mu * &s);
            let y = Float::with_val(prec, x.square_ref());
            if even {
                Row { alpha: mus * &x, beta: mp::one(prec), y }
            } else {
                Row { alpha: mus, beta: x, y }
            }
        })
        .collect();
    let (du, dv) = if even { (m - 1, m) } else { (m, m) };
    let (u, v, pivot_ratio) = solve_rows(&rows, du, dv, None)?;
    let mut a = mp::zeros(n_a, prec);
    let mut b = mp::zeros(n_a + 1, prec);
    let (shift_a, shift_b) = if even { (1, 0) } else { (0, 1) };
    for (i, c) in u.into_iter().enumerate() {
        a[2 * i + shift_a] = c;
    }
    for (i, c) in v.into_iter().enumerate() {
        b[2 * i + shift_b] = c;
    }
    let kind = if even { SolveKind::HalfEven } else { SolveKind::HalfOdd };
    finish(&points, a, b, &s, kind, pivot_ratio)
}

fn scale_of<'a>(xs: impl Iterator<Item = &'a Float>, prec: Prec) -> Float {
    let s = mp::max_abs(prec, xs);
    if s.is_zero() {
        mp::one(prec)
    } else {
        s
    }
}

/// One equation `alpha U(y) - beta V(y) = 0`.
struct Row {
    alpha: Float,
    beta: Float,
    y: Float,
}

/// Unknowns: all coefficients of `U` (degree `du`, leading one fixed when
/// `lead` is given) and the lower coefficients of monic `V` (degree `dv`).
/// Returns `U` and `V` in ascending order, `V` including its unit leading term.
fn solve_rows(rows: &[Row], du: usize, dv: usize, lead: Option<Float>) -> Result<(Vec<Float>, Vec<Float>, Float)> {
    let prec = rows[0].y.prec();
    let nu = if lead.is_some() { du } else { du + 1 };
    let dim = nu + dv;
    if rows.len() != dim {
        return Err(Error::InvalidConfig(format!("{} equations for {} unknowns", rows.len(), dim)));
    }
    let mut a = Mat::zeros(dim, dim, prec);
    let mut rhs = Vec::with_capacity(dim);
    for (k, r) in rows.iter().enumerate() {
        let mut pw = mp::one(prec);
        let mut powers = Vec::with_capacity(du.max(dv) + 1);
        for _ in 0..=du.max(dv) {
            powers.push(pw.clone());
            pw *= &r.y;
        }
        for i in 0..nu {
            a[(k, i)].assign(&r.alpha * &powers[i]);
        }
        for i in 0..dv {
            a[(k, nu + i)].assign(-Float::with_val(prec, &r.beta * &powers[i]));
        }
        let mut b = Float::with_val(prec, &r.beta * &powers[dv]);
        if let Some(l) = &lead {
            b -= Float::with_val(prec, &r.alpha * &powers[du]) * l;
        }
        rhs.push(b);
    }
    let sol = solve_full_pivot(&a, &rhs)?;
    let mut u: Vec<Float> = sol.x[..nu].to_vec();
    if let Some(l) = lead {
        u.push(l);
    }
    let mut v: Vec<Float> = sol.x[nu..].to_vec();
    v.push(mp::one(prec));
    Ok((u, v, sol.pivot_ratio))
}

/// Undoes the scaling `x = z / s` and normalizes.
fn finish(points: &[InterpolationPoint], a: Vec<Float>, b: Vec<Float>, s: &Float, kind: SolveKind, pivot_ratio: Float) -> Result<RationalInterpolant> {
    let n = b.len() - 1;
    let prec = s.prec();
    let spow = |e: usize| Float::with_val(prec, s.pow(e as u32));
    let a: Vec<Float> = a.into_iter().enumerate().map(|(i, c)| c * spow(n + 1 - i)).collect();
    let b: Vec<Float> = b.into_iter().enumerate().map(|(i, c)| c * spow(n - i)).collect();
    let j_squared = a[n - 1].clone();
    if j_squared <= 0 {
        return Err(Error::NegativeJSquared(mp::to_decimal(&j_squared, 20)));
    }
    let p = MonicPolynomial::from_coeffs(a.iter().map(|c| Float::with_val(prec, c / &j_squared)).collect())?;
    let q = MonicPolynomial::from_coeffs(b)?;
    let mut r = RationalInterpolant { p, q, j_squared, kind, residual: Float::new(prec), pivot_ratio };
    r.residual = residual(&r, points);
    Ok(r)
}

/// Largest `|mu J^2 P - Q| / (|mu J^2 P| + |Q|)` over the points.
pub fn residual(r: &RationalInterpolant, points: &[InterpolationPoint]) -> Float {
    let prec = r.prec();
    let mut worst = Float::new(prec);
    for pt in points {
        let lhs = Float::with_val(prec, &pt.mu * &r.j_squared) * r.p.eval(&pt.lambda);
        let rhs = r.q.eval(&pt.lambda);
        let size = Float::with_val(prec, lhs.as_abs().clone() + rhs.as_abs().clone());
        if size.is_zero() {
            continue;
        }
        let rel = Float::with_val(prec, &lhs - &rhs).abs() / size;
        if rel > worst {
            worst = rel;
        }
    }
    worst
}

/// The three reconstruction conditions with their witnesses.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub real_roots: bool,
    /// Non-real roots of `P` and `Q` together.
    pub nonreal: usize,
    pub j_squared_positive: bool,
    pub j_squared: Float,
    pub interlacing: Interlacing,
}

impl Certificate {
    pub fn passes(&self) -> bool {
        self.real_roots && self.j_squared_positive && self.interlacing.holds
    }
}

pub fn certify_conditions(r: &RationalInterpolant) -> Certificate {
    let nonreal = isolate_real_roots(&r.p).nonreal + isolate_real_roots(&r.q).nonreal;
    let interlacing = if nonreal == 0 {
        check_strict_interlacing(&r.q, &r.p).unwrap_or(Interlacing { holds: false, witness: None })
    } else {
        Interlacing { holds: false, witness: None }
    };
    Certificate {
        real_roots: nonreal == 0,
        nonreal,
        j_squared_positive: r.j_squared > 0,
        j_squared: r.j_squared.clone(),
        interlacing,
    }
}

/// Partial fractions `P/Q = sum w_i / (z - lambda_i)`.
#[derive(Clone, Debug)]
pub struct SpectralWeights {
    /// Descending.
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
    pub sum: Float,
}

pub fn to_spectral_weights(r: &RationalInterpolant) -> Result<SpectralWeights> {
    weights_of(&r.q, &r.p)
}

pub fn weights_of(q: &MonicPolynomial, p: &MonicPolynomial) -> Result<SpectralWeights> {
    let prec = q.prec();
    let iso = isolate_real_roots(q);
    if iso.nonreal > 0 {
        return Err(Error::ComplexRoots(iso.nonreal));
    }
    if iso.roots.iter().any(|r| r.multiplicity > 1) {
        return Err(Error::CoincidentRoots("repeated root of Q_A".into()));
    }
    let mut nodes = iso.values();
    nodes.reverse();
    let mut weights = Vec::with_capacity(nodes.len());
    let mut sum = Float::new(prec);
    for (i, l) in nodes.iter().enumerate() {
        let mut den = mp::one(prec);
        for (j, m) in nodes.iter().enumerate() {
            if i != j {
                den *= Float::with_val(prec, l - m);
            }
        }
        let w = p.eval(l) / den;
        if w <= 0 {
            return Err(Error::NonPositiveWeight { index: i, value: mp::to_decimal(&w, 20) });
        }
        sum += &w;
        weights.push(w);
    }
    Ok(SpectralWeights { nodes, weights, sum })
}

/// A chain stored from its free end to the end joined to the central network.
#[derive(Clone, Debug)]
pub struct TridiagonalChain {
    /// `couplings[k]` joins sites `k` and `k + 1`.
    pub couplings: Vec<Float>,
    pub fields: Vec<Float>,
}

impl TridiagonalChain {
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn prec(&self) -> Prec {
        self.fields.first().map_or(mp::DEFAULT_PREC, |f| f.prec())
    }

    /// Index of the site joined to the central network.
    pub fn contact(&self) -> usize {
        self.fields.len() - 1
    }

    /// Tridiagonal matrix with the contact site first.
    pub fn contact_first(&self) -> Mat {
        let mut d = self.fields.clone();
        let mut o = self.couplings.clone();
        d.reverse();
        o.reverse();
        Mat::tridiagonal(&d, &o, self.prec())
    }

    /// Tridiagonal matrix in stored order (free end first).
    pub fn matrix(&self) -> Mat {
        Mat::tridiagonal(&self.fields, &self.couplings, self.prec())
    }
}

/// Lanczos on `diag(nodes)` from the vector of square root weights.
pub fn reconstruct_tridiagonal(w: &SpectralWeights) -> Result<TridiagonalChain> {
    let n = w.nodes.len();
    let prec = w.sum.prec();
    if n == 0 {
        return Ok(TridiagonalChain { couplings: vec![], fields: vec![] });
    }
    let scale = mp::max_abs(prec, &w.nodes).max(&mp::one(prec));
    let tol = (Float::with_val(prec, 1) >> (prec / 2)) * &scale;
    let mut v: Vec<Float> = w.weights.iter().map(|x| Float::with_val(prec, x / &w.sum).sqrt()).collect();
    let nv = mp::norm(&v);
    mp::scale(&mut v, &nv.recip());
    let mut basis: Vec<Vec<Float>> = Vec::with_capacity(n);
    let mut fields = Vec::with_capacity(n);
    let mut couplings = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let av: Vec<Float> = v.iter().zip(&w.nodes).map(|(x, l)| Float::with_val(prec, x * l)).collect();
        let alpha = mp::dot(&v, &av);
        fields.push(alpha);
        basis.push(v);
        if k + 1 == n {
            break;
        }
        let mut r = av;
        for _ in 0..2 {
            for b in &basis {
                let c = mp::dot(&r, b);
                mp::axpy(&mut r, &(-c), b);
            }
        }
        let beta = mp::norm(&r);
        if beta.partial_cmp(&tol) != Some(Ordering::Greater) {
            return Err(Error::BreakdownAtStep(k + 1));
        }
        mp::scale(&mut r, &Float::with_val(prec, beta.recip_ref()));
        couplings.push(beta);
        v = r;
    }
    fields.reverse();
    couplings.reverse();
    Ok(TridiagonalChain { couplings, fields })
}

/// `Q_A` and `P_A` of a chain with respect to its contact site.
pub fn chain_polynomials(chain: &TridiagonalChain) -> (MonicPolynomial, MonicPolynomial) {
    let m = chain.contact_first();
    let q = crate::spectral::char_poly(&m);
    let p = crate::spectral::principal_char_poly(&m).unwrap_or_else(|_| MonicPolynomial::one(chain.prec()));
    (q, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Prec = 256;

    fn f(x: f64) -> Float {
        Float::with_val(P, x)
    }

    fn poly(c: &[f64]) -> MonicPolynomial {
        MonicPolynomial::from_coeffs(c.iter().map(|&x| f(x)).collect()).unwrap()
    }

    fn interp(p: &[f64], q: &[f64]) -> RationalInterpolant {
        RationalInterpolant { p: poly(p), q: poly(q), j_squared: f(1.0), kind: SolveKind::Full, residual: f(0.0), pivot_ratio: f(1.0) }
    }

    #[test]
    fn two_point_weights() {
        let w = to_spectral_weights(&interp(&[0.0, 1.0], &[-1.0, 0.0, 1.0])).unwrap();
        assert_eq!(w.nodes.iter().map(|x| x.to_f64()).collect::<Vec<_>>(), vec![1.0, -1.0]);
        assert_eq!(w.weights.iter().map(|x| x.to_f64()).collect::<Vec<_>>(), vec![0.5, 0.5]);
        let chain = reconstruct_tridiagonal(&w).unwrap();
        assert_eq!(chain.couplings[0].to_f64(), 1.0);
        assert!(chain.fields.iter().all(|x| x.clone().abs() < 1e-70));
    }

    #[test]
    fn three_point_weights() {
        // residues of (z^2 - 1/2) / (z^3 - z)
        let w = to_spectral_weights(&interp(&[-0.5, 0.0, 1.0], &[0.0, -1.0, 0.0, 1.0])).unwrap();
        let got: Vec<f64> = w.weights.iter().map(|x| x.to_f64()).collect();
        assert_eq!(got, vec![0.25, 0.5, 0.25]);
        let chain = reconstruct_tridiagonal(&w).unwrap();
        for c in &chain.couplings {
            assert!((c.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn interlacing_failure_gives_non_positive_weight() {
        let r = interp(&[-2.0, 1.0], &[-1.0, 0.0, 1.0]);
        assert!(matches!(to_spectral_weights(&r), Err(Error::NonPositiveWeight { .. })));
        let cert = certify_conditions(&r);
        assert!(cert.real_roots && !cert.interlacing.holds);
        assert!(cert.interlacing.witness.is_some());
        let complex = interp(&[0.0, 1.0], &[1.0, 0.0, 1.0]);
        let cert = certify_conditions(&complex);
        assert!(!cert.real_roots);
        assert_eq!(cert.nonreal, 2);
    }

    #[test]
    fn single_site_extension() {
        // C = [0]: mu = 1/z. Targets flank the pole at 0.
        let pts = vec![
            InterpolationPoint { lambda: f(0.75), mu: f(1.0 / 0.75) },
            InterpolationPoint { lambda: f(-0.25), mu: f(-4.0) },
        ];
        let r = solve_points(&pts, &JMode::Unknown).unwrap();
        assert_eq!(r.n_a(), 1);
        let root = Float::with_val(P, -&r.q.coeffs()[0]).to_f64();
        assert!(root > -0.25 && root < 0.75);
        // Q_H = z (z - r) - J^2 has roots 0.75 and -0.25: r = 0.5, J^2 = 3/16
        assert!((root - 0.5).abs() < 1e-15);
        assert!((r.j_squared.to_f64() - 0.1875).abs() < 1e-15);
        assert!(r.residual < 1e-60);
    }

    #[test]
    fn known_j_mode() {
        let pts = vec![InterpolationPoint { lambda: f(0.75), mu: f(1.0 / 0.75) }];
        let r = solve_points(&pts, &JMode::Known(f(0.1875).sqrt())).unwrap();
        assert!((r.q.coeffs()[0].to_f64() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn round_trip_chain() {
        let chain = TridiagonalChain {
            couplings: vec![f(0.7), f(1.3), f(0.4)],
            fields: vec![f(0.2), f(-0.5), f(0.0), f(0.9)],
        };
        let (q, p) = chain_polynomials(&chain);
        let w = weights_of(&q, &p).unwrap();
        assert!((w.sum.to_f64() - 1.0).abs() < 1e-30);
        let back = reconstruct_tridiagonal(&w).unwrap();
        for (a, b) in back.couplings.iter().chain(&back.fields).zip(chain.couplings.iter().chain(&chain.fields)) {
            assert!(Float::with_val(P, a - b).abs() < 1e-60);
        }
    }
}
