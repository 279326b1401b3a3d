//! Characteristic polynomials, the response function `mu = P/Q`, sign bands
//! and interlacing checks.

pub mod poly;
pub mod roots;

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::{Assign, Float};

pub use poly::MonicPolynomial;
pub use roots::{isolate_real_roots, RealRoot, RootIsolation};

use crate::error::{Error, Result};
use crate::linalg::{determinant, sym_eigen, tridiagonalize, Mat};
use crate::mp::{self, Prec};

/// `det(z - M)`.
pub fn char_poly(m: &Mat) -> MonicPolynomial {
    assert!(m.is_square());
    let (d, e) = tridiagonalize(m);
    tridiagonal_char_poly(&d, &e, m.prec())
}

/// `det(z - M')` where `M'` drops the first row and column of `M`.
pub fn principal_char_poly(m: &Mat) -> Result<MonicPolynomial> {
    if m.rows() == 0 {
        return Err(Error::DimensionTooSmall(0));
    }
    Ok(char_poly(&m.drop_leading(1)))
}

/// Three term recurrence for the characteristic polynomial of a symmetric tridiagonal matrix.
pub fn tridiagonal_char_poly(diag: &[Float], off: &[Float], prec: Prec) -> MonicPolynomial {
    let mut prev = vec![mp::one(prec)];
    if diag.is_empty() {
        return MonicPolynomial::one(prec);
    }
    let mut cur = vec![Float::with_val(prec, -&diag[0]), mp::one(prec)];
    for k in 1..diag.len() {
        let mut next = poly::mul(&cur, &[Float::with_val(prec, -&diag[k]), mp::one(prec)]);
        let b2 = Float::with_val(prec, off[k - 1].square_ref());
        for (i, c) in prev.iter().enumerate() {
            next[i] -= Float::with_val(prec, c * &b2);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    MonicPolynomial::from_coeffs(cur).expect("monic recurrence")
}

/// Spectral measure of a symmetric matrix at its first basis vector:
/// `mu(z) = <1|(z - M)^-1|1> = sum_k w_k / (z - lambda_k)`.
#[derive(Clone, Debug)]
pub struct SpectralMeasure {
    /// Eigenvalues, ascending.
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

impl SpectralMeasure {
    pub fn of(m: &Mat) -> Result<Self> {
        let eig = sym_eigen(m)?;
        let weights = eig.vectors.iter().map(|v| Float::with_val(m.prec(), v[0].square_ref())).collect();
        Ok(SpectralMeasure { nodes: eig.values, weights })
    }

    /// Evaluates `mu(z)`. Nodes carrying weight above `tol` must not be hit.
    pub fn eval(&self, z: &Float, tol: &Float) -> Result<Float> {
        let prec = z.prec();
        let mut s = Float::new(prec);
        let mut d = Float::new(prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            d.assign(z - x);
            if d.is_zero() || (d.cmp_abs(tol) != Some(Ordering::Greater) && *w > *tol) {
                if w.is_zero() {
                    continue;
                }
                return Err(Error::PoleAt(mp::to_decimal(z, 20)));
            }
            s += Float::with_val(prec, w / &d);
        }
        Ok(s)
    }

    /// Derivative `mu'(z) = -sum w / (z - lambda)^2`.
    pub fn eval_derivative(&self, z: &Float) -> Float {
        let prec = z.prec();
        let mut s = Float::new(prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let d = Float::with_val(prec, z - x);
            s -= Float::with_val(prec, w / d.square());
        }
        s
    }
}

/// `mu(z) = <1|(z - M)^-1|1>` for a single point.
pub fn mu(m: &Mat, z: &Float) -> Result<Float> {
    let tol = Float::with_val(m.prec(), 1) >> (m.prec() / 2);
    SpectralMeasure::of(m)?.eval(z, &tol)
}

/// Which polynomial a breakpoint is a root of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSource {
    Q,
    P,
}

#[derive(Clone, Debug)]
pub struct Breakpoint {
    pub value: Float,
    pub source: RootSource,
}

/// Merged roots of `Q` and `P` in descending order. `signs[k]` is the sign of
/// `P/Q` just above `breakpoints[k]`; the last entry covers the left tail.
#[derive(Clone, Debug)]
pub struct SignBandProfile {
    pub breakpoints: Vec<Breakpoint>,
    pub signs: Vec<i8>,
}

impl SignBandProfile {
    /// Sign of `P/Q` at a point that is not a breakpoint.
    pub fn sign_at(&self, x: &Float) -> i8 {
        let k = self.breakpoints.iter().take_while(|b| b.value > *x).count();
        self.signs[k]
    }

    /// Strict sign alternation across every breakpoint, positive on the right.
    pub fn alternates(&self) -> bool {
        self.signs.first().map_or(true, |&s| s == 1) && self.signs.windows(2).all(|w| w[0] == -w[1])
    }
}

/// Sign pattern of `P/Q` on the real line. Fails if either polynomial has
/// non-real roots or a zero of `P` coincides with a zero of `Q`.
pub fn sign_bands(q: &MonicPolynomial, p: &MonicPolynomial) -> Result<SignBandProfile> {
    let prec = q.prec();
    let rp = isolate_real_roots(p);
    let rq = isolate_real_roots(q);
    if rp.nonreal + rq.nonreal > 0 {
        return Err(Error::ComplexRoots(rp.nonreal + rq.nonreal));
    }
    let mut breaks: Vec<Breakpoint> = rq.values().into_iter().map(|value| Breakpoint { value, source: RootSource::Q }).collect();
    breaks.extend(rp.values().into_iter().map(|value| Breakpoint { value, source: RootSource::P }));
    breaks.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap_or(Ordering::Equal));
    let xs: Vec<Float> = breaks.iter().rev().map(|b| b.value.clone()).collect();
    let tags: Vec<bool> = breaks.iter().rev().map(|b| b.source == RootSource::Q).collect();
    check_coincidence(&xs, &tags)?;
    let mut signs = Vec::with_capacity(breaks.len() + 1);
    for k in 0..=breaks.len() {
        let hi = if k == 0 { None } else { Some(&breaks[k - 1].value) };
        let lo = breaks.get(k).map(|b| &b.value);
        let probe = match (lo, hi) {
            (Some(a), Some(b)) => Float::with_val(prec, a + b) / 2u32,
            (None, Some(b)) => Float::with_val(prec, b - 1u32),
            (Some(a), None) => Float::with_val(prec, a + 1u32),
            (None, None) => Float::new(prec),
        };
        let v = Float::with_val(prec, p.eval(&probe) * q.eval(&probe));
        signs.push(match v.cmp0() {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        });
    }
    Ok(SignBandProfile { breakpoints: breaks, signs })
}

/// A zero of P and a zero of Q closer than `1e-10` times the local gap are coincident.
fn check_coincidence(xs: &[Float], from_q: &[bool]) -> Result<()> {
    let prec = xs.first().map_or(64, |x| x.prec());
    let n = xs.len();
    let gap = |i: usize| Float::with_val(prec, &xs[i + 1] - &xs[i]);
    let rel = mp::pow10(prec, -10);
    for i in 0..n.saturating_sub(1) {
        if from_q[i] == from_q[i + 1] {
            continue;
        }
        let d = gap(i);
        let mut local = mp::one(prec);
        if i > 0 {
            local = gap(i - 1);
        }
        if i + 2 < n {
            let g = gap(i + 1);
            if i == 0 || g > local {
                local = g;
            }
        }
        if d < Float::with_val(prec, &local * &rel) {
            return Err(Error::CoincidentRoots(mp::to_decimal(&xs[i], 20)));
        }
    }
    Ok(())
}

/// Outcome of an interlacing check; on failure `witness` is the offending
/// gap between consecutive roots of `Q` (`None` ends are infinite).
#[derive(Clone, Debug)]
pub struct Interlacing {
    pub holds: bool,
    pub witness: Option<(Option<Float>, Option<Float>)>,
}

/// `lambda_1 > gamma_1 > lambda_2 > ... > gamma_{n-1} > lambda_n` for the roots of `q` and `p`.
pub fn check_strict_interlacing(q: &MonicPolynomial, p: &MonicPolynomial) -> Result<Interlacing> {
    let rq = isolate_real_roots(q);
    let rp = isolate_real_roots(p);
    if rq.nonreal + rp.nonreal > 0 {
        return Err(Error::ComplexRoots(rq.nonreal + rp.nonreal));
    }
    Ok(interlacing_witness(&rq.with_multiplicity(), &rp.with_multiplicity()))
}

/// Finds the first gap of ascending `outer` not holding exactly one strictly
/// interior element of ascending `inner`.
pub fn interlacing_witness(outer: &[Float], inner: &[Float]) -> Interlacing {
    let n = outer.len();
    for k in 0..=n {
        let lo = if k == 0 { None } else { Some(&outer[k - 1]) };
        let hi = outer.get(k);
        let strictly_inside = inner.iter().filter(|g| lo.map_or(true, |l| *g > l) && hi.map_or(true, |h| *g < h)).count();
        let touching = inner.iter().any(|g| lo == Some(g) || hi == Some(g));
        let want = usize::from(k > 0 && k < n);
        if strictly_inside != want || touching {
            return Interlacing { holds: false, witness: Some((lo.cloned(), hi.cloned())) };
        }
    }
    Interlacing { holds: true, witness: None }
}

/// Ascending `outer` (n values) and `inner` (n - 1 values) alternate strictly.
pub fn strictly_interlaced(outer: &[Float], inner: &[Float]) -> bool {
    if outer.len() != inner.len() + 1 {
        return false;
    }
    inner.iter().enumerate().all(|(k, g)| outer[k] < *g && *g < outer[k + 1])
}

/// Joins `a` and `c` by a coupling `j` between their first basis vectors.
pub fn join(a: &Mat, c: &Mat, j: &Float) -> Mat {
    let (na, nc) = (a.rows(), c.rows());
    let prec = a.prec().max(c.prec());
    let mut h = Mat::zeros(na + nc, na + nc, prec);
    for i in 0..na {
        for k in 0..na {
            h[(i, k)].assign(&a[(i, k)]);
        }
    }
    for i in 0..nc {
        for k in 0..nc {
            h[(na + i, na + k)].assign(&c[(i, k)]);
        }
    }
    h[(0, na)].assign(j);
    h[(na, 0)].assign(j);
    h
}

/// Largest relative residual of `Q_H = Q_A Q_C - J^2 P_A P_C` over the sample
/// points, with `Q_H` evaluated as a determinant of the joined matrix.
pub fn verify_identity_eq1(a: &Mat, c: &Mat, j: &Float, samples: &[Float]) -> Result<Float> {
    let prec = a.prec().max(c.prec());
    let h = join(a, c, j);
    let qa = char_poly(a);
    let qc = char_poly(c);
    let pa = principal_char_poly(a)?;
    let pc = principal_char_poly(c)?;
    let j2 = Float::with_val(prec, j.square_ref());
    let residuals: Vec<Float> = samples
        .par_iter()
        .map(|z| {
            let mut shifted = h.clone();
            for i in 0..h.rows() {
                for k in 0..h.rows() {
                    let v = Float::with_val(prec, -&h[(i, k)]);
                    shifted[(i, k)] = v;
                }
                shifted[(i, i)] += z;
            }
            let lhs = determinant(&shifted);
            let t1 = Float::with_val(prec, qa.eval(z) * qc.eval(z));
            let t2 = Float::with_val(prec, pa.eval(z) * pc.eval(z)) * &j2;
            let rhs = Float::with_val(prec, &t1 - &t2);
            let scale = Float::with_val(prec, &*lhs.as_abs())
                .max(&*t1.as_abs())
                .max(&*t2.as_abs())
                .max(&(mp::one(prec) >> (prec / 2)));
            Float::with_val(prec, &lhs - &rhs).abs() / scale
        })
        .collect();
    Ok(residuals.into_iter().fold(Float::new(prec), |m, r| if r > m { r } else { m }))
}
