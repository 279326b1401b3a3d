//! Real polynomials with ascending coefficient vectors.

use std::fmt;

use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::mp::{self, Prec};

/// Monic real polynomial `c_0 + c_1 z + ... + z^n`, coefficients ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPolynomial {
    coeffs: Vec<Float>,
}

impl MonicPolynomial {
    pub fn one(prec: Prec) -> Self {
        MonicPolynomial { coeffs: vec![mp::one(prec)] }
    }

    /// Divides through by the leading coefficient.
    pub fn from_coeffs(mut coeffs: Vec<Float>) -> Result<Self> {
        trim(&mut coeffs);
        let lead = coeffs.last().cloned().ok_or_else(|| Error::Parse("zero polynomial".into()))?;
        if lead.is_zero() {
            return Err(Error::Parse("zero polynomial".into()));
        }
        for c in coeffs.iter_mut() {
            *c /= &lead;
        }
        let n = coeffs.len();
        coeffs[n - 1].assign(1);
        Ok(MonicPolynomial { coeffs })
    }

    pub fn from_roots(roots: &[Float], prec: Prec) -> Self {
        let mut c = vec![mp::one(prec)];
        for r in roots {
            c = mul(&c, &[Float::with_val(prec, -r), mp::one(prec)]);
        }
        MonicPolynomial { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prec(&self) -> Prec {
        self.coeffs[0].prec()
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Float> {
        self.coeffs
    }

    pub fn eval(&self, z: &Float) -> Float {
        eval(&self.coeffs, z)
    }

    pub fn derivative(&self) -> Vec<Float> {
        derivative(&self.coeffs)
    }

    pub fn with_prec(&self, prec: Prec) -> Self {
        MonicPolynomial { coeffs: self.coeffs.iter().map(|c| Float::with_val(prec, c)).collect() }
    }

    /// `p(z^2)` as a polynomial in `z`.
    pub fn compose_square(&self) -> Self {
        let prec = self.prec();
        let mut out = mp::zeros(2 * self.coeffs.len() - 1, prec);
        for (k, c) in self.coeffs.iter().enumerate() {
            out[2 * k].assign(c);
        }
        MonicPolynomial { coeffs: out }
    }

    /// `z p(z)`.
    pub fn shift_up(&self) -> Self {
        let mut out = vec![Float::new(self.prec())];
        out.extend(self.coeffs.iter().cloned());
        MonicPolynomial { coeffs: out }
    }
}

impl fmt::Display for MonicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({})z^{k}", c.to_f64()))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn trim(c: &mut Vec<Float>) {
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

pub fn eval(c: &[Float], z: &Float) -> Float {
    let prec = c.first().map_or(z.prec(), |x| x.prec()).max(z.prec());
    let mut acc = Float::new(prec);
    for coef in c.iter().rev() {
        acc *= z;
        acc += coef;
    }
    acc
}

pub fn derivative(c: &[Float]) -> Vec<Float> {
    if c.len() <= 1 {
        return vec![Float::new(c.first().map_or(mp::DEFAULT_PREC, |x| x.prec()))];
    }
    c.iter().enumerate().skip(1).map(|(k, x)| Float::with_val(x.prec(), x * k as u32)).collect()
}

pub fn mul(a: &[Float], b: &[Float]) -> Vec<Float> {
    let prec = a[0].prec().max(b[0].prec());
    let mut out = mp::zeros(a.len() + b.len() - 1, prec);
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn sub(a: &[Float], b: &[Float]) -> Vec<Float> {
    let prec = a[0].prec().max(b[0].prec());
    let n = a.len().max(b.len());
    let mut out = mp::zeros(n, prec);
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

pub fn scaled(a: &[Float], s: &Float) -> Vec<Float> {
    a.iter().map(|x| Float::with_val(x.prec(), x * s)).collect()
}

/// Polynomial long division `a = q b + r`; `b` must have a nonzero leading coefficient.
pub fn div_rem(a: &[Float], b: &[Float]) -> (Vec<Float>, Vec<Float>) {
    let prec = a[0].prec().max(b[0].prec());
    let db = b.len() - 1;
    let lead = &b[db];
    let mut r: Vec<Float> = a.iter().map(|x| Float::with_val(prec, x)).collect();
    if a.len() < b.len() {
        return (vec![Float::new(prec)], r);
    }
    let mut q = mp::zeros(a.len() - db, prec);
    let mut t = Float::new(prec);
    for k in (0..q.len()).rev() {
        let c = Float::with_val(prec, &r[k + db] / lead);
        for j in 0..=db {
            t.assign(&c * &b[j]);
            r[k + j] -= &t;
        }
        r[k + db].assign(0);
        q[k] = c;
    }
    r.truncate(db.max(1));
    (q, r)
}

pub fn max_coeff(c: &[Float]) -> Float {
    mp::max_abs(c[0].prec(), c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(prec: Prec, xs: &[f64]) -> Vec<Float> {
        xs.iter().map(|&x| Float::with_val(prec, x)).collect()
    }

    #[test]
    fn roots_and_eval() {
        let p = MonicPolynomial::from_roots(&f(128, &[1.0, -2.0, 3.0]), 128);
        let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64()).collect();
        assert_eq!(c, vec![6.0, -5.0, -2.0, 1.0]);
        assert!(p.eval(&Float::with_val(128, 3)).is_zero());
        assert_eq!(p.eval(&Float::with_val(128, 0)).to_f64(), 6.0);
    }

    #[test]
    fn division() {
        let a = f(128, &[6.0, -5.0, -2.0, 1.0]);
        let b = f(128, &[-1.0, 1.0]);
        let (q, r) = div_rem(&a, &b);
        let q: Vec<f64> = q.iter().map(|x| x.to_f64()).collect();
        assert_eq!(q, vec![-6.0, -1.0, 1.0]);
        assert!(r.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn compose_square() {
        let p = MonicPolynomial::from_coeffs(f(64, &[2.0, 1.0])).unwrap();
        let c: Vec<f64> = p.compose_square().shift_up().coeffs().iter().map(|x| x.to_f64()).collect();
        assert_eq!(c, vec![0.0, 2.0, 0.0, 1.0]);
    }
}
