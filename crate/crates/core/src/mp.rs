//! Multiple precision helpers on top of MPFR floats.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::error::{Error, Result};

pub type Prec = u32;

/// Working precision used when nothing else is requested.
pub const DEFAULT_PREC: Prec = 256;

pub fn num<T>(prec: Prec, v: T) -> Float
where
    Float: Assign<T>,
{
    Float::with_val(prec, v)
}

pub fn zero(prec: Prec) -> Float {
    Float::new(prec)
}

pub fn one(prec: Prec) -> Float {
    Float::with_val(prec, 1)
}

pub fn pi(prec: Prec) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Unit roundoff 2^-prec.
pub fn eps(prec: Prec) -> Float {
    Float::with_val(prec, 1) >> prec
}

/// 10^e at the given precision.
pub fn pow10(prec: Prec, e: i32) -> Float {
    let ten = Float::with_val(prec, 10);
    ten.pow(e)
}

/// Parses a decimal, scientific or `p/q` string.
pub fn parse_real(prec: Prec, s: &str) -> Result<Float> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a = parse_real(prec, a)?;
        let b = parse_real(prec, b)?;
        if b.is_zero() {
            return Err(Error::Parse(format!("division by zero in {s:?}")));
        }
        return Ok(a / b);
    }
    let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

/// Decimal string with `digits` significant digits.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// Enough decimal digits to round-trip a float of this precision.
pub fn digits_for(prec: Prec) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

pub fn to_decimal_full(x: &Float) -> String {
    to_decimal(x, digits_for(x.prec()))
}

pub fn max_abs<'a>(prec: Prec, xs: impl IntoIterator<Item = &'a Float>) -> Float {
    let mut m = Float::new(prec);
    for x in xs {
        if x.cmp_abs(&m) == Some(std::cmp::Ordering::Greater) {
            m.assign(&*x.as_abs());
        }
    }
    m
}

pub fn dot(a: &[Float], b: &[Float]) -> Float {
    let prec = a.first().map(|x| x.prec()).unwrap_or(DEFAULT_PREC);
    let mut s = Float::new(prec);
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

pub fn norm(a: &[Float]) -> Float {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(y: &mut [Float], alpha: &Float, x: &[Float]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(x: &mut [Float], alpha: &Float) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

pub fn zeros(n: usize, prec: Prec) -> Vec<Float> {
    vec![Float::new(prec); n]
}

pub fn unit(n: usize, k: usize, prec: Prec) -> Vec<Float> {
    let mut v = zeros(n, prec);
    v[k] = one(prec);
    v
}

/// Closeness test `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: &Float, b: &Float, tol: &Float) -> bool {
    let prec = a.prec().max(b.prec());
    let d = Float::with_val(prec, a - b).abs();
    let mut s = one(prec);
    if a.cmp_abs(&s) == Some(std::cmp::Ordering::Greater) {
        s.assign(&*a.as_abs());
    }
    if b.cmp_abs(&s) == Some(std::cmp::Ordering::Greater) {
        s.assign(&*b.as_abs());
    }
    d <= s * tol
}
