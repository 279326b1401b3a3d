//! Exact real numbers of the form `q * sqrt(k)` with `q` rational and `k` square free.

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mp::Prec;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactReal {
    coeff: Rational,
    radicand: Integer,
}

impl ExactReal {
    pub fn zero() -> Self {
        Self::rational(Rational::new())
    }

    pub fn one() -> Self {
        Self::rational(Rational::from(1))
    }

    pub fn rational(q: Rational) -> Self {
        ExactReal { coeff: q, radicand: Integer::from(1) }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    /// `sqrt(q)` for a non-negative rational `q`.
    pub fn sqrt_of(q: &Rational) -> Result<Self> {
        if *q < 0 {
            return Err(Error::Parse(format!("square root of negative number {q}")));
        }
        // sqrt(a/b) = sqrt(a b) / b
        let (a, b) = (q.numer().clone(), q.denom().clone());
        let prod = Integer::from(&a * &b);
        let (outer, inner) = split_square(prod);
        Ok(ExactReal { coeff: Rational::from((outer, b)), radicand: inner })
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &Integer {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1 || self.is_zero()
    }

    pub fn signum(&self) -> i32 {
        self.coeff.cmp0() as i32
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prod = Integer::from(&self.radicand * &other.radicand);
        let (outer, inner) = split_square(prod);
        let coeff = Rational::from(&self.coeff * &other.coeff) * Rational::from(outer);
        ExactReal { coeff, radicand: inner }.normalized()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Parse("division by zero".into()));
        }
        // 1/(q sqrt k) = sqrt(k) / (q k)
        let coeff = Rational::from(self.coeff.recip_ref()) / Rational::from(self.radicand.clone());
        Ok(ExactReal { coeff, radicand: self.radicand.clone() })
    }

    pub fn neg(&self) -> Self {
        ExactReal { coeff: Rational::from(-&self.coeff), radicand: self.radicand.clone() }
    }

    pub fn to_float(&self, prec: Prec) -> Float {
        let r = Float::with_val(prec, &self.radicand).sqrt();
        r * &self.coeff
    }

    fn normalized(mut self) -> Self {
        if self.coeff == 0 {
            self.radicand = Integer::from(1);
        }
        self
    }

    /// Parses expressions such as `3`, `-1/2`, `0.25`, `sqrt(2)`, `2*sqrt(3)/5`
    /// or `sqrt(7)/8·3/5`. Factors are joined by `*`, `·` or `/`.
    pub fn parse(s: &str) -> Result<Self> {
        let src = s.trim();
        if src.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let (neg, body) = match src.strip_prefix('-') {
            Some(rest) => (true, rest.trim_start()),
            None => (false, src.strip_prefix('+').unwrap_or(src)),
        };
        let mut acc = ExactReal::one();
        let mut divide = false;
        let mut rest = body;
        loop {
            let (factor, tail) = parse_factor(rest).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
            acc = if divide { acc.mul(&factor.recip()?) } else { acc.mul(&factor) };
            let tail = tail.trim_start();
            if tail.is_empty() {
                break;
            }
            let mut chars = tail.chars();
            match chars.next() {
                Some('*') | Some('·') => divide = false,
                Some('/') => divide = true,
                Some(c) => return Err(Error::Parse(format!("{s:?}: unexpected {c:?}"))),
                None => unreachable!(),
            }
            rest = chars.as_str().trim_start();
        }
        Ok(if neg { acc.neg() } else { acc })
    }
}

fn parse_factor(s: &str) -> std::result::Result<(ExactReal, &str), String> {
    if let Some(inner) = s.strip_prefix("sqrt(") {
        let close = inner.find(')').ok_or("unclosed sqrt(")?;
        let arg = parse_rational_expr(&inner[..close])?;
        let v = ExactReal::sqrt_of(&arg).map_err(|e| e.to_string())?;
        return Ok((v, &inner[close + 1..]));
    }
    let end = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == 'e'
                || c == 'E'
                || ((c == '-' || c == '+') && i > 0 && matches!(s.as_bytes()[i - 1], b'e' | b'E')))
        })
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    if end == 0 {
        return Err(format!("expected a number at {s:?}"));
    }
    let q = parse_decimal(&s[..end])?;
    Ok((ExactReal::rational(q), &s[end..]))
}

/// `a` or `a/b` with decimal `a`, `b`, as used inside `sqrt(...)`.
fn parse_rational_expr(s: &str) -> std::result::Result<Rational, String> {
    match s.split_once('/') {
        Some((a, b)) => {
            let b = parse_decimal(b.trim())?;
            if b == 0 {
                return Err("division by zero".into());
            }
            Ok(parse_decimal(a.trim())? / b)
        }
        None => parse_decimal(s.trim()),
    }
}

/// Exact value of a decimal literal with optional exponent.
pub fn parse_decimal(s: &str) -> std::result::Result<Rational, String> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|e| format!("{s:?}: {e}"))?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("{s:?} is not a number"));
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("{s:?} is not a number"));
    }
    let n = Integer::from_str_radix(&digits, 10).map_err(|e| format!("{s:?}: {e}"))?;
    let scale = exp - frac_part.len() as i32;
    Ok(if scale >= 0 {
        Rational::from(n * Integer::from(Integer::u_pow_u(10, scale as u32)))
    } else {
        Rational::from((n, Integer::from(Integer::u_pow_u(10, (-scale) as u32))))
    })
}

/// Writes `n = outer^2 * inner` with `inner` square free.
fn split_square(n: Integer) -> (Integer, Integer) {
    if n == 0 {
        return (Integer::new(), Integer::from(1));
    }
    let mut inner = n;
    let mut outer = Integer::from(1);
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= inner {
        let sq = Integer::from(&p * &p);
        while inner.is_divisible(&sq) {
            inner /= &sq;
            outer *= &p;
        }
        p += 1;
    }
    (outer, inner)
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.coeff);
        }
        let num = self.coeff.numer();
        let den = self.coeff.denom();
        if *num == -1 {
            write!(f, "-")?;
        } else if *num != 1 {
            write!(f, "{num}*")?;
        }
        write!(f, "sqrt({})", self.radicand)?;
        if *den != 1 {
            write!(f, "/{den}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        let cases = [
            ("3", "3"),
            ("-1/2", "-1/2"),
            ("0.25", "1/4"),
            ("1.5e-2", "3/200"),
            ("sqrt(2)", "sqrt(2)"),
            ("sqrt(8)", "2*sqrt(2)"),
            ("2*sqrt(3)/5", "2*sqrt(3)/5"),
            ("sqrt(7)/8·3/5", "3*sqrt(7)/40"),
            ("sqrt(1/2)", "sqrt(2)/2"),
            ("sqrt(2)*sqrt(2)", "2"),
            ("1/sqrt(2)", "sqrt(2)/2"),
        ];
        for (src, want) in cases {
            assert_eq!(ExactReal::parse(src).unwrap().to_string(), want, "{src}");
        }
    }

    #[test]
    fn float_value() {
        let x = ExactReal::parse("3*sqrt(7)/10").unwrap().to_float(128);
        assert!((x.to_f64() - 3.0 * 7f64.sqrt() / 10.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_garbage() {
        assert!(ExactReal::parse("abc").is_err());
        assert!(ExactReal::parse("sqrt(-2)").is_err());
        assert!(ExactReal::parse("1/0").is_err());
    }
}
