//! Real root isolation by Sturm sequences and bisection.

use std::cmp::Ordering;

use rug::{Assign, Float};

use super::poly::{self, MonicPolynomial};
use crate::mp;

#[derive(Clone, Debug)]
pub struct RealRoot {
    pub value: Float,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct RootIsolation {
    /// Distinct real roots in ascending order.
    pub roots: Vec<RealRoot>,
    /// Degree minus the number of real roots counted with multiplicity.
    pub nonreal: usize,
}

impl RootIsolation {
    pub fn values(&self) -> Vec<Float> {
        self.roots.iter().map(|r| r.value.clone()).collect()
    }

    /// Roots repeated according to multiplicity, ascending.
    pub fn with_multiplicity(&self) -> Vec<Float> {
        self.roots.iter().flat_map(|r| std::iter::repeat(r.value.clone()).take(r.multiplicity)).collect()
    }
}

pub fn isolate_real_roots(p: &MonicPolynomial) -> RootIsolation {
    isolate(p.coeffs())
}

fn isolate(c: &[Float]) -> RootIsolation {
    let mut c: Vec<Float> = c.to_vec();
    poly::trim(&mut c);
    let deg = c.len() - 1;
    if deg == 0 {
        return RootIsolation { roots: vec![], nonreal: 0 };
    }
    let prec = c[0].prec();
    let d = poly::derivative(&c);
    let g = gcd(&c, &d);
    let squarefree = if g.len() > 1 { poly::div_rem(&c, &g).0 } else { c.clone() };
    let seq = sturm_sequence(&squarefree);
    let bound = cauchy_bound(&squarefree);
    let lo = Float::with_val(prec, -&bound);
    let mut simple = Vec::new();
    let mut stack = vec![(lo.clone(), bound.clone(), variations(&seq, &lo), variations(&seq, &bound))];
    while let Some((a, b, va, vb)) = stack.pop() {
        let count = va.saturating_sub(vb);
        if count == 0 {
            continue;
        }
        if count == 1 {
            simple.push(refine(&squarefree, a, b));
            continue;
        }
        let width = Float::with_val(prec, &b - &a);
        let scale = Float::with_val(prec, &*a.as_abs()).max(&*b.as_abs()).max(&mp::one(prec));
        if width < Float::with_val(prec, &scale * &mp::eps(prec)) * 1024u32 {
            // clustered beyond resolution; report the midpoint once per root
            let mid = Float::with_val(prec, &a + &b) / 2u32;
            for _ in 0..count {
                simple.push(mid.clone());
            }
            continue;
        }
        let mut mid = Float::with_val(prec, &a + &b) / 2u32;
        if poly::eval(&squarefree, &mid).is_zero() {
            // nudge off an exact root so sign variations are well defined
            mid += Float::with_val(prec, &width) >> 20u32;
        }
        let vm = variations(&seq, &mid);
        stack.push((mid.clone(), b, vm, vb));
        stack.push((a, mid, va, vm));
    }
    simple.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    let mut roots: Vec<RealRoot> = simple.into_iter().map(|value| RealRoot { value, multiplicity: 1 }).collect();
    if g.len() > 1 && !roots.is_empty() {
        let inner = isolate(&g);
        for r in inner.roots {
            let k = nearest(&roots, &r.value);
            roots[k].multiplicity += r.multiplicity;
        }
    }
    let real: usize = roots.iter().map(|r| r.multiplicity).sum();
    RootIsolation { roots, nonreal: deg.saturating_sub(real) }
}

fn nearest(roots: &[RealRoot], x: &Float) -> usize {
    let prec = x.prec();
    let mut best = 0;
    let mut dist = Float::with_val(prec, rug::float::Special::Infinity);
    for (k, r) in roots.iter().enumerate() {
        let d = Float::with_val(prec, &r.value - x).abs();
        if d < dist {
            dist = d;
            best = k;
        }
    }
    best
}

fn cauchy_bound(c: &[Float]) -> Float {
    let prec = c[0].prec();
    let lead = c.last().unwrap();
    let mut m = Float::new(prec);
    for x in &c[..c.len() - 1] {
        let r = Float::with_val(prec, x / lead).abs();
        if r > m {
            m = r;
        }
    }
    m + 1u32
}

/// Euclidean gcd with remainders below `2^(-3 prec / 4)` (relative) treated as zero.
fn gcd(a: &[Float], b: &[Float]) -> Vec<Float> {
    let prec = a[0].prec();
    let tol = Float::with_val(prec, 1) >> (3 * prec / 4);
    let mut x = normalized(a.to_vec());
    let mut y = normalized(b.to_vec());
    loop {
        if y.len() == 1 {
            if y[0].is_zero() {
                return x;
            }
            return vec![mp::one(prec)];
        }
        let (_, mut r) = poly::div_rem(&x, &y);
        let scale = poly::max_coeff(&y).max(&poly::max_coeff(&x));
        let small = Float::with_val(prec, &scale * &tol);
        for c in r.iter_mut() {
            if c.cmp_abs(&small) != Some(Ordering::Greater) {
                c.assign(0);
            }
        }
        poly::trim(&mut r);
        if r.len() == 1 && r[0].is_zero() {
            let lead = y.last().unwrap().clone();
            return y.into_iter().map(|c| c / &lead).collect();
        }
        x = y;
        y = normalized(r);
    }
}

fn normalized(mut c: Vec<Float>) -> Vec<Float> {
    poly::trim(&mut c);
    let m = poly::max_coeff(&c);
    if !m.is_zero() {
        for x in c.iter_mut() {
            *x /= &m;
        }
    }
    c
}

fn sturm_sequence(p: &[Float]) -> Vec<Vec<Float>> {
    let prec = p[0].prec();
    let tol = Float::with_val(prec, 1) >> (3 * prec / 4);
    let mut seq = vec![normalized(p.to_vec()), normalized(poly::derivative(p))];
    loop {
        let n = seq.len();
        if seq[n - 1].len() == 1 {
            break;
        }
        let (_, r) = poly::div_rem(&seq[n - 2], &seq[n - 1]);
        let mut r: Vec<Float> = r.into_iter().map(|x| -x).collect();
        let scale = poly::max_coeff(&seq[n - 1]).max(&poly::max_coeff(&seq[n - 2]));
        let small = Float::with_val(prec, &scale * &tol);
        if r.iter().all(|c| c.cmp_abs(&small) != Some(Ordering::Greater)) {
            break;
        }
        poly::trim(&mut r);
        seq.push(normalized(r));
    }
    seq
}

fn variations(seq: &[Vec<Float>], x: &Float) -> usize {
    let mut count = 0;
    let mut last = 0i32;
    for p in seq {
        let s = match poly::eval(p, x).cmp0() {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Bisection for the single sign change of the square free `p` in `(a, b]`.
fn refine(p: &[Float], mut a: Float, mut b: Float) -> Float {
    let prec = a.prec();
    let sb = poly::eval(p, &b).cmp0();
    if sb == Some(Ordering::Equal) {
        return b;
    }
    let mut mid = Float::new(prec);
    for _ in 0..(prec as usize + 64) {
        mid.assign(&a + &b);
        mid /= 2u32;
        if mid <= a || mid >= b {
            break;
        }
        let sm = poly::eval(p, &mid).cmp0();
        if sm == Some(Ordering::Equal) {
            return mid;
        }
        if sm == sb {
            b.assign(&mid);
        } else {
            a.assign(&mid);
        }
    }
    mid.assign(&a + &b);
    mid / 2u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::Prec;

    fn poly_from_roots(rs: &[f64], prec: Prec) -> MonicPolynomial {
        let rs: Vec<Float> = rs.iter().map(|&r| Float::with_val(prec, r)).collect();
        MonicPolynomial::from_roots(&rs, prec)
    }

    #[test]
    fn simple_roots() {
        let p = poly_from_roots(&[3.0, -1.5, 0.25, 7.0], 256);
        let iso = isolate_real_roots(&p);
        let v: Vec<f64> = iso.values().iter().map(|x| x.to_f64()).collect();
        assert_eq!(v, vec![-1.5, 0.25, 3.0, 7.0]);
        assert_eq!(iso.nonreal, 0);
    }

    #[test]
    fn multiple_roots() {
        let p = poly_from_roots(&[1.0, 1.0, -1.0, 2.0, 2.0, 2.0], 256);
        let iso = isolate_real_roots(&p);
        let m: Vec<(f64, usize)> = iso.roots.iter().map(|r| (r.value.to_f64(), r.multiplicity)).collect();
        assert_eq!(m.len(), 3);
        assert_eq!(m[0], (-1.0, 1));
        assert!((m[1].0 - 1.0).abs() < 1e-30 && m[1].1 == 2);
        assert!((m[2].0 - 2.0).abs() < 1e-20 && m[2].1 == 3);
    }

    #[test]
    fn complex_pair() {
        // (z^2 + 1)(z - 2)
        let c: Vec<Float> = [-2.0, 1.0, -2.0, 1.0].iter().map(|&x| Float::with_val(128, x)).collect();
        let iso = isolate_real_roots(&MonicPolynomial::from_coeffs(c).unwrap());
        assert_eq!(iso.roots.len(), 1);
        assert_eq!(iso.nonreal, 2);
    }

    #[test]
    fn close_roots_separated() {
        let p = poly_from_roots(&[1.0, 1.0 + 1e-12, 0.0], 256);
        let iso = isolate_real_roots(&p);
        assert_eq!(iso.roots.len(), 3);
    }
}
