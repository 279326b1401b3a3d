//! Gaussian elimination.

use std::cmp::Ordering;

use rug::{Assign, Float};

use super::Mat;
use crate::error::{Error, Result};
use crate::mp;

#[derive(Clone, Debug)]
pub struct FullPivotSolve {
    pub x: Vec<Float>,
    /// Smallest pivot magnitude relative to the largest.
    pub pivot_ratio: Float,
}

/// Solves `a x = rhs` with full pivoting. Fails with `SingularSystem` when a
/// pivot falls below `2^(-prec/2)` times the largest one.
pub fn solve_full_pivot(a: &Mat, rhs: &[Float]) -> Result<FullPivotSolve> {
    let n = a.rows();
    assert!(a.is_square() && rhs.len() == n);
    let prec = a.prec();
    let mut m = a.clone();
    let mut b: Vec<Float> = rhs.iter().map(|x| Float::with_val(prec, x)).collect();
    let mut colperm: Vec<usize> = (0..n).collect();
    let mut first = Float::new(prec);
    let mut smallest = Float::with_val(prec, rug::float::Special::Infinity);
    let threshold = Float::with_val(prec, 1) >> (prec / 2);
    let mut t = Float::new(prec);
    for k in 0..n {
        let (mut pi, mut pj) = (k, k);
        let mut best = Float::new(prec);
        for i in k..n {
            for j in k..n {
                if m[(i, j)].cmp_abs(&best) == Some(Ordering::Greater) {
                    best.assign(&*m[(i, j)].as_abs());
                    pi = i;
                    pj = j;
                }
            }
        }
        if k == 0 {
            first.assign(&best);
            if first.is_zero() {
                return Err(Error::SingularSystem);
            }
        }
        let ratio = Float::with_val(prec, &best / &first);
        if ratio < threshold {
            return Err(Error::SingularSystem);
        }
        if ratio < smallest {
            smallest = ratio;
        }
        if pi != k {
            for j in 0..n {
                let (x, y) = (k * n + j, pi * n + j);
                m.data.swap(x, y);
            }
            b.swap(k, pi);
        }
        if pj != k {
            for i in 0..n {
                let (x, y) = (i * n + k, i * n + pj);
                m.data.swap(x, y);
            }
            colperm.swap(k, pj);
        }
        let pivot = m[(k, k)].clone();
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let factor = Float::with_val(prec, &m[(i, k)] / &pivot);
            for j in k + 1..n {
                t.assign(&factor * &m[(k, j)]);
                m[(i, j)] -= &t;
            }
            m[(i, k)].assign(0);
            t.assign(&factor * &b[k]);
            b[i] -= &t;
        }
    }
    let mut y = mp::zeros(n, prec);
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in i + 1..n {
            s -= &m[(i, j)] * &y[j];
        }
        y[i] = s / &m[(i, i)];
    }
    let mut x = mp::zeros(n, prec);
    for (k, &c) in colperm.iter().enumerate() {
        x[c] = y[k].clone();
    }
    Ok(FullPivotSolve { x, pivot_ratio: smallest })
}

/// Determinant by elimination with partial pivoting.
pub fn determinant(a: &Mat) -> Float {
    let n = a.rows();
    assert!(a.is_square());
    let prec = a.prec();
    let mut m = a.clone();
    let mut det = mp::one(prec);
    let mut t = Float::new(prec);
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if m[(i, k)].cmp_abs(&m[(p, k)]) == Some(Ordering::Greater) {
                p = i;
            }
        }
        if m[(p, k)].is_zero() {
            return Float::new(prec);
        }
        if p != k {
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = m[(k, k)].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let factor = Float::with_val(prec, &m[(i, k)] / &pivot);
            for j in k + 1..n {
                t.assign(&factor * &m[(k, j)]);
                m[(i, j)] -= &t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let prec = 128;
        let a = Mat::from_f64(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]], prec);
        let x_true: Vec<Float> = [1.0, -2.0, 0.5].iter().map(|&v| Float::with_val(prec, v)).collect();
        let rhs = a.mul_vec(&x_true);
        let sol = solve_full_pivot(&a, &rhs).unwrap();
        for (x, y) in sol.x.iter().zip(&x_true) {
            assert!(Float::with_val(prec, x - y).abs() < 1e-35);
        }
    }

    #[test]
    fn singular_detected() {
        let a = Mat::from_f64(&[&[1.0, 2.0], &[2.0, 4.0]], 128);
        let rhs = vec![Float::with_val(128, 1); 2];
        assert!(matches!(solve_full_pivot(&a, &rhs), Err(Error::SingularSystem)));
        assert!(determinant(&a).is_zero());
    }

    #[test]
    fn determinant_value() {
        let a = Mat::from_f64(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]], 128);
        // 0*(1) - 2*(1) + 1*(-3) = -5
        assert_eq!(determinant(&a).to_f64(), -5.0);
    }
}
