//! Symmetric eigensolver: Householder reduction to tridiagonal form followed
//! by implicit QL iterations with Wilkinson-type shifts.

use std::cmp::Ordering;

use rug::{Assign, Float};

use super::Mat;
use crate::error::{Error, Result};
use crate::mp;

/// Eigenvalues in ascending order; `vectors[k]` is the unit eigenvector of `values[k]`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<Float>,
    pub vectors: Vec<Vec<Float>>,
}

pub fn sym_eigen(a: &Mat) -> Result<SymEigen> {
    assert!(a.is_square());
    let n = a.rows();
    let prec = a.prec();
    if n == 0 {
        return Ok(SymEigen { values: vec![], vectors: vec![] });
    }
    let mut z = a.clone();
    let mut d = mp::zeros(n, prec);
    let mut e = mp::zeros(n, prec);
    tred2(&mut z, &mut d, &mut e);
    // rows of zt are the columns of the accumulated transform
    let mut zt: Vec<Vec<Float>> = (0..n).map(|j| z.col(j)).collect();
    tqli(&mut d, &mut e, Some(&mut zt), a.max_abs())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(Ordering::Equal));
    let values = order.iter().map(|&i| d[i].clone()).collect();
    let vectors = order.into_iter().map(|i| std::mem::take(&mut zt[i])).collect();
    Ok(SymEigen { values, vectors })
}

/// Householder reduction of a symmetric matrix: returns the diagonal and the
/// off diagonal (length n-1) of a similar tridiagonal matrix.
pub fn tridiagonalize(a: &Mat) -> (Vec<Float>, Vec<Float>) {
    let n = a.rows();
    let prec = a.prec();
    if n == 0 {
        return (vec![], vec![]);
    }
    let mut z = a.clone();
    let mut d = mp::zeros(n, prec);
    let mut e = mp::zeros(n, prec);
    tred2(&mut z, &mut d, &mut e);
    e.remove(0);
    (d, e)
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal `diag` and off diagonal `off`.
pub fn tridiagonal_eigenvalues(diag: &[Float], off: &[Float]) -> Result<Vec<Float>> {
    let n = diag.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let prec = diag[0].prec();
    let mut d: Vec<Float> = diag.iter().map(|x| Float::with_val(prec, x)).collect();
    // tqli expects e[i] to hold the coupling between i-1 and i
    let mut e = mp::zeros(n, prec);
    for i in 1..n {
        e[i] = Float::with_val(prec, &off[i - 1]);
    }
    let scale = mp::max_abs(prec, d.iter().chain(e.iter()));
    tqli(&mut d, &mut e, None, scale)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(d)
}

fn tred2(a: &mut Mat, d: &mut [Float], e: &mut [Float]) {
    let n = a.rows();
    let prec = a.prec();
    let mut f = Float::new(prec);
    let mut g = Float::new(prec);
    let mut h = Float::new(prec);
    let mut hh = Float::new(prec);
    let mut scale = Float::new(prec);
    let mut t = Float::new(prec);
    for i in (1..n).rev() {
        let l = i - 1;
        h.assign(0);
        scale.assign(0);
        if l > 0 {
            for k in 0..=l {
                scale += &*a[(i, k)].as_abs();
            }
            if scale.is_zero() {
                e[i].assign(&a[(i, l)]);
            } else {
                for k in 0..=l {
                    a[(i, k)] /= &scale;
                    h += &a[(i, k)] * &a[(i, k)];
                }
                f.assign(&a[(i, l)]);
                g.assign(h.sqrt_ref());
                if f >= 0 {
                    g = -g;
                }
                e[i].assign(&scale * &g);
                h -= &f * &g;
                t.assign(&f - &g);
                a[(i, l)].assign(&t);
                f.assign(0);
                for j in 0..=l {
                    t.assign(&a[(i, j)] / &h);
                    a[(j, i)].assign(&t);
                    g.assign(0);
                    for k in 0..=j {
                        g += &a[(j, k)] * &a[(i, k)];
                    }
                    for k in j + 1..=l {
                        g += &a[(k, j)] * &a[(i, k)];
                    }
                    e[j].assign(&g / &h);
                    f += &e[j] * &a[(i, j)];
                }
                t.assign(&h + &h);
                hh.assign(&f / &t);
                for j in 0..=l {
                    f.assign(&a[(i, j)]);
                    g.assign(&hh * &f);
                    g = Float::with_val(prec, &e[j] - &g);
                    e[j].assign(&g);
                    for k in 0..=j {
                        t.assign(&f * &e[k]);
                        t += &g * &a[(i, k)];
                        a[(j, k)] -= &t;
                    }
                }
            }
        } else {
            e[i].assign(&a[(i, l)]);
        }
        d[i].assign(&h);
    }
    d[0].assign(0);
    e[0].assign(0);
    for i in 0..n {
        if !d[i].is_zero() {
            for j in 0..i {
                g.assign(0);
                for k in 0..i {
                    g += &a[(i, k)] * &a[(k, j)];
                }
                for k in 0..i {
                    t.assign(&g * &a[(k, i)]);
                    a[(k, j)] -= &t;
                }
            }
        }
        d[i].assign(&a[(i, i)]);
        a[(i, i)].assign(1);
        for j in 0..i {
            a[(j, i)].assign(0);
            a[(i, j)].assign(0);
        }
    }
}

/// Implicit QL on the tridiagonal (d, e), where e[i] couples i-1 and i.
/// `zt` holds eigenvector rows to be rotated alongside.
fn tqli(d: &mut [Float], e: &mut [Float], mut zt: Option<&mut Vec<Vec<Float>>>, scale: Float) -> Result<()> {
    let n = d.len();
    let prec = d[0].prec();
    for i in 1..n {
        let v = std::mem::replace(&mut e[i], Float::new(prec));
        e[i - 1] = v;
    }
    e[n - 1].assign(0);
    let eps = mp::eps(prec);
    let floor = Float::with_val(prec, &eps * &scale) * &eps;
    let mut f = Float::new(prec);
    let mut g = Float::new(prec);
    let mut r = Float::new(prec);
    let mut s = Float::new(prec);
    let mut c = Float::new(prec);
    let mut p = Float::new(prec);
    let mut b = Float::new(prec);
    let mut dd = Float::new(prec);
    let mut t1 = Float::new(prec);
    let mut t2 = Float::new(prec);
    let max_iter = 60 + prec as usize / 8;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                dd.assign(&*d[m].as_abs());
                dd += &*d[m + 1].as_abs();
                t1.assign(&eps * &dd);
                if e[m].cmp_abs(&t1) != Some(Ordering::Greater) || e[m].cmp_abs(&floor) != Some(Ordering::Greater) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > max_iter {
                return Err(Error::NoConvergence);
            }
            g.assign(&d[l + 1] - &d[l]);
            t1.assign(&e[l] * 2u32);
            g /= &t1;
            r.assign(g.hypot_ref(&mp::one(prec)));
            // g = d[m] - d[l] + e[l] / (g + sign(r, g))
            if g >= 0 {
                t1.assign(&g + &r);
            } else {
                t1.assign(&g - &r);
            }
            t2.assign(&e[l] / &t1);
            g.assign(&d[m] - &d[l]);
            g += &t2;
            s.assign(1);
            c.assign(1);
            p.assign(0);
            let mut early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                f.assign(&s * &e[i]);
                b.assign(&c * &e[i]);
                r.assign(f.hypot_ref(&g));
                e[i + 1].assign(&r);
                if r.is_zero() {
                    d[i + 1] -= &p;
                    e[m].assign(0);
                    early = true;
                    break;
                }
                s.assign(&f / &r);
                c.assign(&g / &r);
                g.assign(&d[i + 1] - &p);
                r.assign(&d[i] - &g);
                r *= &s;
                t1.assign(&c * &b);
                t1 *= 2u32;
                r += &t1;
                p.assign(&s * &r);
                d[i + 1].assign(&g + &p);
                g.assign(&c * &r);
                g -= &b;
                if let Some(zt) = zt.as_deref_mut() {
                    let (lo, hi) = zt.split_at_mut(i + 1);
                    let zi = &mut lo[i];
                    let zi1 = &mut hi[0];
                    for k in 0..zi.len() {
                        // z[k][i+1] = s z[k][i] + c f ; z[k][i] = c z[k][i] - s f
                        t1.assign(&s * &zi[k]);
                        t1 += &c * &zi1[k];
                        t2.assign(&c * &zi[k]);
                        t2 -= &s * &zi1[k];
                        zi1[k].assign(&t1);
                        zi[k].assign(&t2);
                    }
                }
            }
            if early {
                continue;
            }
            d[l] -= &p;
            e[l].assign(&g);
            e[m].assign(0);
        }
    }
    Ok(())
}
