//! The assembled Hamiltonian, encoding vectors, transfer fidelity and the
//! state creation analysis.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::inverse::{chain_polynomials, TridiagonalChain};
use crate::linalg::{determinant, sym_eigen, Mat};
use crate::mp::{self, Prec};
use crate::network::{Side, Subspace, SupportedBlock, SymmetrizedSystem, SymmetryBasis};
use crate::selector::TargetSpectrum;
use crate::spectral::{char_poly, principal_char_poly};

/// `H` with its mirror permutation. Layout: left chain from its free end,
/// the central network in its own order, right chain ending at its free end.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub h: Mat,
    pub mirror: Vec<usize>,
    pub n_a: usize,
    pub n_c: usize,
}

impl Assembled {
    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    /// Index of a central vertex.
    pub fn centre(&self, k: usize) -> usize {
        self.n_a + k
    }

    /// `S H S == H` entrywise.
    pub fn mirror_symmetric(&self) -> bool {
        let s = &self.mirror;
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.h[(i, j)] == self.h[(s[i], s[j])]))
    }
}

pub fn assemble(chain: &TridiagonalChain, sys: &SymmetrizedSystem, j: &Float) -> Assembled {
    let n_a = chain.len();
    let n_c = sys.dim();
    let n = 2 * n_a + n_c;
    let prec = sys.prec();
    let mut h = Mat::zeros(n, n, prec);
    let right = |k: usize| n - 1 - k;
    for a in 0..n_c {
        for b in 0..n_c {
            h[(n_a + a, n_a + b)].assign(&sys.c[(a, b)]);
        }
    }
    for k in 0..n_a {
        h[(k, k)].assign(&chain.fields[k]);
        h[(right(k), right(k))].assign(&chain.fields[k]);
    }
    for (k, c) in chain.couplings.iter().enumerate() {
        for (x, y) in [(k, k + 1), (right(k), right(k + 1))] {
            h[(x, y)].assign(c);
            h[(y, x)].assign(c);
        }
    }
    if n_a > 0 {
        let input = n_a;
        let image = n_a + sys.mirror[0];
        for (x, y) in [(n_a - 1, input), (right(n_a - 1), image)] {
            h[(x, y)].assign(j);
            h[(y, x)].assign(j);
        }
    }
    let mut mirror: Vec<usize> = (0..n).collect();
    for k in 0..n_a {
        mirror[k] = right(k);
        mirror[right(k)] = k;
    }
    for a in 0..n_c {
        mirror[n_a + a] = n_a + sys.mirror[a];
    }
    Assembled { h, mirror, n_a, n_c }
}

/// An eigenpair of `H` with its mirror parity.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: Float,
    pub subspace: Subspace,
    pub vector: Vec<Float>,
    pub controlled: bool,
}

/// Eigenpairs of `H`, one mirror block at a time.
pub fn mirror_eigenpairs(asm: &Assembled) -> Result<Vec<Eigenpair>> {
    let basis = SymmetryBasis::new(&asm.mirror, asm.centre(0));
    let mut out = Vec::with_capacity(asm.dim());
    for s in [Subspace::Plus, Subspace::Minus] {
        if basis.block_dim(s) == 0 {
            continue;
        }
        let eig = sym_eigen(&basis.project(&asm.h, s))?;
        for (value, v) in eig.values.into_iter().zip(eig.vectors) {
            out.push(Eigenpair { value, subspace: s, vector: basis.embed(s, &v), controlled: false });
        }
    }
    out.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap_or(Ordering::Equal));
    Ok(out)
}

/// Marks the eigenpair nearest each target (same subspace) as controlled.
/// Fails when some target has no eigenvalue within `tol`.
pub fn mark_controlled(eigs: &mut [Eigenpair], targets: &TargetSpectrum, tol: &Float) -> Result<()> {
    for e in eigs.iter_mut() {
        e.controlled = false;
    }
    for t in &targets.targets {
        let prec = t.value.prec();
        let best = eigs
            .iter()
            .enumerate()
            .filter(|(_, e)| e.subspace == t.subspace && !e.controlled)
            .map(|(k, e)| (k, Float::with_val(prec, &e.value - &t.value).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
        match best {
            Some((k, d)) if d <= *tol => eigs[k].controlled = true,
            _ => return Err(Error::CertificationFailed(format!("target {} is not in the spectrum", mp::to_decimal(&t.value, 20)))),
        }
    }
    Ok(())
}

/// Orthonormal basis of the vectors orthogonal to every row, in dimension `dim`.
pub fn null_space(rows: &[Vec<Float>], dim: usize, prec: Prec) -> Result<Vec<Vec<Float>>> {
    if rows.is_empty() {
        return Ok((0..dim).map(|k| mp::unit(dim, k, prec)).collect());
    }
    let gram = Mat::from_fn(dim, dim, prec, |i, j| {
        let mut s = Float::new(prec);
        for r in rows {
            s += Float::with_val(prec, &r[i] * &r[j]);
        }
        s
    });
    let eig = sym_eigen(&gram)?;
    let top = mp::max_abs(prec, &eig.values);
    let cut = Float::with_val(prec, &top * (Float::with_val(prec, 1) >> (prec / 2)));
    let mut out = Vec::new();
    for (val, mut v) in eig.values.into_iter().zip(eig.vectors) {
        if val > cut {
            continue;
        }
        let lead = v.iter().find(|x| x.cmp_abs(&(Float::with_val(prec, 1) >> (prec / 4))) == Some(Ordering::Greater)).cloned();
        if lead.map_or(false, |l| l < 0) {
            for x in v.iter_mut() {
                *x = Float::with_val(prec, -&*x);
            }
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::EmptyNullSpace);
    }
    Ok(out)
}

/// Encoding vectors on the first `region` sites: the null space of the
/// uncontrolled eigenvectors restricted there.
pub fn encoding_vectors(eigs: &[Eigenpair], region: usize) -> Result<Vec<Vec<Float>>> {
    let prec = eigs.first().map_or(mp::DEFAULT_PREC, |e| e.value.prec());
    let negligible = Float::with_val(prec, 1) >> (prec / 4);
    let rows: Vec<Vec<Float>> = eigs
        .iter()
        .filter(|e| !e.controlled)
        .map(|e| e.vector[..region].to_vec())
        .filter(|r| mp::norm(r) > negligible)
        .collect();
    null_space(&rows, region, prec)
}

/// How many sites the encoding region spans.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RegionMode {
    /// `N_A`, widening to `N_A + 1` when no vector fits.
    #[default]
    Auto,
    Chain,
    ChainPlusInput,
}

impl RegionMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(RegionMode::Auto),
            "NA" | "na" => Ok(RegionMode::Chain),
            "NA+1" | "na+1" => Ok(RegionMode::ChainPlusInput),
            _ => Err(Error::InvalidConfig(format!("unknown region mode {s}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RegionMode::Auto => "auto",
            RegionMode::Chain => "NA",
            RegionMode::ChainPlusInput => "NA+1",
        }
    }
}

/// A complete design ready for evaluation.
#[derive(Clone, Debug)]
pub struct TransferDesign {
    pub assembled: Assembled,
    pub t0: Float,
    pub eigen: Vec<Eigenpair>,
    pub region_size: usize,
    pub encode: Vec<Vec<Float>>,
    /// Vertices of the original network together with fixed central vertices.
    pub p_out: Vec<usize>,
    /// Mirror copies and the right chain.
    pub p_in: Vec<usize>,
}

impl TransferDesign {
    pub fn build(asm: Assembled, sides: &[Side], targets: &TargetSpectrum, t0: &Float, region: RegionMode) -> Result<Self> {
        let prec = asm.h.prec();
        let mut eigen = mirror_eigenpairs(&asm)?;
        let scale = mp::max_abs(prec, eigen.iter().map(|e| &e.value)).max(&mp::one(prec));
        let tol = mp::pow10(prec, -4) * scale;
        mark_controlled(&mut eigen, targets, &tol)?;
        let n_a = asm.n_a;
        let (region_size, encode) = match region {
            RegionMode::Chain => (n_a, encoding_vectors(&eigen, n_a)?),
            RegionMode::ChainPlusInput => (n_a + 1, encoding_vectors(&eigen, n_a + 1)?),
            RegionMode::Auto => match encoding_vectors(&eigen, n_a) {
                Ok(v) if n_a > 0 => (n_a, v),
                Ok(_) | Err(Error::EmptyNullSpace) => (n_a + 1, encoding_vectors(&eigen, n_a + 1)?),
                Err(e) => return Err(e),
            },
        };
        let n = asm.dim();
        let p_out = (0..asm.n_c).filter(|&k| sides[k] != Side::Far).map(|k| asm.centre(k)).collect();
        let mut p_in: Vec<usize> = (0..asm.n_c).filter(|&k| sides[k] == Side::Far).map(|k| asm.centre(k)).collect();
        p_in.extend(n - n_a..n);
        Ok(TransferDesign { assembled: asm, t0: t0.clone(), eigen, region_size, encode, p_out, p_in })
    }

    pub fn prec(&self) -> Prec {
        self.t0.prec()
    }

    pub fn dim(&self) -> usize {
        self.assembled.dim()
    }

    pub fn decode(&self) -> Vec<Vec<Float>> {
        let prec = self.prec();
        self.encode
            .iter()
            .map(|v| {
                let mut out = mp::zeros(self.dim(), prec);
                for (k, x) in v.iter().enumerate() {
                    out[self.assembled.mirror[k]].assign(x);
                }
                out
            })
            .collect()
    }

    pub fn controlled(&self) -> impl Iterator<Item = &Eigenpair> {
        self.eigen.iter().filter(|e| e.controlled)
    }

    pub fn uncontrolled(&self) -> impl Iterator<Item = &Eigenpair> {
        self.eigen.iter().filter(|e| !e.controlled)
    }

    /// Largest `|(V V^T - I)_{ij}|`, which bounds the deviation of `U U^+` from the identity.
    pub fn unitarity_defect(&self) -> Float {
        let n = self.dim();
        let prec = self.prec();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst = Float::new(prec);
                for j in 0..n {
                    let mut s = Float::new(prec);
                    for e in &self.eigen {
                        s += Float::with_val(prec, &e.vector[i] * &e.vector[j]);
                    }
                    if i == j {
                        s -= 1u32;
                    }
                    let a = s.abs();
                    if a > worst {
                        worst = a;
                    }
                }
                worst
            })
            .reduce(|| Float::new(prec), |a, b| if a > b { a } else { b })
    }

    /// Largest overlap of an encoding vector with an uncontrolled eigenvector.
    pub fn encoding_leak(&self) -> Float {
        let prec = self.prec();
        let mut worst = Float::new(prec);
        for v in &self.encode {
            for e in self.uncontrolled() {
                let o = mp::dot(v, &e.vector[..self.region_size]).abs();
                if o > worst {
                    worst = o;
                }
            }
        }
        worst
    }
}

/// `<S v| exp(-i H t) |v>` for `v` supported on the leading indices.
pub fn transfer_amplitude(design: &TransferDesign, v: &[Float], t: &Float) -> (Float, Float) {
    let prec = design.prec();
    let mut re = Float::new(prec);
    let mut im = Float::new(prec);
    for e in &design.eigen {
        let o = mp::dot(v, &e.vector[..v.len()]);
        let w = Float::with_val(prec, o.square_ref()) * e.subspace.sign();
        let phase = Float::with_val(prec, &e.value * t);
        let (s, c) = phase.sin_cos(Float::new(prec));
        re += Float::with_val(prec, &w * &c);
        im -= Float::with_val(prec, &w * &s);
    }
    (re, im)
}

#[derive(Clone, Debug)]
pub struct FidelityReport {
    pub per_vector: Vec<Float>,
    pub min: Float,
    /// Unit phase of the first vector's amplitude.
    pub phase: (Float, Float),
}

pub fn encoded_transfer_fidelity(design: &TransferDesign) -> FidelityReport {
    let prec = design.prec();
    let amps: Vec<(Float, Float)> = design.encode.par_iter().map(|v| transfer_amplitude(design, v, &design.t0)).collect();
    let per_vector: Vec<Float> = amps.iter().map(|(r, i)| (Float::with_val(prec, r.square_ref()) + Float::with_val(prec, i.square_ref())).sqrt()).collect();
    let min = per_vector.iter().cloned().fold(Float::with_val(prec, rug::float::Special::Infinity), |a, b| a.min(&b));
    let phase = amps
        .first()
        .map(|(r, i)| {
            let n = &per_vector[0];
            (Float::with_val(prec, r / n), Float::with_val(prec, i / n))
        })
        .unwrap_or((mp::one(prec), Float::new(prec)));
    FidelityReport { per_vector, min, phase }
}

/// Residual of `Q_{H_sigma}(lambda) = Q_A Q_C - J^2 P_A P_C` at every target,
/// relative to the size of the two terms.
pub fn containment_residual(chain: &TridiagonalChain, j: &Float, cp: &SupportedBlock, cm: &SupportedBlock, targets: &TargetSpectrum) -> Result<Float> {
    let prec = cp.matrix.prec();
    let (qa, pa) = chain_polynomials(chain);
    let polys = |b: &SupportedBlock| -> Result<_> { Ok((char_poly(&b.matrix), principal_char_poly(&b.matrix)?)) };
    let (qp, pp) = polys(cp)?;
    let (qm, pm) = polys(cm)?;
    let j2 = Float::with_val(prec, j.square_ref());
    let mut worst = Float::new(prec);
    for t in &targets.targets {
        let (qc, pc) = if t.subspace == Subspace::Plus { (&qp, &pp) } else { (&qm, &pm) };
        let x = &t.value;
        let a = qa.eval(x) * qc.eval(x);
        let b = Float::with_val(prec, &j2 * pa.eval(x)) * pc.eval(x);
        let size = Float::with_val(prec, a.as_abs().clone() + b.as_abs().clone());
        if size.is_zero() {
            continue;
        }
        let r = Float::with_val(prec, &a - &b).abs() / size;
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

/// `P_in exp(i H t0) P_out` and its singular values.
#[derive(Clone, Debug)]
pub struct CreationMap {
    pub re: Mat,
    pub im: Mat,
    /// Descending.
    pub singular_values: Vec<Float>,
}

pub fn state_creation_map(design: &TransferDesign) -> Result<CreationMap> {
    let prec = design.prec();
    let (rows, cols) = (design.p_in.len(), design.p_out.len());
    let phases: Vec<(Float, Float)> = design
        .eigen
        .iter()
        .map(|e| {
            let (s, c) = Float::with_val(prec, &e.value * &design.t0).sin_cos(Float::new(prec));
            (c, s)
        })
        .collect();
    let entries: Vec<(Float, Float)> = (0..rows * cols)
        .into_par_iter()
        .map(|k| {
            let (r, c) = (design.p_in[k / cols], design.p_out[k % cols]);
            let mut re = Float::new(prec);
            let mut im = Float::new(prec);
            for (e, (cs, sn)) in design.eigen.iter().zip(&phases) {
                let w = Float::with_val(prec, &e.vector[r] * &e.vector[c]);
                re += Float::with_val(prec, &w * cs);
                im += Float::with_val(prec, &w * sn);
            }
            (re, im)
        })
        .collect();
    let mut re = Mat::zeros(rows, cols, prec);
    let mut im = Mat::zeros(rows, cols, prec);
    for (k, (a, b)) in entries.into_iter().enumerate() {
        re[(k / cols, k % cols)] = a;
        im[(k / cols, k % cols)] = b;
    }
    let singular_values = complex_singular_values(&re, &im)?;
    Ok(CreationMap { re, im, singular_values })
}

/// Singular values of `re + i im` from the real symmetric embedding of `M^+ M`.
pub fn complex_singular_values(re: &Mat, im: &Mat) -> Result<Vec<Float>> {
    let prec = re.prec();
    let n = re.cols();
    let rt = re.transpose();
    let it = im.transpose();
    let a = {
        let mut a = rt.matmul(re);
        let b = it.matmul(im);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] += &b[(i, j)];
            }
        }
        a
    };
    let b = {
        let mut b = rt.matmul(im);
        let c = it.matmul(re);
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] -= &c[(i, j)];
            }
        }
        b
    };
    let emb = Mat::from_fn(2 * n, 2 * n, prec, |i, j| match (i < n, j < n) {
        (true, true) => a[(i, j)].clone(),
        (false, false) => a[(i - n, j - n)].clone(),
        (true, false) => Float::with_val(prec, -&b[(i, j - n)]),
        (false, true) => b[(i - n, j)].clone(),
    });
    let mut vals = sym_eigen(&emb)?.values;
    vals.reverse();
    Ok(vals.into_iter().step_by(2).map(|v| if v < 0 { Float::new(prec) } else { v.sqrt() }).collect())
}

/// `|| M psi ||^2` for a normalized state on the `P_out` sites, and the optimal input `M psi`.
pub fn creation_fidelity(map: &CreationMap, psi: &[Float]) -> (Float, Vec<Float>, Vec<Float>) {
    let prec = map.re.prec();
    let n = mp::norm(psi);
    let psi: Vec<Float> = psi.iter().map(|x| Float::with_val(prec, x / &n)).collect();
    let re = map.re.mul_vec(&psi);
    let im = map.im.mul_vec(&psi);
    let f = Float::with_val(prec, mp::dot(&re, &re) + mp::dot(&im, &im));
    (f, re, im)
}

/// `(1 + prod sigma)^2 / 4`.
pub fn ghz_fidelity(singular_values: &[Float]) -> Float {
    let prec = singular_values.first().map_or(mp::DEFAULT_PREC, |x| x.prec());
    let mut p = mp::one(prec);
    for s in singular_values {
        p *= s;
    }
    p += 1u32;
    p.square() / 4u32
}

/// `|det [1 / (x_i - y_j)]|` by the product formula.
pub fn cauchy_determinant(x: &[Float], y: &[Float]) -> Result<Float> {
    let prec = x.first().or(y.first()).map_or(mp::DEFAULT_PREC, |v| v.prec());
    let mut num = mp::one(prec);
    for v in [x, y] {
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                num *= Float::with_val(prec, &v[i] - &v[j]);
            }
        }
    }
    let mut den = mp::one(prec);
    for a in x {
        for b in y {
            let d = Float::with_val(prec, a - b);
            if d.is_zero() {
                return Err(Error::InvalidConfig(format!("coincident values {}", mp::to_decimal(a, 20))));
            }
            den *= d;
        }
    }
    Ok((num / den).abs())
}

/// `|det [1 / (x_i - y_j)]|` by elimination.
pub fn direct_cauchy_determinant(x: &[Float], y: &[Float]) -> Float {
    let prec = x[0].prec();
    let m = Mat::from_fn(x.len(), y.len(), prec, |i, j| Float::with_val(prec, &x[i] - &y[j]).recip());
    determinant(&m).abs()
}

/// `|det M_sigma|` with `M_sigma[i][j] = <eta_i| P_out |lambda_j>`, computed
/// directly and through the Cauchy factorization.
#[derive(Clone, Debug)]
pub struct RankCheck {
    pub subspace: Subspace,
    pub direct: Float,
    pub factored: Float,
}

pub fn creation_rank_check(design: &TransferDesign, sys: &SymmetrizedSystem, block: &SupportedBlock, j: &Float, s: Subspace) -> Result<RankCheck> {
    let prec = design.prec();
    let asm = &design.assembled;
    let negligible = Float::with_val(prec, 1) >> (prec / 4);
    let eta = block.eigenvalues().to_vec();
    let u = sym_eigen(&block.matrix)?;
    // columns: supported uncontrolled eigenvectors of this subspace in C_sigma coordinates
    let mut lambdas = Vec::new();
    let mut cols: Vec<Vec<Float>> = Vec::new();
    let mut amps = Vec::new();
    for e in design.uncontrolled().filter(|e| e.subspace == s) {
        let vc: Vec<Float> = (0..asm.n_c).map(|k| e.vector[asm.centre(k)].clone()).collect();
        let in_block = sys.basis.restrict(s, &vc);
        let krylov: Vec<Float> = block.krylov.iter().map(|kv| mp::dot(kv, &in_block)).collect();
        if mp::norm(&krylov) <= negligible || asm.n_a == 0 {
            continue;
        }
        let x = &e.vector[asm.n_a - 1];
        amps.push(Float::with_val(prec, x * Float::with_val(prec, 2).sqrt()));
        lambdas.push(e.value.clone());
        cols.push(krylov);
    }
    if lambdas.len() != eta.len() {
        return Err(Error::InvalidConfig(format!("{} uncontrolled states against {} block eigenvalues", lambdas.len(), eta.len())));
    }
    let n = eta.len();
    let m = Mat::from_fn(n, n, prec, |i, jj| mp::dot(&u.vectors[i], &cols[jj]));
    let direct = determinant(&m).abs();
    let mut factored = cauchy_determinant(&lambdas, &eta)?;
    for (a, w) in amps.iter().zip(block.weights()) {
        factored *= Float::with_val(prec, a * j).abs();
        factored *= Float::with_val(prec, w.sqrt_ref());
    }
    Ok(RankCheck { subspace: s, direct, factored })
}

/// Distance of the eigenvector of `eta_i` from the span of the two resolvent
/// vectors `(eta_i +- eps - C)^{-1} |contact>`.
pub fn flanking_creation_error(block: &SupportedBlock, i: usize, eps: &Float) -> Result<Float> {
    let prec = block.matrix.prec();
    let eig = sym_eigen(&block.matrix)?;
    let eta = &eig.values[i];
    let resolvent = |z: Float| -> Vec<Float> {
        let mut out = mp::zeros(block.dim(), prec);
        for (l, v) in eig.values.iter().zip(&eig.vectors) {
            let c = Float::with_val(prec, &v[0] / Float::with_val(prec, &z - l));
            mp::axpy(&mut out, &c, v);
        }
        out
    };
    let mut a = resolvent(Float::with_val(prec, eta + eps));
    let mut b = resolvent(Float::with_val(prec, eta - eps));
    let na = mp::norm(&a);
    mp::scale(&mut a, &na.recip());
    crate::linalg::orthogonalize(&mut b, std::slice::from_ref(&a));
    let nb = mp::norm(&b);
    mp::scale(&mut b, &nb.recip());
    let mut r = eig.vectors[i].clone();
    crate::linalg::orthogonalize(&mut r, &[a, b]);
    Ok(mp::norm(&r))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Prec = 256;

    fn f(x: f64) -> Float {
        Float::with_val(P, x)
    }

    #[test]
    fn fig3_encoding_vector() {
        let r37 = Float::with_val(P, 37).sqrt() / 10u32;
        let c3 = (Float::with_val(P, 7) / 10u32).sqrt() * 3u32 / 8u32;
        let rows = vec![
            vec![f(1.0), Float::with_val(P, -&r37), Float::with_val(P, -&c3)],
            vec![f(1.0), r37.clone(), Float::with_val(P, -&c3)],
        ];
        let ns = null_space(&rows, 3, P).unwrap();
        assert_eq!(ns.len(), 1);
        let want = [Float::with_val(P, 7).sqrt() * 3u32, f(0.0), Float::with_val(P, 10).sqrt() * 8u32];
        let nw = mp::norm(&want);
        for (a, b) in ns[0].iter().zip(&want) {
            assert!(Float::with_val(P, a - Float::with_val(P, b / &nw)).abs() < 1e-60);
        }
        for r in &rows {
            assert!(mp::dot(r, &ns[0]).abs() < 1e-60);
        }
    }

    #[test]
    fn empty_and_full_null_space() {
        assert_eq!(null_space(&[], 3, P).unwrap().len(), 3);
        let rows = vec![vec![f(1.0), f(0.0)], vec![f(0.0), f(1.0)]];
        assert!(matches!(null_space(&rows, 2, P), Err(Error::EmptyNullSpace)));
    }

    #[test]
    fn ghz_of_perfect_map() {
        assert_eq!(ghz_fidelity(&[f(1.0), f(1.0)]).to_f64(), 1.0);
    }

    #[test]
    fn cauchy_single_entry() {
        assert_eq!(cauchy_determinant(&[f(1.0)], &[f(0.0)]).unwrap().to_f64(), 1.0);
        let x = [f(0.3), f(1.7), f(-2.2)];
        let y = [f(0.1), f(-0.9), f(2.5)];
        let d = Float::with_val(P, cauchy_determinant(&x, &y).unwrap() - direct_cauchy_determinant(&x, &y));
        assert!(d.abs() < 1e-60);
        assert!(cauchy_determinant(&[f(1.0)], &[f(1.0)]).is_err());
    }

    #[test]
    fn singular_values_of_phase_matrix() {
        // diag(i, 1/2) has singular values 1, 1/2
        let re = Mat::from_f64(&[&[0.0, 0.0], &[0.0, 0.5]], P);
        let im = Mat::from_f64(&[&[1.0, 0.0], &[0.0, 0.0]], P);
        let sv: Vec<f64> = complex_singular_values(&re, &im).unwrap().iter().map(|x| x.to_f64()).collect();
        assert_eq!(sv, vec![1.0, 0.5]);
    }
}
