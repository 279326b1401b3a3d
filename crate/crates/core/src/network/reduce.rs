//! Restriction of a block to the Krylov space of its contact vector.

use rug::Float;

use crate::error::{Error, Result};
use crate::linalg::{orthogonalize, sym_eigen, tridiagonal_eigenvalues, Mat};
use crate::mp;
use crate::spectral::SpectralMeasure;

/// Fully supported part of a symmetry block, in Lanczos (tridiagonal) form.
#[derive(Clone, Debug)]
pub struct SupportedBlock {
    /// Tridiagonal matrix whose first basis vector is the contact.
    pub matrix: Mat,
    /// The contact in the reduced basis (always the first unit vector).
    pub contact: Vec<Float>,
    /// Columns of the Krylov basis in the coordinates of the unreduced block.
    pub krylov: Vec<Vec<Float>>,
    /// Eigenpairs of the unreduced block orthogonal to the Krylov space.
    pub dropped: Vec<(Float, Vec<Float>)>,
    measure: SpectralMeasure,
    principal_roots: Vec<Float>,
}

impl SupportedBlock {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[Float] {
        &self.measure.nodes
    }

    /// Squared overlaps of the eigenvectors with the contact.
    pub fn weights(&self) -> &[Float] {
        &self.measure.weights
    }

    /// Roots of the principal characteristic polynomial, ascending.
    pub fn principal_roots(&self) -> &[Float] {
        &self.principal_roots
    }

    pub fn measure(&self) -> &SpectralMeasure {
        &self.measure
    }

    /// Diagonal followed by the off diagonal; identifies the block up to
    /// orthogonal changes of basis fixing the contact.
    pub fn signature(&self) -> Vec<Float> {
        let n = self.dim();
        let mut s: Vec<Float> = (0..n).map(|i| self.matrix[(i, i)].clone()).collect();
        s.extend((1..n).map(|i| self.matrix[(i - 1, i)].clone()));
        s
    }

    /// A block that is already tridiagonal with the contact first.
    pub fn from_tridiagonal(matrix: Mat, tol: &Float) -> Result<Self> {
        let n = matrix.rows();
        let prec = matrix.prec();
        let contact = mp::unit(n, 0, prec);
        reduce_full_support(&matrix, &contact, tol)
    }
}

/// Lanczos with full reorthogonalisation from `contact`; stops when the next
/// residual norm drops below `tol` times the block scale.
pub fn reduce_full_support(block: &Mat, contact: &[Float], tol: &Float) -> Result<SupportedBlock> {
    let n = block.rows();
    let prec = block.prec();
    if n == 0 {
        return Err(Error::DimensionTooSmall(0));
    }
    let scale = block.max_abs().max(&mp::one(prec));
    let cutoff = Float::with_val(prec, &scale * tol);
    let mut q: Vec<Vec<Float>> = Vec::new();
    let mut alpha = Vec::new();
    let mut beta: Vec<Float> = Vec::new();
    let mut v: Vec<Float> = contact.iter().map(|x| Float::with_val(prec, x)).collect();
    let nv = mp::norm(&v);
    for x in v.iter_mut() {
        *x /= &nv;
    }
    loop {
        let mut w = block.mul_vec(&v);
        let a = mp::dot(&v, &w);
        q.push(v);
        orthogonalize(&mut w, &q);
        alpha.push(a);
        if q.len() == n {
            break;
        }
        let b = mp::norm(&w);
        if b <= cutoff {
            break;
        }
        for x in w.iter_mut() {
            *x /= &b;
        }
        beta.push(b);
        v = w;
    }
    let k = q.len();
    let matrix = Mat::tridiagonal(&alpha, &beta, prec);
    let dropped = if k < n { complement_eigenpairs(block, &q)? } else { Vec::new() };
    let measure = SpectralMeasure::of(&matrix)?;
    for (lam, w) in measure.nodes.iter().zip(&measure.weights) {
        if w.cmp_abs(&Float::with_val(prec, tol.square_ref())) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::DegenerateSupport(mp::to_decimal(lam, 20)));
        }
    }
    let principal_roots = tridiagonal_eigenvalues(&alpha[1..], if beta.len() > 1 { &beta[1..] } else { &[] })?;
    Ok(SupportedBlock { contact: mp::unit(k, 0, prec), matrix, krylov: q, dropped, measure, principal_roots })
}

fn complement_eigenpairs(block: &Mat, q: &[Vec<Float>]) -> Result<Vec<(Float, Vec<Float>)>> {
    let n = block.rows();
    let prec = block.prec();
    let half = Float::with_val(prec, 0.5);
    let mut basis: Vec<Vec<Float>> = q.to_vec();
    let mut extra: Vec<Vec<Float>> = Vec::new();
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = mp::unit(n, i, prec);
        orthogonalize(&mut e, &basis);
        let nrm = mp::norm(&e);
        if nrm > half {
            for x in e.iter_mut() {
                *x /= &nrm;
            }
            basis.push(e.clone());
            extra.push(e);
        }
    }
    let m = extra.len();
    let projected = Mat::from_fn(m, m, prec, |a, b| mp::dot(&extra[a], &block.mul_vec(&extra[b])));
    let eig = sym_eigen(&projected)?;
    Ok(eig
        .values
        .into_iter()
        .zip(eig.vectors)
        .map(|(lam, y)| {
            let mut v = mp::zeros(n, prec);
            for (c, e) in y.iter().zip(&extra) {
                mp::axpy(&mut v, c, e);
            }
            (lam, v)
        })
        .collect())
}
