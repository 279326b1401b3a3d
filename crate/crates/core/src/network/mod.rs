//! Spin networks, mirror symmetrization, symmetry subspace blocks and the
//! reduction to the part of each block reachable from the contact vertex.

mod io;
mod reduce;
mod symmetry;

pub use io::{parse_network, NetworkFile};
pub use reduce::{reduce_full_support, SupportedBlock};
pub use symmetry::{find_involutions, SymmetryBasis};

use std::collections::{BTreeMap, VecDeque};

use rug::Float;

use crate::error::{Error, Result};
use crate::exact::ExactReal;
use crate::linalg::Mat;
use crate::mp::{self, Prec};

/// Weighted coupling graph with on-site fields. Vertices are 0-based here;
/// the JSON format is 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinNetwork {
    n: usize,
    couplings: BTreeMap<(usize, usize), ExactReal>,
    fields: Vec<ExactReal>,
    input: usize,
    output: usize,
    /// User supplied mirror involution, if any.
    mirror: Option<Vec<usize>>,
}

impl SpinNetwork {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, ExactReal)>,
        fields: Vec<ExactReal>,
        input: usize,
        output: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidNetwork("empty network".into()));
        }
        if fields.len() != n {
            return Err(Error::InvalidNetwork(format!("expected {n} fields, got {}", fields.len())));
        }
        if input >= n || output >= n {
            return Err(Error::InvalidNetwork("input or output out of range".into()));
        }
        if input == output && n > 1 {
            return Err(Error::InvalidNetwork("input and output coincide".into()));
        }
        let mut couplings = BTreeMap::new();
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidNetwork(format!("edge ({}, {}) out of range", i + 1, j + 1)));
            }
            if i == j {
                return Err(Error::InvalidNetwork(format!("self coupling at vertex {}", i + 1)));
            }
            let key = (i.min(j), i.max(j));
            if couplings.contains_key(&key) {
                return Err(Error::InvalidNetwork(format!("duplicate edge ({}, {})", key.0 + 1, key.1 + 1)));
            }
            if !w.is_zero() {
                couplings.insert(key, w);
            }
        }
        let net = SpinNetwork { n, couplings, fields, input, output, mirror: None };
        if !net.is_connected() {
            return Err(Error::InvalidNetwork("coupling graph is not connected".into()));
        }
        Ok(net)
    }

    /// Chain `0 - 1 - ... - n-1` with zero fields, input 0 and output n-1.
    pub fn chain(couplings: &[ExactReal]) -> Result<Self> {
        let n = couplings.len() + 1;
        let edges = couplings.iter().enumerate().map(|(k, w)| (k, k + 1, w.clone()));
        Self::new(n, edges, vec![ExactReal::zero(); n], 0, n - 1)
    }

    /// Declares the mirror involution instead of searching for one.
    pub fn with_mirror(mut self, perm: Vec<usize>) -> Result<Self> {
        if !symmetry::is_valid_involution(&self, &perm) {
            return Err(Error::InvalidNetwork("declared mirror is not an involutive automorphism exchanging input and output".into()));
        }
        self.mirror = Some(perm);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn input(&self) -> usize {
        self.input
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn fields(&self) -> &[ExactReal] {
        &self.fields
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), ExactReal> {
        &self.couplings
    }

    pub fn declared_mirror(&self) -> Option<&[usize]> {
        self.mirror.as_deref()
    }

    pub fn coupling(&self, i: usize, j: usize) -> Option<&ExactReal> {
        self.couplings.get(&(i.min(j), i.max(j)))
    }

    pub fn neighbours(&self) -> Vec<Vec<(usize, ExactReal)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(i, j), w) in &self.couplings {
            adj[i].push((j, w.clone()));
            adj[j].push((i, w.clone()));
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let adj = self.neighbours();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True when no vertex carries a field.
    pub fn is_field_free(&self) -> bool {
        self.fields.iter().all(|f| f.is_zero())
    }
}

/// Single excitation Hamiltonian: couplings off the diagonal, fields on it.
pub fn build_hamiltonian(net: &SpinNetwork, prec: Prec) -> Mat {
    let mut h = Mat::zeros(net.n, net.n, prec);
    for (i, f) in net.fields.iter().enumerate() {
        h[(i, i)] = f.to_float(prec);
    }
    for (&(i, j), w) in &net.couplings {
        let v = w.to_float(prec);
        h[(i, j)] = v.clone();
        h[(j, i)] = v;
    }
    h
}

/// A vertex of the symmetrized system: an original vertex or its mirror copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CVertex {
    pub original: usize,
    pub copy: bool,
}

/// Which half of the mirror a vertex belongs to, for the state creation map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The side carrying the input vertex.
    Near,
    /// Mirror image of the near side.
    Far,
    /// Fixed by the mirror.
    Centre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subspace {
    Plus,
    Minus,
}

impl Subspace {
    pub fn sign(self) -> i32 {
        match self {
            Subspace::Plus => 1,
            Subspace::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Subspace::Plus => "+",
            Subspace::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Subspace::Plus),
            "-" | "minus" => Ok(Subspace::Minus),
            _ => Err(Error::Parse(format!("unknown subspace {s:?}"))),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Subspace::Plus => Subspace::Minus,
            Subspace::Minus => Subspace::Plus,
        }
    }
}

/// Mirror symmetric system `C` with its involution and the two symmetry blocks.
#[derive(Clone, Debug)]
pub struct SymmetrizedSystem {
    /// Index 0 is the input vertex and the last index is its mirror image.
    pub vertices: Vec<CVertex>,
    pub c: Mat,
    /// Exact couplings of `C` keyed by index pairs `(i < j)`.
    pub c_couplings: BTreeMap<(usize, usize), ExactReal>,
    pub c_fields: Vec<ExactReal>,
    pub mirror: Vec<usize>,
    pub mirrored: bool,
    pub j_prime: Option<ExactReal>,
    pub sides: Vec<Side>,
    pub basis: SymmetryBasis,
    pub c_plus: Mat,
    pub c_minus: Mat,
    pub contact_plus: usize,
    pub contact_minus: usize,
}

impl SymmetrizedSystem {
    pub fn dim(&self) -> usize {
        self.vertices.len()
    }

    pub fn prec(&self) -> Prec {
        self.c.prec()
    }

    pub fn block(&self, s: Subspace) -> &Mat {
        match s {
            Subspace::Plus => &self.c_plus,
            Subspace::Minus => &self.c_minus,
        }
    }

    /// `S C S == C` on the exact entries.
    pub fn mirror_is_exact(&self) -> bool {
        let s = &self.mirror;
        let inv = s.iter().enumerate().all(|(i, &j)| s[j] == i);
        let fields = (0..self.dim()).all(|i| self.c_fields[i] == self.c_fields[s[i]]);
        let couplings = self.c_couplings.iter().all(|(&(i, j), w)| {
            let key = (s[i].min(s[j]), s[i].max(s[j]));
            self.c_couplings.get(&key) == Some(w)
        });
        inv && fields && couplings
    }

    /// Supported parts of both blocks.
    pub fn reduced_blocks(&self, tol: &Float) -> Result<(SupportedBlock, SupportedBlock)> {
        let prec = self.prec();
        let cp = reduce_full_support(&self.c_plus, &mp::unit(self.c_plus.rows(), self.contact_plus, prec), tol)?;
        let cm = reduce_full_support(&self.c_minus, &mp::unit(self.c_minus.rows(), self.contact_minus, prec), tol)?;
        Ok((cp, cm))
    }
}

/// Default coupling between a network and its mirror image.
pub fn default_j_prime() -> ExactReal {
    ExactReal::one()
}

/// How `symmetrize` decides between using an existing mirror and doubling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MirrorMode {
    /// Use a detected (or declared) involution, doubling only when none exists.
    #[default]
    Auto,
    /// Always double the network.
    Always,
}

/// Mirror symmetric version of `net`. A mirror involution exchanging input
/// and output is used when one exists; otherwise the network is doubled and
/// the output joined to its copy by `j_prime`.
pub fn symmetrize(net: &SpinNetwork, j_prime: &ExactReal, prec: Prec) -> Result<SymmetrizedSystem> {
    symmetrize_mode(net, j_prime, MirrorMode::Auto, prec)
}

pub fn symmetrize_mode(net: &SpinNetwork, j_prime: &ExactReal, mode: MirrorMode, prec: Prec) -> Result<SymmetrizedSystem> {
    let tol = support_tolerance(prec);
    let perm = match net.declared_mirror() {
        _ if mode == MirrorMode::Always => None,
        Some(p) => Some(p.to_vec()),
        None if net.input != net.output => {
            let candidates = find_involutions(net, 64);
            choose_involution(net, candidates, prec, &tol)?
        }
        None => None,
    };
    match perm {
        Some(p) => Ok(from_involution(net, &p, prec)),
        None => {
            if j_prime.signum() <= 0 {
                return Err(Error::InvalidConfig("J' must be positive when mirroring".into()));
            }
            Ok(mirror_network(net, j_prime, prec))
        }
    }
}

/// Working tolerance for support and reachability decisions: `1e-30` at 256
/// bits, scaled with the precision.
pub fn support_tolerance(prec: Prec) -> Float {
    let digits = (prec as f64 * std::f64::consts::LOG10_2 * 30.0 / 77.0).round() as i32;
    mp::pow10(prec, -digits.max(10))
}

fn choose_involution(net: &SpinNetwork, mut candidates: Vec<Vec<usize>>, prec: Prec, tol: &Float) -> Result<Option<Vec<usize>>> {
    if candidates.len() <= 1 {
        return Ok(candidates.pop());
    }
    // equivalent candidates give identical reduced blocks; only then is the choice immaterial
    let mut reference: Option<(Vec<Float>, Vec<Float>)> = None;
    for p in &candidates {
        let sys = from_involution(net, p, prec);
        let (cp, cm) = sys.reduced_blocks(tol)?;
        let sig = (cp.signature(), cm.signature());
        match &reference {
            None => reference = Some(sig),
            Some(r) => {
                if !same_signature(&r.0, &sig.0, tol) || !same_signature(&r.1, &sig.1, tol) {
                    return Err(Error::SymmetryDetectionAmbiguous);
                }
            }
        }
    }
    Ok(candidates.into_iter().next())
}

fn same_signature(a: &[Float], b: &[Float], tol: &Float) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| mp::close(x, y, tol))
}

fn from_involution(net: &SpinNetwork, perm: &[usize], prec: Prec) -> SymmetrizedSystem {
    let mut order = vec![net.input];
    order.extend((0..net.n).filter(|&v| v != net.input && v != net.output));
    order.push(net.output);
    let vertices: Vec<CVertex> = order.iter().map(|&v| CVertex { original: v, copy: false }).collect();
    let mut pos = vec![0; net.n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mirror: Vec<usize> = order.iter().map(|&v| pos[perm[v]]).collect();
    let c_couplings = net.couplings.iter().map(|(&(i, j), w)| ((pos[i].min(pos[j]), pos[i].max(pos[j])), w.clone())).collect();
    let c_fields = order.iter().map(|&v| net.fields[v].clone()).collect();
    let sides = near_far_sides(net, &order, &mirror);
    finish(vertices, c_couplings, c_fields, mirror, false, None, sides, prec)
}

/// Pair members closer (by hops) to the input are on the near side.
fn near_far_sides(net: &SpinNetwork, order: &[usize], mirror: &[usize]) -> Vec<Side> {
    let adj = net.neighbours();
    let mut dist = vec![usize::MAX; net.n];
    dist[net.input] = 0;
    let mut queue = VecDeque::from([net.input]);
    while let Some(v) = queue.pop_front() {
        for &(u, _) in &adj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    (0..order.len())
        .map(|k| {
            let m = mirror[k];
            if m == k {
                Side::Centre
            } else {
                let (dk, dm) = (dist[order[k]], dist[order[m]]);
                if dk < dm || (dk == dm && k < m) {
                    Side::Near
                } else {
                    Side::Far
                }
            }
        })
        .collect()
}

fn mirror_network(net: &SpinNetwork, j_prime: &ExactReal, prec: Prec) -> SymmetrizedSystem {
    let n = net.n;
    let mut order = vec![net.input];
    order.extend((0..n).filter(|&v| v != net.input));
    let mut vertices: Vec<CVertex> = order.iter().map(|&v| CVertex { original: v, copy: false }).collect();
    vertices.extend(order.iter().rev().map(|&v| CVertex { original: v, copy: true }));
    let dim = 2 * n;
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    // copy of original vertex v sits at dim - 1 - pos[v]
    let mirror: Vec<usize> = (0..dim).map(|k| dim - 1 - k).collect();
    let mut c_couplings = BTreeMap::new();
    for (&(i, j), w) in &net.couplings {
        let (a, b) = (pos[i].min(pos[j]), pos[i].max(pos[j]));
        c_couplings.insert((a, b), w.clone());
        c_couplings.insert((dim - 1 - b, dim - 1 - a), w.clone());
    }
    let o = pos[net.output];
    c_couplings.insert((o, dim - 1 - o), j_prime.clone());
    let mut c_fields: Vec<ExactReal> = order.iter().map(|&v| net.fields[v].clone()).collect();
    c_fields.extend(order.iter().rev().map(|&v| net.fields[v].clone()));
    let sides = (0..dim).map(|k| if k < n { Side::Near } else { Side::Far }).collect();
    finish(vertices, c_couplings, c_fields, mirror, true, Some(j_prime.clone()), sides, prec)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    vertices: Vec<CVertex>,
    c_couplings: BTreeMap<(usize, usize), ExactReal>,
    c_fields: Vec<ExactReal>,
    mirror: Vec<usize>,
    mirrored: bool,
    j_prime: Option<ExactReal>,
    sides: Vec<Side>,
    prec: Prec,
) -> SymmetrizedSystem {
    let dim = vertices.len();
    let mut c = Mat::zeros(dim, dim, prec);
    for (i, f) in c_fields.iter().enumerate() {
        c[(i, i)] = f.to_float(prec);
    }
    for (&(i, j), w) in &c_couplings {
        let v = w.to_float(prec);
        c[(i, j)] = v.clone();
        c[(j, i)] = v;
    }
    let basis = SymmetryBasis::new(&mirror, 0);
    let c_plus = basis.project(&c, Subspace::Plus);
    let c_minus = basis.project(&c, Subspace::Minus);
    SymmetrizedSystem {
        vertices,
        c,
        c_couplings,
        c_fields,
        mirror,
        mirrored,
        j_prime,
        sides,
        basis,
        c_plus,
        c_minus,
        contact_plus: 0,
        contact_minus: 0,
    }
}

/// Bipartite and field free structure of `C` and how the mirror acts on the colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub bipartite: bool,
    pub field_free: bool,
    /// The mirror exchanges the two colour classes.
    pub even: bool,
    /// Diagonal `D` with `D C D = -C`, when bipartite.
    pub sign_operator: Option<Vec<i8>>,
}

impl Classification {
    /// Zero diagonal bipartite systems admit the half size solve.
    pub fn half_size_applicable(&self) -> bool {
        self.bipartite && self.field_free
    }
}

pub fn classify_field_free_even(sys: &SymmetrizedSystem) -> Classification {
    let dim = sys.dim();
    let field_free = sys.c_fields.iter().all(|f| f.is_zero());
    let mut adj = vec![Vec::new(); dim];
    for &(i, j) in sys.c_couplings.keys() {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut colour = vec![0i8; dim];
    let mut bipartite = true;
    for start in 0..dim {
        if colour[start] != 0 {
            continue;
        }
        colour[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if colour[u] == 0 {
                    colour[u] = -colour[v];
                    queue.push_back(u);
                } else if colour[u] == colour[v] {
                    bipartite = false;
                }
            }
        }
    }
    if !bipartite {
        return Classification { bipartite, field_free, even: false, sign_operator: None };
    }
    let even = (0..dim).all(|k| colour[sys.mirror[k]] == -colour[k]);
    Classification { bipartite, field_free, even, sign_operator: Some(colour) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen;

    fn ex(s: &str) -> ExactReal {
        ExactReal::parse(s).unwrap()
    }

    fn fig5() -> SpinNetwork {
        let edges = [(1, 2), (2, 4), (4, 6), (6, 5), (5, 3), (3, 1), (1, 6)];
        SpinNetwork::new(6, edges.iter().map(|&(i, j)| (i - 1, j - 1, ex("1"))), vec![ExactReal::zero(); 6], 0, 5).unwrap()
    }

    fn values(m: &Mat) -> Vec<f64> {
        m.to_f64().into_iter().flatten().collect()
    }

    #[test]
    fn hamiltonian_of_pair_and_singleton() {
        let net = SpinNetwork::chain(&[ex("1")]).unwrap();
        assert_eq!(values(&build_hamiltonian(&net, 64)), vec![0.0, 1.0, 1.0, 0.0]);
        let single = SpinNetwork::new(1, [], vec![ex("0.5")], 0, 0).unwrap();
        assert_eq!(values(&build_hamiltonian(&single, 64)), vec![0.5]);
    }

    #[test]
    fn fig5_adjacency() {
        let h = build_hamiltonian(&fig5(), 64);
        let ones: usize = values(&h).iter().filter(|&&x| x == 1.0).count();
        assert_eq!(ones, 14);
        assert_eq!(h[(0, 5)].to_f64(), 1.0);
    }

    #[test]
    fn rejects_invalid_networks() {
        let zero = || vec![ExactReal::zero(); 3];
        assert!(SpinNetwork::new(3, [(0, 1, ex("1"))], zero(), 0, 2).is_err());
        assert!(SpinNetwork::new(3, [(0, 1, ex("1")), (1, 2, ex("1"))], zero(), 1, 1).is_err());
        assert!(SpinNetwork::new(3, [(0, 0, ex("1"))], zero(), 0, 2).is_err());
        assert!(SpinNetwork::new(3, [(0, 1, ex("1")), (1, 0, ex("2"))], zero(), 0, 2).is_err());
    }

    #[test]
    fn mirrors_two_site_chain() {
        // asymmetric fields force mirroring of an otherwise symmetric chain
        let net = SpinNetwork::new(2, [(0, 1, ex("1"))], vec![ex("0"), ex("0")], 0, 1).unwrap();
        let sys = symmetrize(&net, &ex("1"), 128).unwrap();
        // the two site chain is already symmetric, so no mirroring
        assert!(!sys.mirrored);
        assert_eq!(values(&sys.c_plus), vec![1.0]);
        assert_eq!(values(&sys.c_minus), vec![-1.0]);

        let net = SpinNetwork::new(2, [(0, 1, ex("1"))], vec![ex("0"), ex("1/2")], 0, 1).unwrap();
        let sys = symmetrize(&net, &ex("1"), 128).unwrap();
        assert!(sys.mirrored);
        assert_eq!(sys.dim(), 4);
        assert!(sys.mirror_is_exact());
    }

    #[test]
    fn mirrored_chain_blocks() {
        // B = 2-chain, output = site 2, J' = 1: C is the 4-chain; the input
        // is mirrored explicitly to force doubling
        let net = SpinNetwork::chain(&[ex("1")]).unwrap();
        let sys = symmetrize_mode(&net, &ex("1"), MirrorMode::Always, 128).unwrap();
        assert_eq!(sys.dim(), 4);
        let c = values(&sys.c);
        assert_eq!(c, vec![0., 1., 0., 0., 1., 0., 1., 0., 0., 1., 0., 1., 0., 0., 1., 0.]);
        assert_eq!(values(&sys.c_plus), vec![0.0, 1.0, 1.0, 1.0]);
        assert_eq!(values(&sys.c_minus), vec![0.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn single_site_mirror() {
        let net = SpinNetwork::new(1, [], vec![ExactReal::zero()], 0, 0).unwrap();
        let sys = symmetrize(&net, &ex("1"), 128).unwrap();
        assert_eq!(values(&sys.c), vec![0.0, 1.0, 1.0, 0.0]);
        assert_eq!(values(&sys.c_plus), vec![1.0]);
        assert_eq!(values(&sys.c_minus), vec![-1.0]);
    }

    #[test]
    fn fig5_is_already_symmetric() {
        let sys = symmetrize(&fig5(), &ex("1"), 256).unwrap();
        assert!(!sys.mirrored);
        assert_eq!(sys.dim(), 6);
        let o = |k: usize| sys.vertices[k].original;
        assert_eq!((o(0), o(sys.mirror[0])), (0, 5));
        assert!(sys.mirror_is_exact());
        // (16)(25)(34) and (16)(24)(35) both qualify and give the same reduced blocks
        assert_eq!(find_involutions(&fig5(), 10).len(), 2);
    }

    #[test]
    fn block_spectra_union() {
        let sys = symmetrize(&fig5(), &ex("1"), 256).unwrap();
        let mut all: Vec<f64> = sym_eigen(&sys.c_plus).unwrap().values.iter().map(|x| x.to_f64()).collect();
        all.extend(sym_eigen(&sys.c_minus).unwrap().values.iter().map(|x| x.to_f64()));
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let full: Vec<f64> = sym_eigen(&sys.c).unwrap().values.iter().map(|x| x.to_f64()).collect();
        for (a, b) in all.iter().zip(&full) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn classification_of_chains() {
        let even = symmetrize(&SpinNetwork::chain(&[ex("1"), ex("2"), ex("1")]).unwrap(), &ex("1"), 128).unwrap();
        let c = classify_field_free_even(&even);
        assert!(c.bipartite && c.field_free && c.even);
        let odd = symmetrize(&SpinNetwork::chain(&[ex("1"), ex("1")]).unwrap(), &ex("1"), 128).unwrap();
        let c = classify_field_free_even(&odd);
        assert!(c.bipartite && c.field_free && !c.even);
        let net = SpinNetwork::new(3, [(0, 1, ex("1")), (1, 2, ex("1"))], vec![ex("0"), ex("1"), ex("0")], 0, 2).unwrap();
        let c = classify_field_free_even(&symmetrize(&net, &ex("1"), 128).unwrap());
        assert!(!c.field_free);
    }

    #[test]
    fn sign_operator_negates() {
        let sys = symmetrize(&SpinNetwork::chain(&[ex("1"), ex("3/2"), ex("1")]).unwrap(), &ex("1"), 128).unwrap();
        let d = classify_field_free_even(&sys).sign_operator.unwrap();
        let c = &sys.c;
        for i in 0..c.rows() {
            for j in 0..c.rows() {
                let lhs = Float::with_val(128, &c[(i, j)] * (d[i] * d[j]) as i32);
                assert_eq!(lhs, Float::with_val(128, -&c[(i, j)]));
            }
        }
    }
}
