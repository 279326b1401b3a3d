//! Mirror involutions and the symmetric / antisymmetric bases they induce.

use std::collections::HashMap;

use rug::Float;

use super::{SpinNetwork, Subspace};
use crate::exact::ExactReal;
use crate::linalg::Mat;

/// Involutive automorphisms of `net` exchanging input and output, up to `limit` of them.
pub fn find_involutions(net: &SpinNetwork, limit: usize) -> Vec<Vec<usize>> {
    let n = net.n();
    let adj = net.neighbours();
    let weights: HashMap<(usize, usize), ExactReal> = net.couplings().iter().map(|(&k, w)| (k, w.clone())).collect();
    // breadth first order from the input keeps constraints tight during the search
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[net.input()] = true;
    order.push(net.input());
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let mut next: Vec<usize> = adj[v].iter().map(|&(u, _)| u).filter(|&u| !seen[u]).collect();
        next.sort_unstable();
        next.dedup();
        for u in next {
            seen[u] = true;
            order.push(u);
        }
    }
    let mut perm = vec![usize::MAX; n];
    perm[net.input()] = net.output();
    perm[net.output()] = net.input();
    let mut out = Vec::new();
    let ctx = Search { net, adj: &adj, weights: &weights, order: &order, limit };
    if ctx.consistent(net.input(), net.output(), &perm) {
        ctx.extend(0, &mut perm, &mut out);
    }
    out
}

struct Search<'a> {
    net: &'a SpinNetwork,
    adj: &'a [Vec<(usize, ExactReal)>],
    weights: &'a HashMap<(usize, usize), ExactReal>,
    order: &'a [usize],
    limit: usize,
}

impl Search<'_> {
    fn weight(&self, a: usize, b: usize) -> Option<&ExactReal> {
        self.weights.get(&(a.min(b), a.max(b)))
    }

    /// Mapping `v -> u` agrees with every already assigned vertex.
    fn consistent(&self, v: usize, u: usize, perm: &[usize]) -> bool {
        if self.net.fields()[v] != self.net.fields()[u] || self.adj[v].len() != self.adj[u].len() {
            return false;
        }
        perm.iter().enumerate().all(|(w, &pw)| {
            pw == usize::MAX || w == v || w == u || self.weight(v, w) == self.weight(u, pw)
        })
    }

    fn extend(&self, k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if out.len() >= self.limit {
            return;
        }
        if k == self.order.len() {
            if is_valid_involution(self.net, perm) {
                out.push(perm.clone());
            }
            return;
        }
        let v = self.order[k];
        if perm[v] != usize::MAX {
            self.extend(k + 1, perm, out);
            return;
        }
        let n = perm.len();
        for u in 0..n {
            if perm[u] != usize::MAX && u != v {
                continue;
            }
            if !self.consistent(v, u, perm) {
                continue;
            }
            perm[v] = u;
            perm[u] = v;
            if u == v || self.consistent(u, v, perm) {
                self.extend(k + 1, perm, out);
            }
            perm[v] = usize::MAX;
            perm[u] = usize::MAX;
            if out.len() >= self.limit {
                return;
            }
        }
    }
}

/// `perm` is an involution preserving fields and exact couplings and exchanging input with output.
pub fn is_valid_involution(net: &SpinNetwork, perm: &[usize]) -> bool {
    let n = net.n();
    if perm.len() != n || perm.iter().any(|&p| p >= n) {
        return false;
    }
    if (0..n).any(|i| perm[perm[i]] != i) || perm[net.input()] != net.output() {
        return false;
    }
    if (0..n).any(|i| net.fields()[i] != net.fields()[perm[i]]) {
        return false;
    }
    net.couplings().iter().all(|(&(i, j), w)| net.coupling(perm[i], perm[j]) == Some(w))
        && net.couplings().len() == net.couplings().keys().filter(|&&(i, j)| net.coupling(perm[i], perm[j]).is_some()).count()
}

/// Orthonormal basis adapted to an involution: `(|i> + |S i>)/sqrt 2` for each
/// pair and `|v>` for each fixed vertex span the symmetric subspace,
/// `(|i> - |S i>)/sqrt 2` the antisymmetric one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryBasis {
    dim: usize,
    /// Pairs `(i, S i)`; the pair containing the contact vertex comes first.
    pub pairs: Vec<(usize, usize)>,
    pub fixed: Vec<usize>,
}

impl SymmetryBasis {
    pub fn new(perm: &[usize], contact: usize) -> Self {
        let mut pairs = Vec::new();
        let mut fixed = Vec::new();
        if perm[contact] != contact {
            pairs.push((contact, perm[contact]));
        }
        for (i, &j) in perm.iter().enumerate() {
            if i == contact || j == contact {
                continue;
            }
            if i == j {
                fixed.push(i);
            } else if i < j {
                pairs.push((i, j));
            }
        }
        SymmetryBasis { dim: perm.len(), pairs, fixed }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_dim(&self, s: Subspace) -> usize {
        match s {
            Subspace::Plus => self.pairs.len() + self.fixed.len(),
            Subspace::Minus => self.pairs.len(),
        }
    }

    /// Sparse basis vector `k` of the block: `(index, coefficient sign, halved)`
    /// where halved marks the 1/sqrt 2 normalisation.
    fn terms(&self, s: Subspace, k: usize) -> Vec<(usize, i32, bool)> {
        if k < self.pairs.len() {
            let (i, j) = self.pairs[k];
            vec![(i, 1, true), (j, s.sign(), true)]
        } else {
            vec![(self.fixed[k - self.pairs.len()], 1, false)]
        }
    }

    /// Matrix of `m` in the block basis.
    pub fn project(&self, m: &Mat, s: Subspace) -> Mat {
        let prec = m.prec();
        let d = self.block_dim(s);
        let basis: Vec<_> = (0..d).map(|k| self.terms(s, k)).collect();
        Mat::from_fn(d, d, prec, |a, b| {
            let mut acc = Float::new(prec);
            for &(i, si, _) in &basis[a] {
                for &(j, sj, _) in &basis[b] {
                    let v = &m[(i, j)];
                    if !v.is_zero() {
                        acc += Float::with_val(prec, v * (si * sj));
                    }
                }
            }
            let halves = (a < self.pairs.len()) as u32 + (b < self.pairs.len()) as u32;
            match halves {
                2 => acc / 2u32,
                1 => acc / Float::with_val(prec, 2).sqrt(),
                _ => acc,
            }
        })
    }

    /// Maps block coordinates back to the full space.
    pub fn embed(&self, s: Subspace, v: &[Float]) -> Vec<Float> {
        let prec = v.first().map_or(crate::mp::DEFAULT_PREC, |x| x.prec());
        let r = Float::with_val(prec, 2).sqrt().recip();
        let mut out = crate::mp::zeros(self.dim, prec);
        for (k, c) in v.iter().enumerate() {
            for (i, sign, halved) in self.terms(s, k) {
                let mut t = Float::with_val(prec, c * sign);
                if halved {
                    t *= &r;
                }
                out[i] += t;
            }
        }
        out
    }

    /// Block coordinates of a full space vector lying in subspace `s`.
    pub fn restrict(&self, s: Subspace, v: &[Float]) -> Vec<Float> {
        let prec = v.first().map_or(crate::mp::DEFAULT_PREC, |x| x.prec());
        let r = Float::with_val(prec, 2).sqrt().recip();
        (0..self.block_dim(s))
            .map(|k| {
                let mut acc = Float::new(prec);
                for (i, sign, halved) in self.terms(s, k) {
                    let mut t = Float::with_val(prec, &v[i] * sign);
                    if halved {
                        t *= &r;
                    }
                    acc += t;
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> ExactReal {
        ExactReal::parse(s).unwrap()
    }

    #[test]
    fn chain_has_single_reversal() {
        let net = SpinNetwork::chain(&[ex("1"), ex("2"), ex("1")]).unwrap();
        let found = find_involutions(&net, 10);
        assert_eq!(found, vec![vec![3, 2, 1, 0]]);
    }

    #[test]
    fn asymmetric_chain_has_none() {
        let net = SpinNetwork::chain(&[ex("1"), ex("2"), ex("3")]).unwrap();
        assert!(find_involutions(&net, 10).is_empty());
    }

    #[test]
    fn star_has_many() {
        // in - hub - out with three extra leaves on the hub
        let edges = (1..5).map(|k| (0, k, ex("1")));
        let net = SpinNetwork::new(5, edges, vec![ExactReal::zero(); 5], 1, 2).unwrap();
        // leaves 3 and 4 may be fixed or swapped
        assert_eq!(find_involutions(&net, 10).len(), 2);
    }

    #[test]
    fn exact_weights_matter() {
        let net = SpinNetwork::chain(&[ex("sqrt(2)"), ex("2/sqrt(2)")]).unwrap();
        assert_eq!(find_involutions(&net, 10).len(), 1);
        let net = SpinNetwork::chain(&[ex("sqrt(2)"), ex("1.4142135623730951")]).unwrap();
        assert!(find_involutions(&net, 10).is_empty());
    }

    #[test]
    fn basis_round_trip() {
        let perm = [3, 2, 1, 0, 4];
        let b = SymmetryBasis::new(&perm, 0);
        assert_eq!(b.pairs, vec![(0, 3), (1, 2)]);
        assert_eq!(b.fixed, vec![4]);
        let v: Vec<Float> = [0.5, -1.0, 2.0].iter().map(|&x| Float::with_val(128, x)).collect();
        let full = b.embed(Subspace::Plus, &v);
        let back = b.restrict(Subspace::Plus, &full);
        for (x, y) in v.iter().zip(&back) {
            assert!(Float::with_val(128, x - y).abs() < 1e-35);
        }
    }
}
