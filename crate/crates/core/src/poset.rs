//! Finite posets, read as T0 Alexandroff spaces, and their order complexes.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// The order complex of a poset: vertices are element indices, simplices are chains.
pub type OrderComplex = SimplicialComplex;

pub const DEFAULT_SIMPLEX_BUDGET: usize = 10_000_000;
pub const BUDGET_ENV: &str = "PINCHLAB_BUDGET";

/// Simplex budget from `PINCHLAB_BUDGET`, falling back to the default.
pub fn configured_budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SIMPLEX_BUDGET)
}

#[derive(Clone, Debug)]
pub struct FinitePoset<L> {
    labels: Vec<L>,
    // up[x] has bit y set iff x <= y
    up: Vec<Vec<u64>>,
}

#[inline]
fn bit(row: &[u64], j: usize) -> bool {
    row[j >> 6] >> (j & 63) & 1 == 1
}

impl<L> FinitePoset<L> {
    /// Builds the poset from a `leq` predicate and checks the partial-order axioms.
    pub fn from_leq(labels: Vec<L>, leq: impl Fn(&L, &L) -> bool + Sync) -> Result<Self>
    where
        L: Sync,
    {
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        let up: Vec<Vec<u64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                for j in 0..n {
                    if leq(&labels[i], &labels[j]) {
                        row[j >> 6] |= 1 << (j & 63);
                    }
                }
                row
            })
            .collect();
        Self::from_table(labels, up)
    }

    /// Builds the poset from explicit strict relations `a < b`, taking the transitive closure.
    pub fn from_relations(labels: Vec<L>, lt_pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        let mut up = vec![vec![0u64; words]; n];
        for (i, row) in up.iter_mut().enumerate() {
            row[i >> 6] |= 1 << (i & 63);
        }
        for &(a, b) in lt_pairs {
            if a >= n || b >= n {
                return Err(Error::Lookup(format!("relation ({a},{b}) outside 0..{n}")));
            }
            up[a][b >> 6] |= 1 << (b & 63);
        }
        // Warshall closure on bit rows
        for k in 0..n {
            let rk = up[k].clone();
            for row in up.iter_mut() {
                if bit(row, k) {
                    for (w, r) in row.iter_mut().zip(&rk) {
                        *w |= r;
                    }
                }
            }
        }
        Self::from_table(labels, up)
    }

    fn from_table(labels: Vec<L>, up: Vec<Vec<u64>>) -> Result<Self> {
        let n = labels.len();
        for i in 0..n {
            if !bit(&up[i], i) {
                return Err(Error::Structural(format!("relation is not reflexive at {i}")));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if bit(&up[i], j) && bit(&up[j], i) {
                    return Err(Error::Structural(format!("relation is not antisymmetric at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if bit(&up[i], j) && up[j].iter().zip(&up[i]).any(|(a, b)| a & !b != 0) {
                    return Err(Error::Structural(format!("relation is not transitive through ({i},{j})")));
                }
            }
        }
        Ok(FinitePoset { labels, up })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &L {
        &self.labels[i]
    }

    pub fn index_of(&self, x: &L) -> Option<usize>
    where
        L: PartialEq,
    {
        self.labels.iter().position(|l| l == x)
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        bit(&self.up[i], j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    fn check(&self, x: usize) -> Result<()> {
        if x >= self.len() {
            return Err(Error::Lookup(format!("element {x} not in poset of size {}", self.len())));
        }
        Ok(())
    }

    /// Minimal open set `{y : x <= y}`.
    pub fn up_set(&self, x: usize) -> Result<Vec<usize>> {
        self.check(x)?;
        Ok((0..self.len()).filter(|&y| self.leq(x, y)).collect())
    }

    pub fn down_set(&self, x: usize) -> Result<Vec<usize>> {
        self.check(x)?;
        Ok((0..self.len()).filter(|&y| self.leq(y, x)).collect())
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| (0..self.len()).all(|y| !self.lt(y, x))).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| (0..self.len()).all(|y| !self.lt(x, y))).collect()
    }

    /// Subposet on the given elements, in the given order.
    pub fn induced(&self, elems: &[usize]) -> Result<FinitePoset<L>>
    where
        L: Clone,
    {
        for &e in elems {
            self.check(e)?;
        }
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        let m = elems.len();
        let words = m.div_ceil(64).max(1);
        let up = elems
            .iter()
            .map(|&a| {
                let mut row = vec![0u64; words];
                for (j, &b) in elems.iter().enumerate() {
                    if self.leq(a, b) {
                        row[j >> 6] |= 1 << (j & 63);
                    }
                }
                row
            })
            .collect();
        Self::from_table(labels, up)
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Number of elements in a longest chain; 0 for the empty poset.
    pub fn max_chain_length(&self) -> usize {
        let n = self.len();
        // process in order of increasing down-set size, which is a linear extension
        let mut order: Vec<usize> = (0..n).collect();
        let down_size: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| self.leq(y, x)).count()).collect();
        order.sort_by_key(|&x| down_size[x]);
        let mut best = vec![1usize; n];
        for (k, &x) in order.iter().enumerate() {
            for &y in &order[..k] {
                if self.lt(y, x) {
                    best[x] = best[x].max(best[y] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// All chains with at most `max_dim + 1` elements, under the configured budget.
    pub fn order_complex(&self, max_dim: usize) -> Result<OrderComplex>
    where
        L: Sync,
    {
        self.order_complex_with_budget(max_dim, configured_budget())
    }

    /// Chain enumeration partitioned by the minimum of each chain.
    pub fn order_complex_with_budget(&self, max_dim: usize, budget: usize) -> Result<OrderComplex>
    where
        L: Sync,
    {
        let n = self.len();
        let total = AtomicUsize::new(0);
        let overflow = AtomicBool::new(false);
        let per_start: Vec<Vec<Vec<Vec<u32>>>> = (0..n)
            .into_par_iter()
            .map(|start| {
                let mut layers: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_dim + 1];
                let mut chain = vec![start];
                self.extend_chains(&mut chain, max_dim, &mut layers, &total, &overflow, budget);
                layers
            })
            .collect();
        let seen = total.load(Ordering::Relaxed);
        if overflow.load(Ordering::Relaxed) {
            let mut partial = vec![0usize; max_dim + 1];
            for layers in &per_start {
                for (d, l) in layers.iter().enumerate() {
                    partial[d] += l.len();
                }
            }
            return Err(Error::Capacity(format!(
                "order complex exceeds simplex budget {budget}; partial counts by dimension {partial:?} ({seen} simplices seen)"
            )));
        }
        let mut merged: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_dim + 1];
        for layers in per_start {
            for (d, l) in layers.into_iter().enumerate() {
                merged[d].extend(l);
            }
        }
        let layers = merged
            .into_par_iter()
            .map(|mut l| {
                l.par_sort_unstable();
                l.into_iter().flatten().collect::<Vec<u32>>()
            })
            .collect();
        Ok(SimplicialComplex::from_layers(n, layers))
    }

    fn extend_chains(
        &self,
        chain: &mut Vec<usize>,
        max_dim: usize,
        layers: &mut [Vec<Vec<u32>>],
        total: &AtomicUsize,
        overflow: &AtomicBool,
        budget: usize,
    ) {
        if overflow.load(Ordering::Relaxed) {
            return;
        }
        if total.fetch_add(1, Ordering::Relaxed) >= budget {
            overflow.store(true, Ordering::Relaxed);
            return;
        }
        let mut s: Vec<u32> = chain.iter().map(|&v| v as u32).collect();
        s.sort_unstable();
        layers[chain.len() - 1].push(s);
        if chain.len() > max_dim {
            return;
        }
        let top = *chain.last().expect("chain is non-empty");
        for y in 0..self.len() {
            if self.lt(top, y) {
                chain.push(y);
                self.extend_chains(chain, max_dim, layers, total, overflow, budget);
                chain.pop();
            }
        }
    }
}

/// `up_set` followed by the order complex of the induced subposet; the apex is
/// `x`'s index in the result.
pub fn up_set_complex<L: Clone + Sync>(p: &FinitePoset<L>, x: usize) -> Result<(OrderComplex, u32)> {
    let up = p.up_set(x)?;
    let sub = p.induced(&up)?;
    let apex = up.iter().position(|&y| y == x).expect("x is in its own up-set") as u32;
    let k = sub.order_complex(sub.len().saturating_sub(1))?;
    Ok((k, apex))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FinitePoset<char> {
        FinitePoset::from_relations(vec!['a', 'b', 'c'], &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn up_sets_of_a_chain() {
        let p = chain3();
        assert_eq!(p.up_set(0).unwrap(), vec![0, 1, 2]);
        assert_eq!(p.up_set(2).unwrap(), vec![2]);
        assert!(matches!(p.up_set(3), Err(Error::Lookup(_))));
        assert_eq!(p.max_chain_length(), 3);
    }

    #[test]
    fn chain_complex_is_a_simplex() {
        let k = chain3().order_complex(5).unwrap();
        assert_eq!(k.counts(), vec![3, 3, 1]);
    }

    #[test]
    fn antichain_complex() {
        let p = FinitePoset::from_relations(vec![0, 1, 2], &[]).unwrap();
        let k = p.order_complex(3).unwrap();
        assert_eq!(k.counts(), vec![3]);
        assert_eq!(p.max_chain_length(), 1);
    }

    #[test]
    fn max_dim_truncates() {
        let k = chain3().order_complex(1).unwrap();
        assert_eq!(k.counts(), vec![3, 3]);
    }

    #[test]
    fn axioms_checked() {
        let err = FinitePoset::from_leq(vec![0, 1], |a, b| a != b || a == b).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        let err = FinitePoset::from_leq(vec![0, 1, 2], |a, b| a == b || (*a, *b) == (0, 1) || (*a, *b) == (1, 2))
            .unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn budget_overflow_reports_capacity() {
        let n = 8;
        let labels: Vec<usize> = (0..n).collect();
        let p = FinitePoset::from_leq(labels, |a, b| a <= b).unwrap();
        let err = p.order_complex_with_budget(n, 100).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
        // total chains of an 8-chain is 2^8 - 1
        assert_eq!(p.order_complex_with_budget(n, 255).unwrap().total(), 255);
    }

    #[test]
    fn hasse_of_chain() {
        assert_eq!(chain3().hasse_edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn up_set_is_cone() {
        let p = FinitePoset::from_relations(vec![0, 1, 2, 3], &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        for x in 0..4 {
            let (k, apex) = up_set_complex(&p, x).unwrap();
            assert!(k.is_cone_with_apex(apex));
        }
    }
}
