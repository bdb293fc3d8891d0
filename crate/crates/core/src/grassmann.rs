//! Grassmannian posets over Z2: all subspaces under inclusion, and pairs of
//! subspaces filtered by the rank of the standard form.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf2::{enumerate_subspaces, restricted_form_rank, Gf2Matrix, Gf2Subspace};
use crate::homology::betti_numbers;
use crate::poset::{FinitePoset, OrderComplex};

pub const MAX_GR_DIM: usize = 4;
pub const MAX_PAIR_DIM: usize = 3;

/// A pair of subspaces with the cached rank of the identity form on `a1 x a2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrPair {
    pub a1: Gf2Subspace,
    pub a2: Gf2Subspace,
    pub rank_i: usize,
}

impl GrPair {
    pub fn new(a1: Gf2Subspace, a2: Gf2Subspace) -> Result<Self> {
        let n = a1.ambient_dim();
        let rank_i = restricted_form_rank(&Gf2Matrix::identity(n), &a1, &a2)?;
        Ok(GrPair { a1, a2, rank_i })
    }

    /// Componentwise inclusion.
    pub fn leq(&self, other: &GrPair) -> bool {
        self.a1.is_subspace_of(&other.a1) && self.a2.is_subspace_of(&other.a2)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a1": basis_strings(&self.a1),
            "a2": basis_strings(&self.a2),
            "rank": self.rank_i,
        })
    }
}

pub fn basis_strings(s: &Gf2Subspace) -> Vec<String> {
    s.basis().rows().iter().map(|r| r.to_string()).collect()
}

/// `Gr^n[n1, n2]` with its poset structure.
#[derive(Clone, Debug)]
pub struct GrRangePoset {
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub poset: FinitePoset<GrPair>,
    index: HashMap<(Gf2Subspace, Gf2Subspace), usize>,
}

impl GrRangePoset {
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn elements(&self) -> &[GrPair] {
        self.poset.labels()
    }

    pub fn index_of(&self, a1: &Gf2Subspace, a2: &Gf2Subspace) -> Option<usize> {
        self.index.get(&(a1.clone(), a2.clone())).copied()
    }

    /// Order complex including every chain.
    pub fn order_complex(&self) -> Result<OrderComplex> {
        let top = self.poset.max_chain_length().saturating_sub(1);
        self.poset.order_complex(top)
    }

    /// Hasse diagram as JSON: each element with its upper covers.
    pub fn hasse_json(&self) -> Value {
        let mut ups: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (x, y) in self.poset.hasse_edges() {
            ups[x].push(y);
        }
        let elements: Vec<Value> = self
            .elements()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut v = p.to_json();
                v["index"] = json!(i);
                v["covers"] = json!(ups[i]);
                v
            })
            .collect();
        json!({ "n": self.n, "lo": self.n1, "hi": self.n2, "elements": elements })
    }
}

/// All subspaces of Z2^n ordered by inclusion.
pub fn build_gr(n: usize) -> Result<FinitePoset<Gf2Subspace>> {
    if n > MAX_GR_DIM {
        return Err(Error::Capacity(format!("build_gr supports n <= {MAX_GR_DIM}, got {n}")));
    }
    let subs = enumerate_subspaces(n)?;
    FinitePoset::from_leq(subs, |a, b| a.is_subspace_of(b))
}

/// Pairs `(A1, A2)` with `n1 <= rank(I|A1 x A2) <= n2`, ordered componentwise.
pub fn build_gr_range(n: usize, n1: usize, n2: usize) -> Result<GrRangePoset> {
    if n > MAX_PAIR_DIM {
        return Err(Error::Capacity(format!("build_gr_range supports n <= {MAX_PAIR_DIM}, got {n}")));
    }
    if n == 0 || n1 > n2 || n2 > n {
        return Err(Error::Precondition(format!("invalid range n={n}, lo={n1}, hi={n2}")));
    }
    let subs = enumerate_subspaces(n)?;
    let id = Gf2Matrix::identity(n);
    let pairs: Vec<GrPair> = subs
        .par_iter()
        .map(|a1| {
            subs.iter()
                .filter_map(|a2| {
                    let r = restricted_form_rank(&id, a1, a2).expect("same ambient dimension");
                    (n1..=n2).contains(&r).then(|| GrPair { a1: a1.clone(), a2: a2.clone(), rank_i: r })
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    let index = pairs.iter().enumerate().map(|(i, p)| ((p.a1.clone(), p.a2.clone()), i)).collect();
    let poset = FinitePoset::from_leq(pairs, GrPair::leq)?;
    Ok(GrRangePoset { n, n1, n2, poset, index })
}

/// Betti numbers of the order complex of `Gr^n[n1, n2]`.
pub fn gr_range_homology(n: usize, n1: usize, n2: usize) -> Result<Vec<usize>> {
    let p = build_gr_range(n, n1, n2)?;
    betti_numbers(&p.order_complex()?)
}
