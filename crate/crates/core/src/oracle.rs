//! Slow reference implementations used to cross-check the fast paths.

use rand::Rng;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::gf2::Gf2Subspace;

/// Every subset of `Z2^n` that contains 0 and is closed under addition, as a
/// membership bitset over the `2^n` vectors (vector `x` is bit `x`).
pub fn closed_subsets(n: usize) -> Vec<u64> {
    assert!(n <= 4, "brute force is limited to n <= 4");
    let size = 1usize << n;
    let mut out = Vec::new();
    for set in 0u64..(1u64 << size) {
        if set & 1 == 0 {
            continue;
        }
        let closed = (0..size)
            .all(|a| set >> a & 1 == 0 || (0..size).all(|b| set >> b & 1 == 0 || set >> (a ^ b) & 1 == 1));
        if closed {
            out.push(set);
        }
    }
    out
}

/// Membership bitset of a subspace, in the encoding of [`closed_subsets`].
pub fn membership_bits(s: &Gf2Subspace) -> u64 {
    s.elements().iter().fold(0, |acc, v| acc | 1 << v.to_mask())
}

// schoolbook elimination on byte matrices
fn naive_rank(mut m: Vec<Vec<u8>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if let Some(p) = (r..rows).find(|&i| m[i][c] == 1) {
            m.swap(r, p);
            for i in 0..rows {
                if i != r && m[i][c] == 1 {
                    for j in 0..cols {
                        m[i][j] ^= m[r][j];
                    }
                }
            }
            r += 1;
        }
    }
    r
}

/// Betti numbers from dense boundary matrices.
pub fn naive_betti(k: &SimplicialComplex) -> Vec<usize> {
    let counts = k.counts();
    let mut ranks = vec![0; counts.len() + 1];
    for d in 1..counts.len() {
        let mut m = vec![vec![0u8; counts[d]]; counts[d - 1]];
        for (j, s) in k.simplices(d).enumerate() {
            for skip in 0..=d {
                let face: Vec<u32> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                m[k.index_of(&face).expect("closed under faces")][j] = 1;
            }
        }
        ranks[d] = naive_rank(m);
    }
    (0..counts.len()).map(|d| counts[d] - ranks[d] - ranks[d + 1]).collect()
}

/// Random complex with at most `max_simplices` simplices: closures of random
/// facets of dimension <= 5 on up to 14 vertices, added while the budget allows.
pub fn random_complex<R: Rng>(rng: &mut R, max_simplices: usize) -> Result<SimplicialComplex> {
    if max_simplices == 0 {
        return Err(Error::Precondition("need room for at least one simplex".into()));
    }
    let nv: u32 = rng.random_range(1..=14);
    let mut facets: Vec<Vec<u32>> = Vec::new();
    let mut current = SimplicialComplex::empty();
    for _ in 0..rng.random_range(1..=60) {
        let d = rng.random_range(0..=5usize).min(nv as usize - 1);
        let mut s: Vec<u32> = Vec::with_capacity(d + 1);
        while s.len() <= d {
            let v = rng.random_range(0..nv);
            if !s.contains(&v) {
                s.push(v);
            }
        }
        s.sort_unstable();
        facets.push(s);
        let next = SimplicialComplex::closure_of(facets.iter().map(|f| f.as_slice()));
        if next.total() > max_simplices {
            facets.pop();
            break;
        }
        current = next;
    }
    if current.is_empty() {
        current = SimplicialComplex::closure_of([[0u32]]);
    }
    Ok(current)
}
