//! Simplicial homology with Z2 coefficients by dense bitset elimination.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::gf2::{left_kernel, EchelonBasis, Gf2Matrix, Gf2Vector};

/// Refuse dense matrices larger than this many bytes.
pub const MAX_DENSE_BYTES: usize = 512 << 20;

/// Boundary operators of a simplicial complex.
///
/// `columns[k]` holds one row per k-simplex, its boundary as a vector over the
/// (k-1)-simplices; that is the transpose of the usual boundary matrix.
#[derive(Clone, Debug)]
pub struct ChainComplexZ2 {
    counts: Vec<usize>,
    columns: Vec<Gf2Matrix>,
}

/// A k-chain given by the indices of its simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z2Cycle {
    pub dim: usize,
    pub support: Vec<usize>,
}

impl Z2Cycle {
    pub fn new(dim: usize, mut support: Vec<usize>) -> Self {
        support.sort_unstable();
        // Z2 coefficients: pairs cancel
        let mut out: Vec<usize> = Vec::with_capacity(support.len());
        for s in support {
            if out.last() == Some(&s) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Z2Cycle { dim, support: out }
    }

    pub fn empty(dim: usize) -> Self {
        Z2Cycle { dim, support: Vec::new() }
    }
}

fn check_dense(rows: usize, cols: usize) -> Result<()> {
    if rows.saturating_mul(cols) / 8 > MAX_DENSE_BYTES {
        return Err(Error::Capacity(format!("dense {rows}x{cols} matrix exceeds {MAX_DENSE_BYTES} bytes")));
    }
    Ok(())
}

impl ChainComplexZ2 {
    /// Builds all boundary operators and checks that consecutive ones compose to zero.
    pub fn from_complex(k: &SimplicialComplex) -> Result<Self> {
        let counts = k.counts();
        let mut columns = Vec::with_capacity(counts.len());
        columns.push(Gf2Matrix::zeros(counts.first().copied().unwrap_or(0), 0));
        for d in 1..counts.len() {
            check_dense(counts[d], counts[d - 1])?;
            let rows: Result<Vec<Gf2Vector>> = (0..counts[d])
                .into_par_iter()
                .map(|i| {
                    let s = k.simplex(d, i);
                    let mut v = Gf2Vector::zeros(counts[d - 1]);
                    let mut face = Vec::with_capacity(d);
                    for skip in 0..=d {
                        face.clear();
                        face.extend(s.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &x)| x));
                        let idx = k
                            .index_of(&face)
                            .ok_or_else(|| Error::Structural(format!("face {face:?} of {s:?} is missing")))?;
                        v.set(idx, true);
                    }
                    Ok(v)
                })
                .collect();
            columns.push(Gf2Matrix::from_rows(counts[d - 1], rows?)?);
        }
        let cc = ChainComplexZ2 { counts, columns };
        cc.assert_boundary_squared_zero()?;
        Ok(cc)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Boundary matrix with rows indexed by (k-1)-simplices and columns by k-simplices.
    pub fn boundary(&self, k: usize) -> Gf2Matrix {
        if k == 0 || k >= self.columns.len() {
            let rows = if k == 0 { 0 } else { self.counts.get(k - 1).copied().unwrap_or(0) };
            return Gf2Matrix::zeros(rows, self.counts.get(k).copied().unwrap_or(0));
        }
        self.columns[k].transpose()
    }

    fn assert_boundary_squared_zero(&self) -> Result<()> {
        for k in 2..self.columns.len() {
            let prod = self.columns[k].mul(&self.columns[k - 1])?;
            if !prod.is_zero() {
                return Err(Error::Structural(format!("boundary composition is nonzero in degree {k}")));
            }
        }
        Ok(())
    }

    /// Rank of the k-th boundary operator.
    pub fn boundary_rank(&self, k: usize) -> usize {
        if k == 0 || k >= self.columns.len() {
            return 0;
        }
        rank_dense(self.columns[k].rows())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        let top = self.counts.len();
        let ranks: Vec<usize> = (0..=top).into_par_iter().map(|k| self.boundary_rank(k)).collect();
        (0..top).map(|k| self.counts[k] - ranks[k] - ranks[k + 1]).collect()
    }

    /// Boundary of a chain, as a (k-1)-chain.
    pub fn boundary_of(&self, z: &Z2Cycle) -> Result<Z2Cycle> {
        let n = self.counts.get(z.dim).copied().unwrap_or(0);
        if let Some(&bad) = z.support.iter().find(|&&i| i >= n) {
            return Err(Error::Precondition(format!("simplex index {bad} outside dimension {} (size {n})", z.dim)));
        }
        if z.dim == 0 {
            return Ok(Z2Cycle::empty(0));
        }
        let mut acc = Gf2Vector::zeros(self.counts[z.dim - 1]);
        for &i in &z.support {
            acc.xor_assign(self.columns[z.dim].row(i));
        }
        Ok(Z2Cycle { dim: z.dim - 1, support: acc.ones().collect() })
    }

    pub fn is_cycle(&self, z: &Z2Cycle) -> Result<bool> {
        Ok(self.boundary_of(z)?.support.is_empty())
    }

    /// True iff the cycle lies in the image of the next boundary operator.
    pub fn is_boundary(&self, z: &Z2Cycle) -> Result<bool> {
        if !self.is_cycle(z)? {
            return Err(Error::Precondition(format!("chain of dimension {} is not a cycle", z.dim)));
        }
        if z.support.is_empty() {
            return Ok(true);
        }
        let k = z.dim;
        if k + 1 >= self.columns.len() {
            return Ok(false);
        }
        let mut basis = EchelonBasis::new(self.counts[k]);
        for r in self.columns[k + 1].rows() {
            basis.insert(r.clone());
        }
        let mut v = Gf2Vector::zeros(self.counts[k]);
        for &i in &z.support {
            v.set(i, true);
        }
        Ok(basis.contains(&v))
    }

    /// Cycles whose classes form a basis of the k-th homology group.
    pub fn homology_basis(&self, k: usize) -> Result<Vec<Z2Cycle>> {
        let nk = self.counts.get(k).copied().unwrap_or(0);
        if nk == 0 {
            return Ok(Vec::new());
        }
        check_dense(nk, nk)?;
        let cycles: Vec<Gf2Vector> = if k == 0 {
            (0..nk).map(|i| Gf2Vector::unit(nk, i)).collect()
        } else {
            left_kernel(self.columns[k].rows(), self.counts[k - 1])
        };
        let mut span = EchelonBasis::new(nk);
        if k + 1 < self.columns.len() {
            for r in self.columns[k + 1].rows() {
                span.insert(r.clone());
            }
        }
        let mut out = Vec::new();
        for c in cycles {
            if span.insert(c.clone()) {
                out.push(Z2Cycle { dim: k, support: c.ones().collect() });
            }
        }
        Ok(out)
    }
}

/// Rank of a set of equal-width rows, by elimination with a pivot table.
pub fn rank_dense(rows: &[Gf2Vector]) -> usize {
    let Some(width) = rows.first().map(Gf2Vector::len) else { return 0 };
    let mut pivot_of: Vec<u32> = vec![u32::MAX; width];
    let mut kept: Vec<Gf2Vector> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        while let Some(l) = v.leading() {
            let p = pivot_of[l];
            if p == u32::MAX {
                pivot_of[l] = kept.len() as u32;
                kept.push(v);
                break;
            }
            v.xor_assign(&kept[p as usize]);
        }
    }
    kept.len()
}

/// Betti numbers of a complex; empty for the empty complex.
pub fn betti_numbers(k: &SimplicialComplex) -> Result<Vec<usize>> {
    Ok(ChainComplexZ2::from_complex(k)?.betti_numbers())
}

/// Reduced Betti numbers: `b0 - 1` in degree 0.
pub fn reduced_betti(k: &SimplicialComplex) -> Result<Vec<usize>> {
    if k.is_empty() {
        return Err(Error::Domain("reduced Betti numbers of the empty complex".into()));
    }
    let mut b = betti_numbers(k)?;
    b[0] -= 1;
    Ok(b)
}

pub fn is_boundary(k: &SimplicialComplex, z: &Z2Cycle) -> Result<bool> {
    ChainComplexZ2::from_complex(k)?.is_boundary(z)
}

/// Edge chain of a closed vertex walk `v0 v1 ... v0`.
pub fn edge_cycle(k: &SimplicialComplex, walk: &[u32]) -> Result<Z2Cycle> {
    let mut support = Vec::new();
    for i in 0..walk.len() {
        let (a, b) = (walk[i], walk[(i + 1) % walk.len()]);
        if a == b {
            continue;
        }
        let e = [a.min(b), a.max(b)];
        let idx = k.index_of(&e).ok_or_else(|| Error::Precondition(format!("edge {e:?} is not in the complex")))?;
        support.push(idx);
    }
    Ok(Z2Cycle::new(1, support))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_betti;

    #[test]
    fn hollow_and_solid_triangle() {
        let hollow = SimplicialComplex::closure_of([[0u32, 1], [1, 2], [0, 2]]);
        assert_eq!(betti_numbers(&hollow).unwrap(), vec![1, 1]);
        let solid = SimplicialComplex::closure_of([[0u32, 1, 2]]);
        assert_eq!(betti_numbers(&solid).unwrap(), vec![1, 0, 0]);
        assert_eq!(reduced_betti(&solid).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn boundary_membership() {
        let solid = SimplicialComplex::closure_of([[0u32, 1, 2]]);
        let z = edge_cycle(&solid, &[0, 1, 2]).unwrap();
        assert!(is_boundary(&solid, &z).unwrap());
        assert!(is_boundary(&solid, &Z2Cycle::empty(1)).unwrap());

        let hollow = SimplicialComplex::closure_of([[0u32, 1], [1, 2], [0, 2]]);
        let z = edge_cycle(&hollow, &[0, 1, 2]).unwrap();
        assert!(!is_boundary(&hollow, &z).unwrap());

        let not_cycle = Z2Cycle::new(1, vec![0]);
        assert!(matches!(is_boundary(&hollow, &not_cycle), Err(Error::Precondition(_))));
    }

    #[test]
    fn empty_complex() {
        let e = SimplicialComplex::empty();
        assert_eq!(betti_numbers(&e).unwrap(), Vec::<usize>::new());
        assert!(matches!(reduced_betti(&e), Err(Error::Domain(_))));
    }

    #[test]
    fn torus_and_projective_plane() {
        // 7-vertex torus
        let tri: Vec<[u32; 3]> = (0..7u32)
            .flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]])
            .collect();
        let t = SimplicialComplex::closure_of(tri);
        assert_eq!(betti_numbers(&t).unwrap(), vec![1, 2, 1]);
        assert_eq!(naive_betti(&t), vec![1, 2, 1]);
        // 6-vertex RP2, Z2 Betti (1,1,1)
        let rp2 = SimplicialComplex::closure_of([
            [0u32, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ]);
        assert_eq!(betti_numbers(&rp2).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn homology_basis_of_circle() {
        let hollow = SimplicialComplex::closure_of([[0u32, 1], [1, 2], [0, 2]]);
        let cc = ChainComplexZ2::from_complex(&hollow).unwrap();
        let h1 = cc.homology_basis(1).unwrap();
        assert_eq!(h1.len(), 1);
        assert_eq!(h1[0].support, vec![0, 1, 2]);
        assert!(!cc.is_boundary(&h1[0]).unwrap());
        assert_eq!(cc.homology_basis(0).unwrap().len(), 1);
    }

    #[test]
    fn boundary_matrix_orientation() {
        let solid = SimplicialComplex::closure_of([[0u32, 1, 2]]);
        let cc = ChainComplexZ2::from_complex(&solid).unwrap();
        let d1 = cc.boundary(1);
        assert_eq!((d1.nrows(), d1.ncols()), (3, 3));
        let d2 = cc.boundary(2);
        assert_eq!((d2.nrows(), d2.ncols()), (3, 1));
        assert!(d1.mul(&d2).unwrap().is_zero());
    }
}
