//! Abstract simplicial complexes stored as sorted vertex tuples per dimension.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Simplices grouped by dimension. Within a dimension the vertex tuples are
/// ascending and the list is sorted lexicographically, so a simplex's index
/// is found by binary search.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    vertex_count: usize,
    // layers[d] is a flat array of (d+1)-tuples
    layers: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex::default()
    }

    /// Builds a complex from an explicit simplex list, checking that every
    /// face of every simplex is listed.
    pub fn from_simplices<I, S>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut sets: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        for s in simplices {
            let mut t = s.as_ref().to_vec();
            if t.is_empty() {
                continue;
            }
            t.sort_unstable();
            if t.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Structural(format!("repeated vertex in simplex {t:?}")));
            }
            let d = t.len() - 1;
            if sets.len() <= d {
                sets.resize_with(d + 1, BTreeSet::new);
            }
            sets[d].insert(t);
        }
        for d in 1..sets.len() {
            for s in &sets[d] {
                for skip in 0..s.len() {
                    let face: Vec<u32> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    if !sets[d - 1].contains(&face) {
                        return Err(Error::Structural(format!("face {face:?} of {s:?} is missing")));
                    }
                }
            }
        }
        Ok(Self::from_sorted_sets(sets))
    }

    /// Downward closure of the given simplices.
    pub fn closure_of<I, S>(maximal: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut sets: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        for s in maximal {
            let mut t = s.as_ref().to_vec();
            t.sort_unstable();
            t.dedup();
            let k = t.len();
            if k == 0 {
                continue;
            }
            assert!(k < 32, "simplex too large for closure");
            for mask in 1u32..(1u32 << k) {
                let face: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| t[i]).collect();
                let d = face.len() - 1;
                if sets.len() <= d {
                    sets.resize_with(d + 1, BTreeSet::new);
                }
                sets[d].insert(face);
            }
        }
        Self::from_sorted_sets(sets)
    }

    fn from_sorted_sets(sets: Vec<BTreeSet<Vec<u32>>>) -> Self {
        let layers: Vec<Vec<u32>> = sets.into_iter().map(|s| s.into_iter().flatten().collect()).collect();
        let vertex_count = layers.first().map_or(0, |l| l.iter().map(|&v| v as usize + 1).max().unwrap_or(0));
        SimplicialComplex { vertex_count, layers }
    }

    /// Takes layers whose tuples are already ascending and sorted; verified in debug builds.
    pub(crate) fn from_layers(vertex_count: usize, mut layers: Vec<Vec<u32>>) -> Self {
        while layers.last().is_some_and(|l| l.is_empty()) {
            layers.pop();
        }
        for (d, l) in layers.iter().enumerate() {
            debug_assert_eq!(l.len() % (d + 1), 0);
            debug_assert!(l.chunks(d + 1).zip(l.chunks(d + 1).skip(1)).all(|(a, b)| a < b));
        }
        SimplicialComplex { vertex_count, layers }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.layers.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn count(&self, d: usize) -> usize {
        self.layers.get(d).map_or(0, |l| l.len() / (d + 1))
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..self.layers.len()).map(|d| self.count(d)).collect()
    }

    pub fn total(&self) -> usize {
        self.counts().iter().sum()
    }

    pub fn simplex(&self, d: usize, i: usize) -> &[u32] {
        &self.layers[d][i * (d + 1)..(i + 1) * (d + 1)]
    }

    pub fn simplices(&self, d: usize) -> impl Iterator<Item = &[u32]> + '_ {
        self.layers.get(d).into_iter().flat_map(move |l| l.chunks(d + 1))
    }

    /// Index of an ascending vertex tuple within its dimension.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        let d = s.len() - 1;
        let layer = self.layers.get(d)?;
        let n = layer.len() / (d + 1);
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match layer[mid * (d + 1)..(mid + 1) * (d + 1)].cmp(s) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        let mut t = s.to_vec();
        t.sort_unstable();
        self.index_of(&t).is_some()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// True iff every simplex joined with `x` is again a simplex.
    pub fn is_cone_with_apex(&self, x: u32) -> bool {
        if self.index_of(&[x]).is_none() {
            return false;
        }
        for d in 0..self.layers.len() {
            for s in self.simplices(d) {
                if s.contains(&x) {
                    continue;
                }
                let mut t = s.to_vec();
                let pos = t.partition_point(|&v| v < x);
                t.insert(pos, x);
                if self.index_of(&t).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Subcomplex spanned by simplices all of whose vertices satisfy `keep`,
    /// with vertices renumbered in increasing order.
    pub fn induced(&self, keep: impl Fn(u32) -> bool) -> (SimplicialComplex, Vec<u32>) {
        let kept: Vec<u32> = self.simplices(0).map(|s| s[0]).filter(|&v| keep(v)).collect();
        let mut new_index = vec![u32::MAX; self.vertex_count];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v as usize] = i as u32;
        }
        let mut layers = Vec::new();
        for d in 0..self.layers.len() {
            let mut l = Vec::new();
            for s in self.simplices(d) {
                if s.iter().all(|&v| new_index[v as usize] != u32::MAX) {
                    l.extend(s.iter().map(|&v| new_index[v as usize]));
                }
            }
            layers.push(l);
        }
        (SimplicialComplex::from_layers(kept.len(), layers), kept)
    }

    /// One simplex per line, vertices ascending, separated by spaces.
    pub fn face_list(&self) -> String {
        let mut out = String::new();
        for d in 0..self.layers.len() {
            for s in self.simplices(d) {
                let line: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }

    /// Vertex degrees in the 1-skeleton.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in self.simplices(1) {
            deg[e[0] as usize] += 1;
            deg[e[1] as usize] += 1;
        }
        deg
    }

    /// Number of connected components of the 1-skeleton.
    pub fn components(&self) -> usize {
        let n = self.vertex_count;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0] as usize), find(&mut parent, e[1] as usize));
            if a != b {
                parent[a] = b;
            }
        }
        let present: Vec<usize> = self.simplices(0).map(|s| s[0] as usize).collect();
        let mut roots: Vec<usize> = present.iter().map(|&v| find(&mut parent, v)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_triangle() {
        let k = SimplicialComplex::closure_of([[0u32, 1, 2]]);
        assert_eq!(k.counts(), vec![3, 3, 1]);
        assert_eq!(k.euler_characteristic(), 1);
        assert!(k.is_cone_with_apex(0));
        assert_eq!(k.index_of(&[1, 2]), Some(2));
    }

    #[test]
    fn missing_face_rejected() {
        let err = SimplicialComplex::from_simplices(vec![vec![0u32], vec![1], vec![0, 1, 2]]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn hollow_triangle_is_not_a_cone() {
        let k = SimplicialComplex::closure_of([[0u32, 1], [1, 2], [0, 2]]);
        for v in 0..3 {
            assert!(!k.is_cone_with_apex(v));
        }
        assert_eq!(k.degrees(), vec![2, 2, 2]);
        assert_eq!(k.components(), 1);
    }

    #[test]
    fn face_list_format() {
        let k = SimplicialComplex::closure_of([[2u32, 0]]);
        assert_eq!(k.face_list(), "0\n2\n0 2\n");
    }
}
