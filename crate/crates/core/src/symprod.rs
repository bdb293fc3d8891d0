//! Configurations of n points on the circle with angle sum in 2 pi Z, their
//! gap coordinates, and the face structure of the resulting simplex.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::trigpoly::{genus_from_n_odd, n_odd, RootConfig};

pub const MAX_FACE_N: usize = 10;
pub const MEMBERSHIP_TOL: f64 = 1e-9;
const ZERO_GAP: f64 = 1e-12;

/// Sorted angles in `[0, 2 pi)` summing to a multiple of 2 pi.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymConfig {
    angles: Vec<f64>,
}

impl SymConfig {
    pub fn new(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::Precondition("configuration needs at least one point".into()));
        }
        let mut a: Vec<f64> = angles.iter().map(|x| x.rem_euclid(TAU)).map(|x| if x >= TAU { 0.0 } else { x }).collect();
        a.sort_by(f64::total_cmp);
        let c = SymConfig { angles: a };
        let r = c.angle_sum().rem_euclid(TAU);
        if r.min(TAU - r) > MEMBERSHIP_TOL * (1.0 + angles.len() as f64) {
            return Err(Error::Membership(format!("angle sum {} is not in 2 pi Z", c.angle_sum())));
        }
        Ok(c)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angle_sum(&self) -> f64 {
        self.angles.iter().sum()
    }
}

/// `n` cyclic gaps summing to 2 pi; gap `k` runs from point `k` to point `k+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacePattern {
    pub gaps: Vec<f64>,
}

impl FacePattern {
    pub fn new(gaps: Vec<f64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::Precondition("pattern needs at least one gap".into()));
        }
        if let Some(g) = gaps.iter().find(|g| !(**g >= 0.0)) {
            return Err(Error::Precondition(format!("negative gap {g}")));
        }
        let s: f64 = gaps.iter().sum();
        if (s - TAU).abs() > MEMBERSHIP_TOL * (1.0 + gaps.len() as f64) {
            return Err(Error::Precondition(format!("gaps sum to {s}, expected 2 pi")));
        }
        Ok(FacePattern { gaps })
    }

    pub fn n(&self) -> usize {
        self.gaps.len()
    }

    /// Bit `k` set iff gap `k` vanishes.
    pub fn zero_set(&self) -> u32 {
        self.gaps.iter().enumerate().filter(|(_, &g)| g <= ZERO_GAP).fold(0, |m, (k, _)| m | 1 << k)
    }

    pub fn distinct_points(&self) -> usize {
        self.n() - self.zero_set().count_ones() as usize
    }

    pub fn cell_dim(&self) -> usize {
        self.distinct_points() - 1
    }
}

/// Gap coordinates starting from the base point.
///
/// The base point is the one whose centered coordinate is smallest before
/// reduction mod 2 pi; with `m` the winding `round(sum / 2 pi)` it is the
/// sorted point at position `(n - m) mod n`. This makes the map an exact
/// inverse of [`from_simplex_coords`].
pub fn to_simplex_coords(c: &SymConfig) -> Result<FacePattern> {
    let n = c.n();
    let m = (c.angle_sum() / TAU).round() as i64;
    let base = (n as i64 - m).rem_euclid(n as i64) as usize;
    let a = c.angles();
    let mut gaps = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        let i = (base + k) % n;
        let j = (base + k + 1) % n;
        let mut d = a[j] - a[i];
        if j == 0 {
            d += TAU;
        }
        gaps.push(d.max(0.0));
    }
    let used: f64 = gaps.iter().sum();
    gaps.push((TAU - used).max(0.0));
    FacePattern::new(gaps)
}

/// `s_1 = 0, s_{k+1} = s_k + r_k`, then centered by the mean.
pub fn from_simplex_coords(p: &FacePattern) -> Result<SymConfig> {
    let p = FacePattern::new(p.gaps.clone())?;
    let n = p.n();
    let mut s = Vec::with_capacity(n);
    let mut acc = 0.0;
    s.push(0.0);
    for k in 0..n - 1 {
        acc += p.gaps[k];
        s.push(acc);
    }
    let mean = s.iter().sum::<f64>() / n as f64;
    let t: Vec<f64> = s.iter().map(|x| x - mean).collect();
    SymConfig::new(&t)
}

/// `c0 <= c1` iff every gap vanishing in `c1` vanishes in `c0`.
pub fn face_leq(c0: &FacePattern, c1: &FacePattern) -> Result<bool> {
    if c0.n() != c1.n() {
        return Err(Error::Structural(format!("patterns have {} and {} gaps", c0.n(), c1.n())));
    }
    Ok(face_leq_masks(c0.zero_set(), c1.zero_set()))
}

pub fn face_leq_masks(z0: u32, z1: u32) -> bool {
    z1 & !z0 == 0
}

/// A stratum of the closed simplex, labelled by its vanishing gaps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub n: usize,
    pub zero_set: u32,
    /// Multiplicities of the distinct points, starting with the point that contains point 0.
    pub multiplicities: Vec<usize>,
    pub n_odd: usize,
    pub genus: usize,
}

impl Face {
    pub fn distinct_points(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn dim(&self) -> usize {
        self.distinct_points() - 1
    }

    /// Representative pattern: surviving gaps all equal.
    pub fn representative(&self) -> FacePattern {
        let k = self.distinct_points() as f64;
        let gaps = (0..self.n).map(|i| if self.zero_set >> i & 1 == 1 { 0.0 } else { TAU / k }).collect();
        FacePattern { gaps }
    }

    /// Blocks of consecutive point labels merged into each distinct point.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        point_blocks(self.n, self.zero_set)
    }
}

/// Cyclic runs of points joined by vanishing gaps.
pub fn point_blocks(n: usize, zero_set: u32) -> Vec<Vec<usize>> {
    assert!(zero_set.count_ones() < n as u32, "all gaps cannot vanish");
    // start right after a surviving gap
    let start = (0..n).find(|&k| zero_set >> k & 1 == 0).expect("a gap survives") + 1;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    for step in 0..n {
        let p = (start + step) % n;
        cur.push(p);
        if zero_set >> p & 1 == 0 {
            blocks.push(std::mem::take(&mut cur));
        }
    }
    // rotate so the block holding point 0 comes first
    let first = blocks.iter().position(|b| b.contains(&0)).expect("point 0 is somewhere");
    blocks.rotate_left(first);
    blocks
}

/// Stratum data for one zero-set; multiplicities are merged-run lengths.
pub fn face_of(n: usize, zero_set: u32) -> Result<Face> {
    if n == 0 || n > MAX_FACE_N {
        return Err(Error::Capacity(format!("face enumeration supports 1 <= n <= {MAX_FACE_N}, got {n}")));
    }
    if zero_set >> n != 0 || zero_set.count_ones() as usize >= n {
        return Err(Error::Precondition(format!("zero-set {zero_set:#b} is not a proper subset of {n} gaps")));
    }
    let blocks = point_blocks(n, zero_set);
    let multiplicities: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let pattern = Face { n, zero_set, multiplicities, n_odd: 0, genus: 0 };
    let rep = from_simplex_coords(&pattern.representative())?;
    // the representative's distinct angles carry the merged multiplicities
    let raw: Vec<(f64, f64, usize)> = rep.angles().iter().map(|&a| (a, 0.0, 1)).collect();
    let cfg = RootConfig::clustered(&raw, 1e-9);
    debug_assert_eq!(cfg.points.len(), pattern.multiplicities.len());
    let odd = n_odd(&cfg, 1e-9);
    Ok(Face { genus: genus_from_n_odd(odd), n_odd: odd, ..pattern })
}

/// All strata except the empty one, filtered by `predicate`, sorted by zero-set.
pub fn enumerate_faces(n: usize, predicate: impl Fn(&Face) -> bool + Sync) -> Result<Vec<Face>> {
    if n == 0 || n > MAX_FACE_N {
        return Err(Error::Capacity(format!("face enumeration supports 1 <= n <= {MAX_FACE_N}, got {n}")));
    }
    let full = (1u32 << n) - 1;
    let mut faces: Vec<Face> = (0..full)
        .into_par_iter()
        .map(|z| face_of(n, z))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|f| predicate(f))
        .collect();
    faces.sort_by_key(|f| f.zero_set);
    Ok(faces)
}

/// Faces ordered by `face_leq`.
pub fn face_poset(faces: Vec<Face>) -> Result<FinitePoset<Face>> {
    FinitePoset::from_leq(faces, |a, b| face_leq_masks(a.zero_set, b.zero_set))
}

/// Order complex of the face poset, i.e. the barycentric subdivision
/// restricted to the given strata.
pub fn face_order_complex(faces: Vec<Face>) -> Result<SimplicialComplex> {
    let p = face_poset(faces)?;
    let top = p.max_chain_length().saturating_sub(1);
    p.order_complex(top)
}
