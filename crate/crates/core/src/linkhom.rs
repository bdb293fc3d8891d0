//! Handle/gap diagrams of the genus-g configuration and the map sending a
//! degeneration to its pair of surviving complement subgroups.
//!
//! Arcs sit on a circle in the order `H1 G1 H2 G2 ... H{g+1} G{g+1}`. Arc
//! index `2i` is handle `H{i+1}` and `2i+1` is gap `G{i+1}`; the same indices
//! label the gaps of the corresponding symmetric-product face.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf2::{restricted_form_rank, Gf2Matrix, Gf2Subspace, Gf2Vector};
use crate::grassmann::{basis_strings, build_gr_range, GrPair};
use crate::homology::{betti_numbers, edge_cycle, ChainComplexZ2};
use crate::poset::FinitePoset;
use crate::symprod::{enumerate_faces, face_of, face_order_complex};

pub const MAX_LINK_GENUS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "in")]
    Inner,
    #[serde(rename = "out")]
    Outer,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Inner => Side::Outer,
            Side::Outer => Side::Inner,
        }
    }
}

/// Parses `"H1"`, `"g3"`, ... into an arc index.
pub fn parse_arc(g: usize, s: &str) -> Result<usize> {
    let s = s.trim();
    let (kind, num) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
    let k: usize = num.parse().map_err(|_| Error::Lookup(format!("bad arc name {s:?}")))?;
    if k == 0 || k > g + 1 {
        return Err(Error::Lookup(format!("arc {s:?} outside 1..={}", g + 1)));
    }
    match kind {
        "H" | "h" => Ok(2 * (k - 1)),
        "G" | "g" => Ok(2 * (k - 1) + 1),
        _ => Err(Error::Lookup(format!("bad arc name {s:?}"))),
    }
}

pub fn arc_name(idx: usize) -> String {
    let kind = if idx.is_multiple_of(2) { 'H' } else { 'G' };
    format!("{kind}{}", idx / 2 + 1)
}

/// A genus-g diagram with some arcs collapsed; bit `k` of `collapsed` is arc `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HandleDiagram {
    g: usize,
    collapsed: u32,
}

impl HandleDiagram {
    pub fn new(g: usize, collapsed: u32) -> Result<Self> {
        if g == 0 || g > MAX_LINK_GENUS {
            return Err(Error::Capacity(format!("diagrams are modelled for 1 <= g <= {MAX_LINK_GENUS}, got {g}")));
        }
        let n = 2 * g + 2;
        if collapsed >> n != 0 {
            return Err(Error::Structural(format!("collapse mask {collapsed:#b} exceeds {n} arcs")));
        }
        if collapsed == (1 << n) - 1 {
            return Err(Error::Structural("all arcs collapsed".into()));
        }
        Ok(HandleDiagram { g, collapsed })
    }

    pub fn top(g: usize) -> Result<Self> {
        Self::new(g, 0)
    }

    pub fn from_arcs(g: usize, arcs: &[&str]) -> Result<Self> {
        let mut m = 0;
        for a in arcs {
            m |= 1 << parse_arc(g, a)?;
        }
        Self::new(g, m)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn n_arcs(&self) -> usize {
        2 * self.g + 2
    }

    pub fn collapsed(&self) -> u32 {
        self.collapsed
    }

    pub fn is_collapsed(&self, arc: usize) -> bool {
        self.collapsed >> arc & 1 == 1
    }

    pub fn collapse(&self, arc: usize) -> Result<Self> {
        if arc >= self.n_arcs() {
            return Err(Error::Lookup(format!("arc index {arc} outside 0..{}", self.n_arcs())));
        }
        if self.is_collapsed(arc) {
            return Err(Error::Structural(format!("arc {} is already collapsed", arc_name(arc))));
        }
        Self::new(self.g, self.collapsed | 1 << arc)
    }

    /// Genus of the merged configuration, `max(n_odd / 2 - 1, 0)`.
    pub fn genus(&self) -> usize {
        face_of(self.n_arcs(), self.collapsed).expect("valid diagram").genus
    }

    /// `self <= other` iff `self` collapses everything `other` does.
    pub fn leq(&self, other: &HandleDiagram) -> bool {
        self.g == other.g && other.collapsed & !self.collapsed == 0
    }

    /// Surviving handles (1-based) or gaps.
    pub fn surviving(&self, side: Side) -> Vec<usize> {
        let off = match side {
            Side::Inner => 0,
            Side::Outer => 1,
        };
        (0..=self.g).filter(|&i| !self.is_collapsed(2 * i + off)).map(|i| i + 1).collect()
    }

    pub fn collapsed_names(&self) -> Vec<String> {
        (0..self.n_arcs()).filter(|&k| self.is_collapsed(k)).map(arc_name).collect()
    }

    /// All valid diagrams of genus parameter `g`.
    pub fn all(g: usize) -> Result<Vec<HandleDiagram>> {
        let n = 2 * g + 2;
        (0..(1u32 << n) - 1).map(|m| HandleDiagram::new(g, m)).collect()
    }
}

impl fmt::Debug for HandleDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HandleDiagram(g={}, collapsed=[{}])", self.g, self.collapsed_names().join(","))
    }
}

/// Loop classes in the raw bases: inner `a_1..a_{g+1}`, outer `b_1..b_{g+1}`,
/// with `a_{g+1} = a_1 + ... + a_g` and likewise for `b`.
#[derive(Clone, Debug)]
pub struct Generators {
    pub g: usize,
    pub inner: Vec<Gf2Vector>,
    pub outer: Vec<Gf2Vector>,
    pub inner_relation: Vec<usize>,
    pub outer_relation: Vec<usize>,
}

pub fn generators(g: usize) -> Result<Generators> {
    if g == 0 {
        return Err(Error::Precondition("genus must be positive".into()));
    }
    let mut loops: Vec<Gf2Vector> = (0..g).map(|i| Gf2Vector::unit(g, i)).collect();
    let mut last = Gf2Vector::zeros(g);
    for v in &loops {
        last.xor_assign(v);
    }
    loops.push(last);
    let rel: Vec<usize> = (1..=g + 1).collect();
    Ok(Generators { g, inner: loops.clone(), outer: loops, inner_relation: rel.clone(), outer_relation: rel })
}

/// Feet `b` interleave with feet `a`; arc `k` sits at position `k` on the circle.
fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| {
        let (lo, hi) = (a.0, a.1);
        if lo < hi {
            lo < x && x < hi
        } else {
            x > lo || x < hi
        }
    };
    inside(b.0) != inside(b.1)
}

/// `(g+1) x (g+1)` matrix: entry `(i, j)` is 1 iff loop `a_{i+1}` with feet on
/// `H_{i+1}, H_{i+2}` and loop `b_{j+1}` with feet on `G_{j+1}, G_{j+2}` interleave.
pub fn raw_linking_matrix(g: usize) -> Gf2Matrix {
    let h = |i: usize| 2 * (i % (g + 1));
    let gg = |j: usize| 2 * (j % (g + 1)) + 1;
    Gf2Matrix::from_fn(g + 1, g + 1, |i, j| interleave((h(i), h(i + 1)), (gg(j), gg(j + 1))))
}

/// Restriction of the raw linking matrix to `a_1..a_g` x `b_1..b_g`.
pub fn linking_matrix(g: usize) -> Gf2Matrix {
    let full = raw_linking_matrix(g);
    Gf2Matrix::from_fn(g, g, |i, j| full.get(i, j))
}

/// Base changes with `P^T R Q = I`.
#[derive(Clone, Debug)]
pub struct NormalizedBasis {
    pub raw: Gf2Matrix,
    pub p: Gf2Matrix,
    pub q: Gf2Matrix,
}

impl NormalizedBasis {
    /// Row vector of raw inner coordinates to normalized coordinates: `u R`.
    pub fn inner_coords(&self, u: &Gf2Vector) -> Gf2Vector {
        let m = Gf2Matrix::from_rows(u.len(), vec![u.clone()]).expect("width matches");
        m.mul(&self.raw).expect("square").row(0).clone()
    }

    /// Normalized basis vectors of the inner side, in raw coordinates.
    pub fn inner_basis(&self) -> Vec<Gf2Vector> {
        self.p.transpose().rows().to_vec()
    }
}

/// `Q = I` and `P^T = R^{-1}`, with the inverse from Gauss-Jordan elimination.
pub fn normalized_basis(g: usize) -> Result<NormalizedBasis> {
    let raw = linking_matrix(g);
    let inv = raw.inverse().ok_or_else(|| Error::Structural(format!("linking matrix of genus {g} is singular")))?;
    Ok(NormalizedBasis { p: inv.transpose(), q: Gf2Matrix::identity(g), raw })
}

/// Images of the complement homology, normalized so the linking form is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupPair {
    pub a_in: Gf2Subspace,
    pub a_out: Gf2Subspace,
}

impl SubgroupPair {
    pub fn form_rank(&self) -> usize {
        let n = self.a_in.ambient_dim();
        restricted_form_rank(&Gf2Matrix::identity(n), &self.a_in, &self.a_out).expect("same ambient")
    }

    pub fn leq(&self, other: &SubgroupPair) -> bool {
        self.a_in.is_subspace_of(&other.a_in) && self.a_out.is_subspace_of(&other.a_out)
    }

    pub fn to_gr_pair(&self) -> GrPair {
        GrPair { a1: self.a_in.clone(), a2: self.a_out.clone(), rank_i: self.form_rank() }
    }

    pub fn side(&self, side: Side) -> &Gf2Subspace {
        match side {
            Side::Inner => &self.a_in,
            Side::Outer => &self.a_out,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "in": basis_strings(&self.a_in),
            "out": basis_strings(&self.a_out),
            "rank": self.form_rank(),
        })
    }
}

/// Path classes between surviving tunnels, in raw coordinates.
fn surviving_span(g: usize, surviving: &[usize]) -> Gf2Subspace {
    // class of the path from tunnel 1 to tunnel k is a_1 + ... + a_{k-1}
    let prefix = |k: usize| {
        let mut v = Gf2Vector::zeros(g);
        for i in 0..(k - 1).min(g) {
            v.set(i, true);
        }
        v
    };
    let gens: Vec<Gf2Vector> = surviving
        .windows(2)
        .map(|w| {
            let mut v = prefix(w[0]);
            v.xor_assign(&prefix(w[1]));
            v
        })
        .collect();
    Gf2Subspace::span(g, &gens).expect("width g")
}

/// Raw-coordinate subgroups of a diagram, before normalization.
pub fn raw_subgroups(d: &HandleDiagram) -> (Gf2Subspace, Gf2Subspace) {
    let g = d.g();
    (surviving_span(g, &d.surviving(Side::Inner)), surviving_span(g, &d.surviving(Side::Outer)))
}

/// The subgroup pair of a diagram in normalized coordinates.
pub fn f_map(d: &HandleDiagram) -> SubgroupPair {
    let nb = normalized_basis(d.g()).expect("linking matrix is invertible");
    let (inner, outer) = raw_subgroups(d);
    SubgroupPair { a_in: inner.image(&nb.raw).expect("square"), a_out: outer.image(&nb.q).expect("square") }
}

/// The 12 single and adjacent-double collapses in cyclic order, with their images.
#[derive(Clone, Debug)]
pub struct TwelveCycle {
    pub strata: Vec<HandleDiagram>,
    pub images: Vec<SubgroupPair>,
}

pub fn twelve_cycle() -> TwelveCycle {
    let g = 2;
    let n = 2 * g + 2;
    let mut strata = Vec::with_capacity(2 * n);
    for k in 0..n {
        strata.push(HandleDiagram::new(g, 1 << k).expect("single collapse"));
        strata.push(HandleDiagram::new(g, 1 << k | 1 << ((k + 1) % n)).expect("double collapse"));
    }
    let images = strata.iter().map(f_map).collect();
    TwelveCycle { strata, images }
}

/// Outcome of checking the 12-cycle against `Gr^2[1]`.
#[derive(Clone, Debug, Serialize)]
pub struct TwelveCycleReport {
    pub distinct: bool,
    pub exhausts: bool,
    pub arrows_ok: bool,
    pub is_boundary: bool,
    pub betti: Vec<usize>,
    pub cycle_vertices: Vec<usize>,
}

impl TwelveCycleReport {
    pub fn passed(&self) -> bool {
        self.distinct && self.exhausts && self.arrows_ok && !self.is_boundary
    }
}

pub fn check_twelve_cycle(tc: &TwelveCycle) -> Result<TwelveCycleReport> {
    let gr = build_gr_range(2, 1, 1)?;
    let set: BTreeSet<(Gf2Subspace, Gf2Subspace)> =
        tc.images.iter().map(|p| (p.a_in.clone(), p.a_out.clone())).collect();
    let distinct = set.len() == tc.images.len();
    let idx: Vec<Option<usize>> = tc.images.iter().map(|p| gr.index_of(&p.a_in, &p.a_out)).collect();
    let exhausts = idx.iter().all(Option::is_some) && set.len() == gr.len();
    // double collapses sit at odd positions and must lie below both neighbours
    let m = tc.images.len();
    let arrows_ok = (0..m)
        .filter(|i| i % 2 == 1)
        .all(|i| tc.images[i].leq(&tc.images[i - 1]) && tc.images[i].leq(&tc.images[(i + 1) % m]));
    let complex = gr.order_complex()?;
    let betti = betti_numbers(&complex)?;
    let mut is_boundary = true;
    let cycle_vertices: Vec<usize> = idx.iter().flatten().copied().collect();
    if cycle_vertices.len() == m {
        let walk: Vec<u32> = cycle_vertices.iter().map(|&v| v as u32).collect();
        let z = edge_cycle(&complex, &walk)?;
        is_boundary = ChainComplexZ2::from_complex(&complex)?.is_boundary(&z)?;
    }
    Ok(TwelveCycleReport { distinct, exhausts, arrows_ok, is_boundary, betti, cycle_vertices })
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub direction: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatReport {
    pub g: usize,
    pub pairs_checked: usize,
    pub converse_pairs_checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Monotonicity of `f_map` over all comparable diagrams, and the converse on
/// diagrams of genus at least 1.
pub fn order_compatibility_check(g: usize) -> Result<CompatReport> {
    let diagrams = HandleDiagram::all(g)?;
    let images: Vec<SubgroupPair> = diagrams.par_iter().map(f_map).collect();
    let genus: Vec<usize> = diagrams.iter().map(HandleDiagram::genus).collect();
    let results: Vec<(usize, usize, Vec<Counterexample>)> = (0..diagrams.len())
        .into_par_iter()
        .map(|i| {
            let mut fwd = 0;
            let mut conv = 0;
            let mut bad = Vec::new();
            for j in 0..diagrams.len() {
                let (d, e) = (&diagrams[i], &diagrams[j]);
                let dle = d.leq(e);
                if dle {
                    fwd += 1;
                    if !images[i].leq(&images[j]) {
                        bad.push(Counterexample {
                            lower: d.collapsed_names(),
                            upper: e.collapsed_names(),
                            direction: "monotone",
                        });
                    }
                }
                if genus[i] >= 1 && genus[j] >= 1 {
                    conv += 1;
                    if images[i].leq(&images[j]) && !dle {
                        bad.push(Counterexample {
                            lower: d.collapsed_names(),
                            upper: e.collapsed_names(),
                            direction: "converse",
                        });
                    }
                }
            }
            (fwd, conv, bad)
        })
        .collect();
    let mut report = CompatReport { g, pairs_checked: 0, converse_pairs_checked: 0, counterexamples: Vec::new() };
    for (f, c, b) in results {
        report.pairs_checked += f;
        report.converse_pairs_checked += c;
        report.counterexamples.extend(b);
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyComparison {
    pub g: usize,
    pub strata: usize,
    pub images: usize,
    pub face_betti: Vec<usize>,
    pub image_betti: Vec<usize>,
}

impl HomologyComparison {
    pub fn equal(&self) -> bool {
        self.face_betti == self.image_betti
    }
}

/// Betti numbers of the genus >= 1 boundary strata and of the poset of their images.
pub fn homology_comparison(g: usize) -> Result<HomologyComparison> {
    if g == 0 || g > MAX_LINK_GENUS {
        return Err(Error::Capacity(format!("comparison supports 1 <= g <= {MAX_LINK_GENUS}")));
    }
    let n = 2 * g + 2;
    let faces = enumerate_faces(n, |f| f.zero_set != 0 && f.genus >= 1)?;
    let strata = faces.len();
    let images: BTreeMap<(Gf2Subspace, Gf2Subspace), SubgroupPair> = faces
        .iter()
        .map(|f| {
            let p = f_map(&HandleDiagram::new(g, f.zero_set).expect("proper zero-set"));
            ((p.a_in.clone(), p.a_out.clone()), p)
        })
        .collect();
    let image_list: Vec<SubgroupPair> = images.into_values().collect();
    let n_images = image_list.len();
    let face_betti = betti_numbers(&face_order_complex(faces)?)?;
    let poset = FinitePoset::from_leq(image_list, SubgroupPair::leq)?;
    let top = poset.max_chain_length().saturating_sub(1);
    let image_betti = betti_numbers(&poset.order_complex(top)?)?;
    Ok(HomologyComparison { g, strata, images: n_images, face_betti, image_betti })
}
