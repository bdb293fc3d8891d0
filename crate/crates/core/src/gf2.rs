//! Linear algebra over GF(2) on packed bit rows.

use std::fmt;

use crate::error::{Error, Result};

/// Largest ambient dimension accepted by [`enumerate_subspaces`].
pub const MAX_ENUM_DIM: usize = 6;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A vector in Z2^n, bit `i` is coordinate `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Gf2Vector { len, words: vec![0; words_for(len)] }
    }

    /// Unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Low `len` bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    /// Parses a string such as `"110"`; the first character is coordinate 0.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::Structural(format!("invalid bit character {ch:?} in {s:?}"))),
            }
        }
        Ok(Self::from_bools(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// First word, for vectors of length at most 64.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn add(&self, other: &Gf2Vector) -> Result<Gf2Vector> {
        if self.len != other.len {
            return Err(Error::Structural(format!("width mismatch {} vs {}", self.len, other.len)));
        }
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Standard dot product mod 2.
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set coordinate.
    pub fn leading(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

/// Row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Gf2Matrix { cols: ncols, rows: vec![Gf2Vector::zeros(ncols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        Gf2Matrix { cols: n, rows: (0..n).map(|i| Gf2Vector::unit(n, i)).collect() }
    }

    /// Builds a matrix from rows; every row must have width `ncols`.
    pub fn from_rows(ncols: usize, rows: Vec<Gf2Vector>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::Structural(format!("row width {} differs from {ncols}", r.len())));
        }
        Ok(Gf2Matrix { cols: ncols, rows })
    }

    /// Convenience parser: `["110", "011"]`.
    pub fn parse(rows: &[&str]) -> Result<Self> {
        let parsed = rows.iter().map(|s| Gf2Vector::parse(s)).collect::<Result<Vec<_>>>()?;
        let ncols = parsed.first().map_or(0, |r| r.len());
        Self::from_rows(ncols, parsed)
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                if f(i, j) {
                    m.rows[i].set(j, true);
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b);
    }

    pub fn push_row(&mut self, row: Gf2Vector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Structural(format!("row width {} differs from {}", row.len(), self.cols)));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.nrows() {
            return Err(Error::Structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = Gf2Vector::zeros(other.cols);
                for k in r.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(Gf2Matrix { cols: other.cols, rows })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Gf2Vector::is_zero)
    }

    /// Reduced row-echelon form and pivot columns. Zero rows are dropped.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (Gf2Matrix { cols: self.cols, rows }, pivots)
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.rows.clone())
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Gf2Matrix> {
        let n = self.nrows();
        if n != self.cols {
            return None;
        }
        let mut a = self.rows.clone();
        let mut inv: Vec<Gf2Vector> = (0..n).map(|i| Gf2Vector::unit(n, i)).collect();
        for c in 0..n {
            let p = (c..n).find(|&i| a[i].get(c))?;
            a.swap(c, p);
            inv.swap(c, p);
            let (ar, ir) = (a[c].clone(), inv[c].clone());
            for i in 0..n {
                if i != c && a[i].get(c) {
                    a[i].xor_assign(&ar);
                    inv[i].xor_assign(&ir);
                }
            }
        }
        Some(Gf2Matrix { cols: n, rows: inv })
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "Gf2Matrix{{{}x{} {:?}}}", self.nrows(), self.cols, rows)
    }
}

/// Rank by forward elimination keyed on leading bits. Consumes the rows.
pub fn rank_of_rows(rows: Vec<Gf2Vector>) -> usize {
    let mut basis = EchelonBasis::new(rows.first().map_or(0, |r| r.len()));
    for r in rows {
        basis.insert(r);
    }
    basis.len()
}

/// Incremental echelon basis: each stored row has a distinct leading bit and
/// rows are kept reduced against each other's leading bits only.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    // pivot column -> row index
    by_lead: std::collections::BTreeMap<usize, usize>,
    rows: Vec<Gf2Vector>,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis { width, by_lead: Default::default(), rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        let mut v = v.clone();
        loop {
            let Some(l) = v.leading() else { return true };
            match self.by_lead.get(&l) {
                Some(&k) => v.xor_assign(&self.rows[k]),
                None => return false,
            }
        }
    }

    /// Inserts `v`; returns true if the span grew.
    pub fn insert(&mut self, v: Gf2Vector) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let mut v = v;
        loop {
            let Some(l) = v.leading() else { return false };
            match self.by_lead.get(&l) {
                Some(&k) => v.xor_assign(&self.rows[k]),
                None => {
                    self.by_lead.insert(l, self.rows.len());
                    self.rows.push(v);
                    return true;
                }
            }
        }
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }
}

/// A subspace of Z2^n stored by its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Subspace {
    ambient: usize,
    basis: Gf2Matrix,
    // membership bitmask over all 2^n vectors, only when n <= MAX_ENUM_DIM
    members: u64,
}

impl Gf2Subspace {
    pub fn zero(n: usize) -> Self {
        Self::from_rref(Gf2Matrix::zeros(0, n))
    }

    pub fn full(n: usize) -> Self {
        Self::from_rref(Gf2Matrix::identity(n))
    }

    fn from_rref(basis: Gf2Matrix) -> Self {
        let ambient = basis.ncols();
        let mut members = 0u64;
        if ambient <= MAX_ENUM_DIM {
            let masks: Vec<u64> = basis.rows().iter().map(Gf2Vector::to_mask).collect();
            for sel in 0u64..(1u64 << masks.len()) {
                let mut v = 0u64;
                for (k, m) in masks.iter().enumerate() {
                    if sel >> k & 1 == 1 {
                        v ^= m;
                    }
                }
                members |= 1u64 << v;
            }
        }
        Gf2Subspace { ambient, basis, members }
    }

    /// Span of the given vectors of width `n`.
    pub fn span(n: usize, rows: &[Gf2Vector]) -> Result<Self> {
        let m = Gf2Matrix::from_rows(n, rows.to_vec())?;
        Ok(echelonize(&m))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Gf2Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        if self.ambient <= MAX_ENUM_DIM {
            return self.members >> v.to_mask() & 1 == 1;
        }
        let mut basis = EchelonBasis::new(self.ambient);
        for r in self.basis.rows() {
            basis.insert(r.clone());
        }
        basis.contains(v)
    }

    /// Inclusion `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Gf2Subspace) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        if self.ambient <= MAX_ENUM_DIM {
            return self.members & !other.members == 0;
        }
        self.basis.rows().iter().all(|r| other.contains(r))
    }

    /// Elements of the subspace (only for small ambient dimension).
    pub fn elements(&self) -> Vec<Gf2Vector> {
        assert!(self.ambient <= MAX_ENUM_DIM);
        (0u64..(1u64 << self.ambient))
            .filter(|v| self.members >> v & 1 == 1)
            .map(|v| Gf2Vector::from_mask(self.ambient, v))
            .collect()
    }

    /// Intersection with another subspace.
    pub fn intersect(&self, other: &Gf2Subspace) -> Result<Gf2Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::Structural("ambient dimension mismatch".into()));
        }
        // Solve x = sum u_i a_i = sum v_j b_j via the kernel of [A; B].
        let k1 = self.dim();
        let stacked: Vec<Gf2Vector> = self.basis.rows().iter().chain(other.basis.rows()).cloned().collect();
        let kernel = left_kernel(&stacked, self.ambient);
        let gens: Vec<Gf2Vector> = kernel
            .iter()
            .map(|coeffs| {
                let mut v = Gf2Vector::zeros(self.ambient);
                for i in coeffs.ones().filter(|&i| i < k1) {
                    v.xor_assign(&self.basis.rows()[i]);
                }
                v
            })
            .collect();
        Gf2Subspace::span(self.ambient, &gens)
    }

    /// Sum `self + other`.
    pub fn join(&self, other: &Gf2Subspace) -> Result<Gf2Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::Structural("ambient dimension mismatch".into()));
        }
        let rows: Vec<Gf2Vector> = self.basis.rows().iter().chain(other.basis.rows()).cloned().collect();
        Gf2Subspace::span(self.ambient, &rows)
    }

    /// Image under `x -> x M` for a matrix with `ambient` rows.
    pub fn image(&self, m: &Gf2Matrix) -> Result<Gf2Subspace> {
        if m.nrows() != self.ambient {
            return Err(Error::Structural("matrix rows do not match ambient dimension".into()));
        }
        let rows = Gf2Matrix::from_rows(self.ambient, self.basis.rows().to_vec())?.mul(m)?;
        Ok(echelonize(&rows))
    }

    /// Vectors `y` with `form(x, y) = 0` for every `x` in the subspace.
    pub fn annihilator(&self) -> Gf2Subspace {
        let gens = left_kernel(self.basis.transpose().rows(), self.dim());
        Gf2Subspace::span(self.ambient, &gens).expect("kernel width is ambient")
    }
}

impl fmt::Debug for Gf2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.basis.rows().iter().map(|r| r.to_string()).collect();
        write!(f, "<{}>/{}", rows.join(","), self.ambient)
    }
}

impl PartialOrd for Gf2Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used for sorting only: dimension, then basis rows.
impl Ord for Gf2Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ambient, self.dim(), self.basis.rows()).cmp(&(other.ambient, other.dim(), other.basis.rows()))
    }
}

/// Basis of `{c : sum c_i rows_i = 0}` for rows of width `width`.
pub fn left_kernel(rows: &[Gf2Vector], width: usize) -> Vec<Gf2Vector> {
    let m = rows.len();
    // each row carries an identity tag recording the combination
    let mut aug: Vec<(Gf2Vector, Gf2Vector)> =
        rows.iter().enumerate().map(|(i, r)| (r.clone(), Gf2Vector::unit(m, i))).collect();
    let mut r = 0;
    let ncols = width;
    for c in 0..ncols {
        let Some(p) = (r..m).find(|&i| aug[i].0.get(c)) else { continue };
        aug.swap(r, p);
        let (pv, pt) = aug[r].clone();
        for (i, (v, t)) in aug.iter_mut().enumerate() {
            if i != r && v.get(c) {
                v.xor_assign(&pv);
                t.xor_assign(&pt);
            }
        }
        r += 1;
    }
    aug.into_iter().skip(r).map(|(_, t)| t).collect()
}

/// Canonical subspace spanned by the rows of `rows`.
pub fn echelonize(rows: &Gf2Matrix) -> Gf2Subspace {
    let (r, _) = rows.rref();
    Gf2Subspace::from_rref(r)
}

/// Every subspace of Z2^n, ordered by dimension then basis.
pub fn enumerate_subspaces(n: usize) -> Result<Vec<Gf2Subspace>> {
    if n == 0 {
        return Err(Error::Precondition("ambient dimension must be positive".into()));
    }
    if n > MAX_ENUM_DIM {
        return Err(Error::Capacity(format!("enumerate_subspaces supports n <= {MAX_ENUM_DIM}, got {n}")));
    }
    let mut out = Vec::new();
    for pivmask in 0u32..(1u32 << n) {
        let pivots: Vec<usize> = (0..n).filter(|&c| pivmask >> c & 1 == 1).collect();
        // free slots: (row, column) with column > pivot and column not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| ((p + 1)..n).filter(|c| pivmask >> c & 1 == 0).map(move |c| (r, c)))
            .collect();
        for fill in 0u64..(1u64 << free.len()) {
            let mut rows: Vec<Gf2Vector> = pivots.iter().map(|&p| Gf2Vector::unit(n, p)).collect();
            for (k, &(r, c)) in free.iter().enumerate() {
                if fill >> k & 1 == 1 {
                    rows[r].set(c, true);
                }
            }
            out.push(Gf2Subspace::from_rref(Gf2Matrix { cols: n, rows }));
        }
    }
    out.sort();
    Ok(out)
}

/// Number of subspaces of Z2^n (the Galois number).
pub fn galois_number(n: usize) -> u64 {
    (0..=n).map(|k| gaussian_binomial(n, k)).sum()
}

/// Gaussian binomial coefficient [n choose k] at q = 2.
pub fn gaussian_binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    (num / den) as u64
}

/// Rank of `[form(a_i, b_j)]` over the stored bases of `a1` and `a2`.
pub fn restricted_form_rank(form: &Gf2Matrix, a1: &Gf2Subspace, a2: &Gf2Subspace) -> Result<usize> {
    let n = form.nrows();
    if form.ncols() != n {
        return Err(Error::Structural("form must be square".into()));
    }
    if a1.ambient_dim() != n || a2.ambient_dim() != n {
        return Err(Error::Structural(format!(
            "ambient dimensions {} and {} do not match form size {n}",
            a1.ambient_dim(),
            a2.ambient_dim()
        )));
    }
    if a1.dim() == 0 || a2.dim() == 0 {
        return Ok(0);
    }
    // rows a_i F, then pair with b_j
    let af = a1.basis().mul(form)?;
    let m = Gf2Matrix::from_fn(a1.dim(), a2.dim(), |i, j| af.row(i).dot(a2.basis().row(j)));
    Ok(m.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Gf2Vector {
        Gf2Vector::parse(s).unwrap()
    }

    fn sub(rows: &[&str]) -> Gf2Subspace {
        echelonize(&Gf2Matrix::parse(rows).unwrap())
    }

    #[test]
    fn echelonize_examples() {
        let s = sub(&["110", "011", "101"]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s, sub(&["110", "011"]));
        assert!(s.contains(&v("101")));
        assert!(!s.contains(&v("100")));
        assert_eq!(s.basis().rows(), &[v("101"), v("011")]);

        let z = echelonize(&Gf2Matrix::zeros(0, 3));
        assert_eq!(z.dim(), 0);
        assert_eq!(z, Gf2Subspace::zero(3));

        assert_eq!(sub(&["10", "01"]), Gf2Subspace::full(2));
    }

    #[test]
    fn echelonize_idempotent() {
        let s = sub(&["1101", "0111", "1010"]);
        assert_eq!(echelonize(s.basis()), s);
    }

    #[test]
    fn width_mismatch_is_structural() {
        let err = Gf2Matrix::from_rows(3, vec![v("110"), v("01")]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn subspace_counts() {
        let expected = [2, 5, 16, 67, 374, 2825];
        for n in 1..=6 {
            let all = enumerate_subspaces(n).unwrap();
            assert_eq!(all.len() as u64, expected[n - 1]);
            assert_eq!(galois_number(n), expected[n - 1]);
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
        assert!(matches!(enumerate_subspaces(7), Err(Error::Capacity(_))));
    }

    #[test]
    fn subspace_counts_match_brute_force() {
        for n in 1..=4 {
            assert_eq!(enumerate_subspaces(n).unwrap().len(), crate::oracle::closed_subsets(n).len(), "n={n}");
        }
    }

    #[test]
    fn form_rank_examples() {
        let id = Gf2Matrix::identity(2);
        let full = Gf2Subspace::full(2);
        let e1 = sub(&["10"]);
        let e2 = sub(&["01"]);
        assert_eq!(restricted_form_rank(&id, &full, &full).unwrap(), 2);
        assert_eq!(restricted_form_rank(&id, &e1, &e2).unwrap(), 0);
        assert_eq!(restricted_form_rank(&id, &e1, &full).unwrap(), 1);
        let e13 = sub(&["100"]);
        assert!(restricted_form_rank(&id, &e13, &full).is_err());
    }

    #[test]
    fn inclusion_and_lattice_ops() {
        let a = sub(&["110"]);
        let b = sub(&["110", "001"]);
        assert!(a.is_subspace_of(&b));
        assert!(!b.is_subspace_of(&a));
        let c = sub(&["011", "100"]);
        let i = b.intersect(&c).unwrap();
        assert_eq!(i, sub(&["111"]));
        assert_eq!(b.join(&c).unwrap(), Gf2Subspace::full(3));
        assert_eq!(a.annihilator(), sub(&["110", "001"]));
    }

    #[test]
    fn inverse_and_transpose() {
        let m = Gf2Matrix::parse(&["10", "11"]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Gf2Matrix::identity(2));
        assert_eq!(m.transpose(), Gf2Matrix::parse(&["11", "01"]).unwrap());
        assert!(Gf2Matrix::parse(&["11", "11"]).unwrap().inverse().is_none());
    }

    #[test]
    fn wide_vectors() {
        let mut a = Gf2Vector::zeros(130);
        a.set(129, true);
        a.set(3, true);
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(a.leading(), Some(3));
        let mut b = a.clone();
        b.xor_assign(&a);
        assert!(b.is_zero());
    }
}
