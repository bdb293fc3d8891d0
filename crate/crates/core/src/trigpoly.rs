//! Real trigonometric polynomials and the structure of their complex roots.
//!
//! Roots are found through `z = e^{i alpha}`: `z^n f` is a polynomial of degree
//! `2n` in `z` whose roots are the eigenvalues of its companion matrix.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 8;
pub const DEFAULT_TOL: f64 = 1e-6;

/// `s0 + sum_k (cos[k-1] cos k a + sin[k-1] sin k a)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub s0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn new(s0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.len() != sin.len() {
            return Err(Error::Structural(format!("{} cosine vs {} sine coefficients", cos.len(), sin.len())));
        }
        if cos.len() > MAX_DEGREE {
            return Err(Error::Precondition(format!("degree {} exceeds {MAX_DEGREE}", cos.len())));
        }
        if !s0.is_finite() || cos.iter().chain(&sin).any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite coefficient".into()));
        }
        Ok(TrigPoly { s0, cos, sin })
    }

    /// From `[s0, s1, s1', s2, s2', ...]`.
    pub fn from_coeffs(c: &[f64]) -> Result<Self> {
        if c.is_empty() || c.len().is_multiple_of(2) {
            return Err(Error::Structural(format!("coefficient array must have odd length, got {}", c.len())));
        }
        let cos = c[1..].iter().step_by(2).copied().collect();
        let sin = c[2..].iter().step_by(2).copied().collect();
        Self::new(c[0], cos, sin)
    }

    /// Monic-cosine form `s0 + sum_{k<n} (s_k cos + s'_k sin) + cos n a`
    /// from `[s0, s1, s1', ..., s_{n-1}, s'_{n-1}]`.
    pub fn monic_cosine(s: &[f64]) -> Result<Self> {
        let mut c = s.to_vec();
        c.extend([1.0, 0.0]);
        Self::from_coeffs(&c)
    }

    /// `cos n a`.
    pub fn cos_n(n: usize) -> Self {
        Self::monic_cosine(&vec![0.0; 2 * n - 1]).expect("valid degree")
    }

    pub fn coeffs(&self) -> Vec<f64> {
        let mut out = vec![self.s0];
        for (c, s) in self.cos.iter().zip(&self.sin) {
            out.push(*c);
            out.push(*s);
        }
        out
    }

    pub fn deg(&self) -> usize {
        self.cos.len()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn eval(&self, a: f64) -> f64 {
        let mut v = self.s0;
        for k in 0..self.deg() {
            let t = (k + 1) as f64 * a;
            v += self.cos[k] * t.cos() + self.sin[k] * t.sin();
        }
        v
    }

    pub fn scaled(&self, f: f64) -> TrigPoly {
        TrigPoly {
            s0: self.s0 * f,
            cos: self.cos.iter().map(|x| x * f).collect(),
            sin: self.sin.iter().map(|x| x * f).collect(),
        }
    }

    /// Drops leading pairs whose magnitude is below `tol` relative to the norm.
    pub fn trimmed(&self, tol: f64) -> TrigPoly {
        let scale = self.norm();
        let mut p = self.clone();
        while p.deg() > 0 {
            let k = p.deg() - 1;
            if p.cos[k].hypot(p.sin[k]) < tol * scale {
                p.cos.pop();
                p.sin.pop();
            } else {
                break;
            }
        }
        p
    }

    /// Coefficients `p_0..p_{2n}` of `z^n f(z)`.
    pub fn z_coeffs(&self) -> Vec<Complex64> {
        let n = self.deg();
        let mut p = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        p[n] = Complex64::new(self.s0, 0.0);
        for k in 1..=n {
            let (c, s) = (self.cos[k - 1], self.sin[k - 1]);
            p[n + k] = Complex64::new(c / 2.0, -s / 2.0);
            p[n - k] = Complex64::new(c / 2.0, s / 2.0);
        }
        p
    }

    /// Inverse of [`TrigPoly::z_coeffs`], keeping real parts.
    pub fn from_z_coeffs(p: &[Complex64]) -> Result<TrigPoly> {
        if p.len().is_multiple_of(2) {
            return Err(Error::Structural("z-polynomial must have even degree".into()));
        }
        let n = p.len() / 2;
        let mut cos = Vec::with_capacity(n);
        let mut sin = Vec::with_capacity(n);
        for k in 1..=n {
            cos.push((p[n + k] + p[n - k]).re);
            sin.push((Complex64::i() * (p[n + k] - p[n - k])).re);
        }
        TrigPoly::new(p[n].re, cos, sin)
    }

    /// Monic-cosine polynomial `2^{1-2n} prod (cos-like factors)` with the given
    /// `2n` roots, i.e. `z^n f = 1/2 prod (z - e^{i a_j})`. The root sum must lie in 2 pi Z.
    pub fn from_roots(alphas: &[Complex64]) -> Result<TrigPoly> {
        if alphas.is_empty() || alphas.len() % 2 == 1 {
            return Err(Error::Structural(format!("need an even positive number of roots, got {}", alphas.len())));
        }
        let sum: Complex64 = alphas.iter().sum();
        let r = sum.re.rem_euclid(TAU);
        if r.min(TAU - r) > 1e-9 * (1.0 + alphas.len() as f64) || sum.im.abs() > 1e-9 {
            return Err(Error::Membership(format!("root sum {sum} is not in 2 pi Z")));
        }
        let mut p = vec![Complex64::new(0.5, 0.0)];
        for a in alphas {
            let z = (Complex64::i() * a).exp();
            let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
            for (j, c) in p.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * z;
            }
            p = next;
        }
        TrigPoly::from_z_coeffs(&p)
    }
}

/// A root with its multiplicity; `re` is reduced to `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootPoint {
    pub re: f64,
    pub im: f64,
    pub mult: usize,
}

/// Multiset of roots in the cylinder `(R / 2 pi Z) x iR`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct RootConfig {
    pub points: Vec<RootPoint>,
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn cyl_dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    circ_dist(a.0, b.0).hypot(a.1 - b.1)
}

/// Circular mean of angles that lie close together.
fn circ_mean(angles: &[f64]) -> f64 {
    let base = angles[0];
    let off: f64 = angles.iter().map(|&a| (a - base + PI).rem_euclid(TAU) - PI).sum::<f64>() / angles.len() as f64;
    (base + off).rem_euclid(TAU)
}

impl RootConfig {
    /// Clusters weighted points by single linkage at distance `tol`. Points
    /// with `|im| < tol` are first moved onto the real axis.
    pub fn clustered(raw: &[(f64, f64, usize)], tol: f64) -> RootConfig {
        let pts: Vec<(f64, f64, usize)> = raw
            .iter()
            .map(|&(re, im, m)| (re.rem_euclid(TAU), if im.abs() < tol { 0.0 } else { im }, m))
            .collect();
        let n = pts.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if cyl_dist((pts[i].0, pts[i].1), (pts[j].0, pts[j].1)) < tol {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut points: Vec<RootPoint> = groups
            .values()
            .map(|g| {
                let mut angles = Vec::new();
                let mut ims = Vec::new();
                for &i in g {
                    for _ in 0..pts[i].2 {
                        angles.push(pts[i].0);
                        ims.push(pts[i].1);
                    }
                }
                let mult = angles.len();
                RootPoint { re: circ_mean(&angles), im: ims.iter().sum::<f64>() / mult as f64, mult }
            })
            .filter(|p| p.mult > 0)
            .collect();
        points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        RootConfig { points }
    }

    pub fn from_points(points: &[(f64, f64, usize)], tol: f64) -> RootConfig {
        Self::clustered(points, tol)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.mult).sum()
    }

    /// Every point repeated by multiplicity, as complex numbers.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.points.iter().flat_map(|p| std::iter::repeat_n(Complex64::new(p.re, p.im), p.mult)).collect()
    }

    pub fn real_points(&self, tol: f64) -> impl Iterator<Item = &RootPoint> {
        self.points.iter().filter(move |p| p.im.abs() < tol)
    }

    pub fn total_real_multiplicity(&self, tol: f64) -> usize {
        self.real_points(tol).map(|p| p.mult).sum()
    }
}

/// Polynomial value and derivative by Horner; `p` is ascending.
fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// Roots of an ascending complex polynomial via companion eigenvalues.
pub fn poly_roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = p.len() - 1;
    if m == 0 {
        return Ok(Vec::new());
    }
    let lead = p[m];
    if lead.norm() == 0.0 {
        return Err(Error::DegreeDrop { deg: m });
    }
    let mut c = DMatrix::<Complex64>::zeros(m, m);
    for i in 1..m {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..m {
        c[(i, m - 1)] = -p[i] / lead;
    }
    // A fixed Householder similarity breaks the cyclic structure of companions
    // such as z^m + 1, on which the shifted QR iteration stalls.
    let v: Vec<Complex64> = (0..m).map(|j| Complex64::new(1.0 + 0.37 * j as f64, 0.11 * (j * j) as f64)).collect();
    let vv: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let h = DMatrix::<Complex64>::from_fn(m, m, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        Complex64::new(d, 0.0) - v[i] * v[j].conj() * (2.0 / vv)
    });
    let c = &h * c * &h;
    let schur = Schur::try_new(c, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Domain("companion eigenvalue iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut roots = Vec::with_capacity(m);
    let mut i = 0;
    while i < m {
        if i + 1 < m && t[(i + 1, i)].norm() > 1e-14 * (t[(i, i)].norm() + t[(i + 1, i + 1)].norm() + 1e-300) {
            let (a, b, cc, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let tr = a + d;
            let det = a * d - b * cc;
            let disc = (tr * tr - 4.0 * det).sqrt();
            roots.push((tr + disc) / 2.0);
            roots.push((tr - disc) / 2.0);
            i += 2;
        } else {
            roots.push(t[(i, i)]);
            i += 1;
        }
    }
    // a few guarded Newton steps
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let (v, d) = horner(p, *z);
            if d.norm() == 0.0 {
                break;
            }
            let cand = *z - v / d;
            if horner(p, cand).0.norm() < v.norm() {
                *z = cand;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}

/// Complex roots of `f` in the cylinder, clustered at `tol`.
///
/// Coefficients are normalized to unit norm before the leading-coefficient test.
pub fn roots(f: &TrigPoly, tol: f64) -> Result<RootConfig> {
    let scale = f.norm();
    if scale == 0.0 {
        return Err(Error::Domain("zero polynomial has no isolated roots".into()));
    }
    let n = f.deg();
    if n == 0 {
        return Ok(RootConfig::default());
    }
    if f.cos[n - 1].hypot(f.sin[n - 1]) < tol * scale {
        return Err(Error::DegreeDrop { deg: n });
    }
    let g = f.scaled(1.0 / scale);
    let zr = poly_roots(&g.z_coeffs())?;
    let raw: Vec<(f64, f64, usize)> = zr.iter().map(|z| (z.arg(), -z.norm().ln(), 1)).collect();
    Ok(RootConfig::clustered(&raw, tol))
}

/// Like [`roots`] but lowers the degree past negligible leading terms first.
pub fn roots_trimmed(f: &TrigPoly, tol: f64) -> Result<RootConfig> {
    roots(&f.trimmed(tol), tol)
}

/// Number of real points of odd multiplicity.
pub fn n_odd(cfg: &RootConfig, tol: f64) -> usize {
    cfg.real_points(tol).filter(|p| p.mult % 2 == 1).count()
}

/// `max(n_odd / 2 - 1, 0)`; the zero polynomial has genus 0.
pub fn genus_of(f: &TrigPoly, tol: f64) -> usize {
    match roots_trimmed(f, tol) {
        Ok(cfg) => genus_from_n_odd(n_odd(&cfg, tol)),
        Err(_) => 0,
    }
}

pub fn genus_from_n_odd(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

/// True iff the multiset is invariant under conjugation within `tol`.
pub fn conjugate_pair_check(cfg: &RootConfig, tol: f64) -> bool {
    let pts = &cfg.points;
    let mut used = vec![false; pts.len()];
    for i in 0..pts.len() {
        if used[i] {
            continue;
        }
        let p = pts[i];
        if p.im.abs() < tol {
            used[i] = true;
            continue;
        }
        let t = tol * (1.0 + p.im.abs());
        let partner = (0..pts.len()).find(|&j| {
            j != i && !used[j] && pts[j].mult == p.mult && cyl_dist((pts[j].re, pts[j].im), (p.re, -p.im)) < t
        });
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return false,
        }
    }
    true
}

/// True iff the real parts sum to a multiple of 2 pi and the imaginary parts
/// to zero, within `tol * (1 + sum |w|)`.
pub fn root_sum_check(cfg: &RootConfig, tol: f64) -> bool {
    let mut re = 0.0;
    let mut im = 0.0;
    let mut mag = 0.0;
    for p in &cfg.points {
        let m = p.mult as f64;
        re += m * p.re;
        im += m * p.im;
        mag += m * p.re.hypot(p.im);
    }
    let allow = tol * (1.0 + mag);
    let r = re.rem_euclid(TAU);
    r.min(TAU - r) < allow && im.abs() < allow
}

/// Clips imaginary parts at `atan((1 - t) pi / 2)` and re-clusters at `tol`.
pub fn retract_with_tol(cfg: &RootConfig, t: f64, tol: f64) -> Result<RootConfig> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Precondition(format!("retraction time {t} outside [0, 1]")));
    }
    let cap = ((1.0 - t) * PI / 2.0).atan();
    let raw: Vec<(f64, f64, usize)> =
        cfg.points.iter().map(|p| (p.re, p.im.signum() * p.im.abs().min(cap), p.mult)).collect();
    Ok(RootConfig::clustered(&raw, tol))
}

pub fn retract(cfg: &RootConfig, t: f64) -> Result<RootConfig> {
    retract_with_tol(cfg, t, DEFAULT_TOL)
}

/// Whether every root of the monic-cosine polynomial with parameters `s` is real.
pub fn in_omega(s: &[f64], tol: f64) -> Result<bool> {
    let f = TrigPoly::monic_cosine(s)?;
    let cfg = roots(&f, tol)?;
    Ok(cfg.points.iter().all(|p| p.im.abs() < tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_eq(a: f64, b: f64, eps: f64) -> bool {
        (a - b).abs() < eps
    }

    #[test]
    fn cos3_roots() {
        let cfg = roots(&TrigPoly::cos_n(3), DEFAULT_TOL).unwrap();
        assert_eq!(cfg.points.len(), 6);
        for (k, p) in cfg.points.iter().enumerate() {
            assert!(approx_eq(p.re, (2 * k + 1) as f64 * PI / 6.0, 1e-9), "{p:?}");
            assert_eq!(p.im, 0.0);
            assert_eq!(p.mult, 1);
        }
        assert_eq!(n_odd(&cfg, DEFAULT_TOL), 6);
        assert_eq!(genus_of(&TrigPoly::cos_n(3), DEFAULT_TOL), 2);
        assert!(root_sum_check(&cfg, 1e-8));
        assert!(conjugate_pair_check(&cfg, 1e-8));
    }

    #[test]
    fn double_roots() {
        let f = TrigPoly::from_coeffs(&[1.0, 0.0, 0.0, -1.0, 0.0]).unwrap();
        let cfg = roots(&f, DEFAULT_TOL).unwrap();
        assert_eq!(cfg.points.len(), 2);
        assert!(cfg.points.iter().all(|p| p.mult == 2));
        assert!(approx_eq(cfg.points[0].re, 0.0, 1e-6) || approx_eq(cfg.points[0].re, TAU, 1e-6));
        assert_eq!(n_odd(&cfg, DEFAULT_TOL), 0);
    }

    #[test]
    fn complex_pair() {
        let f = TrigPoly::from_coeffs(&[1.5, 1.0, 0.0]).unwrap();
        let cfg = roots(&f, DEFAULT_TOL).unwrap();
        assert_eq!(cfg.points.len(), 2);
        let b = 1.5f64.acosh();
        for p in &cfg.points {
            assert!(approx_eq(p.re, PI, 1e-9));
            assert!(approx_eq(p.im.abs(), b, 1e-9));
        }
        assert_eq!(genus_of(&f, DEFAULT_TOL), 0);
        assert!(conjugate_pair_check(&cfg, 1e-8));
    }

    #[test]
    fn degree_drop_reported() {
        let f = TrigPoly::from_coeffs(&[1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(roots(&f, DEFAULT_TOL), Err(Error::DegreeDrop { deg: 2 })));
        assert_eq!(roots_trimmed(&f, DEFAULT_TOL).unwrap().total_multiplicity(), 2);
    }

    #[test]
    fn odd_count_with_a_double_root() {
        let a = [0.4, 0.4, 1.3, 2.5, 4.0];
        let last = TAU * 2.0 - a.iter().sum::<f64>();
        let mut alphas: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        alphas.push(Complex64::new(last, 0.0));
        let f = TrigPoly::from_roots(&alphas).unwrap();
        let cfg = roots(&f, DEFAULT_TOL).unwrap();
        assert_eq!(cfg.total_multiplicity(), 6);
        assert_eq!(n_odd(&cfg, DEFAULT_TOL), 4);
        assert_eq!(genus_of(&f, DEFAULT_TOL), 1);
        let s = f.coeffs();
        assert!(in_omega(&s[..s.len() - 2], DEFAULT_TOL).unwrap());
    }

    #[test]
    fn from_roots_rejects_bad_sum() {
        let alphas = [Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0)];
        assert!(matches!(TrigPoly::from_roots(&alphas), Err(Error::Membership(_))));
    }

    #[test]
    fn conjugation_and_sum_counterexamples() {
        let cfg = RootConfig::from_points(&[(0.0, 1.0, 1), (0.0, 0.0, 3)], 1e-9);
        assert!(!conjugate_pair_check(&cfg, 1e-8));
        let real = RootConfig::from_points(&[(0.5, 0.0, 1), (2.0, 0.0, 3)], 1e-9);
        assert!(conjugate_pair_check(&real, 1e-8));

        let mut c = roots(&TrigPoly::cos_n(3), DEFAULT_TOL).unwrap();
        c.points[0].re += 0.1;
        assert!(!root_sum_check(&c, 1e-8));
        let f = TrigPoly::monic_cosine(&[0.0, 1.0, 0.3]).unwrap();
        assert!(root_sum_check(&roots(&f, DEFAULT_TOL).unwrap(), 1e-8));
        // a leading sine term shifts the sum by twice the phase
        let g = TrigPoly::from_coeffs(&[0.0, 1.0, 0.3]).unwrap();
        assert!(!root_sum_check(&roots(&g, DEFAULT_TOL).unwrap(), 1e-8));
    }

    #[test]
    fn retraction_examples() {
        let cfg = RootConfig::from_points(&[(0.3, 0.2, 1), (0.3, -0.2, 1), (PI, 0.0, 2)], 1e-9);
        let r = retract(&cfg, 1.0).unwrap();
        assert_eq!(r.points.len(), 2);
        assert!(approx_eq(r.points[0].re, 0.3, 1e-12) && r.points[0].mult == 2 && r.points[0].im == 0.0);
        assert!(approx_eq(r.points[1].re, PI, 1e-12) && r.points[1].mult == 2);

        let big = RootConfig::from_points(&[(1.0, 5.0, 1), (1.0, -5.0, 1)], 1e-9);
        let r = retract(&big, 0.0).unwrap();
        let cap = (PI / 2.0).atan();
        assert!(r.points.iter().all(|p| approx_eq(p.im.abs(), cap, 1e-12)));

        let real = roots(&TrigPoly::cos_n(2), DEFAULT_TOL).unwrap();
        assert_eq!(retract(&real, 0.37).unwrap(), real);
    }

    #[test]
    fn omega_membership() {
        assert!(in_omega(&[0.0, 0.0, 0.0], DEFAULT_TOL).unwrap());
        assert!(!in_omega(&[2.0], DEFAULT_TOL).unwrap());
    }

    #[test]
    fn z_coeff_round_trip() {
        let f = TrigPoly::from_coeffs(&[0.3, -1.0, 0.5, 0.25, 2.0]).unwrap();
        assert_eq!(TrigPoly::from_z_coeffs(&f.z_coeffs()).unwrap(), f);
        for a in [0.0, 0.7, 2.0, 5.5] {
            let z = Complex64::new(0.0, a).exp();
            let (v, _) = horner(&f.z_coeffs(), z);
            let w = v / z.powu(2);
            assert!(approx_eq(w.re, f.eval(a), 1e-12) && w.im.abs() < 1e-12);
        }
    }
}
