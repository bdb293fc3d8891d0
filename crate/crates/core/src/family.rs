//! The explicit family over `RP^5 x B^(2g-2)`: regions, the defining
//! trigonometric polynomial, its genus, the normalization map `T` and the
//! fixed-point probe near the singular circle.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trigpoly::{genus_of, TrigPoly, MAX_DEGREE};

/// `N <= SING_TOL` counts as the singular set.
pub const SING_TOL: f64 = 1e-12;
const CHART_TOL: f64 = 1e-14;

/// `eta(r) = eta_scale (1 - r)`, `eps1(r) = eps1_scale eta(r)^2`, `eps2 = eps2_const`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionProfile {
    pub eta_scale: f64,
    pub eps1_scale: f64,
    pub eps2_const: f64,
}

impl Default for RegionProfile {
    fn default() -> Self {
        RegionProfile { eta_scale: 0.05, eps1_scale: 0.01, eps2_const: 1e-3 }
    }
}

impl RegionProfile {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0 && x <= 1.0;
        if ok(self.eta_scale) && ok(self.eps1_scale) && ok(self.eps2_const) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("profile constants must lie in (0, 1]: {self:?}")))
        }
    }

    pub fn eta(&self, r: f64) -> f64 {
        self.eta_scale * (1.0 - r.clamp(0.0, 1.0))
    }

    pub fn eps1(&self, r: f64) -> f64 {
        self.eps1_scale * self.eta(r).powi(2)
    }

    pub fn eps2(&self, _r: f64) -> f64 {
        self.eps2_const
    }
}

/// A point of `RP^5 x B^(2g-2)`. `a` is a unit vector whose first nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub a: [f64; 6],
    pub b: Vec<f64>,
    pub g: usize,
}

impl ParamPoint {
    pub fn new(a: [f64; 6], b: Vec<f64>, g: usize) -> Result<Self> {
        if g == 0 || g + 1 > MAX_DEGREE {
            return Err(Error::Precondition(format!("g must lie in 1..={}, got {g}", MAX_DEGREE - 1)));
        }
        if b.len() != 2 * g - 2 {
            return Err(Error::Precondition(format!("b must have {} entries for g={g}, got {}", 2 * g - 2, b.len())));
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite parameter".into()));
        }
        let bn = norm(&b);
        if bn > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!("||b|| = {bn} exceeds 1")));
        }
        let an = norm(&a);
        if an == 0.0 {
            return Err(Error::Domain("a = 0 is not a point of RP^5".into()));
        }
        let lead = a.iter().find(|x| **x != 0.0).copied().unwrap_or(1.0);
        let s = lead.signum() / an;
        Ok(ParamPoint { a: a.map(|x| x * s), b, g })
    }

    /// The `O_1 = [0:...:0:1]` point with the given `b`.
    pub fn o1(b: Vec<f64>, g: usize) -> Result<Self> {
        Self::new([0.0, 0.0, 0.0, 0.0, 0.0, 1.0], b, g)
    }

    /// `(a0..a4) / a5`, or `None` off the `a5 != 0` chart.
    pub fn chart(&self) -> Option<[f64; 5]> {
        let a5 = self.a[5];
        (a5.abs() > CHART_TOL).then(|| [0, 1, 2, 3, 4].map(|i| self.a[i] / a5))
    }

    pub fn b_norm(&self) -> f64 {
        norm(&self.b)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    #[serde(rename = "A_sing")]
    ASing,
    A1,
    A2,
    Outside,
}

impl RegionKind {
    pub fn name(self) -> &'static str {
        match self {
            RegionKind::ASing => "A_sing",
            RegionKind::A1 => "A1",
            RegionKind::A2 => "A2",
            RegionKind::Outside => "Outside",
        }
    }

    /// Regions where the desingularized polynomial is defined.
    pub fn is_a1(self) -> bool {
        matches!(self, RegionKind::ASing | RegionKind::A1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionTag {
    pub kind: RegionKind,
    /// `(a1, a2)` in the chart, when the point lies over the open disc.
    pub disc: Option<[f64; 2]>,
    /// `||(a0 - a1 a2, a3, a4)||` in the chart.
    pub offset: f64,
}

/// Chart data shared by the region test and the polynomial.
struct Chart {
    c: [f64; 5],
    r: f64,
    offset: f64,
}

fn chart_of(p: &ParamPoint) -> Option<Chart> {
    let c = p.chart()?;
    let r = c[1] * c[1] + c[2] * c[2];
    let offset = norm(&[c[0] - c[1] * c[2], c[3], c[4]]);
    Some(Chart { c, r, offset })
}

pub fn classify(p: &ParamPoint, profile: &RegionProfile) -> RegionTag {
    let outside = RegionTag { kind: RegionKind::Outside, disc: None, offset: f64::NAN };
    let Some(ch) = chart_of(p) else { return outside };
    if ch.r >= 1.0 {
        return RegionTag { offset: ch.offset, ..outside };
    }
    let e1 = profile.eps1(ch.r);
    let kind = if ch.offset <= SING_TOL {
        RegionKind::ASing
    } else if ch.offset <= e1 {
        RegionKind::A1
    } else if ch.offset <= 2.0 * e1 {
        RegionKind::A2
    } else {
        RegionKind::Outside
    };
    RegionTag { kind, disc: Some([ch.c[1], ch.c[2]]), offset: ch.offset }
}

/// `F(alpha) = (a0 - a1 a2) + sqrt(1 - r)(a3 cos + a4 sin) + eps2 (eps1 - N) [b-bracket]`.
pub fn build_f(p: &ParamPoint, profile: &RegionProfile) -> Result<TrigPoly> {
    let tag = classify(p, profile);
    if !tag.kind.is_a1() {
        return Err(Error::Domain(format!("F is defined on A_sing and A1, point lies in {}", tag.kind.name())));
    }
    let ch = chart_of(p).expect("A1 lies in the chart");
    let c = ch.c;
    let s = (1.0 - ch.r).sqrt();
    let k = profile.eps2(ch.r) * (profile.eps1(ch.r) - ch.offset);
    let g = p.g;
    let mut cos = vec![0.0; g + 1];
    let mut sin = vec![0.0; g + 1];
    cos[0] = s * c[3];
    sin[0] = s * c[4];
    for j in 2..=g {
        cos[j - 1] = k * p.b[2 * (j - 2)];
        sin[j - 1] = k * p.b[2 * (j - 2) + 1];
    }
    cos[g] = k * (1.0 - p.b_norm());
    TrigPoly::new(c[0] - c[1] * c[2], cos, sin)
}

/// Genus of the family member; 0 away from `A_sing` and `A1`.
pub fn genus_map(p: &ParamPoint, profile: &RegionProfile, tol: f64) -> usize {
    match build_f(p, profile) {
        Ok(f) => genus_of(&f, tol),
        Err(_) => 0,
    }
}

/// Coefficients of `F` divided by the `cos (g+1) a` coefficient, which is dropped:
/// `[s0, s1, s1', ..., s_g, s_g']`.
pub fn normalize_t(p: &ParamPoint, profile: &RegionProfile) -> Result<Vec<f64>> {
    let c = p.chart().ok_or_else(|| Error::Precondition("T is defined on the a5 != 0 chart".into()))?;
    if c[1].abs() > SING_TOL || c[2].abs() > SING_TOL {
        return Err(Error::Precondition("T is defined on the a1 = a2 = 0 slice".into()));
    }
    let f = build_f(p, profile)?;
    let lead = f.cos[p.g];
    if lead <= SING_TOL * f.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Boundary(format!("cos {}a coefficient {lead:e} vanishes", p.g + 1)));
    }
    let mut s = f.coeffs();
    s.truncate(2 * p.g + 1);
    Ok(s.iter().map(|x| x / lead).collect())
}

/// A right inverse of [`normalize_t`] on the `a1 = a2 = 0` slice.
pub fn section_t(s: &[f64], g: usize, profile: &RegionProfile) -> Result<ParamPoint> {
    if g == 0 || s.len() != 2 * g + 1 {
        return Err(Error::Precondition(format!("expected {} coefficients for g={g}, got {}", 2 * g + 1, s.len())));
    }
    let t = norm(&s[3..]);
    let sigma = norm(&s[..3]);
    let (e1, e2) = (profile.eps1(0.0), profile.eps2(0.0));
    let lead = e2 * e1 / (1.0 + t + e2 * sigma);
    let b: Vec<f64> = s[3..].iter().map(|x| x / (1.0 + t)).collect();
    ParamPoint::new([lead * s[0], 0.0, 0.0, lead * s[1], lead * s[2], 1.0], b, g)
}

/// Uniformly random `a` in `A2` over the disc `a1^2 + a2^2 <= r_max`.
pub fn random_a2<R: Rng>(rng: &mut R, profile: &RegionProfile, r_max: f64) -> [f64; 6] {
    let r = rng.random_range(0.0..r_max);
    let th = rng.random_range(0.0..std::f64::consts::TAU);
    let (a1, a2) = (r.sqrt() * th.cos(), r.sqrt() * th.sin());
    let e1 = profile.eps1(r);
    let dir = loop {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let n = norm(&v);
        if n > 1e-3 && n <= 1.0 {
            break v.map(|x| x / n);
        }
    };
    let len = e1 * rng.random_range(1.0..=2.0);
    [a1 * a2 + len * dir[0], a1, a2, len * dir[1], len * dir[2], 1.0]
}

/// Uniformly random point of `S^5`.
pub fn random_sphere<R: Rng>(rng: &mut R) -> [f64; 6] {
    loop {
        let v: [f64; 6] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = norm(&v);
        if n > 1e-3 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: [f64; 6],
    pub b: Vec<f64>,
    pub region: RegionKind,
    pub genus: usize,
}

/// Genus over a `n^(2g-2)` grid on `[-1, 1]^(2g-2)` clipped to the ball, at fixed `a`.
/// `n = 1` is the single point `b = 0`.
pub fn sweep(a: [f64; 6], g: usize, n: usize, profile: &RegionProfile, tol: f64) -> Result<Vec<SweepRow>> {
    if n == 0 {
        return Err(Error::Precondition("grid needs at least one point per axis".into()));
    }
    let dim = 2 * g.max(1) - 2;
    let total = n.checked_pow(dim as u32).filter(|&t| t <= 50_000_000).ok_or_else(|| {
        Error::Capacity(format!("grid {n}^{dim} is too large"))
    })?;
    let coord = |i: usize| if n == 1 { 0.0 } else { -1.0 + 2.0 * i as f64 / (n - 1) as f64 };
    let rows: Vec<Option<SweepRow>> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let b: Vec<f64> = (0..dim)
                .map(|_| {
                    let c = coord(idx % n);
                    idx /= n;
                    c
                })
                .collect();
            if norm(&b) > 1.0 + 1e-12 {
                return Ok(None);
            }
            let b: Vec<f64> = if norm(&b) > 1.0 { b.iter().map(|x| x / norm(&b)).collect() } else { b };
            let p = ParamPoint::new(a, b, g)?;
            let region = classify(&p, profile).kind;
            let genus = genus_map(&p, profile, tol);
            Ok(Some(SweepRow { a: p.a, b: p.b, region, genus }))
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// CSV header `a0,...,a5,b2,b2p,...,region,genus`.
pub fn sweep_header(g: usize) -> Vec<String> {
    let mut h: Vec<String> = (0..6).map(|i| format!("a{i}")).collect();
    for j in 2..=g {
        h.push(format!("b{j}"));
        h.push(format!("b{j}p"));
    }
    h.push("region".into());
    h.push("genus".into());
    h
}

pub fn write_sweep_csv<W: Write>(out: W, g: usize, rows: &[SweepRow]) -> Result<()> {
    let io = |e: csv::Error| Error::Structural(format!("csv write failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(sweep_header(g)).map_err(io)?;
    for r in rows {
        let mut rec: Vec<String> = r.a.iter().chain(&r.b).map(|x| format!("{x:.16e}")).collect();
        rec.push(r.region.name().into());
        rec.push(r.genus.to_string());
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Structural(format!("csv flush failed: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeOptions {
    pub grid: usize,
    pub max_iter: usize,
    pub step_tol: f64,
    /// Value of the interpolation function, constant near the circle.
    pub psi: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { grid: 4096, max_iter: 200, step_tol: 1e-10, psi: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub alpha: f64,
    pub x: [f64; 2],
    pub f: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeResult {
    pub curve: Vec<CurvePoint>,
    pub sign_changes: usize,
    pub max_displacement: f64,
    /// `max |x(a) - (-a2, -a1)| / (|a3| + |a4|)`; `None` when `a3 = a4 = 0`.
    pub c_ratio: Option<f64>,
    pub max_iterations: usize,
}

/// Critical curve `x(alpha)` by fixed-point iteration of
/// `y -> -J (a3 cos + a4 sin) grad sigma(-a2 + y1, -a1 + y2)`, then sign changes
/// of `f(alpha) = F~(x(alpha), alpha)` around the circle.
pub fn probe(p: &ParamPoint, profile: &RegionProfile, opts: &ProbeOptions) -> Result<ProbeResult> {
    let tag = classify(p, profile);
    if tag.kind != RegionKind::A2 {
        return Err(Error::Precondition(format!("probe expects a point of A2, got {}", tag.kind.name())));
    }
    if opts.grid < 2 || !(0.0..=1.0).contains(&opts.psi) {
        return Err(Error::Precondition("probe needs grid >= 2 and psi in [0, 1]".into()));
    }
    let ch = chart_of(p).expect("A2 lies in the chart");
    let [a0, a1, a2, a3, a4] = ch.c;
    let psi = opts.psi;
    let eta = profile.eta(ch.r);
    let s_center = (1.0 - ch.r).sqrt();
    let varsigma = |x: [f64; 2]| (1.0 - psi) * (1.0 - x[0] * x[0] - x[1] * x[1]).sqrt() + psi * s_center;
    let grad = |x: [f64; 2]| {
        let w = (1.0 - x[0] * x[0] - x[1] * x[1]).sqrt();
        [-(1.0 - psi) * x[0] / w, -(1.0 - psi) * x[1] / w]
    };
    let curve: Vec<CurvePoint> = (0..opts.grid)
        .into_par_iter()
        .map(|i| {
            let alpha = std::f64::consts::TAU * i as f64 / opts.grid as f64;
            let c = a3 * alpha.cos() + a4 * alpha.sin();
            let mut y = [0.0f64, 0.0];
            let mut last_step = f64::INFINITY;
            let mut iterations = 0;
            loop {
                let gr = grad([-a2 + y[0], -a1 + y[1]]);
                let next = [-c * gr[1], -c * gr[0]];
                let step = (next[0] - y[0]).hypot(next[1] - y[1]);
                y = next;
                iterations += 1;
                if y[0].hypot(y[1]) > eta {
                    return Err(Error::ProfileTooLarge(format!(
                        "fixed-point iterate left the eta-disc at alpha={alpha}; shrink eps1"
                    )));
                }
                if step < opts.step_tol {
                    break;
                }
                if step >= last_step || iterations >= opts.max_iter {
                    return Err(Error::ProfileTooLarge(format!(
                        "iteration not contracting at alpha={alpha} (step {step:e}); shrink eps1"
                    )));
                }
                last_step = step;
            }
            let x = [-a2 + y[0], -a1 + y[1]];
            let f = (x[0] + a2) * (x[1] + a1) + (a0 - a1 * a2) + varsigma(x) * c;
            Ok(CurvePoint { alpha, x, f, iterations })
        })
        .collect::<Result<_>>()?;
    let sign_changes = cyclic_sign_changes(curve.iter().map(|c| c.f));
    let max_displacement = curve.iter().map(|c| (c.x[0] + a2).hypot(c.x[1] + a1)).fold(0.0, f64::max);
    let amp = a3.abs() + a4.abs();
    let c_ratio = (amp > 0.0).then(|| max_displacement / amp);
    let max_iterations = curve.iter().map(|c| c.iterations).max().unwrap_or(0);
    Ok(ProbeResult { curve, sign_changes, max_displacement, c_ratio, max_iterations })
}

/// Sign changes around a closed loop; exact zeros are skipped.
pub fn cyclic_sign_changes(values: impl Iterator<Item = f64>) -> usize {
    let signs: Vec<bool> = values.filter(|v| *v != 0.0).map(|v| v > 0.0).collect();
    if signs.len() < 2 {
        return 0;
    }
    (0..signs.len()).filter(|&i| signs[i] != signs[(i + 1) % signs.len()]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::DEFAULT_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prof() -> RegionProfile {
        RegionProfile::default()
    }

    #[test]
    fn profile_shape() {
        let p = prof();
        assert!((p.eta(0.0) - 0.05).abs() < 1e-15);
        assert!((p.eps1(0.0) - 2.5e-5).abs() < 1e-18);
        assert_eq!(p.eta(1.0), 0.0);
        assert_eq!(p.eps1(1.0), 0.0);
        assert!(p.eps1(0.3) < p.eps1(0.2));
        let parsed: RegionProfile = serde_json::from_str(r#"{"eps2_const": 0.5}"#).unwrap();
        assert_eq!(parsed.eps2_const, 0.5);
        assert_eq!(parsed.eta_scale, 0.05);
        assert!(RegionProfile { eta_scale: 0.0, ..p }.validate().is_err());
    }

    #[test]
    fn sign_convention() {
        let p = ParamPoint::new([0.0, -2.0, 0.0, 0.0, 0.0, 2.0], vec![], 1).unwrap();
        assert!((p.a[1] - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((p.a[5] + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.chart().unwrap()[1], -1.0);
        assert!(ParamPoint::new([0.0; 6], vec![], 1).is_err());
        assert!(ParamPoint::o1(vec![0.0], 2).is_err());
        assert!(ParamPoint::o1(vec![1.0, 1.0], 2).is_err());
    }

    #[test]
    fn classification() {
        let e1 = prof().eps1(0.0);
        let k = |a: [f64; 6]| classify(&ParamPoint::new(a, vec![], 1).unwrap(), &prof()).kind;
        assert_eq!(k([0.0, 0.0, 0.0, 0.0, 0.0, 1.0]), RegionKind::ASing);
        assert_eq!(k([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]), RegionKind::Outside);
        assert_eq!(k([e1 / 2.0, 0.0, 0.0, 0.0, 0.0, 1.0]), RegionKind::A1);
        assert_eq!(k([1.5 * e1, 0.0, 0.0, 0.0, 0.0, 1.0]), RegionKind::A2);
        assert_eq!(k([3.0 * e1, 0.0, 0.0, 0.0, 0.0, 1.0]), RegionKind::Outside);
        assert_eq!(k([0.06, 0.3, 0.2, 0.0, 0.0, 1.0]), RegionKind::ASing);
        assert_eq!(k([0.0, 0.8, 0.8, 0.0, 0.0, 1.0]), RegionKind::Outside);
    }

    #[test]
    fn f_at_o1() {
        let p = prof();
        let f = build_f(&ParamPoint::o1(vec![0.0, 0.0], 2).unwrap(), &p).unwrap();
        let lead = p.eps2(0.0) * p.eps1(0.0);
        assert_eq!(f.deg(), 3);
        assert!((f.cos[2] - lead).abs() < 1e-22);
        assert!(f.coeffs()[..5].iter().all(|&c| c == 0.0));
        let f = build_f(&ParamPoint::o1(vec![0.6, 0.8], 2).unwrap(), &p).unwrap();
        assert!(f.cos[2].abs() < 1e-20);
        let out = ParamPoint::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], vec![0.0, 0.0], 2).unwrap();
        assert!(matches!(build_f(&out, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn f_on_a1_boundary_is_linear() {
        let e1 = prof().eps1(0.0);
        let p = ParamPoint::new([0.0, 0.0, 0.0, e1 * 0.6, e1 * 0.8, 1.0], vec![0.3, -0.2], 2).unwrap();
        let f = build_f(&p, &prof()).unwrap();
        assert!(f.cos[1..].iter().chain(&f.sin[1..]).all(|c| c.abs() < 1e-20));
        assert_eq!(f.trimmed(1e-9).deg(), 1);
    }

    #[test]
    fn genus_values() {
        let p = prof();
        assert_eq!(genus_map(&ParamPoint::o1(vec![0.0, 0.0], 2).unwrap(), &p, DEFAULT_TOL), 2);
        assert_eq!(genus_map(&ParamPoint::o1(vec![], 1).unwrap(), &p, DEFAULT_TOL), 1);
        assert_eq!(genus_map(&ParamPoint::o1(vec![0.0; 4], 3).unwrap(), &p, DEFAULT_TOL), 3);
        assert!(genus_map(&ParamPoint::o1(vec![0.6, 0.8], 2).unwrap(), &p, DEFAULT_TOL) <= 1);
        assert!(genus_map(&ParamPoint::o1(vec![1.0, 0.0], 2).unwrap(), &p, DEFAULT_TOL) <= 1);
        let out = ParamPoint::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], vec![0.0, 0.0], 2).unwrap();
        assert_eq!(genus_map(&out, &p, DEFAULT_TOL), 0);
    }

    #[test]
    fn genus_bounded_by_g() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = prof();
        for k in 0..300 {
            let g = 1 + k % 3;
            let e1 = p.eps1(0.0);
            let a = [rng.random_range(-0.5..0.5) * e1, 0.0, 0.0, rng.random_range(-0.5..0.5) * e1, 0.0, 1.0];
            let mut b: Vec<f64> = (0..2 * g - 2).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = norm(&b);
            if n > 1.0 {
                b.iter_mut().for_each(|x| *x /= n);
            }
            let pt = ParamPoint::new(a, b, g).unwrap();
            assert!(genus_map(&pt, &p, DEFAULT_TOL) <= g);
        }
    }

    #[test]
    fn t_examples() {
        let p = prof();
        assert_eq!(normalize_t(&ParamPoint::o1(vec![0.0, 0.0], 2).unwrap(), &p).unwrap(), vec![0.0; 5]);
        let d = 0.1;
        let s = normalize_t(&ParamPoint::o1(vec![d, 0.0], 2).unwrap(), &p).unwrap();
        assert!((s[3] - d / (1.0 - d)).abs() < 1e-12);
        assert!(s.iter().enumerate().all(|(i, x)| i == 3 || *x == 0.0));
        let e1 = p.eps1(0.0);
        let q = ParamPoint::new([e1 / 3.0, 0.0, 0.0, 0.0, 0.0, 1.0], vec![0.0, 0.0], 2).unwrap();
        assert!(normalize_t(&q, &p).unwrap()[0] != 0.0);
        let edge = ParamPoint::o1(vec![0.6, 0.8], 2).unwrap();
        assert!(matches!(normalize_t(&edge, &p), Err(Error::Boundary(_))));
        let off = ParamPoint::new([0.0, 0.1, 0.0, 0.0, 0.0, 1.0], vec![0.0, 0.0], 2).unwrap();
        assert!(matches!(normalize_t(&off, &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn t_section_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in 1..=3 {
            for _ in 0..50 {
                let s: Vec<f64> = (0..2 * g + 1).map(|_| rng.random_range(-3.0..3.0)).collect();
                let pt = section_t(&s, g, &prof()).unwrap();
                assert_eq!(classify(&pt, &prof()).kind, RegionKind::A1);
                let back = normalize_t(&pt, &prof()).unwrap();
                for (x, y) in s.iter().zip(&back) {
                    assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "{s:?} vs {back:?}");
                }
            }
        }
    }

    #[test]
    fn sweeps() {
        let o1 = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        let one = sweep(o1, 2, 1, &prof(), DEFAULT_TOL).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].genus, 2);
        let g1 = sweep(o1, 1, 9, &prof(), DEFAULT_TOL).unwrap();
        assert_eq!(g1.len(), 1);
        assert_eq!(g1[0].genus, 1);
        let rows = sweep(o1, 2, 5, &prof(), DEFAULT_TOL).unwrap();
        assert_eq!(rows.len(), 13);
        for r in &rows {
            let n = norm(&r.b);
            if n < 0.5 {
                assert_eq!(r.genus, 2);
            }
            if (n - 1.0).abs() < 1e-12 {
                assert!(r.genus <= 1);
            }
        }
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, 2, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("a0,a1,a2,a3,a4,a5,b2,b2p,region,genus\n"));
        assert_eq!(text.lines().count(), 14);
    }

    #[test]
    fn probe_trivial_when_a3_a4_vanish() {
        let e1 = prof().eps1(0.0);
        let p = ParamPoint::new([1.5 * e1, 0.0, 0.0, 0.0, 0.0, 1.0], vec![], 1).unwrap();
        let r = probe(&p, &prof(), &ProbeOptions::default()).unwrap();
        assert_eq!(r.sign_changes, 0);
        assert_eq!(r.max_displacement, 0.0);
        assert_eq!(r.c_ratio, None);
        assert!(r.curve.iter().all(|c| c.f == r.curve[0].f));
    }

    #[test]
    fn probe_a3_sample() {
        let e1 = prof().eps1(0.0);
        let p = ParamPoint::new([e1, 0.0, 0.0, e1 / 2.0, 0.0, 1.0], vec![], 1).unwrap();
        let r = probe(&p, &prof(), &ProbeOptions::default()).unwrap();
        assert!(r.sign_changes <= 2);
        let q = ParamPoint::new([0.0, 0.0, 0.0, 1.5 * e1, 0.0, 1.0], vec![], 1).unwrap();
        assert_eq!(probe(&q, &prof(), &ProbeOptions::default()).unwrap().sign_changes, 2);
        let a1 = ParamPoint::o1(vec![], 1).unwrap();
        assert!(matches!(probe(&a1, &prof(), &ProbeOptions::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn probe_random_a2() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let opts = ProbeOptions { grid: 512, ..Default::default() };
        for _ in 0..100 {
            let a = random_a2(&mut rng, &prof(), 0.9);
            let p = ParamPoint::new(a, vec![], 1).unwrap();
            assert_eq!(classify(&p, &prof()).kind, RegionKind::A2);
            let r = probe(&p, &prof(), &opts).unwrap();
            assert!(r.sign_changes <= 2);
            assert!(r.max_iterations <= 200);
        }
    }

    #[test]
    fn probe_rejects_large_profile() {
        let big = RegionProfile { eta_scale: 1.0, eps1_scale: 1.0, eps2_const: 1.0 };
        let p = ParamPoint::new([0.25, 0.5, 0.5, 0.45, 0.0, 1.0], vec![], 1).unwrap();
        assert_eq!(classify(&p, &big).kind, RegionKind::A2);
        let e = probe(&p, &big, &ProbeOptions::default()).unwrap_err();
        assert!(matches!(e, Error::ProfileTooLarge(_)), "{e:?}");
    }

    #[test]
    fn sign_change_counter() {
        assert_eq!(cyclic_sign_changes([1.0, -1.0, -2.0, 3.0].into_iter()), 2);
        assert_eq!(cyclic_sign_changes([1.0, 0.0, 2.0].into_iter()), 0);
        assert_eq!(cyclic_sign_changes(std::iter::empty()), 0);
    }
}
