//! The twelve acceptance checks, shared by `pinchlab verify all` and the test suite.

use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::descent::{random_schedule, run_descent};
use crate::error::{Error, Result};
use crate::family::{classify, genus_map, probe, random_a2, random_sphere, sweep, ParamPoint, ProbeOptions, RegionKind, RegionProfile};
use crate::gf2::{enumerate_subspaces, Gf2Subspace};
use crate::grassmann::{build_gr, build_gr_range};
use crate::homology::{betti_numbers, reduced_betti};
use crate::linkhom::{check_twelve_cycle, homology_comparison, order_compatibility_check, twelve_cycle, HandleDiagram};
use crate::oracle::{closed_subsets, membership_bits, naive_betti, random_complex};
use crate::trigpoly::{conjugate_pair_check, n_odd, retract, root_sum_check, roots, TrigPoly, DEFAULT_TOL};

pub const CRITERIA: usize = 12;

pub const TITLES: [&str; CRITERIA] = [
    "Gr^2[1] is a 12-gon",
    "full Grassmannians are contractible",
    "chain-length bound in Gr^g[1,g-1]",
    "nontrivial target homology",
    "twelve-cycle certificate",
    "genus stratification of the family",
    "retraction conserves n_odd",
    "conjugate pairs and root sum",
    "critical-curve probe bound",
    "face/image homology and order compatibility",
    "descent invariants",
    "oracle equivalence",
];

/// Wall-clock budget per criterion, in seconds.
pub const LIMITS: [f64; CRITERIA] = [1.0, 10.0, 60.0, 600.0, 1.0, 5.0, 10.0, 10.0, 60.0, 300.0, 60.0, 60.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyOptions {
    /// Largest genus exercised by criteria 3, 4, 10 and 11.
    pub max_g: usize,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub profile: RegionProfile,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_g: 3, seed: 1, samples: 1000, tol: DEFAULT_TOL, profile: RegionProfile::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub checks_passed: bool,
    pub seconds: f64,
    pub limit_seconds: f64,
    pub detail: Value,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}: {} ({:.2}s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds
        )
    }
}

pub fn run_criterion(id: usize, opts: &VerifyOptions) -> CriterionOutcome {
    let start = Instant::now();
    let res = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(opts),
        4 => c4(opts),
        5 => c5(),
        6 => c6(opts),
        7 => c7(opts),
        8 => c8(opts),
        9 => c9(opts),
        10 => c10(opts),
        11 => c11(opts),
        12 => c12(opts),
        _ => Err(Error::Lookup(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (checks_passed, detail) = match res {
        Ok(x) => x,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    let limit = LIMITS.get(id.wrapping_sub(1)).copied().unwrap_or(0.0);
    CriterionOutcome {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed: checks_passed && seconds <= limit,
        checks_passed,
        seconds,
        limit_seconds: limit,
        detail,
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionOutcome> {
    (1..=CRITERIA).map(|id| run_criterion(id, opts)).collect()
}

type Check = Result<(bool, Value)>;

fn rng(opts: &VerifyOptions, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(opts.seed);
    r.set_stream(stream);
    r
}

fn c1() -> Check {
    let gr = build_gr_range(2, 1, 1)?;
    let k = gr.order_complex()?;
    let betti = betti_numbers(&k)?;
    let degrees_ok = k.degrees().iter().all(|&d| d == 2);
    let ok = gr.len() == 12 && k.counts() == [12, 12] && degrees_ok && k.components() == 1 && betti == [1, 1];
    Ok((ok, json!({ "elements": gr.len(), "counts": k.counts(), "degree_two": degrees_ok, "components": k.components(), "betti": betti })))
}

fn c2() -> Check {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 1..=3 {
        let p = build_gr(n)?;
        let k = p.order_complex(n)?;
        let zero = p.index_of(&Gf2Subspace::zero(n)).ok_or_else(|| Error::Lookup("zero subspace".into()))?;
        let reduced = reduced_betti(&k)?;
        let cone = k.is_cone_with_apex(zero as u32);
        ok &= cone && reduced.iter().all(|&b| b == 0);
        rows.push(json!({ "n": n, "elements": p.len(), "reduced_betti": reduced, "cone_at_zero": cone }));
    }
    Ok((ok, json!(rows)))
}

fn c3(opts: &VerifyOptions) -> Check {
    let mut ok = true;
    let mut rows = Vec::new();
    for g in 2..=opts.max_g.clamp(2, 3) {
        let gr = build_gr_range(g, 1, g - 1)?;
        let longest = gr.poset.max_chain_length();
        // one dimension beyond the bound, to see that nothing lives there
        let k = gr.poset.order_complex(2 * g - 2)?;
        let over = k.counts().get(2 * g - 2).copied().unwrap_or(0);
        ok &= longest == 2 * g - 2 && over == 0;
        rows.push(json!({ "g": g, "elements": gr.len(), "max_chain": longest, "simplices_above_bound": over }));
    }
    Ok((ok, json!(rows)))
}

fn c4(opts: &VerifyOptions) -> Check {
    let mut ok = true;
    let mut rows = Vec::new();
    for g in 2..=opts.max_g.clamp(2, 3) {
        let gr = build_gr_range(g, 1, g - 1)?;
        let betti = betti_numbers(&gr.order_complex()?)?;
        let top = betti.get(2 * g - 3).copied().unwrap_or(0);
        ok &= top > 0;
        rows.push(json!({ "g": g, "betti": betti, "degree": 2 * g - 3, "rank": top }));
    }
    Ok((ok, json!(rows)))
}

fn c5() -> Check {
    let r = check_twelve_cycle(&twelve_cycle())?;
    Ok((r.passed(), serde_json::to_value(&r).expect("serializable")))
}

fn c6(opts: &VerifyOptions) -> Check {
    let o1 = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    let rows = sweep(o1, 2, 41, &opts.profile, opts.tol)?;
    let mut interior_checked = 0;
    let mut interior_bad = Vec::new();
    let mut sphere_checked = 0;
    let mut sphere_bad = Vec::new();
    for r in &rows {
        let n = r.b.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n <= 0.95 {
            interior_checked += 1;
            if r.genus != 2 {
                interior_bad.push(json!({ "b": r.b, "genus": r.genus }));
            }
        } else if (n - 1.0).abs() <= 1e-12 {
            sphere_checked += 1;
            if r.genus > 1 {
                sphere_bad.push(json!({ "b": r.b, "genus": r.genus }));
            }
        }
    }
    let mut rng = rng(opts, 6);
    let mut outside_bad = 0;
    let mut outside = 0;
    while outside < 100 {
        let pt = ParamPoint::new(random_sphere(&mut rng), vec![rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)], 2)?;
        if classify(&pt, &opts.profile).kind != RegionKind::Outside {
            continue;
        }
        outside += 1;
        if genus_map(&pt, &opts.profile, opts.tol) != 0 {
            outside_bad += 1;
        }
    }
    let ok = interior_bad.is_empty() && sphere_bad.is_empty() && outside_bad == 0;
    let first: Vec<&Value> = interior_bad.iter().take(5).collect();
    Ok((
        ok,
        json!({
            "grid_points": rows.len(),
            "interior_checked": interior_checked,
            "interior_violations": interior_bad.len(),
            "first_interior_violations": first,
            "sphere_checked": sphere_checked,
            "sphere_violations": sphere_bad.len(),
            "outside_checked": outside,
            "outside_violations": outside_bad,
        }),
    ))
}

fn random_trig<R: Rng>(rng: &mut R, monic: bool) -> Result<TrigPoly> {
    let n = rng.random_range(1..=4usize);
    if monic {
        let s: Vec<f64> = (0..2 * n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        TrigPoly::monic_cosine(&s)
    } else {
        let c: Vec<f64> = (0..2 * n + 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        TrigPoly::from_coeffs(&c)
    }
}

fn c7(opts: &VerifyOptions) -> Check {
    let mut rng = rng(opts, 7);
    let polys: Vec<TrigPoly> = (0..opts.samples).map(|_| random_trig(&mut rng, false)).collect::<Result<_>>()?;
    let tol = opts.tol;
    let failures: Vec<Value> = polys
        .par_iter()
        .filter_map(|f| {
            let cfg = match roots(f, tol) {
                Ok(c) => c,
                Err(e) => return Some(json!({ "coeffs": f.coeffs(), "error": e.to_string() })),
            };
            let base = n_odd(&cfg, tol);
            let counts: Vec<usize> =
                (0..=20).map(|i| retract(&cfg, i as f64 / 20.0).map_or(usize::MAX, |c| n_odd(&c, tol))).collect();
            counts.iter().any(|&c| c != base).then(|| json!({ "coeffs": f.coeffs(), "n_odd": counts }))
        })
        .collect();
    let first: Vec<&Value> = failures.iter().take(5).collect();
    Ok((failures.is_empty(), json!({ "samples": polys.len(), "t_grid": 21, "failures": failures.len(), "first_failures": first })))
}

fn c8(opts: &VerifyOptions) -> Check {
    let mut rng = rng(opts, 8);
    let polys: Vec<TrigPoly> = (0..opts.samples).map(|_| random_trig(&mut rng, true)).collect::<Result<_>>()?;
    let tol = 1e-8;
    let bad: Vec<(bool, bool, Vec<f64>)> = polys
        .par_iter()
        .filter_map(|f| {
            let (pairs, sum) = match roots(f, tol) {
                Ok(cfg) => (conjugate_pair_check(&cfg, tol), root_sum_check(&cfg, tol)),
                Err(_) => (false, false),
            };
            (!(pairs && sum)).then(|| (pairs, sum, f.coeffs()))
        })
        .collect();
    let pair_fail = bad.iter().filter(|b| !b.0).count();
    let sum_fail = bad.iter().filter(|b| !b.1).count();
    let first: Vec<&Vec<f64>> = bad.iter().take(5).map(|b| &b.2).collect();
    Ok((
        bad.is_empty(),
        json!({ "samples": polys.len(), "tolerance": tol, "conjugate_failures": pair_fail, "sum_failures": sum_fail, "first_failures": first }),
    ))
}

fn c9(opts: &VerifyOptions) -> Check {
    let mut rng = rng(opts, 9);
    let points: Vec<ParamPoint> =
        (0..opts.samples).map(|_| ParamPoint::new(random_a2(&mut rng, &opts.profile, 0.9), vec![], 1)).collect::<Result<_>>()?;
    let popts = ProbeOptions::default();
    let results: Vec<Result<(usize, usize, f64, Option<f64>)>> = points
        .par_iter()
        .map(|p| {
            let r = probe(p, &opts.profile, &popts)?;
            Ok((r.sign_changes, r.max_iterations, r.max_displacement, r.c_ratio))
        })
        .collect();
    let mut errors = Vec::new();
    let mut max_changes = 0;
    let mut over_two = 0;
    let mut max_iter = 0;
    let mut c_fit: f64 = 0.0;
    let mut done = Vec::new();
    for (p, r) in points.iter().zip(results) {
        match r {
            Ok((s, it, disp, c)) => {
                max_changes = max_changes.max(s);
                over_two += usize::from(s > 2);
                max_iter = max_iter.max(it);
                if let Some(c) = c {
                    c_fit = c_fit.max(c);
                }
                let ch = p.chart().expect("A2 lies in the chart");
                done.push((disp, ch[3].abs() + ch[4].abs()));
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let bound_violations = done.iter().filter(|(d, amp)| *d > c_fit * amp * (1.0 + 1e-12)).count();
    let ok = errors.is_empty() && over_two == 0 && max_iter <= popts.max_iter && bound_violations == 0 && c_fit.is_finite();
    let first: Vec<&String> = errors.iter().take(5).collect();
    Ok((
        ok,
        json!({
            "samples": points.len(),
            "grid": popts.grid,
            "psi": popts.psi,
            "non_converged": errors.len(),
            "first_errors": first,
            "max_sign_changes": max_changes,
            "samples_over_two": over_two,
            "max_iterations": max_iter,
            "fitted_c": c_fit,
            "bound_violations": bound_violations,
        }),
    ))
}

fn c10(opts: &VerifyOptions) -> Check {
    let cmp = homology_comparison(2)?;
    let mut ok = cmp.equal() && cmp.face_betti == [1, 1];
    let mut compat = Vec::new();
    for g in 2..=opts.max_g.clamp(2, 3) {
        let r = order_compatibility_check(g)?;
        ok &= r.passed();
        compat.push(json!({ "g": g, "pairs": r.pairs_checked, "converse_pairs": r.converse_pairs_checked, "counterexamples": r.counterexamples.len() }));
    }
    Ok((ok, json!({ "comparison": cmp, "compatibility": compat })))
}

fn c11(opts: &VerifyOptions) -> Check {
    let mut rng = rng(opts, 11);
    let max_g = opts.max_g.clamp(1, 3);
    let mut jobs = Vec::with_capacity(opts.samples);
    for k in 0..opts.samples {
        let g = 1 + k % max_g;
        let all = HandleDiagram::all(g)?;
        let d0 = *all.choose(&mut rng).expect("non-empty");
        let len = rng.random_range(1..=10);
        jobs.push((d0, random_schedule(&d0, len, &mut rng)));
    }
    let violations: Vec<String> = jobs
        .par_iter()
        .flat_map_iter(|(d0, s)| match run_descent(d0, s) {
            Ok(tr) => tr.invariant_violations(),
            Err(e) => vec![e.to_string()],
        })
        .collect();
    let events: usize = jobs.iter().map(|j| j.1.len()).sum();
    let first: Vec<&String> = violations.iter().take(5).collect();
    Ok((violations.is_empty(), json!({ "schedules": jobs.len(), "events": events, "violations": violations.len(), "first_violations": first })))
}

fn c12(opts: &VerifyOptions) -> Check {
    let mut sub_ok = true;
    let mut counts = Vec::new();
    for n in 1..=4 {
        let mut fast: Vec<u64> = enumerate_subspaces(n)?.iter().map(membership_bits).collect();
        fast.sort_unstable();
        let brute = closed_subsets(n);
        sub_ok &= fast == brute;
        counts.push(json!({ "n": n, "enumerated": fast.len(), "brute_force": brute.len() }));
    }
    let mut rng = rng(opts, 12);
    let mut mismatches = 0;
    let mut sizes = Vec::new();
    for _ in 0..100 {
        let k = random_complex(&mut rng, 500)?;
        sizes.push(k.total());
        if betti_numbers(&k)? != naive_betti(&k) {
            mismatches += 1;
        }
    }
    Ok((
        sub_ok && mismatches == 0,
        json!({ "subspaces": counts, "complexes": 100, "max_simplices": sizes.iter().max(), "betti_mismatches": mismatches }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        let opts = VerifyOptions { samples: 50, ..Default::default() };
        for id in [1, 2, 5, 12] {
            let o = run_criterion(id, &opts);
            assert!(o.checks_passed, "{}", o.detail);
        }
        assert!(!run_criterion(13, &opts).passed);
    }

    #[test]
    fn outcome_line() {
        let o = run_criterion(1, &VerifyOptions::default());
        assert!(o.line().starts_with("criterion  1 "));
    }
}
