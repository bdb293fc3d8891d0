//! Discrete homology descent along pinch-off schedules.
//!
//! A trace starts from a diagram with groups `f_map(d0)` and applies events in
//! order. `b` tracks the initial classes that still descend; `current` is the
//! homology of the evolving complement inside the normalized coordinates.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf2::{restricted_form_rank, Gf2Matrix, Gf2Subspace, Gf2Vector};
use crate::grassmann::build_gr_range;
use crate::homology::{edge_cycle, ChainComplexZ2, Z2Cycle};
use crate::linkhom::{arc_name, f_map, parse_arc, twelve_cycle, HandleDiagram, Side, SubgroupPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EventKind {
    Isotopy,
    Collapse {
        arc: String,
    },
    /// Neck surgery on `side`; `kill` lists classes of the opposite side, in
    /// normalized coordinates, that bound the surgery disk.
    Surgery {
        side: Side,
        kill: Vec<String>,
    },
    Shrink {
        side: Side,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinchEvent {
    #[serde(flatten)]
    pub kind: EventKind,
    /// Genus the schedule claims after this event.
    #[serde(default, rename = "genus", skip_serializing_if = "Option::is_none")]
    pub claimed_genus: Option<usize>,
}

impl PinchEvent {
    pub fn isotopy() -> Self {
        PinchEvent { kind: EventKind::Isotopy, claimed_genus: None }
    }

    pub fn collapse(arc: &str) -> Self {
        PinchEvent { kind: EventKind::Collapse { arc: arc.to_string() }, claimed_genus: None }
    }

    pub fn surgery(side: Side, kill: &[&str]) -> Self {
        PinchEvent {
            kind: EventKind::Surgery { side, kill: kill.iter().map(|s| s.to_string()).collect() },
            claimed_genus: None,
        }
    }

    pub fn shrink(side: Side) -> Self {
        PinchEvent { kind: EventKind::Shrink { side }, claimed_genus: None }
    }

    pub fn claiming(mut self, genus: usize) -> Self {
        self.claimed_genus = Some(genus);
        self
    }
}

/// A schedule document: start diagram plus events.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub g: usize,
    #[serde(default)]
    pub initial: Vec<String>,
    pub events: Vec<PinchEvent>,
}

impl Schedule {
    /// Accepts either `{"g":..,"initial":[..],"events":[..]}` or a bare event array.
    pub fn from_json(v: &Value, default_g: usize) -> Result<Schedule> {
        if v.is_array() {
            let events: Vec<PinchEvent> =
                serde_json::from_value(v.clone()).map_err(|e| Error::Structural(format!("bad schedule: {e}")))?;
            return Ok(Schedule { g: default_g, initial: Vec::new(), events });
        }
        serde_json::from_value(v.clone()).map_err(|e| Error::Structural(format!("bad schedule: {e}")))
    }

    pub fn start(&self) -> Result<HandleDiagram> {
        let arcs: Vec<&str> = self.initial.iter().map(String::as_str).collect();
        HandleDiagram::from_arcs(self.g, &arcs)
    }
}

#[derive(Clone, Debug)]
pub struct DescentTrace {
    pub g: usize,
    pub schedule: Vec<PinchEvent>,
    /// Index 0 is the initial state, index `t` the state after event `t`.
    pub diagrams: Vec<HandleDiagram>,
    pub b_in: Vec<Gf2Subspace>,
    pub b_out: Vec<Gf2Subspace>,
    pub cur_in: Vec<Gf2Subspace>,
    pub cur_out: Vec<Gf2Subspace>,
    pub genus: Vec<usize>,
    /// Surgeries and shrinks so far; once positive the genus no longer follows the diagram.
    pub surgeries: usize,
}

fn schedule_err(index: usize, reason: impl Into<String>) -> Error {
    Error::Schedule { index, reason: reason.into() }
}

fn form_rank(a: &Gf2Subspace, b: &Gf2Subspace) -> usize {
    restricted_form_rank(&Gf2Matrix::identity(a.ambient_dim()), a, b).expect("same ambient")
}

/// Applies the events in order. Errors name the offending event (0-based).
pub fn run_descent(d0: &HandleDiagram, schedule: &[PinchEvent]) -> Result<DescentTrace> {
    let g = d0.g();
    let start = f_map(d0);
    let mut tr = DescentTrace {
        g,
        schedule: schedule.to_vec(),
        diagrams: vec![*d0],
        b_in: vec![start.a_in.clone()],
        b_out: vec![start.a_out.clone()],
        cur_in: vec![start.a_in.clone()],
        cur_out: vec![start.a_out.clone()],
        genus: vec![d0.genus()],
        surgeries: 0,
    };
    for (idx, ev) in schedule.iter().enumerate() {
        let d = *tr.diagrams.last().expect("non-empty");
        let (mut b_in, mut b_out) = (tr.b_in[idx].clone(), tr.b_out[idx].clone());
        let (mut c_in, mut c_out) = (tr.cur_in[idx].clone(), tr.cur_out[idx].clone());
        let mut next = d;
        match &ev.kind {
            EventKind::Isotopy => {}
            EventKind::Collapse { arc } => {
                let a = parse_arc(g, arc).map_err(|e| schedule_err(idx, e.to_string()))?;
                next = d.collapse(a).map_err(|e| schedule_err(idx, e.to_string()))?;
                let img = f_map(&next);
                b_in = b_in.intersect(&img.a_in)?;
                b_out = b_out.intersect(&img.a_out)?;
                c_in = c_in.intersect(&img.a_in)?;
                c_out = c_out.intersect(&img.a_out)?;
            }
            EventKind::Surgery { side, kill } => {
                let vecs = kill
                    .iter()
                    .map(|s| {
                        let v = Gf2Vector::parse(s).map_err(|e| schedule_err(idx, e.to_string()))?;
                        if v.len() != g {
                            return Err(schedule_err(idx, format!("kill vector {s:?} must have width {g}")));
                        }
                        Ok(v)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let ann = Gf2Subspace::span(g, &vecs)?.annihilator();
                match side {
                    Side::Inner => {
                        b_in = b_in.intersect(&ann)?;
                        c_in = c_in.intersect(&ann)?;
                    }
                    Side::Outer => {
                        b_out = b_out.intersect(&ann)?;
                        c_out = c_out.intersect(&ann)?;
                    }
                }
                tr.surgeries += 1;
            }
            EventKind::Shrink { side } => {
                match side {
                    Side::Inner => {
                        b_in = Gf2Subspace::zero(g);
                        c_in = Gf2Subspace::zero(g);
                    }
                    Side::Outer => {
                        b_out = Gf2Subspace::zero(g);
                        c_out = Gf2Subspace::zero(g);
                    }
                }
                tr.surgeries += 1;
            }
        }
        let genus = form_rank(&c_in, &c_out);
        let prev = tr.genus[idx];
        if tr.surgeries == 0 && genus != next.genus() {
            return Err(schedule_err(idx, format!("model genus {genus} disagrees with diagram genus {}", next.genus())));
        }
        if let Some(claim) = ev.claimed_genus {
            if claim > prev {
                return Err(schedule_err(idx, format!("genus increase: claimed {claim} after {prev}")));
            }
            if claim != genus {
                return Err(schedule_err(idx, format!("genus mismatch: claimed {claim}, computed {genus}")));
            }
        }
        tr.diagrams.push(next);
        tr.b_in.push(b_in);
        tr.b_out.push(b_out);
        tr.cur_in.push(c_in);
        tr.cur_out.push(c_out);
        tr.genus.push(genus);
    }
    Ok(tr)
}

impl DescentTrace {
    pub fn len(&self) -> usize {
        self.schedule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schedule.is_empty()
    }

    pub fn b(&self, side: Side) -> &[Gf2Subspace] {
        match side {
            Side::Inner => &self.b_in,
            Side::Outer => &self.b_out,
        }
    }

    pub fn final_pair(&self) -> SubgroupPair {
        SubgroupPair { a_in: self.b_in.last().cloned().expect("non-empty"), a_out: self.b_out.last().cloned().expect("non-empty") }
    }

    pub fn b_rank(&self, t: usize) -> usize {
        form_rank(&self.b_in[t], &self.b_out[t])
    }

    /// Violations of nestedness, closure, genus monotonicity and the rank bounds.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for t in 0..self.b_in.len() {
            for (name, track, cur) in [("in", &self.b_in, &self.cur_in), ("out", &self.b_out, &self.cur_out)] {
                let b = &track[t];
                let rows = b.basis().rows();
                for i in 0..rows.len() {
                    for j in i..rows.len() {
                        let s = rows[i].add(&rows[j]).expect("same width");
                        if !b.contains(&s) {
                            bad.push(format!("t={t}: b_{name} not closed under addition"));
                        }
                    }
                }
                if t > 0 && !b.is_subspace_of(&track[t - 1]) {
                    bad.push(format!("t={t}: b_{name} not nested"));
                }
                // each surviving class has its (unique) image in the current group
                if !b.is_subspace_of(&cur[t]) {
                    bad.push(format!("t={t}: b_{name} has classes without an image"));
                }
            }
            if t > 0 && self.genus[t] > self.genus[t - 1] {
                bad.push(format!("t={t}: genus increased {} -> {}", self.genus[t - 1], self.genus[t]));
            }
            let r = self.b_rank(t);
            if r > self.genus[t] {
                bad.push(format!("t={t}: rank {r} exceeds genus {}", self.genus[t]));
            }
            let diagram_genus = self.diagrams[t].genus();
            if r > diagram_genus {
                bad.push(format!("t={t}: rank {r} exceeds diagram genus {diagram_genus}"));
            }
        }
        bad
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = (0..self.b_in.len())
            .map(|t| {
                json!({
                    "t": t,
                    "collapsed": self.diagrams[t].collapsed_names(),
                    "b_in": crate::grassmann::basis_strings(&self.b_in[t]),
                    "b_out": crate::grassmann::basis_strings(&self.b_out[t]),
                    "b_rank": self.b_rank(t),
                    "genus": self.genus[t],
                })
            })
            .collect();
        json!({ "g": self.g, "steps": steps })
    }
}

/// First time `c` drops out of `b` on `side`; `Some(0)` if it was never in
/// the initial group, `None` if it survives every event. The zero class never terminates.
pub fn termination_time(trace: &DescentTrace, c: &Gf2Vector, side: Side) -> Option<usize> {
    trace.b(side).iter().position(|b| !b.contains(c))
}

/// Random valid schedule of up to `len` events starting from `d0`.
pub fn random_schedule<R: Rng>(d0: &HandleDiagram, len: usize, rng: &mut R) -> Vec<PinchEvent> {
    let g = d0.g();
    let mut d = *d0;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let roll: f64 = rng.random();
        let ev = if roll < 0.2 {
            PinchEvent::isotopy()
        } else if roll < 0.7 {
            let free: Vec<usize> = (0..d.n_arcs()).filter(|&k| !d.is_collapsed(k)).collect();
            if free.len() <= 1 {
                PinchEvent::isotopy()
            } else {
                let a = *free.choose(rng).expect("non-empty");
                d = d.collapse(a).expect("free arc");
                PinchEvent::collapse(&arc_name(a))
            }
        } else if roll < 0.93 {
            let side = if rng.random_bool(0.5) { Side::Inner } else { Side::Outer };
            let k = rng.random_range(1..=g);
            let kill: Vec<String> = (0..k)
                .map(|_| (0..g).map(|_| if rng.random_bool(0.5) { '1' } else { '0' }).collect())
                .collect();
            PinchEvent { kind: EventKind::Surgery { side, kill }, claimed_genus: None }
        } else {
            PinchEvent::shrink(if rng.random_bool(0.5) { Side::Inner } else { Side::Outer })
        };
        out.push(ev);
    }
    out
}

/// Outcome of replaying a schedule family over the twelve strata.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict")]
pub enum ReplayVerdict {
    #[serde(rename = "REJECTED")]
    Rejected { stratum: String, event: Option<usize>, reason: String },
    #[serde(rename = "CONTRADICTION")]
    Contradiction {
        initial_is_boundary: bool,
        endpoint_is_boundary: bool,
        homologous: bool,
        initial_cycle: Vec<usize>,
        endpoint_cycle: Vec<usize>,
    },
}

impl ReplayVerdict {
    pub fn is_contradiction(&self) -> bool {
        matches!(self, ReplayVerdict::Contradiction { .. })
    }
}

pub fn stratum_name(d: &HandleDiagram) -> String {
    d.collapsed_names().join("")
}

/// Replays per-stratum schedules over the 12-cycle at `g = 2`.
///
/// Schedules are keyed by stratum name (`"H1"`, `"H1G1"`, ...); missing
/// strata stay fixed. A family passes the checks when every trace keeps its
/// genus in `[1, g-1]`, ends in `Gr^2[1]`, and the endpoints follow the
/// cycle's arrows. The endpoint cycle is then homologous to the initial one,
/// which is not a boundary, so no filling exists.
pub fn obstruction_replay(family: &BTreeMap<String, Vec<PinchEvent>>) -> Result<ReplayVerdict> {
    let g = 2;
    let tc = twelve_cycle();
    let names: Vec<String> = tc.strata.iter().map(stratum_name).collect();
    if let Some(unknown) = family.keys().find(|k| !names.contains(k)) {
        return Err(Error::Lookup(format!("unknown stratum {unknown:?}")));
    }
    let traces: Vec<Result<DescentTrace>> = tc
        .strata
        .par_iter()
        .zip(names.par_iter())
        .map(|(d, name)| run_descent(d, family.get(name).map_or(&[][..], Vec::as_slice)))
        .collect();
    let gr = build_gr_range(g, 1, g - 1)?;
    let mut endpoints = Vec::with_capacity(traces.len());
    for (name, tr) in names.iter().zip(traces) {
        let tr = match tr {
            Ok(t) => t,
            Err(Error::Schedule { index, reason }) => {
                return Ok(ReplayVerdict::Rejected { stratum: name.clone(), event: Some(index), reason })
            }
            Err(e) => return Err(e),
        };
        if let Some(t) = (0..tr.genus.len()).find(|&t| !(1..g).contains(&tr.genus[t])) {
            return Ok(ReplayVerdict::Rejected {
                stratum: name.clone(),
                event: t.checked_sub(1),
                reason: format!("genus {} leaves [1, {}] on a boundary stratum", tr.genus[t], g - 1),
            });
        }
        let end = tr.final_pair();
        match gr.index_of(&end.a_in, &end.a_out) {
            Some(i) => endpoints.push(i),
            None => {
                return Ok(ReplayVerdict::Rejected {
                    stratum: name.clone(),
                    event: None,
                    reason: format!("endpoint of rank {} leaves Gr^2[1]; rank bound violated", end.form_rank()),
                })
            }
        }
    }
    let m = endpoints.len();
    for i in (1..m).step_by(2) {
        for j in [i - 1, (i + 1) % m] {
            if !gr.poset.leq(endpoints[i], endpoints[j]) {
                return Ok(ReplayVerdict::Rejected {
                    stratum: names[i].clone(),
                    event: None,
                    reason: format!("endpoint is not below the endpoint of {}", names[j]),
                });
            }
        }
    }
    let complex = gr.order_complex()?;
    let cc = ChainComplexZ2::from_complex(&complex)?;
    let initial: Vec<usize> =
        tc.images.iter().map(|p| gr.index_of(&p.a_in, &p.a_out).expect("images lie in Gr^2[1]")).collect();
    let walk = |v: &[usize]| v.iter().map(|&x| x as u32).collect::<Vec<u32>>();
    let z0 = edge_cycle(&complex, &walk(&initial))?;
    let z1 = edge_cycle(&complex, &walk(&endpoints))?;
    let sum = Z2Cycle::new(1, z0.support.iter().chain(&z1.support).copied().collect());
    Ok(ReplayVerdict::Contradiction {
        initial_is_boundary: cc.is_boundary(&z0)?,
        endpoint_is_boundary: cc.is_boundary(&z1)?,
        homologous: cc.is_boundary(&sum)?,
        initial_cycle: initial,
        endpoint_cycle: endpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn top2() -> HandleDiagram {
        HandleDiagram::top(2).unwrap()
    }

    #[test]
    fn isotopy_keeps_everything() {
        let tr = run_descent(&top2(), &[PinchEvent::isotopy(), PinchEvent::isotopy()]).unwrap();
        assert!(tr.b_in.iter().all(|b| *b == Gf2Subspace::full(2)));
        assert!(tr.b_out.iter().all(|b| *b == Gf2Subspace::full(2)));
        assert_eq!(tr.genus, vec![2, 2, 2]);
    }

    #[test]
    fn single_and_double_collapse() {
        let tr = run_descent(&top2(), &[PinchEvent::collapse("H1")]).unwrap();
        assert_eq!((tr.b_in[1].dim(), tr.b_out[1].dim()), (1, 2));
        let tr = run_descent(&top2(), &[PinchEvent::collapse("H1"), PinchEvent::collapse("G1")]).unwrap();
        assert_eq!((tr.b_in[2].dim(), tr.b_out[2].dim()), (1, 1));
        assert_eq!(tr.genus[2], 1);
        assert!(tr.invariant_violations().is_empty());
    }

    #[test]
    fn termination_times() {
        let tr = run_descent(&top2(), &[PinchEvent::isotopy(), PinchEvent::collapse("H1")]).unwrap();
        let a1 = Gf2Vector::parse("10").unwrap();
        assert_eq!(termination_time(&tr, &a1, Side::Inner), Some(2));
        assert_eq!(termination_time(&tr, &Gf2Vector::zeros(2), Side::Inner), None);
        let survivor = Gf2Vector::parse("11").unwrap();
        assert_eq!(termination_time(&tr, &survivor, Side::Inner), None);
    }

    #[test]
    fn schedule_errors() {
        let e = run_descent(&top2(), &[PinchEvent::collapse("H1"), PinchEvent::collapse("H1")]).unwrap_err();
        assert!(matches!(e, Error::Schedule { index: 1, .. }));
        let e = run_descent(&top2(), &[PinchEvent::collapse("H1").claiming(2)]).unwrap_err();
        assert!(matches!(e, Error::Schedule { index: 0, ref reason } if reason.contains("mismatch")));
        let d = HandleDiagram::from_arcs(2, &["H1"]).unwrap();
        let e = run_descent(&d, &[PinchEvent::isotopy().claiming(2)]).unwrap_err();
        assert!(matches!(e, Error::Schedule { index: 0, ref reason } if reason.contains("increase")));
    }

    #[test]
    fn surgery_and_shrink() {
        let tr = run_descent(&top2(), &[PinchEvent::surgery(Side::Inner, &["10"])]).unwrap();
        assert_eq!(tr.b_in[1], Gf2Subspace::span(2, &[Gf2Vector::parse("01").unwrap()]).unwrap());
        assert_eq!(tr.genus[1], 1);
        let tr = run_descent(&top2(), &[PinchEvent::shrink(Side::Outer)]).unwrap();
        assert_eq!(tr.genus[1], 0);
        assert!(tr.invariant_violations().is_empty());
    }

    #[test]
    fn json_schedules() {
        let v: Value = serde_json::from_str(
            r#"[{"kind":"collapse","arc":"H1"},{"kind":"surgery","side":"out","kill":["01"]},{"kind":"isotopy","genus":1}]"#,
        )
        .unwrap();
        let s = Schedule::from_json(&v, 2).unwrap();
        assert_eq!(s.events.len(), 3);
        assert_eq!(s.events[2].claimed_genus, Some(1));
        let tr = run_descent(&s.start().unwrap(), &s.events).unwrap();
        assert_eq!(*tr.genus.last().unwrap(), 1);
    }

    #[test]
    fn random_traces_keep_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..300 {
            let g = 1 + k % 3;
            let d0 = HandleDiagram::top(g).unwrap();
            let s = random_schedule(&d0, 8, &mut rng);
            let tr = run_descent(&d0, &s).unwrap();
            assert!(tr.invariant_violations().is_empty(), "{:?}", tr.invariant_violations());
        }
    }

    #[test]
    fn replay_verdicts() {
        let v = obstruction_replay(&BTreeMap::new()).unwrap();
        match v {
            ReplayVerdict::Contradiction { initial_is_boundary, endpoint_is_boundary, homologous, .. } => {
                assert!(!initial_is_boundary && !endpoint_is_boundary && homologous);
            }
            other => panic!("{other:?}"),
        }
        let mut kill = BTreeMap::new();
        kill.insert("H1".to_string(), vec![PinchEvent::shrink(Side::Inner)]);
        assert!(matches!(obstruction_replay(&kill).unwrap(), ReplayVerdict::Rejected { .. }));
        let mut up = BTreeMap::new();
        up.insert("H1".to_string(), vec![PinchEvent::isotopy().claiming(2)]);
        let v = obstruction_replay(&up).unwrap();
        assert!(matches!(v, ReplayVerdict::Rejected { ref reason, .. } if reason.contains("increase")));
        // pushing a big vertex onto one neighbour leaves the other neighbour above it
        let mut push = BTreeMap::new();
        push.insert("H1".to_string(), vec![PinchEvent::collapse("G1")]);
        let v = obstruction_replay(&push).unwrap();
        assert!(matches!(v, ReplayVerdict::Rejected { ref reason, .. } if reason.contains("not below")), "{v:?}");
        let mut noop = BTreeMap::new();
        noop.insert("H1".to_string(), vec![PinchEvent::surgery(Side::Outer, &["00"]).claiming(1)]);
        let v = obstruction_replay(&noop).unwrap();
        assert!(matches!(v, ReplayVerdict::Contradiction { homologous: true, endpoint_is_boundary: false, .. }), "{v:?}");
    }
}
