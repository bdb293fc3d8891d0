//! Command-line front end. Every command prints one JSON document with sorted
//! keys and an embedded run manifest.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::descent::{obstruction_replay, run_descent, PinchEvent, ReplayVerdict, Schedule};
use crate::error::{Error, Result};
use crate::family::{
    classify, genus_map, probe, random_a2, sweep, write_sweep_csv, ParamPoint, ProbeOptions, RegionProfile,
};
use crate::grassmann::{basis_strings, build_gr, build_gr_range};
use crate::homology::betti_numbers;
use crate::linkhom::{check_twelve_cycle, order_compatibility_check, twelve_cycle};
use crate::symprod::{enumerate_faces, face_order_complex};
use crate::trigpoly::{conjugate_pair_check, n_odd, retract_with_tol, root_sum_check, roots, genus_from_n_odd, RootConfig, TrigPoly, DEFAULT_TOL};
use crate::verify::{run_all, VerifyOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "pinchlab", version, about = "Grassmannian posets, trigonometric root counts and pinch-off descent")]
pub struct Cli {
    /// JSON region profile {eta_scale, eps1_scale, eps2_const}.
    #[arg(long, global = true)]
    pub profile: Option<PathBuf>,
    /// Root clustering tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Grassmannian posets over Z2.
    #[command(subcommand)]
    Gr(GrCmd),
    /// Faces of the symmetric product of the circle.
    #[command(subcommand)]
    Sym(SymCmd),
    /// Trigonometric polynomial roots.
    #[command(subcommand)]
    Trig(TrigCmd),
    /// The explicit surface family.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Critical-curve probe near the singular circle.
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// Subgroup pairs of complement homology.
    #[command(subcommand)]
    Fmap(FmapCmd),
    /// Homology descent along pinch-off schedules.
    #[command(subcommand)]
    Descent(DescentCmd),
    /// Acceptance suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum GrCmd {
    /// All subspaces of Z2^n.
    Enum {
        #[arg(long)]
        n: usize,
    },
    /// Pairs with form rank in [lo, hi].
    Range {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lo: usize,
        #[arg(long)]
        hi: usize,
        #[arg(long)]
        homology: bool,
        /// Write the Hasse diagram to this file.
        #[arg(long)]
        hasse: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SymCmd {
    /// Boundary faces of genus at least K.
    Faces {
        #[arg(long)]
        g: usize,
        #[arg(long = "min-genus")]
        min_genus: usize,
        #[arg(long)]
        homology: bool,
    },
}

#[derive(Args, Debug)]
pub struct CoeffArgs {
    /// JSON array [s0, s1, s1', s2, s2', ...].
    #[arg(long)]
    pub coeffs: String,
}

#[derive(Subcommand, Debug)]
pub enum TrigCmd {
    Roots(CoeffArgs),
    Genus(CoeffArgs),
    Retract {
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// Genus of one family member.
    Genus {
        /// Homogeneous coordinates a0..a5.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
        /// Ball coordinates b2, b2', ..., bg, bg' (empty for g = 1).
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        b: String,
        #[arg(long)]
        g: usize,
    },
    /// Genus over a grid of the ball at fixed a.
    Sweep {
        #[arg(long)]
        g: usize,
        /// Grid points per axis.
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0,0,0,0,1")]
        a: Vec<f64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ProbeCmd {
    /// Seeded random samples of A2.
    #[command(name = "appendix-b")]
    Samples {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 0.0)]
        psi: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum FmapCmd {
    /// Images of the twelve pinching strata.
    Cycle12 {
        #[arg(long)]
        check: bool,
    },
    /// Order compatibility of the subgroup map.
    Compat {
        #[arg(long)]
        g: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum DescentCmd {
    /// Run one schedule.
    Run {
        #[arg(long)]
        schedule: PathBuf,
        /// Genus for bare event arrays.
        #[arg(long, default_value_t = 2)]
        g: usize,
    },
    /// Replay per-stratum schedules over the twelve-cycle.
    Replay {
        /// JSON object from stratum name to event array.
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    All {
        /// Largest genus exercised.
        #[arg(long, default_value_t = 3)]
        g: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

/// Writes finite floats as `{:.16e}`.
struct SciFloat;

impl serde_json::ser::Formatter for SciFloat {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            write!(w, "{v:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFloat);
    v.serialize(&mut ser).expect("in-memory write");
    String::from_utf8(buf).expect("utf8")
}

fn manifest(args: &[String], profile: &RegionProfile, tol: f64, seed: Option<u64>) -> Value {
    let epoch = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs())
        });
    json!({
        "command_line": args,
        "profile": profile,
        "tolerance": tol,
        "seed": seed,
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": epoch,
    })
}

/// Result of one command: payload plus pass/fail.
struct Outcome {
    result: Value,
    passed: bool,
    seed: Option<u64>,
}

fn ok(result: Value) -> Result<Outcome> {
    Ok(Outcome { result, passed: true, seed: None })
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::Precondition(_) | Error::Structural(_) | Error::Lookup(_) | Error::Capacity(_) | Error::Membership(_))
}

/// Parses `args` (including the program name), runs the command and writes JSON to `out`.
pub fn run_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if code == EXIT_PASS { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let profile = match load_profile(cli.profile.as_deref()) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    let (code, body, seed) = match dispatch(&cli, &profile) {
        Ok(o) => (if o.passed { EXIT_PASS } else { EXIT_FAIL }, json!({ "passed": o.passed, "result": o.result }), o.seed),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let code = if usage_error(&e) { EXIT_USAGE } else { EXIT_FAIL };
            (code, json!({ "passed": false, "error": error_json(&e) }), None)
        }
    };
    let mut doc = body;
    doc["manifest"] = manifest(args, &profile, cli.tol, seed);
    let _ = writeln!(out, "{}", to_json_string(&doc));
    code
}

pub fn run(args: &[String]) -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::Schedule { index, reason } => json!({ "kind": "schedule", "index": index, "reason": reason }),
        other => json!({ "kind": other.kind(), "message": other.to_string() }),
    }
}

fn load_profile(path: Option<&std::path::Path>) -> Result<RegionProfile> {
    let Some(p) = path else { return Ok(RegionProfile::default()) };
    let text = std::fs::read_to_string(p).map_err(|e| Error::Precondition(format!("cannot read {}: {e}", p.display())))?;
    let prof: RegionProfile =
        serde_json::from_str(&text).map_err(|e| Error::Precondition(format!("bad profile {}: {e}", p.display())))?;
    prof.validate()?;
    Ok(prof)
}

fn read_json(p: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(p).map_err(|e| Error::Precondition(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Precondition(format!("bad JSON in {}: {e}", p.display())))
}

fn parse_coeffs(s: &str) -> Result<TrigPoly> {
    let c: Vec<f64> = serde_json::from_str(s).map_err(|e| Error::Precondition(format!("--coeffs must be a JSON array: {e}")))?;
    TrigPoly::from_coeffs(&c)
}

fn roots_json(cfg: &RootConfig) -> Value {
    json!(cfg.points.iter().map(|p| json!({ "re": p.re, "im": p.im, "mult": p.mult })).collect::<Vec<_>>())
}

fn dispatch(cli: &Cli, profile: &RegionProfile) -> Result<Outcome> {
    let tol = cli.tol;
    match &cli.command {
        Command::Gr(GrCmd::Enum { n }) => {
            let p = build_gr(*n)?;
            let elements: Vec<Value> =
                p.labels().iter().map(|s| json!({ "dim": s.dim(), "basis": basis_strings(s) })).collect();
            ok(json!({ "n": n, "count": p.len(), "max_chain": p.max_chain_length(), "elements": elements }))
        }
        Command::Gr(GrCmd::Range { n, lo, hi, homology, hasse }) => {
            let gr = build_gr_range(*n, *lo, *hi)?;
            let k = gr.order_complex()?;
            let mut r = json!({
                "n": n, "lo": lo, "hi": hi,
                "count": gr.len(),
                "max_chain": gr.poset.max_chain_length(),
                "simplex_counts": k.counts(),
                "components": k.components(),
            });
            if *homology {
                r["betti"] = json!(betti_numbers(&k)?);
            }
            if let Some(path) = hasse {
                std::fs::write(path, to_json_string(&gr.hasse_json()))
                    .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
                r["hasse"] = json!(path.display().to_string());
            }
            ok(r)
        }
        Command::Sym(SymCmd::Faces { g, min_genus, homology }) => {
            if *g == 0 {
                return Err(Error::Precondition("g must be at least 1".into()));
            }
            let k = *min_genus;
            let faces = enumerate_faces(2 * g + 2, |f| f.zero_set != 0 && f.genus >= k)?;
            let list: Vec<Value> = faces
                .iter()
                .map(|f| json!({ "zero_set": f.zero_set, "multiplicities": f.multiplicities, "genus": f.genus, "dim": f.dim() }))
                .collect();
            let mut r = json!({ "g": g, "min_genus": k, "count": faces.len(), "faces": list });
            if *homology {
                r["betti"] = json!(betti_numbers(&face_order_complex(faces)?)?);
            }
            ok(r)
        }
        Command::Trig(TrigCmd::Roots(c)) => {
            let f = parse_coeffs(&c.coeffs)?;
            let cfg = roots(&f, tol)?;
            let no = n_odd(&cfg, tol);
            ok(json!({
                "roots": roots_json(&cfg),
                "n_odd": no,
                "genus": genus_from_n_odd(no),
                "conjugate_pairs": conjugate_pair_check(&cfg, 1e-8),
                "root_sum": root_sum_check(&cfg, 1e-8),
            }))
        }
        Command::Trig(TrigCmd::Genus(c)) => {
            let f = parse_coeffs(&c.coeffs)?;
            let cfg = roots(&f, tol)?;
            let no = n_odd(&cfg, tol);
            ok(json!({ "n_odd": no, "genus": genus_from_n_odd(no) }))
        }
        Command::Trig(TrigCmd::Retract { coeffs, t }) => {
            let f = parse_coeffs(&coeffs.coeffs)?;
            let cfg = roots(&f, tol)?;
            let r = retract_with_tol(&cfg, *t, tol)?;
            let (before, after) = (n_odd(&cfg, tol), n_odd(&r, tol));
            Ok(Outcome {
                result: json!({ "t": t, "roots": roots_json(&r), "n_odd_before": before, "n_odd_after": after }),
                passed: before == after,
                seed: None,
            })
        }
        Command::Family(FamilyCmd::Genus { a, b, g }) => {
            let a: [f64; 6] = a.as_slice().try_into().map_err(|_| Error::Precondition("--a needs 6 values".into()))?;
            let b = parse_list(b)?;
            let p = ParamPoint::new(a, b, *g)?;
            let tag = classify(&p, profile);
            ok(json!({ "genus": genus_map(&p, profile, tol), "region": tag.kind.name(), "a": p.a, "b": p.b }))
        }
        Command::Family(FamilyCmd::Sweep { g, grid, out, a }) => {
            let a: [f64; 6] = a.as_slice().try_into().map_err(|_| Error::Precondition("--a needs 6 values".into()))?;
            let rows = sweep(a, *g, *grid, profile, tol)?;
            let file = std::fs::File::create(out)
                .map_err(|e| Error::Precondition(format!("cannot create {}: {e}", out.display())))?;
            write_sweep_csv(io::BufWriter::new(file), *g, &rows)?;
            let mut hist: BTreeMap<String, usize> = BTreeMap::new();
            for r in &rows {
                *hist.entry(r.genus.to_string()).or_default() += 1;
            }
            ok(json!({ "g": g, "grid": grid, "rows": rows.len(), "genus_histogram": hist, "out": out.display().to_string() }))
        }
        Command::Probe(ProbeCmd::Samples { samples, seed, grid, psi }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let points: Vec<ParamPoint> = (0..*samples)
                .map(|_| ParamPoint::new(random_a2(&mut rng, profile, 0.9), vec![], 1))
                .collect::<Result<_>>()?;
            let opts = ProbeOptions { grid: *grid, psi: *psi, ..Default::default() };
            let results: Vec<Result<_>> = points.par_iter().map(|p| probe(p, profile, &opts)).collect();
            let mut max_changes = 0;
            let mut over = 0;
            let mut c_fit: f64 = 0.0;
            let mut max_iter = 0;
            for r in results {
                let r = r?;
                max_changes = max_changes.max(r.sign_changes);
                over += usize::from(r.sign_changes > 2);
                max_iter = max_iter.max(r.max_iterations);
                c_fit = c_fit.max(r.c_ratio.unwrap_or(0.0));
            }
            Ok(Outcome {
                result: json!({
                    "samples": samples, "grid": grid, "psi": psi,
                    "max_sign_changes": max_changes, "samples_over_two": over,
                    "max_iterations": max_iter, "fitted_c": c_fit,
                }),
                passed: over == 0,
                seed: Some(*seed),
            })
        }
        Command::Fmap(FmapCmd::Cycle12 { check }) => {
            let tc = twelve_cycle();
            let strata: Vec<Value> = tc
                .strata
                .iter()
                .zip(&tc.images)
                .map(|(d, p)| json!({ "collapsed": d.collapsed_names(), "genus": d.genus(), "image": p.to_json() }))
                .collect();
            let mut r = json!({ "strata": strata });
            let mut passed = true;
            if *check {
                let rep = check_twelve_cycle(&tc)?;
                passed = rep.passed();
                r["check"] = serde_json::to_value(&rep).expect("serializable");
            }
            Ok(Outcome { result: r, passed, seed: None })
        }
        Command::Fmap(FmapCmd::Compat { g }) => {
            let rep = order_compatibility_check(*g)?;
            Ok(Outcome { passed: rep.passed(), result: serde_json::to_value(&rep).expect("serializable"), seed: None })
        }
        Command::Descent(DescentCmd::Run { schedule, g }) => {
            let s = Schedule::from_json(&read_json(schedule)?, *g)?;
            let tr = run_descent(&s.start()?, &s.events)?;
            let violations = tr.invariant_violations();
            let mut r = tr.to_json();
            r["violations"] = json!(violations);
            Ok(Outcome { passed: violations.is_empty(), result: r, seed: None })
        }
        Command::Descent(DescentCmd::Replay { family }) => {
            let v = read_json(family)?;
            let fam: BTreeMap<String, Vec<PinchEvent>> =
                serde_json::from_value(v).map_err(|e| Error::Precondition(format!("bad family: {e}")))?;
            let verdict = obstruction_replay(&fam)?;
            let passed = matches!(
                verdict,
                ReplayVerdict::Contradiction { initial_is_boundary: false, homologous: true, .. }
            );
            Ok(Outcome { passed, result: serde_json::to_value(&verdict).expect("serializable"), seed: None })
        }
        Command::Verify(VerifyCmd::All { g, seed, samples }) => {
            if *g < 2 {
                return Err(Error::Precondition("verify all needs --g >= 2".into()));
            }
            let opts = VerifyOptions { max_g: *g, seed: *seed, samples: *samples, tol, profile: *profile };
            let outcomes = run_all(&opts);
            let passed = outcomes.iter().all(|o| o.passed);
            let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
            Ok(Outcome {
                result: json!({ "criteria": outcomes, "failed": failed, "options": opts }),
                passed,
                seed: Some(*seed),
            })
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| Error::Precondition(format!("bad number {x:?}: {e}"))))
        .collect()
}
