use std::process::Command;

use serde_json::Value;

fn pinchlab(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pinchlab"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v, stdout)
}

#[test]
fn gr_range_twelve_gon() {
    let dir = tempfile::tempdir().unwrap();
    let hasse = dir.path().join("hasse.json");
    let (code, v, _) =
        pinchlab(&["gr", "range", "--n", "2", "--lo", "1", "--hi", "1", "--homology", "--hasse", hasse.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 12);
    assert_eq!(v["result"]["betti"], serde_json::json!([1, 1]));
    let h: Value = serde_json::from_str(&std::fs::read_to_string(&hasse).unwrap()).unwrap();
    assert_eq!(h["elements"].as_array().unwrap().len(), 12);
}

#[test]
fn gr_enum_counts() {
    let (code, v, _) = pinchlab(&["gr", "enum", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 16);
    assert_eq!(pinchlab(&["gr", "enum", "--n", "9"]).0, 2);
}

#[test]
fn manifest_is_deterministic() {
    let args = ["trig", "roots", "--coeffs", "[0,0,0,0,0,1,0]"];
    let (code, v, a) = pinchlab(&args);
    let (_, _, b) = pinchlab(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(v["manifest"]["timestamp"], 1700000000);
    assert_eq!(v["result"]["n_odd"], 6);
    assert_eq!(v["result"]["genus"], 2);
    assert!(a.contains("\"tolerance\":9.9999999999999995e-7"));
}

#[test]
fn family_commands() {
    let (code, v, _) = pinchlab(&["family", "genus", "--a", "0,0,0,0,0,1", "--b", "0,0", "--g", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["genus"], 2);
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let (code, v, _) = pinchlab(&["family", "sweep", "--g", "2", "--grid", "5", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rows"], 13);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("a0,a1,a2,a3,a4,a5,b2,b2p,region,genus"));
}

#[test]
fn profile_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let prof = dir.path().join("profile.json");
    std::fs::write(&prof, r#"{"eta_scale":0.02,"eps1_scale":0.01,"eps2_const":0.001}"#).unwrap();
    let (code, v, _) = pinchlab(&["--profile", prof.to_str().unwrap(), "family", "genus", "--a", "0,0,0,0,0,1", "--g", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["manifest"]["profile"]["eta_scale"].as_f64(), Some(0.02));
    std::fs::write(&prof, r#"{"eta_scale":-1}"#).unwrap();
    assert_eq!(pinchlab(&["--profile", prof.to_str().unwrap(), "family", "genus", "--a", "0,0,0,0,0,1", "--g", "1"]).0, 2);
}

#[test]
fn probe_and_fmap() {
    let (code, v, _) = pinchlab(&["probe", "appendix-b", "--samples", "20", "--seed", "4", "--grid", "256"]);
    assert_eq!(code, 0);
    assert!(v["result"]["max_sign_changes"].as_u64().unwrap() <= 2);
    assert_eq!(v["manifest"]["seed"], 4);
    let (code, v, _) = pinchlab(&["fmap", "cycle12", "--check"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["check"]["is_boundary"], false);
    let (code, v, _) = pinchlab(&["fmap", "compat", "--g", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn sym_faces_homology() {
    let (code, v, _) = pinchlab(&["sym", "faces", "--g", "2", "--min-genus", "1", "--homology"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 12);
    assert_eq!(v["result"]["betti"], serde_json::json!([1, 1]));
}

#[test]
fn descent_run_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"[{"kind":"collapse","arc":"H1"},{"kind":"isotopy","genus":1}]"#).unwrap();
    let (code, v, _) = pinchlab(&["descent", "run", "--schedule", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["steps"].as_array().unwrap().len(), 3);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"g":2,"initial":["H1"],"events":[{"kind":"isotopy","genus":2}]}"#).unwrap();
    let (code, v, _) = pinchlab(&["descent", "run", "--schedule", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "schedule");
    assert_eq!(v["error"]["index"], 0);
}

#[test]
fn descent_replay() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.json");
    std::fs::write(&fam, "{}").unwrap();
    let (code, v, _) = pinchlab(&["descent", "replay", "--family", fam.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "CONTRADICTION");
    std::fs::write(&fam, r#"{"H1":[{"kind":"shrink","side":"in"}]}"#).unwrap();
    let (code, v, _) = pinchlab(&["descent", "replay", "--family", fam.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["verdict"], "REJECTED");
}

#[test]
fn usage_exit_code() {
    assert_eq!(pinchlab(&["gr", "range", "--n", "2"]).0, 2);
    assert_eq!(pinchlab(&["nonsense"]).0, 2);
    assert_eq!(pinchlab(&["--version"]).0, 0);
}
