use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn markov(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markov")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn printed(name: &str, dir: &Path) -> String {
    let o = markov(&["print", "--builtin", name], dir);
    assert_eq!(code(&o), 0);
    stdout(&o)
}

#[test]
fn validate_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let o = markov(&["validate", "--builtin", "one_eight"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("coverage: complete"));
}

#[test]
fn validate_reports_missing_gluing() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&printed("one_eight", dir.path())).unwrap();
    let gluings = doc["gluings"].as_array_mut().unwrap();
    gluings.retain(|g| g["name"] != "Gr");
    let path = dir.path().join("broken.mdgm");
    fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let o = markov(&["validate", path.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("MissingGluing"), "{}", stderr(&o));
}

#[test]
fn validate_reports_syntax_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mdgm");
    fs::write(&path, "{\n  \"format\": \"mdgm/1\",\n  \"name\": \n}\n").unwrap();
    let o = markov(&["validate", path.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("SyntaxError") && err.contains("line 4"), "{err}");
}

#[test]
fn unknown_builtin_and_missing_source() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&markov(&["validate", "--builtin", "sphere"], dir.path())), 1);
    assert_eq!(code(&markov(&["validate"], dir.path())), 1);
    assert_eq!(code(&markov(&["frobnicate"], dir.path())), 1);
    assert_eq!(code(&markov(&["--help"], dir.path())), 0);
}

fn counts(summary: &str) -> Vec<(usize, usize)> {
    summary
        .lines()
        .filter(|l| l.starts_with("level "))
        .map(|l| {
            let nums: Vec<usize> = l.split(|c: char| !c.is_ascii_digit()).filter_map(|s| s.parse().ok()).collect();
            (nums[1], nums[2])
        })
        .collect()
}

#[test]
fn expand_cantor_and_one_eight() {
    let dir = tempfile::tempdir().unwrap();
    let o = markov(&["expand", "--builtin", "cantor", "--depth", "6", "--out", "out"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Vec<usize> = counts(&stdout(&o)).iter().map(|c| c.0).collect();
    assert_eq!(v, vec![1, 2, 4, 8, 16, 32]);
    assert!(dir.path().join("out/cantor-level-6.dot").exists());
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/cantor.verification.json")).unwrap()).unwrap();
    assert!(summary["levels"].as_array().unwrap().iter().all(|l| l["passed"] == true));

    let o = markov(&["expand", "--builtin", "one_eight", "--depth", "4", "--format", "json", "--out", "out"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(counts(&stdout(&o)), vec![(2, 1), (6, 7), (26, 41), (134, 231)]);
    let level2: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/one_eight-level-2.json")).unwrap()).unwrap();
    assert_eq!(level2["vertices"].as_array().unwrap().len(), 6);
}

#[test]
fn expand_depth_zero_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&markov(&["expand", "--builtin", "one_eight", "--depth", "0"], dir.path())), 1);
}

#[test]
fn verify_round_trips_expanded_levels() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&markov(&["expand", "--builtin", "one_eight", "--depth", "3", "--out", "o"], dir.path())), 0);
    let o = markov(&["verify", "--builtin", "one_eight", "--levels", "o/one_eight.levels.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let path = dir.path().join("o/one_eight.levels.json");
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let arcs = doc["levels"][1]["decomposition"]["arcs"].as_array_mut().unwrap();
    for a in arcs.iter_mut() {
        let role = if a["role"] == "tail" { "head" } else { "tail" };
        a["role"] = Value::from(role);
    }
    fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = markov(&["verify", "--builtin", "one_eight", "--levels", "o/one_eight.levels.json"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("level 2: FAILED"), "{}", stderr(&o));
}

fn certificate(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{name}.mcert"))).unwrap()).unwrap()
}

#[test]
fn check_one_eight() {
    let dir = tempfile::tempdir().unwrap();
    let o = markov(&["check", "--builtin", "one_eight", "--depth", "4", "--require", "menger-curve"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let c = certificate(dir.path(), "one_eight");
    assert_eq!(c["label"], "MengerCurve");
    assert_eq!(c["metrics"]["lipschitz"]["violation_count"], 0);
    assert!(c.get("timestamp").is_none());
}

#[test]
fn check_negative_controls() {
    let dir = tempfile::tempdir().unwrap();
    let o = markov(&["check", "--builtin", "suspension", "--require", "locally-connected"], dir.path());
    assert_eq!(code(&o), 2);
    let o = markov(&["check", "--builtin", "diamond"], dir.path());
    assert_eq!(code(&o), 0);
    let c = certificate(dir.path(), "diamond");
    assert_eq!(c["label"]["Properties"], serde_json::json!(["Connected", "LocallyConnected"]));
    assert_eq!(code(&markov(&["check", "--builtin", "diamond", "--require", "disjoint-arcs"], dir.path())), 2);
    let o = markov(&["check", "--builtin", "cantor"], dir.path());
    assert_eq!(code(&o), 0, "inconclusive is not an error");
    assert_eq!(certificate(dir.path(), "cantor")["label"], "Inconclusive");
}

#[test]
fn check_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let o = markov(&["check", "--builtin", "solenoid", "--depth", "4", "--out", sub], dir.path());
        assert_eq!(code(&o), 0);
        fs::read(dir.path().join(sub).join("solenoid.mcert")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
    let o = markov(&["check", "--builtin", "solenoid", "--out", "c", "--timestamp"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(certificate(&dir.path().join("c"), "solenoid").get("timestamp").is_some());
}

#[test]
fn check_schedules() {
    let dir = tempfile::tempdir().unwrap();
    let o = markov(&["check", "--builtin", "solenoid", "--schedule", "constant", "--kappa", "1/2"], dir.path());
    assert_eq!(code(&o), 0);
    let c = certificate(dir.path(), "solenoid");
    assert_eq!(c["metrics"]["tail_divergent"], true);
    assert_eq!(code(&markov(&["check", "--builtin", "solenoid", "--schedule", "cubic"], dir.path())), 1);
    assert_eq!(code(&markov(&["check", "--builtin", "solenoid", "--kappa", "-1"], dir.path())), 1);
    let o = markov(&["check", "--builtin", "one_eight", "--schedule", "list:1,1/2,1/4"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn sections_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = markov(&["sections", "--builtin", "one_eight", "--level", "2"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let json_end = out.rfind('}').unwrap();
    let w: Value = serde_json::from_str(&out[..=json_end]).unwrap();
    assert_eq!(w["verification"]["disjoint"], true);
    assert_eq!(w["f"]["vertices"].as_object().unwrap().len(), 6);
    assert_eq!(w["feasibility"][0]["straight"], Value::Null);
    assert!(out.contains("disjoint: true"));
}

#[test]
fn sections_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = markov(&["sections", "--builtin", "diamond"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("NonCanonicalVertexProduction"));
}

#[test]
fn sections_respects_explicit_depth() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&markov(&["sections", "--builtin", "one_eight", "--level", "3", "--depth", "3"], dir.path())), 1);
    let o = markov(&["sections", "--builtin", "one_eight", "--level", "1", "--out", "w"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("w/one_eight.sections-1.json").exists());
}

#[test]
fn threads_and_print() {
    let dir = tempfile::tempdir().unwrap();
    let o = markov(&["threads", "--builtin", "cantor", "--depth", "4", "--limit", "5"], dir.path());
    assert_eq!(code(&o), 0);
    let t: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(t["threads"].as_array().unwrap().len(), 5);
    assert_eq!(t["truncated"], true);

    let text = printed("join", dir.path());
    let path = dir.path().join("join.mdgm");
    fs::write(&path, &text).unwrap();
    let o = markov(&["print", path.to_str().unwrap()], dir.path());
    assert_eq!(stdout(&o), text);
}
