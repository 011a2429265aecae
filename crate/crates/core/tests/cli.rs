use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rotkit::actions::fuchsian_o23_pl;
use rotkit::io::{read_action, SCHEMA};
use serde_json::Value;

fn rotkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotkit")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rotkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn triple_of_fuchsian_action() {
    let out = scratch("triple.json");
    let o = rotkit(&["triple", "--fuchsian", "--backend", "pl", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(1/2, 1/3, 0)"));
    let r = report(&out);
    assert_eq!(r["schema"], SCHEMA);
    assert_eq!(r["command"], "triple");
    assert_eq!(r["passed"], true);
    assert!(r["wall_time_ms"].is_number());
}

#[test]
fn deterministic_reports_are_identical() {
    let out = scratch("det.json");
    let args = [
        "certify",
        "--fuchsian",
        "--lift",
        "5",
        "--backend",
        "pl",
        "--case",
        "2",
        "--deterministic",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(rotkit(&args).status.code(), Some(0));
    let first = std::fs::read(&out).unwrap();
    assert_eq!(rotkit(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&out).unwrap());
    assert!(report(&out).get("wall_time_ms").is_none());
}

#[test]
fn exit_codes() {
    assert_eq!(rotkit(&["certify", "--fuchsian", "--case", "1"]).status.code(), Some(0));
    // The unlifted action has the wrong triple for case 2.
    assert_eq!(rotkit(&["certify", "--fuchsian", "--case", "2"]).status.code(), Some(1));
    assert_eq!(rotkit(&["counterexample", "--k", "7"]).status.code(), Some(0));
    assert_eq!(rotkit(&["counterexample", "--k", "5"]).status.code(), Some(2));
    assert_eq!(rotkit(&["rot", "--fuchsian", "ax"]).status.code(), Some(2));
    assert_eq!(rotkit(&["triple", "--action", "/nonexistent/action.json"]).status.code(), Some(2));
    assert_eq!(rotkit(&["bogus"]).status.code(), Some(2));
}

#[test]
fn random_action_file_round_trips() {
    let saved = scratch("random-action.json");
    let o = rotkit(&["random", "--triple", "1/2,1/3,0", "--seed", "3", "--save", saved.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let phi = read_action(&saved).unwrap();
    assert!(phi.is_exact());
    let o = rotkit(&["certify", "--action", saved.to_str().unwrap(), "--case", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn built_in_action_file_is_accepted() {
    let path = scratch("fuchsian.json");
    rotkit::io::write_action(&fuchsian_o23_pl(), &path).unwrap();
    let o = rotkit(&["rot", "--action", path.to_str().unwrap(), "ab"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn path_between_seeds() {
    let out = scratch("path.json");
    let o = rotkit(&["path", "--from", "fuchsian", "--to", "seed:5", "--steps", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(report(&out)["passed"], true);
}
