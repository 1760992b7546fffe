use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rotalg_cli::report::{Report, SuiteData};
use rotalg_cli::{report_schema, Body};
use serde_json::Value;
use tempfile::TempDir;

const GOLDEN: &str = r#"{"kind":"surd","a":-1,"b":1,"c":5,"den":2}"#;

fn rotalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotalg")).args(args).env_remove("ROTALG_DEFAULT_ANGLE").output().expect("binary runs")
}

fn rotalg_env(args: &[&str], angle: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotalg")).args(args).env("ROTALG_DEFAULT_ANGLE", angle).output().expect("binary runs")
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn point_basic(angle: Option<&str>, q: i64, n: i64) -> String {
    let prefix = angle.map(|a| format!(r#""angle":{a},"#)).unwrap_or_default();
    format!(r#"{{{prefix}"repr":"basic","q":{q},"P":{{"components":[{{"pt":{{"q":"0","n":{n}}}}}]}}}}"#)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn join_of_shifted_points_is_everything() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &point_basic(Some(GOLDEN), 1, 0));
    let b = write(dir.path(), "b.json", &point_basic(None, 1, 1));
    let out = rotalg(&["join", s(&a), s(&b), "--depth", "6", "--window", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    let Body::Values(v) = &rep.body else { panic!("values body expected") };
    let text = serde_json::to_value(v).unwrap();
    assert_eq!(text["result"], "all-empty");
    assert_eq!(text["certificate"]["status"], "exact");
    assert!(v.certificate.depth_used.unwrap() <= 4);
    assert_eq!(v.values.len(), 21);
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &point_basic(None, 1, 0));
    assert_eq!(rotalg(&["check-closed", s(&a)]).status.code(), Some(0));

    // c(±1) given, c(2) full: the product law fails at (1, 1)
    let open = write(
        dir.path(),
        "open.json",
        r#"{"repr":"window","default":"full","values":{"1":{"components":[{"pt":{"q":"0","n":0}}]},"-1":{"components":[{"pt":{"q":"0","n":1}}]}}}"#,
    );
    let out = rotalg(&["check-closed", s(&open), "--window", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let Body::Closed(c) = report(&out).body else { panic!() };
    assert!(c.violations.iter().any(|v| serde_json::to_value(v).unwrap()["law"] == "product"));

    // unknown values outside the window degrade the closure certificate
    let partial = write(
        dir.path(),
        "partial.json",
        r#"{"repr":"window","default":"unknown","values":{"1":{"components":[{"pt":{"q":"0","n":0}}]},"-1":{"components":[{"pt":{"q":"0","n":1}}]}}}"#,
    );
    let out = rotalg(&["close", s(&partial), "--window", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).status, rotalg_cli::Status::Ok);
    let out = rotalg(&["close", s(&partial), "--window", "2", "--require-exact"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out).status, rotalg_cli::Status::NotExact);

    let bad = write(dir.path(), "bad.json", r#"{"repr":"basic","q":1}"#);
    for args in [
        vec!["eval", s(&bad)],
        vec!["eval", "/nonexistent/ideal.json"],
        vec!["eval", s(&a), "--tolerance", "0.1"],
        vec!["eval", s(&a), "--window", "0"],
        vec!["sandbox-verify", "--suite", "fejer", "--mode", "exact"],
        vec!["sandbox-verify", "--suite", "averaging", "--require-exact"],
        vec!["sandbox-verify", "--suite", "fejer", "--window", "3"],
        vec!["group-verify", "--tolerance", "1e-3"],
        vec!["join", s(&a)],
        vec!["frobnicate"],
        vec!["eval", s(&a), "--angle", "pi"],
    ] {
        let out = rotalg(&args);
        assert_eq!(out.status.code(), Some(4), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn angle_resolution_order() {
    let dir = TempDir::new().unwrap();
    let bare = write(dir.path(), "bare.json", &point_basic(None, 1, 0));
    let golden = write(dir.path(), "golden.json", &point_basic(Some(GOLDEN), 1, 1));
    let sqrt2 = write(dir.path(), "sqrt2.json", &point_basic(Some(r#"{"kind":"surd","a":-1,"b":1,"c":2,"den":1}"#), 1, 1));
    let c_of = |out: &Output| serde_json::to_value(report(out).angle.unwrap()).unwrap()["c"].clone();

    assert_eq!(c_of(&rotalg(&["eval", s(&bare), "--window", "1"])), 5);
    assert_eq!(c_of(&rotalg_env(&["eval", s(&bare), "--window", "1"], "sqrt2")), 2);
    assert_eq!(c_of(&rotalg_env(&["eval", s(&golden), "--window", "1"], "sqrt2")), 5);
    assert_eq!(c_of(&rotalg_env(&["eval", s(&golden), "--window", "1", "--angle", "sqrt2"], "golden")), 2);

    let out = rotalg(&["meet", s(&golden), s(&sqrt2)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("different angles"));
    assert_eq!(rotalg(&["meet", s(&golden), s(&sqrt2), "--angle", "golden"]).status.code(), Some(0));
    assert_eq!(rotalg_env(&["eval", s(&bare)], "nonsense").status.code(), Some(4));
}

#[test]
fn inline_json_and_output_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("report.json");
    let inline = point_basic(None, 2, 0);
    let out = rotalg(&["eval", &inline, "--at=-2,0,2,3", "-o", s(&target)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rep: Report = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    let Body::Values(v) = rep.body else { panic!() };
    assert_eq!(v.values.iter().map(|r| r.n).collect::<Vec<_>>(), vec![-2, 0, 2, 3]);
    assert!(v.values[1].set.is_empty());
    assert!(v.values[3].set.is_full());
    assert!(!v.values[2].set.is_full());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        r#"{"repr":"basic","q":1,"P":{"components":[{"arc":{"start":{"q":"0","n":0},"end":{"q":"1/5","n":0}}}]}}"#,
    );
    let b = write(
        dir.path(),
        "b.json",
        r#"{"repr":"basic","q":1,"P":{"components":[{"arc":{"start":{"q":"2/5","n":0},"end":{"q":"3/5","n":0}}}]}}"#,
    );
    for args in [
        vec!["join", s(&a), s(&b), "--window", "6"],
        vec!["decompose", s(&a), "--window", "6"],
        vec!["sandbox-verify", "--suite", "ring-laws", "--triples", "20"],
        vec!["sandbox-verify", "--suite", "fejer"],
    ] {
        let first = rotalg(&args);
        let second = rotalg(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn plot_marks_points_and_arcs() {
    let dir = TempDir::new().unwrap();
    let set = write(
        dir.path(),
        "set.json",
        r#"{"components":[{"pt":{"q":"1/3","n":2}},{"arc":{"start":{"q":"0","n":0},"end":{"q":"1/4","n":0}}}]}"#,
    );
    let svg = dir.path().join("set.svg");
    let out = rotalg(&["plot", s(&set), "-o", s(&svg)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<path").count(), 1);
    assert_eq!(text.matches("r=\"3\"").count(), 1);

    let ideal = write(dir.path(), "ideal.json", &point_basic(None, 1, 0));
    let out = rotalg(&["plot", s(&ideal), "--window", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("n = ").count(), 5);
    assert!(text.contains("n = -2") && text.contains("n = 2"));
}

#[test]
fn schema_lists_every_body_kind() {
    let out = rotalg(&["schema"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, report_schema());
    let kinds: Vec<&str> = v["$defs"].as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["values", "closed", "decomposition", "classification", "simplicity", "suite"] {
        assert!(kinds.contains(&k));
    }
}

fn validate(report: &Value) {
    let schema = report_schema();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

/// Report → JSON → report → JSON is stable, and the JSON validates.
fn round_trip(out: &Output) -> Report {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let rep: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(rep.to_json(), text);
    let again: Report = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(again, rep);
    validate(&serde_json::from_str(&text).unwrap());
    rep
}

#[test]
fn schema_round_trip_values_report() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &point_basic(Some(GOLDEN), 1, 0));
    let b = write(dir.path(), "b.json", &point_basic(None, 1, 1));
    let rep = round_trip(&rotalg(&["join", s(&a), s(&b), "--window", "4"]));
    assert_eq!(rep.verb, "join");
}

#[test]
fn schema_round_trip_simplicity_report() {
    let p = r#"{"angle":{"kind":"surd","a":-1,"b":1,"c":2,"den":1},"repr":"basic","q":1,"P":{"components":[{"arc":{"start":{"q":"0","n":0},"end":{"q":"1/2","n":0}}}]}}"#;
    let rep = round_trip(&rotalg(&["simplicity", p, "--window", "10"]));
    let Body::Simplicity(body) = rep.body else { panic!() };
    assert!(body.witness.unwrap().closed.holds);
}

#[test]
fn schema_round_trip_suite_report() {
    let rep = round_trip(&rotalg(&["sandbox-verify", "--suite", "fejer", "--n", "24"]));
    let Body::Suite(body) = rep.body else { panic!() };
    let SuiteData::Fejer(f) = body.data else { panic!() };
    assert_eq!(f.rows.len(), 24 - 8 + 1);
}

#[test]
fn every_verb_report_validates() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", &point_basic(None, 2, 0));
    let b = write(dir.path(), "b.json", &point_basic(None, 3, 0));
    let action = write(dir.path(), "action.json", r#"{"group":"Z/2","points":3,"action":[[0,1,2],[1,0,2]],"weights":["1/3","1/3","1/3"]}"#);
    for args in [
        vec!["eval", s(&a), "--window", "3"],
        vec!["check-closed", s(&a), "--window", "3"],
        vec!["meet", s(&a), s(&b), "--window", "6"],
        vec!["close", s(&a), "--window", "3"],
        vec!["decompose", s(&a), "--window", "6"],
        vec!["classify", s(&a), "--window", "6"],
        vec!["simplicity", s(&a), "--window", "4"],
        vec!["sandbox-verify", "--suite", "ring-laws", "--triples", "10"],
        vec!["sandbox-verify", "--suite", "averaging", "--samples", "3"],
        vec!["sandbox-verify", "--suite", "derivative"],
        vec!["sandbox-verify", "--suite", "center", "--grid", "500"],
        vec!["group-verify", "--samples", "50"],
        vec!["group-verify", "--action", s(&action), "--samples", "20"],
    ] {
        let out = rotalg(&args);
        assert!(matches!(out.status.code(), Some(0) | Some(2)), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        round_trip(&out);
    }
}
