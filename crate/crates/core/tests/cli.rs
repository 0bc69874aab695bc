mod common;

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use common::fixture_path;
use serde_json::Value;

fn fibrk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibrk")).args(args).env_remove("FIBRK_TRUNCATION").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("fibrk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn examples_match_expected_output() {
    for ex in fibrk::gallery::EXAMPLES {
        let start = Instant::now();
        let o = fibrk(&["examples", ex.name]);
        assert!(start.elapsed() < Duration::from_secs(1), "{} took {:?}", ex.name, start.elapsed());
        assert_eq!(o.status.code(), Some(0), "{}: {}", ex.name, stderr(&o));
        let want = std::fs::read_to_string(fixture_path(&format!("expected/{}.json", ex.name))).unwrap();
        assert_eq!(stdout(&o), want, "{} drifted from its expected output", ex.name);
    }
}

#[test]
fn lcbase_example_is_not_f_stable() {
    let v = json(&fibrk(&["examples", "lcbase"]));
    assert_eq!(v["wtable"]["W"], serde_json::json!(["0", "0", "-1/4*eps^4*u"]));
    for k in 0..3 {
        assert_eq!(v["verdict"]["levels"][k]["value"], "0");
    }
    assert!(v["verdict"]["verdict"].as_str().unwrap().starts_with("not f-stable"));
    assert_eq!(v["fano_identity"]["W_assumed"], "0");
}

#[test]
fn p1_example_slope() {
    let v = json(&fibrk(&["examples", "p1-point"]));
    assert_eq!(v["functionals"]["M"], "eps - eps^2");
    assert_eq!(v["functionals"]["DF"], v["functionals"]["M"]);
    assert_eq!(v["slope"]["positive_for"], "0 < eps < 1");
    assert_eq!(v["verdict"]["kind"], "StrictlyPositiveAtLevel");
}

#[test]
fn examples_list() {
    let v = json(&fibrk(&["examples", "--list"]));
    let names: Vec<&str> = v["examples"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["fano-point", "lcbase", "p1-point", "trivial"]);
    assert_eq!(fibrk(&["examples", "nope"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_deterministic() {
    let f = fixture_path("lcbase.json");
    for args in [
        vec!["functionals", f.as_str()],
        vec!["wtable", f.as_str()],
        vec!["verdict", f.as_str(), "--assume", "t>0"],
        vec!["--format", "text", "examples", "fano-point"],
    ] {
        let a = fibrk(&args);
        let b = fibrk(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn trivial_functionals_report_zeros() {
    let v = json(&fibrk(&["functionals", "--check", &fixture_path("trivial.json")]));
    for k in ["E", "I", "J", "H", "JK", "R", "M", "DF"] {
        assert_eq!(v[k], "0", "{k}");
    }
}

#[test]
fn schema_error_exits_2_with_pointer() {
    let body = std::fs::read_to_string(fixture_path("p1-point.json")).unwrap().replace(r#"{"H": 2}, "value": "0""#, r#"{"H": 3}, "value": "0""#);
    let o = fibrk(&["functionals", &temp_file("bad-degree.json", &body)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("/products/0"), "{err}");
    assert!(err.contains("H^3"), "{err}");
    let o = fibrk(&["degenerate", &temp_file("bad-cat.json", r#"{"N": 2, "n": 1, "V": "1", "components": [{"codim": 1, "m": 1, "deg": "0", "center": "1", "A": "0"}]}"#)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/components/0/deg"));
    assert_eq!(fibrk(&["functionals", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(fibrk(&["verdict", &fixture_path("lcbase.json"), "--assume", "eps>0"]).status.code(), Some(2));
}

#[test]
fn missing_monomial_exits_3_naming_it() {
    let body = std::fs::read_to_string(fixture_path("p1-point.json"))
        .unwrap()
        .replace(r#"{"exponents": {"E": 2}, "value": "-1"}"#, "")
        .replace(r#"{"exponents": {"H": 1, "E": 1}, "value": "0"},"#, r#"{"exponents": {"H": 1, "E": 1}, "value": "0"}"#);
    let o = fibrk(&["functionals", &temp_file("missing.json", &body)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("E^2"), "{}", stderr(&o));
}

#[test]
fn indeterminate_is_not_an_error() {
    let f = fixture_path("lcbase.json");
    let v = json(&fibrk(&["verdict", &f]));
    assert_eq!(v["kind"], "Indeterminate");
    assert_eq!(v["level"], 2);
    let v = json(&fibrk(&["verdict", &f, "--assume", "u>0"]));
    assert_eq!(v["kind"], "ObstructionFound");
    let v = json(&fibrk(&["verdict", &f, "--assume", "u=0"]));
    assert_eq!(v["kind"], "NotStable");
}

#[test]
fn truncation_sources() {
    let cat = temp_file(
        "tails.json",
        r#"{"N": 3, "n": 1, "V": "1", "components": [{"codim": 1, "m": 1, "deg": "1", "center": "1", "A": "-1"}]}"#,
    );
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_fibrk"));
        c.arg("degenerate").arg(&cat).args(extra).env_remove("FIBRK_TRUNCATION");
        if let Some(e) = env {
            c.env("FIBRK_TRUNCATION", e);
        }
        let o = c.output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        json(&o)
    };
    let v = run(&[], None);
    assert_eq!(v["truncation"], serde_json::json!({"order": 4, "source": "default"}));
    assert_eq!(v["variables"], serde_json::json!(["tau_0_2", "tau_0_3"]));
    let v = run(&[], Some("2"));
    assert_eq!(v["truncation"]["source"], "environment");
    assert_eq!(v["variables"], serde_json::json!(["tau_0_2"]));
    let v = run(&["--truncation", "1"], Some("2"));
    assert_eq!(v["truncation"]["source"], "flag");
    assert_eq!(v["variables"], serde_json::json!([]));
    assert_eq!(v["lc_obstruction"]["unverifiable"].as_str().map(|s| s.contains("level")), Some(true));
    let v = run(&["--level", "1"], None);
    assert_eq!(v["lc_obstruction"]["kind"], "ObstructionFound");
    assert_eq!(v["lc_obstruction"]["level_source"], "flag");
}

#[test]
fn degenerate_with_lambda_runs_the_builder() {
    let v = json(&fibrk(&["degenerate", &fixture_path("fano-point.json")]));
    assert_eq!(v["fano_leading"], serde_json::json!({"coefficient": "1/4", "order": 4}));
    assert_eq!(v["fano_obstruction"]["kind"], "ObstructionFound");
    assert_eq!(v["builder"]["wtable"]["W"][2], "-1/4*eps^4");
    let v = json(&fibrk(&["degenerate", &fixture_path("fano-point.json"), "--lambda", "2"]));
    assert_eq!(v["builder"]["wtable"]["W"][2], "-1/8*eps^4");
    assert_eq!(fibrk(&["degenerate", &fixture_path("fano-point.json"), "--lambda", "-1"]).status.code(), Some(2));
}

#[test]
fn text_and_approx_renderings() {
    let o = fibrk(&["--format", "text", "functionals", &fixture_path("p1-point.json")]);
    assert!(stdout(&o).lines().any(|l| l == "M: eps - eps^2"), "{}", stdout(&o));
    let v = json(&fibrk(&["--approx", "functionals", &fixture_path("p1-point.json")]));
    assert_eq!(v["E"]["exact"], "-1/2*eps^2");
    assert_eq!(v["E"]["approx"], "-0.500000*eps^2");
}

#[test]
fn validate_reports_diagnostics() {
    let o = fibrk(&["validate", &fixture_path("lcbase.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["valid"], true);
    let body = std::fs::read_to_string(fixture_path("lcbase.json")).unwrap().replace(r#""value": "t""#, r#""value": "s""#);
    let o = fibrk(&["validate", &temp_file("undeclared.json", &body)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/products/0/value"), "{}", stderr(&o));
}
