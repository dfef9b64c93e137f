use std::path::PathBuf;
use std::process::{Command, Output};

fn lwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lwb")).args(args).output().expect("spawn lwb")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn passing_check_exits_zero() {
    let o = lwb(&["check", &fixture("classical.lwb"), "roundtrip"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("roundtrip: pass"));
}

#[test]
fn failing_mutant_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mutant.lwb");
    std::fs::write(
        &path,
        r#"{
  "signatures": { "s": ["neg/1", "or/2"] },
  "logics": { "cpl": { "signature": "s", "oracle": { "kind": "classical" } } },
  "morphisms": { "collapse": { "source": "s", "target": "s", "map": { "neg": "neg(x0)", "or": "x0" } } },
  "checks": { "c": { "steps": [ { "kind": "translation", "morphism": "collapse", "source": "cpl", "target": "cpl" } ] } }
}"#,
    )
    .unwrap();
    let o = lwb(&["check", path.to_str().unwrap(), "c", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn unknown_check_and_missing_file_exit_three() {
    assert_eq!(lwb(&["check", &fixture("classical.lwb"), "nope"]).status.code(), Some(3));
    assert_eq!(lwb(&["check", "/nonexistent.lwb", "x"]).status.code(), Some(3));
    assert_eq!(lwb(&["validate", "/nonexistent.lwb"]).status.code(), Some(3));
    assert_eq!(lwb(&["demo", "nope"]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(lwb(&[]).status.code(), Some(3));
    assert_eq!(lwb(&["check"]).status.code(), Some(3));
    assert_eq!(lwb(&["check", "a", "b", "--nvars", "x"]).status.code(), Some(3));
    assert_eq!(lwb(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_is_deterministic_and_well_formed() {
    let args = ["check", &fixture("classical.lwb"), "bp-conditions", "--json"];
    let (a, b) = (lwb(&args), lwb(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["check"], "bp-conditions");
    for e in v["verdicts"].as_array().unwrap() {
        for key in ["check", "instance", "verdict"] {
            assert!(e.get(key).is_some(), "{e}");
        }
    }
}

#[test]
fn bound_overrides_reach_the_report() {
    let o = lwb(&["check", &fixture("classical.lwb"), "no-strict-iso", "--json", "--depth", "2", "--nvars", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["bounds"]["depth"], 2);
    assert_eq!(v["bounds"]["nvars"], 1);
}

#[test]
fn validate_lists_checks() {
    let o = lwb(&["validate", &fixture("glivenko.lwb")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("check prop-3-12b"));
}

#[test]
fn demo_suites() {
    let list = lwb(&["demo", "list"]);
    assert_eq!(list.status.code(), Some(0));
    for s in ["acceptance", "negative-controls"] {
        assert!(stdout(&list).contains(s));
    }
    let neg = lwb(&["demo", "negative-controls"]);
    assert_eq!(neg.status.code(), Some(0), "{}", stdout(&neg));
    let acc = lwb(&["demo", "acceptance"]);
    assert_eq!(acc.status.code(), Some(0));
    for n in 1..=10 {
        assert!(stdout(&acc).contains(&format!("criterion {n}: ")), "criterion {n}");
    }
}

#[test]
fn exhausted_bound_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shallow.lwb");
    std::fs::write(
        &path,
        r#"{
  "signatures": { "s": ["neg/1", "or/2"] },
  "logics": { "cpl": { "signature": "s", "oracle": { "kind": "classical" } } },
  "checks": { "c": { "steps": [ { "kind": "lindenbaum-quotient", "logic": "cpl", "nvars": 2, "depth": 1, "classes": 16 } ] } }
}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(lwb(&["check", p, "c"]).status.code(), Some(2));
    assert_eq!(lwb(&["check", p, "c", "--allow-inconclusive"]).status.code(), Some(0));
}
