//! End-to-end runs of the binary against the shipped fixture documents.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    path.to_str().unwrap().to_string()
}

fn germoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germoid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

#[test]
fn fixtures_match_builtin_instances() {
    let i2 = std::fs::read_to_string(fixture("i2_semigroup.json")).unwrap();
    assert_eq!(i2, germoid::isg::symmetric_inverse_monoid(2).to_json());
    let action = std::fs::read_to_string(fixture("i2_action.json")).unwrap();
    assert_eq!(action, germoid::action::natural_action(2).to_json());
    let pair = std::fs::read_to_string(fixture("pair_groupoid.json")).unwrap();
    assert_eq!(pair, germoid::bisect::pair_groupoid(2).to_json());
    let sl = std::fs::read_to_string(fixture("two_semilattice.json")).unwrap();
    assert_eq!(sl, germoid::isg::two_element_semilattice().to_json());
}

#[test]
fn validate_semigroup_accepts_and_rejects() {
    let ok = germoid(&["validate-semigroup", &fixture("i2_semigroup.json")]);
    assert_eq!(ok.status.code(), Some(0));
    let r = report(&ok);
    assert_eq!(r["verdict"], Value::Bool(true));
    assert_eq!(r["counts"]["elements"], 7);

    let bad = germoid(&["validate-semigroup", &fixture("bad_semigroup.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(report(&bad)["verdict"], Value::Bool(false));
}

#[test]
fn usage_errors_exit_2() {
    let missing = germoid(&["validate-semigroup", "no-such-file.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_flag = germoid(&["classify-pn", "--n", "2", "--gens", "xyz", "--bound", "4"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    let unknown = germoid(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn correspondence_counts() {
    let out = germoid(&["correspondence", &fixture("i2_action.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["counts"]["subgroupoids"], 2);
    assert_eq!(r["counts"]["subsemigroups"], 2);
}

#[test]
fn classify_pn_cases() {
    let out = germoid(&["classify-pn", "--n", "2", "--gens", "1/e", "--bound", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["counts"]["m"], 1);

    let out = germoid(&["classify-pn", "--n", "2", "--gens", "11/e", "--bound", "4"]);
    assert_eq!(report(&out)["counts"]["m"], 2);

    // a generator longer than the bound cannot stabilize: verdict false
    let out = germoid(&["classify-pn", "--n", "2", "--gens", "111/e", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], Value::Bool(false));
}

#[test]
fn closedness_graded() {
    let out = germoid(&["closedness", "--n", "2", "--subsemigroup", "Pnm:2", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], Value::Bool(true));
    assert_eq!(r["truncation"], 3);
}

#[test]
fn cover_lemma_seeded() {
    let out = germoid(&["cover-lemma", "--n", "2", "--seed", "7", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["counts"]["agreed"], 50);
}

#[test]
fn spectrum_family_counts() {
    let out = germoid(&["spectrum", "--family", "orthogonal", "--N", "5", "--with-unit"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["counts"]["characters"], 6);
    assert_eq!(r["counts"]["ultra"], 5);

    let out = germoid(&["spectrum", "--semilattice", &fixture("two_semilattice.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["counts"]["characters"], 1);

    // a non-semilattice input is a verdict failure
    let out = germoid(&["spectrum", "--semilattice", &fixture("i2_semigroup.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn characterize_action() {
    let out = germoid(&["characterize", &fixture("i2_action.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["counts"]["ultracharacters"], 2);
}

#[test]
fn reconstruct_pair_groupoid() {
    let out = germoid(&["reconstruct", &fixture("pair_groupoid.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["counts"]["bisections"], 7);
}

#[test]
fn bisect_correspondence_counts() {
    let out = germoid(&["bisect-correspondence", &fixture("pair_groupoid.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["counts"]["join_closed"], 2);
    assert_eq!(r["counts"]["wide_subgroupoids"], 2);
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let a = germoid(&["selftest", "--seed", "3", "--trials", "30"]);
    assert_eq!(a.status.code(), Some(0));
    let b = germoid(&["selftest", "--seed", "3", "--trials", "30"]);
    let mut ra = report(&a);
    let mut rb = report(&b);
    assert_eq!(ra["verdict"], Value::Bool(true));
    assert_eq!(ra["checks"].as_array().unwrap().len(), 11);
    ra["wall_ms"] = Value::from(0);
    rb["wall_ms"] = Value::from(0);
    assert_eq!(ra, rb);
}

#[test]
fn pretty_flag_renders_multiline() {
    let out = germoid(&["--pretty", "spectrum", "--family", "orthogonal", "--N", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.iter().filter(|&&b| b == b'\n').count() > 3);
}
