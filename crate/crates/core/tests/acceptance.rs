//! The acceptance gate: every headline criterion of the workbench, run at
//! the pinned seed and trial count, printing one pass/fail line each.
//! `cargo test --test acceptance -- --nocapture` shows the lines.

use germoid::selftest::{self, Criterion};

const SEED: u64 = 0;
const TRIALS: usize = 200;

fn gate(c: Criterion) {
    println!(
        "{} criterion {:02}: {} ({})",
        if c.passed { "PASS" } else { "FAIL" },
        c.id,
        c.name,
        c.details
    );
    assert!(c.passed, "criterion {:02} failed: {}", c.id, c.details);
}

#[test]
fn criterion_01_main_theorem_bijection() {
    gate(selftest::main_theorem_bijection());
}

#[test]
fn criterion_02_membership_lemma() {
    gate(selftest::membership_lemma(SEED, TRIALS));
}

#[test]
fn criterion_03_cover_lemma() {
    gate(selftest::cover_lemma(SEED, TRIALS));
}

#[test]
fn criterion_04_classification() {
    gate(selftest::classification());
}

#[test]
fn criterion_05_level_products() {
    gate(selftest::level_products());
}

#[test]
fn criterion_06_graded_closedness() {
    gate(selftest::graded_closedness(SEED));
}

#[test]
fn criterion_07_reconstruction() {
    gate(selftest::reconstruction());
}

#[test]
fn criterion_08_join_closedness_agreement() {
    gate(selftest::join_closedness_agreement());
}

#[test]
fn criterion_09_spectrum_characterization() {
    gate(selftest::spectrum_characterization());
}

#[test]
fn criterion_10_growth_tables() {
    gate(selftest::growth_tables());
}

#[test]
fn criterion_11_invariant_suites() {
    gate(selftest::invariant_suites(SEED, TRIALS));
}

#[test]
fn full_suite_verdict() {
    let suite = selftest::run_all(SEED, TRIALS);
    for c in &suite.criteria {
        println!(
            "{} criterion {:02}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name
        );
    }
    assert!(suite.verdict);
}
