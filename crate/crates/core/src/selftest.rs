//! The full verification suite: every headline claim of the workbench run
//! as an exact, seeded, reproducible check. Each criterion reports one
//! pass/fail line; the suite verdict is the conjunction.

use crate::action::{empty_domain_action, natural_action, ShiftAction};
use crate::bisect::{from_germ_groupoid, join_closed_correspondence, pair_groupoid, reconstruction_iso};
use crate::bitset::Bitset;
use crate::clopen::{covers, ClopenSet, Point, Word};
use crate::germ::{
    enumerate_correspondence, finite_cover_lemma_agrees, shift_closedness_report, shift_germ,
    shift_germ_in_subsemigroup, shift_germ_inv, shift_germ_mul, shift_is_cover,
    shift_restriction_ideal, shift_unit_at, FiniteGermGroupoid, GermError, ShiftGerm, ShiftIdeal,
    ShiftPartialHom, ShiftSubsemigroup,
};
use crate::isg::IdempotentIdeal;
use crate::polycyclic::{self, Classification, PolyElement};
use crate::spectrum::{
    characters, growth_table, is_proper_filter, is_ultracharacter, point_character,
    verify_characterization, SpectrumError,
};
use rand_chacha::ChaCha8Rng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Suite {
    pub seed: u64,
    pub trials: usize,
    pub criteria: Vec<Criterion>,
    pub verdict: bool,
}

fn rng_for(seed: u64, criterion: u64) -> ChaCha8Rng {
    // one independent stream per criterion, so criteria stay reproducible
    // regardless of the order they run in
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(criterion))
}

fn rand_word(rng: &mut ChaCha8Rng, n: u8, min_len: usize, max_len: usize) -> Word {
    let len = rng.random_range(min_len..=max_len);
    Word::new(n, (0..len).map(|_| rng.random_range(1..=n)).collect()).expect("letters in range")
}

fn rand_point_in(rng: &mut ChaCha8Rng, prefix: &Word) -> Point {
    let n = prefix.n();
    let extra = rand_word(rng, n, 0, 2);
    let period = rand_word(rng, n, 1, 3);
    Point::new(
        n,
        prefix.concat(&extra).letters().to_vec(),
        period.letters().to_vec(),
    )
    .expect("valid point")
}

fn rand_nonzero_element(rng: &mut ChaCha8Rng, n: u8, max_len: usize) -> PolyElement {
    PolyElement::Pair(rand_word(rng, n, 0, max_len), rand_word(rng, n, 0, max_len))
}

fn rand_composable_germ(rng: &mut ChaCha8Rng, beta: &ShiftAction, base: &Point) -> ShiftGerm {
    let nu = base.prefix(rng.random_range(0..=3));
    let mu = rand_word(rng, beta.n(), 0, 3);
    shift_germ(beta, &PolyElement::Pair(mu, nu), base).expect("base lies in the domain")
}

pub fn run_all(seed: u64, trials: usize) -> Suite {
    let criteria = vec![
        main_theorem_bijection(),
        membership_lemma(seed, trials),
        cover_lemma(seed, trials),
        classification(),
        level_products(),
        graded_closedness(seed),
        reconstruction(),
        join_closedness_agreement(),
        spectrum_characterization(),
        growth_tables(),
        invariant_suites(seed, trials),
    ];
    let verdict = criteria.iter().all(|c| c.passed);
    Suite {
        seed,
        trials,
        criteria,
        verdict,
    }
}

/// Criterion 1: the subsemigroup/subgroupoid bijection on the natural
/// two-point instance, with the groupoid count replayed by brute force.
pub fn main_theorem_bijection() -> Criterion {
    let action = natural_action(2);
    let (passed, details) = match enumerate_correspondence(&action) {
        Err(e) => (false, format!("enumeration failed: {e}")),
        Ok(report) => {
            // independent count: subsets of the pair groupoid containing
            // both units and closed under product and inverse
            let g = pair_groupoid(2);
            let n = g.len();
            let mut oracle = 0usize;
            for mask in 0u32..(1 << n) {
                let has = |a: usize| mask >> a & 1 == 1;
                let wide = (0..n).filter(|&a| g.is_unit(a)).all(has);
                let closed = (0..n).all(|a| {
                    !has(a)
                        || (has(g.inverse(a))
                            && (0..n).all(|b| {
                                !has(b)
                                    || g.product(a, b).map(has).unwrap_or(true)
                            }))
                });
                if wide && closed {
                    oracle += 1;
                }
            }
            let passed = report.verdict
                && report.subgroupoids == 2
                && report.subsemigroups == 2
                && oracle == 2;
            (
                passed,
                format!(
                    "subgroupoids={} subsemigroups={} brute-force={} round-trips={}",
                    report.subgroupoids,
                    report.subsemigroups,
                    oracle,
                    report.semigroup_round_trips && report.groupoid_round_trips
                ),
            )
        }
    };
    Criterion {
        id: 1,
        name: "main-theorem bijection on the two-point instance".into(),
        passed,
        details,
    }
}

/// Criterion 2: germ membership by witness search agrees with the
/// restriction-ideal domain test on seeded random triples.
pub fn membership_lemma(seed: u64, trials: usize) -> Criterion {
    let mut rng = rng_for(seed, 2);
    let beta = ShiftAction::new(2);
    let graded: Vec<ShiftSubsemigroup> =
        (0..=3).map(|m| ShiftSubsemigroup::graded(2, m)).collect();
    let mut agreed = 0usize;
    for _ in 0..trials {
        let s = rand_nonzero_element(&mut rng, 2, 3);
        let nu = match &s {
            PolyElement::Zero => unreachable!("nonzero by construction"),
            PolyElement::Pair(_, nu) => nu.clone(),
        };
        let x = rand_point_in(&mut rng, &nu);
        let t = &graded[rng.random_range(0..graded.len())];
        let g = shift_germ(&beta, &s, &x).expect("x lies in the domain");
        let by_search = shift_germ_in_subsemigroup(&beta, t, &g, 4);
        let by_ideal = shift_restriction_ideal(&s, t, 4)
            .expect("nonzero element")
            .domain()
            .contains_point(&x);
        if by_search == by_ideal {
            agreed += 1;
        }
    }
    Criterion {
        id: 2,
        name: "membership lemma on random germs".into(),
        passed: agreed == trials,
        details: format!("{agreed}/{trials} agreements"),
    }
}

/// Criterion 3: the cover criterion for random cylinder ideals, plus the
/// hypothesis guard on the empty-domain action.
pub fn cover_lemma(seed: u64, trials: usize) -> Criterion {
    let mut rng = rng_for(seed, 3);
    let mut agreed = 0usize;
    for _ in 0..trials {
        let mut gens: Vec<Word> = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let w = rand_word(&mut rng, 2, 1, 4);
            let comparable = gens
                .iter()
                .any(|g| g.is_prefix_of(&w) || w.is_prefix_of(g));
            if !comparable {
                gens.push(w);
            }
        }
        let ideal = ShiftIdeal {
            n: 2,
            root: Word::empty(2),
            gens: gens.clone(),
            exact: true,
        };
        let c: Vec<Word> = (0..rng.random_range(0..=4))
            .map(|_| {
                let g = gens[rng.random_range(0..gens.len())].clone();
                g.concat(&rand_word(&mut rng, 2, 0, 2))
            })
            .collect();
        let combinatorial = shift_is_cover(&ideal, &c).expect("c lies inside the ideal");
        let cylinders: Vec<ClopenSet> = c.iter().map(ClopenSet::cylinder).collect();
        let by_domains = covers(&cylinders, &ideal.domain()).expect("same alphabet");
        if combinatorial == by_domains {
            agreed += 1;
        }
    }

    // the empty-domain action must be rejected before any cover reasoning
    let adversarial = empty_domain_action();
    let sg = adversarial.semigroup();
    let ideal = IdempotentIdeal::generated(
        sg,
        &Bitset::from_indices(sg.len(), [sg.index_of("1").expect("unit")]),
    );
    let guard = matches!(
        finite_cover_lemma_agrees(&adversarial, ideal.members(), &ideal),
        Err(GermError::HypothesisFailed(_))
    );

    Criterion {
        id: 3,
        name: "cover lemma on random cylinder ideals".into(),
        passed: agreed == trials && guard,
        details: format!("{agreed}/{trials} agreements, hypothesis guard {}", if guard { "fired" } else { "MISSING" }),
    }
}

/// Criterion 4: classification of join closures over the diagonal part.
pub fn classification() -> Criterion {
    let cases: [(&str, u32); 4] = [("1/e", 1), ("11/e", 2), ("111/e", 3), ("1/22", 1)];
    let mut details = Vec::new();
    let mut passed = true;
    for (gen, expected) in cases {
        let g = PolyElement::parse(2, gen).expect("valid element");
        let got = polycyclic::classify(2, std::slice::from_ref(&g), 4);
        let closure_exact = polycyclic::beta_join_closure_truncated(2, &[g], 4)
            .map(|set| set == polycyclic::pnm_truncated(2, expected, 4))
            .unwrap_or(false);
        let ok = got == Ok(Classification::Graded(expected)) && closure_exact;
        passed &= ok;
        details.push(format!("{gen}=>m={expected}:{}", if ok { "ok" } else { "FAIL" }));
    }
    Criterion {
        id: 4,
        name: "classification of graded subsemigroups".into(),
        passed,
        details: details.join(" "),
    }
}

/// Criterion 5: the level-product identity, exhaustively in all 81 index
/// combinations up to 2.
pub fn level_products() -> Criterion {
    let report = polycyclic::verify_level_products(2, 2);
    Criterion {
        id: 5,
        name: "level products of graded pieces".into(),
        passed: report.verdict && report.cases.len() == 81,
        details: format!(
            "{}/{} cases",
            report.cases.iter().filter(|c| c.passed).count(),
            report.cases.len()
        ),
    }
}

/// Criterion 6: three-way closedness of the graded subsemigroups, with the
/// cocycle preimage as witness, and the length kernel pinned down.
pub fn graded_closedness(seed: u64) -> Criterion {
    let mut rng = rng_for(seed, 6);
    let beta = ShiftAction::new(2);
    let samples: Vec<ShiftGerm> = (0..20)
        .map(|_| {
            let s = rand_nonzero_element(&mut rng, 2, 3);
            let nu = match &s {
                PolyElement::Zero => unreachable!(),
                PolyElement::Pair(_, nu) => nu.clone(),
            };
            let x = rand_point_in(&mut rng, &nu);
            shift_germ(&beta, &s, &x).expect("x lies in the domain")
        })
        .collect();
    let mut passed = true;
    let mut details = Vec::new();
    for m in 1..=3u32 {
        let t = ShiftSubsemigroup::graded(2, m);
        match shift_closedness_report(&beta, &t, 4, &samples) {
            Ok(report) => {
                let ok = report.verdict
                    && report.exact
                    && report.cocycle_preimage_agrees == Some(true);
                passed &= ok;
                details.push(format!("m={m}:{}", if ok { "closed" } else { "FAIL" }));
            }
            Err(e) => {
                passed = false;
                details.push(format!("m={m}:error {e}"));
            }
        }
    }
    let sigma = ShiftPartialHom::length(2);
    let law = sigma.check_law(3);
    let kernel = ShiftSubsemigroup::Kernel(sigma);
    let kernel_is_diagonal = polycyclic::all_elements(2, 4)
        .iter()
        .all(|a| kernel.contains(a) == a.in_mn());
    passed &= law && kernel_is_diagonal;
    details.push(format!(
        "length-kernel=diagonal:{}",
        if kernel_is_diagonal { "ok" } else { "FAIL" }
    ));
    Criterion {
        id: 6,
        name: "closedness of graded subsemigroups and the length kernel".into(),
        passed,
        details: details.join(" "),
    }
}

/// Criterion 7: reconstruction from bisections for the pair groupoid and
/// for the germ groupoid of the natural two-point action.
pub fn reconstruction() -> Criterion {
    let g1 = pair_groupoid(2);
    // brute force over raw subsets, independent of the bisection monoid
    let mut brute = 0usize;
    for mask in 0u32..(1 << g1.len()) {
        let members: Vec<usize> = (0..g1.len()).filter(|&a| mask >> a & 1 == 1).collect();
        let mut d = std::collections::BTreeSet::new();
        let mut r = std::collections::BTreeSet::new();
        if members
            .iter()
            .all(|&a| d.insert(g1.source(a)) && r.insert(g1.range(a)))
        {
            brute += 1;
        }
    }
    let action = natural_action(2);
    let gg = FiniteGermGroupoid::new(&action);
    let g2 = from_germ_groupoid(&gg);
    let (passed, details) = match (reconstruction_iso(&g1), reconstruction_iso(&g2)) {
        (Ok(r1), Ok(r2)) => {
            let passed =
                r1.verdict && r2.verdict && r1.bisections == 7 && brute == 7 && r2.bisections == 7;
            (
                passed,
                format!(
                    "pair: size={} bisections={} brute={}; germ-groupoid: size={} bisections={}",
                    r1.groupoid_size, r1.bisections, brute, r2.groupoid_size, r2.bisections
                ),
            )
        }
        (e1, e2) => (false, format!("errors: {:?} {:?}", e1.err(), e2.err())),
    };
    Criterion {
        id: 7,
        name: "reconstruction from compact bisections".into(),
        passed,
        details,
    }
}

/// Criterion 8: semigroup join-closedness agrees with action
/// join-closedness for every wide subsemigroup of the bisection monoid.
pub fn join_closedness_agreement() -> Criterion {
    let (passed, details) = match join_closed_correspondence(&pair_groupoid(2)) {
        Ok(report) => (
            report.verdict
                && report.lemma_agreement
                && report.wide_subsemigroups == 3
                && report.join_closed == 2
                && report.wide_subgroupoids == 2,
            format!(
                "wide={} join-closed={} subgroupoids={} agreement={}",
                report.wide_subsemigroups,
                report.join_closed,
                report.wide_subgroupoids,
                report.lemma_agreement
            ),
        ),
        Err(e) => (false, format!("error: {e}")),
    };
    Criterion {
        id: 8,
        name: "join-closedness agreement for bisections".into(),
        passed,
        details,
    }
}

/// Criterion 9: the point-to-character identification on the two-point
/// instance, and the hypothesis guard with the non-maximal character on
/// the empty-domain action.
pub fn spectrum_characterization() -> Criterion {
    let (ok_main, main_details) = match verify_characterization(&natural_action(2)) {
        Ok(report) => (
            report.verdict && report.points == 2 && report.ultracharacters == 2,
            format!(
                "points={} ultra={} germ-iso={}",
                report.points,
                report.ultracharacters,
                report.germ_map_bijective && report.germ_map_multiplicative
            ),
        ),
        Err(e) => (false, format!("error: {e}")),
    };
    let adversarial = empty_domain_action();
    let guard = matches!(
        verify_characterization(&adversarial),
        Err(SpectrumError::HypothesisFailed(_))
    );
    let xi = point_character(&adversarial, 0);
    let flagged_non_ultra =
        !is_ultracharacter(adversarial.semigroup(), &xi).expect("small semilattice");
    Criterion {
        id: 9,
        name: "spectrum characterization and its hypothesis guard".into(),
        passed: ok_main && guard && flagged_non_ultra,
        details: format!(
            "{main_details}; guard {} and point character {}",
            if guard { "fired" } else { "MISSING" },
            if flagged_non_ultra { "non-maximal" } else { "unexpectedly maximal" }
        ),
    }
}

/// Criterion 10: exact spectrum counts of the orthogonal families at
/// truncations 1 through 8.
pub fn growth_tables() -> Criterion {
    let mut passed = true;
    match growth_table(8, false) {
        Ok(rows) => {
            for (k, row) in rows.iter().enumerate() {
                passed &= row.characters == k + 1 && row.ultra == k + 1 && row.tight == k + 1;
            }
        }
        Err(_) => passed = false,
    }
    match growth_table(8, true) {
        Ok(rows) => {
            for (k, row) in rows.iter().enumerate() {
                passed &= row.characters == k + 2 && row.ultra == k + 1 && row.tight == k + 1;
            }
        }
        Err(_) => passed = false,
    }
    Criterion {
        id: 10,
        name: "orthogonal-family growth tables".into(),
        passed,
        details: "unit-free: |ultra| = N; unital: |characters| = N+1, |ultra| = N, for N = 1..8"
            .into(),
    }
}

/// Criterion 11: the structural invariant suites, seeded.
pub fn invariant_suites(seed: u64, trials: usize) -> Criterion {
    let mut rng = rng_for(seed, 11);
    let beta = ShiftAction::new(2);
    let mut failures: Vec<String> = Vec::new();

    // germ associativity and the unit laws
    for _ in 0..trials {
        let base_prefix = rand_word(&mut rng, 2, 0, 2);
        let x = rand_point_in(&mut rng, &base_prefix);
        let g3 = rand_composable_germ(&mut rng, &beta, &x);
        let g2 = rand_composable_germ(&mut rng, &beta, &g3.range);
        let g1 = rand_composable_germ(&mut rng, &beta, &g2.range);
        let left = shift_germ_mul(&shift_germ_mul(&g1, &g2).expect("composable"), &g3);
        let right = shift_germ_mul(&g1, &shift_germ_mul(&g2, &g3).expect("composable"));
        if left != right {
            failures.push("associativity".into());
        }
        let gi = shift_germ_inv(&g1);
        if shift_germ_mul(&g1, &gi) != Ok(shift_unit_at(&g1.range))
            || shift_germ_mul(&gi, &g1) != Ok(shift_unit_at(&g1.source))
        {
            failures.push("unit law".into());
        }
    }

    // canonical forms: sibling expansion and duplication do not change the
    // canonical representative
    for _ in 0..trials {
        let words: Vec<Word> = (0..rng.random_range(0..5))
            .map(|_| rand_word(&mut rng, 2, 0, 4))
            .collect();
        let a = ClopenSet::from_words(2, words).expect("same alphabet");
        let mut expanded: Vec<Word> = Vec::new();
        for w in a.words() {
            if rng.random_bool(0.5) {
                for l in 1..=2 {
                    expanded.push(w.extend(l));
                }
            } else {
                expanded.push(w.clone());
                expanded.push(w.clone());
            }
        }
        let b = ClopenSet::from_words(2, expanded).expect("same alphabet");
        if a != b {
            failures.push("canonical form".into());
        }
    }

    // De Morgan, exactly on canonical forms
    for _ in 0..trials {
        let mk = |rng: &mut ChaCha8Rng| {
            let words: Vec<Word> = (0..rng.random_range(0..5))
                .map(|_| rand_word(rng, 2, 0, 4))
                .collect();
            ClopenSet::from_words(2, words).expect("same alphabet")
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let lhs = a.union(&b).expect("same alphabet").complement();
        let rhs = a
            .complement()
            .intersect(&b.complement())
            .expect("same alphabet");
        if lhs != rhs {
            failures.push("de morgan".into());
        }
    }

    // filter axioms for every character of a random orthogonal family
    for _ in 0..trials {
        let n_gens = rng.random_range(1..=5);
        let with_unit = rng.random_bool(0.5);
        let sg = crate::spectrum::orthogonal_family(n_gens, with_unit);
        match characters(&sg) {
            Ok(all) => {
                for xi in &all {
                    if !is_proper_filter(&sg, xi.filter()) {
                        failures.push("filter axioms".into());
                    }
                }
            }
            Err(_) => failures.push("character enumeration".into()),
        }
    }

    failures.sort();
    failures.dedup();
    Criterion {
        id: 11,
        name: "structural invariant suites".into(),
        passed: failures.is_empty(),
        details: if failures.is_empty() {
            format!("{trials} trials per suite, all passed")
        } else {
            format!("failing suites: {}", failures.join(", "))
        },
    }
}

/// Randomized cover-criterion trials, exposed for the command line.
pub fn cover_trials(n: u8, seed: u64, trials: usize) -> (usize, usize) {
    let mut rng = rng_for(seed, 3);
    let mut agreed = 0usize;
    for _ in 0..trials {
        let mut gens: Vec<Word> = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let w = rand_word(&mut rng, n, 1, 4);
            let comparable = gens
                .iter()
                .any(|g| g.is_prefix_of(&w) || w.is_prefix_of(g));
            if !comparable {
                gens.push(w);
            }
        }
        let ideal = ShiftIdeal {
            n,
            root: Word::empty(n),
            gens: gens.clone(),
            exact: true,
        };
        let c: Vec<Word> = (0..rng.random_range(0..=4))
            .map(|_| {
                let g = gens[rng.random_range(0..gens.len())].clone();
                g.concat(&rand_word(&mut rng, n, 0, 2))
            })
            .collect();
        let combinatorial = shift_is_cover(&ideal, &c).expect("c lies inside the ideal");
        let cylinders: Vec<ClopenSet> = c.iter().map(ClopenSet::cylinder).collect();
        if combinatorial == covers(&cylinders, &ideal.domain()).expect("same alphabet") {
            agreed += 1;
        }
    }
    (agreed, trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_reproducible() {
        let a = run_all(0, 40);
        let b = run_all(0, 40);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.verdict, "{:#?}", a.criteria.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }

    #[test]
    fn different_seeds_still_pass() {
        let suite = run_all(12345, 25);
        assert!(suite.verdict);
    }
}
