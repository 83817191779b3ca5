//! Finite inverse semigroups given by validated multiplication tables.
//!
//! Elements are identified by table index; names are display-only. The
//! constructor checks associativity, the zero laws, uniqueness of inverses
//! and commutation of idempotents, so every [`InverseSemigroup`] value is a
//! genuine inverse semigroup with zero.

use crate::bitset::Bitset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("table shape invalid: {0}")]
    BadShape(String),
    #[error("entry out of range at ({row}, {col})")]
    BadIndex { row: usize, col: usize },
    #[error("multiplication not associative at indices ({i}, {j}, {k})")]
    NonAssociative { i: usize, j: usize, k: usize },
    #[error("declared zero {zero} fails 0*s = s*0 = 0 at s = {s}")]
    NoZero { zero: usize, s: usize },
    #[error("element {s} has {} candidate inverses: {candidates:?}", candidates.len())]
    NoUniqueInverse { s: usize, candidates: Vec<usize> },
    #[error("supplied star violates s*s*s = s laws at element {s}")]
    StarViolatesLaws { s: usize },
    #[error("idempotents {e} and {f} do not commute")]
    IdempotentsDontCommute { e: usize, f: usize },
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("candidate cover contains {c}, which is outside the ideal")]
    CNotContained { c: usize },
}

/// JSON document for a multiplication table. Indices are 0-based; `star`
/// may be omitted, in which case inverses are computed from the table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemigroupDoc {
    pub names: Vec<String>,
    pub zero: usize,
    pub mult: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<usize>>,
}

/// A finite inverse semigroup with zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    names: Vec<String>,
    zero: usize,
    /// Row-major `n*n` product table.
    mult: Vec<usize>,
    star: Vec<usize>,
    idem: Bitset,
}

impl InverseSemigroup {
    pub fn new(
        names: Vec<String>,
        zero: usize,
        mult: Vec<Vec<usize>>,
        star: Option<Vec<usize>>,
    ) -> Result<Self, SemigroupError> {
        let n = names.len();
        if n == 0 {
            return Err(SemigroupError::BadShape("empty element list".into()));
        }
        if mult.len() != n {
            return Err(SemigroupError::BadShape(format!(
                "mult has {} rows, expected {n}",
                mult.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (r, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(SemigroupError::BadShape(format!(
                    "mult row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(SemigroupError::BadIndex { row: r, col: c });
                }
                flat.push(v);
            }
        }
        if zero >= n {
            return Err(SemigroupError::BadShape(format!("zero index {zero} out of range")));
        }

        let at = |s: usize, t: usize| flat[s * n + t];

        for i in 0..n {
            for j in 0..n {
                let ij = at(i, j);
                for k in 0..n {
                    if at(ij, k) != at(i, at(j, k)) {
                        return Err(SemigroupError::NonAssociative { i, j, k });
                    }
                }
            }
        }

        for s in 0..n {
            if at(zero, s) != zero || at(s, zero) != zero {
                return Err(SemigroupError::NoZero { zero, s });
            }
        }

        // s* is pinned by s·t·s = s and t·s·t = t; ambiguity or absence is a
        // table defect.
        let mut computed = Vec::with_capacity(n);
        for s in 0..n {
            let candidates: Vec<usize> = (0..n)
                .filter(|&t| at(at(s, t), s) == s && at(at(t, s), t) == t)
                .collect();
            match candidates.as_slice() {
                [t] => computed.push(*t),
                _ => return Err(SemigroupError::NoUniqueInverse { s, candidates }),
            }
        }
        if let Some(given) = &star {
            if given.len() != n {
                return Err(SemigroupError::BadShape(format!(
                    "star has {} entries, expected {n}",
                    given.len()
                )));
            }
            for s in 0..n {
                if given[s] != computed[s] {
                    return Err(SemigroupError::StarViolatesLaws { s });
                }
            }
        }

        let idem = Bitset::from_indices(n, (0..n).filter(|&e| at(e, e) == e));
        for e in idem.iter() {
            for f in idem.iter() {
                if at(e, f) != at(f, e) {
                    return Err(SemigroupError::IdempotentsDontCommute { e, f });
                }
            }
        }

        Ok(InverseSemigroup {
            names,
            zero,
            mult: flat,
            star: computed,
            idem,
        })
    }

    pub fn from_doc(doc: SemigroupDoc) -> Result<Self, SemigroupError> {
        InverseSemigroup::new(doc.names, doc.zero, doc.mult, doc.star)
    }

    pub fn from_json(json: &str) -> Result<Self, SemigroupError> {
        let doc: SemigroupDoc =
            serde_json::from_str(json).map_err(|e| SemigroupError::Json(e.to_string()))?;
        InverseSemigroup::from_doc(doc)
    }

    /// Canonical document: `star` is always materialized, so saving is a
    /// normal form and `to_json . from_json . to_json = to_json`.
    pub fn to_doc(&self) -> SemigroupDoc {
        let n = self.len();
        SemigroupDoc {
            names: self.names.clone(),
            zero: self.zero,
            mult: (0..n)
                .map(|s| (0..n).map(|t| self.mul(s, t)).collect())
                .collect(),
            star: Some(self.star.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("semigroup doc serializes")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.mult[s * self.len() + t]
    }

    pub fn star(&self, s: usize) -> usize {
        self.star[s]
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.idem.contains(s)
    }

    /// `E(S)` as a bitmask over element indices.
    pub fn idempotents(&self) -> &Bitset {
        &self.idem
    }

    /// Natural partial order: `s <= t` iff `t·s*·s = s`.
    pub fn le(&self, s: usize, t: usize) -> bool {
        self.mul(t, self.mul(self.star(s), s)) == s
    }

    /// `s` and `t` are compatible iff `s*t` and `st*` are both idempotent.
    pub fn compatible(&self, s: usize, t: usize) -> bool {
        self.is_idempotent(self.mul(self.star(s), t))
            && self.is_idempotent(self.mul(s, self.star(t)))
    }

    /// Least subset containing `generators` and closed under product and
    /// star (fixpoint of one-step closure).
    pub fn closure(&self, generators: &Bitset) -> Bitset {
        assert_eq!(generators.len(), self.len());
        let mut set = generators.clone();
        loop {
            let mut next = set.clone();
            for s in set.iter() {
                next.insert(self.star(s));
                for t in set.iter() {
                    next.insert(self.mul(s, t));
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    /// True iff `t` contains every idempotent and is closed under product
    /// and star.
    pub fn is_wide_subsemigroup(&self, t: &Bitset) -> bool {
        if !self.idem.is_subset(t) {
            return false;
        }
        for s in t.iter() {
            if !t.contains(self.star(s)) {
                return false;
            }
            for u in t.iter() {
                if !t.contains(self.mul(s, u)) {
                    return false;
                }
            }
        }
        true
    }

    /// All wide subsemigroups, by exhaustive search over the non-idempotent
    /// elements. Hard-errors rather than blowing up on large inputs.
    pub fn enumerate_wide_subsemigroups(&self) -> Result<Vec<Bitset>, TooLarge> {
        let rest: Vec<usize> = (0..self.len()).filter(|&s| !self.is_idempotent(s)).collect();
        if rest.len() > 24 {
            return Err(TooLarge {
                what: "non-idempotent elements",
                count: rest.len(),
                limit: 24,
            });
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << rest.len()) {
            let mut t = self.idem.clone();
            for (bit, &s) in rest.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    t.insert(s);
                }
            }
            if self.is_wide_subsemigroup(&t) {
                out.push(t);
            }
        }
        Ok(out)
    }

    pub fn is_semilattice(&self) -> bool {
        self.idem.count() == self.len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{what} count {count} exceeds enumeration guard {limit}")]
pub struct TooLarge {
    pub what: &'static str,
    pub count: usize,
    pub limit: usize,
}

/// A downward-closed set of idempotents (`f <= e` and `e` in the ideal
/// implies `f` in the ideal), stored as a bitmask over element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentIdeal(Bitset);

impl IdempotentIdeal {
    pub fn new(sg: &InverseSemigroup, members: Bitset) -> Result<Self, String> {
        assert_eq!(members.len(), sg.len());
        for e in members.iter() {
            if !sg.is_idempotent(e) {
                return Err(format!("element {e} is not idempotent"));
            }
        }
        for e in members.iter() {
            for f in sg.idempotents().iter() {
                if sg.le(f, e) && !members.contains(f) {
                    return Err(format!("not downward closed: {f} <= {e} is missing"));
                }
            }
        }
        Ok(IdempotentIdeal(members))
    }

    /// Downward closure of a set of idempotent generators.
    pub fn generated(sg: &InverseSemigroup, gens: &Bitset) -> Self {
        let mut members = Bitset::new(sg.len());
        for g in gens.iter() {
            assert!(sg.is_idempotent(g), "generator {g} is not idempotent");
            for f in sg.idempotents().iter() {
                if sg.le(f, g) {
                    members.insert(f);
                }
            }
        }
        IdempotentIdeal(members)
    }

    pub fn members(&self) -> &Bitset {
        &self.0
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(e)
    }
}

/// True iff every nonzero element of the ideal meets some element of `c`
/// nontrivially (`e·c != 0`).
pub fn is_cover(
    sg: &InverseSemigroup,
    c: &Bitset,
    ideal: &IdempotentIdeal,
) -> Result<bool, CoverError> {
    for x in c.iter() {
        if !ideal.contains(x) {
            return Err(CoverError::CNotContained { c: x });
        }
    }
    for e in ideal.members().iter() {
        if e == sg.zero() {
            continue;
        }
        if !c.iter().any(|x| sg.mul(e, x) != sg.zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The symmetric inverse monoid on `points` letters: all partial injections
/// under composition, built by direct enumeration. Elements are sorted by
/// (rank, graph), so the empty map (the zero) gets index 0.
pub fn symmetric_inverse_monoid(points: usize) -> InverseSemigroup {
    let maps = partial_injections(points);
    let compose = |a: &Vec<Option<usize>>, b: &Vec<Option<usize>>| -> Vec<Option<usize>> {
        (0..points).map(|x| b[x].and_then(|y| a[y])).collect()
    };
    let name = |m: &Vec<Option<usize>>| -> String {
        let pairs: Vec<String> = (0..points)
            .filter_map(|x| m[x].map(|y| format!("{}->{}", x + 1, y + 1)))
            .collect();
        if pairs.is_empty() {
            "0".to_string()
        } else if (0..points).all(|x| m[x] == Some(x)) {
            "1".to_string()
        } else {
            pairs.join(",")
        }
    };

    let n = maps.len();
    let index = |m: &Vec<Option<usize>>| maps.iter().position(|x| x == m).unwrap();
    let mult: Vec<Vec<usize>> = (0..n)
        .map(|s| (0..n).map(|t| index(&compose(&maps[s], &maps[t]))).collect())
        .collect();
    let names = maps.iter().map(name).collect();
    InverseSemigroup::new(names, 0, mult, None).expect("partial injections form an inverse monoid")
}

/// The partial injections behind [`symmetric_inverse_monoid`], sorted by
/// (rank, graph) so the empty map comes first; index `i` here is element
/// `i` there. Used to build the natural action.
pub fn partial_injections(points: usize) -> Vec<Vec<Option<usize>>> {
    assert!((1..=4).contains(&points), "table would be impractical");
    let mut maps: Vec<Vec<Option<usize>>> = vec![vec![None; points]];
    for x in 0..points {
        let mut next = Vec::new();
        for m in &maps {
            next.push(m.clone());
            for y in 0..points {
                if !m.contains(&Some(y)) {
                    let mut ext = m.clone();
                    ext[x] = Some(y);
                    next.push(ext);
                }
            }
        }
        maps = next;
    }
    maps.sort_by_key(|m| (m.iter().flatten().count(), m.clone()));
    maps.dedup();
    maps
}

/// The two-element meet semilattice `{0, e}`.
pub fn two_element_semilattice() -> InverseSemigroup {
    InverseSemigroup::new(
        vec!["0".into(), "e".into()],
        0,
        vec![vec![0, 0], vec![0, 1]],
        None,
    )
    .expect("valid table")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i2() -> InverseSemigroup {
        symmetric_inverse_monoid(2)
    }

    #[test]
    fn i2_accepted_with_four_idempotents() {
        let s = i2();
        assert_eq!(s.len(), 7);
        assert_eq!(s.idempotents().count(), 4);
        assert_eq!(s.name(s.zero()), "0");
        // star of the identity is itself; star swaps the two rank-1 shifts
        let a = s.index_of("1->2").unwrap();
        let b = s.index_of("2->1").unwrap();
        assert_eq!(s.star(a), b);
        let swap = s.index_of("1->2,2->1").unwrap();
        assert_eq!(s.star(swap), swap);
    }

    #[test]
    fn semilattice_accepted_star_identity() {
        let s = two_element_semilattice();
        assert!(s.is_semilattice());
        assert_eq!(s.star(0), 0);
        assert_eq!(s.star(1), 1);
    }

    #[test]
    fn ambiguous_inverse_rejected() {
        // left-zero band plus zero: both a and b invert a
        let err = InverseSemigroup::new(
            vec!["0".into(), "a".into(), "b".into()],
            0,
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 2, 2]],
            None,
        )
        .unwrap_err();
        assert_eq!(
            err,
            SemigroupError::NoUniqueInverse {
                s: 1,
                candidates: vec![1, 2]
            }
        );
    }

    #[test]
    fn non_associative_rejected() {
        // 0, a with a*a = a but a row tampered via a three-element table
        let err = InverseSemigroup::new(
            vec!["0".into(), "a".into(), "b".into()],
            0,
            vec![vec![0, 0, 0], vec![0, 2, 1], vec![0, 1, 0]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, SemigroupError::NonAssociative { .. }));
    }

    #[test]
    fn zero_law_rejected() {
        let err = InverseSemigroup::new(
            vec!["z".into(), "e".into()],
            0,
            vec![vec![0, 1], vec![1, 1]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, SemigroupError::NoZero { .. }));
    }

    #[test]
    fn wrong_star_rejected() {
        let err = InverseSemigroup::new(
            vec!["0".into(), "e".into()],
            0,
            vec![vec![0, 0], vec![0, 1]],
            Some(vec![1, 1]),
        )
        .unwrap_err();
        assert_eq!(err, SemigroupError::StarViolatesLaws { s: 0 });
    }

    #[test]
    fn natural_order_examples() {
        let s = i2();
        let e1 = s.index_of("1->1").unwrap();
        let e2 = s.index_of("2->2").unwrap();
        let one = s.index_of("1").unwrap();
        assert!(s.le(e1, one));
        assert!(!s.le(one, e1));
        // on idempotents the order is e <= f iff ef = e
        for e in s.idempotents().iter() {
            for f in s.idempotents().iter() {
                assert_eq!(s.le(e, f), s.mul(e, f) == e);
            }
        }
        assert!(s.le(s.zero(), e2));
    }

    #[test]
    fn order_antisymmetric() {
        let s = symmetric_inverse_monoid(3);
        for a in 0..s.len() {
            for b in 0..s.len() {
                if s.le(a, b) && s.le(b, a) {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        let s = i2();
        let e1 = s.index_of("1->1").unwrap();
        let e2 = s.index_of("2->2").unwrap();
        let one = s.index_of("1").unwrap();
        let swap = s.index_of("1->2,2->1").unwrap();
        assert!(s.compatible(e1, e2));
        assert!(!s.compatible(one, swap));
        // below a common upper bound implies compatible
        for a in 0..s.len() {
            for b in 0..s.len() {
                let dominated = (0..s.len()).any(|u| s.le(a, u) && s.le(b, u));
                if dominated {
                    assert!(s.compatible(a, b), "{a} {b} below common bound");
                }
            }
        }
    }

    #[test]
    fn idempotents_closed_and_commutative() {
        let s = symmetric_inverse_monoid(3);
        let e = s.idempotents();
        for a in e.iter() {
            assert!(e.contains(s.star(a)));
            for b in e.iter() {
                assert!(e.contains(s.mul(a, b)));
                assert_eq!(s.mul(a, b), s.mul(b, a));
            }
        }
    }

    #[test]
    fn closure_examples() {
        let s = i2();
        assert!(s.closure(&Bitset::new(s.len())).is_empty());
        let e_closure = s.closure(s.idempotents());
        assert_eq!(&e_closure, s.idempotents());

        // swap generates the two-element group {swap, 1}
        let swap = s.index_of("1->2,2->1").unwrap();
        let one = s.index_of("1").unwrap();
        let got = s.closure(&Bitset::from_indices(s.len(), [swap]));
        assert_eq!(got, Bitset::from_indices(s.len(), [swap, one]));

        // E together with a rank-1 shift closes onto the rank-<=1 elements
        // plus the identity; the swap is not a product of these
        let a = s.index_of("1->2").unwrap();
        let b = s.index_of("2->1").unwrap();
        let e1 = s.index_of("1->1").unwrap();
        let e2 = s.index_of("2->2").unwrap();
        let mut gens = s.idempotents().clone();
        gens.insert(a);
        let got = s.closure(&gens);
        assert_eq!(
            got,
            Bitset::from_indices(s.len(), [s.zero(), e1, e2, one, a, b])
        );
    }

    #[test]
    fn cover_examples() {
        let s = i2();
        let e1 = s.index_of("1->1").unwrap();
        let e2 = s.index_of("2->2").unwrap();
        let j = IdempotentIdeal::generated(&s, &Bitset::from_indices(s.len(), [e1, e2]));
        assert_eq!(j.members(), &Bitset::from_indices(s.len(), [s.zero(), e1, e2]));

        let c1 = Bitset::from_indices(s.len(), [e1]);
        assert_eq!(is_cover(&s, &c1, &j), Ok(false));
        let c2 = Bitset::from_indices(s.len(), [e1, e2]);
        assert_eq!(is_cover(&s, &c2, &j), Ok(true));
        // the whole ideal covers itself
        assert_eq!(is_cover(&s, j.members(), &j), Ok(true));
        // elements outside the ideal are rejected
        let one = s.index_of("1").unwrap();
        assert_eq!(
            is_cover(&s, &Bitset::from_indices(s.len(), [one]), &j),
            Err(CoverError::CNotContained { c: one })
        );
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let s = i2();
        let json = s.to_json();
        let back = InverseSemigroup::from_json(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), json);
        // loading a star-free doc and saving materializes the star
        let doc = SemigroupDoc {
            names: s.to_doc().names,
            zero: 0,
            mult: s.to_doc().mult,
            star: None,
        };
        let loaded = InverseSemigroup::from_doc(doc).unwrap();
        assert_eq!(loaded.to_json(), json);
    }

    #[test]
    fn wide_subsemigroups_of_i2() {
        let s = i2();
        let all = s.enumerate_wide_subsemigroups().unwrap();
        // E, E + the two rank-1 shifts, and the whole monoid
        assert_eq!(all.len(), 3);
        assert!(all.iter().any(|t| t == s.idempotents()));
        assert!(all.iter().any(|t| t.count() == s.len()));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use std::sync::OnceLock;

        fn i3() -> &'static InverseSemigroup {
            static CELL: OnceLock<InverseSemigroup> = OnceLock::new();
            CELL.get_or_init(|| symmetric_inverse_monoid(3))
        }

        proptest! {
            #[test]
            fn closure_idempotent_and_monotone(
                gens in prop::collection::vec(0usize..34, 0..4),
                extra in prop::collection::vec(0usize..34, 0..3),
            ) {
                let s = i3();
                let g1 = Bitset::from_indices(s.len(), gens.iter().copied());
                let c1 = s.closure(&g1);
                prop_assert_eq!(s.closure(&c1), c1.clone());
                let mut g2 = g1.clone();
                for &e in &extra {
                    g2.insert(e);
                }
                prop_assert!(c1.is_subset(&s.closure(&g2)));
            }

            #[test]
            fn cover_monotone_in_candidates(
                gens in prop::collection::vec(0usize..34, 1..3),
                picks in prop::collection::vec(any::<bool>(), 34),
                more in prop::collection::vec(any::<bool>(), 34),
            ) {
                let s = i3();
                let idem_gens = Bitset::from_indices(
                    s.len(),
                    gens.iter().map(|&g| {
                        // project arbitrary elements onto idempotents
                        s.mul(s.star(g), g)
                    }),
                );
                let ideal = IdempotentIdeal::generated(s, &idem_gens);
                let c_small = Bitset::from_indices(
                    s.len(),
                    ideal.members().iter().filter(|&e| picks[e]),
                );
                let c_big = Bitset::from_indices(
                    s.len(),
                    ideal.members().iter().filter(|&e| picks[e] || more[e]),
                );
                if is_cover(s, &c_small, &ideal) == Ok(true) {
                    prop_assert_eq!(is_cover(s, &c_big, &ideal), Ok(true));
                }
            }
        }
    }
}
