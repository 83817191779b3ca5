//! Finite groupoids given by explicit tables, the inverse semigroup of
//! their (compact) bisections, the translation action of bisections on the
//! unit space, and the reconstruction of the groupoid from that action.
//! Everything here is exhaustive; hard size guards refuse inputs whose
//! bisection monoid would explode.

use crate::action::FiniteAction;
use crate::bitset::Bitset;
use crate::germ::{self, FiniteGermGroupoid};
use crate::isg::{InverseSemigroup, TooLarge};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BisectError {
    #[error("groupoid table invalid: {0}")]
    BadShape(String),
    #[error("groupoid axiom fails: {0}")]
    Axiom(String),
    #[error("bisections are not compatible")]
    NotCompatible,
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
    #[error("json: {0}")]
    Json(String),
}

/// JSON document for a finite groupoid. `product[a][b]` is the composite
/// `ab` when sources and ranges match, `null` otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub names: Vec<String>,
    pub unit: Vec<bool>,
    pub source: Vec<usize>,
    pub range: Vec<usize>,
    pub product: Vec<Vec<Option<usize>>>,
}

/// A finite (discrete) groupoid with validated axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    names: Vec<String>,
    unit: Vec<bool>,
    source: Vec<usize>,
    range: Vec<usize>,
    product: Vec<Vec<Option<usize>>>,
    inverse: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn new(
        names: Vec<String>,
        unit: Vec<bool>,
        source: Vec<usize>,
        range: Vec<usize>,
        product: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, BisectError> {
        let n = names.len();
        if n == 0 {
            return Err(BisectError::BadShape("empty element list".into()));
        }
        if unit.len() != n || source.len() != n || range.len() != n || product.len() != n {
            return Err(BisectError::BadShape("field lengths disagree".into()));
        }
        for a in 0..n {
            if source[a] >= n || range[a] >= n || product[a].len() != n {
                return Err(BisectError::BadShape(format!("row {a} malformed")));
            }
            if !unit[source[a]] || !unit[range[a]] {
                return Err(BisectError::Axiom(format!(
                    "source or range of {a} is not a unit"
                )));
            }
        }
        for x in 0..n {
            if unit[x] && (source[x] != x || range[x] != x) {
                return Err(BisectError::Axiom(format!("unit {x} must be its own source and range")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                match product[a][b] {
                    Some(c) => {
                        if source[a] != range[b] {
                            return Err(BisectError::Axiom(format!(
                                "product ({a}, {b}) defined but not composable"
                            )));
                        }
                        if c >= n || source[c] != source[b] || range[c] != range[a] {
                            return Err(BisectError::Axiom(format!(
                                "product ({a}, {b}) has wrong source or range"
                            )));
                        }
                    }
                    None => {
                        if source[a] == range[b] {
                            return Err(BisectError::Axiom(format!(
                                "composable pair ({a}, {b}) has no product"
                            )));
                        }
                    }
                }
            }
        }
        for a in 0..n {
            let (d, r) = (source[a], range[a]);
            if product[a][d] != Some(a) || product[r][a] != Some(a) {
                return Err(BisectError::Axiom(format!("units do not absorb at {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if let (Some(ab), Some(bc)) = (product[a][b], product[b][c]) {
                        if product[ab][c] != product[a][bc] {
                            return Err(BisectError::Axiom(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| product[b][a] == Some(source[a]) && product[a][b] == Some(range[a]))
                    .ok_or_else(|| BisectError::Axiom(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroupoid {
            names,
            unit,
            source,
            range,
            product,
            inverse,
        })
    }

    pub fn from_doc(doc: GroupoidDoc) -> Result<Self, BisectError> {
        FiniteGroupoid::new(doc.names, doc.unit, doc.source, doc.range, doc.product)
    }

    pub fn from_json(json: &str) -> Result<Self, BisectError> {
        let doc: GroupoidDoc =
            serde_json::from_str(json).map_err(|e| BisectError::Json(e.to_string()))?;
        FiniteGroupoid::from_doc(doc)
    }

    pub fn to_doc(&self) -> GroupoidDoc {
        GroupoidDoc {
            names: self.names.clone(),
            unit: self.unit.clone(),
            source: self.source.clone(),
            range: self.range.clone(),
            product: self.product.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("groupoid doc serializes")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.unit[a]
    }

    pub fn units(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.unit[a]).collect()
    }

    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }

    pub fn range(&self, a: usize) -> usize {
        self.range[a]
    }

    pub fn product(&self, a: usize, b: usize) -> Option<usize> {
        self.product[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Source and range restricted to the subset are injective.
    pub fn is_bisection(&self, u: &Bitset) -> bool {
        let mut seen_d = Bitset::new(self.len());
        let mut seen_r = Bitset::new(self.len());
        for a in u.iter() {
            if seen_d.contains(self.source[a]) || seen_r.contains(self.range[a]) {
                return false;
            }
            seen_d.insert(self.source[a]);
            seen_r.insert(self.range[a]);
        }
        true
    }

    pub fn is_wide_subgroupoid(&self, h: &Bitset) -> bool {
        for x in self.units() {
            if !h.contains(x) {
                return false;
            }
        }
        for a in h.iter() {
            if !h.contains(self.inverse[a]) {
                return false;
            }
            for b in h.iter() {
                if let Some(c) = self.product[a][b] {
                    if !h.contains(c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn enumerate_wide_subgroupoids(&self) -> Result<Vec<Bitset>, TooLarge> {
        let rest: Vec<usize> = (0..self.len()).filter(|&a| !self.unit[a]).collect();
        if rest.len() > 24 {
            return Err(TooLarge {
                what: "non-unit elements",
                count: rest.len(),
                limit: 24,
            });
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << rest.len()) {
            let mut h = Bitset::from_indices(self.len(), self.units());
            for (bit, &a) in rest.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    h.insert(a);
                }
            }
            if self.is_wide_subgroupoid(&h) {
                out.push(h);
            }
        }
        Ok(out)
    }
}

/// The pair groupoid on `k` points: one arrow between any ordered pair of
/// units.
pub fn pair_groupoid(k: usize) -> FiniteGroupoid {
    let idx = |i: usize, j: usize| i * k + j;
    let n = k * k;
    let names = (0..k)
        .flat_map(|i| (0..k).map(move |j| format!("{i}<-{j}")))
        .collect();
    let unit = (0..k).flat_map(|i| (0..k).map(move |j| i == j)).collect();
    let source = (0..k).flat_map(|_| (0..k).map(|j| idx(j, j))).collect::<Vec<_>>();
    let range = (0..k).flat_map(|i| (0..k).map(move |_| idx(i, i))).collect::<Vec<_>>();
    let mut product = vec![vec![None; n]; n];
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                product[idx(i, j)][idx(j, l)] = Some(idx(i, l));
            }
        }
    }
    FiniteGroupoid::new(names, unit, source, range, product).expect("pair groupoid is a groupoid")
}

/// The groupoid with `k` units and nothing else.
pub fn unit_groupoid(k: usize) -> FiniteGroupoid {
    let names = (0..k).map(|i| format!("u{i}")).collect();
    let product = (0..k)
        .map(|a| (0..k).map(|b| (a == b).then_some(a)).collect())
        .collect();
    FiniteGroupoid::new(
        names,
        vec![true; k],
        (0..k).collect(),
        (0..k).collect(),
        product,
    )
    .expect("unit groupoid is a groupoid")
}

/// Materializes the germ groupoid of a finite action as a table groupoid.
pub fn from_germ_groupoid(gg: &FiniteGermGroupoid) -> FiniteGroupoid {
    let n = gg.len();
    let sg = gg.action().semigroup();
    let names = (0..n)
        .map(|g| {
            let fg = gg.germs()[g];
            format!("[{}|{}]", sg.name(fg.rep), fg.base)
        })
        .collect();
    let unit = (0..n).map(|g| gg.is_unit(g)).collect();
    let source = (0..n).map(|g| gg.unit_at(gg.source(g))).collect();
    let range = (0..n).map(|g| gg.unit_at(gg.range(g))).collect();
    let product = (0..n)
        .map(|a| (0..n).map(|b| gg.mul(a, b).ok()).collect())
        .collect();
    FiniteGroupoid::new(names, unit, source, range, product)
        .expect("germ groupoids satisfy the axioms")
}

/// The inverse semigroup of all bisections of a finite groupoid, with the
/// subset product, packaged as a validated table. Bisections are sorted by
/// (size, membership), so the empty bisection is the zero at index 0.
pub struct BisectionMonoid<'g> {
    groupoid: &'g FiniteGroupoid,
    pub semigroup: InverseSemigroup,
    pub bisections: Vec<Bitset>,
}

impl<'g> BisectionMonoid<'g> {
    pub fn new(groupoid: &'g FiniteGroupoid) -> Result<Self, BisectError> {
        if groupoid.len() > 8 {
            return Err(BisectError::TooLarge(TooLarge {
                what: "groupoid elements",
                count: groupoid.len(),
                limit: 8,
            }));
        }
        let n = groupoid.len();
        let mut bisections: Vec<Bitset> = Vec::new();
        for mask in 0u32..(1 << n) {
            let u = Bitset::from_indices(n, (0..n).filter(|&a| mask >> a & 1 == 1));
            if groupoid.is_bisection(&u) {
                bisections.push(u);
            }
        }
        bisections.sort_by_key(|u| (u.count(), u.clone()));

        let product_set = |u: &Bitset, v: &Bitset| -> Bitset {
            let mut w = Bitset::new(n);
            for a in u.iter() {
                for b in v.iter() {
                    if let Some(c) = groupoid.product(a, b) {
                        w.insert(c);
                    }
                }
            }
            w
        };
        let index_of = |w: &Bitset, all: &[Bitset]| -> usize {
            all.iter()
                .position(|u| u == w)
                .expect("products of bisections are bisections")
        };
        let count = bisections.len();
        let mult: Vec<Vec<usize>> = (0..count)
            .map(|i| {
                (0..count)
                    .map(|j| index_of(&product_set(&bisections[i], &bisections[j]), &bisections))
                    .collect()
            })
            .collect();
        let star: Vec<usize> = (0..count)
            .map(|i| {
                let inv = Bitset::from_indices(
                    n,
                    bisections[i].iter().map(|a| groupoid.inverse(a)),
                );
                index_of(&inv, &bisections)
            })
            .collect();
        let names = bisections
            .iter()
            .map(|u| {
                if u.is_empty() {
                    "{}".to_string()
                } else {
                    format!(
                        "{{{}}}",
                        u.iter().map(|a| groupoid.name(a)).collect::<Vec<_>>().join(",")
                    )
                }
            })
            .collect();
        let semigroup = InverseSemigroup::new(names, 0, mult, Some(star))
            .map_err(|e| BisectError::BadShape(format!("bisection table: {e}")))?;
        Ok(BisectionMonoid {
            groupoid,
            semigroup,
            bisections,
        })
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        self.groupoid
    }

    pub fn len(&self) -> usize {
        self.bisections.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, u: &Bitset) -> Option<usize> {
        self.bisections.iter().position(|v| v == u)
    }

    /// The semigroup order coincides with inclusion of bisections.
    pub fn order_is_inclusion(&self) -> bool {
        (0..self.len()).all(|i| {
            (0..self.len()).all(|j| {
                self.semigroup.le(i, j) == self.bisections[i].is_subset(&self.bisections[j])
            })
        })
    }

    /// Join of a compatible pair: the union. Errors when the pair is not
    /// compatible in the semigroup sense.
    pub fn join(&self, i: usize, j: usize) -> Result<usize, BisectError> {
        if !self.semigroup.compatible(i, j) {
            return Err(BisectError::NotCompatible);
        }
        let union = self.bisections[i].union(&self.bisections[j]);
        Ok(self.index_of(&union).expect("compatible unions are bisections"))
    }

    /// Semigroup-level join-closedness: every compatible pair inside has
    /// its join inside.
    pub fn is_join_closed_subsemigroup(&self, t: &Bitset) -> bool {
        for i in t.iter() {
            for j in t.iter() {
                if self.semigroup.compatible(i, j) {
                    let union = self.bisections[i].union(&self.bisections[j]);
                    let k = self.index_of(&union).expect("compatible unions are bisections");
                    if !t.contains(k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The translation action of bisections on the unit space: a bisection
    /// carries the source of each of its arrows to the range.
    pub fn translation_action(&self) -> FiniteAction {
        let units = self.groupoid.units();
        let point_of = |u: usize| units.iter().position(|&x| x == u).expect("unit");
        let maps = self
            .bisections
            .iter()
            .map(|b| {
                let mut map = vec![None; units.len()];
                for a in b.iter() {
                    map[point_of(self.groupoid.source(a))] =
                        Some(point_of(self.groupoid.range(a)));
                }
                map
            })
            .collect();
        FiniteAction::new(self.semigroup.clone(), units.len(), maps)
            .expect("bisections act on the unit space")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    pub groupoid_size: usize,
    pub bisections: usize,
    pub germ_groupoid_size: usize,
    pub translation_strongly_tight: bool,
    pub choice_independent: bool,
    pub mutually_inverse: bool,
    pub multiplicative: bool,
    pub preserves_inverses: bool,
    pub preserves_units: bool,
    pub verdict: bool,
}

/// Rebuilds the groupoid from its bisection monoid acting on the unit
/// space: the arrow-to-germ map and its inverse are checked to be mutually
/// inverse groupoid isomorphisms, with the germ independent of the chosen
/// enclosing bisection.
pub fn reconstruction_iso(groupoid: &FiniteGroupoid) -> Result<ReconstructionReport, BisectError> {
    let monoid = BisectionMonoid::new(groupoid)?;
    let action = monoid.translation_action();
    let translation_strongly_tight = action.is_strongly_tight();
    let gg = FiniteGermGroupoid::new(&action);
    let units = groupoid.units();
    let point_of = |u: usize| units.iter().position(|&x| x == u).expect("unit");

    // the arrow-to-germ map, using the singleton bisection
    let phi = |alpha: usize| -> usize {
        let singleton = Bitset::from_indices(groupoid.len(), [alpha]);
        let u = monoid.index_of(&singleton).expect("singletons are bisections");
        gg.germ(u, point_of(groupoid.source(alpha))).expect("source lies in domain")
    };

    // independence of the choice: every bisection containing the arrow
    // gives the same germ
    let mut choice_independent = true;
    for alpha in 0..groupoid.len() {
        for (u, b) in monoid.bisections.iter().enumerate() {
            if b.contains(alpha) {
                let g = gg
                    .germ(u, point_of(groupoid.source(alpha)))
                    .expect("source lies in domain");
                if g != phi(alpha) {
                    choice_independent = false;
                }
            }
        }
    }

    // the inverse map: a germ picks the unique arrow of its representative
    // bisection with the right source
    let psi = |g: usize| -> usize {
        let fg = gg.germs()[g];
        let b = &monoid.bisections[fg.rep];
        b.iter()
            .find(|&a| point_of(groupoid.source(a)) == fg.base)
            .expect("representative bisection covers the base")
    };

    let mutually_inverse = (0..groupoid.len()).all(|a| psi(phi(a)) == a)
        && (0..gg.len()).all(|g| phi(psi(g)) == g)
        && gg.len() == groupoid.len();
    let mut multiplicative = true;
    for a in 0..groupoid.len() {
        for b in 0..groupoid.len() {
            let lhs = groupoid.product(a, b).map(&phi);
            let rhs = gg.mul(phi(a), phi(b)).ok();
            if lhs != rhs {
                multiplicative = false;
            }
        }
    }
    let preserves_inverses = (0..groupoid.len()).all(|a| phi(groupoid.inverse(a)) == gg.inv(phi(a)));
    let preserves_units = (0..groupoid.len()).all(|a| groupoid.is_unit(a) == gg.is_unit(phi(a)));
    let verdict = translation_strongly_tight
        && choice_independent
        && mutually_inverse
        && multiplicative
        && preserves_inverses
        && preserves_units;
    Ok(ReconstructionReport {
        groupoid_size: groupoid.len(),
        bisections: monoid.len(),
        germ_groupoid_size: gg.len(),
        translation_strongly_tight,
        choice_independent,
        mutually_inverse,
        multiplicative,
        preserves_inverses,
        preserves_units,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct JoinClosedReport {
    pub wide_subsemigroups: usize,
    pub join_closed: usize,
    pub lemma_agreement: bool,
    pub wide_subgroupoids: usize,
    pub union_map_bijective: bool,
    pub round_trips: bool,
    pub verdict: bool,
}

/// For every wide subsemigroup of the bisection monoid, checks that
/// semigroup join-closedness agrees with join-closedness relative to the
/// translation action, and that taking unions is a bijection from the
/// join-closed ones onto the wide subgroupoids (all of which are open and
/// closed here).
pub fn join_closed_correspondence(
    groupoid: &FiniteGroupoid,
) -> Result<JoinClosedReport, BisectError> {
    if groupoid.len() > 6 {
        return Err(BisectError::TooLarge(TooLarge {
            what: "groupoid elements",
            count: groupoid.len(),
            limit: 6,
        }));
    }
    let monoid = BisectionMonoid::new(groupoid)?;
    let action = monoid.translation_action();
    let wide = monoid.semigroup.enumerate_wide_subsemigroups()?;
    let mut lemma_agreement = true;
    let mut join_closed = Vec::new();
    for t in &wide {
        let semigroup_level = monoid.is_join_closed_subsemigroup(t);
        let action_level = germ::is_join_closed(&action, t)
            .map_err(|e| BisectError::BadShape(format!("join closedness: {e}")))?;
        if semigroup_level != action_level {
            lemma_agreement = false;
        }
        if semigroup_level {
            join_closed.push(t.clone());
        }
    }

    let subgroupoids = groupoid.enumerate_wide_subgroupoids()?;
    let union_of = |t: &Bitset| -> Bitset {
        let mut h = Bitset::new(groupoid.len());
        for i in t.iter() {
            h = h.union(&monoid.bisections[i]);
        }
        h
    };
    let mut images: Vec<Bitset> = join_closed.iter().map(&union_of).collect();
    images.sort();
    images.dedup();
    let mut targets = subgroupoids.clone();
    targets.sort();
    let union_map_bijective =
        images == targets && images.len() == join_closed.len();
    // round trip: a join-closed subsemigroup is recovered from its union as
    // the bisections lying inside it
    let round_trips = join_closed.iter().all(|t| {
        let h = union_of(t);
        let back = Bitset::from_indices(
            monoid.len(),
            (0..monoid.len()).filter(|&i| monoid.bisections[i].is_subset(&h)),
        );
        back == *t
    });
    let verdict = lemma_agreement && union_map_bijective && round_trips;
    Ok(JoinClosedReport {
        wide_subsemigroups: wide.len(),
        join_closed: join_closed.len(),
        lemma_agreement,
        wide_subgroupoids: subgroupoids.len(),
        union_map_bijective,
        round_trips,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::natural_action;

    #[test]
    fn pair_groupoid_bisections() {
        let g = pair_groupoid(2);
        assert_eq!(g.len(), 4);
        let monoid = BisectionMonoid::new(&g).unwrap();
        // empty, four singletons, the identity, the flip
        assert_eq!(monoid.len(), 7);
        assert_eq!(monoid.semigroup.idempotents().count(), 4);
        assert!(monoid.order_is_inclusion());
    }

    #[test]
    fn unit_groupoid_bisections() {
        let g = unit_groupoid(2);
        let monoid = BisectionMonoid::new(&g).unwrap();
        assert_eq!(monoid.len(), 4);
        assert!(monoid.semigroup.is_semilattice());
    }

    #[test]
    fn product_with_inverse_is_idempotent() {
        let g = pair_groupoid(2);
        let monoid = BisectionMonoid::new(&g).unwrap();
        let sg = &monoid.semigroup;
        for u in 0..monoid.len() {
            assert!(sg.is_idempotent(sg.mul(u, sg.star(u))));
        }
    }

    #[test]
    fn compatibility_iff_union_is_bisection() {
        let g = pair_groupoid(2);
        let monoid = BisectionMonoid::new(&g).unwrap();
        for i in 0..monoid.len() {
            for j in 0..monoid.len() {
                let union = monoid.bisections[i].union(&monoid.bisections[j]);
                assert_eq!(
                    monoid.semigroup.compatible(i, j),
                    g.is_bisection(&union),
                    "{i} {j}"
                );
            }
        }
    }

    #[test]
    fn join_examples() {
        let g = pair_groupoid(2);
        let monoid = BisectionMonoid::new(&g).unwrap();
        let by_name = |n: &str| monoid.semigroup.index_of(n).unwrap();
        let u0 = by_name("{0<-0}");
        let u1 = by_name("{1<-1}");
        let joined = monoid.join(u0, u1).unwrap();
        assert_eq!(monoid.semigroup.name(joined), "{0<-0,1<-1}");
        assert_eq!(monoid.join(u0, u0).unwrap(), u0);
        // same source, different ranges: incompatible
        let a = by_name("{0<-1}");
        let b = by_name("{1<-1}");
        assert_eq!(monoid.join(a, b), Err(BisectError::NotCompatible));
    }

    #[test]
    fn translation_action_examples() {
        let g = pair_groupoid(2);
        let monoid = BisectionMonoid::new(&g).unwrap();
        let action = monoid.translation_action();
        assert!(action.is_strongly_tight());
        let flip = monoid.semigroup.index_of("{0<-1,1<-0}").unwrap();
        assert_eq!(action.apply(flip, 0), Ok(1));
        assert_eq!(action.apply(flip, 1), Ok(0));
        // unit-set bisections act as identities on their points
        let u0 = monoid.semigroup.index_of("{0<-0}").unwrap();
        assert_eq!(action.apply(u0, 0), Ok(0));
        assert!(action.apply(u0, 1).is_err());
    }

    #[test]
    fn reconstruction_of_pair_groupoid() {
        let report = reconstruction_iso(&pair_groupoid(2)).unwrap();
        assert_eq!(report.groupoid_size, 4);
        assert_eq!(report.bisections, 7);
        assert_eq!(report.germ_groupoid_size, 4);
        assert!(report.verdict);
    }

    #[test]
    fn reconstruction_of_unit_groupoid() {
        let report = reconstruction_iso(&unit_groupoid(2)).unwrap();
        assert_eq!(report.groupoid_size, 2);
        assert_eq!(report.bisections, 4);
        assert!(report.verdict);
    }

    #[test]
    fn reconstruction_of_i2_germ_groupoid() {
        let action = natural_action(2);
        let gg = FiniteGermGroupoid::new(&action);
        let g = from_germ_groupoid(&gg);
        assert_eq!(g.len(), 4);
        let report = reconstruction_iso(&g).unwrap();
        assert_eq!(report.bisections, 7);
        assert!(report.verdict);
    }

    #[test]
    fn join_closed_correspondence_pair() {
        let report = join_closed_correspondence(&pair_groupoid(2)).unwrap();
        assert_eq!(report.wide_subsemigroups, 3);
        assert_eq!(report.join_closed, 2);
        assert_eq!(report.wide_subgroupoids, 2);
        assert!(report.lemma_agreement);
        assert!(report.verdict);
    }

    #[test]
    fn join_closed_correspondence_units() {
        let report = join_closed_correspondence(&unit_groupoid(2)).unwrap();
        assert_eq!(report.join_closed, 1);
        assert_eq!(report.wide_subgroupoids, 1);
        assert!(report.verdict);
    }

    #[test]
    fn size_guards() {
        assert!(matches!(
            BisectionMonoid::new(&pair_groupoid(3)).err(),
            Some(BisectError::TooLarge(_))
        ));
        assert!(matches!(
            join_closed_correspondence(&pair_groupoid(3)).err(),
            Some(BisectError::TooLarge(_))
        ));
    }

    #[test]
    fn groupoid_doc_round_trip() {
        let g = pair_groupoid(2);
        let json = g.to_json();
        let back = FiniteGroupoid::from_json(&json).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn bad_groupoids_rejected() {
        // product defined on a non-composable pair
        let mut doc = pair_groupoid(2).to_doc();
        doc.product[1][1] = Some(0);
        assert!(matches!(
            FiniteGroupoid::from_doc(doc),
            Err(BisectError::Axiom(_))
        ));
        // missing product on a composable pair
        let mut doc = pair_groupoid(2).to_doc();
        doc.product[0][0] = None;
        assert!(matches!(
            FiniteGroupoid::from_doc(doc),
            Err(BisectError::Axiom(_))
        ));
    }
}
