//! Inverse semigroup actions by partial bijections, in the two space models
//! everything else runs on: an explicit finite model (partial injection
//! tables over finitely many points) and the shift model (the polycyclic
//! monoid acting on infinite words by prefix substitution).

use crate::bitset::Bitset;
use crate::clopen::{ClopenSet, Point, Word};
use crate::isg::{partial_injections, symmetric_inverse_monoid, InverseSemigroup, SemigroupDoc};
use crate::polycyclic::{self, PolyElement};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("action shape invalid: {0}")]
    BadShape(String),
    #[error("element {s} acts non-injectively ({x} and {y} collide)")]
    NotInjective { s: usize, x: usize, y: usize },
    #[error("homomorphism law fails at elements ({s}, {t})")]
    HomomorphismLaw { s: usize, t: usize },
    #[error("zero must act nowhere, but acts on point {x}")]
    ZeroActs { x: usize },
    #[error("idempotent domains do not cover point {x}")]
    DomainsDontCover { x: usize },
    #[error("element {e} is not idempotent")]
    NotIdempotent { e: usize },
    #[error("point {x} is outside the domain of element {s}")]
    OutOfDomain { s: usize, x: usize },
    #[error("declared domain of {e} disagrees with its map")]
    DomainMismatch { e: usize },
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShiftActionError {
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("point is outside the domain")]
    OutOfDomain,
    #[error("alphabet sizes differ: {left} vs {right}")]
    AlphabetMismatch { left: u8, right: u8 },
}

/// JSON document for a finite action.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionDoc {
    pub semigroup: SemigroupDoc,
    pub points: usize,
    /// Domain of each idempotent, keyed by stringified element index.
    pub domains: BTreeMap<String, Vec<usize>>,
    /// Partial map of each element, keyed by stringified element index.
    pub maps: BTreeMap<String, BTreeMap<String, usize>>,
}

/// An action of a finite inverse semigroup on a finite discrete space,
/// given by one partial injection per element. Construction validates the
/// homomorphism law exhaustively, that zero acts nowhere, and that the
/// idempotent domains cover the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAction {
    sg: InverseSemigroup,
    points: usize,
    maps: Vec<Vec<Option<usize>>>,
}

fn compose(a: &[Option<usize>], b: &[Option<usize>]) -> Vec<Option<usize>> {
    b.iter().map(|&y| y.and_then(|y| a[y])).collect()
}

impl FiniteAction {
    pub fn new(
        sg: InverseSemigroup,
        points: usize,
        maps: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, ActionError> {
        if maps.len() != sg.len() {
            return Err(ActionError::BadShape(format!(
                "{} maps for {} elements",
                maps.len(),
                sg.len()
            )));
        }
        for (s, map) in maps.iter().enumerate() {
            if map.len() != points {
                return Err(ActionError::BadShape(format!(
                    "map {s} has {} entries for {points} points",
                    map.len()
                )));
            }
            for &y in map.iter().flatten() {
                if y >= points {
                    return Err(ActionError::BadShape(format!("map {s} hits point {y}")));
                }
            }
            for x in 0..points {
                for y in x + 1..points {
                    if map[x].is_some() && map[x] == map[y] {
                        return Err(ActionError::NotInjective { s, x, y });
                    }
                }
            }
        }
        for s in 0..sg.len() {
            for t in 0..sg.len() {
                if compose(&maps[s], &maps[t]) != maps[sg.mul(s, t)] {
                    return Err(ActionError::HomomorphismLaw { s, t });
                }
            }
        }
        if let Some(x) = (0..points).find(|&x| maps[sg.zero()][x].is_some()) {
            return Err(ActionError::ZeroActs { x });
        }
        if let Some(x) = (0..points)
            .find(|&x| !sg.idempotents().iter().any(|e| maps[e][x].is_some()))
        {
            return Err(ActionError::DomainsDontCover { x });
        }
        Ok(FiniteAction { sg, points, maps })
    }

    pub fn semigroup(&self) -> &InverseSemigroup {
        &self.sg
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn map(&self, s: usize) -> &[Option<usize>] {
        &self.maps[s]
    }

    /// Domain of an idempotent, as a point bitmask.
    pub fn domain(&self, e: usize) -> Result<Bitset, ActionError> {
        if !self.sg.is_idempotent(e) {
            return Err(ActionError::NotIdempotent { e });
        }
        Ok(self.domain_of_map(e))
    }

    /// Domain of the partial map of an arbitrary element (equals the domain
    /// of `s*s`).
    pub fn domain_of_map(&self, s: usize) -> Bitset {
        Bitset::from_indices(
            self.points,
            (0..self.points).filter(|&x| self.maps[s][x].is_some()),
        )
    }

    pub fn apply(&self, s: usize, x: usize) -> Result<usize, ActionError> {
        self.maps[s]
            .get(x)
            .copied()
            .flatten()
            .ok_or(ActionError::OutOfDomain { s, x })
    }

    /// Every domain of a finite discrete action is compact by
    /// representation; recorded rather than computed.
    pub fn is_ample(&self) -> bool {
        true
    }

    /// True iff the idempotent domains form a basis: on a finite discrete
    /// space, iff every singleton is some idempotent domain.
    pub fn is_strongly_tight(&self) -> bool {
        (0..self.points).all(|x| {
            self.sg
                .idempotents()
                .iter()
                .any(|e| self.domain_of_map(e) == Bitset::from_indices(self.points, [x]))
        })
    }

    /// True iff every nonzero idempotent has a nonempty domain.
    pub fn domains_nonzero(&self) -> bool {
        self.sg
            .idempotents()
            .iter()
            .filter(|&e| e != self.sg.zero())
            .all(|e| !self.domain_of_map(e).is_empty())
    }

    pub fn from_doc(doc: ActionDoc) -> Result<Self, ActionError> {
        let sg = InverseSemigroup::from_doc(doc.semigroup)
            .map_err(|e| ActionError::BadShape(format!("semigroup: {e}")))?;
        let mut maps = vec![vec![None; doc.points]; sg.len()];
        for (key, entries) in &doc.maps {
            let s: usize = key
                .parse()
                .map_err(|_| ActionError::BadShape(format!("bad map key {key:?}")))?;
            if s >= sg.len() {
                return Err(ActionError::BadShape(format!("map key {s} out of range")));
            }
            for (xk, &y) in entries {
                let x: usize = xk
                    .parse()
                    .map_err(|_| ActionError::BadShape(format!("bad point key {xk:?}")))?;
                if x >= doc.points {
                    return Err(ActionError::BadShape(format!("point {x} out of range")));
                }
                maps[s][x] = Some(y);
            }
        }
        let action = FiniteAction::new(sg, doc.points, maps)?;
        for (key, pts) in &doc.domains {
            let e: usize = key
                .parse()
                .map_err(|_| ActionError::BadShape(format!("bad domain key {key:?}")))?;
            if e >= action.sg.len() || !action.sg.is_idempotent(e) {
                return Err(ActionError::NotIdempotent { e });
            }
            let declared = Bitset::from_indices(action.points, pts.iter().copied());
            if declared != action.domain_of_map(e) {
                return Err(ActionError::DomainMismatch { e });
            }
        }
        Ok(action)
    }

    pub fn from_json(json: &str) -> Result<Self, ActionError> {
        let doc: ActionDoc =
            serde_json::from_str(json).map_err(|e| ActionError::Json(e.to_string()))?;
        FiniteAction::from_doc(doc)
    }

    pub fn to_doc(&self) -> ActionDoc {
        let domains = self
            .sg
            .idempotents()
            .iter()
            .map(|e| (e.to_string(), self.domain_of_map(e).iter().collect()))
            .collect();
        let maps = (0..self.sg.len())
            .map(|s| {
                let entries = (0..self.points)
                    .filter_map(|x| self.maps[s][x].map(|y| (x.to_string(), y)))
                    .collect();
                (s.to_string(), entries)
            })
            .collect();
        ActionDoc {
            semigroup: self.sg.to_doc(),
            points: self.points,
            domains,
            maps,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("action doc serializes")
    }
}

/// The natural action of the symmetric inverse monoid on its points.
pub fn natural_action(points: usize) -> FiniteAction {
    FiniteAction::new(
        symmetric_inverse_monoid(points),
        points,
        partial_injections(points),
    )
    .expect("partial injections act on their own points")
}

/// A strongly tight action with empty nonzero domains: the four-element
/// semilattice `{0, p, q, 1}` acting on a single point through its unit
/// only. The point map `x -> xi_x` fails to hit an ultracharacter here.
pub fn empty_domain_action() -> FiniteAction {
    let sg = InverseSemigroup::new(
        vec!["0".into(), "p".into(), "q".into(), "1".into()],
        0,
        vec![
            vec![0, 0, 0, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 2, 2],
            vec![0, 1, 2, 3],
        ],
        None,
    )
    .expect("semilattice table");
    FiniteAction::new(sg, 1, vec![vec![None], vec![None], vec![None], vec![Some(0)]])
        .expect("unit-only action")
}

/// The two-element semilattice acting on one point.
pub fn one_point_semilattice_action() -> FiniteAction {
    FiniteAction::new(
        crate::isg::two_element_semilattice(),
        1,
        vec![vec![None], vec![Some(0)]],
    )
    .expect("valid action")
}

/// The two-element semilattice acting on two points through its top
/// element; not strongly tight (no singleton is a domain).
pub fn coarse_semilattice_action() -> FiniteAction {
    FiniteAction::new(
        crate::isg::two_element_semilattice(),
        2,
        vec![vec![None, None], vec![Some(0), Some(1)]],
    )
    .expect("valid action")
}

/// The shift action of the polycyclic monoid on infinite words: the element
/// `s_mu s_nu*` maps `nu x` to `mu x`. Domains of idempotents are exactly
/// the cylinders, so the action is strongly tight by representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftAction {
    n: u8,
}

impl ShiftAction {
    pub fn new(n: u8) -> Self {
        assert!(n >= 2, "polycyclic monoid needs at least two generators");
        ShiftAction { n }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn domain(&self, e: &PolyElement) -> Result<ClopenSet, ShiftActionError> {
        match e {
            PolyElement::Zero => Ok(ClopenSet::empty(self.n)),
            PolyElement::Pair(mu, nu) => {
                if mu != nu {
                    return Err(ShiftActionError::NotIdempotent);
                }
                self.check_n(mu)?;
                Ok(ClopenSet::cylinder(mu))
            }
        }
    }

    /// Domain of the partial homeomorphism of an arbitrary element: the
    /// cylinder of `nu` (the domain of `s*s`).
    pub fn domain_of_map(&self, s: &PolyElement) -> ClopenSet {
        match s {
            PolyElement::Zero => ClopenSet::empty(self.n),
            PolyElement::Pair(_, nu) => ClopenSet::cylinder(nu),
        }
    }

    pub fn apply(&self, s: &PolyElement, x: &Point) -> Result<Point, ShiftActionError> {
        if x.n() != self.n {
            return Err(ShiftActionError::AlphabetMismatch {
                left: self.n,
                right: x.n(),
            });
        }
        match s {
            PolyElement::Zero => Err(ShiftActionError::OutOfDomain),
            PolyElement::Pair(mu, nu) => {
                self.check_n(mu)?;
                let tail = x.strip_prefix(nu).ok_or(ShiftActionError::OutOfDomain)?;
                Ok(tail.prepend(mu))
            }
        }
    }

    pub fn is_ample(&self) -> bool {
        true
    }

    /// The idempotent domains are exactly the cylinders, which are a basis;
    /// this holds structurally rather than by bounded search.
    pub fn is_strongly_tight(&self) -> bool {
        true
    }

    pub fn domains_nonzero(&self) -> bool {
        true
    }

    /// Bounded check of the homomorphism law on all element pairs up to the
    /// length bound, evaluated on cylinder sample points to the given depth.
    pub fn check_hom_law(&self, bound: usize, depth: usize) -> bool {
        let elements: Vec<PolyElement> =
            polycyclic::all_elements(self.n, bound).into_iter().collect();
        let samples: Vec<Point> = crate::clopen::words_of_length(self.n, depth)
            .iter()
            .map(|w| {
                Point::new(self.n, w.letters().to_vec(), vec![1]).expect("valid point")
            })
            .collect();
        for a in &elements {
            for b in &elements {
                let ab = polycyclic::mul(a, b).expect("same alphabet");
                for x in &samples {
                    let chained = self.apply(b, x).ok().and_then(|y| self.apply(a, &y).ok());
                    let direct = self.apply(&ab, x).ok();
                    if chained != direct {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn check_n(&self, w: &Word) -> Result<(), ShiftActionError> {
        if w.n() != self.n {
            return Err(ShiftActionError::AlphabetMismatch {
                left: self.n,
                right: w.n(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_action_of_partial_injections() {
        let a = natural_action(2);
        assert!(a.is_ample());
        assert!(a.is_strongly_tight());
        assert!(a.domains_nonzero());
        let sg = a.semigroup();
        let e1 = sg.index_of("1->1").unwrap();
        assert_eq!(a.domain(e1).unwrap(), Bitset::from_indices(2, [0]));
        assert_eq!(a.domain(sg.zero()).unwrap(), Bitset::new(2));
        let shift = sg.index_of("1->2").unwrap();
        assert_eq!(a.apply(shift, 0), Ok(1));
        assert_eq!(a.apply(shift, 1), Err(ActionError::OutOfDomain { s: shift, x: 1 }));
        assert_eq!(a.domain(shift), Err(ActionError::NotIdempotent { e: shift }));
    }

    #[test]
    fn idempotents_act_as_identities() {
        let a = natural_action(3);
        for e in a.semigroup().idempotents().iter() {
            for x in a.domain(e).unwrap().iter() {
                assert_eq!(a.apply(e, x), Ok(x));
            }
        }
    }

    #[test]
    fn hom_law_on_samples() {
        let a = natural_action(3);
        let sg = a.semigroup();
        for s in 0..sg.len() {
            for t in 0..sg.len() {
                for x in 0..a.points() {
                    let chained = a.apply(t, x).ok().and_then(|y| a.apply(s, y).ok());
                    assert_eq!(chained, a.apply(sg.mul(s, t), x).ok());
                }
            }
        }
    }

    #[test]
    fn inverse_undoes_apply() {
        let a = natural_action(3);
        let sg = a.semigroup();
        for s in 0..sg.len() {
            for x in a.domain_of_map(s).iter() {
                let y = a.apply(s, x).unwrap();
                assert_eq!(a.apply(sg.star(s), y), Ok(x));
            }
        }
    }

    #[test]
    fn tightness_counterexample() {
        let a = coarse_semilattice_action();
        assert!(!a.is_strongly_tight());
        assert!(a.domains_nonzero());
    }

    #[test]
    fn empty_domain_action_flags() {
        let a = empty_domain_action();
        assert!(a.is_strongly_tight());
        assert!(!a.domains_nonzero());
    }

    #[test]
    fn broken_hom_law_rejected() {
        // swap the unit's map with a point transposition: composition with
        // the rank-1 idempotents breaks
        let sg = symmetric_inverse_monoid(2);
        let mut maps = partial_injections(2);
        let one = sg.index_of("1").unwrap();
        maps[one] = vec![Some(1), Some(0)];
        let err = FiniteAction::new(sg, 2, maps).unwrap_err();
        assert!(matches!(err, ActionError::HomomorphismLaw { .. }));
    }

    #[test]
    fn action_doc_round_trip() {
        let a = natural_action(2);
        let json = a.to_json();
        let back = FiniteAction::from_json(&json).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn shift_action_domains_are_cylinders() {
        let beta = ShiftAction::new(2);
        let e = PolyElement::parse(2, "1/1").unwrap();
        assert_eq!(beta.domain(&e).unwrap(), ClopenSet::cylinder(&Word::parse(2, "1").unwrap()));
        assert!(beta.domain(&PolyElement::Zero).unwrap().is_empty());
        assert_eq!(
            beta.domain(&PolyElement::parse(2, "1/2").unwrap()),
            Err(ShiftActionError::NotIdempotent)
        );
        assert!(beta.is_strongly_tight() && beta.domains_nonzero() && beta.is_ample());
    }

    #[test]
    fn shift_action_prefix_substitution() {
        let beta = ShiftAction::new(2);
        let s = PolyElement::parse(2, "1/2").unwrap();
        let x = Point::parse(2, "(2)").unwrap();
        assert_eq!(beta.apply(&s, &x).unwrap(), Point::parse(2, "1(2)").unwrap());

        let t = PolyElement::parse(2, "12/21").unwrap();
        let y = Point::parse(2, "21(1)").unwrap();
        assert_eq!(beta.apply(&t, &y).unwrap(), Point::parse(2, "12(1)").unwrap());

        let e = PolyElement::parse(2, "2/2").unwrap();
        assert_eq!(beta.apply(&e, &x).unwrap(), x);

        assert_eq!(
            beta.apply(&s, &Point::parse(2, "(1)").unwrap()),
            Err(ShiftActionError::OutOfDomain)
        );
    }

    #[test]
    fn shift_hom_law_bounded() {
        assert!(ShiftAction::new(2).check_hom_law(2, 3));
    }
}
