//! Characters of the idempotent semilattice of a finite inverse semigroup:
//! proper filters, ultracharacters, the spectral action, and the point map
//! `x -> xi_x` that identifies a strongly tight action with the action on
//! ultracharacters.
//!
//! On a finite semilattice the pointwise-convergence topology is discrete,
//! so the tight characters are computed to be exactly the ultracharacters;
//! the infinite phenomena are made visible as growth tables over truncated
//! families instead.

use crate::action::FiniteAction;
use crate::bitset::Bitset;
use crate::clopen::Point;
use crate::germ::FiniteGermGroupoid;
use crate::isg::{InverseSemigroup, TooLarge};
use crate::polycyclic::PolyElement;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("the table is not a semilattice (element {s} is not idempotent)")]
    NotSemilattice { s: usize },
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
}

/// A character on the idempotent semilattice, stored as its filter: the
/// upward-closed, meet-closed set of idempotents it sends to 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    filter: Bitset,
}

impl Character {
    pub fn filter(&self) -> &Bitset {
        &self.filter
    }

    pub fn value(&self, e: usize) -> bool {
        self.filter.contains(e)
    }

    /// Pointwise order on characters: containment of filters.
    pub fn dominated_by(&self, other: &Character) -> bool {
        self.filter.is_subset(&other.filter)
    }
}

/// Proper-filter axioms: nonempty, excludes zero, closed under meets,
/// upward closed.
pub fn is_proper_filter(sg: &InverseSemigroup, set: &Bitset) -> bool {
    if set.is_empty() || set.contains(sg.zero()) {
        return false;
    }
    for e in set.iter() {
        if !sg.is_idempotent(e) {
            return false;
        }
        for f in set.iter() {
            if !set.contains(sg.mul(e, f)) {
                return false;
            }
        }
        for f in sg.idempotents().iter() {
            if sg.le(e, f) && !set.contains(f) {
                return false;
            }
        }
    }
    true
}

/// All characters on the idempotent semilattice, i.e. all proper filters,
/// in canonical order.
pub fn characters(sg: &InverseSemigroup) -> Result<Vec<Character>, SpectrumError> {
    let nonzero: Vec<usize> = sg
        .idempotents()
        .iter()
        .filter(|&e| e != sg.zero())
        .collect();
    if nonzero.len() > 20 {
        return Err(SpectrumError::TooLarge(TooLarge {
            what: "nonzero idempotents",
            count: nonzero.len(),
            limit: 20,
        }));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << nonzero.len()) {
        let set = Bitset::from_indices(
            sg.len(),
            nonzero
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e),
        );
        if is_proper_filter(sg, &set) {
            out.push(Character { filter: set });
        }
    }
    out.sort();
    Ok(out)
}

/// The maximal characters.
pub fn ultracharacters(sg: &InverseSemigroup) -> Result<Vec<Character>, SpectrumError> {
    let all = characters(sg)?;
    Ok(all
        .iter()
        .filter(|xi| !all.iter().any(|eta| eta != *xi && xi.dominated_by(eta)))
        .cloned()
        .collect())
}

/// Closure of the ultracharacters in the pointwise topology. A finite
/// character space is discrete, so this is computed to be the
/// ultracharacter set itself, and that identity is asserted.
pub fn tight_characters(sg: &InverseSemigroup) -> Result<Vec<Character>, SpectrumError> {
    let ultra = ultracharacters(sg)?;
    // discrete closure: a character is a limit of ultracharacters iff it is
    // one of them
    let closure: Vec<Character> = characters(sg)?
        .into_iter()
        .filter(|xi| ultra.contains(xi))
        .collect();
    assert_eq!(closure, ultra, "finite spectra are discrete");
    Ok(closure)
}

/// The spectral action of a finite inverse semigroup on its character
/// space: `s` moves a character supported at `s*s` by conjugation,
/// `(beta_s xi)(e) = xi(s* e s)`. Construction revalidates the action
/// axioms exhaustively.
pub fn spectral_action(sg: &InverseSemigroup) -> Result<FiniteAction, SpectrumError> {
    let chars = characters(sg)?;
    let index_of = |c: &Character| chars.binary_search(c).expect("image is a character");
    let mut maps = Vec::with_capacity(sg.len());
    for s in 0..sg.len() {
        let ss = sg.mul(sg.star(s), s);
        let map = chars
            .iter()
            .map(|xi| {
                if !xi.value(ss) {
                    return None;
                }
                let moved = Bitset::from_indices(
                    sg.len(),
                    sg.idempotents()
                        .iter()
                        .filter(|&e| xi.value(sg.mul(sg.mul(sg.star(s), e), s))),
                );
                Some(index_of(&Character { filter: moved }))
            })
            .collect();
        maps.push(map);
    }
    FiniteAction::new(sg.clone(), chars.len(), maps)
        .map_err(|e| SpectrumError::HypothesisFailed(format!("spectral action invalid: {e}")))
}

/// The character of a point: the filter of idempotents whose domain
/// contains it. Always a proper filter; not necessarily maximal when some
/// nonzero idempotent acts with empty domain.
pub fn point_character(action: &FiniteAction, x: usize) -> Character {
    let sg = action.semigroup();
    let filter = Bitset::from_indices(
        sg.len(),
        sg.idempotents()
            .iter()
            .filter(|&e| action.apply(e, x).is_ok()),
    );
    Character { filter }
}

pub fn is_ultracharacter(sg: &InverseSemigroup, xi: &Character) -> Result<bool, SpectrumError> {
    let all = characters(sg)?;
    Ok(all.iter().all(|eta| eta == xi || !xi.dominated_by(eta)))
}

/// The point map `x -> xi_x` under the theorem's hypotheses; fails with the
/// reason when the action is not strongly tight or some nonzero idempotent
/// domain is empty (then `xi_x` can fail to be maximal).
pub fn xi_of_point(action: &FiniteAction, x: usize) -> Result<Character, SpectrumError> {
    if !action.is_strongly_tight() {
        return Err(SpectrumError::HypothesisFailed(
            "action is not strongly tight".into(),
        ));
    }
    if !action.domains_nonzero() {
        return Err(SpectrumError::HypothesisFailed(
            "some nonzero idempotent has empty domain".into(),
        ));
    }
    let xi = point_character(action, x);
    assert!(
        is_ultracharacter(action.semigroup(), &xi)?,
        "xi_x is maximal under the hypotheses"
    );
    Ok(xi)
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterizationReport {
    pub points: usize,
    pub ultracharacters: usize,
    pub point_map_bijective: bool,
    pub domains_match: bool,
    pub spectrum_invariant: bool,
    pub germ_map_well_defined: bool,
    pub germ_map_bijective: bool,
    pub germ_map_multiplicative: bool,
    pub verdict: bool,
}

/// Exhaustive verification that `x -> xi_x` is a bijection onto the
/// ultracharacters carrying each idempotent domain onto its spectral
/// counterpart, and that `[s, x] -> [s, xi_x]` is a groupoid isomorphism
/// onto the germ groupoid of the spectral action restricted to
/// ultracharacters.
pub fn verify_characterization(
    action: &FiniteAction,
) -> Result<CharacterizationReport, SpectrumError> {
    if !action.is_strongly_tight() {
        return Err(SpectrumError::HypothesisFailed(
            "action is not strongly tight".into(),
        ));
    }
    if !action.domains_nonzero() {
        return Err(SpectrumError::HypothesisFailed(
            "some nonzero idempotent has empty domain".into(),
        ));
    }
    let sg = action.semigroup();
    let ultra = ultracharacters(sg)?;
    let full = spectral_action(sg)?;
    let full_chars = characters(sg)?;

    // the ultracharacters are invariant under the spectral action
    let mut spectrum_invariant = true;
    for s in 0..sg.len() {
        for (i, xi) in full_chars.iter().enumerate() {
            if let Ok(j) = full.apply(s, i) {
                if ultra.contains(xi) != ultra.contains(&full_chars[j]) {
                    // moving between maximal and non-maximal characters
                    // would break the restriction
                    if ultra.contains(xi) {
                        spectrum_invariant = false;
                    }
                }
            }
        }
    }

    // restrict the spectral action to the ultracharacters
    let restricted_maps: Vec<Vec<Option<usize>>> = (0..sg.len())
        .map(|s| {
            ultra
                .iter()
                .map(|xi| {
                    let i = full_chars.binary_search(xi).expect("ultra is a character");
                    full.apply(s, i).ok().map(|j| {
                        ultra
                            .iter()
                            .position(|eta| eta == &full_chars[j])
                            .expect("invariance")
                    })
                })
                .collect()
        })
        .collect();
    let theta = FiniteAction::new(sg.clone(), ultra.len(), restricted_maps)
        .map_err(|e| SpectrumError::HypothesisFailed(format!("restricted action invalid: {e}")))?;

    // the point map, its bijectivity, and the domain match
    let xi_index: Vec<usize> = (0..action.points())
        .map(|x| {
            let xi = point_character(action, x);
            ultra.iter().position(|eta| eta == &xi).expect("xi_x is maximal")
        })
        .collect();
    let mut seen = vec![false; ultra.len()];
    for &i in &xi_index {
        seen[i] = true;
    }
    let point_map_bijective =
        action.points() == ultra.len() && seen.iter().all(|&b| b);

    let mut domains_match = true;
    for e in sg.idempotents().iter() {
        let image: Bitset = Bitset::from_indices(
            ultra.len(),
            action.domain_of_map(e).iter().map(|x| xi_index[x]),
        );
        let spectral: Bitset = Bitset::from_indices(
            ultra.len(),
            (0..ultra.len()).filter(|&i| theta.apply(e, i).is_ok()),
        );
        if image != spectral {
            domains_match = false;
        }
    }

    // the induced germ map
    let gg = FiniteGermGroupoid::new(action);
    let hh = FiniteGermGroupoid::new(&theta);
    let map_germ = |g: usize| -> usize {
        let fg = gg.germs()[g];
        hh.germ(fg.rep, xi_index[fg.base]).expect("xi_x lies in the domain")
    };
    let mut germ_map_well_defined = true;
    for s in 0..sg.len() {
        for x in action.domain_of_map(s).iter() {
            let g = gg.germ(s, x).expect("in domain");
            let h = hh.germ(s, xi_index[x]).expect("in domain");
            if map_germ(g) != h {
                germ_map_well_defined = false;
            }
        }
    }
    let mut image: Vec<usize> = (0..gg.len()).map(map_germ).collect();
    image.sort();
    image.dedup();
    let germ_map_bijective = image.len() == gg.len() && gg.len() == hh.len();
    let mut germ_map_multiplicative = true;
    for g in 0..gg.len() {
        if map_germ(gg.inv(g)) != hh.inv(map_germ(g)) {
            germ_map_multiplicative = false;
        }
        for k in 0..gg.len() {
            let lhs = gg.mul(g, k).ok().map(&map_germ);
            let rhs = hh.mul(map_germ(g), map_germ(k)).ok();
            if lhs != rhs {
                germ_map_multiplicative = false;
            }
        }
    }

    let verdict = point_map_bijective
        && domains_match
        && spectrum_invariant
        && germ_map_well_defined
        && germ_map_bijective
        && germ_map_multiplicative;
    Ok(CharacterizationReport {
        points: action.points(),
        ultracharacters: ultra.len(),
        point_map_bijective,
        domains_match,
        spectrum_invariant,
        germ_map_well_defined,
        germ_map_bijective,
        germ_map_multiplicative,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCounts {
    pub characters: usize,
    pub ultra: usize,
    pub tight: usize,
    pub tight_equals_ultra: bool,
}

pub fn spectrum_counts(sg: &InverseSemigroup) -> Result<SpectrumCounts, SpectrumError> {
    let all = characters(sg)?;
    let ultra = ultracharacters(sg)?;
    let tight = tight_characters(sg)?;
    Ok(SpectrumCounts {
        characters: all.len(),
        ultra: ultra.len(),
        tight: tight.len(),
        tight_equals_ultra: tight == ultra,
    })
}

/// The orthogonal family at truncation `n_gens`: generators `p_1, ...,
/// p_N` with `p_i p_j = 0` for `i != j`, optionally with a unit adjoined.
pub fn orthogonal_family(n_gens: usize, with_unit: bool) -> InverseSemigroup {
    let n = 1 + n_gens + usize::from(with_unit);
    let unit = n - 1;
    let mut names = vec!["0".to_string()];
    names.extend((1..=n_gens).map(|i| format!("p{i}")));
    if with_unit {
        names.push("1".to_string());
    }
    let mut mult = vec![vec![0; n]; n];
    for (i, row) in mult.iter_mut().enumerate().take(n_gens + 1).skip(1) {
        row[i] = i;
    }
    if with_unit {
        mult[unit] = (0..n).collect();
        for (a, row) in mult.iter_mut().enumerate() {
            row[unit] = a;
        }
    }
    InverseSemigroup::new(names, 0, mult, None).expect("orthogonal family is a semilattice")
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthRow {
    pub truncation: usize,
    pub characters: usize,
    pub ultra: usize,
    pub tight: usize,
}

/// Spectrum counts of the orthogonal family as the truncation grows; the
/// infinite-limit behavior shows up as the trend of these rows.
pub fn growth_table(max_n: usize, with_unit: bool) -> Result<Vec<GrowthRow>, SpectrumError> {
    (1..=max_n)
        .map(|k| {
            let counts = spectrum_counts(&orthogonal_family(k, with_unit))?;
            Ok(GrowthRow {
                truncation: k,
                characters: counts.characters,
                ultra: counts.ultra,
                tight: counts.tight,
            })
        })
        .collect()
}

/// Character of a point of the shift space, answering on the idempotents
/// `s_mu s_mu*` (these are all idempotents of the polycyclic monoid).
#[derive(Debug, Clone)]
pub struct ShiftCharacterOracle {
    point: Point,
}

impl ShiftCharacterOracle {
    pub fn new(point: Point) -> Self {
        ShiftCharacterOracle { point }
    }

    /// Value on an idempotent: 1 iff the cylinder word is a prefix of the
    /// point.
    pub fn value(&self, e: &PolyElement) -> Result<bool, SpectrumError> {
        match e {
            PolyElement::Zero => Ok(false),
            PolyElement::Pair(mu, nu) if mu == nu => Ok(self.point.starts_with(mu)),
            _ => Err(SpectrumError::HypothesisFailed("not an idempotent".into())),
        }
    }

    /// Maximality against all idempotents up to the depth bound: any word
    /// outside the filter is separated from it by a prefix of the point of
    /// the same length, whose meet with it is zero.
    pub fn is_ultra_to_depth(&self, depth: usize) -> bool {
        for len in 0..=depth {
            for w in crate::clopen::words_of_length(self.point.n(), len) {
                if self.point.starts_with(&w) {
                    continue;
                }
                let p = self.point.prefix(len);
                let meet = crate::polycyclic::mul(
                    &PolyElement::Pair(w.clone(), w.clone()),
                    &PolyElement::Pair(p.clone(), p),
                )
                .expect("same alphabet");
                if meet != PolyElement::Zero {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{empty_domain_action, natural_action, one_point_semilattice_action};
    use crate::isg::{symmetric_inverse_monoid, two_element_semilattice};

    #[test]
    fn two_element_semilattice_has_one_character() {
        let sg = two_element_semilattice();
        let all = characters(&sg).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].value(1) && !all[0].value(0));
        let counts = spectrum_counts(&sg).unwrap();
        assert_eq!((counts.characters, counts.ultra, counts.tight), (1, 1, 1));
    }

    #[test]
    fn orthogonal_family_characters() {
        // without a unit: one principal filter per generator, all maximal
        let free = orthogonal_family(3, false);
        let counts = spectrum_counts(&free).unwrap();
        assert_eq!((counts.characters, counts.ultra), (3, 3));
        // with a unit: the unit filter appears and is not maximal
        let unital = orthogonal_family(3, true);
        let counts = spectrum_counts(&unital).unwrap();
        assert_eq!((counts.characters, counts.ultra), (4, 3));
        let all = characters(&unital).unwrap();
        let unit_only = all.iter().find(|c| c.filter().count() == 1).unwrap();
        assert!(!is_ultracharacter(&unital, unit_only).unwrap());
    }

    #[test]
    fn i2_character_space() {
        let sg = symmetric_inverse_monoid(2);
        let all = characters(&sg).unwrap();
        assert_eq!(all.len(), 3);
        assert_eq!(ultracharacters(&sg).unwrap().len(), 2);
    }

    #[test]
    fn filter_axioms_enforced() {
        let sg = orthogonal_family(2, true);
        let p1 = sg.index_of("p1").unwrap();
        let p2 = sg.index_of("p2").unwrap();
        let one = sg.index_of("1").unwrap();
        // not upward closed
        assert!(!is_proper_filter(&sg, &Bitset::from_indices(sg.len(), [p1])));
        // not meet closed (p1 p2 = 0)
        assert!(!is_proper_filter(&sg, &Bitset::from_indices(sg.len(), [p1, p2, one])));
        // contains zero
        assert!(!is_proper_filter(&sg, &Bitset::from_indices(sg.len(), [sg.zero(), one])));
        assert!(is_proper_filter(&sg, &Bitset::from_indices(sg.len(), [p1, one])));
    }

    #[test]
    fn spectral_action_of_semilattice_is_identity_on_domains() {
        let sg = orthogonal_family(2, true);
        let act = spectral_action(&sg).unwrap();
        for e in sg.idempotents().iter() {
            for x in act.domain_of_map(e).iter() {
                assert_eq!(act.apply(e, x), Ok(x));
            }
        }
    }

    #[test]
    fn spectral_action_of_i2_moves_ultracharacters() {
        let sg = symmetric_inverse_monoid(2);
        let act = spectral_action(&sg).unwrap();
        assert_eq!(act.points(), 3);
        // the domain bijection for each s
        for s in 0..sg.len() {
            let dom = act.domain_of_map(sg.mul(sg.star(s), s));
            let ran = act.domain_of_map(sg.mul(s, sg.star(s)));
            let image: Vec<usize> = dom.iter().map(|x| act.apply(s, x).unwrap()).collect();
            let mut image = Bitset::from_indices(act.points(), image);
            image = image.union(&Bitset::new(act.points()));
            assert_eq!(image, ran);
        }
    }

    #[test]
    fn xi_of_point_on_natural_action() {
        let a = natural_action(2);
        let sg = a.semigroup();
        let xi = xi_of_point(&a, 0).unwrap();
        let e1 = sg.index_of("1->1").unwrap();
        let one = sg.index_of("1").unwrap();
        assert_eq!(xi.filter(), &Bitset::from_indices(sg.len(), [e1, one]));
    }

    #[test]
    fn empty_domain_action_is_flagged() {
        let a = empty_domain_action();
        assert!(matches!(
            xi_of_point(&a, 0),
            Err(SpectrumError::HypothesisFailed(_))
        ));
        // the raw character is the unit filter, and it is not maximal
        let xi = point_character(&a, 0);
        assert_eq!(xi.filter().count(), 1);
        assert!(!is_ultracharacter(a.semigroup(), &xi).unwrap());
        assert!(matches!(
            verify_characterization(&a),
            Err(SpectrumError::HypothesisFailed(_))
        ));
    }

    #[test]
    fn characterization_on_i2() {
        let report = verify_characterization(&natural_action(2)).unwrap();
        assert_eq!(report.points, 2);
        assert_eq!(report.ultracharacters, 2);
        assert!(report.verdict);
    }

    #[test]
    fn characterization_on_one_point_semilattice() {
        let report = verify_characterization(&one_point_semilattice_action()).unwrap();
        assert_eq!(report.points, 1);
        assert!(report.verdict);
    }

    #[test]
    fn growth_tables() {
        for (k, row) in growth_table(5, false).unwrap().iter().enumerate() {
            assert_eq!(row.characters, k + 1);
            assert_eq!(row.ultra, k + 1);
            assert_eq!(row.tight, k + 1);
        }
        for (k, row) in growth_table(5, true).unwrap().iter().enumerate() {
            assert_eq!(row.characters, k + 2);
            assert_eq!(row.ultra, k + 1);
        }
    }

    #[test]
    fn shift_character_oracle() {
        let x = Point::parse(2, "(1)").unwrap();
        let oracle = ShiftCharacterOracle::new(x);
        let e = |t: &str| PolyElement::parse(2, t).unwrap();
        assert!(oracle.value(&e("e/e")).unwrap());
        assert!(oracle.value(&e("11/11")).unwrap());
        assert!(!oracle.value(&e("2/2")).unwrap());
        assert!(!oracle.value(&PolyElement::Zero).unwrap());
        assert!(oracle.value(&e("1/2")).is_err());
        assert!(oracle.is_ultra_to_depth(5));
    }
}
