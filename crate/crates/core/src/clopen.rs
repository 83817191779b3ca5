//! Compact-open subsets of the shift space of infinite words over
//! `{1, ..., n}`, represented canonically as finite antichains of cylinder
//! prefixes, plus eventually periodic points of that space.
//!
//! Canonical form makes equality structural: no member word is a prefix of
//! another, no complete sibling family `w1, ..., wn` survives (it collapses
//! to `w`), and members are sorted.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClopenError {
    #[error("alphabet sizes differ: {left} vs {right}")]
    AlphabetMismatch { left: u8, right: u8 },
    #[error("letter {letter} out of range 1..={n}")]
    BadLetter { letter: u8, n: u8 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// A finite word over the alphabet `{1, ..., n}`; the empty word is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    n: u8,
    letters: Vec<u8>,
}

impl Word {
    pub fn new(n: u8, letters: Vec<u8>) -> Result<Self, ClopenError> {
        for &l in &letters {
            if l == 0 || l > n {
                return Err(ClopenError::BadLetter { letter: l, n });
            }
        }
        Ok(Word { n, letters })
    }

    pub fn empty(n: u8) -> Self {
        Word { n, letters: Vec::new() }
    }

    /// Digit syntax, `"e"` (or `""`) for the empty word. Alphabets up to 9.
    pub fn parse(n: u8, text: &str) -> Result<Self, ClopenError> {
        if n > 9 {
            return Err(ClopenError::Parse(format!("digit syntax needs n <= 9, got {n}")));
        }
        if text == "e" || text.is_empty() {
            return Ok(Word::empty(n));
        }
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| ClopenError::Parse(format!("bad letter {c:?}")))? as u8;
            if d == 0 || d > n {
                return Err(ClopenError::BadLetter { letter: d, n });
            }
            letters.push(d);
        }
        Ok(Word { n, letters })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { n: self.n, letters }
    }

    pub fn extend(&self, letter: u8) -> Word {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Word { n: self.n, letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for &l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// All words of exactly the given length.
pub fn words_of_length(n: u8, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty(n)];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| (1..=n).map(move |l| w.extend(l)))
            .collect();
    }
    out
}

/// All words of length at most the bound, shortest first.
pub fn words_up_to(n: u8, len: usize) -> Vec<Word> {
    (0..=len).flat_map(|l| words_of_length(n, l)).collect()
}

/// An eventually periodic infinite word `preperiod . period^infinity`, kept
/// in canonical form: the period is primitive and the preperiod is as short
/// as possible (no trailing letter can be absorbed into the cycle).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    n: u8,
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl Point {
    pub fn new(n: u8, preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self, ClopenError> {
        if period.is_empty() {
            return Err(ClopenError::Parse("period must be nonempty".into()));
        }
        for &l in preperiod.iter().chain(&period) {
            if l == 0 || l > n {
                return Err(ClopenError::BadLetter { letter: l, n });
            }
        }
        let mut p = Point { n, preperiod, period };
        p.canonicalize();
        Ok(p)
    }

    /// Syntax `u(v)`: the infinite word `u v v v ...`, e.g. `1(2)`.
    pub fn parse(n: u8, text: &str) -> Result<Self, ClopenError> {
        let open = text
            .find('(')
            .ok_or_else(|| ClopenError::Parse(format!("expected u(v), got {text:?}")))?;
        if !text.ends_with(')') {
            return Err(ClopenError::Parse(format!("expected u(v), got {text:?}")));
        }
        let pre = Word::parse(n, &text[..open])?;
        let per = Word::parse(n, &text[open + 1..text.len() - 1])?;
        Point::new(n, pre.letters, per.letters)
    }

    fn canonicalize(&mut self) {
        // primitive period: shrink to the shortest cyclic generator
        for d in 1..self.period.len() {
            if self.period.len().is_multiple_of(d)
                && self.period.chunks(d).all(|c| c == &self.period[..d])
            {
                self.period.truncate(d);
                break;
            }
        }
        // absorb preperiod letters that already match the cycle
        while let Some(&last) = self.preperiod.last() {
            if last == *self.period.last().expect("nonempty period") {
                self.preperiod.pop();
                let tail = self.period.pop().expect("nonempty period");
                self.period.insert(0, tail);
            } else {
                break;
            }
        }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn preperiod_len(&self) -> usize {
        self.preperiod.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn letter(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn starts_with(&self, w: &Word) -> bool {
        w.letters.iter().enumerate().all(|(i, &l)| self.letter(i) == l)
    }

    /// Drops the first `|w|` letters, provided `w` is a prefix.
    pub fn strip_prefix(&self, w: &Word) -> Option<Point> {
        if self.n != w.n || !self.starts_with(w) {
            return None;
        }
        let k = w.len();
        let (pre, per) = if k <= self.preperiod.len() {
            (self.preperiod[k..].to_vec(), self.period.clone())
        } else {
            let shift = (k - self.preperiod.len()) % self.period.len();
            let mut per = self.period.clone();
            per.rotate_left(shift);
            (Vec::new(), per)
        };
        Some(Point::new(self.n, pre, per).expect("canonical tail"))
    }

    pub fn prepend(&self, w: &Word) -> Point {
        let mut pre = w.letters.clone();
        pre.extend_from_slice(&self.preperiod);
        Point::new(self.n, pre, self.period.clone()).expect("canonical point")
    }

    /// The length-`len` prefix as a word.
    pub fn prefix(&self, len: usize) -> Word {
        Word {
            n: self.n,
            letters: (0..len).map(|i| self.letter(i)).collect(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.preperiod {
            write!(f, "{l}")?;
        }
        write!(f, "(")?;
        for &l in &self.period {
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A compact open set: a canonical finite union of cylinders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    n: u8,
    words: Vec<Word>,
}

impl ClopenSet {
    pub fn empty(n: u8) -> Self {
        ClopenSet { n, words: Vec::new() }
    }

    pub fn whole(n: u8) -> Self {
        ClopenSet {
            n,
            words: vec![Word::empty(n)],
        }
    }

    /// The cylinder of all infinite words beginning with `w`.
    pub fn cylinder(w: &Word) -> Self {
        ClopenSet::canonicalize(w.n, vec![w.clone()])
    }

    pub fn from_words(n: u8, words: Vec<Word>) -> Result<Self, ClopenError> {
        for w in &words {
            if w.n != n {
                return Err(ClopenError::AlphabetMismatch { left: n, right: w.n });
            }
        }
        Ok(ClopenSet::canonicalize(n, words))
    }

    fn canonicalize(n: u8, mut words: Vec<Word>) -> Self {
        loop {
            // antichain: drop any word with a (weak) prefix earlier in order
            words.sort();
            words.dedup();
            words.sort_by_key(|w| w.len());
            let mut antichain: Vec<Word> = Vec::new();
            for w in words {
                if !antichain.iter().any(|kept| kept.is_prefix_of(&w)) {
                    antichain.push(w);
                }
            }
            // collapse complete sibling families one level, then repeat
            let mut collapsed = Vec::new();
            let mut changed = false;
            let mut used = vec![false; antichain.len()];
            for i in 0..antichain.len() {
                if used[i] || antichain[i].is_empty() {
                    continue;
                }
                let parent = &antichain[i].letters[..antichain[i].len() - 1];
                let family: Vec<usize> = (0..antichain.len())
                    .filter(|&j| {
                        !antichain[j].is_empty()
                            && antichain[j].len() == parent.len() + 1
                            && &antichain[j].letters[..parent.len()] == parent
                    })
                    .collect();
                let letters: std::collections::BTreeSet<u8> =
                    family.iter().map(|&j| *antichain[j].letters.last().unwrap()).collect();
                if letters.len() == n as usize {
                    for &j in &family {
                        used[j] = true;
                    }
                    collapsed.push(Word {
                        n,
                        letters: parent.to_vec(),
                    });
                    changed = true;
                }
            }
            for (j, w) in antichain.into_iter().enumerate() {
                if !used[j] {
                    collapsed.push(w);
                }
            }
            if !changed {
                collapsed.sort();
                return ClopenSet { n, words: collapsed };
            }
            words = collapsed;
        }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.words.len() == 1 && self.words[0].is_empty()
    }

    /// Longest member word.
    pub fn depth(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    fn check_n(&self, other: &ClopenSet) -> Result<(), ClopenError> {
        if self.n != other.n {
            return Err(ClopenError::AlphabetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet, ClopenError> {
        self.check_n(other)?;
        let mut words = self.words.clone();
        words.extend(other.words.iter().cloned());
        Ok(ClopenSet::canonicalize(self.n, words))
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet, ClopenError> {
        self.check_n(other)?;
        let mut words = Vec::new();
        for u in &self.words {
            for v in &other.words {
                if u.is_prefix_of(v) {
                    words.push(v.clone());
                } else if v.is_prefix_of(u) {
                    words.push(u.clone());
                }
            }
        }
        Ok(ClopenSet::canonicalize(self.n, words))
    }

    pub fn complement(&self) -> ClopenSet {
        let mut result = ClopenSet::whole(self.n);
        for w in &self.words {
            // complement of one cylinder: branch off the prefix at every depth
            let mut words = Vec::new();
            for i in 0..w.len() {
                for l in 1..=self.n {
                    if l != w.letters[i] {
                        let mut letters = w.letters[..i].to_vec();
                        letters.push(l);
                        words.push(Word { n: self.n, letters });
                    }
                }
            }
            let one = ClopenSet::canonicalize(self.n, words);
            result = result.intersect(&one).expect("same alphabet");
        }
        result
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet, ClopenError> {
        self.intersect(&other.complement())
    }

    /// Set inclusion, decided by `union(A, B) = B` on canonical forms.
    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool, ClopenError> {
        Ok(self.union(other)? == *other)
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        self.n == x.n && self.words.iter().any(|w| x.starts_with(w))
    }

    /// Serialized form: the sorted member word strings.
    pub fn word_strings(&self) -> Vec<String> {
        self.words.iter().map(Word::to_string).collect()
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.word_strings().join(","))
    }
}

/// True iff the union of the family contains `u`.
pub fn covers(family: &[ClopenSet], u: &ClopenSet) -> Result<bool, ClopenError> {
    let mut total = ClopenSet::empty(u.n);
    for f in family {
        total = total.union(f)?;
    }
    u.is_subset(&total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        Word::parse(2, text).unwrap()
    }

    fn cyl(text: &str) -> ClopenSet {
        ClopenSet::cylinder(&w(text))
    }

    #[test]
    fn cylinder_examples() {
        assert!(cyl("e").is_whole());
        assert_eq!(cyl("12").word_strings(), vec!["12"]);
        let both = cyl("1").union(&cyl("2")).unwrap();
        assert!(both.is_whole());
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(cyl("1").intersect(&cyl("12")).unwrap(), cyl("12"));
        assert!(cyl("1").intersect(&cyl("2")).unwrap().is_empty());
    }

    #[test]
    fn complement_of_cylinder() {
        let c = cyl("11").complement();
        assert_eq!(c.word_strings(), vec!["12", "2"]);
        assert!(cyl("11").complement().union(&cyl("11")).unwrap().is_whole());
        assert!(ClopenSet::whole(2).complement().is_empty());
        assert!(ClopenSet::empty(2).complement().is_whole());
    }

    #[test]
    fn point_membership() {
        let x = Point::parse(2, "(1)").unwrap();
        assert!(cyl("111").contains_point(&x));
        assert!(!cyl("2").contains_point(&x));
        let y = Point::parse(2, "1(2)").unwrap();
        assert!(cyl("11").complement().contains_point(&y));
    }

    #[test]
    fn covers_examples() {
        assert!(covers(&[cyl("1"), cyl("2")], &ClopenSet::whole(2)).unwrap());
        assert!(!covers(&[cyl("11")], &cyl("1")).unwrap());
        assert!(covers(&[cyl("11"), cyl("12")], &cyl("1")).unwrap());
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let a = ClopenSet::cylinder(&Word::parse(2, "1").unwrap());
        let b = ClopenSet::cylinder(&Word::parse(3, "1").unwrap());
        assert_eq!(
            a.union(&b).unwrap_err(),
            ClopenError::AlphabetMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn point_canonical_form() {
        // 21(1) is really 2(1); 1(21) closes into (12)
        assert_eq!(Point::parse(2, "21(1)").unwrap(), Point::parse(2, "2(1)").unwrap());
        assert_eq!(Point::parse(2, "1(21)").unwrap(), Point::parse(2, "(12)").unwrap());
        // periods reduce to primitive generators
        assert_eq!(Point::parse(2, "(1212)").unwrap(), Point::parse(2, "(12)").unwrap());
        assert_eq!(Point::parse(2, "(11)").unwrap().to_string(), "(1)");
    }

    #[test]
    fn point_strip_and_prepend() {
        let x = Point::parse(2, "21(1)").unwrap();
        let tail = x.strip_prefix(&w("21")).unwrap();
        assert_eq!(tail, Point::parse(2, "(1)").unwrap());
        assert_eq!(tail.prepend(&w("12")).to_string(), "12(1)");
        assert!(x.strip_prefix(&w("1")).is_none());
        // stripping inside the cycle rotates it
        let y = Point::parse(2, "(12)").unwrap();
        assert_eq!(y.strip_prefix(&w("1")).unwrap(), Point::parse(2, "(21)").unwrap());
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(1u8..=2, 0..=max_len)
            .prop_map(|letters| Word::new(2, letters).unwrap())
    }

    fn arb_clopen() -> impl Strategy<Value = ClopenSet> {
        prop::collection::vec(arb_word(5), 0..6)
            .prop_map(|ws| ClopenSet::from_words(2, ws).unwrap())
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (
            prop::collection::vec(1u8..=2, 0..=4),
            prop::collection::vec(1u8..=2, 1..=3),
        )
            .prop_map(|(pre, per)| Point::new(2, pre, per).unwrap())
    }

    proptest! {
        #[test]
        fn canonical_form_is_normal(a in arb_clopen(), b in arb_clopen()) {
            // families with the same points canonicalize identically
            let same = a.is_subset(&b).unwrap() && b.is_subset(&a).unwrap();
            prop_assert_eq!(same, a == b);
        }

        #[test]
        fn de_morgan(a in arb_clopen(), b in arb_clopen()) {
            let lhs = a.union(&b).unwrap().complement();
            let rhs = a.complement().intersect(&b.complement()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn point_in_respects_ops(a in arb_clopen(), b in arb_clopen(), x in arb_point()) {
            let both = a.intersect(&b).unwrap();
            prop_assert_eq!(
                both.contains_point(&x),
                a.contains_point(&x) && b.contains_point(&x)
            );
            let either = a.union(&b).unwrap();
            prop_assert_eq!(
                either.contains_point(&x),
                a.contains_point(&x) || b.contains_point(&x)
            );
            prop_assert_eq!(a.complement().contains_point(&x), !a.contains_point(&x));
        }

        #[test]
        fn subset_agrees_with_complement_route(a in arb_clopen(), b in arb_clopen()) {
            let via_union = a.is_subset(&b).unwrap();
            let via_complement = a.intersect(&b.complement()).unwrap().is_empty();
            prop_assert_eq!(via_union, via_complement);
        }

        #[test]
        fn point_prefix_roundtrip(x in arb_point(), k in 0usize..6) {
            let p = x.prefix(k);
            prop_assert!(x.starts_with(&p));
            let tail = x.strip_prefix(&p).unwrap();
            prop_assert_eq!(tail.prepend(&p), x);
        }
    }
}
