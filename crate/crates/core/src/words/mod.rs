//! Words over a countable alphabet of interned variables.
//!
//! A [`Word`] is a finite sequence of [`Variable`]s; the empty word plays the
//! role of the identity `1`. Identities are ordered pairs of words and
//! substitutions are finite maps from variables to words.

mod families;
mod parse;
mod pattern;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use families::{
    sigma, sigma_infinity, wn_xyxy, wn_zimin, zimin, zimin_decompose, ZiminDecomposition,
};
pub use parse::{parse_identity, parse_word, ParseError};
pub use pattern::{match_exact, match_occurrences, match_pattern, MatchOptions, Occurrence};

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static INTERNER: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    INTERNER.get_or_init(|| Mutex::new(HashSet::new()))
}

/// An interned variable name: a lowercase letter optionally followed by digits.
///
/// Interning makes variables `Copy` and lets equality compare pointers.
/// Ordering is lexicographic by name so that every derived listing is
/// reproducible regardless of interning order.
#[derive(Clone, Copy)]
pub struct Variable(&'static str);

impl Variable {
    /// Interns `name`, returning `None` if it is not a valid variable name.
    pub fn try_new(name: &str) -> Option<Self> {
        if !Self::is_valid_name(name) {
            return None;
        }
        let mut set = interner().lock().expect("interner poisoned");
        if let Some(existing) = set.get(name) {
            return Some(Variable(existing));
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        set.insert(leaked);
        Some(Variable(leaked))
    }

    /// Interns `name`.
    ///
    /// Panics on an invalid name; use [`Variable::try_new`] for user input.
    pub fn new(name: &str) -> Self {
        Self::try_new(name).unwrap_or_else(|| panic!("invalid variable name {name:?}"))
    }

    /// Shorthand for the indexed variable `<stem><index>`, e.g. `x3`.
    pub fn indexed(stem: char, index: usize) -> Self {
        Self::new(&format!("{stem}{index}"))
    }

    pub fn name(self) -> &'static str {
        self.0
    }

    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_digit())
    }
}

impl PartialEq for Variable {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Variable {}

impl Hash for Variable {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(other.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl Serialize for Variable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0)
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Variable::try_new(&name)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid variable name {name:?}")))
    }
}

/// A finite word; the empty word is the identity `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Variable>);

/// Content, occurrence counts and simple variables of a word.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordStats {
    pub content: BTreeSet<Variable>,
    pub occ: BTreeMap<Variable, usize>,
    pub simple: BTreeSet<Variable>,
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_vars(letters: Vec<Variable>) -> Self {
        Word(letters)
    }

    /// Builds a word from variable names.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        Word(names.iter().map(|n| Variable::new(n.as_ref())).collect())
    }

    pub fn letter(v: Variable) -> Self {
        Word(vec![v])
    }

    pub fn letters(&self) -> &[Variable] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Variable> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn push(&mut self, v: Variable) {
        self.0.push(v);
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// `self[range]` as a word.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn content(&self) -> BTreeSet<Variable> {
        self.0.iter().copied().collect()
    }

    pub fn occ(&self, x: Variable) -> usize {
        self.0.iter().filter(|&&v| v == x).count()
    }

    pub fn stats(&self) -> WordStats {
        let mut occ = BTreeMap::new();
        for &v in &self.0 {
            *occ.entry(v).or_insert(0) += 1;
        }
        let content = occ.keys().copied().collect();
        let simple = occ
            .iter()
            .filter(|(_, &n)| n == 1)
            .map(|(&v, _)| v)
            .collect();
        WordStats {
            content,
            occ,
            simple,
        }
    }

    /// The initial part: first occurrence of each variable, in order.
    pub fn ini(&self) -> Word {
        let mut seen = HashSet::new();
        Word(self.0.iter().copied().filter(|v| seen.insert(*v)).collect())
    }

    /// Deletes every letter outside `keep`.
    pub fn project(&self, keep: &BTreeSet<Variable>) -> Word {
        Word(
            self.0
                .iter()
                .copied()
                .filter(|v| keep.contains(v))
                .collect(),
        )
    }

    /// Convenience form of [`Word::project`] taking a slice.
    pub fn project_onto(&self, keep: &[Variable]) -> Word {
        self.project(&keep.iter().copied().collect())
    }

    pub fn substitute(&self, theta: &Substitution) -> Word {
        let mut out = Vec::with_capacity(self.len());
        for &v in &self.0 {
            match theta.get(v) {
                Some(img) => out.extend_from_slice(img.letters()),
                None => out.push(v),
            }
        }
        Word(out)
    }

    /// True iff `self` occurs as a contiguous factor of `other`.
    pub fn is_factor_of(&self, other: &Word) -> bool {
        is_factor(self, other)
    }

    /// Replaces every occurrence of `a` by `b` and vice versa.
    pub fn swap(&self, a: Variable, b: Variable) -> Word {
        Word(
            self.0
                .iter()
                .map(|&v| {
                    if v == a {
                        b
                    } else if v == b {
                        a
                    } else {
                        v
                    }
                })
                .collect(),
        )
    }

    /// All distinct factors, including the empty word.
    pub fn factors(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        out.insert(Word::empty());
        for i in 0..self.len() {
            for j in i + 1..=self.len() {
                out.insert(self.slice(i, j));
            }
        }
        out
    }
}

/// `u ⪯ v`: true iff `v = a·u·b` for some words `a`, `b`.
pub fn is_factor(u: &Word, v: &Word) -> bool {
    u.is_empty() || v.0.windows(u.len()).any(|w| w == u.0.as_slice())
}

impl Ord for Word {
    /// Shortlex: shorter words first, then lexicographic by variable name.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Variable> for Word {
    fn from_iter<I: IntoIterator<Item = Variable>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    /// Runs are written as powers. Single-letter variables are juxtaposed
    /// (`x^2yx`); as soon as one name is longer the tokens are space
    /// separated (`x^2 h1 y^2`). The empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let juxtapose = self.0.iter().all(|v| v.name().len() == 1);
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let mut j = i + 1;
            while j < self.0.len() && self.0[j] == v {
                j += 1;
            }
            if !first && !juxtapose {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(v.name())?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_word(&text).map_err(serde::de::Error::custom)
    }
}

/// An identity `u ≈ v`, rendered as `u = v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Identity { lhs, rhs }
    }

    /// Parses `"u = v"`; panics on malformed text. Intended for literals.
    pub fn parse(text: &str) -> Self {
        parse_identity(text).unwrap_or_else(|e| panic!("bad identity {text:?}: {e}"))
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn reversed(&self) -> Identity {
        Identity::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn content(&self) -> BTreeSet<Variable> {
        let mut c = self.lhs.content();
        c.extend(self.rhs.content());
        c
    }

    pub fn project(&self, keep: &BTreeSet<Variable>) -> Identity {
        Identity::new(self.lhs.project(keep), self.rhs.project(keep))
    }

    pub fn substitute(&self, theta: &Substitution) -> Identity {
        Identity::new(self.lhs.substitute(theta), self.rhs.substitute(theta))
    }

    /// Same identity up to orientation.
    pub fn same_up_to_orientation(&self, other: &Identity) -> bool {
        self == other || (self.lhs == other.rhs && self.rhs == other.lhs)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Identity({self})")
    }
}

impl Serialize for Identity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Identity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_identity(&text).map_err(serde::de::Error::custom)
    }
}

/// A finite map from variables to words; unmapped variables are fixed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Substitution(BTreeMap<Variable, Word>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: Variable, w: Word) -> Option<Word> {
        self.0.insert(v, w)
    }

    pub fn with(mut self, v: Variable, w: Word) -> Self {
        self.0.insert(v, w);
        self
    }

    pub fn get(&self, v: Variable) -> Option<&Word> {
        self.0.get(&v)
    }

    /// Image of `v`, which is `v` itself when unmapped.
    pub fn image(&self, v: Variable) -> Word {
        self.0.get(&v).cloned().unwrap_or_else(|| Word::letter(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Word)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = Variable> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Variable, Word)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Variable, Word)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, w) in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}={w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn content_occ_simple() {
        let s = w("xyxy").stats();
        assert_eq!(s.content.len(), 2);
        assert_eq!(s.occ[&Variable::new("x")], 2);
        assert!(s.simple.is_empty());

        let e = Word::empty().stats();
        assert!(e.content.is_empty() && e.occ.is_empty() && e.simple.is_empty());

        let z2 = zimin(2).unwrap().stats();
        assert_eq!(z2.occ[&Variable::new("x1")], 2);
        assert_eq!(z2.occ[&Variable::new("x2")], 1);
        assert_eq!(z2.simple, [Variable::new("x2")].into_iter().collect());
    }

    #[test]
    fn ini_examples() {
        assert_eq!(w("xyxy").ini(), w("xy"));
        assert_eq!(Word::empty().ini(), Word::empty());
        assert_eq!(
            wn_xyxy(3, false).unwrap().ini(),
            w("x0 y z x1 x2 x3")
        );
    }

    #[test]
    fn projections() {
        for n in 2..7 {
            let wn = wn_xyxy(n, false).unwrap();
            assert_eq!(wn.project_onto(&[Variable::new("y"), Variable::new("z")]), w("yzyz"));
            assert_eq!(wn.project(&wn.content()), wn);
        }
        assert_eq!(w("xyxy").project_onto(&[Variable::new("x")]), w("xx"));
        // keep may mention absent variables
        assert_eq!(w("xy").project_onto(&[Variable::new("x"), Variable::new("q")]), w("x"));
    }

    #[test]
    fn substitution_examples() {
        let theta = Substitution::new()
            .with(Variable::new("x"), w("ab"))
            .with(Variable::new("y"), Word::empty());
        assert_eq!(w("xy").substitute(&theta), w("ab"));

        let s1 = sigma(1).unwrap();
        let s2 = sigma(2).unwrap();
        let h = Substitution::new().with(Variable::new("h1"), w("h1 y^2 h2"));
        assert_eq!(s1.lhs.substitute(&h), s2.lhs);
        assert_eq!(s1.rhs.substitute(&h), s2.rhs);

        let wn = wn_xyxy(4, true).unwrap();
        assert_eq!(wn.substitute(&Substitution::identity()), wn);
    }

    #[test]
    fn factor_examples() {
        assert!(is_factor(&w("xyx"), &w("xyxy")));
        assert!(!is_factor(&w("yy"), &w("xyxy")));
        assert!(is_factor(&Word::empty(), &w("xyz")));
        assert!(is_factor(&Word::empty(), &Word::empty()));
        assert!(!is_factor(&w("x"), &Word::empty()));
    }

    #[test]
    fn factors_of_xyxy() {
        // 1, x, y, xy, yx, xyx, yxy, xyxy
        assert_eq!(w("xyxy").factors().len(), 8);
    }

    #[test]
    fn display_forms() {
        assert_eq!(w("xxyx").to_string(), "x^2yx");
        assert_eq!(w("x x h1 y y").to_string(), "x^2 h1 y^2");
        assert_eq!(Word::empty().to_string(), "1");
        assert_eq!(Identity::parse("xy = yx").to_string(), "xy = yx");
    }

    #[test]
    fn variable_order_is_by_name() {
        let b = Variable::new("b9");
        let a = Variable::new("a10");
        assert!(a < b);
        assert!(Variable::try_new("X").is_none());
        assert!(Variable::try_new("x1y").is_none());
        assert!(Variable::try_new("").is_none());
    }

    #[test]
    fn word_shortlex() {
        assert!(w("y") < w("xx"));
        assert!(w("xy") < w("yx"));
    }
}
