//! Polygon words of closed surfaces.
//!
//! A [`SurfaceWord`] is a cyclic word in which every symbol occurs exactly
//! twice. Gluing the sides of a polygon according to the word yields a closed
//! surface; [`SurfaceWord::classify`] names it from the Euler characteristic
//! and orientability, while [`SurfaceWord::normalize_with_trace`] reaches the
//! same answer by rewriting with the elementary moves of [`moves`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::dsu::DisjointSets;

pub mod moves;
mod normalize;

pub use moves::{Direction, MoveApplication, MoveError, MoveKind};
pub use normalize::{Normalization, NormalizeError, DEFAULT_STEP_LIMIT};

/// One side of the polygon: a symbol with exponent `+1` (`inverse == false`)
/// or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub symbol: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: usize, inverse: bool) -> Self {
        Letter { symbol, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { symbol: self.symbol, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word")]
    Empty,
    #[error("malformed token `{token}` at column {column}")]
    MalformedToken { token: String, column: usize },
    #[error("symbol `{symbol}` occurs {count} time(s), expected exactly 2")]
    Unpaired { symbol: String, count: usize },
    #[error("letter refers to unknown symbol {0}")]
    UnknownSymbol(usize),
}

/// Outcome of the classification theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardForm {
    Sphere,
    /// Connected sum of `g >= 1` tori.
    OrientableGenus(usize),
    /// Connected sum of `k >= 1` projective planes.
    NonOrientableGenus(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("inconsistent invariants: chi = {chi}, orientable = {orientable}")]
    Inconsistent { chi: i64, orientable: bool },
}

impl StandardForm {
    /// Builds the form from the Euler characteristic and orientability.
    pub fn from_invariants(chi: i64, orientable: bool) -> Result<Self, ClassifyError> {
        let bad = ClassifyError::Inconsistent { chi, orientable };
        if chi > 2 {
            return Err(bad);
        }
        if orientable {
            if chi == 2 {
                Ok(StandardForm::Sphere)
            } else if (2 - chi) % 2 == 0 {
                Ok(StandardForm::OrientableGenus(((2 - chi) / 2) as usize))
            } else {
                Err(bad)
            }
        } else if chi == 2 {
            Err(bad)
        } else {
            Ok(StandardForm::NonOrientableGenus((2 - chi) as usize))
        }
    }

    pub fn euler_characteristic(self) -> i64 {
        match self {
            StandardForm::Sphere => 2,
            StandardForm::OrientableGenus(g) => 2 - 2 * g as i64,
            StandardForm::NonOrientableGenus(k) => 2 - k as i64,
        }
    }

    pub fn is_orientable(self) -> bool {
        !matches!(self, StandardForm::NonOrientableGenus(_))
    }

    /// Genus for orientable forms, crosscap number otherwise.
    pub fn genus(self) -> usize {
        match self {
            StandardForm::Sphere => 0,
            StandardForm::OrientableGenus(g) => g,
            StandardForm::NonOrientableGenus(k) => k,
        }
    }

    /// The standard polygon word: `a a-`, `a1 b1 a1- b1- ...` or `a1 a1 a2 a2 ...`.
    pub fn standard_word(self) -> SurfaceWord {
        let mut names = Vec::new();
        let mut letters = Vec::new();
        match self {
            StandardForm::Sphere => {
                names.push("a".to_string());
                letters.extend([Letter::new(0, false), Letter::new(0, true)]);
            }
            StandardForm::OrientableGenus(g) => {
                for i in 1..=g {
                    let (a, b) = (names.len(), names.len() + 1);
                    names.push(format!("a{i}"));
                    names.push(format!("b{i}"));
                    letters.extend([
                        Letter::new(a, false),
                        Letter::new(b, false),
                        Letter::new(a, true),
                        Letter::new(b, true),
                    ]);
                }
            }
            StandardForm::NonOrientableGenus(k) => {
                for i in 1..=k {
                    let a = names.len();
                    names.push(format!("a{i}"));
                    letters.extend([Letter::new(a, false), Letter::new(a, false)]);
                }
            }
        }
        SurfaceWord::from_parts(letters, names).expect("standard words are valid")
    }
}

impl fmt::Display for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardForm::Sphere => write!(f, "sphere"),
            StandardForm::OrientableGenus(g) => write!(f, "orientable genus {g}"),
            StandardForm::NonOrientableGenus(k) => write!(f, "non-orientable genus {k}"),
        }
    }
}

/// A cyclic polygon word. Symbols are interned `0..n` in order of first
/// appearance and each occurs exactly twice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceWord {
    letters: Vec<Letter>,
    names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SurfaceWord {
    /// Parses whitespace-separated tokens, `x` for `x` and `x-` for `x^{-1}`.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut letters = Vec::new();

        let mut column = 0;
        for piece in text.split_inclusive(char::is_whitespace) {
            let token = piece.trim();
            let token_column = column + 1;
            column += piece.chars().count();
            if token.is_empty() {
                continue;
            }
            let (name, inverse) = match token.strip_suffix('-') {
                Some(stem) => (stem, true),
                None => (token, false),
            };
            if !valid_name(name) {
                return Err(WordError::MalformedToken { token: token.to_string(), column: token_column });
            }
            let symbol = *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            });
            letters.push(Letter::new(symbol, inverse));
        }
        Self::from_parts(letters, names)
    }

    /// Validates letters against a name table and re-interns symbols in
    /// first-appearance order. Unused names are dropped.
    pub fn from_parts(letters: Vec<Letter>, names: Vec<String>) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::Empty);
        }
        let mut counts = vec![0usize; names.len()];
        for l in &letters {
            *counts.get_mut(l.symbol).ok_or(WordError::UnknownSymbol(l.symbol))? += 1;
        }
        if let Some(s) = (0..names.len()).find(|&s| counts[s] != 0 && counts[s] != 2) {
            return Err(WordError::Unpaired { symbol: names[s].clone(), count: counts[s] });
        }
        Ok(Self::reinterned(letters, &names))
    }

    fn reinterned(letters: Vec<Letter>, names: &[String]) -> Self {
        let mut remap = vec![usize::MAX; names.len()];
        let mut new_names = Vec::new();
        let letters = letters
            .into_iter()
            .map(|l| {
                if remap[l.symbol] == usize::MAX {
                    remap[l.symbol] = new_names.len();
                    new_names.push(names[l.symbol].clone());
                }
                Letter::new(remap[l.symbol], l.inverse)
            })
            .collect();
        SurfaceWord { letters, names: new_names }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, symbol: usize) -> &str {
        &self.names[symbol]
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of distinct symbols, i.e. edges of the polygon after gluing.
    pub fn symbol_count(&self) -> usize {
        self.names.len()
    }

    /// Positions of the two occurrences of each symbol.
    pub fn occurrences(&self) -> Vec<[usize; 2]> {
        let mut occ = vec![[usize::MAX; 2]; self.names.len()];
        for (i, l) in self.letters.iter().enumerate() {
            let slot = &mut occ[l.symbol];
            if slot[0] == usize::MAX {
                slot[0] = i;
            } else {
                slot[1] = i;
            }
        }
        occ
    }

    /// Position of the other occurrence of the letter at `pos`.
    pub fn partner(&self, pos: usize) -> usize {
        let s = self.letters[pos].symbol;
        (0..self.len()).find(|&j| j != pos && self.letters[j].symbol == s).expect("paired symbol")
    }

    /// The letters rotated to start at `at` (cyclic index).
    pub fn rotated(&self, at: usize) -> Vec<Letter> {
        let n = self.len();
        (0..n).map(|i| self.letters[(at + i) % n]).collect()
    }

    /// Vertex class of every polygon corner; corner `i` sits just before
    /// letter `i`. Returns the labels and the number of classes.
    pub fn corner_classes(&self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut dsu = DisjointSets::new(n);
        let ends = |pos: usize| {
            let (start, end) = (pos, (pos + 1) % n);
            if self.letters[pos].inverse {
                (end, start)
            } else {
                (start, end)
            }
        };
        for [p, q] in self.occurrences() {
            let (t1, h1) = ends(p);
            let (t2, h2) = ends(q);
            dsu.union(t1, t2);
            dsu.union(h1, h2);
        }
        dsu.labels()
    }

    /// Euler characteristic of the glued polygon, `V - n + 1`, with `V` the
    /// number of corner classes.
    pub fn corner_trace_euler(&self) -> i64 {
        let (_, vertices) = self.corner_classes();
        vertices as i64 - self.symbol_count() as i64 + 1
    }

    /// True iff every symbol occurs once with each exponent.
    pub fn is_orientable_word(&self) -> bool {
        self.occurrences().iter().all(|&[p, q]| self.letters[p].inverse != self.letters[q].inverse)
    }

    pub fn classify(&self) -> Result<StandardForm, ClassifyError> {
        StandardForm::from_invariants(self.corner_trace_euler(), self.is_orientable_word())
    }

    /// Canonical encoding: over all rotations, rename symbols in order of
    /// first appearance with the first occurrence taken as exponent `+1`, and
    /// keep the lexicographically least result.
    pub fn canonical(&self) -> Vec<Letter> {
        let n = self.len();
        let mut best: Option<Vec<Letter>> = None;
        let mut remap: Vec<Option<(usize, bool)>> = vec![None; self.symbol_count()];
        for start in 0..n {
            remap.iter_mut().for_each(|r| *r = None);
            let mut next = 0;
            let candidate: Vec<Letter> = (0..n)
                .map(|i| {
                    let l = self.letters[(start + i) % n];
                    let (sym, flip) = *remap[l.symbol].get_or_insert_with(|| {
                        next += 1;
                        (next - 1, l.inverse)
                    });
                    Letter::new(sym, l.inverse != flip)
                })
                .collect();
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        best.expect("nonempty word")
    }

    /// Equality up to rotation and renaming of symbols.
    pub fn equivalent(&self, other: &SurfaceWord) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }

    /// Polygon word of the connected sum: the concatenation, with `other`'s
    /// clashing names suffixed.
    pub fn connected_sum(&self, other: &SurfaceWord) -> SurfaceWord {
        let mut names = self.names.clone();
        let offset = names.len();
        for name in &other.names {
            let mut candidate = name.clone();
            let mut k = 2;
            while names.contains(&candidate) || (candidate != *name && other.names.contains(&candidate)) {
                candidate = format!("{name}_{k}");
                k += 1;
            }
            names.push(candidate);
        }
        let letters = self
            .letters
            .iter()
            .copied()
            .chain(other.letters.iter().map(|l| Letter::new(l.symbol + offset, l.inverse)))
            .collect();
        SurfaceWord::from_parts(letters, names).expect("concatenation of valid words")
    }

    /// A uniformly random pairing of `symbols` symbols (named `x1`, `x2`,
    /// ...) with independent random exponents.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, symbols: usize) -> SurfaceWord {
        assert!(symbols >= 1, "a word needs at least one symbol");
        let mut letters: Vec<Letter> =
            (0..symbols).flat_map(|s| [Letter::new(s, rng.gen()), Letter::new(s, rng.gen())]).collect();
        letters.shuffle(rng);
        let names = (1..=symbols).map(|k| format!("x{k}")).collect();
        SurfaceWord::from_parts(letters, names).expect("every symbol twice")
    }

    /// A name not used by any symbol.
    pub(crate) fn fresh_name(&self) -> String {
        (1..).map(|k| format!("t{k}")).find(|n| !self.names.contains(n)).expect("unbounded")
    }
}

impl FromStr for SurfaceWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SurfaceWord::parse(s)
    }
}

impl fmt::Display for SurfaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.names[l.symbol])?;
            if l.inverse {
                f.write_str("-")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SurfaceWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_two_tokens() {
        let word = w("a a-");
        assert_eq!(word.letters(), &[Letter::new(0, false), Letter::new(0, true)]);
        assert_eq!(word.name(0), "a");
    }

    #[test]
    fn parse_interns_in_first_appearance_order() {
        let word = w("b a b- a-");
        assert_eq!(word.names(), &["b".to_string(), "a".to_string()]);
        assert_eq!(word.to_string(), "b a b- a-");
    }

    #[test]
    fn parse_rejects_single_occurrence() {
        assert_eq!(w_err("a b a"), WordError::Unpaired { symbol: "b".into(), count: 1 });
        assert_eq!(w_err("a a a"), WordError::Unpaired { symbol: "a".into(), count: 3 });
        assert_eq!(w_err("   "), WordError::Empty);
        assert_eq!(w_err("a 1b"), WordError::MalformedToken { token: "1b".into(), column: 3 });
        assert!(matches!(w_err("a-- a"), WordError::MalformedToken { .. }));
    }

    fn w_err(s: &str) -> WordError {
        SurfaceWord::parse(s).unwrap_err()
    }

    #[test]
    fn corner_trace_small_cases() {
        assert_eq!(w("a a-").corner_trace_euler(), 2);
        assert_eq!(w("a b a- b-").corner_trace_euler(), 0);
        assert_eq!(w("a a").corner_trace_euler(), 1);
        assert_eq!(w("a b b- a-").corner_trace_euler(), 2);
    }

    #[test]
    fn orientability_of_words() {
        assert!(w("a b a- b-").is_orientable_word());
        assert!(!w("a a").is_orientable_word());
        assert!(!w("a b a b-").is_orientable_word());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(w("a a-").classify().unwrap(), StandardForm::Sphere);
        assert_eq!(w("a1 b1 a1- b1- a2 b2 a2- b2-").classify().unwrap(), StandardForm::OrientableGenus(2));
        assert_eq!(w("a b a b").classify().unwrap(), StandardForm::NonOrientableGenus(1));
    }

    #[test]
    fn inconsistent_invariants_are_an_error() {
        assert!(StandardForm::from_invariants(1, true).is_err());
        assert!(StandardForm::from_invariants(3, false).is_err());
        assert!(StandardForm::from_invariants(2, false).is_err());
    }

    #[test]
    fn standard_words() {
        assert_eq!(StandardForm::Sphere.standard_word().to_string(), "a a-");
        assert_eq!(StandardForm::OrientableGenus(1).standard_word().to_string(), "a1 b1 a1- b1-");
        assert_eq!(StandardForm::NonOrientableGenus(2).standard_word().to_string(), "a1 a1 a2 a2");
    }

    #[test]
    fn connected_sums() {
        let s = w("a a-").connected_sum(&w("b b"));
        assert_eq!(s.to_string(), "a a- b b");
        let p1 = StandardForm::OrientableGenus(1).standard_word();
        let q1 = StandardForm::NonOrientableGenus(1).standard_word();
        assert_eq!(p1.connected_sum(&q1).classify().unwrap(), StandardForm::NonOrientableGenus(3));
        let qq = q1.connected_sum(&q1);
        assert_eq!(qq.to_string(), "a1 a1 a1_2 a1_2");
        assert_eq!(qq.classify().unwrap(), StandardForm::NonOrientableGenus(2));
    }

    #[test]
    fn canonical_ignores_rotation_renaming_and_orientation() {
        assert!(w("a b a- b-").equivalent(&w("y- x y x-")));
        assert!(w("a a b b").equivalent(&w("c- c- d d")));
        assert!(!w("a b a- b-").equivalent(&w("a a b b")));
        assert!(!w("a b a b").equivalent(&w("a a b b")));
    }
}
