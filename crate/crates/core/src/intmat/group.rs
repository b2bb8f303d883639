//! Semi-decision of "every element of a finitely generated subgroup of
//! GL_n(Z) has its spectrum on the unit circle".

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cyclotomic::{cyclotomic_factorization, spec_on_unit_circle};
use super::matrix::IntMatrix;
use super::poly::CharPoly;
use super::spectrum::{spectral_radius, RadiusBound};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub max_word_len: usize,
    pub closure_cap: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { max_word_len: 8, closure_cap: 10_000 }
    }
}

/// A generator or its inverse; `index` is zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    fn from_code(c: usize) -> Self {
        Letter { index: c / 2, inverse: c % 2 == 1 }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

/// Word in the generators, printed as `g1 g2^-1` (one-based names).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of the letters, left to right.
    pub fn evaluate(&self, gens: &[IntMatrix]) -> Result<IntMatrix> {
        let n = gens.first().ok_or(Error::EmptyGenerators)?.dim();
        let mut out = IntMatrix::identity(n);
        for l in &self.0 {
            let g = gens.get(l.index).ok_or_else(|| {
                Error::InvalidArgument(format!("word uses g{} but only {} generators", l.index + 1, gens.len()))
            })?;
            let g = if l.inverse { g.inverse_gl()? } else { g.clone() };
            out = &out * &g;
        }
        Ok(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}{}", l.index + 1, if l.inverse { "^-1" } else { "" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::default());
        }
        let parse = |tok: &str| -> Option<Letter> {
            let (body, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let k: usize = body.strip_prefix('g')?.parse().ok()?;
            (k >= 1).then_some(Letter { index: k - 1, inverse })
        };
        s.split_whitespace()
            .map(|t| parse(t).ok_or_else(|| Error::Parse(format!("bad letter {t:?} in word {s:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl TryFrom<String> for Word {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

/// Evidence that every element of the group has its spectrum on the unit circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitCircleCertificate {
    /// The group is finite; every element is listed.
    FiniteClosure { order: usize, elements: Vec<IntMatrix> },
    /// Pairwise commuting generators, each a product of cyclotomic factors
    /// (cyclotomic indices listed per generator). Commuting matrices are
    /// simultaneously triangularisable, so every product has eigenvalues
    /// that are products of roots of unity.
    CommutingGenerators { factorizations: Vec<Vec<u64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum GroupVerdict {
    AllOnUnitCircle { certificate: UnitCircleCertificate },
    HyperbolicWitness { word: Word, matrix: IntMatrix, charpoly: CharPoly, spectral_radius: RadiusBound },
    Inconclusive { max_word_len: usize, closure_cap: usize, words_checked: usize },
}

impl GroupVerdict {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, GroupVerdict::HyperbolicWitness { .. })
    }

    pub fn is_unit_circle(&self) -> bool {
        matches!(self, GroupVerdict::AllOnUnitCircle { .. })
    }

    /// Re-checks the certificate or witness against the generators.
    pub fn reverify(&self, gens: &[IntMatrix]) -> Result<bool> {
        match self {
            GroupVerdict::AllOnUnitCircle { certificate: UnitCircleCertificate::FiniteClosure { elements, .. } } => {
                let set: HashSet<&IntMatrix> = elements.iter().collect();
                for e in elements {
                    if !spec_on_unit_circle(&e.charpoly())? {
                        return Ok(false);
                    }
                    if gens.iter().any(|g| !set.contains(&(e * g))) {
                        return Ok(false);
                    }
                }
                Ok(gens.iter().all(|g| set.contains(g)))
            }
            GroupVerdict::AllOnUnitCircle { certificate: UnitCircleCertificate::CommutingGenerators { .. } } => {
                Ok(pairwise_commute(gens) && gens.iter().all(|g| spec_on_unit_circle(&g.charpoly()).unwrap_or(false)))
            }
            GroupVerdict::HyperbolicWitness { word, matrix, .. } => {
                Ok(word.evaluate(gens)? == *matrix && !spec_on_unit_circle(&matrix.charpoly())?)
            }
            GroupVerdict::Inconclusive { .. } => Ok(true),
        }
    }
}

fn pairwise_commute(gens: &[IntMatrix]) -> bool {
    gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a * b == b * a))
}

fn check_generators(gens: &[IntMatrix]) -> Result<usize> {
    let n = gens.first().ok_or(Error::EmptyGenerators)?.dim();
    for g in gens {
        g.ensure_square()?;
        if g.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
        }
        g.ensure_gl()?;
    }
    Ok(n)
}

/// Trace of a matrix whose eigenvalues all have modulus one is at most `n`
/// in absolute value.
fn trace_bound_holds(m: &IntMatrix) -> bool {
    m.trace().abs() <= BigInt::from(m.dim())
}

enum Closure {
    Finite(Vec<IntMatrix>),
    Infinite,
    Capped,
}

/// Breadth-first enumeration of the group generated by `gens` and their
/// inverses. Stops at the first element violating the trace bound, since such
/// an element has infinite order.
fn enumerate_closure(gens: &[IntMatrix], inverses: &[IntMatrix], cap: usize) -> Closure {
    let n = gens[0].dim();
    let id = IntMatrix::identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens.iter().chain(inverses) {
            let y = &x * g;
            if seen.contains(&y) {
                continue;
            }
            if !trace_bound_holds(&y) {
                return Closure::Infinite;
            }
            if seen.len() >= cap {
                return Closure::Capped;
            }
            seen.insert(y.clone());
            order.push(y.clone());
            queue.push_back(y);
        }
    }
    Closure::Finite(order)
}

struct WordSearch {
    letters: Vec<IntMatrix>,
    len: usize,
    cache: HashMap<CharPoly, bool>,
    checked: usize,
}

impl WordSearch {
    fn off_circle(&mut self, m: &IntMatrix) -> bool {
        self.checked += 1;
        if !trace_bound_holds(m) {
            return true;
        }
        let p = m.charpoly();
        if let Some(&on) = self.cache.get(&p) {
            return !on;
        }
        let on = spec_on_unit_circle(&p).unwrap_or(false);
        self.cache.insert(p, on);
        !on
    }

    /// Depth-first search in lexicographic order over freely reduced words
    /// of exactly `self.len` letters extending `prefix`.
    fn dfs(&mut self, prefix: &mut Vec<usize>, product: &IntMatrix) -> Option<IntMatrix> {
        if prefix.len() == self.len {
            return self.off_circle(product).then(|| product.clone());
        }
        let last = prefix.last().map(|&c| Letter::from_code(c));
        for code in 0..self.letters.len() {
            if last.is_some_and(|l| l.cancels(Letter::from_code(code))) {
                continue;
            }
            let next = product * &self.letters[code];
            prefix.push(code);
            if let Some(m) = self.dfs(prefix, &next) {
                return Some(m);
            }
            prefix.pop();
        }
        None
    }
}

/// Word search over all freely reduced words up to `max_len`, shortest
/// first and lexicographic within a length (`g1 < g1^-1 < g2 < ...`).
fn search_words(gens: &[IntMatrix], inverses: &[IntMatrix], max_len: usize) -> (Option<(Word, IntMatrix)>, usize) {
    let letters: Vec<IntMatrix> = (0..2 * gens.len())
        .map(|c| {
            let l = Letter::from_code(c);
            if l.inverse { inverses[l.index].clone() } else { gens[l.index].clone() }
        })
        .collect();
    let mut checked = 0;
    for len in 1..=max_len {
        let results: Vec<(Option<(Vec<usize>, IntMatrix)>, usize)> = (0..letters.len())
            .into_par_iter()
            .map(|first| {
                let mut s = WordSearch {
                    letters: letters.clone(),
                    len,
                    cache: HashMap::new(),
                    checked: 0,
                };
                let mut prefix = vec![first];
                let hit = s.dfs(&mut prefix, &letters[first]).map(|m| (prefix, m));
                (hit, s.checked)
            })
            .collect();
        for (hit, c) in results {
            checked += c;
            if let Some((codes, m)) = hit {
                let word = Word(codes.into_iter().map(Letter::from_code).collect());
                return (Some((word, m)), checked);
            }
        }
    }
    (None, checked)
}

/// Closure enumeration, then a commuting-generator certificate, then a
/// bounded word search; `Inconclusive` when all three are exhausted.
pub fn group_spec_verdict(gens: &[IntMatrix], params: &SearchParams) -> Result<GroupVerdict> {
    check_generators(gens)?;
    let inverses = gens.iter().map(IntMatrix::inverse_gl).collect::<Result<Vec<_>>>()?;
    if let Closure::Finite(elements) = enumerate_closure(gens, &inverses, params.closure_cap.max(1)) {
        if elements.iter().all(|e| spec_on_unit_circle(&e.charpoly()).unwrap_or(false)) {
            let order = elements.len();
            return Ok(GroupVerdict::AllOnUnitCircle {
                certificate: UnitCircleCertificate::FiniteClosure { order, elements },
            });
        }
    }
    if pairwise_commute(gens) {
        let factorizations: Option<Vec<Vec<u64>>> = gens.iter().map(|g| cyclotomic_factorization(&g.charpoly())).collect();
        if let Some(factorizations) = factorizations {
            return Ok(GroupVerdict::AllOnUnitCircle {
                certificate: UnitCircleCertificate::CommutingGenerators { factorizations },
            });
        }
    }
    let (hit, words_checked) = search_words(gens, &inverses, params.max_word_len);
    match hit {
        Some((word, matrix)) => {
            let charpoly = matrix.charpoly();
            let spectral_radius = spectral_radius(&matrix, 1e-12)?;
            Ok(GroupVerdict::HyperbolicWitness { word, matrix, charpoly, spectral_radius })
        }
        None => Ok(GroupVerdict::Inconclusive {
            max_word_len: params.max_word_len,
            closure_cap: params.closure_cap,
            words_checked,
        }),
    }
}
