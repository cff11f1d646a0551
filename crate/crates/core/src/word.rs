//! Words in the free group on two generators `a`, `b`.
//!
//! Letters are written `a`, `A` (= a⁻¹), `b`, `B` (= b⁻¹). The derived
//! ordering on [`Letter`] (`a < A < b < B`) is only used to pick canonical
//! representatives; it has no geometric meaning.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {0:?} (expected one of a, A, b, B)")]
    InvalidLetter(char),
    #[error("word reduces to the identity")]
    Identity,
    #[error("prefix index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),
}

/// A generator or the inverse of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    /// Dense index in `0..4`, following the derived order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_char(c: char) -> Result<Letter, WordError> {
        match c {
            'a' => Ok(Letter::A),
            'A' => Ok(Letter::AInv),
            'b' => Ok(Letter::B),
            'B' => Ok(Letter::BInv),
            other => Err(WordError::InvalidLetter(other)),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

fn parse_letters(s: &str) -> Result<Vec<Letter>, WordError> {
    s.chars().map(Letter::from_char).collect()
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    for l in letters {
        write!(f, "{}", l.to_char())?;
    }
    Ok(())
}

/// Free reduction: cancels adjacent inverse pairs until none remain.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[1] != p[0].inverse())
}

fn is_cyclically_reduced(letters: &[Letter]) -> bool {
    !letters.is_empty() && is_reduced(letters) && letters[letters.len() - 1] != letters[0].inverse()
}

/// A freely reduced element of the free group. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// Builds a word from letters that are already reduced.
    ///
    /// Falls back to free reduction if they are not.
    pub fn from_letters(letters: Vec<Letter>) -> Word {
        if is_reduced(&letters) {
            Word(letters)
        } else {
            free_reduce(letters)
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        // both factors are reduced, so cancellation happens only at the seam
        let (x, y) = (&self.0, &other.0);
        let mut c = 0;
        while c < x.len() && c < y.len() && x[x.len() - 1 - c] == y[c].inverse() {
            c += 1;
        }
        let mut out = Vec::with_capacity(x.len() + y.len() - 2 * c);
        out.extend_from_slice(&x[..x.len() - c]);
        out.extend_from_slice(&y[c..]);
        Word(out)
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let n = exp.unsigned_abs() as usize;
        free_reduce(base.0.iter().copied().cycle().take(base.len() * n))
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        is_cyclically_reduced(&self.0)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(free_reduce(parse_letters(s)?))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

/// Strips matching first/last inverse pairs until the word is cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> Result<CyclicWord, WordError> {
    let letters = w.letters();
    if letters.is_empty() {
        return Err(WordError::Identity);
    }
    let (mut lo, mut hi) = (0, letters.len());
    while hi - lo >= 2 && letters[hi - 1] == letters[lo].inverse() {
        lo += 1;
        hi -= 1;
    }
    Ok(CyclicWord::from_cyclically_reduced(letters[lo..hi].to_vec()))
}

/// Index of the lexicographically least rotation (two-pointer scan, O(n)).
pub fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let (x, y) = (s[(i + k) % n], s[(j + k) % n]);
        if x == y {
            k += 1;
            continue;
        }
        if x > y {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

fn rotate(s: &[Letter], start: usize) -> Vec<Letter> {
    s[start..].iter().chain(s[..start].iter()).copied().collect()
}

/// A conjugacy class of nontrivial elements, stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    /// Validates cyclic reduction and stores the least rotation.
    pub fn new(letters: Vec<Letter>) -> Result<CyclicWord, WordError> {
        if letters.is_empty() {
            return Err(WordError::Identity);
        }
        if !is_cyclically_reduced(&letters) {
            return Err(WordError::NotCyclicallyReduced(
                letters.iter().map(|l| l.to_char()).collect(),
            ));
        }
        Ok(Self::from_cyclically_reduced(letters))
    }

    fn from_cyclically_reduced(letters: Vec<Letter>) -> CyclicWord {
        debug_assert!(is_cyclically_reduced(&letters));
        let k = least_rotation(&letters);
        if k == 0 {
            CyclicWord(letters)
        } else {
            CyclicWord(rotate(&letters, k))
        }
    }

    /// Parses a/A/b/B text, freely reducing and cyclically reducing it.
    pub fn parse(s: &str) -> Result<CyclicWord, WordError> {
        cyclic_reduce(&s.parse::<Word>()?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Combinatorial length.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn invert(&self) -> CyclicWord {
        Self::from_cyclically_reduced(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `w^m` for `m >= 1`.
    pub fn power(&self, m: usize) -> CyclicWord {
        assert!(m >= 1, "power must be positive");
        Self::from_cyclically_reduced(self.0.repeat(m))
    }

    pub fn is_primitive(&self) -> bool {
        let n = self.0.len();
        (1..n)
            .filter(|p| n.is_multiple_of(*p))
            .all(|p| (0..n).any(|i| self.0[i] != self.0[(i + p) % n]))
    }

    /// The rotations `w_1, …, w_L`, where `w_i` starts at the `i`-th letter.
    pub fn cyclic_shifts(&self) -> Vec<Word> {
        (0..self.0.len()).map(|i| Word(rotate(&self.0, i))).collect()
    }

    /// `p_i = e_1 … e_{i-1}` for `1 <= i <= L`.
    pub fn prefix(&self, i: usize) -> Result<Word, WordError> {
        if i == 0 || i > self.0.len() {
            return Err(WordError::IndexOutOfRange {
                index: i,
                len: self.0.len(),
            });
        }
        Ok(Word(self.0[..i - 1].to_vec()))
    }

    /// Least word among all rotations of `self` and of its inverse.
    pub fn canonical_class(&self) -> CyclicWord {
        let inv = self.invert();
        if inv.0 < self.0 {
            inv
        } else {
            self.clone()
        }
    }

    pub fn is_canonical_class(&self) -> bool {
        is_canonical_class(&self.0)
    }
}

/// True iff `s` is cyclically reduced and is the least word among its
/// rotations and the rotations of its inverse. Early-exits on the first
/// smaller rotation, which is what makes exhaustive enumeration cheap.
pub fn is_canonical_class(s: &[Letter]) -> bool {
    let n = s.len();
    if !is_cyclically_reduced(s) {
        return false;
    }
    let inv: Vec<Letter> = s.iter().rev().map(|l| l.inverse()).collect();
    let smaller = |candidate: &[Letter], shift: usize| {
        for k in 0..n {
            match candidate[(shift + k) % n].cmp(&s[k]) {
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
        false
    };
    for start in 0..n {
        if (start > 0 && smaller(s, start)) || smaller(&inv, start) {
            return false;
        }
    }
    true
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl FromStr for CyclicWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CyclicWord::parse(s)
    }
}
