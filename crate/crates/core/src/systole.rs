//! Exhaustive census of primitive classes by combinatorial length and the
//! combinatorial k-systole tables built on top of it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{Chart, SurfaceKind};
use crate::intersection::{self_intersection_with, upper_bound};
use crate::word::{is_canonical_class, CyclicWord, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystoleError {
    #[error("witness family {family} does not live on the {kind}")]
    FamilyMismatch { family: Family, kind: SurfaceKind },
    #[error("witness index must be at least 1")]
    ZeroIndex,
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub word: CyclicWord,
    pub kind: SurfaceKind,
    pub length: usize,
    pub self_intersection: usize,
}

impl ClassRecord {
    pub fn saturates_bound(&self) -> bool {
        self.self_intersection == upper_bound(self.kind, self.length)
    }
}

/// All canonical primitive classes of exactly `len` letters, sorted.
///
/// The search space is split by the first two letters; each chunk is
/// enumerated independently and the results are concatenated in letter
/// order, so the output does not depend on the thread pool.
pub fn canonical_words(len: usize) -> Vec<CyclicWord> {
    if len == 0 {
        return Vec::new();
    }
    if len == 1 {
        return Letter::ALL
            .iter()
            .map(|&l| CyclicWord::new(vec![l]).unwrap())
            .filter(|w| w.is_canonical_class())
            .collect();
    }
    let seeds: Vec<[Letter; 2]> = Letter::ALL
        .iter()
        .flat_map(|&x| Letter::ALL.iter().map(move |&y| [x, y]))
        .filter(|p| p[1] != p[0].inverse())
        .collect();
    let chunks: Vec<Vec<CyclicWord>> = seeds
        .par_iter()
        .map(|seed| {
            let mut out = Vec::new();
            let mut buf = Vec::with_capacity(len);
            buf.extend_from_slice(seed);
            extend(&mut buf, len, &mut out);
            out
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

fn extend(buf: &mut Vec<Letter>, len: usize, out: &mut Vec<CyclicWord>) {
    if buf.len() == len {
        if is_canonical_class(buf) {
            let w = CyclicWord::new(buf.clone()).expect("canonical words are cyclically reduced");
            if w.is_primitive() {
                out.push(w);
            }
        }
        return;
    }
    let last = *buf.last().expect("seeded with two letters");
    for l in Letter::ALL {
        // A canonical word starts with its least letter.
        if l == last.inverse() || l < buf[0] {
            continue;
        }
        buf.push(l);
        extend(buf, len, out);
        buf.pop();
    }
}

/// Census of one length: every canonical primitive class with its exact
/// self-intersection number, ordered lexicographically by word.
pub fn census_of_length(kind: SurfaceKind, len: usize) -> Vec<ClassRecord> {
    let chart = Chart::new(kind);
    canonical_words(len)
        .into_par_iter()
        .map(|word| {
            let i = self_intersection_with(&chart, &word).expect("canonical words are primitive");
            ClassRecord {
                length: len,
                self_intersection: i,
                word,
                kind,
            }
        })
        .collect()
}

/// Every primitive class with `1 <= L <= max_len`, ordered by length then word.
pub fn enumerate_classes(kind: SurfaceKind, max_len: usize) -> impl Iterator<Item = ClassRecord> {
    (1..=max_len).flat_map(move |len| census_of_length(kind, len))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `a(ab̄)^n`, length `2n+1`, on the pants.
    PantsOdd,
    /// `a^{n+1} b^{n+2}`, length `2n+3`, on the torus.
    TorusOdd,
    /// `a^{n+1} b^{n+1}`, length `2n+2`, on the torus.
    TorusEven,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::PantsOdd => "pants_odd",
            Family::TorusOdd => "torus_odd",
            Family::TorusEven => "torus_even",
        })
    }
}

pub fn witness(kind: SurfaceKind, family: Family, n: usize) -> Result<CyclicWord, SystoleError> {
    use Letter::*;
    if n == 0 {
        return Err(SystoleError::ZeroIndex);
    }
    let letters = match (kind, family) {
        (SurfaceKind::Pants, Family::PantsOdd) => {
            let mut v = vec![A];
            for _ in 0..n {
                v.extend([A, BInv]);
            }
            v
        }
        (SurfaceKind::PuncturedTorus, Family::TorusOdd) => [vec![A; n + 1], vec![B; n + 2]].concat(),
        (SurfaceKind::PuncturedTorus, Family::TorusEven) => [vec![A; n + 1], vec![B; n + 1]].concat(),
        _ => return Err(SystoleError::FamilyMismatch { family, kind }),
    };
    Ok(CyclicWord::new(letters).expect("witness words are cyclically reduced"))
}

/// Length cap `2⌈√k⌉ + 3` within which the witness families guarantee a
/// class with at least `k` self-intersections.
pub fn length_cap(k: usize) -> usize {
    let mut r = 0usize;
    while r * r < k {
        r += 1;
    }
    2 * r + 3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystoleRecord {
    pub k: usize,
    /// Least combinatorial length carrying a class with `i >= k`.
    pub length: usize,
    /// Largest `i` among classes of that length with `i >= k`.
    pub max_intersection: usize,
    pub witnesses: Vec<CyclicWord>,
}

impl SystoleRecord {
    pub fn excess(&self) -> usize {
        self.max_intersection - self.k
    }
}

/// Census grown one length at a time and shared between queries.
#[derive(Debug, Clone)]
pub struct Census {
    kind: SurfaceKind,
    by_length: BTreeMap<usize, Vec<ClassRecord>>,
}

impl Census {
    pub fn new(kind: SurfaceKind) -> Census {
        Census {
            kind,
            by_length: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn length(&mut self, len: usize) -> &[ClassRecord] {
        let kind = self.kind;
        self.by_length.entry(len).or_insert_with(|| census_of_length(kind, len))
    }

    pub fn computed_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_length.keys().copied()
    }

    pub fn max_intersection(&mut self, len: usize) -> usize {
        self.length(len).iter().map(|r| r.self_intersection).max().unwrap_or(0)
    }

    /// `s_k`, `I_k` and the minimizing classes, searching lengths in
    /// increasing order up to [`length_cap`].
    pub fn systole(&mut self, k: usize) -> Result<SystoleRecord, SystoleError> {
        if k == 0 {
            return Err(SystoleError::ZeroK);
        }
        for len in 1..=length_cap(k) {
            let hits: Vec<&ClassRecord> = self.length(len).iter().filter(|r| r.self_intersection >= k).collect();
            if let Some(best) = hits.iter().map(|r| r.self_intersection).max() {
                let witnesses = hits
                    .iter()
                    .filter(|r| r.self_intersection == best)
                    .map(|r| r.word.clone())
                    .collect();
                return Ok(SystoleRecord {
                    k,
                    length: len,
                    max_intersection: best,
                    witnesses,
                });
            }
        }
        unreachable!("witness families realize i >= k within the length cap")
    }

    pub fn sequence(&mut self, k_max: usize) -> Result<Vec<SystoleRecord>, SystoleError> {
        (1..=k_max).map(|k| self.systole(k)).collect()
    }
}

pub fn systole(kind: SurfaceKind, k: usize) -> Result<SystoleRecord, SystoleError> {
    Census::new(kind).systole(k)
}

pub fn sequence(kind: SurfaceKind, k_max: usize) -> Result<Vec<SystoleRecord>, SystoleError> {
    Census::new(kind).sequence(k_max)
}

/// The `n` with `n² − n < k <= n² + n`.
pub fn bracket(k: usize) -> usize {
    let mut n = 0;
    while n * n + n < k {
        n += 1;
    }
    n
}
