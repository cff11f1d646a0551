//! Circular arrangement of the half-spaces `D(e)` and the induced order on
//! infinite reduced words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{CyclicWord, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("unknown surface {0:?} (expected `pants` or `torus`)")]
    UnknownSurface(String),
    #[error("period {0} does not define a reduced infinite word")]
    NotPeriodic(String),
    #[error("geodesics share the endpoint {0}")]
    SharedEndpoint(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Pants,
    #[serde(rename = "torus")]
    PuncturedTorus,
}

impl SurfaceKind {
    pub const ALL: [SurfaceKind; 2] = [SurfaceKind::Pants, SurfaceKind::PuncturedTorus];

    /// Counterclockwise order in which the domains `D(e)` meet the boundary
    /// circle, starting at `D(a)`.
    pub fn arrangement(self) -> [Letter; 4] {
        use Letter::*;
        match self {
            SurfaceKind::Pants => [A, BInv, B, AInv],
            SurfaceKind::PuncturedTorus => [A, BInv, AInv, B],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Pants => "pants",
            SurfaceKind::PuncturedTorus => "torus",
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurfaceKind {
    type Err = ChartError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pants" => Ok(SurfaceKind::Pants),
            "torus" | "punctured_torus" => Ok(SurfaceKind::PuncturedTorus),
            other => Err(ChartError::UnknownSurface(other.to_string())),
        }
    }
}

/// The alphabet `Γ_e`: the circular arrangement read from `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphabetOrder {
    sequence: [Letter; 4],
    rank: [u8; 4],
}

impl AlphabetOrder {
    pub fn first(&self) -> Letter {
        self.sequence[0]
    }

    pub fn sequence(&self) -> [Letter; 4] {
        self.sequence
    }

    pub fn rank(&self, l: Letter) -> u8 {
        self.rank[l.index()]
    }

    pub fn cmp_letters(&self, x: Letter, y: Letter) -> Ordering {
        self.rank(x).cmp(&self.rank(y))
    }
}

pub fn alphabet_order(kind: SurfaceKind, first: Letter) -> AlphabetOrder {
    let arr = kind.arrangement();
    let start = arr.iter().position(|&l| l == first).expect("every letter appears");
    let mut sequence = arr;
    sequence.rotate_left(start);
    let mut rank = [0u8; 4];
    for (r, l) in sequence.iter().enumerate() {
        rank[l.index()] = r as u8;
    }
    AlphabetOrder { sequence, rank }
}

/// Precomputed rank tables for one surface: `rank[context][letter]`, where
/// context 4 is the anchor alphabet `Γ_a` used at position 0 and context
/// `e.index()` is the alphabet `Γ_{ē}` used after the letter `e`.
#[derive(Debug, Clone, Copy)]
pub struct Chart {
    kind: SurfaceKind,
    rank: [[u8; 4]; 5],
}

const ANCHOR: usize = 4;

impl Chart {
    pub fn new(kind: SurfaceKind) -> Chart {
        let mut rank = [[0u8; 4]; 5];
        for prev in Letter::ALL {
            rank[prev.index()] = alphabet_order(kind, prev.inverse()).rank;
        }
        rank[ANCHOR] = alphabet_order(kind, Letter::A).rank;
        Chart { kind, rank }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    /// Order `<_A` on the infinite words `u^∞` and `v^∞`.
    pub fn compare(&self, u: &PeriodicWord, v: &PeriodicWord) -> Ordering {
        let (p, q) = (u.period.len(), v.period.len());
        // Periodic words agreeing on p + q letters coincide (Fine–Wilf).
        let mut prev = ANCHOR;
        for k in 0..p + q {
            let (x, y) = (u.period[k % p], v.period[k % q]);
            if x != y {
                let table = &self.rank[prev];
                return table[x.index()].cmp(&table[y.index()]);
            }
            prev = x.index();
        }
        Ordering::Equal
    }

    /// Whether two oriented geodesics, given by their (backward, forward)
    /// endpoint codings, have alternating endpoints on the circle.
    pub fn linked(&self, g1: &EndpointPair, g2: &EndpointPair) -> Result<bool, ChartError> {
        let pts = [&g1.backward, &g1.forward, &g2.backward, &g2.forward];
        for i in 0..4 {
            for j in i + 1..4 {
                if self.compare(pts[i], pts[j]) == Ordering::Equal {
                    return Err(ChartError::SharedEndpoint(pts[i].to_string()));
                }
            }
        }
        let (lo, hi) = match self.compare(&g1.backward, &g1.forward) {
            Ordering::Less => (&g1.backward, &g1.forward),
            _ => (&g1.forward, &g1.backward),
        };
        let inside = |x: &PeriodicWord| self.compare(lo, x) == Ordering::Less && self.compare(x, hi) == Ordering::Less;
        Ok(inside(&g2.backward) != inside(&g2.forward))
    }
}

pub fn compare(kind: SurfaceKind, u: &PeriodicWord, v: &PeriodicWord) -> Ordering {
    Chart::new(kind).compare(u, v)
}

pub fn linked(kind: SurfaceKind, g1: &EndpointPair, g2: &EndpointPair) -> Result<bool, ChartError> {
    Chart::new(kind).linked(g1, g2)
}

/// The infinite reduced word `period · period · …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PeriodicWord {
    period: Vec<Letter>,
}

impl PeriodicWord {
    pub fn new(period: &Word) -> Result<PeriodicWord, ChartError> {
        if !period.is_cyclically_reduced() {
            return Err(ChartError::NotPeriodic(period.to_string()));
        }
        Ok(PeriodicWord {
            period: period.letters().to_vec(),
        })
    }

    pub fn parse(s: &str) -> Result<PeriodicWord, ChartError> {
        let w: Word = s.parse().map_err(|_| ChartError::NotPeriodic(s.to_string()))?;
        if w.len() != s.chars().count() {
            return Err(ChartError::NotPeriodic(s.to_string()));
        }
        PeriodicWord::new(&w)
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn period_word(&self) -> Word {
        Word::from_letters(self.period.clone())
    }

    /// The `k`-th letter of the infinite word.
    pub fn letter(&self, k: usize) -> Letter {
        self.period[k % self.period.len()]
    }

    /// Backward endpoint `(v⁻¹)^∞` of the axis whose forward endpoint is `v^∞`.
    pub fn reversed(&self) -> PeriodicWord {
        PeriodicWord {
            period: self.period.iter().rev().map(|l| l.inverse()).collect(),
        }
    }
}

impl From<&CyclicWord> for PeriodicWord {
    fn from(w: &CyclicWord) -> Self {
        PeriodicWord {
            period: w.letters().to_vec(),
        }
    }
}

impl fmt::Display for PeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for l in &self.period {
            write!(f, "{}", l.to_char())?;
        }
        write!(f, ")^inf")
    }
}

/// Endpoint codings of an oriented geodesic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EndpointPair {
    pub backward: PeriodicWord,
    pub forward: PeriodicWord,
}

impl EndpointPair {
    /// Endpoints of the axis of the cyclically reduced word `v`.
    pub fn axis_of(v: &Word) -> Result<EndpointPair, ChartError> {
        let forward = PeriodicWord::new(v)?;
        Ok(EndpointPair {
            backward: forward.reversed(),
            forward,
        })
    }

    pub fn reversed(&self) -> EndpointPair {
        EndpointPair {
            backward: self.forward.clone(),
            forward: self.backward.clone(),
        }
    }
}
