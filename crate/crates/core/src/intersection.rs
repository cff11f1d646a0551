//! Exact self-intersection numbers from Bowen–Series codings.
//!
//! For a primitive cyclically reduced word `w = e_1 … e_L`, the lifts of the
//! closed geodesic that cross the fundamental domain are the axes of the
//! rotations `w_i = p_i⁻¹ w p_i` with `p_i = e_1 … e_{i-1}`. A linked pair of
//! lifts `(i, j)` is carried by `p_i` to the pair `(axis(w), u·axis(w))` with
//! `u = p_i p_j⁻¹`, so its orbit under the deck group is the double coset
//! `⟨w⟩ u ⟨w⟩`, taken together with the one of `u⁻¹` (swapping the two lifts).
//!
//! Double cosets are compared through the conjugate `z = u w u⁻¹`: the map
//! `⟨w⟩u⟨w⟩ ↦ {wᵏ z w⁻ᵏ}` is a bijection for primitive `w`, and
//! `k ↦ |wᵏ z w⁻ᵏ|` is convex, so a descent from `k = 0` followed by a
//! plateau sweep finds every minimal-length conjugate.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chart::{Chart, ChartError, EndpointPair, SurfaceKind};
use crate::word::{CyclicWord, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntersectionError {
    #[error("word {0} is a proper power; only primitive classes are supported")]
    NonPrimitive(String),
    #[error("pair ({i}, {j}) is not a valid lift pair for a word of length {len}")]
    BadPair { i: usize, j: usize, len: usize },
    #[error("lift pair ({i}, {j}) of {word} collapses into the cyclic subgroup")]
    Degenerate { word: String, i: usize, j: usize },
    #[error(transparent)]
    Chart(#[from] ChartError),
}

/// A lift of the closed geodesic crossing the fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    /// 1-based rotation index.
    pub index: usize,
    pub shift: Word,
    pub endpoints: EndpointPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkedPair {
    pub i: usize,
    pub j: usize,
}

/// Orbit of an intersecting lift pair under the deck group.
///
/// `conjugate` is the shortlex-least element of `{wᵏ z w⁻ᵏ}` over both
/// orientations of the pair; `representative` is a shortest element of the
/// corresponding double coset. Either field alone determines the class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairClass {
    pub conjugate: Word,
    pub representative: Word,
}

fn require_primitive(w: &CyclicWord) -> Result<(), IntersectionError> {
    if w.is_primitive() {
        Ok(())
    } else {
        Err(IntersectionError::NonPrimitive(w.to_string()))
    }
}

pub fn lifts_cyc(w: &CyclicWord) -> Result<Vec<Lift>, IntersectionError> {
    require_primitive(w)?;
    w.cyclic_shifts()
        .into_iter()
        .enumerate()
        .map(|(k, shift)| {
            let endpoints = EndpointPair::axis_of(&shift)?;
            Ok(Lift {
                index: k + 1,
                shift,
                endpoints,
            })
        })
        .collect()
}

/// Linked pairs among `lifts`, found by sorting all endpoints once along the
/// circle instead of comparing every quadruple.
fn linked_pairs_with(chart: &Chart, lifts: &[Lift]) -> Result<Vec<LinkedPair>, IntersectionError> {
    let mut order: Vec<(usize, bool)> = (0..lifts.len()).flat_map(|a| [(a, false), (a, true)]).collect();
    let point = |&(a, fwd): &(usize, bool)| {
        let e = &lifts[a].endpoints;
        if fwd {
            &e.forward
        } else {
            &e.backward
        }
    };
    order.sort_by(|x, y| chart.compare(point(x), point(y)));
    if let Some(p) = order
        .windows(2)
        .find(|p| chart.compare(point(&p[0]), point(&p[1])) == std::cmp::Ordering::Equal)
    {
        return Err(ChartError::SharedEndpoint(point(&p[0]).to_string()).into());
    }
    let mut span = vec![(0usize, 0usize); lifts.len()];
    for (pos, &(a, fwd)) in order.iter().enumerate() {
        if fwd {
            span[a].1 = pos;
        } else {
            span[a].0 = pos;
        }
    }
    let mut out = Vec::new();
    for a in 0..lifts.len() {
        let (lo, hi) = (span[a].0.min(span[a].1), span[a].0.max(span[a].1));
        let inside = |x: usize| lo < x && x < hi;
        for b in a + 1..lifts.len() {
            if inside(span[b].0) != inside(span[b].1) {
                out.push(LinkedPair {
                    i: lifts[a].index,
                    j: lifts[b].index,
                });
            }
        }
    }
    Ok(out)
}

pub fn linked_pairs(kind: SurfaceKind, w: &CyclicWord) -> Result<Vec<LinkedPair>, IntersectionError> {
    let lifts = lifts_cyc(w)?;
    linked_pairs_with(&Chart::new(kind), &lifts)
}

/// `u = p_i p_j⁻¹`, the element carrying lift `j` next to `axis(w)` once lift
/// `i` has been moved onto it.
pub fn pair_transporter(w: &CyclicWord, i: usize, j: usize) -> Result<Word, IntersectionError> {
    let bad = || IntersectionError::BadPair { i, j, len: w.len() };
    if i == 0 || i >= j || j > w.len() {
        return Err(bad());
    }
    let pi = w.prefix(i).map_err(|_| bad())?;
    let pj = w.prefix(j).map_err(|_| bad())?;
    Ok(pi.mul(&pj.inverse()))
}

fn shortlex(a: &Word, b: &Word) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Minimizes a convex length function over `k ∈ ℤ`, where `step(x, ±1)`
/// moves from the value at `k` to the value at `k ± 1`. Returns every
/// minimizer as `(k, value)`.
fn convex_minimizers<F>(start: Word, step: F) -> Vec<(i64, Word)>
where
    F: Fn(&Word, i64) -> Word,
{
    let plus = step(&start, 1);
    let dir = if plus.len() < start.len() {
        1
    } else if step(&start, -1).len() < start.len() {
        -1
    } else {
        0
    };
    let (mut k, mut best) = (0i64, start);
    if dir != 0 {
        loop {
            let next = step(&best, dir);
            if next.len() >= best.len() {
                break;
            }
            k += dir;
            best = next;
        }
    }
    let len = best.len();
    let mut out = vec![(k, best.clone())];
    for d in [1i64, -1] {
        let (mut t, mut cur) = (k, best.clone());
        loop {
            let cand = step(&cur, d);
            if cand.len() != len {
                break;
            }
            t += d;
            out.push((t, cand.clone()));
            cur = cand;
        }
    }
    out
}

fn least(found: Vec<(i64, Word)>) -> (i64, Word) {
    found
        .into_iter()
        .min_by(|a, b| shortlex(&a.1, &b.1))
        .expect("at least one minimizer")
}

/// Shortlex-least element of `{wᵏ z w⁻ᵏ}` for `z = u w u⁻¹`, with its `k`.
fn least_conjugate(w: &Word, w_inv: &Word, u: &Word) -> (i64, Word) {
    let z = u.mul(w).mul(&u.inverse());
    least(convex_minimizers(z, |x, d| {
        if d > 0 {
            w.mul(x).mul(w_inv)
        } else {
            w_inv.mul(x).mul(w)
        }
    }))
}

/// Shortlex-least element of `wᵏ u ⟨w⟩`.
fn coset_representative(w: &Word, w_inv: &Word, u: &Word, k: i64) -> Word {
    let left = w.pow(k).mul(u);
    least(convex_minimizers(
        left,
        |x, d| if d > 0 { x.mul(w) } else { x.mul(w_inv) },
    ))
    .1
}

/// The conjugate half of [`PairClass`], enough to tell classes apart.
fn class_key(base: &Word, base_inv: &Word, u: &Word) -> Option<Word> {
    let (_, fwd) = least_conjugate(base, base_inv, u);
    if &fwd == base {
        return None;
    }
    let (_, bwd) = least_conjugate(base, base_inv, &u.inverse());
    Some(if shortlex(&bwd, &fwd).is_lt() { bwd } else { fwd })
}

fn class_of_transporter(w: &CyclicWord, u: &Word) -> Option<PairClass> {
    let base = w.as_word();
    let base_inv = base.inverse();
    let u_inv = u.inverse();
    let (kf, fwd) = least_conjugate(&base, &base_inv, u);
    if fwd == base {
        return None;
    }
    let (kb, bwd) = least_conjugate(&base, &base_inv, &u_inv);
    let rep_f = || coset_representative(&base, &base_inv, u, kf);
    let rep_b = || coset_representative(&base, &base_inv, &u_inv, kb);
    let (conjugate, representative) = match shortlex(&fwd, &bwd) {
        std::cmp::Ordering::Less => (fwd, rep_f()),
        std::cmp::Ordering::Greater => (bwd, rep_b()),
        std::cmp::Ordering::Equal => {
            let (rf, rb) = (rep_f(), rep_b());
            (fwd, if shortlex(&rb, &rf).is_lt() { rb } else { rf })
        }
    };
    Some(PairClass {
        conjugate,
        representative,
    })
}

pub fn pair_class(w: &CyclicWord, i: usize, j: usize) -> Result<PairClass, IntersectionError> {
    require_primitive(w)?;
    let u = pair_transporter(w, i, j)?;
    class_of_transporter(w, &u).ok_or_else(|| IntersectionError::Degenerate {
        word: w.to_string(),
        i,
        j,
    })
}

/// Distinct orbits among the linked pairs, i.e. `#I_γ/∼`.
pub fn pair_classes(kind: SurfaceKind, w: &CyclicWord) -> Result<Vec<(LinkedPair, PairClass)>, IntersectionError> {
    linked_pairs(kind, w)?
        .into_iter()
        .map(|p| {
            let c = pair_class(w, p.i, p.j)?;
            Ok((p, c))
        })
        .collect()
}

pub fn self_intersection_with(chart: &Chart, w: &CyclicWord) -> Result<usize, IntersectionError> {
    let lifts = lifts_cyc(w)?;
    let pairs = linked_pairs_with(chart, &lifts)?;
    let base = w.as_word();
    let base_inv = base.inverse();
    let prefixes: Vec<Word> = (1..=w.len()).map(|i| w.prefix(i).expect("index in range")).collect();
    let mut seen = HashSet::with_capacity(pairs.len());
    for p in &pairs {
        let u = prefixes[p.i - 1].mul(&prefixes[p.j - 1].inverse());
        let key = class_key(&base, &base_inv, &u).ok_or_else(|| IntersectionError::Degenerate {
            word: w.to_string(),
            i: p.i,
            j: p.j,
        })?;
        seen.insert(key);
    }
    Ok(seen.len())
}

pub fn self_intersection(kind: SurfaceKind, w: &CyclicWord) -> Result<usize, IntersectionError> {
    self_intersection_with(&Chart::new(kind), w)
}

/// Same count with the pair loop spread over the rayon pool. The class set
/// is merged as a set, so the result does not depend on scheduling.
pub fn self_intersection_par(kind: SurfaceKind, w: &CyclicWord) -> Result<usize, IntersectionError> {
    let chart = Chart::new(kind);
    let lifts = lifts_cyc(w)?;
    let n = lifts.len();
    let base = w.as_word();
    let base_inv = base.inverse();
    let prefixes: Vec<Word> = (1..=n).map(|i| w.prefix(i).expect("index in range")).collect();
    let keys: Result<Vec<Option<Word>>, IntersectionError> = (0..n * n)
        .into_par_iter()
        .filter(|idx| idx / n < idx % n)
        .map(|idx| {
            let (a, b) = (idx / n, idx % n);
            if !chart.linked(&lifts[a].endpoints, &lifts[b].endpoints)? {
                return Ok(None);
            }
            let u = prefixes[a].mul(&prefixes[b].inverse());
            class_key(&base, &base_inv, &u)
                .map(Some)
                .ok_or_else(|| IntersectionError::Degenerate {
                    word: w.to_string(),
                    i: a + 1,
                    j: b + 1,
                })
        })
        .collect();
    Ok(keys?.into_iter().flatten().collect::<HashSet<_>>().len())
}

/// Maximal self-intersection of a primitive class of combinatorial length
/// `len` on the given surface.
pub fn upper_bound(kind: SurfaceKind, len: usize) -> usize {
    let l = len;
    match kind {
        SurfaceKind::Pants if l.is_multiple_of(2) => l * l / 4,
        SurfaceKind::Pants => (l * l - 1) / 4,
        SurfaceKind::PuncturedTorus if l < 3 => 0,
        SurfaceKind::PuncturedTorus if l.is_multiple_of(2) => (l - 2) * (l - 2) / 4,
        SurfaceKind::PuncturedTorus => (l - 1) * (l - 3) / 4,
    }
}

/// The trivial bound `L(L−1)/2`: one point per unordered pair of lifts.
pub fn pair_count_bound(len: usize) -> usize {
    len * len.saturating_sub(1) / 2
}

/// Endpoint pair of the `i`-th lift (1-based).
pub fn lift_endpoints(w: &CyclicWord, i: usize) -> Result<EndpointPair, IntersectionError> {
    let shift = w
        .cyclic_shifts()
        .into_iter()
        .nth(i.wrapping_sub(1))
        .ok_or(IntersectionError::BadPair { i, j: i, len: w.len() })?;
    Ok(EndpointPair::axis_of(&shift)?)
}
