//! Finite-range checks of the bound, sharpness, witness, systole and oracle
//! claims, collected into a report instead of failing fast.

use std::fmt;

use serde::Serialize;

use crate::chart::{Chart, PeriodicWord, SurfaceKind};
use crate::intersection::{linked_pairs, pair_class, self_intersection_with, upper_bound};
use crate::oracle::{standard_config, SchottkyConfig, DEFAULT_LAMBDA_A, DEFAULT_LAMBDA_B};
use crate::systole::{bracket, length_cap, witness, Census, Family, SystoleRecord};
use crate::word::{CyclicWord, Letter, Word};

/// Predicted self-intersection of the `n`-th member of a family.
type Prediction = fn(usize) -> usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Measured and reported, not asserted.
    Empirical,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Empirical => "EMPIRICAL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub scale: String,
    pub status: Status,
    pub counterexample: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub kind: SurfaceKind,
    pub max_length: usize,
    pub k_max: usize,
    pub entries: Vec<ClaimResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verify {} max_length={} k_max={}",
            self.kind, self.max_length, self.k_max
        )?;
        for e in &self.entries {
            write!(f, "[{:<9}] {:<28} {:<16} {}", e.status, e.claim, e.scale, e.detail)?;
            if let Some(c) = &e.counterexample {
                write!(f, " counterexample={c}")?;
            }
            writeln!(f)?;
        }
        let fails = self.failures().count();
        write!(
            f,
            "summary: {} claims, {} failed, {}",
            self.entries.len(),
            fails,
            if fails == 0 { "ok" } else { "FAILED" }
        )
    }
}

/// Deliberate corruption used to check that failures are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Lower every upper bound by one.
    FlipBound,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub kind: SurfaceKind,
    pub max_length: usize,
    pub k_max: usize,
    /// Longest class compared against the numeric oracle.
    pub oracle_length: usize,
    /// Longest class in the brute-force deck transformation check.
    pub deck_length: usize,
    /// Powers `w^t`, `|t| <= deck_power`, tried by the deck check.
    pub deck_power: i64,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub fault: Option<Fault>,
}

impl VerifyConfig {
    pub fn new(kind: SurfaceKind, max_length: usize, k_max: usize) -> VerifyConfig {
        VerifyConfig {
            kind,
            max_length,
            k_max,
            oracle_length: max_length.min(7),
            deck_length: max_length.min(7),
            deck_power: 2,
            lambda_a: DEFAULT_LAMBDA_A,
            lambda_b: DEFAULT_LAMBDA_B,
            fault: None,
        }
    }
}

/// `m` with `x = w^m`, if any. `w` must be cyclically reduced.
pub fn power_of(x: &Word, w: &Word) -> Option<i64> {
    if x.is_empty() {
        return Some(0);
    }
    if w.is_empty() || !x.len().is_multiple_of(w.len()) {
        return None;
    }
    let m = (x.len() / w.len()) as i64;
    [m, -m].into_iter().find(|&e| &w.pow(e) == x)
}

/// Whether some `g = p_k⁻¹ wᵗ p_i` with `|t| <= t_max` carries the lift pair
/// `(i, j)` onto `(k, l)`, in either assignment.
pub fn deck_equivalent(w: &CyclicWord, (i, j): (usize, usize), (k, l): (usize, usize), t_max: i64) -> bool {
    let base = w.as_word();
    let p = |n: usize| w.prefix(n).expect("index checked by caller");
    let carries = |src: (usize, usize), dst: (usize, usize)| {
        (-t_max..=t_max).any(|t| {
            let g = p(dst.0).inverse().mul(&base.pow(t)).mul(&p(src.0));
            power_of(&p(dst.1).mul(&g).mul(&p(src.1).inverse()), &base).is_some()
        })
    };
    carries((i, j), (k, l)) || carries((i, j), (l, k))
}

struct Checker<'a> {
    cfg: &'a VerifyConfig,
    census: Census,
    chart: Chart,
    entries: Vec<ClaimResult>,
}

impl Checker<'_> {
    fn push(&mut self, claim: &str, scale: String, status: Status, counterexample: Option<String>, detail: String) {
        self.entries.push(ClaimResult {
            claim: claim.to_string(),
            scale,
            status,
            counterexample,
            detail,
        });
    }

    fn pass_fail(&mut self, claim: &str, scale: String, failure: Option<(String, String)>, ok_detail: String) {
        match failure {
            None => self.push(claim, scale, Status::Pass, None, ok_detail),
            Some((word, detail)) => self.push(claim, scale, Status::Fail, Some(word), detail),
        }
    }

    fn bound(&self, len: usize) -> usize {
        let b = upper_bound(self.cfg.kind, len);
        match self.cfg.fault {
            Some(Fault::FlipBound) => b.saturating_sub(1),
            None => b,
        }
    }

    fn check_bounds(&mut self) {
        let mut failure = None;
        let mut classes = 0;
        for len in 1..=self.cfg.max_length {
            let bound = self.bound(len);
            let records = self.census.length(len).to_vec();
            classes += records.len();
            if let Some(r) = records.iter().find(|r| r.self_intersection > bound) {
                failure = Some((
                    r.word.to_string(),
                    format!("i={} exceeds bound {} at L={}", r.self_intersection, bound, len),
                ));
                break;
            }
        }
        let scale = format!("L<={}", self.cfg.max_length);
        self.pass_fail("bound", scale, failure, format!("{classes} classes within bound"));
    }

    fn check_sharpness(&mut self) {
        let kind = self.cfg.kind;
        let mut failure = None;
        let mut observed = Vec::new();
        for len in 1..=self.cfg.max_length {
            let max = self.census.max_intersection(len);
            let bound = self.bound(len);
            let asserted = match kind {
                SurfaceKind::Pants => len % 2 == 1,
                SurfaceKind::PuncturedTorus => len >= 3,
            };
            if asserted {
                if max != bound && failure.is_none() {
                    failure = Some((format!("L={len}"), format!("max i={max} but bound {bound}")));
                }
            } else {
                observed.push(format!("L={len}:{max}/{bound}"));
            }
        }
        let scale = format!("L<={}", self.cfg.max_length);
        self.pass_fail("sharpness", scale.clone(), failure, "maximum attains the bound".into());
        if kind == SurfaceKind::Pants && !observed.is_empty() {
            self.push(
                "even_length_maxima",
                scale,
                Status::Empirical,
                None,
                format!("max/bound {}", observed.join(" ")),
            );
        }
    }

    fn check_witnesses(&mut self) {
        let families: &[(Family, Prediction)] = match self.cfg.kind {
            SurfaceKind::Pants => &[(Family::PantsOdd, |n| n * n + n)],
            SurfaceKind::PuncturedTorus => &[(Family::TorusOdd, |n| n * n + n), (Family::TorusEven, |n| n * n)],
        };
        for &(family, expected) in families {
            let mut failure = None;
            for n in 1..=5 {
                let w = witness(self.cfg.kind, family, n).expect("family matches surface");
                let i = self_intersection_with(&self.chart, &w).expect("witnesses are primitive");
                if i != expected(n) {
                    failure = Some((w.to_string(), format!("i={} expected {}", i, expected(n))));
                    break;
                }
            }
            self.pass_fail(
                &format!("witness_{family}"),
                "n<=5".into(),
                failure,
                "i matches the family formula".into(),
            );
        }
    }

    fn check_class_invariance(&mut self) {
        let top = self.cfg.max_length.min(8);
        let mut failure = None;
        'outer: for len in 1..=top {
            for r in self.census.length(len).to_vec() {
                let w = &r.word;
                let inv = w.invert();
                let shifted_ok = w.cyclic_shifts().iter().chain(inv.cyclic_shifts().iter()).all(|s| {
                    CyclicWord::new(s.letters().to_vec())
                        .map(|c| c.canonical_class())
                        .as_ref()
                        == Ok(w)
                });
                let i_inv = self_intersection_with(&self.chart, &inv).expect("primitive");
                if !shifted_ok || i_inv != r.self_intersection {
                    failure = Some((w.to_string(), format!("inverse has i={i_inv}")));
                    break 'outer;
                }
            }
        }
        self.pass_fail(
            "rotation_inversion",
            format!("L<={top}"),
            failure,
            "canonical class and i invariant".into(),
        );
    }

    fn check_deck_invariance(&mut self) {
        let top = self.cfg.deck_length;
        let mut failure = None;
        let mut compared = 0usize;
        'outer: for len in 1..=top {
            for r in self.census.length(len).to_vec() {
                let w = &r.word;
                let pairs = linked_pairs(self.cfg.kind, w).expect("primitive");
                let classes: Vec<_> = pairs
                    .iter()
                    .map(|p| pair_class(w, p.i, p.j).expect("linked pairs are nondegenerate"))
                    .collect();
                for a in 0..pairs.len() {
                    for b in a..pairs.len() {
                        compared += 1;
                        let same = classes[a] == classes[b];
                        let deck = deck_equivalent(
                            w,
                            (pairs[a].i, pairs[a].j),
                            (pairs[b].i, pairs[b].j),
                            self.cfg.deck_power,
                        );
                        if same != deck {
                            failure = Some((
                                w.to_string(),
                                format!(
                                    "pairs ({},{}) ({},{}): class equal={} deck={}",
                                    pairs[a].i, pairs[a].j, pairs[b].i, pairs[b].j, same, deck
                                ),
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        self.pass_fail(
            "pair_class_deck",
            format!("L<={top} |t|<={}", self.cfg.deck_power),
            failure,
            format!("{compared} pair comparisons agree"),
        );
    }

    fn oracle_config(&mut self) -> Option<SchottkyConfig> {
        match standard_config(self.cfg.kind, self.cfg.lambda_a, self.cfg.lambda_b) {
            Ok(c) => Some(c),
            Err(e) => {
                self.push("oracle_config", "-".into(), Status::Fail, None, e.to_string());
                None
            }
        }
    }

    fn check_oracle(&mut self) {
        let Some(oracle) = self.oracle_config() else { return };
        let top = self.cfg.oracle_length;
        let mut failure = None;
        let mut classes = 0;
        'outer: for len in 1..=top {
            for r in self.census.length(len).to_vec() {
                classes += 1;
                match oracle.numeric_self_intersection(&r.word) {
                    Ok(n) if n == r.self_intersection => {}
                    Ok(n) => {
                        failure = Some((
                            r.word.to_string(),
                            format!("oracle {} vs exact {}", n, r.self_intersection),
                        ));
                        break 'outer;
                    }
                    Err(e) => {
                        failure = Some((r.word.to_string(), e.to_string()));
                        break 'outer;
                    }
                }
            }
        }
        self.pass_fail(
            "oracle_equivalence",
            format!("L<={top}"),
            failure,
            format!(
                "{classes} classes agree at lambda=({}, {})",
                self.cfg.lambda_a, self.cfg.lambda_b
            ),
        );

        let periods = short_periods(3);
        let mut failure = None;
        let mut pairs = 0;
        'order: for u in &periods {
            for v in &periods {
                pairs += 1;
                let exact = self.chart.compare(u, v);
                match oracle.boundary_order(u, v) {
                    Ok(o) if o == exact => {}
                    Ok(o) => {
                        failure = Some((format!("{u} vs {v}"), format!("compare {exact:?}, boundary {o:?}")));
                        break 'order;
                    }
                    Err(e) => {
                        failure = Some((format!("{u} vs {v}"), e.to_string()));
                        break 'order;
                    }
                }
            }
        }
        self.pass_fail(
            "order_compatibility",
            "period<=3".into(),
            failure,
            format!("{pairs} ordered pairs agree"),
        );
    }

    fn systole_table(&mut self) -> Vec<SystoleRecord> {
        if self.cfg.k_max == 0 {
            return Vec::new();
        }
        self.census.sequence(self.cfg.k_max).expect("k starts at 1")
    }

    fn check_systoles(&mut self, table: &[SystoleRecord]) {
        let kind = self.cfg.kind;
        let scale = format!("k<={}", self.cfg.k_max);
        let mut failure = None;
        let mut empirical = Vec::new();
        for r in table {
            let k = r.k;
            let n = (1..).find(|n| n * n + n >= k).expect("unbounded");
            let upper_range = n * n < k;
            let expected = match (kind, upper_range) {
                (SurfaceKind::Pants, true) => Some((2 * n + 1, n * n + n)),
                (SurfaceKind::PuncturedTorus, true) => Some((2 * n + 3, n * n + n)),
                (SurfaceKind::PuncturedTorus, false) => Some((2 * n + 2, n * n)),
                (SurfaceKind::Pants, false) => None,
            };
            match expected {
                Some(e) if (r.length, r.max_intersection) != e => {
                    if failure.is_none() {
                        failure = Some((
                            format!("k={k}"),
                            format!("(s,I)=({},{}) expected ({},{})", r.length, r.max_intersection, e.0, e.1),
                        ));
                    }
                }
                Some(_) => {}
                None => empirical.push(format!("k={}:({},{})", k, r.length, r.max_intersection)),
            }
        }
        self.pass_fail(
            "systole_table",
            scale.clone(),
            failure,
            "(s_k, I_k) match the lemmas".into(),
        );
        if !empirical.is_empty() {
            self.push(
                "systole_lower_range",
                scale,
                Status::Empirical,
                None,
                empirical.join(" "),
            );
        }
    }

    fn check_exactness(&mut self, table: &[SystoleRecord]) {
        let kind = self.cfg.kind;
        let scale = format!("k<={}", self.cfg.k_max);
        let zeros: Vec<usize> = table.iter().filter(|r| r.excess() == 0).map(|r| r.k).collect();
        let k_max = self.cfg.k_max;
        let pronic: Vec<usize> = (1..).map(|n| n * n + n).take_while(|&k| k <= k_max).collect();
        let missing: Vec<usize> = pronic.iter().copied().filter(|k| !zeros.contains(k)).collect();
        let failure = match missing.first() {
            Some(k) => Some((format!("k={k}"), format!("I_k-k={} at k=n^2+n", table[k - 1].excess()))),
            None if kind == SurfaceKind::PuncturedTorus => {
                let expected: Vec<usize> = (1..)
                    .flat_map(|n| [n * n, n * n + n])
                    .take_while(|&k| k <= k_max)
                    .collect();
                (zeros != expected).then(|| ("-".to_string(), format!("zero set {zeros:?} expected {expected:?}")))
            }
            None => None,
        };
        self.pass_fail(
            "exactness_points",
            scale.clone(),
            failure,
            format!("I_k=k at {zeros:?}"),
        );
        if kind == SurfaceKind::Pants {
            self.push("pants_zero_set", scale, Status::Empirical, None, format!("{zeros:?}"));
        }
    }

    fn check_growth(&mut self, table: &[SystoleRecord]) {
        let mut failure = None;
        let mut values: Vec<usize> = Vec::new();
        for n in 2.. {
            let k = n * n + 1;
            if k > self.cfg.k_max {
                break;
            }
            let ex = table[k - 1].excess();
            let rising = values.last().is_none_or(|&prev| ex > prev);
            if (ex != n - 1 || !rising) && failure.is_none() {
                failure = Some((format!("k={k}"), format!("I_k-k={ex}, expected {}", n - 1)));
            }
            values.push(ex);
        }
        self.pass_fail(
            "growth_record",
            format!("k<={}", self.cfg.k_max),
            failure,
            format!("I_k-k at n^2+1: {values:?}"),
        );
    }

    fn check_ratio(&mut self, table: &[SystoleRecord]) {
        let mut failure = None;
        for r in table {
            let (k, i) = (r.k, r.max_intersection);
            let n = bracket(k);
            // I_k/k <= (n²+n)/(n²−n+1) in integers
            let ok = k <= i && i <= n * n + n && i * (n * n - n + 1) <= (n * n + n) * k && (k < 2 || i <= 2 * k);
            if !ok {
                failure = Some((format!("k={k}"), format!("I_k={i} outside bracket n={n}")));
                break;
            }
        }
        let window: Vec<&SystoleRecord> = table.iter().filter(|r| (20..=30).contains(&r.k)).collect();
        let max_ratio = window
            .iter()
            .map(|r| r.max_intersection as f64 / r.k as f64)
            .fold(0.0, f64::max);
        if failure.is_none() && window.iter().any(|r| 100 * r.max_intersection > 130 * r.k) {
            failure = Some(("20<=k<=30".into(), format!("max I_k/k = {max_ratio:.3} > 1.30")));
        }
        let detail = if window.is_empty() {
            "bracketing holds".to_string()
        } else {
            format!("bracketing holds; max I_k/k on [20,30] = {max_ratio:.3}")
        };
        self.pass_fail("ratio_certificate", format!("k<={}", self.cfg.k_max), failure, detail);
    }

    fn check_monotone(&mut self, table: &[SystoleRecord]) {
        let mut failure = None;
        for (idx, r) in table.iter().enumerate() {
            if idx > 0 && r.length < table[idx - 1].length {
                failure = Some((format!("k={}", r.k), "s_k decreased".into()));
                break;
            }
            if r.max_intersection > self.bound(r.length) {
                failure = Some((format!("k={}", r.k), format!("I_k={} above bound", r.max_intersection)));
                break;
            }
            let witnesses_ok = r.witnesses.iter().all(|w| {
                w.len() == r.length && self_intersection_with(&self.chart, w).expect("primitive") == r.max_intersection
            });
            let shorter = (1..r.length).find(|&len| self.census.max_intersection(len) >= r.k);
            if !witnesses_ok || r.witnesses.is_empty() {
                failure = Some((format!("k={}", r.k), "witness list inconsistent".into()));
                break;
            }
            if let Some(len) = shorter {
                failure = Some((format!("k={}", r.k), format!("class of length {len} already has i>=k")));
                break;
            }
            if r.length > length_cap(r.k) {
                failure = Some((format!("k={}", r.k), "s_k beyond the search cap".into()));
                break;
            }
        }
        self.pass_fail(
            "monotone_exhaustive",
            format!("k<={}", self.cfg.k_max),
            failure,
            "s_k nondecreasing, no shorter class reaches k".into(),
        );
    }
}

/// All cyclically reduced periods of length `1..=max`, as infinite words.
/// Periods that are proper powers are skipped since they repeat a point.
pub fn short_periods(max: usize) -> Vec<PeriodicWord> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for p in &frontier {
            for l in Letter::ALL {
                if p.last().map(|x| x.inverse()) != Some(l) {
                    let mut q = p.clone();
                    q.push(l);
                    next.push(q);
                }
            }
        }
        for q in &next {
            let w = Word::from_letters(q.clone());
            if let Ok(c) = CyclicWord::new(q.clone()) {
                if c.is_primitive() {
                    out.push(PeriodicWord::new(&w).expect("cyclically reduced"));
                }
            }
        }
        frontier = next;
    }
    out
}

pub fn verify(cfg: &VerifyConfig) -> Report {
    let mut c = Checker {
        cfg,
        census: Census::new(cfg.kind),
        chart: Chart::new(cfg.kind),
        entries: Vec::new(),
    };
    c.check_bounds();
    c.check_sharpness();
    c.check_witnesses();
    c.check_class_invariance();
    c.check_deck_invariance();
    c.check_oracle();
    let table = c.systole_table();
    if !table.is_empty() {
        c.check_systoles(&table);
        c.check_exactness(&table);
        c.check_growth(&table);
        c.check_ratio(&table);
        c.check_monotone(&table);
    }
    Report {
        kind: cfg.kind,
        max_length: cfg.max_length,
        k_max: cfg.k_max,
        entries: c.entries,
    }
}
