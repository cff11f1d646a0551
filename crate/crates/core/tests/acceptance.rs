//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::collections::BTreeSet;
use std::time::Instant;

use geolab::chart::{Chart, PeriodicWord};
use geolab::oracle::OracleError;
use geolab::systole::length_cap;
use geolab::verify::deck_equivalent;
use geolab::word::free_reduce;
use geolab::{
    census_of_length, linked_pairs, pair_class, self_intersection, standard_config, upper_bound, witness, Census,
    CyclicWord, Family, Letter, SurfaceKind, SystoleRecord, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use SurfaceKind::{Pants, PuncturedTorus as Torus};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cw(letters: Vec<Letter>) -> CyclicWord {
    CyclicWord::new(letters).expect("cyclically reduced")
}

fn powers(a: usize, b: usize) -> CyclicWord {
    cw([vec![Letter::A; a], vec![Letter::B; b]].concat())
}

fn random_reduced(rng: &mut ChaCha8Rng, len: usize) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = Letter::ALL[rng.gen_range(0..4)];
        if out.last() == Some(&l.inverse()) {
            continue;
        }
        if out.len() + 1 == len && out.first() == Some(&l.inverse()) {
            continue;
        }
        out.push(l);
    }
    out
}

fn random_period(rng: &mut ChaCha8Rng, max: usize) -> PeriodicWord {
    let len = rng.gen_range(1..=max);
    PeriodicWord::new(&Word::from_letters(random_reduced(rng, len))).unwrap()
}

fn criterion_1() -> Outcome {
    let mut classes = 0;
    for (kind, top) in [(Pants, 9), (Torus, 10)] {
        for len in 1..=top {
            for r in census_of_length(kind, len) {
                classes += 1;
                ensure(r.self_intersection <= upper_bound(kind, len), || {
                    format!("{kind} {} has i={} > bound", r.word, r.self_intersection)
                })?;
            }
        }
    }
    Ok(format!("{classes} classes, zero violations"))
}

fn criterion_2() -> Outcome {
    let mut seen = Vec::new();
    for (len, expected) in [(4, 1), (6, 4), (8, 9), (10, 16)] {
        let i = self_intersection(Torus, &powers(len / 2, len / 2)).unwrap();
        ensure(i == expected && i == upper_bound(Torus, len), || {
            format!("L={len}: i={i}")
        })?;
        seen.push(i);
    }
    for (len, expected) in [(5, 2), (7, 6), (9, 12), (11, 20)] {
        let n = (len - 3) / 2;
        let i = self_intersection(Torus, &powers(n + 1, n + 2)).unwrap();
        ensure(i == expected && i == upper_bound(Torus, len), || {
            format!("L={len}: i={i}")
        })?;
        seen.push(i);
    }
    Ok(format!("i = {seen:?}"))
}

type Prediction = fn(usize) -> usize;

fn criterion_3() -> Outcome {
    let cases: [(SurfaceKind, Family, Prediction); 3] = [
        (Pants, Family::PantsOdd, |n| n * n + n),
        (Torus, Family::TorusOdd, |n| n * n + n),
        (Torus, Family::TorusEven, |n| n * n),
    ];
    let mut summary = Vec::new();
    for (kind, family, formula) in cases {
        let mut values = Vec::new();
        for n in 1..=5 {
            let w = witness(kind, family, n).unwrap();
            let i = self_intersection(kind, &w).unwrap();
            ensure(i == formula(n), || format!("{family} n={n} ({w}): i={i}"))?;
            values.push(i);
        }
        summary.push(format!("{family} {values:?}"));
    }
    Ok(summary.join(", "))
}

struct Tables {
    pants: Vec<SystoleRecord>,
    torus: Vec<SystoleRecord>,
}

impl Tables {
    fn get(&self, kind: SurfaceKind) -> &[SystoleRecord] {
        match kind {
            Pants => &self.pants,
            Torus => &self.torus,
        }
    }
}

fn criterion_4(t: &Tables) -> Outcome {
    let mut rows = 0;
    for n in 1..=4usize {
        for k in n * n + 1..=n * n + n {
            let p = &t.pants[k - 1];
            ensure((p.length, p.max_intersection) == (2 * n + 1, n * n + n), || {
                format!("pants k={k}: ({}, {})", p.length, p.max_intersection)
            })?;
            let q = &t.torus[k - 1];
            ensure((q.length, q.max_intersection) == (2 * n + 3, n * n + n), || {
                format!("torus k={k}: ({}, {})", q.length, q.max_intersection)
            })?;
            rows += 2;
        }
        for k in n * n - n + 1..=n * n {
            let q = &t.torus[k - 1];
            ensure((q.length, q.max_intersection) == (2 * n + 2, n * n), || {
                format!("torus k={k}: ({}, {})", q.length, q.max_intersection)
            })?;
            rows += 1;
        }
    }
    Ok(format!("{rows} table rows match"))
}

fn criterion_5(t: &Tables) -> Outcome {
    let mut notes = Vec::new();
    for kind in SurfaceKind::ALL {
        let table = &t.get(kind)[..20];
        let zeros: BTreeSet<usize> = table.iter().filter(|r| r.excess() == 0).map(|r| r.k).collect();
        for k in [2, 6, 12, 20] {
            ensure(zeros.contains(&k), || {
                format!("{kind}: I_k-k={} at k={k}", table[k - 1].excess())
            })?;
        }
        if kind == Torus {
            let expected: BTreeSet<usize> = [1, 2, 4, 6, 9, 12, 16, 20].into();
            ensure(zeros == expected, || format!("torus zero set {zeros:?}"))?;
        }
        let growth: Vec<usize> = [2usize, 3, 4].iter().map(|n| table[n * n].excess()).collect();
        ensure(growth == [1, 2, 3], || format!("{kind}: I_k-k at n^2+1 = {growth:?}"))?;
        notes.push(format!("{kind} zeros {zeros:?} growth {growth:?}"));
    }
    Ok(notes.join("; "))
}

fn criterion_6(t: &Tables) -> Outcome {
    let mut notes = Vec::new();
    for kind in SurfaceKind::ALL {
        let table = t.get(kind);
        for r in table {
            let (k, i) = (r.k, r.max_intersection);
            let n = geolab::systole::bracket(k);
            ensure(n * n - n < k && k <= i && i <= n * n + n, || {
                format!("{kind} k={k}: I={i}, n={n}")
            })?;
            ensure(k < 2 || i <= 2 * k, || format!("{kind} k={k}: I/k > 2"))?;
        }
        let worst = table[19..30]
            .iter()
            .map(|r| (r.max_intersection, r.k))
            .max_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)))
            .unwrap();
        ensure(100 * worst.0 <= 130 * worst.1, || {
            format!("{kind}: I_k/k = {}/{}", worst.0, worst.1)
        })?;
        notes.push(format!("{kind} max I_k/k on [20,30] = {}/{}", worst.0, worst.1));
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Outcome {
    let lambdas = [(3.7, 4.3), (4.0, 4.0), (5.1, 4.6)];
    let mut checked = 0;
    for kind in SurfaceKind::ALL {
        for &(la, lb) in &lambdas {
            let cfg = standard_config(kind, la, lb).map_err(|e| e.to_string())?;
            for len in 1..=8 {
                for r in census_of_length(kind, len) {
                    let n = cfg.numeric_self_intersection(&r.word).map_err(|e| match e {
                        OracleError::BoundaryAmbiguity { .. } => format!("{kind} {} ambiguous: {e}", r.word),
                        other => format!("{kind} {}: {other}", r.word),
                    })?;
                    ensure(n == r.self_intersection, || {
                        format!(
                            "{kind} {} at ({la},{lb}): oracle {n}, exact {}",
                            r.word, r.self_intersection
                        )
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (class, configuration) checks agree"))
}

/// Exact order against boundary angles. Distinct points closer than the
/// tolerance still have to come out in the right order; equal points must
/// land within the tolerance of each other.
fn criterion_8() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut agreed, mut close) = (0, 0);
    for kind in SurfaceKind::ALL {
        let chart = Chart::new(kind);
        let cfg = standard_config(kind, 3.7, 4.3).unwrap();
        for _ in 0..500 {
            let (u, v) = (random_period(&mut rng, 5), random_period(&mut rng, 5));
            let exact = chart.compare(&u, &v);
            let x = cfg.limit_point(&u).map_err(|e| e.to_string())?;
            let y = cfg.limit_point(&v).map_err(|e| e.to_string())?;
            let gap = geolab::oracle::angular_gap(x.angle, y.angle);
            let ok = match exact {
                std::cmp::Ordering::Equal => gap < TOL,
                order => cfg.offset_from_anchor(x).total_cmp(&cfg.offset_from_anchor(y)) == order,
            };
            ensure(ok, || {
                format!("{kind}: {u} vs {v}: compare {exact:?}, angular gap {gap:e}")
            })?;
            if exact != std::cmp::Ordering::Equal && gap < TOL {
                close += 1;
            }
            agreed += 1;
        }
    }
    Ok(format!(
        "{agreed}/1000 sampled pairs agree ({close} distinct pairs closer than {TOL:e})"
    ))
}

fn structural_words(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checks = 0;
    for _ in 0..2000 {
        let len = rng.gen_range(0..24);
        let raw: Vec<Letter> = (0..len).map(|_| Letter::ALL[rng.gen_range(0..4)]).collect();
        let once = free_reduce(raw.iter().copied());
        let twice = free_reduce(once.letters().iter().copied());
        ensure(once == twice, || format!("free_reduce not idempotent on {once}"))?;
        let l = rng.gen_range(1..10);
        let w = cw(random_reduced(rng, l));
        let canon = w.canonical_class();
        for shift in w.cyclic_shifts().iter().chain(w.invert().cyclic_shifts().iter()) {
            let c = CyclicWord::new(shift.letters().to_vec()).unwrap().canonical_class();
            ensure(c == canon, || format!("canonical class of {shift} differs from {w}"))?;
        }
        checks += 2;
    }
    Ok(checks)
}

fn structural_order(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    use std::cmp::Ordering::*;
    let mut checks = 0;
    for kind in SurfaceKind::ALL {
        let chart = Chart::new(kind);
        for _ in 0..1000 {
            let (x, y, z) = (random_period(rng, 6), random_period(rng, 6), random_period(rng, 6));
            let (xy, yx) = (chart.compare(&x, &y), chart.compare(&y, &x));
            ensure(xy == yx.reverse(), || format!("antisymmetry fails for {x}, {y}"))?;
            ensure(chart.compare(&x, &x) == Equal, || format!("reflexivity fails for {x}"))?;
            let yz = chart.compare(&y, &z);
            if xy != Greater && yz != Greater {
                ensure(chart.compare(&x, &z) != Greater, || {
                    format!("transitivity fails for {x}, {y}, {z}")
                })?;
            }
            checks += 1;
        }
    }
    Ok(checks)
}

fn structural_deck() -> Result<usize, String> {
    let mut checks = 0;
    for kind in SurfaceKind::ALL {
        for len in 1..=7 {
            for r in census_of_length(kind, len) {
                let w = &r.word;
                let pairs = linked_pairs(kind, w).unwrap();
                let classes: Vec<_> = pairs.iter().map(|p| pair_class(w, p.i, p.j).unwrap()).collect();
                for a in 0..pairs.len() {
                    for b in a..pairs.len() {
                        let deck = deck_equivalent(w, (pairs[a].i, pairs[a].j), (pairs[b].i, pairs[b].j), 2);
                        ensure(deck == (classes[a] == classes[b]), || {
                            format!("{kind} {w}: pairs {:?} {:?}", pairs[a], pairs[b])
                        })?;
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(checks)
}

fn structural_determinism() -> Result<usize, String> {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let census: Vec<_> = (1..=9).flat_map(|l| census_of_length(Torus, l)).collect();
            let table = Census::new(Pants).sequence(12).unwrap();
            (census, table)
        })
    };
    let base = run(1);
    for threads in [2, 4] {
        ensure(run(threads) == base, || {
            format!("output differs with {threads} workers")
        })?;
    }
    Ok(3)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let words = structural_words(&mut rng)?;
    let order = structural_order(&mut rng)?;
    let deck = structural_deck()?;
    let det = structural_determinism()?;
    Ok(format!(
        "reduce/canonical {words}, order axioms {order}, deck comparisons {deck}, worker counts {det}"
    ))
}

fn main() {
    let start = Instant::now();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, outcome: Outcome, t: Instant| {
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} [{name}]: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} [{name}]: FAIL ({secs:.1}s) {detail}");
            }
        }
    };
    let t = Instant::now();
    report(1, "bound conformance", criterion_1(), t);
    let t = Instant::now();
    report(2, "sharpness", criterion_2(), t);
    let t = Instant::now();
    report(3, "witness families", criterion_3(), t);

    let t = Instant::now();
    let tables = Tables {
        pants: Census::new(Pants).sequence(30).unwrap(),
        torus: Census::new(Torus).sequence(30).unwrap(),
    };
    assert!(tables.torus.iter().all(|r| r.length <= length_cap(r.k)));
    report(4, "systole tables", criterion_4(&tables), t);
    let t = Instant::now();
    report(5, "finite-range excess pattern", criterion_5(&tables), t);
    let t = Instant::now();
    report(6, "finite-range ratio pattern", criterion_6(&tables), t);
    let t = Instant::now();
    report(7, "oracle equivalence", criterion_7(), t);
    let t = Instant::now();
    report(8, "order compatibility", criterion_8(), t);
    let t = Instant::now();
    report(9, "structural suites", criterion_9(), t);

    println!(
        "acceptance: {} of 9 criteria passed in {:.1}s",
        9 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
