use std::cmp::Ordering;

use geolab::chart::{Chart, PeriodicWord};
use geolab::word::free_reduce;
use geolab::{self_intersection, self_intersection_par, upper_bound, CyclicWord, Letter, SurfaceKind, Word};
use proptest::prelude::*;

fn letter() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::ALL.to_vec())
}

fn raw_word(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 0..max)
}

/// Cyclically reduced, nonempty letter sequences.
fn cyclic(max: usize) -> impl Strategy<Value = CyclicWord> {
    raw_word(max).prop_filter_map("reduces to the identity", |v| {
        CyclicWord::parse(&v.iter().map(|l| l.to_char()).collect::<String>()).ok()
    })
}

fn primitive(max: usize) -> impl Strategy<Value = CyclicWord> {
    cyclic(max).prop_filter("proper power", |w| w.is_primitive())
}

fn periodic(max: usize) -> impl Strategy<Value = PeriodicWord> {
    cyclic(max).prop_map(|w| PeriodicWord::from(&w))
}

fn surface() -> impl Strategy<Value = SurfaceKind> {
    prop::sample::select(SurfaceKind::ALL.to_vec())
}

fn brute_primitive(w: &CyclicWord) -> bool {
    let l = w.letters();
    let n = l.len();
    (1..n)
        .filter(|d| n.is_multiple_of(*d))
        .all(|d| (0..n).any(|i| l[i] != l[i % d]))
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent(v in raw_word(30)) {
        let once = free_reduce(v);
        prop_assert_eq!(free_reduce(once.letters().iter().copied()), once.clone());
        prop_assert!(once.letters().windows(2).all(|p| p[1] != p[0].inverse()));
    }

    #[test]
    fn product_with_inverse_is_identity(v in raw_word(20)) {
        let w = free_reduce(v);
        prop_assert!(w.mul(&w.inverse()).is_empty());
        prop_assert_eq!(w.pow(2), w.mul(&w));
    }

    #[test]
    fn canonical_class_is_invariant(w in cyclic(12), k in 0usize..12) {
        let canon = w.canonical_class();
        let shifts = w.cyclic_shifts();
        let s = &shifts[k % shifts.len()];
        let rotated = CyclicWord::new(s.letters().to_vec()).unwrap();
        prop_assert_eq!(rotated.canonical_class(), canon.clone());
        prop_assert_eq!(w.invert().canonical_class(), canon.clone());
        prop_assert!(canon.is_canonical_class());
    }

    #[test]
    fn primitivity_matches_brute_force(w in cyclic(12)) {
        prop_assert_eq!(w.is_primitive(), brute_primitive(&w));
    }

    #[test]
    fn proper_powers_are_not_primitive(w in cyclic(6), m in 2usize..4) {
        prop_assert!(!w.power(m).is_primitive());
    }

    #[test]
    fn compare_is_a_total_order(kind in surface(), x in periodic(6), y in periodic(6), z in periodic(6)) {
        let c = Chart::new(kind);
        prop_assert_eq!(c.compare(&x, &x), Ordering::Equal);
        prop_assert_eq!(c.compare(&x, &y), c.compare(&y, &x).reverse());
        if c.compare(&x, &y) != Ordering::Greater && c.compare(&y, &z) != Ordering::Greater {
            prop_assert_ne!(c.compare(&x, &z), Ordering::Greater);
        }
    }

    #[test]
    fn compare_equal_iff_same_point(kind in surface(), w in cyclic(5), m in 1usize..4) {
        let c = Chart::new(kind);
        let a = PeriodicWord::from(&w);
        let b = PeriodicWord::new(&Word::from_letters(w.power(m).letters().to_vec())).unwrap();
        prop_assert_eq!(c.compare(&a, &b), Ordering::Equal);
    }

    #[test]
    fn self_intersection_respects_bound_and_symmetry(kind in surface(), w in primitive(11)) {
        let i = self_intersection(kind, &w).unwrap();
        prop_assert!(i <= upper_bound(kind, w.len()));
        prop_assert_eq!(self_intersection(kind, &w.invert()).unwrap(), i);
        prop_assert_eq!(self_intersection_par(kind, &w).unwrap(), i);
    }

    #[test]
    fn rotation_does_not_change_count(kind in surface(), w in primitive(10), k in 0usize..10) {
        let shifts = w.cyclic_shifts();
        let rotated = CyclicWord::parse(&shifts[k % shifts.len()].to_string()).unwrap();
        prop_assert_eq!(self_intersection(kind, &rotated).unwrap(), self_intersection(kind, &w).unwrap());
    }
}
