//! Inputs shared by the benchmarks.

use geolab::{CyclicWord, Letter};

/// A reduced primitive word of exactly `len` letters: the pattern
/// `aaBabbb` repeated, closed off with a letter that keeps it reduced and primitive.
pub fn sample_word(len: usize) -> CyclicWord {
    assert!(len >= 2);
    let pattern = [
        Letter::A,
        Letter::A,
        Letter::BInv,
        Letter::A,
        Letter::B,
        Letter::B,
        Letter::B,
    ];
    let head: Vec<Letter> = pattern.iter().copied().cycle().take(len - 1).collect();
    [Letter::B, Letter::A, Letter::BInv]
        .into_iter()
        .filter_map(|last| {
            let mut letters = head.clone();
            letters.push(last);
            CyclicWord::new(letters).ok()
        })
        .find(|w| w.len() == len && w.is_primitive())
        .expect("some closing letter works")
}

/// A fixed spread of lengths for scaling curves.
pub const LENGTHS: [usize; 5] = [8, 16, 32, 64, 128];
