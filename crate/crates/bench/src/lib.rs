//! Inputs shared by the benchmarks.

use dkl_core::{enumerate_wp, PMSequence, TLElement};

/// Longest element of W^p: all minus for even n, one leading plus otherwise.
pub fn longest(n: usize) -> PMSequence {
    enumerate_wp(n)
        .expect("n >= 1")
        .into_iter()
        .max_by_key(PMSequence::length)
        .expect("non-empty")
}

/// All generators e_0..e_{n-1} as algebra elements.
pub fn generators(n: usize) -> Vec<TLElement> {
    dkl_core::GeneratorIndex::all(n)
        .map(|i| TLElement::generator(n, i).expect("valid generator"))
        .collect()
}
