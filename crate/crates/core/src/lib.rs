//! Generation, verification, and evaluation of first-order-logic reasoning
//! problems.
//!
//! The pipeline builds a goal-rooted reasoning tree over a small FOL fragment
//! (unary predicates, named subjects, one prenex quantifier), checks every
//! derivation with an internal entailment engine, injects distracting
//! premises, realizes the result as natural language through an exchangeable
//! LLM backend, and evaluates models on the assembled datasets with standard
//! and chain-of-thought prompting.

pub mod backend;
pub mod dataset;
pub mod engine;
pub mod eval;
pub mod fol;
pub mod nl;
pub mod pipeline;
pub mod skeleton;

pub use fol::{Formula, PredicateSymbol, SubjectConstant, Term, TruthLabel};
pub use skeleton::Difficulty;

/// Cheap splittable mixing of a base seed with a stream tag, so that every
/// stage of a job draws from an independent, reproducible stream.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = base
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(stream.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Stable 64-bit hash of a byte string (FNV-1a), for seed derivation from ids.
pub fn stable_hash(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
