//! Tabular equilibrium-finding dynamics for imperfect-information games.
//!
//! The crate builds explicit game trees (Kuhn and Leduc poker for two and
//! three players, plus small synthetic games), runs the exponential-decay
//! score dynamic (IESL) alongside CFR, extensive-form fictitious play and
//! replicator dynamics, and evaluates the resulting policies exactly with
//! tree-form best responses.

// Negated float comparisons are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod game;
pub mod harness;

pub use error::{Error, Result};
pub mod analysis;
pub mod evaluator;
pub mod solvers;

/// Seeded generator used for every random draw in the crate.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
