//! Markov exploration models of stochastic choice.
//!
//! A decision maker explores a menu by jumping between alternatives
//! according to a Markov chain and, at each step, stops with probability α
//! and takes the current alternative. This crate implements that model
//! end-to-end:
//!
//! * **generate** — choice probabilities implied by a model, for finite α
//!   and in the patient limit α → 0 ([`markov`]);
//! * **classify** — test observed choice data for which model classes
//!   (reversible, pairwise comparable, fully comparable, irreducible, Luce)
//!   can rationalize it, with witnessing cycles or certificates ([`cycles`],
//!   [`axioms`]);
//! * **rationalize** — construct an explicit model that reproduces the data,
//!   via an exact rational feasibility system ([`rationalize`]);
//! * **manipulate** — simulate choice architecture: comparability
//!   restrictions, decoy products, initial-fixation nudges ([`manipulate`]).
//!
//! The `examples/` directory has one runnable program per capability; the
//! thin `msc` binary exposes the same operations on dataset/model files.

pub mod axioms;
pub mod cli;
pub mod core;
pub mod cycles;
pub mod error;
pub mod exact;
pub mod io;
mod linalg;
pub mod manipulate;
pub mod markov;
pub mod rationalize;
mod simplex;
#[cfg(test)]
pub(crate) mod testdata;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
