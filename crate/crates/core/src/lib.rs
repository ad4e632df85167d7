//! Deterministic simulators for numerical symbiogenesis and the metrics used
//! to analyse them.
//!
//! * [`core1d`] and [`norms`]: the 1D integer automaton and its collision norms.
//! * [`engine2d`]: the same replicate-then-resolve scheme on a torus of vectors.
//! * [`boolca`]: an elementary CA gated by a neighbourhood-activity norm.
//! * [`dnasoup`] and [`dnaca`]: strand elongation, annealing and splitting,
//!   well mixed and on a ring lattice.
//! * [`metrics`]: population counts, entropy, mutual information, k-mer
//!   repetition and Wilson intervals.

pub mod boolca;
pub mod core1d;
pub mod dnaca;
pub mod dnasoup;
pub mod engine2d;
pub mod error;
pub mod image;
pub mod io;
pub mod metrics;
pub mod norms;
pub mod rng;

pub use error::{Result, SymbaError};
