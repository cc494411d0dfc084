//! Random-matrix Monte Carlo oracle.
//!
//! Finite-dimensional Haar-unitary sampling gives an independent
//! numerical check on the atom masses the engine assigns when two
//! projections sit in free position: for projections of trace `a` and
//! `b`, the compressed product PQP carries a point mass at 1 of ambient
//! trace max(a+b−1, 0). Everything in this module is deterministic for
//! a fixed (dimension, seed, repetitions) triple.

mod haar;
mod spectrum;

pub use haar::haar_unitary;
pub use spectrum::{two_free_projections_spectrum, SpectrumEstimate, HISTOGRAM_BINS};

use crate::rat::ExtRat;

/// Precondition failures of the samplers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum McError {
    #[error("matrix dimension must be at least {min}, got {got}")]
    DimensionTooSmall { got: usize, min: usize },
    #[error("projection trace must lie strictly between 0 and 1, got {0}")]
    TraceOutOfRange(ExtRat),
    #[error("trace {trace} rounds to the degenerate rank {rank} at dimension {n}")]
    DegenerateRank {
        trace: ExtRat,
        rank: usize,
        n: usize,
    },
    #[error("repetition count must be at least 1")]
    NoRepetitions,
}
