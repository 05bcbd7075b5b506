//! Failure-probability laboratory for the weakened balanced-or-constant
//! promise problem.
//!
//! Three algorithms decide whether an `N = 2^n` bit oracle string is
//! "nearly balanced" or "nearly constant" after `y` bit-flips have been
//! applied to a string that honoured the promise:
//!
//! * the Deutsch-Jozsa circuit with a `k`-query majority vote ([`dj`]),
//! * a classical proportion sampler ([`classical`]),
//! * van Dam's approximate oracle interrogation ([`wvd`]).
//!
//! For each algorithm the crate provides exact failure probabilities
//! (big-integer / big-rational arithmetic), the large-`k` log-asymptotics,
//! and seeded Monte Carlo estimates ([`montecarlo`]), plus the crossover
//! solver ([`crossover`]) that locates the weakening degree `u = y/N` at
//! which one algorithm overtakes another.

pub mod classical;
pub mod crossover;
pub mod dj;
pub mod krawtchouk;
pub mod montecarlo;
pub mod numeric;
pub mod oracle;
pub mod wvd;

pub use classical::{ClassicalConditional, SamplingModel};
pub use crossover::{CrossoverPair, CrossoverResult};
pub use dj::{DjErrorPair, DjMajorityStats};
pub use krawtchouk::KrawtchoukTable;
pub use montecarlo::{TrialReport, WvdSamplingMode};
pub use oracle::{FailureEstimate, OracleString, ProblemInstance, PromiseCase};
pub use wvd::{
    AmplitudeProfile, CaseStats, Decision, ErrorCountDistribution, InferenceRule,
};

use thiserror::Error;

/// Errors surfaced by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An asymptotic formula was evaluated where its derivation breaks down
    /// (singular leading term or divergent logarithm).
    #[error("outside approximation domain: {0}")]
    OutsideApproximationDomain(String),
    /// An internal consistency check failed; this indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("no sign change in bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
