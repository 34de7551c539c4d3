//! Error type shared by every module in the crate.

use alloc::string::String;
use thiserror::Error;

/// Errors produced by construction, solvers, bound evaluation, and oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A distribution, channel, composition, or code failed structural
    /// validation (negative mass, sum far from one, alphabet mismatch,
    /// non-integral composition counts, …).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An argument lies outside the operation's mathematical domain
    /// (order α ≤ 0, rate ≤ 0, tilting of mutually singular measures, …).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver exhausted its budget without reaching tolerance,
    /// or its optimality certificate failed.
    #[error("no convergence in {context}: residual {residual:e} after {iterations} iterations")]
    NoConvergence {
        /// Which solver failed, with its parameters.
        context: String,
        /// Iterations performed before giving up.
        iterations: usize,
        /// Last observed fixed-point residual (L1).
        residual: f64,
    },

    /// A rate could not be placed consistently into one of the three
    /// exponent regimes, or an operation that needs a specific regime was
    /// invoked outside it.
    #[error("regime error: {0}")]
    Regime(String),

    /// An explicit hypothesis of a bound is violated (rate outside a
    /// theorem's window, β outside the achievability window, …). The
    /// message carries the computed admissible range.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// The per-letter log-likelihood ratio is almost surely constant
    /// (a₂ = 0), so the Berry-Esseen constants are undefined.
    #[error("degenerate variance: the log-likelihood ratio is a.s. constant, a2 = 0")]
    DegenerateVariance,

    /// A letter's null measure has no component absolutely continuous in
    /// its reference measure, so tilting is undefined there.
    #[error("letter {letter}: w is mutually singular with q, tilting undefined")]
    MutuallySingular {
        /// Index of the offending letter within the instance.
        letter: usize,
    },

    /// An exact enumeration would exceed the configured cap.
    #[error("capacity exceeded: enumeration needs {required} states, cap is {cap}")]
    Capacity {
        /// Number of states the enumeration would materialize.
        required: u128,
        /// Configured ceiling.
        cap: u64,
    },

    /// A mathematically guaranteed inequality failed numerically. This
    /// always indicates an implementation defect, never bad user input.
    #[error("property violation: {0}")]
    Property(String),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
