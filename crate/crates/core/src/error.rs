//! Crate error type.

use std::fmt;

use crate::inversion::Diagnostics;

/// Errors shared by every module in the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Malformed partition data (increasing parts, bad JSON, ...).
    InvalidPartition(String),
    /// Malformed rational input.
    InvalidRational(String),
    /// A scalar parameter left its required domain, e.g. t outside (0, 1).
    ParameterDomain(String),
    /// A q-series denominator vanished (q is a root of unity in range).
    ZeroDenominator(String),
    /// Column cap below the minimum the interlacing domain requires.
    EmptyDomain { cap: u32, required: u32 },
    /// Enumeration would exceed the configured work budget.
    BudgetExceeded { needed: String, budget: u64 },
    /// A rational that must be a nonnegative integer was not one;
    /// this signals an implementation bug, not bad input.
    InternalInconsistency(String),
    /// Requested degree above the engine's configured cap.
    DegreeCapExceeded { degree: usize, cap: usize },
    /// Too few variables for a faithful basis conversion.
    TooFewVariables { num_vars: usize, degree: usize },
    /// Gram matrix pivot vanished during orthogonalization.
    DegenerateGram(String),
    /// A moment value required by the summation domain is unavailable.
    MissingMoment(String),
    /// Distribution masses must be nonnegative and total at most 1.
    InvalidDistribution(String),
    /// The moment table and the request disagree (prime mismatch, ...).
    TableMismatch(String),
    /// Multi-prime inversion requires pairwise distinct primes.
    DuplicatePrimes,
    /// Adaptive truncation hit its hard cap before the stopping rule fired.
    /// Carries the partial-sum trace so the caller can report it.
    AdaptiveNonConvergence(Box<Diagnostics>),
    /// Simulator configuration rejected (zero shards, zero dimension, ...).
    InvalidConfig(String),
    /// Generic invalid input (CLI level parse problems and similar).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPartition(msg) => write!(f, "invalid partition: {msg}"),
            Error::InvalidRational(msg) => write!(f, "invalid rational: {msg}"),
            Error::ParameterDomain(msg) => write!(f, "parameter out of domain: {msg}"),
            Error::ZeroDenominator(msg) => write!(f, "zero denominator: {msg}"),
            Error::EmptyDomain { cap, required } => write!(
                f,
                "column cap {cap} is below the first conjugate part {required}; \
                 the summation domain is empty"
            ),
            Error::BudgetExceeded { needed, budget } => write!(
                f,
                "enumeration needs {needed} candidates, above the budget of {budget}; \
                 use the closed-form surjection count instead"
            ),
            Error::InternalInconsistency(msg) => {
                write!(f, "internal consistency check failed: {msg}")
            }
            Error::DegreeCapExceeded { degree, cap } => {
                write!(f, "degree {degree} exceeds the configured cap {cap}")
            }
            Error::TooFewVariables { num_vars, degree } => write!(
                f,
                "{num_vars} variables cannot faithfully carry degree {degree}; \
                 need at least as many variables as the degree"
            ),
            Error::DegenerateGram(msg) => write!(f, "degenerate Gram matrix: {msg}"),
            Error::MissingMoment(mu) => write!(
                f,
                "moment table has no value for {mu} and no provider to supply it"
            ),
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::TableMismatch(msg) => write!(f, "moment table mismatch: {msg}"),
            Error::DuplicatePrimes => write!(f, "primes must be pairwise distinct"),
            Error::AdaptiveNonConvergence(diag) => write!(
                f,
                "adaptive truncation did not converge within cap {} (last block {})",
                diag.cap.map_or_else(|| "?".into(), |c| c.to_string()),
                diag.last_block
                    .as_ref()
                    .map_or_else(|| "?".into(), crate::scalar::rat_string),
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid simulator config: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
