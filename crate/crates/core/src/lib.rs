//! Exact arithmetic for random finite abelian p-groups.
//!
//! The library recovers the distribution of a random abelian p-group from its
//! surjection moments. Everything is computed over arbitrary-precision
//! rationals; floating point appears only in display formatting.
//!
//! Module map:
//! - [`partitions`]: integer partitions, conjugation, interlacing, enumeration.
//! - [`qseries`]: q-Pochhammer symbols, q-binomial coefficients, truncated
//!   Euler products.
//! - [`hall_littlewood`]: closed-form principal specializations, surjection
//!   counts, inversion coefficients, and the cancellation sum.
//! - [`macdonald`]: a generic-(q,t) Macdonald engine (Gram-Schmidt over a
//!   custom scalar product, skew functions, specializations) used to verify
//!   the closed forms independently.
//! - [`group_oracle`]: brute-force surjection counting and exact moments,
//!   the ground truth the formulas are tested against.
//! - [`inversion`]: moments of a distribution and the inverse problem —
//!   recovering probabilities from a moment table (single prime, fixed
//!   torsion level, several primes), with explicit truncation diagnostics.
//! - [`simulator`]: Monte-Carlo cokernels of uniform random matrices over
//!   Z/p^d, empirical moment tables, and a closed-loop report feeding them
//!   back through the inversion.

pub mod error;
pub mod group_oracle;
pub mod hall_littlewood;
pub mod inversion;
pub mod macdonald;
pub mod partitions;
pub mod qseries;
pub mod scalar;
pub mod simulator;

pub use error::Error;
pub use partitions::Partition;
pub use scalar::Rat;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
