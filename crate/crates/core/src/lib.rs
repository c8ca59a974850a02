//! Vocabulary growth under a generalized Zipf text model.
//!
//! Words are drawn independently with rank probabilities `p_i = i^-α / ζ(α)`
//! for `α > 1`. The crate computes the expected number of distinct words in a
//! text of `n` tokens in several independent ways, simulates the process, and
//! fits Heaps and Zipf exponents to simulated or real corpora so the relation
//! `β ≈ 1/α` between the two exponents can be checked numerically.
//!
//! Modules:
//!
//! - [`numerics`]: ζ, ln Γ, semi-infinite quadrature, seeded random streams.
//! - [`zipf`]: the rank distribution and an exact unbounded sampler.
//! - [`expectation`]: evaluators for the expected distinct count.
//! - [`simulate`]: Monte Carlo growth curves and distinct-count estimates.
//! - [`fit`]: Heaps and Zipf exponent estimators, reciprocity report.
//! - [`corpus`]: tokenization and rank-frequency tables for real text.
//! - [`cli`]: the `heaps-zipf` command-line front end.

pub mod cli;
pub mod corpus;
mod error;
pub mod expectation;
pub mod fit;
pub mod numerics;
pub mod simulate;
pub mod zipf;

pub use corpus::RankFrequency;
pub use error::{Error, Result};
pub use expectation::{ExpectationMethod, ExpectationResult};
pub use fit::{FitResult, ReciprocityReport};
pub use numerics::{QuadratureResult, RandomStream};
pub use simulate::{GrowthCurve, MCEstimate};
pub use zipf::ZipfParams;
