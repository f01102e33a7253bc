//! Exact statistics of weight distributions over the random linear code
//! ensemble, and asymptotic concentration rates of linear combinations of
//! weight distributions.
//!
//! - [`gf2`]: bit-packed parity-check matrices, rank, nullspace, and exact
//!   weight distributions.
//! - [`ensemble`]: closed-form means and covariances of `A_w`, the
//!   exhaustive census oracle, and seeded Monte Carlo sampling.
//! - [`functionals`]: `F(H) = sum Phi_w A_w(H)`, with exact finite-`n`
//!   expectation and variance.
//! - [`exponents`]: entropy, GV distance, concentration rates and
//!   Bhattacharyya error exponents.

pub mod ensemble;
mod error;
pub mod exponents;
pub mod functionals;
pub mod gf2;
pub mod numeric;

pub use ensemble::{EnsembleParams, MomentReport};
pub use error::{Error, Result};
pub use exponents::{AcrResult, ExponentProfile, ExtReal, SupOptions};
pub use functionals::{FunctionalSpec, LinearFunctional};
pub use gf2::{BitMatrix, BitVector, EnumerationLimit, WeightDistribution};
