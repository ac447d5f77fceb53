//! Numerical verification of lower singular-value estimates for the
//! triangular truncation of Fourier multipliers on L₂(−π, π).
//!
//! The pipeline: finitely supported sequences ([`seqcore`]) are pushed
//! through the discrete Hilbert-type transform and the Calderón operator
//! ([`transforms`]), their symbols are evaluated and integrated
//! ([`fourier`]), the corresponding multipliers are discretized on a
//! midpoint grid and truncated ([`discretize`]), and [`verify`] turns each
//! identity or inequality into a [`verify::CheckResult`].

pub mod cli;
pub mod discretize;
pub mod error;
pub mod fourier;
pub mod seqcore;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
