//! One machine-checkable verdict per claim.
//!
//! Every check produces a [`CheckResult`] whose `worst_margin` is signed
//! slack: positive means the claim holds with room to spare, negative means
//! it is violated by that amount. A result passes exactly when the margin
//! is at least `-tolerance`. Conditions with no tolerance of their own
//! (monotone convergence, exact matrix inequalities) drive the margin below
//! `-tolerance` when they fail.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

mod convergence;
mod exact;
mod operator;

pub use convergence::{convergence_study, Claim, StudyInput, StudyParams};
pub use exact::{brute_force_min_ineq, check_fact1, check_pointwise_ineq};
pub use operator::{check_chain, check_lemma2, check_lemma3, check_theorem};

/// Tolerances, one per kind of comparison.
pub mod tolerances {
    /// Comparisons with no discretization: only float rounding separates
    /// the two sides.
    pub const EXACT_ABS: f64 = 1e-12;
    /// Midpoint quadrature against finite sums.
    pub const QUADRATURE_ABS: f64 = 1e-8;
    /// Spectra of band-limited multipliers against the multiplier values,
    /// relative to Σ|x(m)|.
    pub const BAND_LIMITED_REL: f64 = 1e-10;
    /// Relative spectral-norm discrepancy of the four-block decomposition.
    pub const DECOMPOSITION_REL: f64 = 5e-2;
    /// Relative error of discretized singular values and eigenvalues.
    pub const SPECTRAL_REL: f64 = 1e-2;
    /// A compression never has larger singular values; only SVD rounding
    /// may make it appear so.
    pub const COMPRESSION_ABS: f64 = 1e-10;
    /// Relative slack in the lower bound for the truncated operator.
    pub const THEOREM_SLACK: f64 = 1e-2;
    /// Rise in an error sequence that still counts as a round-off plateau.
    pub const ROUNDOFF_FLOOR: f64 = 1e-10;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub index: i64,
    pub lhs: f64,
    pub rhs: f64,
}

impl Detail {
    pub fn new(index: impl TryInto<i64>, lhs: f64, rhs: f64) -> Self {
        let index = index.try_into().unwrap_or(i64::MAX);
        Self { index, lhs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub claim_id: String,
    pub passed: bool,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub grid_sizes: Vec<usize>,
    pub details: Vec<Detail>,
    /// Observed quantities that never enter the verdict.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn new(
        claim_id: impl Into<String>,
        worst_margin: f64,
        tolerance: f64,
        grid_sizes: Vec<usize>,
        details: Vec<Detail>,
    ) -> Self {
        Self {
            claim_id: claim_id.into(),
            passed: worst_margin >= -tolerance,
            worst_margin,
            tolerance,
            grid_sizes,
            details,
            diagnostics: BTreeMap::new(),
            note: None,
        }
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_owned(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Margin recorded when a condition without tolerance fails by `excess`.
pub(crate) fn hard_failure(tolerance: f64, excess: f64) -> f64 {
    -(tolerance + excess.abs().max(f64::MIN_POSITIVE)) * (1.0 + f64::EPSILON)
}

/// |got − want| / |want|, or 0 when both vanish.
pub(crate) fn relative_error(got: f64, want: f64) -> f64 {
    let diff = (got - want).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / want.abs().max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_margin_within_tolerance() {
        assert!(CheckResult::new("a", -1e-9, 1e-8, vec![], vec![]).passed);
        assert!(CheckResult::new("a", -1e-8, 1e-8, vec![], vec![]).passed);
        assert!(!CheckResult::new("a", -2e-8, 1e-8, vec![], vec![]).passed);
        assert!(!CheckResult::new("a", hard_failure(1e-2, 1e-300), 1e-2, vec![], vec![]).passed);
        assert!(!CheckResult::new("a", hard_failure(0.0, 0.0), 0.0, vec![], vec![]).passed);
    }

    #[test]
    fn relative_error_handles_zero() {
        assert_eq!(relative_error(0.0, 0.0), 0.0);
        assert_eq!(relative_error(1.1, 1.0), (1.1f64 - 1.0).abs());
        assert!(relative_error(1e-20, 0.0) > 1.0);
    }
}
