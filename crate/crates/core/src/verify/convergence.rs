use std::fmt;
use std::str::FromStr;

use super::{
    check_chain, check_fact1, check_lemma2, check_lemma3, check_theorem, hard_failure, tolerances, CheckResult,
    Detail,
};
use crate::discretize::make_grid;
use crate::error::{Error, Result};
use crate::seqcore::{DecreasingWeights, LateralSequence};

/// Claims that depend on a resolution parameter. For `Fact1` the
/// "grid" is the number of quadrature panels per half-interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    Fact1,
    Lemma2,
    Lemma3,
    Theorem,
    Chain,
}

impl Claim {
    pub fn id(self) -> &'static str {
        match self {
            Claim::Fact1 => "fact1",
            Claim::Lemma2 => "lemma2",
            Claim::Lemma3 => "lemma3",
            Claim::Theorem => "theorem",
            Claim::Chain => "chain",
        }
    }

    pub fn takes_weights(self) -> bool {
        matches!(self, Claim::Theorem | Claim::Chain)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fact1" => Ok(Claim::Fact1),
            "lemma2" => Ok(Claim::Lemma2),
            "lemma3" => Ok(Claim::Lemma3),
            "theorem" => Ok(Claim::Theorem),
            "chain" => Ok(Claim::Chain),
            _ => Err(Error::UnknownClaim(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone)]
pub enum StudyInput {
    Sequence(LateralSequence),
    Weights(DecreasingWeights),
}

/// Parameters forwarded to the inner check at each resolution.
#[derive(Debug, Clone)]
pub struct StudyParams {
    pub top_k: usize,
    pub max_n: i64,
    pub window_factor: i64,
    pub slack: f64,
}

impl Default for StudyParams {
    fn default() -> Self {
        Self {
            top_k: 16,
            max_n: 32,
            window_factor: crate::discretize::DEFAULT_WINDOW_FACTOR,
            slack: tolerances::THEOREM_SLACK,
        }
    }
}

fn wrong_input(claim: Claim) -> Error {
    let want = if claim.takes_weights() { "a weight sequence" } else { "a lateral sequence" };
    Error::Hypothesis(format!("{claim} expects {want}"))
}

fn run_once(claim: Claim, input: &StudyInput, n: usize, params: &StudyParams) -> Result<CheckResult> {
    match (claim, input) {
        (Claim::Fact1, StudyInput::Sequence(x)) => check_fact1(x, params.max_n, n),
        (Claim::Lemma2, StudyInput::Sequence(x)) => check_lemma2(x, &[n], params.window_factor),
        (Claim::Lemma3, StudyInput::Sequence(x)) => check_lemma3(x, n, params.top_k, params.window_factor),
        (Claim::Theorem, StudyInput::Weights(mu)) => check_theorem(mu, n, params.top_k, params.slack),
        (Claim::Chain, StudyInput::Weights(mu)) => check_chain(mu, n, params.top_k, params.window_factor),
        _ => Err(wrong_input(claim)),
    }
}

/// Runs `claim` at every resolution in `grids` and checks that its error
/// does not grow.
///
/// The error is the negated margin, except for `Theorem`, whose margins
/// only need to settle: its error is the change in margin from the previous
/// grid. One rise of at most the round-off floor is tolerated. Passes when
/// the finest run passes (for `Theorem`, every run) and the errors are
/// monotone. Details are (resolution, error, margin).
pub fn convergence_study(
    claim: Claim,
    input: &StudyInput,
    grids: &[usize],
    params: &StudyParams,
) -> Result<CheckResult> {
    if grids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::GridsNotIncreasing);
    }
    if claim != Claim::Fact1 {
        for &n in grids {
            make_grid(n)?;
        }
    }
    let runs = grids
        .iter()
        .map(|&n| run_once(claim, input, n, params))
        .collect::<Result<Vec<_>>>()?;
    let Some(last) = runs.last() else {
        return Ok(CheckResult::new(format!("converge:{claim}"), 0.0, 0.0, vec![], vec![]));
    };
    let tol = last.tolerance;

    let errors: Vec<f64> = if claim == Claim::Theorem {
        let mut prev: Option<f64> = None;
        runs.iter()
            .map(|r| {
                let e = prev.map_or(0.0, |p| (r.worst_margin - p).abs());
                prev = Some(r.worst_margin);
                e
            })
            .collect()
    } else {
        runs.iter().map(|r| -r.worst_margin).collect()
    };
    // the first theorem increment is undefined
    let monotone_from = if claim == Claim::Theorem { 1 } else { 0 };

    let mut rises = 0usize;
    let mut worst_rise = 0.0f64;
    for w in errors[monotone_from.min(errors.len())..].windows(2) {
        let rise = w[1] - w[0];
        if rise > 0.0 {
            rises += 1;
            if rise > tolerances::ROUNDOFF_FLOOR {
                worst_rise = worst_rise.max(rise);
            }
        }
    }

    let mut margin = if claim == Claim::Theorem {
        runs.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min)
    } else {
        last.worst_margin
    };
    if rises > 1 || worst_rise > 0.0 {
        margin = margin.min(hard_failure(tol, worst_rise));
    }
    let details = grids
        .iter()
        .zip(errors.iter().zip(&runs))
        .map(|(&n, (&e, r))| Detail::new(n, e, r.worst_margin))
        .collect();
    Ok(CheckResult::new(format!("converge:{claim}"), margin, tol, grids.to_vec(), details)
        .with_diagnostic("rises", rises as f64))
}
