//! Checks whose two sides are finite sums, or a finite sum against
//! quadrature. No grid is involved.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{tolerances, CheckResult, Detail};
use crate::error::Result;
use crate::fourier::{piecewise_quadrature, trig_eval};
use crate::seqcore::{construct_odd_support, DecreasingWeights, LateralSequence};
use crate::transforms::{calderon, hilbert_discrete};

/// Compares (1/2π)∫ sgn(t)·x̂(t)·e^{−int} dt, split at t = 0, with
/// 2i·(H_d x)(n) for |n| ≤ `max_n`.
///
/// Details carry the moduli of both sides; the margin is the negated
/// largest complex deviation.
pub fn check_fact1(x: &LateralSequence, max_n: i64, panels: usize) -> Result<CheckResult> {
    let max_n = max_n.abs();
    let h = hilbert_discrete(x, -max_n, max_n)?;
    let mut details = Vec::with_capacity(2 * max_n as usize + 1);
    let mut worst = 0.0f64;
    for n in -max_n..=max_n {
        let integrand = |t: f64| t.signum() * trig_eval(x, t) * Complex64::from_polar(1.0, -(n as f64) * t);
        let lhs = piecewise_quadrature(integrand, &[0.0], panels)? / (2.0 * PI);
        let rhs = Complex64::new(0.0, 2.0) * h.get(n);
        worst = worst.max((lhs - rhs).norm());
        details.push(Detail::new(n, lhs.norm(), rhs.norm()));
    }
    Ok(CheckResult::new("fact1", -worst, tolerances::QUADRATURE_ABS, vec![], details)
        .with_diagnostic("panels_per_half", panels as f64))
}

/// (H_d x)(−2n) ≥ (1/8π)(S_d μ)(n) for 0 ≤ n ≤ `max_n`, with x the
/// odd-support embedding of `mu`.
pub fn check_pointwise_ineq(mu: &DecreasingWeights, max_n: usize) -> Result<CheckResult> {
    let x = construct_odd_support(mu);
    let h = hilbert_discrete(&x, -2 * max_n as i64, 0)?;
    let s = calderon(mu, max_n + 1)?;
    let mut worst = f64::INFINITY;
    let details: Vec<Detail> = (0..=max_n)
        .map(|n| {
            let lhs = h.get(-2 * n as i64);
            debug_assert_eq!(lhs.im, 0.0);
            let rhs = s.get(n) / (8.0 * PI);
            worst = worst.min(lhs.re - rhs);
            Detail::new(n, lhs.re, rhs)
        })
        .collect();
    Ok(CheckResult::new("pointwise", worst, tolerances::EXACT_ABS, vec![], details))
}

/// 1/(2m+2n+1) ≥ 1/(2(m+n+2)) ≥ ¼·min{1/(n+1), 1/(m+1)} for all
/// 0 ≤ m, n ≤ `max_mn`.
///
/// One detail per m: the tightest of the two links over all n, as
/// (m, larger side, smaller side).
pub fn brute_force_min_ineq(max_mn: usize) -> CheckResult {
    let mut worst = f64::INFINITY;
    let mut violations = 0usize;
    let mut details = Vec::with_capacity(max_mn + 1);
    for m in 0..=max_mn {
        let mf = m as f64;
        let mut tightest = (f64::INFINITY, 0.0, 0.0);
        for n in 0..=max_mn {
            let nf = n as f64;
            let first = 1.0 / (2.0 * mf + 2.0 * nf + 1.0);
            let second = 1.0 / (2.0 * (mf + nf + 2.0));
            let third = 0.25 * (1.0 / (nf + 1.0)).min(1.0 / (mf + 1.0));
            for (hi, lo) in [(first, second), (second, third)] {
                let margin = hi - lo;
                if margin < 0.0 {
                    violations += 1;
                }
                if margin < tightest.0 {
                    tightest = (margin, hi, lo);
                }
            }
        }
        worst = worst.min(tightest.0);
        details.push(Detail::new(m, tightest.1, tightest.2));
    }
    CheckResult::new("minineq", worst, tolerances::EXACT_ABS, vec![], details)
        .with_diagnostic("violations", violations as f64)
}
