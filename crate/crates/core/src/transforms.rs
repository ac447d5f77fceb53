//! The discrete Hilbert-type transform on ℤ and the Cesàro / Calderón
//! operators on ℤ₊.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::seqcore::{DecreasingWeights, LateralSequence};

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// (H_d x)(n) = (1/π) Σ_{m−n odd} x(m)/(m−n) for `n` in `[out_lo, out_hi]`.
///
/// The sum runs over the finite support of `x`, so every value is exact up
/// to rounding. The result holds the window values only; entries outside the
/// window are not computed and read back as zero.
pub fn hilbert_discrete(x: &LateralSequence, out_lo: i64, out_hi: i64) -> Result<LateralSequence> {
    if out_lo > out_hi {
        return Err(Error::InvalidWindow { lo: out_lo, hi: out_hi });
    }
    let terms: Vec<(i64, Complex64)> = x.nonzero().collect();
    let values = (out_lo..=out_hi)
        .map(|n| {
            let mut re = CompensatedSum::default();
            let mut im = CompensatedSum::default();
            for &(m, v) in &terms {
                let d = m - n;
                if d.rem_euclid(2) == 1 {
                    let t = v / d as f64;
                    re.add(t.re);
                    im.add(t.im);
                }
            }
            Complex64::new(re.value(), im.value()) / PI
        })
        .collect();
    Ok(LateralSequence::from_values(out_lo, values))
}

/// (C_d x)(n) = (1/(n+1)) Σ_{k≤n} x(k) for n < `out_len`; `x[k]` is the
/// value at k ∈ ℤ₊.
pub fn cesaro(x: &[f64], out_len: usize) -> Vec<f64> {
    let mut running = CompensatedSum::default();
    (0..out_len)
        .map(|n| {
            if let Some(&v) = x.get(n) {
                running.add(v);
            }
            running.value() / (n as f64 + 1.0)
        })
        .collect()
}

/// (C_d* x)(n) = Σ_{k≥n} x(k)/(k+1) for n < `out_len`, summed in ascending k.
pub fn cesaro_adjoint(x: &[f64], out_len: usize) -> Vec<f64> {
    (0..out_len)
        .map(|n| {
            let mut tail = CompensatedSum::default();
            for (k, &v) in x.iter().enumerate().skip(n) {
                tail.add(v / (k as f64 + 1.0));
            }
            tail.value()
        })
        .collect()
}

/// (S_d μ)(n) = (C_d μ)(n) + (C_d* μ)(n) for n < `out_len`.
pub fn calderon(mu: &DecreasingWeights, out_len: usize) -> Result<DecreasingWeights> {
    if out_len == 0 {
        return Err(Error::EmptyOutput);
    }
    let avg = cesaro(mu.as_slice(), out_len);
    let tail = cesaro_adjoint(mu.as_slice(), out_len);
    let mut out: Vec<f64> = avg.iter().zip(&tail).map(|(a, b)| a + b).collect();
    // Exactly nonincreasing in real arithmetic; absorb last-ulp rises only.
    for k in 1..out.len() {
        if out[k] > out[k - 1] {
            debug_assert!(
                out[k] - out[k - 1] <= 1e-12 * out[k - 1].abs(),
                "Calderón output rises at {k}: {} > {}",
                out[k],
                out[k - 1]
            );
            out[k] = out[k - 1];
        }
    }
    DecreasingWeights::new(out)
}
