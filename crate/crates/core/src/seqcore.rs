//! Finitely supported sequences on the integers, decreasing rearrangements
//! and the odd-support embedding of a weight sequence.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finitely supported complex sequence on ℤ.
///
/// Stored as a contiguous block of values starting at `support_lo`. The block
/// is kept trimmed: the first and last stored values are nonzero, and the
/// zero sequence stores nothing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LateralSequence {
    lo: i64,
    values: Vec<Complex64>,
}

impl LateralSequence {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a sequence whose value at `lo + k` is `values[k]`, trimming
    /// zero entries at both ends.
    pub fn from_values(lo: i64, values: Vec<Complex64>) -> Self {
        let Some(first) = values.iter().position(|v| *v != Complex64::new(0.0, 0.0)) else {
            return Self::zero();
        };
        let last = values
            .iter()
            .rposition(|v| *v != Complex64::new(0.0, 0.0))
            .unwrap_or(first);
        Self {
            lo: lo + first as i64,
            values: values[first..=last].to_vec(),
        }
    }

    pub fn from_real(lo: i64, values: &[f64]) -> Self {
        Self::from_values(lo, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Unit mass at `k`.
    pub fn delta(k: i64) -> Self {
        Self::from_values(k, vec![Complex64::new(1.0, 0.0)])
    }

    /// Collects `(index, value)` pairs; repeated indices are summed.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let (Some(lo), Some(hi)) = (
            pairs.iter().map(|p| p.0).min(),
            pairs.iter().map(|p| p.0).max(),
        ) else {
            return Self::zero();
        };
        let mut values = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (n, v) in pairs {
            values[(n - lo) as usize] += v;
        }
        Self::from_values(lo, values)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Inclusive support bounds, `None` for the zero sequence.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.values.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.values.len() as i64 - 1))
        }
    }

    pub fn support_lo(&self) -> i64 {
        self.lo
    }

    pub fn support_hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, n: i64) -> Complex64 {
        let k = n - self.lo;
        if k < 0 || k >= self.values.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[k as usize]
        }
    }

    /// Iterates over `(index, value)` for every stored entry, including
    /// interior zeros.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.lo + k as i64, v))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.iter().filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
    }

    /// ℓ₁ norm Σ|x(m)|.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// True when every entry at an even index vanishes.
    pub fn vanishes_on_evens(&self) -> bool {
        self.nonzero().all(|(n, _)| n.rem_euclid(2) == 1)
    }

    /// True when every entry at an odd index vanishes.
    pub fn vanishes_on_odds(&self) -> bool {
        self.nonzero().all(|(n, _)| n.rem_euclid(2) == 0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_values(self.lo, self.values.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_pairs(self.iter().chain(other.iter()))
    }
}

/// A finite nonnegative nonincreasing sequence on ℤ₊ with trailing zeros
/// removed. Indices beyond the stored length read as zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecreasingWeights {
    weights: Vec<f64>,
}

impl DecreasingWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(bad) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("entry {bad} is not a finite nonnegative number")));
        }
        if let Some(k) = weights.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::InvalidWeights(format!(
                "entry {} exceeds its predecessor ({} > {})",
                k + 1,
                weights[k + 1],
                weights[k]
            )));
        }
        let mut weights = weights;
        while weights.last() == Some(&0.0) {
            weights.pop();
        }
        Ok(Self { weights })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// (1)
    pub fn singleton() -> Self {
        Self { weights: vec![1.0] }
    }

    /// r^k for k < len.
    pub fn geometric(ratio: f64, len: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&ratio) {
            return Err(Error::InvalidWeights(format!("geometric ratio {ratio} outside [0, 1]")));
        }
        Self::new((0..len).map(|k| ratio.powi(k as i32)).collect())
    }

    /// 1/(k+1) for k < len.
    pub fn harmonic(len: usize) -> Self {
        Self {
            weights: (0..len).map(|k| 1.0 / (k as f64 + 1.0)).collect(),
        }
    }

    /// 1/((k+1)(1 + ln(k+1))) for k < len.
    pub fn logarithmic(len: usize) -> Self {
        Self {
            weights: (0..len)
                .map(|k| {
                    let n = k as f64 + 1.0;
                    1.0 / (n * (1.0 + n.ln()))
                })
                .collect(),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, k: usize) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.weights
    }
}

/// The multiset {|x(m)|} sorted nonincreasingly with zeros dropped.
pub fn decreasing_rearrangement(x: &LateralSequence) -> DecreasingWeights {
    let mut weights: Vec<f64> = x.values().iter().map(|v| v.norm()).filter(|&a| a > 0.0).collect();
    // stable, so equal magnitudes keep support order
    weights.sort_by(|a, b| b.total_cmp(a));
    DecreasingWeights { weights }
}

/// Places `mu[k]` at index 2k+1 and zero everywhere else, so the result
/// vanishes on 2ℤ and on ℤ≤0 and its rearrangement is `mu`.
pub fn construct_odd_support(mu: &DecreasingWeights) -> LateralSequence {
    let pairs = mu
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &w)| (2 * k as i64 + 1, Complex64::new(w, 0.0)));
    LateralSequence::from_pairs(pairs)
}

/// Σ_{n≥0} μ(n,x)/(n+1). A finite stand-in for the logarithmic Lorentz norm,
/// reported as a diagnostic only.
pub fn lambda_log_diagnostic(x: &LateralSequence) -> f64 {
    decreasing_rearrangement(x)
        .as_slice()
        .iter()
        .enumerate()
        .map(|(n, &m)| m / (n as f64 + 1.0))
        .sum()
}
