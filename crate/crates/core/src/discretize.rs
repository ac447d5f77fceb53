//! Nyström discretization of convolution operators on (−π, π).
//!
//! A Fourier multiplier x(𝒟) is the integral operator with kernel
//! x̂(t−s)/2π. Sampling the kernel on an N-point midpoint grid and weighting
//! by the step h = 2π/N gives the matrix (1/N)·x̂(tᵢ−tⱼ). Node differences
//! are multiples of h, so every kernel entry is a sum of N-th roots of unity
//! looked up from a table rather than recomputed.

use std::f64::consts::PI;
use std::io::Write;

use faer::{c64, Mat, MatRef, Side as FaerSide};
use log::warn;

use crate::error::{Error, Result};
use crate::seqcore::LateralSequence;
use crate::transforms::hilbert_discrete;

pub const MIN_GRID_POINTS: usize = 4;

/// The transformed sequence feeding a multiplier is computed on
/// [−factor·N, factor·N].
pub const DEFAULT_WINDOW_FACTOR: i64 = 8;

/// Relative Hermiticity defect accepted by [`hermitian_eigenvalues`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-8;

/// Midpoint grid tᵢ = −π + (i+½)h on (−π, π).
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    n_points: usize,
    step: f64,
    nodes: Vec<f64>,
}

impl GridSpec {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Index range of the nodes lying in `half`.
    pub fn half_range(&self, half: Half) -> std::ops::Range<usize> {
        let mid = self.n_points / 2;
        match half {
            Half::Negative => 0..mid,
            Half::Positive => mid..self.n_points,
        }
    }

    /// Default number of singular values worth reporting: below N/8
    /// the discretized spectrum of a discontinuous kernel is mostly noise.
    pub fn default_top_k(&self) -> usize {
        (self.n_points / 8).max(1)
    }

    pub fn default_window(&self) -> i64 {
        DEFAULT_WINDOW_FACTOR * self.n_points as i64
    }
}

pub fn make_grid(n_points: usize) -> Result<GridSpec> {
    if n_points < MIN_GRID_POINTS || n_points % 2 != 0 {
        return Err(Error::InvalidGrid(n_points));
    }
    let step = 2.0 * PI / n_points as f64;
    let nodes = (0..n_points).map(|i| -PI + (i as f64 + 0.5) * step).collect();
    Ok(GridSpec { n_points, step, nodes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

/// `Positive` is (0, π), the range of p; `Negative` is (−π, 0), the range of q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Positive,
    Negative,
}

/// A square matrix acting on functions sampled on `grid`.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    grid: GridSpec,
    matrix: Mat<c64>,
}

impl KernelOperator {
    pub fn new(grid: GridSpec, matrix: Mat<c64>) -> Self {
        assert_eq!(matrix.nrows(), grid.n_points, "row count does not match grid");
        assert_eq!(matrix.ncols(), grid.n_points, "column count does not match grid");
        Self { grid, matrix }
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        let n = grid.n_points;
        Self::new(grid.clone(), Mat::zeros(n, n))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.grid.n_points
    }

    pub fn entry(&self, i: usize, j: usize) -> c64 {
        self.matrix[(i, j)]
    }

    pub fn map_entries(&self, f: impl Fn(usize, usize, c64) -> c64) -> Self {
        let n = self.dim();
        Self::new(
            self.grid.clone(),
            Mat::from_fn(n, n, |i, j| f(i, j, self.matrix[(i, j)])),
        )
    }

    pub fn scale(&self, c: c64) -> Self {
        self.map_entries(|_, _, v| v * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "operators live on different grids");
        self.map_entries(|i, j, v| v + other.matrix[(i, j)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c64::new(-1.0, 0.0)))
    }

    /// The compression onto `rows × cols` as a dense block, dropping the
    /// rows and columns a projection would zero out.
    pub fn block(&self, rows: Half, cols: Half) -> Mat<c64> {
        let r = self.grid.half_range(rows);
        let c = self.grid.half_range(cols);
        Mat::from_fn(r.len(), c.len(), |i, j| self.matrix[(r.start + i, c.start + j)])
    }

    pub fn max_abs_entry(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.matrix[(i, j)].norm())
            .fold(0.0, f64::max)
    }
}

/// Sampled symbol x̂(d·h) for d = −(N−1) … N−1, stored at offset d + N − 1.
fn sampled_symbol(x: &LateralSequence, n: usize) -> Vec<c64> {
    let roots: Vec<c64> = (0..n)
        .map(|k| c64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect();
    let terms: Vec<(i64, c64)> = x.nonzero().collect();
    let ni = n as i64;
    (-(ni - 1)..ni)
        .map(|d| {
            terms
                .iter()
                .map(|&(m, v)| v * roots[(m * d).rem_euclid(ni) as usize])
                .sum()
        })
        .collect()
}

fn assemble(x: &LateralSequence, grid: &GridSpec) -> KernelOperator {
    let n = grid.n_points;
    let symbol = sampled_symbol(x, n);
    let weight = 1.0 / n as f64;
    let matrix = Mat::from_fn(n, n, |i, j| symbol[i + n - 1 - j] * weight);
    KernelOperator::new(grid.clone(), matrix)
}

/// The Nyström matrix of x(𝒟): entry (i, j) is (h/2π)·x̂(tᵢ − tⱼ).
///
/// When supp(x) lies inside (−N/2, N/2) the matrix is unitarily similar to
/// diag(x) padded with zeros. Wider supports alias; a warning is logged.
pub fn multiplier_operator(x: &LateralSequence, grid: &GridSpec) -> KernelOperator {
    if let Some((lo, hi)) = x.support() {
        let half = grid.n_points as i64 / 2;
        if lo <= -half || hi >= half {
            warn!(
                "support [{lo}, {hi}] exceeds the {}-point band (-{half}, {half}); frequencies alias",
                grid.n_points
            );
        }
    }
    assemble(x, grid)
}

/// Nyström matrix of (H_d x)(𝒟) with H_d x computed on [−window, window].
///
/// The transformed sequence decays like 1/|n| and never fits in the band,
/// so the matrix samples the truncated Fourier series of its symbol.
pub fn hilbert_multiplier_operator(
    x: &LateralSequence,
    grid: &GridSpec,
    window: i64,
) -> Result<KernelOperator> {
    let y = hilbert_discrete(x, -window, window)?;
    Ok(assemble(&y, grid))
}

/// Multiplies entry (i, j) by sgn(tᵢ − tⱼ); the diagonal is zeroed.
pub fn triangular_truncate(op: &KernelOperator) -> KernelOperator {
    op.map_entries(|i, j, v| match i.cmp(&j) {
        std::cmp::Ordering::Greater => v,
        std::cmp::Ordering::Less => -v,
        std::cmp::Ordering::Equal => c64::new(0.0, 0.0),
    })
}

/// Applies the indicator of `half` from the left (rows), the right
/// (columns) or both.
pub fn project(op: &KernelOperator, side: Side, half: Half) -> KernelOperator {
    let keep = op.grid.half_range(half);
    let (rows, cols) = match side {
        Side::Left => (true, false),
        Side::Right => (false, true),
        Side::Both => (true, true),
    };
    op.map_entries(|i, j, v| {
        if (rows && !keep.contains(&i)) || (cols && !keep.contains(&j)) {
            c64::new(0.0, 0.0)
        } else {
            v
        }
    })
}

/// Nonnegative values sorted nonincreasingly.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.iter_mut().for_each(|v| *v = v.max(0.0));
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    /// `k,sigma` rows with shortest round-trip decimals.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,sigma")?;
        for (k, s) in self.values.iter().enumerate() {
            writeln!(out, "{k},{s:?}")?;
        }
        Ok(())
    }
}

pub(crate) fn matrix_singular_values(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    let mut s = m
        .singular_values()
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Largest singular value of a dense matrix.
pub(crate) fn spectral_norm(m: MatRef<'_, c64>) -> Result<f64> {
    Ok(matrix_singular_values(m)?.first().copied().unwrap_or(0.0))
}

pub(crate) fn top_singular_values(m: MatRef<'_, c64>, top_k: usize) -> Result<SingularSpectrum> {
    let available = m.nrows().min(m.ncols());
    if top_k > available {
        return Err(Error::TopKTooLarge { requested: top_k, available });
    }
    let mut s = matrix_singular_values(m)?;
    s.truncate(top_k);
    Ok(SingularSpectrum::new(s))
}

/// The `top_k` largest singular values of the operator matrix.
pub fn singular_values(op: &KernelOperator, top_k: usize) -> Result<SingularSpectrum> {
    top_singular_values(op.matrix(), top_k)
}

pub(crate) fn matrix_hermitian_eigenvalues(m: MatRef<'_, c64>, top_k: usize) -> Result<Vec<f64>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigenvalues of a non-square matrix");
    if top_k > n {
        return Err(Error::TopKTooLarge { requested: top_k, available: n });
    }
    let mut defect = 0.0f64;
    let mut size = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            defect += (m[(i, j)] - m[(j, i)].conj()).norm_sqr();
            size += m[(i, j)].norm_sqr();
        }
    }
    let relative = if size > 0.0 { (defect / size).sqrt() } else { 0.0 };
    if relative > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(relative));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let sym = Mat::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut eig = sym
        .self_adjoint_eigenvalues(FaerSide::Lower)
        .map_err(|e| Error::Decomposition(format!("{e:?}")))?;
    eig.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
    eig.truncate(top_k);
    Ok(eig)
}

/// Eigenvalues of a Hermitian operator, ordered by decreasing magnitude.
/// Fails when ‖A − A*‖_F exceeds [`HERMITIAN_TOLERANCE`]·‖A‖_F.
pub fn hermitian_eigenvalues(op: &KernelOperator, top_k: usize) -> Result<Vec<f64>> {
    matrix_hermitian_eigenvalues(op.matrix(), top_k)
}
