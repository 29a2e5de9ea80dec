//! Evaluation criteria for a loading matrix: sparsity statistics,
//! nonorthogonality, explained variance, and the cumulative percentage of
//! explained variance of the spanned subspace.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{orthonormal_span, MatrixInput};

/// Entries with magnitude at or below this count as zeros. Truncation
/// stores exact zeros; the tolerance only guards values that went through
/// a text round-trip.
pub const ZERO_TOL: f64 = 1e-12;

/// Summary criteria of a loading matrix against an input.
///
/// `sp_std` is the sample standard deviation (n−1 denominator) of the
/// per-column sparsities, which is how cardinality-pattern spread is
/// conventionally tabulated.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSnapshot {
    pub sp_mean: f64,
    pub sp_std: f64,
    pub sp_worst: f64,
    pub nor: f64,
    pub ev: f64,
    pub cpev: f64,
    pub per_column_sparsity: Vec<f64>,
    pub per_column_cardinality: Vec<usize>,
}

impl MetricsSnapshot {
    /// Total cardinality over all loadings.
    pub fn nz(&self) -> usize {
        self.per_column_cardinality.iter().sum()
    }
}

/// Fraction of zero entries of a vector.
pub fn sparsity(x: &DVector<f64>) -> f64 {
    let p = x.len();
    assert!(p >= 1, "sparsity of an empty vector is undefined");
    let zeros = x.iter().filter(|v| v.abs() <= ZERO_TOL).count();
    zeros as f64 / p as f64
}

/// Number of nonzero entries of a vector.
pub fn cardinality(x: &DVector<f64>) -> usize {
    x.iter().filter(|v| v.abs() > ZERO_TOL).count()
}

/// Explained variance `tr(Xᵀ AᵀA X)` (data input) or `tr(Xᵀ C X)`
/// (covariance input).
pub fn explained_variance(input: &MatrixInput, x: &DMatrix<f64>) -> Result<f64> {
    if x.nrows() != input.nvars() {
        return Err(Error::input(format!(
            "loading matrix has {} rows but the input has {} variables",
            x.nrows(),
            input.nvars()
        )));
    }
    Ok(input.quadratic_trace(x))
}

/// Cumulative percentage of explained variance: the variance captured by
/// the subspace spanned by `x`, normalized by the total variance. Invariant
/// to any invertible recombination of the columns of `x`.
pub fn cpev(input: &MatrixInput, x: &DMatrix<f64>) -> Result<f64> {
    if x.nrows() != input.nvars() {
        return Err(Error::input(format!(
            "loading matrix has {} rows but the input has {} variables",
            x.nrows(),
            input.nvars()
        )));
    }
    let basis = orthonormal_span(x)?;
    Ok(input.quadratic_trace(&basis) / input.total_variance())
}

/// Mean pairwise nonorthogonality together with the full `|cos|` matrix
/// (zero diagonal). Requires at least two unit-norm columns.
pub fn nonorthogonality(x: &DMatrix<f64>) -> Result<(f64, DMatrix<f64>)> {
    let r = x.ncols();
    if r < 2 {
        return Err(Error::argument(
            "nonorthogonality needs at least two loadings".to_string(),
        ));
    }
    let mut cos = DMatrix::zeros(r, r);
    let mut sum = 0.0;
    for i in 0..r {
        for j in (i + 1)..r {
            let ni = x.column(i).norm();
            let nj = x.column(j).norm();
            let c = if ni == 0.0 || nj == 0.0 {
                0.0
            } else {
                (x.column(i).dot(&x.column(j)) / (ni * nj)).abs()
            };
            cos[(i, j)] = c;
            cos[(j, i)] = c;
            sum += 2.0 * c;
        }
    }
    Ok((sum / (r * (r - 1)) as f64, cos))
}

/// Angle in `[0, π/2]` between two unit vectors, from the unsigned dot
/// product. A zero `x` counts as fully deviated (π/2).
pub fn deviation_angle(x: &DVector<f64>, z: &DVector<f64>) -> f64 {
    if x.norm() == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    x.dot(z).abs().clamp(0.0, 1.0).acos()
}

/// Computes every criterion of `x` against `input` in one pass.
pub fn snapshot(input: &MatrixInput, x: &DMatrix<f64>) -> Result<MetricsSnapshot> {
    let r = x.ncols();
    if r == 0 {
        return Err(Error::argument("loading matrix has no columns".to_string()));
    }
    let per_column_sparsity: Vec<f64> =
        (0..r).map(|j| sparsity(&x.column(j).into_owned())).collect();
    let per_column_cardinality: Vec<usize> =
        (0..r).map(|j| cardinality(&x.column(j).into_owned())).collect();
    let sp_mean = per_column_sparsity.iter().sum::<f64>() / r as f64;
    let sp_std = if r > 1 {
        let var = per_column_sparsity
            .iter()
            .map(|s| (s - sp_mean) * (s - sp_mean))
            .sum::<f64>()
            / (r - 1) as f64;
        var.sqrt()
    } else {
        0.0
    };
    let sp_worst = per_column_sparsity
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let nor = if r > 1 { nonorthogonality(x)?.0 } else { 0.0 };
    let ev = explained_variance(input, x)?;
    let cpev = cpev(input, x)?;
    Ok(MetricsSnapshot {
        sp_mean,
        sp_std,
        sp_worst,
        nor,
        ev,
        cpev,
        per_column_sparsity,
        per_column_cardinality,
    })
}
