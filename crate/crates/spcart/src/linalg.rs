//! Dense linear-algebra primitives shared by every solver: thin SVD with a
//! fixed sign convention, polar decomposition, orthonormal span bases,
//! column centering, and rank-r PCA on either a data or a covariance matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Numerical-rank cutoff, relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-10;

/// Smallest singular value accepted by [`polar`] before a matrix is
/// declared rank deficient.
pub const POLAR_MIN_SV: f64 = 1e-12;

/// Thin singular value decomposition `M = U diag(S) Vᵀ`.
///
/// Columns of `u` and `v` are orthonormal; singular values are sorted
/// nonincreasing. Signs are fixed so that the largest-magnitude entry of
/// each right singular vector is positive (ties broken by lowest index),
/// which makes repeated factorizations reproducible.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl ThinSvd {
    /// Reconstructs `U diag(S) Vᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let scaled = self.u.clone() * DMatrix::from_diagonal(&self.singular_values);
        scaled * self.v.transpose()
    }
}

/// A data matrix whose columns (variables) have been shifted to mean zero,
/// together with the removed means.
#[derive(Debug, Clone)]
pub struct CenteredData {
    pub matrix: DMatrix<f64>,
    pub column_means: DVector<f64>,
}

/// Input accepted by every solver: either an `n×p` data matrix (samples are
/// rows, variables are columns) or a `p×p` covariance matrix.
#[derive(Debug, Clone)]
pub enum MatrixInput {
    Data(DMatrix<f64>),
    Covariance(DMatrix<f64>),
}

impl MatrixInput {
    /// Wraps an `n×p` data matrix. Rows are samples; the matrix is used
    /// as-is, so center it first if the variables are not mean-free.
    pub fn data(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.is_empty() {
            return Err(Error::input("data matrix must be nonempty"));
        }
        check_finite(&matrix, "data matrix")?;
        Ok(MatrixInput::Data(matrix))
    }

    /// Wraps a `p×p` covariance (or correlation) matrix. Symmetry is
    /// required up to `1e-8` relative to the largest entry; positive
    /// semidefiniteness is verified when the matrix is decomposed.
    pub fn covariance(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.is_empty() {
            return Err(Error::input("covariance matrix must be nonempty"));
        }
        if !matrix.is_square() {
            return Err(Error::input(format!(
                "covariance matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_finite(&matrix, "covariance matrix")?;
        let scale = matrix.amax().max(1.0);
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > 1e-8 * scale {
            return Err(Error::input(format!(
                "covariance matrix is asymmetric: max |C - Cᵀ| = {asym:.3e}"
            )));
        }
        Ok(MatrixInput::Covariance(matrix))
    }

    /// Number of variables `p`.
    pub fn nvars(&self) -> usize {
        match self {
            MatrixInput::Data(m) => m.ncols(),
            MatrixInput::Covariance(m) => m.ncols(),
        }
    }

    /// Largest admissible number of loadings: `min(n, p)` for data input,
    /// `p` for covariance input.
    pub fn max_rank(&self) -> usize {
        match self {
            MatrixInput::Data(m) => m.nrows().min(m.ncols()),
            MatrixInput::Covariance(m) => m.ncols(),
        }
    }

    pub fn is_covariance(&self) -> bool {
        matches!(self, MatrixInput::Covariance(_))
    }

    /// Total variance `tr(AᵀA)` (data) or `tr(C)` (covariance).
    pub fn total_variance(&self) -> f64 {
        match self {
            MatrixInput::Data(m) => m.iter().map(|v| v * v).sum(),
            MatrixInput::Covariance(m) => m.diagonal().sum(),
        }
    }

    /// Quadratic trace `tr(Xᵀ AᵀA X)` (data) or `tr(Xᵀ C X)` (covariance).
    pub(crate) fn quadratic_trace(&self, x: &DMatrix<f64>) -> f64 {
        match self {
            MatrixInput::Data(m) => {
                let ax = m * x;
                ax.iter().map(|v| v * v).sum()
            }
            MatrixInput::Covariance(c) => {
                let cx = c * x;
                x.iter().zip(cx.iter()).map(|(a, b)| a * b).sum()
            }
        }
    }
}

/// Rank-r PCA loadings with the associated spectrum.
///
/// `values` holds singular values of the data matrix or eigenvalues of the
/// covariance matrix, sorted nonincreasing; `explained_variance` is
/// `Σ values²` respectively `Σ values`.
#[derive(Debug, Clone)]
pub struct PcaBasis {
    pub loadings: DMatrix<f64>,
    pub values: DVector<f64>,
    pub explained_variance: f64,
}

fn check_finite(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::input(format!("{what} contains non-finite entries")))
    }
}

/// Index of the largest-magnitude entry of a column, lowest index on ties.
fn dominant_index(col: nalgebra::DVectorView<'_, f64>) -> usize {
    let mut best = 0usize;
    let mut best_abs = col[0].abs();
    for (i, v) in col.iter().enumerate().skip(1) {
        if v.abs() > best_abs {
            best = i;
            best_abs = v.abs();
        }
    }
    best
}

/// Flips column signs of `v` (and matching columns of `u`, when given) so
/// the largest-magnitude entry of each column of `v` is positive.
fn fix_signs(v: &mut DMatrix<f64>, mut u: Option<&mut DMatrix<f64>>) {
    for j in 0..v.ncols() {
        let idx = dominant_index(v.column(j));
        if v[(idx, j)] < 0.0 {
            v.column_mut(j).neg_mut();
            if let Some(u) = u.as_deref_mut() {
                u.column_mut(j).neg_mut();
            }
        }
    }
}

/// Thin SVD truncated to the leading `k` singular triplets.
pub fn thin_svd(m: &DMatrix<f64>, k: usize) -> Result<ThinSvd> {
    check_finite(m, "matrix")?;
    let max_k = m.nrows().min(m.ncols());
    if k == 0 || k > max_k {
        return Err(Error::argument(format!(
            "rank k={k} out of range 1..={max_k} for a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let svd = m.clone().svd(true, true);
    let u_full = svd.u.expect("u requested");
    let vt_full = svd.v_t.expect("v_t requested");
    let sigma = svd.singular_values;

    // Order triplets by singular value, nonincreasing; stable under ties.
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).expect("finite"));

    let mut u = DMatrix::zeros(m.nrows(), k);
    let mut v = DMatrix::zeros(m.ncols(), k);
    let mut s = DVector::zeros(k);
    for (j, &src) in order.iter().take(k).enumerate() {
        u.set_column(j, &u_full.column(src));
        v.set_column(j, &vt_full.row(src).transpose());
        s[j] = sigma[src];
    }
    fix_signs(&mut v, Some(&mut u));
    Ok(ThinSvd {
        u,
        singular_values: s,
        v,
    })
}

/// Orthonormal factor of the polar decomposition `B = W D Qᵀ ↦ W Qᵀ`.
///
/// For square `B` this is the closest orthogonal matrix in Frobenius norm;
/// it maximizes `tr(RᵀB)` over orthonormal-column `R`.
pub fn polar(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_finite(b, "matrix")?;
    if b.nrows() < b.ncols() {
        return Err(Error::argument(format!(
            "polar factor needs nrows >= ncols, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    let svd = b.clone().svd(true, true);
    let min_sv = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_sv <= POLAR_MIN_SV {
        return Err(Error::degeneracy(format!(
            "polar decomposition of a rank-deficient matrix: smallest singular value {min_sv:.3e}"
        )));
    }
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    Ok(u * vt)
}

/// Orthonormal basis of the column span of `x`. The number of returned
/// columns is the numerical rank at tolerance [`RANK_TOL`]`·σ_max`.
pub fn orthonormal_span(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_finite(x, "matrix")?;
    let svd = x.clone().svd(true, false);
    let sigma_max = svd
        .singular_values
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max);
    if sigma_max == 0.0 {
        return Err(Error::degeneracy(
            "orthonormal span of an all-zero matrix".to_string(),
        ));
    }
    let u_full = svd.u.expect("u requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("finite")
    });
    let rank = order
        .iter()
        .filter(|&&i| svd.singular_values[i] > RANK_TOL * sigma_max)
        .count();
    let mut basis = DMatrix::zeros(x.nrows(), rank);
    for (j, &src) in order.iter().take(rank).enumerate() {
        basis.set_column(j, &u_full.column(src));
    }
    Ok(basis)
}

/// Shifts every column of `m` to mean zero, keeping the removed means.
pub fn center_columns(m: &DMatrix<f64>) -> Result<CenteredData> {
    check_finite(m, "matrix")?;
    let n = m.nrows();
    if n < 2 {
        return Err(Error::argument(format!(
            "centering needs at least 2 rows, got {n}"
        )));
    }
    let mut centered = m.clone();
    let mut means = DVector::zeros(m.ncols());
    for j in 0..m.ncols() {
        let mean = m.column(j).sum() / n as f64;
        means[j] = mean;
        centered.column_mut(j).add_scalar_mut(-mean);
    }
    Ok(CenteredData {
        matrix: centered,
        column_means: means,
    })
}

/// Rank-r PCA loadings: the leading right singular vectors of a data
/// matrix, or the leading eigenvectors of a covariance matrix. Signs follow
/// the [`thin_svd`] convention.
pub fn pca_loadings(input: &MatrixInput, r: usize) -> Result<PcaBasis> {
    if r == 0 || r > input.max_rank() {
        return Err(Error::argument(format!(
            "loading count r={r} out of range 1..={}",
            input.max_rank()
        )));
    }
    match input {
        MatrixInput::Data(a) => {
            let svd = thin_svd(a, r)?;
            let ev = svd.singular_values.iter().map(|s| s * s).sum();
            Ok(PcaBasis {
                loadings: svd.v,
                values: svd.singular_values,
                explained_variance: ev,
            })
        }
        MatrixInput::Covariance(c) => {
            let sym = (c + c.transpose()) * 0.5;
            let eigen = sym.symmetric_eigen();
            let eig_max = eigen.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
            let eig_min = eigen
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if eig_min < -1e-8 * eig_max.max(1.0) {
                return Err(Error::input(format!(
                    "covariance matrix is indefinite: smallest eigenvalue {eig_min:.3e}"
                )));
            }
            let mut order: Vec<usize> = (0..eigen.eigenvalues.len()).collect();
            order.sort_by(|&a, &b| {
                eigen.eigenvalues[b]
                    .partial_cmp(&eigen.eigenvalues[a])
                    .expect("finite")
            });
            let mut loadings = DMatrix::zeros(c.nrows(), r);
            let mut values = DVector::zeros(r);
            for (j, &src) in order.iter().take(r).enumerate() {
                loadings.set_column(j, &eigen.eigenvectors.column(src));
                values[j] = eigen.eigenvalues[src];
            }
            fix_signs(&mut loadings, None);
            let ev = values.sum();
            Ok(PcaBasis {
                loadings,
                values,
                explained_variance: ev,
            })
        }
    }
}
