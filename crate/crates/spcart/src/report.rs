//! Result types returned by the fitting routines.

use nalgebra::{DMatrix, DVector};

use crate::metrics::MetricsSnapshot;

/// One convergence-trace entry.
///
/// `rel_change`, `truncated_energy_mean`, `sp_mean` and `objective` are
/// recorded on every iteration. `cpev`, `nor` and the loading snapshot are
/// populated only when tracing is requested, since they cost extra
/// factorizations per iteration.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    /// 1-based iteration index.
    pub iteration: usize,
    /// `‖X⁽ᵗ⁾ − X⁽ᵗ⁻¹⁾‖_F / √r` with sign-aligned columns; `None` on the
    /// first iteration.
    pub rel_change: Option<f64>,
    /// Mean removed energy over the columns truncated this iteration.
    pub truncated_energy_mean: f64,
    /// Mean column sparsity of the iterate.
    pub sp_mean: f64,
    /// Value of the objective the truncation type minimizes (plain
    /// approximation residual for the heuristic types).
    pub objective: f64,
    pub cpev: Option<f64>,
    pub nor: Option<f64>,
    /// Iterate snapshot, kept only when tracing.
    pub loadings: Option<DMatrix<f64>>,
}

/// Fit outcome shared by the rotation solver and the power-family solvers.
#[derive(Debug, Clone)]
pub struct FitReport {
    /// Sparse loadings, `p×r`, unit columns unless flagged in `warnings`.
    pub loadings: DMatrix<f64>,
    /// Final rotation (rotation solver only); satisfies `RᵀR = I` and the
    /// returned loadings equal the truncation of `V Rᵀ` exactly.
    pub rotation: Option<DMatrix<f64>>,
    /// Iterations performed (for the deflation solver: the maximum over
    /// loadings; see `per_loading_iterations`).
    pub iterations: usize,
    pub converged: bool,
    /// Inner iteration count per extracted loading (deflation solver only).
    pub per_loading_iterations: Option<Vec<usize>>,
    pub trace: Vec<TraceRecord>,
    /// Per-loading iterate snapshots of the deflation solver, kept only
    /// when tracing: `deflation_iterates[i][t]` is the unit iterate of
    /// loading `i` after inner iteration `t`.
    pub deflation_iterates: Option<Vec<Vec<DVector<f64>>>>,
    pub final_metrics: MetricsSnapshot,
    /// PCA loadings `V` the fit measured itself against.
    pub pca_loadings: DMatrix<f64>,
    /// Singular values (data input) or eigenvalues (covariance input)
    /// that come with `pca_loadings`.
    pub pca_values: DVector<f64>,
    /// `EV(V)`.
    pub pca_explained_variance: f64,
    /// `CPEV(V)`.
    pub pca_cpev: f64,
    /// Sine of the deviation angle of each final loading from the vector
    /// it was truncated from.
    pub final_deviations: Vec<f64>,
    /// Removed energy of each final loading.
    pub final_truncated_energy: Vec<f64>,
    /// Non-fatal events (zero-truncation fallbacks, skipped checks).
    pub warnings: Vec<String>,
}

impl FitReport {
    /// Nonzero support (0-based indices) of loading `j`.
    pub fn support(&self, j: usize) -> Vec<usize> {
        self.loadings
            .column(j)
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > crate::metrics::ZERO_TOL)
            .map(|(i, _)| i)
            .collect()
    }
}
