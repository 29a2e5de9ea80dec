//! Alternating rotation/truncation solver.
//!
//! Starting from the rank-r PCA loadings `V`, each iteration rotates the
//! basis (`Z = V Rᵀ`), truncates every column of `Z` to a unit sparse
//! vector, and refits the rotation as the orthonormal polar factor of
//! `XᵀV`, which solves the Procrustes problem `min_R ‖V − XR‖_F`.
//! Because every rotated column has unit length, one threshold treats all
//! loadings alike and the truncated basis stays close to orthogonal.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{pca_loadings, polar, MatrixInput};
use crate::metrics;
use crate::report::{FitReport, TraceRecord};
use crate::truncation::{truncate, Truncation, TruncationResult};

/// Configuration of [`spcart_fit`].
#[derive(Debug, Clone)]
pub struct SpcartConfig {
    /// Number of sparse loadings.
    pub r: usize,
    pub truncation: Truncation,
    pub max_iterations: usize,
    /// Terminate once `‖X⁽ᵗ⁾ − X⁽ᵗ⁻¹⁾‖_F / √r` drops below this.
    pub rel_change_tol: f64,
    /// Record per-iteration loadings plus the costlier criteria.
    pub record_trace: bool,
    /// Extra fits from random orthogonal starting rotations; the fit with
    /// the highest explained variance wins. Zero keeps the single
    /// identity-initialized fit.
    pub random_restarts: usize,
    pub restart_seed: u64,
}

impl SpcartConfig {
    pub fn new(r: usize, truncation: Truncation) -> Self {
        SpcartConfig {
            r,
            truncation,
            max_iterations: 200,
            rel_change_tol: 0.01,
            record_trace: false,
            random_restarts: 0,
            restart_seed: 0,
        }
    }

    fn validate(&self, input: &MatrixInput) -> Result<()> {
        if self.r == 0 || self.r > input.max_rank() {
            return Err(Error::argument(format!(
                "loading count r={} out of range 1..={}",
                self.r,
                input.max_rank()
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::argument("max_iterations must be at least 1".to_string()));
        }
        if !self.rel_change_tol.is_finite() || self.rel_change_tol <= 0.0 {
            return Err(Error::argument(format!(
                "rel_change_tol must be positive, got {}",
                self.rel_change_tol
            )));
        }
        self.truncation.validate(input.nvars())
    }
}

/// Frobenius distance between iterates with columns sign-aligned to the
/// previous one, scaled by `1/√r`.
pub(crate) fn aligned_rel_change(x: &DMatrix<f64>, prev: &DMatrix<f64>) -> f64 {
    let r = x.ncols();
    let mut sum = 0.0;
    for j in 0..r {
        let sign = if x.column(j).dot(&prev.column(j)) < 0.0 {
            -1.0
        } else {
            1.0
        };
        sum += (x.column(j) * sign - prev.column(j)).norm_squared();
    }
    (sum / r as f64).sqrt()
}

/// Truncates one rotated column; a column annihilated by the operator
/// falls back to the untruncated vector.
fn truncate_column(
    z: &DVector<f64>,
    spec: Truncation,
    iteration: usize,
    column: usize,
    warnings: &mut Vec<String>,
) -> Result<TruncationResult> {
    let result = truncate(z, spec)?;
    if !result.is_zero {
        return Ok(result);
    }
    warnings.push(format!(
        "iteration {iteration}: truncation annihilated column {column}; kept the untruncated vector"
    ));
    Ok(TruncationResult {
        vector: z.clone(),
        is_zero: false,
        truncated_energy: 0.0,
        cardinality: metrics::cardinality(z),
        deviation_sin: 0.0,
    })
}

/// Objective value the truncation type minimizes, evaluated at `(X, R)`.
/// The two heuristic types have no penalty term; their plain approximation
/// residual is logged instead.
fn objective(v: &DMatrix<f64>, x: &DMatrix<f64>, rotation: &DMatrix<f64>, spec: Truncation) -> f64 {
    let residual = (v - x * rotation).norm_squared();
    match spec {
        Truncation::Hard { lambda } => {
            let nnz: usize = (0..x.ncols())
                .map(|j| metrics::cardinality(&x.column(j).into_owned()))
                .sum();
            residual + lambda * lambda * nnz as f64
        }
        Truncation::Soft { lambda } => {
            let l1: f64 = x.iter().map(|v| v.abs()).sum();
            0.5 * residual + lambda * l1
        }
        Truncation::BySparsity { .. } | Truncation::ByEnergy { .. } => residual,
    }
}

struct SingleFit {
    loadings: DMatrix<f64>,
    rotation: DMatrix<f64>,
    iterations: usize,
    converged: bool,
    trace: Vec<TraceRecord>,
    deviations: Vec<f64>,
    truncated_energy: Vec<f64>,
    warnings: Vec<String>,
}

fn run_once(
    input: &MatrixInput,
    v: &DMatrix<f64>,
    initial_rotation: DMatrix<f64>,
    config: &SpcartConfig,
) -> Result<SingleFit> {
    let r = config.r;
    let mut rotation = initial_rotation;
    let mut x_prev: Option<DMatrix<f64>> = None;
    let mut trace = Vec::new();
    let mut warnings = Vec::new();
    let mut recovered = false;

    for t in 1..=config.max_iterations {
        let z = v * rotation.transpose();
        let mut x = DMatrix::zeros(v.nrows(), r);
        let mut deviations = Vec::with_capacity(r);
        let mut energies = Vec::with_capacity(r);
        for j in 0..r {
            let column = truncate_column(
                &z.column(j).into_owned(),
                config.truncation,
                t,
                j,
                &mut warnings,
            )?;
            x.set_column(j, &column.vector);
            deviations.push(column.deviation_sin);
            energies.push(column.truncated_energy);
        }

        let rel_change = x_prev.as_ref().map(|prev| aligned_rel_change(&x, prev));
        let sp_mean = (0..r)
            .map(|j| metrics::sparsity(&x.column(j).into_owned()))
            .sum::<f64>()
            / r as f64;
        let (cpev_t, nor_t, snapshot_x) = if config.record_trace {
            let cp = metrics::cpev(input, &x)?;
            let nor = if r > 1 {
                metrics::nonorthogonality(&x)?.0
            } else {
                0.0
            };
            (Some(cp), Some(nor), Some(x.clone()))
        } else {
            (None, None, None)
        };
        trace.push(TraceRecord {
            iteration: t,
            rel_change,
            truncated_energy_mean: energies.iter().sum::<f64>() / r as f64,
            sp_mean,
            objective: objective(v, &x, &rotation, config.truncation),
            cpev: cpev_t,
            nor: nor_t,
            loadings: snapshot_x,
        });

        let converged = rel_change.is_some_and(|c| c < config.rel_change_tol);
        if converged || t == config.max_iterations {
            return Ok(SingleFit {
                loadings: x,
                rotation,
                iterations: t,
                converged,
                trace,
                deviations,
                truncated_energy: energies,
                warnings,
            });
        }

        match polar(&(x.transpose() * v)) {
            Ok(next) => rotation = next,
            Err(Error::Degeneracy(msg)) if !recovered => {
                warnings.push(format!(
                    "iteration {t}: rotation update degenerated ({msg}); restarted from the identity"
                ));
                rotation = DMatrix::identity(r, r);
                recovered = true;
            }
            Err(err) => return Err(err),
        }
        x_prev = Some(x);
    }
    unreachable!("loop returns on the last iteration");
}

/// Fits `r` sparse loadings by alternating rotation and truncation.
///
/// The returned rotation is the one the final loadings were truncated
/// from, so `loadings == truncate(V Rᵀ)` holds exactly for the returned
/// pair. Identical inputs and configuration produce identical reports.
pub fn spcart_fit(input: &MatrixInput, config: &SpcartConfig) -> Result<FitReport> {
    config.validate(input)?;
    let basis = pca_loadings(input, config.r)?;
    let v = &basis.loadings;

    let mut best = run_once(input, v, DMatrix::identity(config.r, config.r), config)?;
    if config.random_restarts > 0 {
        let mut best_ev = metrics::explained_variance(input, &best.loadings)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.restart_seed);
        for _ in 0..config.random_restarts {
            let start = random_rotation(config.r, &mut rng);
            let candidate = run_once(input, v, start, config)?;
            let ev = metrics::explained_variance(input, &candidate.loadings)?;
            if ev > best_ev {
                best = candidate;
                best_ev = ev;
            }
        }
    }

    let final_metrics = metrics::snapshot(input, &best.loadings)?;
    let pca_cpev = metrics::cpev(input, v)?;
    Ok(FitReport {
        loadings: best.loadings,
        rotation: Some(best.rotation),
        iterations: best.iterations,
        converged: best.converged,
        per_loading_iterations: None,
        trace: best.trace,
        deflation_iterates: None,
        final_metrics,
        pca_loadings: basis.loadings.clone(),
        pca_values: basis.values,
        pca_explained_variance: basis.explained_variance,
        pca_cpev,
        final_deviations: best.deviations,
        final_truncated_energy: best.truncated_energy,
        warnings: best.warnings,
    })
}

fn random_rotation(r: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let gaussian = DMatrix::from_fn(r, r, |_, _| {
        let v: f64 = rng.sample(rand_distr::StandardNormal);
        v
    });
    gaussian.qr().q()
}

/// Hard-thresholds the PCA loadings directly (no rotation refinement).
///
/// This equals the first iterate of [`spcart_fit`] with hard thresholding,
/// bitwise, and serves as the classical post-processing baseline the
/// iterated solver improves on.
pub fn simple_thresholding(input: &MatrixInput, r: usize, lambda: f64) -> Result<DMatrix<f64>> {
    let spec = Truncation::Hard { lambda };
    spec.validate(input.nvars())?;
    if r == 0 || r > input.max_rank() {
        return Err(Error::argument(format!(
            "loading count r={r} out of range 1..={}",
            input.max_rank()
        )));
    }
    let basis = pca_loadings(input, r)?;
    let mut warnings = Vec::new();
    let mut x = DMatrix::zeros(input.nvars(), r);
    for j in 0..r {
        let column = truncate_column(
            &basis.loadings.column(j).into_owned(),
            spec,
            1,
            j,
            &mut warnings,
        )?;
        x.set_column(j, &column.vector);
    }
    Ok(x)
}
