//! Truncated power iterations: a deflation solver that extracts one sparse
//! loading at a time, and a block solver that updates all loadings
//! together.
//!
//! Both default to adaptive thresholds, `x = ‖z‖·T_λ(z/‖z‖)`: the operator
//! acts on the normalized iterate, so one parameter treats all loadings
//! alike even though the column lengths of `AᵀY` decay with the spectrum.
//! Setting `adaptive: false` applies the threshold to the raw iterate
//! instead, which reproduces the uniform-threshold generalized power
//! method and its unbalanced sparsity.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{pca_loadings, polar, thin_svd, MatrixInput};
use crate::metrics;
use crate::report::{FitReport, TraceRecord};
use crate::solver::aligned_rel_change;
use crate::truncation::{apply_raw, package, Truncation, TruncationResult};

/// Iterate norms below this are treated as annihilation by the deflated
/// operator.
const VANISHED: f64 = 1e-14;

/// Starting point of each deflation round.
///
/// `LeadingEigenvector` starts at the top eigendirection of the current
/// deflated operator, the usual truncated-power warm start; it is
/// insensitive to ties and lies in the data subspace by construction.
/// `DominantColumn` starts at the single variable with the largest column
/// norm (data) or diagonal entry (covariance), ties broken by lowest
/// index. On correlation-like inputs every diagonal entry ties, making
/// the dominant column arbitrary, which is why the eigenvector start is
/// the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerInit {
    #[default]
    LeadingEigenvector,
    DominantColumn,
}

/// Configuration shared by [`rsvd_gp_fit`] and [`rsvd_gpb_fit`].
#[derive(Debug, Clone)]
pub struct PowerConfig {
    pub r: usize,
    pub truncation: Truncation,
    /// Threshold the normalized iterate (`‖z‖·T_λ(z/‖z‖)`) instead of the
    /// raw one. Only meaningful for the entry-wise thresholds; the
    /// by-sparsity and by-energy operators are scale-free either way.
    pub adaptive: bool,
    /// Deflation-round starting point (deflation solver only).
    pub init: PowerInit,
    pub max_iterations: usize,
    pub rel_change_tol: f64,
    /// Keep per-iteration iterates for trajectory inspection.
    pub record_trace: bool,
}

impl PowerConfig {
    pub fn new(r: usize, truncation: Truncation) -> Self {
        PowerConfig {
            r,
            truncation,
            adaptive: true,
            init: PowerInit::default(),
            max_iterations: 200,
            rel_change_tol: 0.01,
            record_trace: false,
        }
    }

    fn validate(&self, p: usize, max_rank: usize) -> Result<()> {
        if self.r == 0 || self.r > max_rank {
            return Err(Error::argument(format!(
                "loading count r={} out of range 1..={max_rank}",
                self.r
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
        self.truncation.validate(p)
    }
}

/// Evolving quadratic-form operator of the deflation solver.
enum GramState {
    Data(DMatrix<f64>),
    Covariance(DMatrix<f64>),
}

impl GramState {
    fn from_input(input: &MatrixInput) -> Self {
        match input {
            MatrixInput::Data(a) => GramState::Data(a.clone()),
            MatrixInput::Covariance(c) => GramState::Covariance(c.clone()),
        }
    }

    /// Index of the dominant variable: the largest column norm of `A`, or
    /// the largest diagonal entry of `C`. Lowest index on ties.
    fn init_index(&self) -> usize {
        let scores: Vec<f64> = match self {
            GramState::Data(a) => (0..a.ncols()).map(|j| a.column(j).norm()).collect(),
            GramState::Covariance(c) => c.diagonal().iter().cloned().collect(),
        };
        let mut best = 0usize;
        for (j, s) in scores.iter().enumerate().skip(1) {
            if *s > scores[best] {
                best = j;
            }
        }
        best
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            GramState::Data(a) => a.transpose() * (a * x),
            GramState::Covariance(c) => c * x,
        }
    }

    /// Top eigendirection of the current operator (right singular vector
    /// of `A` / leading eigenvector of `C`), unit norm, or `None` when the
    /// operator has been deflated to zero.
    fn leading_direction(&self) -> Option<DVector<f64>> {
        match self {
            GramState::Data(a) => {
                let svd = a.clone().svd(false, true);
                let vt = svd.v_t.expect("v_t requested");
                let mut best = 0;
                for k in 1..svd.singular_values.len() {
                    if svd.singular_values[k] > svd.singular_values[best] {
                        best = k;
                    }
                }
                if svd.singular_values[best] <= VANISHED {
                    return None;
                }
                Some(vt.row(best).transpose())
            }
            GramState::Covariance(c) => {
                let eig = c.clone().symmetric_eigen();
                let mut best = 0;
                for k in 1..eig.eigenvalues.len() {
                    if eig.eigenvalues[k] > eig.eigenvalues[best] {
                        best = k;
                    }
                }
                if eig.eigenvalues[best] <= VANISHED {
                    return None;
                }
                Some(eig.eigenvectors.column(best).into_owned())
            }
        }
    }

    /// Starting vector of a deflation round under the given policy.
    fn initial_vector(&self, init: PowerInit, p: usize) -> DVector<f64> {
        if init == PowerInit::LeadingEigenvector {
            if let Some(direction) = self.leading_direction() {
                return direction;
            }
        }
        let mut x = DVector::zeros(p);
        x[self.init_index()] = 1.0;
        x
    }

    /// Removes the extracted direction: `A ← A(I − xxᵀ)` or
    /// `C ← (I − xxᵀ) C (I − xxᵀ)`.
    fn deflate(&mut self, x: &DVector<f64>) {
        match self {
            GramState::Data(a) => {
                let ax = &*a * x;
                *a -= ax * x.transpose();
            }
            GramState::Covariance(c) => {
                let cx = &*c * x;
                let xcx = x.dot(&cx);
                *c -= &cx * x.transpose() + x * cx.transpose();
                *c += (x * x.transpose()) * xcx;
                let sym = (&*c + c.transpose()) * 0.5;
                *c = sym;
            }
        }
    }
}

/// One thresholding step on an iterate `z`, honoring the adaptive switch.
/// Returns the packaged result measured on the unit scale, plus the kept
/// vector on the unit scale (the block solver restores the column length
/// from it).
fn threshold_iterate(
    z: &DVector<f64>,
    spec: Truncation,
    adaptive: bool,
) -> (TruncationResult, DVector<f64>) {
    let norm = z.norm();
    let unit = z / norm;
    let kept = if adaptive || spec.is_scale_free() {
        apply_raw(spec, &unit)
    } else {
        apply_raw(spec, z) / norm
    };
    (package(&unit, kept.clone()), kept)
}

fn untruncated_fallback(unit: &DVector<f64>) -> TruncationResult {
    TruncationResult {
        vector: unit.clone(),
        is_zero: false,
        truncated_energy: 0.0,
        cardinality: metrics::cardinality(unit),
        deviation_sin: 0.0,
    }
}

/// Extracts `r` sparse loadings one at a time by truncated power iteration
/// with deflation.
///
/// Each loading starts at the dominant variable of the current deflated
/// operator, iterates `z = AᵀA x` (or `C x`) followed by truncation of the
/// normalized iterate, and is deflated away once converged. Deflation
/// forces `A x_i = 0` afterwards, so later loadings come out nearly
/// orthogonal to earlier ones.
pub fn rsvd_gp_fit(input: &MatrixInput, config: &PowerConfig) -> Result<FitReport> {
    config.validate(input.nvars(), input.max_rank())?;
    let p = input.nvars();
    let r = config.r;
    let basis = pca_loadings(input, r)?;
    let mut state = GramState::from_input(input);

    let mut loadings = DMatrix::zeros(p, r);
    let mut per_loading_iterations = Vec::with_capacity(r);
    let mut deviations = Vec::with_capacity(r);
    let mut energies = Vec::with_capacity(r);
    let mut warnings = Vec::new();
    let mut iterates: Vec<Vec<DVector<f64>>> = Vec::with_capacity(r);
    let mut all_converged = true;

    for i in 0..r {
        let mut x = state.initial_vector(config.init, p);
        let mut column_iterates = Vec::new();
        let mut last_step: Option<TruncationResult> = None;
        let mut converged = false;
        let mut iterations = 0usize;

        for t in 1..=config.max_iterations {
            iterations = t;
            let z = state.apply(&x);
            if z.norm() <= VANISHED {
                warnings.push(format!(
                    "loading {i}: deflated operator annihilated the iterate at inner iteration {t}"
                ));
                converged = true;
                break;
            }
            let (mut step, _) = threshold_iterate(&z, config.truncation, config.adaptive);
            if step.is_zero {
                warnings.push(format!(
                    "loading {i}, inner iteration {t}: truncation annihilated the iterate; kept it untruncated"
                ));
                step = untruncated_fallback(&(z.clone() / z.norm()));
            }
            let x_new = step.vector.clone();
            let rel = {
                let sign = if x_new.dot(&x) < 0.0 { -1.0 } else { 1.0 };
                (&x_new * sign - &x).norm()
            };
            x = x_new;
            if config.record_trace {
                column_iterates.push(x.clone());
            }
            last_step = Some(step);
            if rel < config.rel_change_tol {
                converged = true;
                break;
            }
        }

        all_converged &= converged;
        per_loading_iterations.push(iterations);
        match &last_step {
            Some(step) => {
                deviations.push(step.deviation_sin);
                energies.push(step.truncated_energy);
            }
            None => {
                deviations.push(0.0);
                energies.push(0.0);
            }
        }
        loadings.set_column(i, &x);
        if config.record_trace {
            iterates.push(column_iterates);
        }
        state.deflate(&x);
    }

    let final_metrics = metrics::snapshot(input, &loadings)?;
    let pca_cpev = metrics::cpev(input, &basis.loadings)?;
    Ok(FitReport {
        loadings,
        rotation: None,
        iterations: per_loading_iterations.iter().copied().max().unwrap_or(0),
        converged: all_converged,
        per_loading_iterations: Some(per_loading_iterations),
        trace: Vec::new(),
        deflation_iterates: config.record_trace.then_some(iterates),
        final_metrics,
        pca_loadings: basis.loadings.clone(),
        pca_values: basis.values,
        pca_explained_variance: basis.explained_variance,
        pca_cpev,
        final_deviations: deviations,
        final_truncated_energy: energies,
        warnings,
    })
}

/// Fits all `r` loadings together: `Z = AᵀY`, column-wise truncation that
/// keeps the column lengths, and `Y = Polar(AX)`.
///
/// Operates on a data matrix; covariance-only inputs go through
/// `datasets::artificial_data_from_covariance` first. Nothing forces the
/// loadings orthogonal here, which shows up as a higher nonorthogonality
/// than the deflation solver produces.
pub fn rsvd_gpb_fit(data: &DMatrix<f64>, config: &PowerConfig) -> Result<FitReport> {
    let input = MatrixInput::data(data.clone())?;
    config.validate(input.nvars(), input.max_rank())?;
    let p = data.ncols();
    let r = config.r;

    let svd = thin_svd(data, r)?;
    let pca_ev: f64 = svd.singular_values.iter().map(|s| s * s).sum();
    let mut y = svd.u.clone();

    let mut units = DMatrix::zeros(p, r);
    let mut prev_units: Option<DMatrix<f64>> = None;
    let mut deviations = vec![0.0; r];
    let mut energies = vec![0.0; r];
    let mut warnings = Vec::new();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0usize;

    for t in 1..=config.max_iterations {
        iterations = t;
        let z = data.transpose() * &y;
        let mut x = DMatrix::zeros(p, r);
        for i in 0..r {
            let zi = z.column(i).into_owned();
            let norm = zi.norm();
            if norm <= VANISHED {
                return Err(Error::degeneracy(format!(
                    "block iterate column {i} vanished; the data matrix has rank below r={r}"
                )));
            }
            let (step, kept) = threshold_iterate(&zi, config.truncation, config.adaptive);
            if step.is_zero {
                warnings.push(format!(
                    "iteration {t}: truncation annihilated column {i}; kept it untruncated"
                ));
                units.set_column(i, &(zi.clone() / norm));
                x.set_column(i, &zi);
                deviations[i] = 0.0;
                energies[i] = 0.0;
            } else {
                units.set_column(i, &step.vector);
                x.set_column(i, &(kept * norm));
                deviations[i] = step.deviation_sin;
                energies[i] = step.truncated_energy;
            }
        }

        let rel_change = prev_units
            .as_ref()
            .map(|prev| aligned_rel_change(&units, prev));
        let sp_mean = (0..r)
            .map(|j| metrics::sparsity(&units.column(j).into_owned()))
            .sum::<f64>()
            / r as f64;
        let (cpev_t, nor_t, snapshot) = if config.record_trace {
            let cp = metrics::cpev(&input, &units)?;
            let nor = if r > 1 {
                metrics::nonorthogonality(&units)?.0
            } else {
                0.0
            };
            (Some(cp), Some(nor), Some(units.clone()))
        } else {
            (None, None, None)
        };
        trace.push(TraceRecord {
            iteration: t,
            rel_change,
            truncated_energy_mean: energies.iter().sum::<f64>() / r as f64,
            sp_mean,
            objective: (data - &y * x.transpose()).norm_squared(),
            cpev: cpev_t,
            nor: nor_t,
            loadings: snapshot,
        });

        if rel_change.is_some_and(|c| c < config.rel_change_tol) {
            converged = true;
            break;
        }
        if t == config.max_iterations {
            break;
        }
        y = polar(&(data * &x))?;
        prev_units = Some(units.clone());
    }

    let final_metrics = metrics::snapshot(&input, &units)?;
    let pca_cpev = metrics::cpev(&input, &svd.v)?;
    Ok(FitReport {
        loadings: units,
        rotation: None,
        iterations,
        converged,
        per_loading_iterations: None,
        trace,
        deflation_iterates: None,
        final_metrics,
        pca_loadings: svd.v.clone(),
        pca_values: svd.singular_values,
        pca_explained_variance: pca_ev,
        pca_cpev,
        final_deviations: deviations,
        final_truncated_energy: energies,
        warnings,
    })
}

/// One truncated power step: normalize `P(C x)`, where `P` zeroes the
/// `zeros` smallest-magnitude entries.
///
/// The published recurrence for this iteration is usually written with the
/// retained cardinality `k` as the parameter (zeroing `p−k` entries); here
/// the parameter is the zero count, matching the by-sparsity truncation,
/// so `k = p − zeros`. Exposed as an independent oracle for the deflation
/// solver's trajectory.
pub fn tpower_step(c: &DMatrix<f64>, x: &DVector<f64>, zeros: usize) -> Result<DVector<f64>> {
    if !c.is_square() || c.nrows() != x.len() {
        return Err(Error::argument(format!(
            "operator is {}x{} but the iterate has length {}",
            c.nrows(),
            c.ncols(),
            x.len()
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("operator contains non-finite entries".to_string()));
    }
    if (x.norm() - 1.0).abs() > crate::truncation::UNIT_TOL {
        return Err(Error::argument(format!(
            "power iterate must be a unit vector, got norm {}",
            x.norm()
        )));
    }
    let spec = Truncation::BySparsity { zeros };
    spec.validate(x.len())?;
    let kept = apply_raw(spec, &(c * x));
    let norm = kept.norm();
    if norm <= VANISHED {
        return Err(Error::degeneracy(
            "truncation annihilated the power iterate".to_string(),
        ));
    }
    Ok(kept / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{artificial_data_from_covariance, load_pitprops, synthetic_covariance};
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    fn diag_input(values: &[f64]) -> MatrixInput {
        MatrixInput::covariance(DMatrix::from_diagonal(&DVector::from_row_slice(values)))
            .unwrap()
    }

    #[test]
    fn deflation_recovers_axes_of_diagonal_covariance() {
        let input = diag_input(&[4.0, 1.0]);
        let config = PowerConfig::new(2, Truncation::BySparsity { zeros: 1 });
        let report = rsvd_gp_fit(&input, &config).unwrap();
        assert_eq!(report.support(0), vec![0]);
        assert_eq!(report.support(1), vec![1]);
        assert!(report.converged);
    }

    #[test]
    fn deflation_recovers_synthetic_supports() {
        let input = MatrixInput::covariance(synthetic_covariance()).unwrap();
        let config = PowerConfig::new(2, Truncation::BySparsity { zeros: 4 });
        let report = rsvd_gp_fit(&input, &config).unwrap();
        assert_eq!(report.support(0), vec![4, 5, 6, 7, 8, 9]);
        assert_eq!(report.support(1), vec![0, 1, 2, 3, 8, 9]);
        assert!(
            (report.final_metrics.cpev - 0.9960).abs() < 0.005,
            "cpev = {}",
            report.final_metrics.cpev
        );
    }

    #[test]
    fn deflation_matches_pitprops_benchmarks() {
        let input = MatrixInput::covariance(load_pitprops().unwrap()).unwrap();
        let config = PowerConfig::new(6, Truncation::BySparsity { zeros: 10 });
        let report = rsvd_gp_fit(&input, &config).unwrap();
        assert_eq!(report.final_metrics.per_column_cardinality, vec![3; 6]);
        assert!(
            (report.final_metrics.cpev - 0.7819).abs() < 0.01,
            "cpev = {}",
            report.final_metrics.cpev
        );
        assert!(
            (report.final_metrics.nor - 0.0455).abs() < 0.01,
            "nor = {}",
            report.final_metrics.nor
        );
    }

    #[test]
    fn deflation_forces_near_orthogonality() {
        let input = MatrixInput::covariance(synthetic_covariance()).unwrap();
        let config = PowerConfig::new(3, Truncation::Hard { lambda: 0.3 });
        let report = rsvd_gp_fit(&input, &config).unwrap();
        // replay the deflation and check the operator annihilates each
        // extracted loading
        let mut state = GramState::from_input(&input);
        for i in 0..3 {
            let x = report.loadings.column(i).into_owned();
            state.deflate(&x);
            assert!(
                state.apply(&x).norm() < 1e-8,
                "deflated operator does not annihilate loading {i}"
            );
        }
    }

    #[test]
    fn deflation_data_and_covariance_modes_agree() {
        let mut rng = StdRng::seed_from_u64(5);
        let a = DMatrix::from_fn(12, 6, |_, _| {
            let v: f64 = StandardNormal.sample(&mut rng);
            v
        });
        let gram = a.transpose() * &a;
        let config = PowerConfig::new(3, Truncation::BySparsity { zeros: 3 });
        let from_data =
            rsvd_gp_fit(&MatrixInput::data(a).unwrap(), &config).unwrap();
        let from_cov = rsvd_gp_fit(
            &MatrixInput::covariance((&gram + gram.transpose()) * 0.5).unwrap(),
            &config,
        )
        .unwrap();
        for j in 0..3 {
            let dot = from_data
                .loadings
                .column(j)
                .dot(&from_cov.loadings.column(j));
            assert!((dot.abs() - 1.0).abs() < 1e-8, "column {j}: |dot| = {}", dot.abs());
        }
    }

    #[test]
    fn block_recovers_axes_of_orthogonal_design() {
        let data = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 2.0, 1.0]));
        let config = PowerConfig::new(2, Truncation::Hard { lambda: 0.2 });
        let report = rsvd_gpb_fit(&data, &config).unwrap();
        assert_eq!(report.support(0), vec![0]);
        assert_eq!(report.support(1), vec![1]);
    }

    #[test]
    fn block_matches_pitprops_benchmark() {
        let c = load_pitprops().unwrap();
        let data = artificial_data_from_covariance(&c).unwrap();
        let config = PowerConfig::new(6, Truncation::Hard { lambda: 0.3 });
        let report = rsvd_gpb_fit(&data, &config).unwrap();
        let nz = report.final_metrics.nz();
        assert!(
            (16..=20).contains(&nz),
            "NZ = {nz}, cards {:?}",
            report.final_metrics.per_column_cardinality
        );
        assert!(
            (report.final_metrics.cpev - 0.7744).abs() < 0.01,
            "cpev = {}",
            report.final_metrics.cpev
        );
    }

    #[test]
    fn block_by_sparsity_matches_pitprops_benchmark() {
        let c = load_pitprops().unwrap();
        let data = artificial_data_from_covariance(&c).unwrap();
        let config = PowerConfig::new(6, Truncation::BySparsity { zeros: 10 });
        let report = rsvd_gpb_fit(&data, &config).unwrap();
        assert_eq!(report.final_metrics.per_column_cardinality, vec![3; 6]);
        assert!(
            (report.final_metrics.cpev - 0.7610).abs() < 0.01,
            "cpev = {}",
            report.final_metrics.cpev
        );
    }

    #[test]
    fn tpower_step_reduces_to_power_iteration_without_truncation() {
        let c = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0, 0.25]));
        let mut x = DVector::from_element(3, 1.0 / 3.0_f64.sqrt());
        for _ in 0..50 {
            x = tpower_step(&c, &x, 0).unwrap();
        }
        assert!((x[0].abs() - 1.0).abs() < 1e-6, "iterate {x:?}");
    }

    #[test]
    fn tpower_step_identity_keeps_direction() {
        let c = DMatrix::<f64>::identity(4, 4);
        let x = DVector::from_element(4, 0.5);
        let stepped = tpower_step(&c, &x, 0).unwrap();
        assert_relative_eq!(stepped, x, epsilon = 1e-12);
    }

    #[test]
    fn tpower_step_errors_when_annihilated() {
        // the iterate sits in the null space, so C x = 0 and the
        // truncated step has nothing to normalize
        let c = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let x = DVector::from_row_slice(&[0.0, 1.0]);
        assert!(matches!(
            tpower_step(&c, &x, 1),
            Err(Error::Degeneracy(_))
        ));
    }

    #[test]
    fn deflation_by_sparsity_follows_tpower_trajectory() {
        let mut rng = StdRng::seed_from_u64(99);
        for trial in 0..20 {
            let p = 6 + (trial % 5);
            let g = DMatrix::from_fn(p + 3, p, |_, _| {
                let v: f64 = StandardNormal.sample(&mut rng);
                v
            });
            let gram = g.transpose() * &g;
            let input = MatrixInput::covariance((&gram + gram.transpose()) * 0.5).unwrap();
            let zeros = p / 2;
            let mut config = PowerConfig::new(2, Truncation::BySparsity { zeros });
            config.record_trace = true;
            let report = rsvd_gp_fit(&input, &config).unwrap();
            let iterates = report.deflation_iterates.as_ref().unwrap();

            // replay each loading against the independent recurrence on
            // the deflated operator
            let mut state = GramState::from_input(&input);
            for (i, column) in iterates.iter().enumerate() {
                let mut x = state.initial_vector(config.init, p);
                for stored in column {
                    x = tpower_step(state_matrix(&state), &x, zeros).unwrap();
                    assert!(
                        (&x - stored).norm() < 1e-10,
                        "trial {trial}, loading {i}: trajectory diverged"
                    );
                }
                state.deflate(&report.loadings.column(i).into_owned());
            }
        }
    }

    fn state_matrix(state: &GramState) -> &DMatrix<f64> {
        match state {
            GramState::Covariance(c) => c,
            GramState::Data(_) => unreachable!("covariance-mode test"),
        }
    }

    #[test]
    fn block_is_deterministic() {
        let c = synthetic_covariance();
        let data = artificial_data_from_covariance(&c).unwrap();
        let config = PowerConfig::new(2, Truncation::Hard { lambda: 0.2 });
        let a = rsvd_gpb_fit(&data, &config).unwrap();
        let b = rsvd_gpb_fit(&data, &config).unwrap();
        assert_eq!(a.loadings, b.loadings);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn rejects_invalid_configs() {
        let input = diag_input(&[1.0, 2.0]);
        let config = PowerConfig::new(5, Truncation::Hard { lambda: 0.2 });
        assert!(rsvd_gp_fit(&input, &config).is_err());
        let data = DMatrix::<f64>::identity(3, 2);
        let config = PowerConfig::new(1, Truncation::Soft { lambda: 1.2 });
        assert!(rsvd_gpb_fit(&data, &config).is_err());
    }
}
