//! Executable performance bounds for the truncation operators and the
//! explained variance, plus seeded Monte-Carlo verifiers that compare them
//! with empirical runs.
//!
//! The truncation bounds are absolute: they hold for any unit input, so a
//! single observed violation is a bug, not noise. The explained-variance
//! lower bound through `d_min` holds for arbitrary loading matrices; the
//! sharper cosine bound applies at a converged rotation fit under a
//! uniform-deviation hypothesis and is reported as vacuous when negative.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::MatrixInput;
use crate::metrics;
use crate::report::FitReport;
use crate::truncation::{truncate, Truncation};

/// Slack applied at interval endpoints: open endpoints are measure-zero,
/// so verifiers test the closed interval widened by this much.
pub const BOUND_SLACK: f64 = 1e-9;

/// Deviation angles within this spread (radians) count as uniform for the
/// cosine explained-variance bound.
pub const UNIFORM_DEVIATION_TOL: f64 = 0.02;

/// Inclusive interval, `hi = +∞` for one-sided lower bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lo - BOUND_SLACK && value <= self.hi + BOUND_SLACK
    }
}

/// Where a bound was evaluated.
#[derive(Debug, Clone)]
pub struct BoundContext {
    pub lambda: f64,
    pub p: usize,
    pub r: usize,
    /// Truncation tag (`l0`, `l1`, `sp`, `en`) or `-` for basis-level
    /// bounds.
    pub kind: String,
}

/// One theoretical-vs-empirical comparison.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: String,
    pub theoretical: Interval,
    pub empirical: f64,
    pub satisfied: bool,
    /// The bound exists but carries no information here (negative
    /// explained-variance lower bound, or a heuristic guidance line).
    pub vacuous: bool,
    pub context: BoundContext,
    pub note: Option<String>,
}

impl BoundReport {
    fn new(name: &str, theoretical: Interval, empirical: f64, context: BoundContext) -> Self {
        BoundReport {
            name: name.to_string(),
            satisfied: theoretical.contains(empirical),
            vacuous: false,
            theoretical,
            empirical,
            context,
            note: None,
        }
    }
}

/// Sparsity and deviation intervals guaranteed by one operator at one
/// parameter value.
#[derive(Debug, Clone, Copy)]
pub struct TruncationBounds {
    pub sparsity: Interval,
    pub deviation: Interval,
}

/// Upper bound on `|cos|` between two truncated vectors whose sources were
/// orthogonal, given their deviation angles.
pub fn nonortho_bound(theta1: f64, theta2: f64) -> f64 {
    if theta1 + theta2 <= std::f64::consts::FRAC_PI_2 {
        (theta1 + theta2).sin()
    } else {
        1.0
    }
}

/// Hard-threshold bounds. Below the uniform entry value `1/√p` nothing
/// forces sparsity but the deviation is capped; at or above it the
/// surviving cardinality is capped instead.
pub fn hard_threshold_bounds(lambda: f64, p: usize) -> Result<TruncationBounds> {
    Truncation::Hard { lambda }.validate(p)?;
    let pf = p as f64;
    let uniform = 1.0 / pf.sqrt();
    Ok(if lambda < uniform {
        TruncationBounds {
            sparsity: Interval::new(0.0, 1.0 - 1.0 / pf),
            deviation: Interval::new(0.0, (pf - 1.0).sqrt() * lambda),
        }
    } else {
        TruncationBounds {
            sparsity: Interval::new(1.0 - 1.0 / (pf * lambda * lambda), 1.0),
            deviation: Interval::new(0.0, 1.0),
        }
    })
}

/// Soft thresholding guarantees the same sparsity interval as hard
/// thresholding; its deviation is bounded per vector, see
/// [`soft_threshold_deviation_bounds`].
pub fn soft_threshold_sparsity_bounds(lambda: f64, p: usize) -> Result<Interval> {
    Ok(hard_threshold_bounds(lambda, p)?.sparsity)
}

/// Per-vector deviation interval of soft thresholding:
/// `[‖z̄‖, √(‖z̄‖² + λ²·card))`, where `‖z̄‖²` is the removed energy and
/// `card` the surviving cardinality. The upper endpoint is exclusive.
pub fn soft_threshold_deviation_bounds(
    truncated_energy: f64,
    lambda: f64,
    cardinality: usize,
) -> Interval {
    let lo = truncated_energy.max(0.0).sqrt();
    let hi = (truncated_energy + lambda * lambda * cardinality as f64).sqrt();
    Interval::new(lo, hi)
}

/// By-sparsity bounds: zeroing `zeros` entries guarantees that fraction of
/// sparsity directly, and the removed mass is at most `zeros/p` of a unit
/// vector.
pub fn by_sparsity_bounds(zeros: usize, p: usize) -> Result<TruncationBounds> {
    Truncation::BySparsity { zeros }.validate(p)?;
    let pf = p as f64;
    Ok(TruncationBounds {
        sparsity: Interval::new(zeros as f64 / pf, 1.0 - 1.0 / pf),
        deviation: Interval::new(0.0, (zeros as f64 / pf).sqrt()),
    })
}

/// By-energy bounds: the removed mass is capped by `share` directly, and
/// at least `⌊share·p⌋` entries go (none when `share < 1/p`).
pub fn by_energy_bounds(share: f64, p: usize) -> Result<TruncationBounds> {
    Truncation::ByEnergy { share }.validate(p)?;
    let pf = p as f64;
    Ok(TruncationBounds {
        sparsity: Interval::new((share * pf).floor() / pf, 1.0 - 1.0 / pf),
        deviation: Interval::new(0.0, share.sqrt()),
    })
}

/// Bounds of any operator at one parameter, for containment checks. Soft
/// thresholding gets its sparsity interval and a trivial deviation
/// interval (its deviation bound is per-vector).
pub fn operator_bounds(spec: Truncation, p: usize) -> Result<TruncationBounds> {
    match spec {
        Truncation::Hard { lambda } => hard_threshold_bounds(lambda, p),
        Truncation::Soft { lambda } => Ok(TruncationBounds {
            sparsity: soft_threshold_sparsity_bounds(lambda, p)?,
            deviation: Interval::new(0.0, 1.0),
        }),
        Truncation::BySparsity { zeros } => by_sparsity_bounds(zeros, p),
        Truncation::ByEnergy { share } => by_energy_bounds(share, p),
    }
}

/// Universal explained-variance lower bound: `d_min²·EV(V) ≤ EV(X)` with
/// `d_min` the smallest singular value of `XᵀV`. Holds for any `X`.
pub fn ev_dmin_bound(
    input: &MatrixInput,
    x: &DMatrix<f64>,
    v: &DMatrix<f64>,
) -> Result<BoundReport> {
    if x.nrows() != v.nrows() || x.ncols() != v.ncols() {
        return Err(Error::input(format!(
            "loading matrices disagree: {}x{} vs {}x{}",
            x.nrows(),
            x.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }
    let cross = x.transpose() * v;
    let d_min = cross
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let ev_v = metrics::explained_variance(input, v)?;
    let ev_x = metrics::explained_variance(input, x)?;
    let mut report = BoundReport::new(
        "ev_dmin",
        Interval::new(d_min * d_min * ev_v, f64::INFINITY),
        ev_x,
        BoundContext {
            lambda: f64::NAN,
            p: x.nrows(),
            r: x.ncols(),
            kind: "-".to_string(),
        },
    );
    report.note = Some(format!("d_min = {d_min:.6}"));
    Ok(report)
}

/// Cosine explained-variance lower bound at uniform deviation angle θ:
/// `(cos²θ − √(r−1)·sin 2θ)·EV(V)`. May be negative (vacuous) for large θ.
pub fn ev_cos_bound(theta: f64, r: usize, ev_v: f64) -> f64 {
    let factor = theta.cos().powi(2) - ((r - 1) as f64).sqrt() * (2.0 * theta).sin();
    factor * ev_v
}

/// Outcome of the cosine-bound check on a fit.
#[derive(Debug, Clone)]
pub enum CosBoundCheck {
    Checked(BoundReport),
    /// The theorem's hypotheses do not hold here; carries the reason.
    Skipped(String),
}

/// Evaluates the cosine bound on a converged rotation fit when its
/// hypotheses hold: uniform column deviations (spread within
/// [`UNIFORM_DEVIATION_TOL`]) and unit-capped row sums of `C = ZᵀX`.
pub fn ev_cos_check(input: &MatrixInput, report: &FitReport) -> Result<CosBoundCheck> {
    let Some(rotation) = report.rotation.as_ref() else {
        return Ok(CosBoundCheck::Skipped(
            "no rotation available (not a rotation-solver fit)".to_string(),
        ));
    };
    let x = &report.loadings;
    let r = x.ncols();
    let z = &report.pca_loadings * rotation.transpose();
    let cross = z.transpose() * x;

    let thetas: Vec<f64> = (0..r)
        .map(|i| cross[(i, i)].abs().clamp(0.0, 1.0).acos())
        .collect();
    let theta_max = thetas.iter().cloned().fold(0.0_f64, f64::max);
    let theta_min = thetas.iter().cloned().fold(f64::INFINITY, f64::min);
    if theta_max - theta_min > UNIFORM_DEVIATION_TOL {
        return Ok(CosBoundCheck::Skipped(format!(
            "deviations not uniform: spread {:.4} rad",
            theta_max - theta_min
        )));
    }
    for i in 0..r {
        let row_sum: f64 = (0..r).map(|j| cross[(i, j)] * cross[(i, j)]).sum();
        if row_sum > 1.0 + BOUND_SLACK {
            return Ok(CosBoundCheck::Skipped(format!(
                "row {i} of ZᵀX has squared sum {row_sum:.6} > 1"
            )));
        }
    }

    let bound = ev_cos_bound(theta_max, r, report.pca_explained_variance);
    let ev_x = metrics::explained_variance(input, x)?;
    let mut out = BoundReport::new(
        "ev_cos",
        Interval::new(bound, f64::INFINITY),
        ev_x,
        BoundContext {
            lambda: f64::NAN,
            p: x.nrows(),
            r,
            kind: "-".to_string(),
        },
    );
    out.vacuous = bound < 0.0;
    out.note = Some(format!("theta = {theta_max:.6} rad"));
    Ok(CosBoundCheck::Checked(out))
}

/// Worst-margin sparsity containment of fitted loadings against the
/// operator's guaranteed interval.
pub fn sparsity_bound_report(
    spec: Truncation,
    p: usize,
    per_column_sparsity: &[f64],
) -> Result<BoundReport> {
    let interval = operator_bounds(spec, p)?.sparsity;
    let (worst_idx, &worst) = per_column_sparsity
        .iter()
        .enumerate()
        .min_by(|a, b| {
            margin(interval, *a.1)
                .partial_cmp(&margin(interval, *b.1))
                .expect("finite")
        })
        .expect("at least one column");
    let mut report = BoundReport::new(
        "sparsity",
        interval,
        worst,
        BoundContext {
            lambda: spec.parameter(),
            p,
            r: per_column_sparsity.len(),
            kind: spec.tag().to_string(),
        },
    );
    report.satisfied = per_column_sparsity.iter().all(|&s| interval.contains(s));
    report.note = Some(format!("worst column {worst_idx}"));
    Ok(report)
}

/// Worst-margin deviation containment of fitted loadings. Soft
/// thresholding uses its per-vector interval; the other operators use the
/// closed-form interval.
pub fn deviation_bound_report(
    spec: Truncation,
    p: usize,
    deviations: &[f64],
    truncated_energy: &[f64],
    cardinalities: &[usize],
) -> Result<BoundReport> {
    let r = deviations.len();
    let intervals: Vec<Interval> = match spec {
        Truncation::Soft { lambda } => (0..r)
            .map(|i| soft_threshold_deviation_bounds(truncated_energy[i], lambda, cardinalities[i]))
            .collect(),
        _ => vec![operator_bounds(spec, p)?.deviation; r],
    };
    let worst_idx = (0..r)
        .min_by(|&a, &b| {
            margin(intervals[a], deviations[a])
                .partial_cmp(&margin(intervals[b], deviations[b]))
                .expect("finite")
        })
        .expect("at least one column");
    let mut report = BoundReport::new(
        "deviation",
        intervals[worst_idx],
        deviations[worst_idx],
        BoundContext {
            lambda: spec.parameter(),
            p,
            r,
            kind: spec.tag().to_string(),
        },
    );
    report.satisfied = (0..r).all(|i| intervals[i].contains(deviations[i]));
    report.note = Some(format!("worst column {worst_idx}"));
    Ok(report)
}

/// Worst-margin pairwise nonorthogonality of fitted loadings against the
/// conical bound from their deviation angles. Valid when the loadings were
/// truncated from an orthonormal basis.
pub fn nonortho_pairwise_report(x: &DMatrix<f64>, deviations_sin: &[f64]) -> Result<BoundReport> {
    let r = x.ncols();
    if r < 2 {
        return Err(Error::argument(
            "pairwise bound needs at least two loadings".to_string(),
        ));
    }
    let thetas: Vec<f64> = deviations_sin
        .iter()
        .map(|s| s.clamp(0.0, 1.0).asin())
        .collect();
    let (_, cos) = metrics::nonorthogonality(x)?;
    let mut worst = (0usize, 1usize);
    let mut worst_margin = f64::INFINITY;
    let mut all_ok = true;
    for i in 0..r {
        for j in (i + 1)..r {
            let bound = nonortho_bound(thetas[i], thetas[j]);
            let m = bound + BOUND_SLACK - cos[(i, j)];
            if m < worst_margin {
                worst_margin = m;
                worst = (i, j);
            }
            if cos[(i, j)] > bound + BOUND_SLACK {
                all_ok = false;
            }
        }
    }
    let bound = nonortho_bound(thetas[worst.0], thetas[worst.1]);
    let mut report = BoundReport::new(
        "nonortho_pairwise",
        Interval::new(0.0, bound),
        cos[worst],
        BoundContext {
            lambda: f64::NAN,
            p: x.nrows(),
            r,
            kind: "-".to_string(),
        },
    );
    report.satisfied = all_ok;
    report.note = Some(format!("worst pair ({}, {})", worst.0, worst.1));
    Ok(report)
}

/// Heuristic guidance line for by-energy fits: roughly `(1−λ)·EV(V)` is
/// retained when the basis stays near-orthogonal. Not a theorem; always
/// flagged vacuous.
pub fn by_energy_coarse_ev_report(
    share: f64,
    ev_v: f64,
    ev_x: f64,
    p: usize,
    r: usize,
) -> BoundReport {
    let mut report = BoundReport::new(
        "ev_en_approx",
        Interval::new((1.0 - share) * ev_v, f64::INFINITY),
        ev_x,
        BoundContext {
            lambda: share,
            p,
            r,
            kind: "en".to_string(),
        },
    );
    report.vacuous = true;
    report.note = Some("approximate guidance, not a theorem".to_string());
    report
}

fn margin(interval: Interval, value: f64) -> f64 {
    (interval.hi + BOUND_SLACK - value).min(value - interval.lo + BOUND_SLACK)
}

/// Outcome of a Monte-Carlo containment run.
#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub trials: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl ContainmentReport {
    pub fn all_contained(&self) -> bool {
        self.violations == 0
    }
}

fn random_unit_vector(p: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(p, |_, _| {
            let s: f64 = StandardNormal.sample(rng);
            s
        });
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Truncates `trials` random unit vectors and checks every guaranteed
/// sparsity/deviation interval, including the per-vector soft-thresholding
/// interval and the soft-above-hard deviation ordering.
pub fn verify_truncation_bounds(
    spec: Truncation,
    p: usize,
    trials: usize,
    seed: u64,
) -> Result<ContainmentReport> {
    spec.validate(p)?;
    let bounds = operator_bounds(spec, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut first_violation = None;
    let mut record = |ok: bool, msg: String| {
        if !ok {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(msg);
            }
        }
    };

    for t in 0..trials {
        let z = random_unit_vector(p, &mut rng);
        let result = truncate(&z, spec)?;
        let sparsity = if result.is_zero {
            1.0
        } else {
            metrics::sparsity(&result.vector)
        };
        record(
            bounds.sparsity.contains(sparsity),
            format!("trial {t}: sparsity {sparsity} outside {:?}", bounds.sparsity),
        );
        match spec {
            Truncation::Soft { lambda } => {
                let interval = soft_threshold_deviation_bounds(
                    result.truncated_energy,
                    lambda,
                    result.cardinality,
                );
                record(
                    interval.contains(result.deviation_sin),
                    format!(
                        "trial {t}: soft deviation {} outside {interval:?}",
                        result.deviation_sin
                    ),
                );
                // soft deviates at least as much as hard at equal lambda
                let hard = truncate(&z, Truncation::Hard { lambda })?;
                record(
                    result.deviation_sin >= hard.deviation_sin - BOUND_SLACK,
                    format!(
                        "trial {t}: soft deviation {} below hard {}",
                        result.deviation_sin, hard.deviation_sin
                    ),
                );
            }
            _ => {
                record(
                    bounds.deviation.contains(result.deviation_sin),
                    format!(
                        "trial {t}: deviation {} outside {:?}",
                        result.deviation_sin, bounds.deviation
                    ),
                );
            }
        }
    }
    Ok(ContainmentReport {
        trials,
        violations,
        first_violation,
    })
}

/// Checks the universal `d_min` bound on random loading matrices against a
/// seeded random dataset: half orthonormalized, half plain unit columns.
pub fn verify_ev_dmin_monte_carlo(
    p: usize,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<ContainmentReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = |rng: &mut ChaCha8Rng, n: usize, m: usize| {
        DMatrix::from_fn(n, m, |_, _| {
            let s: f64 = StandardNormal.sample(rng);
            s
        })
    };
    let data = gaussian(&mut rng, p + 5, p);
    let input = MatrixInput::data(data)?;
    let v = crate::linalg::pca_loadings(&input, r)?.loadings;

    let mut violations = 0usize;
    let mut first_violation = None;
    for t in 0..trials {
        let mut x = gaussian(&mut rng, p, r);
        if t % 2 == 0 {
            x = x.qr().q();
        } else {
            for j in 0..r {
                let norm = x.column(j).norm();
                x.column_mut(j).scale_mut(1.0 / norm);
            }
        }
        let report = ev_dmin_bound(&input, &x, &v)?;
        if !report.satisfied {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(format!(
                    "trial {t}: EV {} below bound {}",
                    report.empirical, report.theoretical.lo
                ));
            }
        }
    }
    Ok(ContainmentReport {
        trials,
        violations,
        first_violation,
    })
}
