//! Truncation operators applied column-wise by the solvers: hard and soft
//! thresholding, truncation to a fixed number of zeros, and truncation by
//! energy share. Each operator zeroes entries of a unit vector and
//! renormalizes, reporting the removed energy and the deviation angle from
//! the input.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Tolerance on the unit-norm precondition of the truncation operators.
pub const UNIT_TOL: f64 = 1e-8;

/// Selection rule plus its parameter.
///
/// * `Hard { lambda }` zeroes entries with `|z_i| <= lambda` (inclusive),
///   `0 <= lambda < 1`.
/// * `Soft { lambda }` shrinks every entry toward zero by `lambda`,
///   `0 <= lambda < 1`.
/// * `BySparsity { zeros }` zeroes exactly `zeros` smallest-magnitude
///   entries, `0 <= zeros <= p-1`.
/// * `ByEnergy { share }` zeroes smallest-magnitude entries while their
///   cumulative squared mass stays within `share`, `0 <= share < 1`.
///
/// Magnitude ties are broken by zeroing the lower index first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    Hard { lambda: f64 },
    Soft { lambda: f64 },
    BySparsity { zeros: usize },
    ByEnergy { share: f64 },
}

impl Truncation {
    /// Checks the parameter against its domain for vectors of length `p`.
    pub fn validate(&self, p: usize) -> Result<()> {
        match *self {
            Truncation::Hard { lambda } | Truncation::Soft { lambda } => {
                if !(0.0..1.0).contains(&lambda) {
                    return Err(Error::argument(format!(
                        "threshold lambda must satisfy 0 <= lambda < 1, got {lambda}"
                    )));
                }
            }
            Truncation::BySparsity { zeros } => {
                if p == 0 || zeros > p - 1 {
                    return Err(Error::argument(format!(
                        "zero count must satisfy 0 <= zeros <= p-1 = {}, got {zeros}",
                        p.saturating_sub(1)
                    )));
                }
            }
            Truncation::ByEnergy { share } => {
                if !(0.0..1.0).contains(&share) {
                    return Err(Error::argument(format!(
                        "energy share must satisfy 0 <= share < 1, got {share}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Short lowercase tag used in reports: `l0`, `l1`, `sp`, `en`.
    pub fn tag(&self) -> &'static str {
        match self {
            Truncation::Hard { .. } => "l0",
            Truncation::Soft { .. } => "l1",
            Truncation::BySparsity { .. } => "sp",
            Truncation::ByEnergy { .. } => "en",
        }
    }

    /// Numeric parameter value as stored.
    pub fn parameter(&self) -> f64 {
        match *self {
            Truncation::Hard { lambda } | Truncation::Soft { lambda } => lambda,
            Truncation::BySparsity { zeros } => zeros as f64,
            Truncation::ByEnergy { share } => share,
        }
    }

    /// Whether the operator commutes with positive rescaling of its input.
    pub fn is_scale_free(&self) -> bool {
        matches!(
            self,
            Truncation::BySparsity { .. } | Truncation::ByEnergy { .. }
        )
    }
}

/// Outcome of truncating one vector.
///
/// `vector` has unit norm unless `is_zero` is set (then it is all zeros and
/// the deviation angle is π/2 by convention). `truncated_energy` is the
/// squared norm of the removed part of the input, `cardinality` the number
/// of surviving entries, `deviation_sin` the sine of the angle between the
/// result and the input.
#[derive(Debug, Clone)]
pub struct TruncationResult {
    pub vector: DVector<f64>,
    pub is_zero: bool,
    pub truncated_energy: f64,
    pub cardinality: usize,
    pub deviation_sin: f64,
}

/// Applies the bare selection/shrinkage rule with no unit-norm
/// precondition and no renormalization.
///
/// For `Hard`/`Soft` the threshold is interpreted on the scale of `z`
/// as given, which is what raw-threshold power iterations need.
pub fn apply_raw(spec: Truncation, z: &DVector<f64>) -> DVector<f64> {
    match spec {
        Truncation::Hard { lambda } => z.map(|v| if v.abs() <= lambda { 0.0 } else { v }),
        Truncation::Soft { lambda } => z.map(|v| {
            let shrunk = v.abs() - lambda;
            if shrunk > 0.0 {
                v.signum() * shrunk
            } else {
                0.0
            }
        }),
        Truncation::BySparsity { zeros } => {
            let mut out = z.clone();
            for &i in ascending_by_magnitude(z).iter().take(zeros) {
                out[i] = 0.0;
            }
            out
        }
        Truncation::ByEnergy { share } => {
            let norm_sq: f64 = z.iter().map(|v| v * v).sum();
            let mut out = z.clone();
            if norm_sq == 0.0 {
                return out;
            }
            let mut removed = 0.0;
            for &i in &ascending_by_magnitude(z) {
                removed += z[i] * z[i];
                if removed / norm_sq > share {
                    break;
                }
                out[i] = 0.0;
            }
            out
        }
    }
}

/// Entry indices sorted by ascending magnitude, lower index first on ties.
fn ascending_by_magnitude(z: &DVector<f64>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..z.len()).collect();
    idx.sort_by(|&a, &b| {
        z[a].abs()
            .partial_cmp(&z[b].abs())
            .expect("finite entries")
            .then(a.cmp(&b))
    });
    idx
}

fn check_unit(z: &DVector<f64>) -> Result<()> {
    if z.is_empty() {
        return Err(Error::argument("cannot truncate an empty vector"));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("vector contains non-finite entries"));
    }
    let norm = z.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::argument(format!(
            "truncation expects a unit vector, got norm {norm}"
        )));
    }
    Ok(())
}

/// Packages `kept` (a selection/shrinkage of the unit vector `z`) into a
/// result measured against `z`: removed energy, surviving cardinality,
/// deviation angle, and the normalized vector.
pub(crate) fn package(z: &DVector<f64>, kept: DVector<f64>) -> TruncationResult {
    let truncated_energy: f64 = z
        .iter()
        .zip(kept.iter())
        .filter(|(_, k)| **k == 0.0)
        .map(|(v, _)| v * v)
        .sum();
    let cardinality = kept.iter().filter(|v| **v != 0.0).count();
    let norm = kept.norm();
    if cardinality == 0 || norm == 0.0 {
        return TruncationResult {
            vector: DVector::zeros(z.len()),
            is_zero: true,
            truncated_energy: truncated_energy.min(1.0),
            cardinality: 0,
            deviation_sin: 1.0,
        };
    }
    let vector = kept / norm;
    // cos θ = x·z with both unit vectors; surviving signs are preserved, so
    // the dot product is nonnegative.
    let cos = vector.dot(z).clamp(0.0, 1.0);
    let deviation_sin = (1.0 - cos * cos).max(0.0).sqrt();
    TruncationResult {
        vector,
        is_zero: false,
        truncated_energy: truncated_energy.min(1.0),
        cardinality,
        deviation_sin,
    }
}

/// Truncates a unit vector with any operator and renormalizes.
///
/// Annihilating every entry is not an error: the result comes back with
/// `is_zero` set and callers decide how to recover.
pub fn truncate(z: &DVector<f64>, spec: Truncation) -> Result<TruncationResult> {
    check_unit(z)?;
    spec.validate(z.len())?;
    let kept = apply_raw(spec, z);
    let mut result = package(z, kept);
    // Untruncated survivors keep their values, so the removed energy gives
    // the deviation directly; prefer the exact identity where it applies.
    if !matches!(spec, Truncation::Soft { .. }) && !result.is_zero {
        result.deviation_sin = result.truncated_energy.sqrt().min(1.0);
    }
    Ok(result)
}

/// Soft thresholding: shrink by `lambda`, then renormalize.
pub fn soft_threshold(z: &DVector<f64>, lambda: f64) -> Result<TruncationResult> {
    truncate(z, Truncation::Soft { lambda })
}

/// Hard thresholding: zero entries with `|z_i| <= lambda`, then renormalize.
pub fn hard_threshold(z: &DVector<f64>, lambda: f64) -> Result<TruncationResult> {
    truncate(z, Truncation::Hard { lambda })
}

/// Zeroes exactly `zeros` smallest-magnitude entries, then renormalizes.
pub fn truncate_by_sparsity(z: &DVector<f64>, zeros: usize) -> Result<TruncationResult> {
    truncate(z, Truncation::BySparsity { zeros })
}

/// Zeroes smallest-magnitude entries while their cumulative squared mass
/// stays within `share`, then renormalizes.
pub fn truncate_by_energy(z: &DVector<f64>, share: f64) -> Result<TruncationResult> {
    truncate(z, Truncation::ByEnergy { share })
}
