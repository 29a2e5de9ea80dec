//! Built-in datasets and generators: the classical pitprops correlation
//! matrix, an analytic three-factor synthetic covariance with a known
//! sparse structure, artificial data matrices for covariance-only inputs,
//! and per-sample DC removal.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io::read_matrix;
use crate::linalg::{pca_loadings, MatrixInput};

const PITPROPS_CSV: &str = include_str!("../data/pitprops.csv");
const PITPROPS_SHA256: &str = "23306831b55c99d39f107426671a5c8b95c12350747e1b5b6cc27abac45dc2ef";

/// Variable names of the pitprops data, in matrix order.
pub const PITPROPS_VARIABLES: [&str; 13] = [
    "topdiam", "length", "moist", "testsg", "ovensg", "ringtop", "ringbut", "bowmax", "bowdist",
    "whorls", "clear", "knots", "diaknot",
];

/// Three-factor generative model behind the synthetic benchmark: two
/// independent Gaussian factors, a third factor mixing them, and ten
/// observed variables with unit noise.
///
/// Variables 1–4 observe the first factor, 5–8 the second, 9–10 the third.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticModel {
    pub var_h1: f64,
    pub var_h2: f64,
    /// Coefficients of the third factor on the first two.
    pub mix: (f64, f64),
    pub noise_var: f64,
}

impl Default for SyntheticModel {
    fn default() -> Self {
        SyntheticModel {
            var_h1: 290.0,
            var_h2: 300.0,
            mix: (-0.3, 0.925),
            noise_var: 1.0,
        }
    }
}

impl SyntheticModel {
    pub const NVARS: usize = 10;

    /// Factor index (0, 1 or 2) generating variable `i`.
    pub fn factor_of(i: usize) -> usize {
        match i {
            0..=3 => 0,
            4..=7 => 1,
            _ => 2,
        }
    }

    /// Covariance of the three hidden factors.
    fn factor_covariance(&self) -> [[f64; 3]; 3] {
        let (a, b) = self.mix;
        let var_h3 = a * a * self.var_h1 + b * b * self.var_h2 + self.noise_var;
        let c13 = a * self.var_h1;
        let c23 = b * self.var_h2;
        [
            [self.var_h1, 0.0, c13],
            [0.0, self.var_h2, c23],
            [c13, c23, var_h3],
        ]
    }

    /// Exact 10×10 covariance of the observed variables.
    pub fn covariance(&self) -> DMatrix<f64> {
        let fc = self.factor_covariance();
        DMatrix::from_fn(Self::NVARS, Self::NVARS, |i, j| {
            let c = fc[Self::factor_of(i)][Self::factor_of(j)];
            if i == j {
                c + self.noise_var
            } else {
                c
            }
        })
    }

    /// Draws `n` samples of the ten observed variables.
    pub fn samples(&self, n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
        let (a, b) = self.mix;
        let noise_sd = self.noise_var.sqrt();
        let mut out = DMatrix::zeros(n, Self::NVARS);
        for row in 0..n {
            let h1 = self.var_h1.sqrt() * normal();
            let h2 = self.var_h2.sqrt() * normal();
            let h3 = a * h1 + b * h2 + noise_sd * normal();
            let h = [h1, h2, h3];
            for col in 0..Self::NVARS {
                out[(row, col)] = h[Self::factor_of(col)] + noise_sd * normal();
            }
        }
        out
    }
}

/// Exact covariance of the default synthetic model.
pub fn synthetic_covariance() -> DMatrix<f64> {
    SyntheticModel::default().covariance()
}

/// Samples from the default synthetic model.
pub fn synthetic_samples(n: usize, seed: u64) -> DMatrix<f64> {
    SyntheticModel::default().samples(n, seed)
}

/// Builds a `p×p` data matrix `Ã = V Σ^{1/2} Vᵀ` from a covariance
/// `C = V Σ Vᵀ`, so that `ÃᵀÃ = C` and `Ã` shares the loadings of `C`.
/// This is how covariance-only benchmarks are fed to solvers that accept
/// data matrices.
pub fn artificial_data_from_covariance(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    artificial_data(c, 0.5)
}

/// Literal `Ã = V Σ^{-1/2} Vᵀ` variant, kept for auditing comparisons.
/// Note `ÃᵀÃ = V Σ^{-1} Vᵀ ≠ C`: the spectrum is inverted, so the leading
/// loadings of `Ã` are the trailing ones of `C`. Requires `C` nonsingular.
pub fn artificial_data_from_covariance_inverse(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    artificial_data(c, -0.5)
}

fn artificial_data(c: &DMatrix<f64>, power: f64) -> Result<DMatrix<f64>> {
    let input = MatrixInput::covariance(c.clone())?;
    let p = c.nrows();
    let basis = pca_loadings(&input, p)?;
    let mut scaled = DVector::zeros(p);
    for i in 0..p {
        let lambda = basis.values[i].max(0.0);
        if power < 0.0 && lambda <= 1e-12 {
            return Err(Error::degeneracy(format!(
                "inverse square root needs a nonsingular covariance, eigenvalue {i} = {:.3e}",
                basis.values[i]
            )));
        }
        scaled[i] = lambda.powf(power);
    }
    let tilde = &basis.loadings * DMatrix::from_diagonal(&scaled) * basis.loadings.transpose();
    // exact symmetry survives the round trip through the eigenbasis
    Ok((&tilde + tilde.transpose()) * 0.5)
}

/// Loads the embedded pitprops correlation matrix (13×13, unit diagonal),
/// verifying the file checksum.
pub fn load_pitprops() -> Result<DMatrix<f64>> {
    let digest = Sha256::digest(PITPROPS_CSV.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    if hex != PITPROPS_SHA256 {
        return Err(Error::DataIntegrity(format!(
            "pitprops data checksum mismatch: {hex}"
        )));
    }
    let m = read_matrix(PITPROPS_CSV.as_bytes())?;
    if m.nrows() != 13 || m.ncols() != 13 {
        return Err(Error::DataIntegrity(format!(
            "pitprops data has unexpected shape {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

/// Subtracts each row's mean from that row (per-sample DC removal, applied
/// before dataset-level centering for patch-like data).
pub fn remove_dc(rows: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if rows.is_empty() {
        return Err(Error::argument("cannot remove DC of an empty matrix".to_string()));
    }
    let p = rows.ncols() as f64;
    let mut out = rows.clone();
    for mut row in out.row_iter_mut() {
        let mean = row.sum() / p;
        row.add_scalar_mut(-mean);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::cpev;
    use approx::assert_relative_eq;

    #[test]
    fn synthetic_covariance_analytic_entries() {
        let c = synthetic_covariance();
        assert_relative_eq!(c[(0, 0)], 291.0);
        assert_relative_eq!(c[(0, 1)], 290.0);
        assert_relative_eq!(c[(4, 4)], 301.0);
        assert_relative_eq!(c[(0, 4)], 0.0);
        assert_relative_eq!(c[(0, 8)], -87.0);
        assert_relative_eq!(c[(4, 8)], 277.5);
        // both the factor noise and the observation noise contribute
        assert_relative_eq!(c[(8, 8)], 284.7875);
        assert_relative_eq!(c[(8, 9)], 283.7875);
        assert_relative_eq!(c, c.transpose());
    }

    #[test]
    fn synthetic_covariance_is_psd() {
        let c = synthetic_covariance();
        let eig = c.symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn monte_carlo_confirms_analytic_covariance() {
        let n = 1_000_000usize;
        let samples = synthetic_samples(n, 314159);
        let c_hat = samples.transpose() * &samples / n as f64;
        let c = synthetic_covariance();
        for i in 0..10 {
            for j in i..10 {
                let sd = ((c[(i, i)] * c[(j, j)] + c[(i, j)] * c[(i, j)]) / n as f64).sqrt();
                let diff = (c_hat[(i, j)] - c[(i, j)]).abs();
                assert!(
                    diff <= 3.0 * sd,
                    "entry ({i},{j}): |{} - {}| > 3σ = {}",
                    c_hat[(i, j)],
                    c[(i, j)],
                    3.0 * sd
                );
            }
        }
    }

    #[test]
    fn sample_covariance_converges_in_frobenius_norm() {
        let n = 100_000usize;
        let samples = synthetic_samples(n, 2718);
        let c_hat = samples.transpose() * &samples / n as f64;
        let c = synthetic_covariance();
        let rel = (&c_hat - &c).norm() / c.norm();
        assert!(rel < 0.05, "relative error {rel}");
    }

    #[test]
    fn artificial_data_identity_and_diagonal() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert_relative_eq!(
            artificial_data_from_covariance(&id).unwrap(),
            id,
            epsilon = 1e-12
        );
        let c = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0]));
        let a = artificial_data_from_covariance(&c).unwrap();
        assert_relative_eq!(
            a,
            DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0])),
            epsilon = 1e-12
        );
    }

    #[test]
    fn artificial_data_reproduces_pitprops_gram() {
        let c = load_pitprops().unwrap();
        let a = artificial_data_from_covariance(&c).unwrap();
        let gram = a.transpose() * &a;
        let rel = (&gram - &c).norm() / c.norm();
        assert!(rel < 1e-8, "relative reconstruction error {rel}");
    }

    #[test]
    fn artificial_data_preserves_loadings() {
        let c = synthetic_covariance();
        let from_cov =
            pca_loadings(&MatrixInput::covariance(c.clone()).unwrap(), 3).unwrap();
        let a = artificial_data_from_covariance(&c).unwrap();
        let from_data = pca_loadings(&MatrixInput::data(a).unwrap(), 3).unwrap();
        for j in 0..3 {
            let dot = from_cov
                .loadings
                .column(j)
                .dot(&from_data.loadings.column(j));
            assert!((dot.abs() - 1.0).abs() < 1e-8, "column {j}: |dot| = {}", dot.abs());
        }
    }

    #[test]
    fn inverse_variant_inverts_the_spectrum() {
        let c = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0]));
        let a = artificial_data_from_covariance_inverse(&c).unwrap();
        assert_relative_eq!(
            a,
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 1.0])),
            epsilon = 1e-12
        );
        let singular = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.0]));
        assert!(artificial_data_from_covariance_inverse(&singular).is_err());
    }

    #[test]
    fn pitprops_shape_symmetry_and_diagonal() {
        let c = load_pitprops().unwrap();
        assert_eq!((c.nrows(), c.ncols()), (13, 13));
        assert_eq!(c, c.transpose());
        for i in 0..13 {
            assert_eq!(c[(i, i)], 1.0);
        }
    }

    #[test]
    fn pitprops_rank6_pca_variance_fraction() {
        let c = load_pitprops().unwrap();
        let input = MatrixInput::covariance(c).unwrap();
        let basis = pca_loadings(&input, 6).unwrap();
        let value = cpev(&input, &basis.loadings).unwrap();
        assert!(
            (value - 0.8700).abs() <= 0.002,
            "rank-6 CPEV = {value}"
        );
    }

    #[test]
    fn remove_dc_hand_cases() {
        let constant = DMatrix::from_row_slice(1, 3, &[5.0, 5.0, 5.0]);
        assert_relative_eq!(remove_dc(&constant).unwrap().amax(), 0.0);

        let row = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 3.0]);
        let out = remove_dc(&row).unwrap();
        assert_relative_eq!(out[(0, 0)], -1.0);
        assert_relative_eq!(out[(0, 1)], 0.0);
        assert_relative_eq!(out[(0, 2)], 1.0);

        let centered = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -2.0, 2.0]);
        assert_relative_eq!(remove_dc(&centered).unwrap(), centered);
    }
}
