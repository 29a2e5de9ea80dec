//! Shared dataset generators for the integration suites.
#![allow(dead_code)] // each test target uses its own subset

use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian_matrix(n: usize, p: usize, rng: &mut StdRng) -> DMatrix<f64> {
    DMatrix::from_fn(n, p, |_, _| {
        let s: f64 = StandardNormal.sample(rng);
        s
    })
}

pub fn seeded_gaussian(n: usize, p: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    gaussian_matrix(n, p, &mut rng)
}

/// Random `n×p` data with singular values `rate^1, rate^2, …` and random
/// orthogonal factors.
pub fn decaying_spectrum_data(n: usize, p: usize, rate: f64, seed: u64) -> DMatrix<f64> {
    assert!(n >= p);
    let mut rng = StdRng::seed_from_u64(seed);
    let u = gaussian_matrix(n, p, &mut rng).qr().q();
    let v = gaussian_matrix(p, p, &mut rng).qr().q();
    let sigma = DVector::from_fn(p, |i, _| rate.powi(i as i32 + 1));
    u * DMatrix::from_diagonal(&sigma) * v.transpose()
}

/// Random symmetric positive semidefinite `p×p` matrix.
pub fn random_covariance(p: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = gaussian_matrix(p + 3, p, &mut rng);
    let gram = g.transpose() * &g;
    (&gram + gram.transpose()) * 0.5
}

pub fn random_unit_vector(p: usize, rng: &mut StdRng) -> DVector<f64> {
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
