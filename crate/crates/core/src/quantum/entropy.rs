use nalgebra::DMatrix;

use super::state::DensityMatrix;
use super::C64;
use crate::error::{Error, Result};
use crate::exec::pairwise_sum;

/// Weights below this are dropped from entropy sums.
pub const PROB_FLOOR: f64 = 1e-14;

/// Eigenvalues in `[-EIGEN_FLOOR, 0)` are clamped to zero; anything more
/// negative marks a corrupted state.
pub const EIGEN_FLOOR: f64 = 1e-10;

pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

/// `-Σ p ln p` in nats, skipping weights below [`PROB_FLOOR`].
pub fn shannon(probs: &[f64]) -> f64 {
    let terms: Vec<f64> = probs
        .iter()
        .filter(|&&p| p > PROB_FLOOR)
        .map(|&p| -p * p.ln())
        .collect();
    pairwise_sum(&terms)
}

/// Entropy of a spectrum, applying the eigenvalue floor.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    if let Some(bad) = eigenvalues.iter().find(|&&l| l < -EIGEN_FLOOR) {
        return Err(Error::InvalidState(format!("eigenvalue {bad} below -{EIGEN_FLOOR}")));
    }
    let clamped: Vec<f64> = eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    Ok(shannon(&clamped))
}

/// `S_V(ρ) = -Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&hermitian_eigenvalues(rho.matrix()))
}
