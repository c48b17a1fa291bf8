//! Seeded random states and unitaries.
//!
//! All generators take an explicit RNG; [`random_state`] fixes ChaCha8 so a
//! seed means the same state on every platform.

use nalgebra::{DMatrix, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::state::{Caps, DensityMatrix, StateVector};
use super::C64;
use crate::error::Result;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_statevector<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> StateVector {
    let amps = (0..1usize << n_qubits).map(|_| gaussian(rng)).collect();
    StateVector::normalized(n_qubits, amps).expect("gaussian vector is nonzero")
}

/// Haar-random pure state from `seed`.
pub fn random_state(n_qubits: usize, seed: u64, caps: &Caps) -> Result<StateVector> {
    caps.check_statevector(n_qubits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_statevector(n_qubits, &mut rng))
}

/// Haar unitary via QR of a complex Ginibre matrix with the phases of `R`'s
/// diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn haar_qubit_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    let u = haar_unitary(2, rng);
    Matrix2::new(u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)])
}

/// Random single-qubit pure state.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let a = gaussian(rng);
    let b = gaussian(rng);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / n, b / n]
}

/// `G G† / Tr` for a `2^N × rank` Ginibre matrix `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(n_qubits: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let g = DMatrix::from_fn(dim, rank.max(1), |_, _| gaussian(rng));
    let mut m = &g * g.adjoint();
    let tr = m.trace();
    m /= tr;
    // Restore exact hermiticity lost to rounding.
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::from_matrix_unchecked(n_qubits, m).expect("dimension matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::observable::{expectation, Observable};

    #[test]
    fn seeded_state_is_reproducible() {
        let caps = Caps::default();
        let a = random_state(1, 7, &caps).unwrap();
        let b = random_state(1, 7, &caps).unwrap();
        assert_eq!(a, b);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        assert_ne!(a, random_state(1, 8, &caps).unwrap());
        let c = random_state(3, 123, &caps).unwrap();
        assert!((c.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(random_state(30, 0, &caps).is_err());
    }

    #[test]
    fn haar_ensemble_has_zero_mean_magnetization() {
        let caps = Caps::default();
        let samples = 1000;
        let sz = Observable::pauli_z(0);
        let values: Vec<f64> = (0..samples)
            .map(|seed| expectation(&random_state(2, seed, &caps).unwrap().into(), &sz).unwrap().re)
            .collect();
        let mean = values.iter().sum::<f64>() / samples as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
        let stderr = (var / samples as f64).sqrt();
        assert!(mean.abs() < 5.0 * stderr, "mean {mean}, stderr {stderr}");
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 4, 8] {
            let u = haar_unitary(dim, &mut rng);
            let r = (u.adjoint() * &u - DMatrix::identity(dim, dim)).camax();
            assert!(r < 1e-13);
        }
    }

    #[test]
    fn random_density_matrix_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density_matrix(3, 4, &mut rng);
        rho.validate().unwrap();
    }
}
