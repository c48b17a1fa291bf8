use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use super::{kernel, C64};
use crate::error::{arg, Error, Result};
use crate::exec::Exec;

/// Size limits for exact simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub statevector: usize,
    pub density: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            statevector: 24,
            density: 12,
        }
    }
}

impl Caps {
    pub const ENV_VAR: &'static str = "ASYMLAB_MAX_QUBITS";

    /// Default caps, with `ASYMLAB_MAX_QUBITS` overriding both limits when set.
    pub fn from_env() -> Self {
        match std::env::var(Self::ENV_VAR).ok().and_then(|v| v.trim().parse().ok()) {
            Some(n) => Self {
                statevector: n,
                density: n,
            },
            None => Self::default(),
        }
    }

    pub fn check_statevector(&self, n: usize) -> Result<()> {
        if n > self.statevector {
            return Err(Error::Resource {
                what: "statevector",
                requested: n,
                cap: self.statevector,
            });
        }
        Ok(())
    }

    pub fn check_density(&self, n: usize) -> Result<()> {
        if n > self.density {
            return Err(Error::Resource {
                what: "density matrix",
                requested: n,
                cap: self.density,
            });
        }
        Ok(())
    }
}

/// Bit of the computational-basis index that stores site `site`.
///
/// Site 0 is the most significant bit, so `|b_0 b_1 … b_{N-1}⟩` reads as the
/// binary expansion of the index.
#[inline]
pub fn site_mask(n_qubits: usize, site: usize) -> usize {
    1 << (n_qubits - 1 - site)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != 1usize << n_qubits {
            return arg(format!(
                "expected {} amplitudes for {n_qubits} qubits, got {}",
                1usize << n_qubits,
                amplitudes.len()
            ));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("squared norm is {norm}, not 1")));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(n_qubits, amplitudes)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// `|0⟩^{⊗N}`.
    pub fn zeros(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Tensor product of single-qubit pure states in site order.
    pub fn product(locals: &[[C64; 2]]) -> Result<Self> {
        let n = locals.len();
        let mut amplitudes = vec![C64::new(1.0, 0.0)];
        for (j, l) in locals.iter().enumerate() {
            let norm = l[0].norm_sqr() + l[1].norm_sqr();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidState(format!(
                    "local state on site {j} has squared norm {norm}"
                )));
            }
            amplitudes = amplitudes
                .iter()
                .flat_map(|&a| [a * l[0], a * l[1]])
                .collect();
        }
        Ok(Self {
            n_qubits: n,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies the same single-qubit unitary to every site.
    pub fn apply_global(&mut self, u: &Matrix2<C64>, exec: Exec) {
        let op = [u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]];
        for site in 0..self.n_qubits {
            kernel::apply_local(&mut self.amplitudes, self.n_qubits, &[site], &op, exec);
        }
    }

    /// Applies a `2^k × 2^k` row-major operator on `sites`.
    pub fn apply_local(&mut self, sites: &[usize], op: &[C64], exec: Exec) -> Result<()> {
        kernel::check_local(self.n_qubits, sites, op.len())?;
        kernel::apply_local(&mut self.amplitudes, self.n_qubits, sites, op, exec);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps `matrix`, checking hermiticity, trace and positivity at 1e-10.
    pub fn new(n_qubits: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let dm = Self::from_matrix_unchecked(n_qubits, matrix)?;
        dm.validate()?;
        Ok(dm)
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return arg(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        Ok(Self { n_qubits, matrix })
    }

    pub fn validate(&self) -> Result<()> {
        let herm = (&self.matrix - self.matrix.adjoint()).camax();
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace is {tr}, not 1")));
        }
        let min = super::entropy::hermitian_eigenvalues(&self.matrix)
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Self {
            n_qubits: psi.n_qubits(),
            matrix: &v * v.adjoint(),
        }
    }

    /// Tensor product of single-qubit density matrices in site order.
    pub fn product(locals: &[Matrix2<C64>]) -> Result<Self> {
        let mut m = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for l in locals {
            let l = DMatrix::from_fn(2, 2, |r, c| l[(r, c)]);
            m = m.kronecker(&l);
        }
        Self::new(locals.len(), m)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            n_qubits,
            matrix: DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    /// Convex combination `Σ w_k ρ_k`.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return arg("empty mixture");
        };
        let dim = first.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (w, p) in parts {
            if p.n_qubits != first.n_qubits {
                return arg("mixture of states with different qubit counts");
            }
            m += &p.matrix * C64::new(*w, 0.0);
        }
        Self::new(first.n_qubits, m)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn apply_global(&mut self, u: &Matrix2<C64>, exec: Exec) {
        let op = [u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]];
        for site in 0..self.n_qubits {
            kernel::conjugate_local(&mut self.matrix, self.n_qubits, &[site], &op, exec);
        }
    }
}

/// A pure or mixed state.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn n_qubits(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.n_qubits(),
            QuantumState::Mixed(d) => d.n_qubits(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(s) => DensityMatrix::from_pure(s),
            QuantumState::Mixed(d) => d.clone(),
        }
    }

    pub fn apply_global(&mut self, u: &Matrix2<C64>, exec: Exec) {
        match self {
            QuantumState::Pure(s) => s.apply_global(u, exec),
            QuantumState::Mixed(d) => d.apply_global(u, exec),
        }
    }
}

impl From<StateVector> for QuantumState {
    fn from(s: StateVector) -> Self {
        QuantumState::Pure(s)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(d: DensityMatrix) -> Self {
        QuantumState::Mixed(d)
    }
}

/// A single-site input to [`product_state`].
#[derive(Debug, Clone, PartialEq)]
pub enum LocalState {
    Pure([C64; 2]),
    Mixed(Matrix2<C64>),
}

impl LocalState {
    /// `√x |0⟩ + √(1-x) |1⟩`.
    pub fn bernoulli(x: f64) -> Self {
        LocalState::Pure([C64::new(x.sqrt(), 0.0), C64::new((1.0 - x).sqrt(), 0.0)])
    }

    pub fn zero() -> Self {
        Self::bernoulli(1.0)
    }

    pub fn plus() -> Self {
        Self::bernoulli(0.5)
    }

    fn to_matrix(&self) -> Matrix2<C64> {
        match self {
            LocalState::Pure(v) => Matrix2::new(
                v[0] * v[0].conj(),
                v[0] * v[1].conj(),
                v[1] * v[0].conj(),
                v[1] * v[1].conj(),
            ),
            LocalState::Mixed(m) => *m,
        }
    }
}

/// Tensor product of local states; pure iff every local state is pure.
pub fn product_state(locals: &[LocalState]) -> Result<QuantumState> {
    let pure: Option<Vec<[C64; 2]>> = locals
        .iter()
        .map(|l| match l {
            LocalState::Pure(v) => Some(*v),
            LocalState::Mixed(_) => None,
        })
        .collect();
    match pure {
        Some(v) => Ok(QuantumState::Pure(StateVector::product(&v)?)),
        None => {
            let ms: Vec<_> = locals.iter().map(LocalState::to_matrix).collect();
            Ok(QuantumState::Mixed(DensityMatrix::product(&ms)?))
        }
    }
}
