//! Pauli-string observables, expectations and reduced density matrices.

use nalgebra::DMatrix;

use super::state::{site_mask, QuantumState};
use super::C64;
use crate::error::{arg, Result};
use crate::exec::{map_chunks, map_indices, Exec, REDUCE_CHUNK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NONTRIVIAL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> [C64; 4] {
        match self {
            Pauli::I => [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            Pauli::X => super::gates::pauli_x(),
            Pauli::Y => super::gates::pauli_y(),
            Pauli::Z => super::gates::pauli_z(),
        }
    }
}

/// Tensor product of single-site Paulis; unlisted sites carry the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PauliString {
    pub ops: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn single(site: usize, p: Pauli) -> Self {
        Self { ops: vec![(site, p)] }
    }

    pub fn pair(i: usize, a: Pauli, j: usize, b: Pauli) -> Self {
        Self {
            ops: vec![(i, a), (j, b)],
        }
    }

    /// `(x_mask, z_mask, number of Y factors)` with `P|i⟩ = i^{#Y} (-1)^{|i ∧ z|} |i ⊕ x⟩`.
    fn masks(&self, n_qubits: usize) -> Result<(usize, usize, u32)> {
        let (mut x, mut z, mut ny) = (0usize, 0usize, 0u32);
        for &(s, p) in &self.ops {
            if s >= n_qubits {
                return arg(format!("Pauli on site {s} out of range for {n_qubits} qubits"));
            }
            let m = site_mask(n_qubits, s);
            if (x | z) & m != 0 {
                return arg(format!("Pauli string repeats site {s}"));
            }
            match p {
                Pauli::I => {}
                Pauli::X => x |= m,
                Pauli::Z => z |= m,
                Pauli::Y => {
                    x |= m;
                    z |= m;
                    ny += 1;
                }
            }
        }
        Ok((x, z, ny))
    }
}

/// Weighted sum of Pauli strings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Observable {
    pub terms: Vec<(C64, PauliString)>,
}

impl Observable {
    pub fn term(coeff: f64, s: PauliString) -> Self {
        Self {
            terms: vec![(C64::new(coeff, 0.0), s)],
        }
    }

    pub fn pauli_z(site: usize) -> Self {
        Self::term(1.0, PauliString::single(site, Pauli::Z))
    }

    pub fn add(mut self, other: Observable) -> Self {
        self.terms.extend(other.terms);
        self
    }

    /// `Q = Σ_j (σ^z_j + 1)/2`.
    pub fn charge(n_qubits: usize) -> Self {
        let mut terms = vec![(C64::new(n_qubits as f64 / 2.0, 0.0), PauliString::default())];
        terms.extend((0..n_qubits).map(|j| (C64::new(0.5, 0.0), PauliString::single(j, Pauli::Z))));
        Self { terms }
    }

    /// `S^α = Σ_j σ^α_j / 2`.
    pub fn spin(n_qubits: usize, axis: Pauli) -> Self {
        Self {
            terms: (0..n_qubits)
                .map(|j| (C64::new(0.5, 0.0), PauliString::single(j, axis)))
                .collect(),
        }
    }

    /// `(S^α)^2 = N/4 + (1/2) Σ_{i<j} σ^α_i σ^α_j`.
    pub fn spin_squared_component(n_qubits: usize, axis: Pauli) -> Self {
        let mut terms = vec![(C64::new(n_qubits as f64 / 4.0, 0.0), PauliString::default())];
        for i in 0..n_qubits {
            for j in i + 1..n_qubits {
                terms.push((C64::new(0.5, 0.0), PauliString::pair(i, axis, j, axis)));
            }
        }
        Self { terms }
    }

    /// Casimir `S² = Σ_α (S^α)²`.
    pub fn casimir(n_qubits: usize) -> Self {
        Pauli::NONTRIVIAL
            .iter()
            .map(|&a| Self::spin_squared_component(n_qubits, a))
            .fold(Self::default(), Self::add)
    }
}

fn phase(i: usize, z: usize, ny: u32) -> C64 {
    let sign = if (i & z).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    let y = match ny % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    };
    y * sign
}

fn string_expectation(state: &QuantumState, s: &PauliString, exec: Exec) -> Result<C64> {
    let n = state.n_qubits();
    let (x, z, ny) = s.masks(n)?;
    let partials = match state {
        QuantumState::Pure(psi) => {
            let amps = psi.amplitudes();
            map_chunks(exec, amps, REDUCE_CHUNK, |c, chunk| {
                let off = c * REDUCE_CHUNK;
                chunk
                    .iter()
                    .enumerate()
                    .map(|(k, a)| {
                        let i = off + k;
                        amps[i ^ x].conj() * phase(i, z, ny) * a
                    })
                    .sum::<C64>()
            })
        }
        QuantumState::Mixed(rho) => {
            let m = rho.matrix();
            let dim = rho.dim();
            map_indices(exec, dim.div_ceil(REDUCE_CHUNK), |c| {
                (c * REDUCE_CHUNK..((c + 1) * REDUCE_CHUNK).min(dim))
                    .map(|i| phase(i, z, ny) * m[(i, i ^ x)])
                    .sum::<C64>()
            })
        }
    };
    Ok(partials.into_iter().sum())
}

/// `Tr[ρ O]`.
pub fn expectation(state: &QuantumState, observable: &Observable) -> Result<C64> {
    expectation_with(state, observable, Exec::default())
}

pub fn expectation_with(state: &QuantumState, observable: &Observable, exec: Exec) -> Result<C64> {
    let mut total = C64::new(0.0, 0.0);
    for (coeff, s) in &observable.terms {
        total += coeff * string_expectation(state, s, exec)?;
    }
    Ok(total)
}

/// Reduced density matrix on `sites` (first site is the most significant local bit).
pub fn reduced_density_matrix(state: &QuantumState, sites: &[usize]) -> Result<DMatrix<C64>> {
    let n = state.n_qubits();
    super::kernel::check_local(n, sites, 1 << (2 * sites.len()))?;
    let k = sites.len();
    let dl = 1usize << k;
    let masks: Vec<usize> = sites.iter().map(|&s| site_mask(n, s)).collect();
    let all: usize = masks.iter().sum();
    let offset = |t: usize| -> usize {
        (0..k)
            .filter(|&r| t >> (k - 1 - r) & 1 == 1)
            .map(|r| masks[r])
            .sum()
    };
    let offsets: Vec<usize> = (0..dl).map(offset).collect();
    let mut out = DMatrix::zeros(dl, dl);
    let dim = 1usize << n;
    for rest in (0..dim).filter(|r| r & all == 0) {
        for a in 0..dl {
            for b in 0..dl {
                let (i, j) = (rest | offsets[a], rest | offsets[b]);
                out[(a, b)] += match state {
                    QuantumState::Pure(psi) => psi.amplitudes()[i] * psi.amplitudes()[j].conj(),
                    QuantumState::Mixed(rho) => rho.matrix()[(i, j)],
                };
            }
        }
    }
    Ok(out)
}
