//! Layered circuits of one- and two-site gates.
//!
//! JSON layout:
//! `{"depth": D, "layers": [[{"sites": [i, j], "unitary": [[re, im], …16]}, …], …]}`
//! with an optional `"n_qubits"`. Unitaries are row-major in the basis
//! `|x_i x_j⟩`, the first listed site being the more significant bit.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::random::haar_unitary;
use super::state::{DensityMatrix, QuantumState, StateVector};
use super::{kernel, C64};
use crate::error::{arg, Error, Result};
use crate::exec::Exec;
use crate::lattice::LatticeGeometry;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub sites: Vec<usize>,
    #[serde(with = "complex_list")]
    pub unitary: Vec<C64>,
}

impl Gate {
    pub fn new(sites: Vec<usize>, unitary: Vec<C64>) -> Result<Self> {
        let g = Self { sites, unitary };
        g.check_shape()?;
        g.check_unitary()?;
        Ok(g)
    }

    fn dim(&self) -> usize {
        1 << self.sites.len()
    }

    fn check_shape(&self) -> Result<()> {
        if !(1..=2).contains(&self.sites.len()) {
            return arg("gates act on one or two sites");
        }
        if self.sites.len() == 2 && self.sites[0] == self.sites[1] {
            return arg("two-site gate on a repeated site");
        }
        if self.unitary.len() != self.dim() * self.dim() {
            return arg(format!(
                "gate on {} sites needs {} entries, got {}",
                self.sites.len(),
                self.dim() * self.dim(),
                self.unitary.len()
            ));
        }
        Ok(())
    }

    fn matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim(), self.dim(), &self.unitary)
    }

    fn check_unitary(&self) -> Result<()> {
        let m = self.matrix();
        let residual = (m.adjoint() * &m - DMatrix::identity(self.dim(), self.dim())).camax();
        if residual > 1e-12 {
            return Err(Error::Validation(format!(
                "gate on sites {:?} is not unitary (residual {residual:.3e})",
                self.sites
            )));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        let m = self.matrix().adjoint();
        Self {
            sites: self.sites.clone(),
            unitary: m.transpose().as_slice().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CircuitFile {
    depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_qubits: Option<usize>,
    layers: Vec<Vec<Gate>>,
}

/// A sequence of layers, each a set of gates on disjoint sites.
#[derive(Debug, Clone, PartialEq)]
pub struct BrickworkCircuit {
    n_qubits: usize,
    layers: Vec<Vec<Gate>>,
}

impl BrickworkCircuit {
    pub fn new(n_qubits: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        for (t, layer) in layers.iter().enumerate() {
            let mut used = vec![false; n_qubits];
            for g in layer {
                g.check_shape()?;
                g.check_unitary()?;
                for &s in &g.sites {
                    if s >= n_qubits {
                        return arg(format!("gate site {s} out of range for {n_qubits} qubits"));
                    }
                    if used[s] {
                        return Err(Error::Validation(format!(
                            "layer {t}: gates overlap on site {s}"
                        )));
                    }
                    used[s] = true;
                }
            }
        }
        Ok(Self { n_qubits, layers })
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            layers: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    /// Checks that every two-site gate couples lattice neighbors.
    pub fn check_nearest_neighbor(&self, g: &LatticeGeometry) -> Result<()> {
        if g.total_sites() != self.n_qubits {
            return arg("circuit and lattice have different sizes");
        }
        for layer in &self.layers {
            for gate in layer {
                if let [a, b] = gate.sites[..] {
                    if g.distance(a, b)? != 1 {
                        return Err(Error::Validation(format!(
                            "gate on sites ({a}, {b}) is not nearest-neighbor"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Reversed layers of adjoint gates.
    pub fn inverse(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            layers: self
                .layers
                .iter()
                .rev()
                .map(|l| l.iter().map(Gate::adjoint).collect())
                .collect(),
        }
    }

    pub fn apply_to_statevector(&self, psi: &mut StateVector, exec: Exec) -> Result<()> {
        self.check_size(psi.n_qubits())?;
        for layer in &self.layers {
            for g in layer {
                kernel::apply_local(psi.amplitudes_mut(), self.n_qubits, &g.sites, &g.unitary, exec);
            }
        }
        Ok(())
    }

    pub fn apply_to_density(&self, rho: &mut DensityMatrix, exec: Exec) -> Result<()> {
        self.check_size(rho.n_qubits())?;
        for layer in &self.layers {
            for g in layer {
                kernel::conjugate_local(rho.matrix_mut(), self.n_qubits, &g.sites, &g.unitary, exec);
            }
        }
        Ok(())
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return arg(format!(
                "circuit on {} qubits applied to a {n}-qubit state",
                self.n_qubits
            ));
        }
        Ok(())
    }

    pub fn from_json(text: &str, n_qubits: Option<usize>) -> Result<Self> {
        let file: CircuitFile = serde_json::from_str(text)?;
        if file.depth != file.layers.len() {
            return arg(format!(
                "declared depth {} but {} layers present",
                file.depth,
                file.layers.len()
            ));
        }
        let max_site = file
            .layers
            .iter()
            .flatten()
            .flat_map(|g| g.sites.iter().copied())
            .max();
        let n = match (n_qubits, file.n_qubits) {
            (Some(a), Some(b)) if a != b => {
                return arg(format!("circuit declares {b} qubits but {a} were requested"))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => max_site.map_or(0, |m| m + 1),
        };
        Self::new(n, file.layers)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitFile {
            depth: self.depth(),
            n_qubits: Some(self.n_qubits),
            layers: self.layers.clone(),
        })
        .expect("circuit serialization cannot fail")
    }
}

/// Applies the circuit to a pure or mixed state.
pub fn apply_circuit(state: &QuantumState, circuit: &BrickworkCircuit) -> Result<QuantumState> {
    let exec = Exec::default();
    match state {
        QuantumState::Pure(psi) => {
            let mut out = psi.clone();
            circuit.apply_to_statevector(&mut out, exec)?;
            Ok(QuantumState::Pure(out))
        }
        QuantumState::Mixed(rho) => {
            let mut out = rho.clone();
            circuit.apply_to_density(&mut out, exec)?;
            Ok(QuantumState::Mixed(out))
        }
    }
}

/// Brickwork circuit of Haar-random two-site gates.
///
/// Layer `t` pairs neighbors along axis `(t / 2) mod d` starting at parity
/// `t mod 2`, so every layer spreads operators by at most one site.
pub fn random_brickwork<R: Rng + ?Sized>(
    geometry: &LatticeGeometry,
    depth: usize,
    rng: &mut R,
) -> BrickworkCircuit {
    let n = geometry.total_sites();
    let layers = (0..depth)
        .map(|t| {
            let axis = (t / 2) % geometry.dimension;
            geometry
                .brick_pairs(axis, t % 2)
                .into_iter()
                .map(|(a, b)| Gate {
                    sites: vec![a, b],
                    unitary: haar_unitary(4, rng).transpose().as_slice().to_vec(),
                })
                .collect()
        })
        .collect();
    BrickworkCircuit { n_qubits: n, layers }
}

pub(crate) mod complex_list {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|z| [z.re, z.im])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let raw: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}
