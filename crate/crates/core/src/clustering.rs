//! Checks of the clustering hypothesis: connected correlators beyond a range,
//! operator spreading of circuits, and the variance bound it implies.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::exec::{map_indices, Exec};
use crate::lattice::LatticeGeometry;
use crate::quantum::{reduced_density_matrix, BrickworkCircuit, Caps, Pauli, QuantumState, C64};
use crate::u1::{charge_distribution, clustering_variance_bound};

/// Default violation threshold.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Single-site charge density `q = (σ^z + 1)/2`.
pub fn charge_density() -> Matrix2<C64> {
    Matrix2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0))
}

pub fn pauli_matrix(p: Pauli) -> Matrix2<C64> {
    let m = p.matrix();
    Matrix2::new(m[0], m[1], m[2], m[3])
}

fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |r, c| a[(r >> 1, c >> 1)] * b[(r & 1, c & 1)])
}

fn spectral_norm(a: &Matrix2<C64>) -> f64 {
    let m = DMatrix::from_iterator(2, 2, a.iter().copied());
    m.singular_values().max()
}

/// `⟨O_i O_j⟩ − ⟨O_i⟩⟨O_j⟩` from the two-site reduced density matrix `ρ_ij`.
fn connected_from_rdm(rdm: &DMatrix<C64>, a: &Matrix2<C64>, b: &Matrix2<C64>) -> f64 {
    let id = Matrix2::identity();
    let tr = |m: DMatrix<C64>| (rdm * m).trace();
    (tr(kron2(a, b)) - tr(kron2(a, &id)) * tr(kron2(&id, b))).re
}

/// Connected correlator of single-site Hermitian operators on distinct sites.
pub fn connected_correlator(
    state: &QuantumState,
    i: usize,
    a: &Matrix2<C64>,
    j: usize,
    b: &Matrix2<C64>,
) -> Result<f64> {
    if i == j {
        return arg(format!("connected correlator needs distinct sites, got {i} twice"));
    }
    let rdm = reduced_density_matrix(state, &[i, j])?;
    let c = connected_from_rdm(&rdm, a, b);
    let cap = 2.0 * spectral_norm(a) * spectral_norm(b);
    if c.abs() > cap + 1e-9 {
        return Err(Error::InvalidState(format!(
            "connected correlator {c} exceeds 2‖O_i‖‖O_j‖ = {cap}"
        )));
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelation {
    pub i: usize,
    pub j: usize,
    pub distance: usize,
    /// `⟨q_i q_j⟩_c`.
    pub charge: f64,
    /// Largest `|⟨σ^a_i σ^b_j⟩_c|` over the nine Pauli pairs.
    pub max_pauli: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub range: usize,
    pub tolerance: f64,
    /// Largest connected correlator over pairs farther apart than `range`.
    pub max_violation: f64,
    /// Smallest range beyond which every correlator is within tolerance.
    pub effective_range: usize,
    pub pairs: Vec<PairCorrelation>,
}

impl ClusterReport {
    pub fn clusters(&self) -> bool {
        self.max_violation <= self.tolerance
    }

    /// Pair table for heatmaps.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,distance,charge_connected,max_pauli_connected\n");
        for p in &self.pairs {
            out.push_str(&format!(
                "{},{},{},{:.16e},{:.16e}\n",
                p.i, p.j, p.distance, p.charge, p.max_pauli
            ));
        }
        out
    }
}

pub fn verify_cluster_property(
    state: &QuantumState,
    range: usize,
    g: &LatticeGeometry,
    tol: f64,
) -> Result<ClusterReport> {
    verify_cluster_property_with(state, range, g, tol, Exec::default())
}

/// Scans every site pair over the full single-site Pauli basis.
pub fn verify_cluster_property_with(
    state: &QuantumState,
    range: usize,
    g: &LatticeGeometry,
    tol: f64,
    exec: Exec,
) -> Result<ClusterReport> {
    if !(tol > 0.0) {
        return arg(format!("tolerance must be positive, got {tol}"));
    }
    let n = state.n_qubits();
    if g.total_sites() != n {
        return arg(format!("lattice has {} sites, state has {n} qubits", g.total_sites()));
    }
    let index: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let paulis: Vec<Matrix2<C64>> = Pauli::NONTRIVIAL.iter().map(|&p| pauli_matrix(p)).collect();
    let q = charge_density();
    let pairs: Vec<Result<PairCorrelation>> = map_indices(exec, index.len(), |t| {
        let (i, j) = index[t];
        let rdm = reduced_density_matrix(state, &[i, j])?;
        let mut max_pauli: f64 = 0.0;
        for a in &paulis {
            for b in &paulis {
                max_pauli = max_pauli.max(connected_from_rdm(&rdm, a, b).abs());
            }
        }
        Ok(PairCorrelation {
            i,
            j,
            distance: g.distance(i, j)?,
            charge: connected_from_rdm(&rdm, &q, &q),
            max_pauli,
        })
    });
    let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
    let max_violation = pairs
        .iter()
        .filter(|p| p.distance > range)
        .map(|p| p.max_pauli)
        .fold(0.0, f64::max);
    let effective_range = pairs
        .iter()
        .filter(|p| p.max_pauli > tol)
        .map(|p| p.distance)
        .max()
        .unwrap_or(0);
    Ok(ClusterReport {
        range,
        tolerance: tol,
        max_violation,
        effective_range,
        pairs,
    })
}

/// Gates of `c` that can influence `U† P_site U`, walking backwards from the
/// last layer, and the sites they touch.
fn causal_cone(c: &BrickworkCircuit, site: usize) -> (Vec<(usize, usize)>, BTreeSet<usize>) {
    let mut support = BTreeSet::from([site]);
    let mut gates = Vec::new();
    for (t, layer) in c.layers().iter().enumerate().rev() {
        for (k, gate) in layer.iter().enumerate() {
            if gate.sites.iter().any(|s| support.contains(s)) {
                gates.push((t, k));
            }
        }
        for &(tt, k) in gates.iter().filter(|(tt, _)| *tt == t) {
            support.extend(c.layers()[tt][k].sites.iter().copied());
        }
    }
    (gates, support)
}

/// `max |[O, X_r]|` and `max |[O, Z_r]|` entrywise on a `k`-site register,
/// without forming the Paulis.
fn acts_on(o: &DMatrix<C64>, k: usize, r: usize, threshold: f64) -> bool {
    let mask = 1usize << (k - 1 - r);
    let dim = o.nrows();
    for c in 0..dim {
        for row in 0..dim {
            // [O, X]_{row,c} = O_{row,c^m} − O_{row^m,c}
            if (o[(row, c ^ mask)] - o[(row ^ mask, c)]).norm() > threshold {
                return true;
            }
            // [O, Z]_{row,c} = O_{row,c}(z_c − z_row), nonzero only across the mask
            if (row ^ c) & mask != 0 && 2.0 * o[(row, c)].norm() > threshold {
                return true;
            }
        }
    }
    false
}

/// Sites on which `U† P_site U` acts nontrivially, for each nontrivial Pauli `P`.
///
/// Gates outside the causal cone cancel exactly in `U† P U`, so the operator
/// is evolved densely on the cone only. A site is in the support when the
/// evolved operator fails to commute with `X` or `Z` there (threshold 1e-12).
pub fn heisenberg_support(c: &BrickworkCircuit, site: usize, caps: &Caps) -> Result<Vec<BTreeSet<usize>>> {
    let (gates, cone) = causal_cone(c, site);
    let local: Vec<usize> = cone.iter().copied().collect();
    let k = local.len();
    caps.check_density(k)?;
    let pos = |s: usize| local.iter().position(|&x| x == s).expect("site in cone");
    let embed = |at: usize, p: Pauli| -> DMatrix<C64> {
        let mut m = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for r in 0..k {
            let f = if r == at { p } else { Pauli::I };
            m = m.kronecker(&DMatrix::from_row_slice(2, 2, &f.matrix()));
        }
        m
    };
    let mut out = Vec::new();
    for p in Pauli::NONTRIVIAL {
        let mut o = embed(pos(site), p);
        // Layers were collected last-first, which is the order U† P U needs.
        for &(t, idx) in &gates {
            let gate = &c.layers()[t][idx];
            let sites: Vec<usize> = gate.sites.iter().map(|&s| pos(s)).collect();
            crate::quantum::kernel::conjugate_local(&mut o, k, &sites, &gate.adjoint().unitary, Exec::Sequential);
        }
        let support = (0..k)
            .filter(|&r| acts_on(&o, k, r, 1e-12))
            .map(|r| local[r])
            .collect();
        out.push(support);
    }
    Ok(out)
}

/// Largest lattice distance between a site and the support of its
/// Heisenberg-evolved Paulis.
pub fn operator_spreading_range(c: &BrickworkCircuit, g: &LatticeGeometry, caps: &Caps) -> Result<usize> {
    if g.total_sites() != c.n_qubits() {
        return arg("circuit and lattice have different sizes");
    }
    let mut lambda = 0;
    for j in 0..c.n_qubits() {
        for support in heisenberg_support(c, j, caps)? {
            for k in support {
                lambda = lambda.max(g.distance(j, k)?);
            }
        }
    }
    Ok(lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceCheck {
    pub variance: f64,
    /// `2 z_Λ N`.
    pub bound: f64,
    pub margin: f64,
    pub passed: bool,
}

/// `σ² ≤ 2 z_Λ N`.
pub fn variance_bound_check(state: &QuantumState, range: usize, g: &LatticeGeometry) -> Result<VarianceCheck> {
    if g.total_sites() != state.n_qubits() {
        return arg("lattice and state have different sizes");
    }
    let variance = charge_distribution(state).variance();
    let bound = clustering_variance_bound(g, range);
    Ok(VarianceCheck {
        variance,
        bound,
        margin: bound - variance,
        passed: variance <= bound + crate::u1::BOUND_SLACK,
    })
}
