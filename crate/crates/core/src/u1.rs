//! U(1) charge sectors, twirling, asymmetry and the abelian entropy bounds.
//!
//! The charge is `Q = Σ_j (σ^z_j + 1)/2` with `σ^z|0⟩ = +|0⟩`, so a basis
//! state carries charge equal to its number of zeros. Relabeling `q → N − q`
//! (counting ones instead) leaves every entropy in this module unchanged.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::exec::{map_chunks, Exec, REDUCE_CHUNK};
use crate::lattice::LatticeGeometry;
use crate::quantum::entropy::{hermitian_eigenvalues, shannon, spectrum_entropy};
use crate::quantum::{von_neumann_entropy, Caps, DensityMatrix, QuantumState, C64};

/// Slack used when judging every inequality in a report.
pub const BOUND_SLACK: f64 = 1e-9;

/// Probability distribution over charges `0..=N` with cached moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeDistribution {
    probs: Vec<f64>,
    mean: f64,
    variance: f64,
}

impl ChargeDistribution {
    /// Clamps entries in `[-1e-12, 0)` to zero and requires unit total within 1e-10.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return arg("empty charge distribution");
        }
        for p in probs.iter_mut() {
            if *p < -1e-12 || !p.is_finite() {
                return Err(Error::InvalidState(format!("invalid probability {p}")));
            }
            *p = p.max(0.0);
        }
        let total = crate::exec::pairwise_sum(&probs);
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(Self::with_moments(probs))
    }

    fn with_moments(probs: Vec<f64>) -> Self {
        let weighted: Vec<f64> = probs.iter().enumerate().map(|(q, p)| q as f64 * p).collect();
        let mean = crate::exec::pairwise_sum(&weighted);
        let centered: Vec<f64> = probs
            .iter()
            .enumerate()
            .map(|(q, p)| p * (q as f64 - mean).powi(2))
            .collect();
        let variance = crate::exec::pairwise_sum(&centered);
        Self {
            probs,
            mean,
            variance,
        }
    }

    /// Flat distribution over `N + 1` charges, the maximum of `H`.
    pub fn flat(n_qubits: usize) -> Self {
        Self::with_moments(vec![1.0 / (n_qubits + 1) as f64; n_qubits + 1])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest charge `N`.
    pub fn max_charge(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }
}

/// Charge of basis state `index` on `n_qubits` sites.
#[inline]
pub fn basis_charge(n_qubits: usize, index: usize) -> usize {
    n_qubits - index.count_ones() as usize
}

pub fn charge_distribution(state: &QuantumState) -> ChargeDistribution {
    charge_distribution_with(state, Exec::default())
}

/// `p_q = Tr[ρ P_q]`, accumulated per fixed-size chunk and combined in chunk
/// order so both execution modes give identical bits.
pub fn charge_distribution_with(state: &QuantumState, exec: Exec) -> ChargeDistribution {
    let n = state.n_qubits();
    let weights: Vec<f64> = match state {
        QuantumState::Pure(psi) => psi.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
        QuantumState::Mixed(rho) => rho.matrix().diagonal().iter().map(|z| z.re).collect(),
    };
    let partials = map_chunks(exec, &weights, REDUCE_CHUNK, |c, chunk| {
        let mut acc = vec![0.0; n + 1];
        for (k, w) in chunk.iter().enumerate() {
            acc[basis_charge(n, c * REDUCE_CHUNK + k)] += w;
        }
        acc
    });
    let mut probs = vec![0.0; n + 1];
    for part in partials {
        for (p, x) in probs.iter_mut().zip(part) {
            *p += x;
        }
    }
    ChargeDistribution::with_moments(probs.into_iter().map(|p| p.max(0.0)).collect())
}

/// `H({p_q})` in nats.
pub fn shannon_entropy(d: &ChargeDistribution) -> f64 {
    shannon(d.probs())
}

/// `𝒢[ρ] = Σ_q P_q ρ P_q`: drops every coherence between charge sectors.
pub fn u1_twirl(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.n_qubits();
    let m = rho.matrix();
    let out = DMatrix::from_fn(rho.dim(), rho.dim(), |i, j| {
        if basis_charge(n, i) == basis_charge(n, j) {
            m[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DensityMatrix::from_matrix_unchecked(n, out).expect("same dimension")
}

/// Largest inter-sector coherence `|ρ_ij|`; zero iff `ρ` is U(1) symmetric.
pub fn u1_asymmetric_residual(rho: &DensityMatrix) -> f64 {
    let n = rho.n_qubits();
    let m = rho.matrix();
    let mut worst: f64 = 0.0;
    for j in 0..rho.dim() {
        for i in 0..rho.dim() {
            if basis_charge(n, i) != basis_charge(n, j) {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// `S_V(𝒢[ρ])` from the eigenvalues of each charge block.
fn twirled_entropy(rho: &DensityMatrix) -> Result<f64> {
    let n = rho.n_qubits();
    let m = rho.matrix();
    let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for i in 0..rho.dim() {
        sectors[basis_charge(n, i)].push(i);
    }
    let mut spectrum = Vec::with_capacity(rho.dim());
    for idx in sectors.iter().filter(|s| !s.is_empty()) {
        let block = DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])]);
        spectrum.extend(hermitian_eigenvalues(&block));
    }
    spectrum_entropy(&spectrum)
}

/// Every bound accompanying an asymmetry value; absent entries do not apply.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// `ln(N + 1)` (U(1)).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_n_plus_1: Option<f64>,
    /// `½ ln[2πe(σ² + 1/12)]`, bounding the Shannon entropy (U(1)).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub massey: Option<f64>,
    /// `½ ln[2πe(2 z_Λ N + 1/12)]` (U(1), when a clustering range is given).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clustering: Option<f64>,
    /// `Σ_s p_s ln(2s+1) − Σ_{s,m} p_{s,m} ln p_{s,m}` (SU(2)).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub su2_shannon: Option<f64>,
    /// `ln Σ_s (2s+1) min(n_s, 2s+1)` (SU(2)).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    U1,
    Su2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    pub group: Group,
    pub n_qubits: usize,
    /// `ΔS` in nats.
    pub delta_s: f64,
    /// Shannon entropy of the charge distribution (U(1)) or of `p_{s,m}` (SU(2)).
    pub shannon: f64,
    pub variance: f64,
    pub bounds: Bounds,
    /// Bound minus bounded quantity; negative beyond the slack means violated.
    pub margins: BTreeMap<String, f64>,
}

impl AsymmetryReport {
    pub fn passed(&self) -> bool {
        self.delta_s >= -BOUND_SLACK && self.margins.values().all(|&m| m >= -BOUND_SLACK)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .margins
            .iter()
            .filter(|(_, &m)| m < -BOUND_SLACK)
            .map(|(k, m)| format!("{k} (margin {m:.3e})"))
            .collect();
        if self.delta_s < -BOUND_SLACK {
            out.push(format!("nonnegativity (ΔS = {:.3e})", self.delta_s));
        }
        out
    }
}

/// `½ ln[2πe(σ² + 1/12)]`, an upper bound on the entropy of any
/// integer-valued variable with variance `σ² > 0`.
pub fn massey_bound(variance: f64) -> Result<f64> {
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::Domain(format!(
            "the entropy bound needs 0 < σ² < ∞, got {variance}"
        )));
    }
    Ok(0.5 * (2.0 * PI * E * (variance + 1.0 / 12.0)).ln())
}

/// `2 z_Λ N`, the largest charge variance a state clustering at range Λ can have.
pub fn clustering_variance_bound(g: &LatticeGeometry, range: usize) -> f64 {
    2.0 * g.neighborhood_cardinality(range) as f64 * g.total_sites() as f64
}

/// `½ ln[2πe(2 z_Λ N + 1/12)]`.
pub fn clustering_asymmetry_bound(g: &LatticeGeometry, range: usize) -> f64 {
    massey_bound(clustering_variance_bound(g, range)).expect("2 z N is positive")
}

/// U(1) asymmetry of `state` with every applicable bound.
///
/// Pure states use `ΔS = H({p_q})`; mixed states go through the sector
/// blocks of the twirled density matrix.
pub fn u1_asymmetry(
    state: &QuantumState,
    range: Option<usize>,
    g: &LatticeGeometry,
    caps: &Caps,
) -> Result<AsymmetryReport> {
    let n = state.n_qubits();
    if g.total_sites() != n {
        return arg(format!(
            "lattice has {} sites but the state has {n} qubits",
            g.total_sites()
        ));
    }
    let dist = charge_distribution(state);
    let h = shannon_entropy(&dist);
    let delta_s = match state {
        QuantumState::Pure(_) => h,
        QuantumState::Mixed(rho) => {
            caps.check_density(n)?;
            twirled_entropy(rho)? - von_neumann_entropy(rho)?
        }
    };
    Ok(report_from_distribution(n, delta_s, &dist, range.map(|r| (g, r))))
}

/// Builds a U(1) report from a known `ΔS` and charge distribution.
pub fn report_from_distribution(
    n_qubits: usize,
    delta_s: f64,
    dist: &ChargeDistribution,
    clustering: Option<(&LatticeGeometry, usize)>,
) -> AsymmetryReport {
    let h = shannon_entropy(dist);
    let mut bounds = Bounds {
        log_n_plus_1: Some(((n_qubits + 1) as f64).ln()),
        ..Bounds::default()
    };
    let mut margins = BTreeMap::new();
    margins.insert("log_n_plus_1".to_string(), bounds.log_n_plus_1.unwrap() - delta_s);
    margins.insert("shannon".to_string(), h - delta_s);
    if let Ok(m) = massey_bound(dist.variance()) {
        bounds.massey = Some(m);
        margins.insert("massey".to_string(), m - h);
    }
    if let Some((g, range)) = clustering {
        let c = clustering_asymmetry_bound(g, range);
        bounds.clustering = Some(c);
        margins.insert("clustering".to_string(), c - delta_s);
        margins.insert(
            "variance".to_string(),
            clustering_variance_bound(g, range) - dist.variance(),
        );
    }
    AsymmetryReport {
        group: Group::U1,
        n_qubits,
        delta_s,
        shannon: h,
        variance: dist.variance(),
        bounds,
        margins,
    }
}

/// `⟨e^{iαQ}⟩ = Σ_q p_q e^{iαq}`.
pub fn generating_function(d: &ChargeDistribution, alpha: f64) -> C64 {
    d.probs()
        .iter()
        .enumerate()
        .map(|(q, &p)| C64::from_polar(p, alpha * q as f64))
        .sum()
}

pub fn state_generating_function(state: &QuantumState, alpha: f64) -> C64 {
    generating_function(&charge_distribution(state), alpha)
}

/// Recovers `p_q` from `G(α_k)` sampled at `α_k = 2πk/(N+1)`, `k = 0..=N`.
pub fn invert_generating_function(samples: &[C64]) -> Vec<f64> {
    let len = samples.len();
    (0..len)
        .map(|q| {
            let s: C64 = samples
                .iter()
                .enumerate()
                .map(|(k, g)| g * C64::from_polar(1.0, -2.0 * PI * (k * q) as f64 / len as f64))
                .sum();
            s.re / len as f64
        })
        .collect()
}
