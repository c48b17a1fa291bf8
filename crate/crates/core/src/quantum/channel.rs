//! Kraus channels on a few sites.
//!
//! JSON layout: `{"support": [sites…], "kraus": [[[re, im], …], …]}`, each
//! Kraus operator row-major of size `4^k` for `k` support sites.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::state::DensityMatrix;
use super::{kernel, C64};
use crate::error::{arg, Error, Result};
use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausChannel {
    pub support: Vec<usize>,
    #[serde(with = "kraus_list")]
    pub kraus: Vec<Vec<C64>>,
}

impl KrausChannel {
    pub fn new(support: Vec<usize>, kraus: Vec<Vec<C64>>) -> Result<Self> {
        let ch = Self { support, kraus };
        ch.validate()?;
        Ok(ch)
    }

    fn local_dim(&self) -> usize {
        1 << self.support.len()
    }

    /// Checks shapes and `Σ A_k† A_k = 𝟙` within 1e-10.
    pub fn validate(&self) -> Result<()> {
        let d = self.local_dim();
        if self.kraus.is_empty() {
            return arg("channel without Kraus operators");
        }
        let mut sum = DMatrix::<C64>::zeros(d, d);
        for a in &self.kraus {
            if a.len() != d * d {
                return arg(format!("Kraus operator needs {} entries, got {}", d * d, a.len()));
            }
            let m = DMatrix::from_row_slice(d, d, a);
            sum += m.adjoint() * m;
        }
        let residual = (sum - DMatrix::identity(d, d)).camax();
        if residual > 1e-10 {
            return Err(Error::Validation(format!(
                "Kraus operators are not complete (residual {residual:.3e})"
            )));
        }
        Ok(())
    }

    pub fn identity(site: usize) -> Self {
        Self {
            support: vec![site],
            kraus: vec![super::observable::Pauli::I.matrix().to_vec()],
        }
    }

    /// Phase flip with probability `p`: `ρ ↦ (1-p)ρ + p Z ρ Z`.
    pub fn dephasing(site: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return arg("dephasing probability outside [0, 1]");
        }
        let a0 = super::observable::Pauli::I.matrix().map(|z| z * (1.0 - p).sqrt());
        let a1 = super::gates::pauli_z().map(|z| z * p.sqrt());
        Self::new(vec![site], vec![a0.to_vec(), a1.to_vec()])
    }

    /// `ρ ↦ (1-p)ρ + p 𝟙/2` on one qubit.
    pub fn depolarizing(site: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return arg("depolarizing probability outside [0, 1]");
        }
        let id = super::observable::Pauli::I.matrix().map(|z| z * (1.0 - 0.75 * p).sqrt());
        let mut kraus = vec![id.to_vec()];
        for m in [super::gates::pauli_x(), super::gates::pauli_y(), super::gates::pauli_z()] {
            kraus.push(m.map(|z| z * (p / 4.0).sqrt()).to_vec());
        }
        Self::new(vec![site], kraus)
    }

    /// Projective measurement of the charge of `sites` without readout:
    /// one Kraus operator per computational basis state of the support.
    pub fn full_dephasing(sites: Vec<usize>) -> Result<Self> {
        let d = 1 << sites.len();
        let kraus = (0..d)
            .map(|t| {
                let mut a = vec![C64::new(0.0, 0.0); d * d];
                a[t * d + t] = C64::new(1.0, 0.0);
                a
            })
            .collect();
        Self::new(sites, kraus)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ch: Self = serde_json::from_str(text)?;
        ch.validate()?;
        Ok(ch)
    }
}

/// `Σ_k A_k ρ A_k†`.
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    ch.validate()?;
    let n = rho.n_qubits();
    kernel::check_local(n, &ch.support, ch.local_dim().pow(2))?;
    let exec = Exec::default();
    let mut out = DMatrix::zeros(rho.dim(), rho.dim());
    for a in &ch.kraus {
        let mut m = rho.matrix().clone();
        kernel::conjugate_local(&mut m, n, &ch.support, a, exec);
        out += m;
    }
    DensityMatrix::from_matrix_unchecked(n, out)
}

mod kraus_list {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|op| op.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<C64>>, D::Error> {
        let raw: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|op| op.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .collect())
    }
}
