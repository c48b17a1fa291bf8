//! Experiment configuration files.

use std::path::{Path, PathBuf};

use asymlab::quantum::{Caps, LocalState, C64};
use asymlab::LatticeGeometry;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Largest N accepted by the closed-form kink and Dicke paths.
pub const CLOSED_FORM_CAP: usize = 10_000_000;
/// Largest N for the quadratic-time Poisson-binomial path.
pub const PRODUCT_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    U1Asymmetry,
    Su2Asymmetry,
    DickeSweep,
    KinkSweep,
    ProductSweep,
    CircuitClustering,
    BoundSuite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "e")]
    E,
    #[serde(rename = "2")]
    Two,
}

impl LogBase {
    /// Divisor taking nats to this base.
    pub fn scale(self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
        }
    }
}

/// Per-site input of a product state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProductInput {
    /// Amplitudes `[[re, im], [re, im]]` per site; a single entry is repeated.
    Amplitudes { sites: Vec<[[f64; 2]; 2]> },
    /// `√x|0⟩ + √(1−x)|1⟩` on every site.
    Bernoulli { x: f64 },
    /// Haar-random qubit per site.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateSpec {
    Product { input: ProductInput },
    Circuit { circuit: PathBuf, input: ProductInput },
    /// Dicke state with `k` ones, or `k = round(ratio · N)`, rotated by Hadamards.
    Dicke {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ratio: Option<f64>,
    },
    Kink,
    Ghz,
    /// Haar-random pure state.
    Random { seed: u64 },
    /// JSON list of `[re, im]` amplitudes, site 0 the most significant bit.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Lattice dimension and linear size. Sweeps keep the dimension and
    /// take the linear size from each N.
    pub geometry: LatticeGeometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_spec: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<usize>,
    /// Clustering range Λ the bounds are evaluated at.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub output: PathBuf,
    #[serde(default)]
    pub log_base: LogBase,
}

impl ProductInput {
    pub fn locals(&self, n: usize) -> Result<Vec<LocalState>, CliError> {
        match self {
            ProductInput::Amplitudes { sites } => {
                if sites.len() != 1 && sites.len() != n {
                    return Err(CliError::Config(format!(
                        "{} site amplitudes given for {n} sites",
                        sites.len()
                    )));
                }
                let one = |a: &[[f64; 2]; 2]| {
                    let v = [C64::new(a[0][0], a[0][1]), C64::new(a[1][0], a[1][1])];
                    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                    if !(norm > 0.0) {
                        return Err(CliError::Config("zero local amplitude vector".into()));
                    }
                    Ok(LocalState::Pure([v[0] / norm, v[1] / norm]))
                };
                (0..n).map(|j| one(&sites[if sites.len() == 1 { 0 } else { j }])).collect()
            }
            ProductInput::Bernoulli { x } => {
                if !(0.0..=1.0).contains(x) {
                    return Err(CliError::Config(format!("Bernoulli parameter {x} outside [0, 1]")));
                }
                Ok(vec![LocalState::bernoulli(*x); n])
            }
            ProductInput::Random { seed } => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..n)
                    .map(|_| LocalState::Pure(asymlab::quantum::random::random_qubit(&mut rng)))
                    .collect())
            }
        }
    }

    /// Charge probability `|⟨0|ψ_j⟩|²` per site.
    pub fn zero_probabilities(&self, n: usize) -> Result<Vec<f64>, CliError> {
        Ok(self
            .locals(n)?
            .into_iter()
            .map(|l| match l {
                LocalState::Pure(v) => v[0].norm_sqr(),
                LocalState::Mixed(m) => m[(0, 0)].re,
            })
            .collect())
    }

    /// Parses `plus`, `zero`, `bernoulli:X` or `random:SEED`.
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("unrecognized input '{spec}'"));
        match spec.split_once(':') {
            None if spec == "plus" => Ok(ProductInput::Bernoulli { x: 0.5 }),
            None if spec == "zero" => Ok(ProductInput::Bernoulli { x: 1.0 }),
            Some(("bernoulli", x)) => Ok(ProductInput::Bernoulli {
                x: x.parse().map_err(|_| bad())?,
            }),
            Some(("random", s)) => Ok(ProductInput::Random {
                seed: s.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// First 16 hex digits of the SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(canonical.as_bytes())[..8])
    }

    /// The N values this config evaluates.
    pub fn sizes(&self) -> Vec<usize> {
        if self.sweep.is_empty() {
            vec![self.geometry.total_sites()]
        } else {
            self.sweep.clone()
        }
    }

    /// Lattice with `n` sites in this config's dimension.
    pub fn geometry_for(&self, n: usize) -> Result<LatticeGeometry, CliError> {
        let d = self.geometry.dimension;
        let m = (n as f64).powf(1.0 / d as f64).round() as usize;
        match LatticeGeometry::new(d, m) {
            Ok(g) if g.total_sites() == n => Ok(g),
            _ => Err(CliError::Config(format!("N = {n} is not a {d}-dimensional torus size"))),
        }
    }

    /// Checks everything that can be checked before running, including the
    /// size caps of the chosen path.
    pub fn validate(&self, caps: &Caps) -> Result<(), CliError> {
        use Experiment::*;
        let sizes = self.sizes();
        if sizes.contains(&0) {
            return Err(CliError::Config("N must be positive".into()));
        }
        for &n in &sizes {
            if matches!(self.experiment, U1Asymmetry | Su2Asymmetry | CircuitClustering) {
                self.geometry_for(n)?;
            }
        }
        let needs_state = matches!(self.experiment, U1Asymmetry | Su2Asymmetry | CircuitClustering);
        if needs_state && self.state_spec.is_none() {
            return Err(CliError::Config(format!("{:?} needs a state_spec", self.experiment)));
        }
        let max = sizes.iter().copied().max().unwrap_or(0);
        let limit = |what: &'static str, cap: usize| -> Result<(), CliError> {
            if max > cap {
                Err(CliError::Resource(asymlab::Error::Resource {
                    what,
                    requested: max,
                    cap,
                }))
            } else {
                Ok(())
            }
        };
        match self.experiment {
            DickeSweep | KinkSweep => limit("closed form", CLOSED_FORM_CAP),
            ProductSweep => limit("Poisson-binomial convolution", PRODUCT_CAP),
            U1Asymmetry | CircuitClustering => limit("statevector", caps.statevector),
            Su2Asymmetry => {
                if let Some(n) = sizes.iter().find(|n| *n % 2 == 1) {
                    return Err(CliError::Config(format!("the SU(2) path needs even N, got {n}")));
                }
                limit("Schur basis", caps.density)
            }
            BoundSuite => Ok(()),
        }?;
        match (&self.experiment, &self.state_spec) {
            (DickeSweep, Some(StateSpec::Dicke { .. })) | (DickeSweep, None) => {}
            (DickeSweep, _) => return Err(CliError::Config("dicke-sweep takes a dicke state_spec".into())),
            (ProductSweep, Some(StateSpec::Product { .. })) | (ProductSweep, None) => {}
            (ProductSweep, _) => return Err(CliError::Config("product-sweep takes a product state_spec".into())),
            (CircuitClustering, Some(StateSpec::Circuit { .. })) => {}
            (CircuitClustering, _) => {
                return Err(CliError::Config("circuit-clustering takes a circuit state_spec".into()))
            }
            _ => {}
        }
        if let Some(StateSpec::Dicke { k, ratio }) = &self.state_spec {
            match (k, ratio) {
                (Some(_), None) => {}
                (None, Some(r)) if (0.0..=1.0).contains(r) => {}
                _ => return Err(CliError::Config("dicke needs exactly one of k and ratio in [0, 1]".into())),
            }
            if let Some(k) = k {
                if sizes.iter().any(|n| k > n) {
                    return Err(CliError::Config(format!("Dicke k = {k} exceeds N")));
                }
            }
        }
        Ok(())
    }
}
