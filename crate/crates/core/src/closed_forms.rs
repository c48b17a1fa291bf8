//! Charge laws known in closed form, usable far beyond statevector sizes.
//!
//! Binomials go through `ln Γ`; no factorial is formed directly.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{arg, Error, Result};
use crate::quantum::{gates, Caps, StateVector, C64};
use crate::u1::ChargeDistribution;

/// `ln C(n, k)`; `-∞` outside `0 ≤ k ≤ n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    // Ordered so that C(n, k) and C(n, n − k) round identically.
    let (lo, hi) = (k.min(n - k), k.max(n - k));
    ln_gamma(n as f64 + 1.0) - ln_gamma(lo as f64 + 1.0) - ln_gamma(hi as f64 + 1.0)
}

/// Values above this are rescaled during the recurrence.
const RESCALE_AT: f64 = 1e150;

/// `φ_i(k) = √(C(N,i) C(N,k) / 2^N) K_i(k; 1/2, N)` for `i = 0..=N`.
///
/// These are the coefficients of `H^{⊗N}|D_k⟩` in the Dicke basis and satisfy
/// `Σ_i φ_i² = 1`. The orthonormal three-term recurrence
/// `a_i φ_{i+1} = (N − 2k) φ_i − a_{i−1} φ_{i−1}`, `a_i = √((i+1)(N−i))`,
/// is run forward only up to `N/2`, where it grows; the upper half follows
/// from `φ_{N−i} = (−1)^k φ_i`.
pub fn rotated_dicke_coefficients(n: usize, k: usize) -> Result<Vec<f64>> {
    if k > n {
        return arg(format!("Dicke index k = {k} exceeds N = {n}"));
    }
    let a = |i: usize| (((i + 1) * (n - i)) as f64).sqrt();
    let drive = n as f64 - 2.0 * k as f64;
    let half = n / 2;
    let mut phi = vec![0.0; n + 1];
    phi[0] = 1.0;
    if n > 0 {
        phi[1] = drive / a(0);
    }
    for i in 1..half.min(n.saturating_sub(1)) {
        phi[i + 1] = (drive * phi[i] - a(i - 1) * phi[i - 1]) / a(i);
        if phi[i + 1].abs() > RESCALE_AT {
            for p in phi[..=i + 1].iter_mut() {
                *p /= RESCALE_AT;
            }
        }
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    for i in half + 1..=n {
        phi[i] = sign * phi[n - i];
    }
    // The mirror is exact, so normalizing the full vector fixes the seed.
    let norm = crate::exec::pairwise_sum(&phi.iter().map(|p| p * p).collect::<Vec<_>>()).sqrt();
    for p in phi.iter_mut() {
        *p /= norm;
    }
    Ok(phi)
}

/// Symmetric Krawtchouk polynomial `K_i(k; 1/2, N)`.
pub fn krawtchouk(i: usize, k: usize, n: usize) -> Result<f64> {
    if i > n || k > n {
        return arg(format!("Krawtchouk indices ({i}, {k}) out of range for N = {n}"));
    }
    let phi = rotated_dicke_coefficients(n, k)?;
    let ln_c = 0.5 * (ln_binomial(n as u64, i as u64) + ln_binomial(n as u64, k as u64) - n as f64 * LN_2);
    Ok(phi[i] / ln_c.exp())
}

/// Charge law of `H^{⊗N}|D_k⟩`: `p(q) = φ_q(k)²`. The Dicke index counts ones
/// and the charge counts zeros; `φ_q² = φ_{N−q}²` makes the two readings agree.
pub fn rotated_dicke_distribution(n: usize, k: usize) -> Result<ChargeDistribution> {
    let phi = rotated_dicke_coefficients(n, k)?;
    ChargeDistribution::new(phi.into_iter().map(|p| p * p).collect())
}

/// `p_M(q; 2M)` for the half-filled rotated Dicke state: zero for odd `q`,
/// `2^{−2M} C(2M,M) C(2M,q)^{−1} C(M,q/2)²` otherwise.
pub fn dicke_half_charge_prob(m: usize, q: usize) -> f64 {
    if q > 2 * m || q % 2 == 1 {
        return 0.0;
    }
    let (m, q) = (m as u64, q as u64);
    let ln_p = ln_binomial(2 * m, m) - ln_binomial(2 * m, q) + 2.0 * ln_binomial(m, q / 2) - 2.0 * m as f64 * LN_2;
    ln_p.exp()
}

pub fn dicke_half_distribution(m: usize) -> Result<ChargeDistribution> {
    ChargeDistribution::new((0..=2 * m).map(|q| dicke_half_charge_prob(m, q)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    X,
}

/// `|D_k^z⟩`, the uniform superposition of basis states with `k` ones, or its
/// Hadamard image `|D_k^x⟩`.
pub fn dicke_state(n: usize, k: usize, axis: Axis, caps: &Caps) -> Result<StateVector> {
    if k > n {
        return arg(format!("Dicke index k = {k} exceeds N = {n}"));
    }
    caps.check_statevector(n)?;
    let amp = C64::new((-0.5 * ln_binomial(n as u64, k as u64)).exp(), 0.0);
    let amps = (0..1usize << n)
        .map(|i| if i.count_ones() as usize == k { amp } else { C64::new(0.0, 0.0) })
        .collect();
    let mut psi = StateVector::normalized(n, amps)?;
    if axis == Axis::X {
        psi.apply_global(&gates::hadamard_matrix(), crate::exec::Exec::default());
    }
    Ok(psi)
}

/// Charges `1..=N` with weight `1/N` each, `p_0 = 0`.
pub fn kink_distribution(n: usize) -> Result<ChargeDistribution> {
    if n == 0 {
        return arg("the kink state needs N ≥ 1");
    }
    let mut p = vec![1.0 / n as f64; n + 1];
    p[0] = 0.0;
    Ok(ChargeDistribution::new(p).expect("normalized by construction"))
}

/// `⟨e^{iα(Q−1)}⟩` of the kink state, `(e^{iαN} − 1) / (N (e^{iα} − 1))`.
pub fn kink_generating_function(n: usize, alpha: f64) -> C64 {
    let one = C64::new(1.0, 0.0);
    let den = C64::from_polar(1.0, alpha) - one;
    if den.norm() < 1e-300 {
        return one;
    }
    (C64::from_polar(1.0, alpha * n as f64) - one) / (den * n as f64)
}

/// Exact law of `Σ_i X_i` for independent `X_i ~ Bernoulli(x_i)`, by convolution.
pub fn poisson_binomial(x: &[f64]) -> Result<ChargeDistribution> {
    if let Some(bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return arg(format!("Bernoulli parameter {bad} outside [0, 1]"));
    }
    let mut p = vec![0.0; x.len() + 1];
    p[0] = 1.0;
    for (n, &xi) in x.iter().enumerate() {
        for q in (1..=n + 1).rev() {
            p[q] = p[q] * (1.0 - xi) + p[q - 1] * xi;
        }
        p[0] *= 1.0 - xi;
    }
    ChargeDistribution::new(p)
}

/// `Π_j (x_j e^{iα} + 1 − x_j)`.
pub fn product_generating_function(x: &[f64], alpha: f64) -> C64 {
    let e = C64::from_polar(1.0, alpha);
    x.iter().map(|&xi| e * xi + (1.0 - xi)).product()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "values")]
pub enum DensityDescriptor {
    Flat,
    /// `1 / (π √(u(1 − u)))`.
    Arcsine,
    /// Histogram over `len` equal bins of `[0, 1]`.
    CustomTable(Vec<f64>),
}

/// A charge density `p(u)` on `u ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousChargeDensity {
    descriptor: DensityDescriptor,
}

const QUAD_TOL: f64 = 1e-12;

impl ContinuousChargeDensity {
    pub fn new(descriptor: DensityDescriptor) -> Result<Self> {
        let d = Self { descriptor };
        let total = d.normalization();
        if !total.is_finite() || (total - 1.0).abs() > 1e-8 {
            return Err(Error::Domain(format!("density integrates to {total}, not 1")));
        }
        Ok(d)
    }

    /// Histogram of `p_q` over `N + 1` bins: height `p_q (N + 1)`.
    pub fn from_distribution(d: &ChargeDistribution) -> Result<Self> {
        let bins = d.probs().len() as f64;
        Self::new(DensityDescriptor::CustomTable(d.probs().iter().map(|p| p * bins).collect()))
    }

    pub fn descriptor(&self) -> &DensityDescriptor {
        &self.descriptor
    }

    pub fn density(&self, u: f64) -> f64 {
        if !(0.0..=1.0).contains(&u) {
            return 0.0;
        }
        match &self.descriptor {
            DensityDescriptor::Flat => 1.0,
            DensityDescriptor::Arcsine => 1.0 / (PI * (u * (1.0 - u)).sqrt()),
            DensityDescriptor::CustomTable(t) => t[((u * t.len() as f64) as usize).min(t.len() - 1)],
        }
    }

    /// `∫ p` and `−∫ p ln p` in the variable where the integrand is regular.
    fn integrate(&self, log_weighted: bool) -> f64 {
        let f = |p: f64| if log_weighted { if p > 0.0 { -p * p.ln() } else { 0.0 } } else { p };
        match &self.descriptor {
            DensityDescriptor::Flat => quadrature::double_exponential::integrate(|u| f(self.density(u)), 0.0, 1.0, QUAD_TOL).integral,
            // u = sin²θ: p(u) du = (2/π) dθ, leaving only a log singularity at the ends.
            DensityDescriptor::Arcsine => quadrature::double_exponential::integrate(
                |t: f64| {
                    let sc = t.sin() * t.cos();
                    let jac = 2.0 * sc;
                    if sc <= 0.0 {
                        return 0.0;
                    }
                    let p = 1.0 / (PI * sc);
                    f(p) * jac
                },
                0.0,
                PI / 2.0,
                QUAD_TOL,
            )
            .integral,
            // Piecewise constant: each bin integrates exactly.
            DensityDescriptor::CustomTable(t) => {
                let w = 1.0 / t.len() as f64;
                crate::exec::pairwise_sum(&t.iter().map(|&p| f(p) * w).collect::<Vec<_>>())
            }
        }
    }

    pub fn normalization(&self) -> f64 {
        self.integrate(false)
    }

    /// `−∫₀¹ p(u) ln p(u) du`.
    pub fn differential_entropy(&self) -> f64 {
        self.integrate(true)
    }
}

/// `ln N − ∫ p ln p`, the large-`N` asymmetry of a state with charge density `p`.
pub fn continuous_asymmetry_estimate(d: &ContinuousChargeDensity, n: usize) -> f64 {
    (n as f64).ln() + d.differential_entropy()
}

/// Least-squares fit `ΔS ≈ a ln N + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation from the fitted line.
    pub residual: f64,
}

pub fn asymptotic_fit(points: &[(f64, f64)]) -> Result<AsymptoticFit> {
    if points.len() < 3 {
        return arg("a fit needs at least three points");
    }
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    if ns.windows(2).any(|w| w[0] == w[1]) || ns[0] <= 0.0 {
        return arg("fit points need distinct positive N");
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(points)
        .map(|(x, p)| (p.1 - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(AsymptoticFit {
        slope,
        intercept,
        residual,
    })
}

/// Candidate constants for the half-filled rotated Dicke intercept, as
/// `(name, value)`. They disagree; none is asserted.
pub fn dicke_intercept_candidates() -> [(&'static str, f64); 3] {
    [
        ("pi/4", PI / 4.0),
        ("ln(pi/4)", (PI / 4.0).ln()),
        ("ln(pi/8)", (PI / 8.0).ln()),
    ]
}
