//! Named states used as examples and negative controls.

use crate::error::{arg, Result};
use crate::quantum::{Caps, StateVector, C64};

pub use crate::closed_forms::{dicke_state, Axis};

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n_qubits: usize, caps: &Caps) -> Result<StateVector> {
    if n_qubits == 0 {
        return arg("GHZ needs at least one qubit");
    }
    caps.check_statevector(n_qubits)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
    amps[0] = C64::new(h, 0.0);
    amps[(1 << n_qubits) - 1] += C64::new(h, 0.0);
    StateVector::normalized(n_qubits, amps)
}

/// `N^{-1/2} Σ_{j=1}^{N} |0…0 1…1⟩` with `j` leading zeros, so the charges
/// `1..=N` each carry weight `1/N`.
pub fn kink(n_qubits: usize, caps: &Caps) -> Result<StateVector> {
    if n_qubits == 0 {
        return arg("the kink state needs at least one qubit");
    }
    caps.check_statevector(n_qubits)?;
    let amp = C64::new(1.0 / (n_qubits as f64).sqrt(), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
    for j in 1..=n_qubits {
        // The trailing N − j sites hold ones.
        amps[(1 << (n_qubits - j)) - 1] = amp;
    }
    StateVector::new(n_qubits, amps)
}

/// Product of Bell pairs `(|01⟩ + |10⟩)/√2` on sites `(2i, 2i+1)`.
pub fn bell_pair_layer(n_qubits: usize, caps: &Caps) -> Result<StateVector> {
    if n_qubits == 0 || n_qubits % 2 == 1 {
        return arg("a Bell-pair layer needs an even number of qubits");
    }
    caps.check_statevector(n_qubits)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pair = [C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0)];
    let mut amps = vec![C64::new(1.0, 0.0)];
    for _ in 0..n_qubits / 2 {
        amps = amps.iter().flat_map(|a| pair.iter().map(move |b| a * b)).collect();
    }
    StateVector::normalized(n_qubits, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::kink_distribution;
    use crate::u1::charge_distribution;

    #[test]
    fn kink_matches_closed_form() {
        let caps = Caps::default();
        for n in [1, 4, 10] {
            let d = charge_distribution(&kink(n, &caps).unwrap().into());
            for (a, b) in d.probs().iter().zip(kink_distribution(n).unwrap().probs()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ghz_charges() {
        let d = charge_distribution(&ghz(10, &Caps::default()).unwrap().into());
        assert!((d.probs()[0] - 0.5).abs() < 1e-15 && (d.probs()[10] - 0.5).abs() < 1e-15);
        assert!((d.variance() - 25.0).abs() < 1e-12);
    }

    #[test]
    fn bell_layer_is_normalized() {
        let psi = bell_pair_layer(4, &Caps::default()).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((psi.amplitudes()[0b0101].re - 0.5).abs() < 1e-15);
        assert!(bell_pair_layer(3, &Caps::default()).is_err());
    }
}
