//! Standard gate matrices, row-major.

use nalgebra::Matrix2;

use super::C64;

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

const Z0: C64 = c(0.0, 0.0);
const ONE: C64 = c(1.0, 0.0);

pub fn hadamard() -> [C64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]
}

pub fn hadamard_matrix() -> Matrix2<C64> {
    let h = hadamard();
    Matrix2::new(h[0], h[1], h[2], h[3])
}

pub fn pauli_x() -> [C64; 4] {
    [Z0, ONE, ONE, Z0]
}

pub fn pauli_y() -> [C64; 4] {
    [Z0, c(0.0, -1.0), c(0.0, 1.0), Z0]
}

pub fn pauli_z() -> [C64; 4] {
    [ONE, Z0, Z0, c(-1.0, 0.0)]
}

/// Control on the first site.
pub fn cnot() -> [C64; 16] {
    let mut m = [Z0; 16];
    m[0] = ONE;
    m[5] = ONE;
    m[11] = ONE;
    m[14] = ONE;
    m
}

pub fn swap() -> [C64; 16] {
    let mut m = [Z0; 16];
    m[0] = ONE;
    m[6] = ONE;
    m[9] = ONE;
    m[15] = ONE;
    m
}

/// Charge-conserving two-qubit gate: phases on `|00⟩`, `|11⟩` and a 2×2
/// unitary on `{|01⟩, |10⟩}`.
pub fn charge_conserving(phase00: f64, phase11: f64, inner: &Matrix2<C64>) -> [C64; 16] {
    let mut m = [Z0; 16];
    m[0] = C64::from_polar(1.0, phase00);
    m[5] = inner[(0, 0)];
    m[6] = inner[(0, 1)];
    m[9] = inner[(1, 0)];
    m[10] = inner[(1, 1)];
    m[15] = C64::from_polar(1.0, phase11);
    m
}
