//! Slow, independent reference implementations.
//!
//! Nothing here shares code with the fast paths beyond state containers:
//! operators are built as dense Kronecker products and twirls are computed
//! by brute force.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, Observable, Pauli, C64};

/// Dense matrix of a Pauli-string sum.
pub fn dense_observable(n_qubits: usize, o: &Observable) -> DMatrix<C64> {
    let dim = 1 << n_qubits;
    let mut out = DMatrix::zeros(dim, dim);
    for (c, s) in &o.terms {
        let mut m = DMatrix::from_element(1, 1, *c);
        for site in 0..n_qubits {
            let p = s.ops.iter().find(|(j, _)| *j == site).map_or(Pauli::I, |x| x.1);
            m = m.kronecker(&DMatrix::from_row_slice(2, 2, &p.matrix()));
        }
        out += m;
    }
    out
}

/// `u^{⊗N}` as a dense matrix.
pub fn dense_global(n_qubits: usize, u: &Matrix2<C64>) -> DMatrix<C64> {
    let u = DMatrix::from_iterator(2, 2, u.iter().copied());
    (0..n_qubits).fold(DMatrix::from_element(1, 1, C64::new(1.0, 0.0)), |acc, _| acc.kronecker(&u))
}

fn entropy_of(m: &DMatrix<C64>) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l > 1e-14)
        .map(|l| -l * l.ln())
        .sum()
}

/// `S_V(Σ_q P_q ρ P_q) − S_V(ρ)` with the projectors formed explicitly.
pub fn dense_u1_asymmetry(rho: &DensityMatrix) -> f64 {
    let n = rho.n_qubits();
    let dim = rho.dim();
    let q = dense_observable(n, &Observable::charge(n));
    let mut g = DMatrix::zeros(dim, dim);
    for charge in 0..=n {
        let p = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j && (q[(i, i)].re - charge as f64).abs() < 1e-9 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        g += &p * rho.matrix() * &p;
    }
    entropy_of(&g) - entropy_of(rho.matrix())
}

/// `p_{s,m} = Tr[ρ P_s P_m]` from a dense eigendecomposition of `S²`;
/// returned as `(s, m, p)` triples with `p > 1e-14`.
pub fn dense_spin_distribution(rho: &DensityMatrix) -> Vec<(usize, i64, f64)> {
    let n = rho.n_qubits();
    let s2 = dense_observable(n, &Observable::casimir(n));
    let sz = dense_observable(n, &Observable::spin(n, Pauli::Z));
    let eig = s2.symmetric_eigen();
    let mut out = Vec::new();
    for s in 0..=n / 2 {
        let target = (s * (s + 1)) as f64;
        let cols: Vec<usize> = (0..eig.eigenvalues.len())
            .filter(|&c| (eig.eigenvalues[c] - target).abs() < 1e-6)
            .collect();
        if cols.is_empty() {
            continue;
        }
        let v = eig.eigenvectors.select_columns(&cols);
        let ps = &v * v.adjoint();
        let rp = rho.matrix() * ps;
        for m in -(s as i64)..=s as i64 {
            let p: f64 = (0..rho.dim())
                .filter(|&i| (sz[(i, i)].re - m as f64).abs() < 1e-9)
                .map(|i| rp[(i, i)].re)
                .sum();
            if p > 1e-14 {
                out.push((s, m, p));
            }
        }
    }
    out
}

fn rz(angle: f64) -> Matrix2<C64> {
    Matrix2::new(
        C64::from_polar(1.0, -angle / 2.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::from_polar(1.0, angle / 2.0),
    )
}

fn ry(angle: f64) -> Matrix2<C64> {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    Matrix2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0))
}

fn conjugate(m: &DMatrix<C64>, u: &DMatrix<C64>) -> DMatrix<C64> {
    u * m * u.adjoint()
}

/// One Euler-angle quadrature of `∫ dg u^{⊗N} ρ u^{†⊗N}`: uniform grids of
/// `n_angle` points for α and γ, Gauss–Legendre in `cos β` with `n_beta` nodes.
fn euler_twirl(n_qubits: usize, m: &DMatrix<C64>, n_angle: usize, n_beta: usize) -> DMatrix<C64> {
    let step = 2.0 * std::f64::consts::PI / n_angle as f64;
    let average_z = |x: &DMatrix<C64>| {
        let mut acc = DMatrix::zeros(x.nrows(), x.ncols());
        for t in 0..n_angle {
            acc += conjugate(x, &dense_global(n_qubits, &rz(t as f64 * step)));
        }
        acc / C64::new(n_angle as f64, 0.0)
    };
    let inner = average_z(m);
    let rule = GaussLegendre::new(NonZeroUsize::new(n_beta).expect("positive"));
    let mut mid = DMatrix::zeros(m.nrows(), m.ncols());
    for &(x, w) in rule.as_node_weight_pairs() {
        let beta = x.clamp(-1.0, 1.0).acos();
        mid += conjugate(&inner, &dense_global(n_qubits, &ry(beta))) * C64::new(w / 2.0, 0.0);
    }
    average_z(&mid)
}

/// Haar average over SU(2) by Euler-angle quadrature, refined until three
/// successive levels agree within `tol`.
pub fn haar_twirl(rho: &DensityMatrix, tol: f64) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    let mut prev = euler_twirl(n, rho.matrix(), 2, 1);
    let mut settled = 0;
    for level in 1..=4 * n + 8 {
        let next = euler_twirl(n, rho.matrix(), 2 + level, 1 + level);
        let change = (&next - &prev).camax();
        prev = next;
        settled = if change < tol { settled + 1 } else { 0 };
        if settled == 2 {
            return DensityMatrix::new(n, prev);
        }
    }
    Err(Error::Validation("Haar quadrature did not converge".into()))
}
