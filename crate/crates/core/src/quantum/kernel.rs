//! Bit-mask kernels for local operators on dense amplitude arrays.

use nalgebra::DMatrix;

use super::state::site_mask;
use super::C64;
use crate::error::{arg, Result};
use crate::exec::{for_each_chunk_mut, Exec};

pub(crate) fn check_local(n_qubits: usize, sites: &[usize], op_len: usize) -> Result<()> {
    let k = sites.len();
    if k == 0 || k > 6 {
        return arg(format!("local operators act on 1..=6 sites, got {k}"));
    }
    if op_len != 1 << (2 * k) {
        return arg(format!(
            "operator on {k} sites needs {} entries, got {op_len}",
            1 << (2 * k)
        ));
    }
    for (a, &s) in sites.iter().enumerate() {
        if s >= n_qubits {
            return arg(format!("site {s} out of range for {n_qubits} qubits"));
        }
        if sites[..a].contains(&s) {
            return arg(format!("site {s} repeated"));
        }
    }
    Ok(())
}

/// Applies a `2^k × 2^k` row-major operator on `sites` (first site is the
/// most significant local bit) to `amps` in place.
///
/// The state is cut into power-of-two blocks of at least twice the highest
/// touched mask; every amplitude group lives inside one block.
pub(crate) fn apply_local(amps: &mut [C64], n_qubits: usize, sites: &[usize], op: &[C64], exec: Exec) {
    let k = sites.len();
    let dim = 1usize << k;
    let masks: Vec<usize> = sites.iter().map(|&s| site_mask(n_qubits, s)).collect();
    let all: usize = masks.iter().sum();
    let offsets: Vec<usize> = (0..dim)
        .map(|t| {
            (0..k)
                .filter(|&r| t >> (k - 1 - r) & 1 == 1)
                .map(|r| masks[r])
                .sum()
        })
        .collect();
    // The floor keeps tasks coarse for gates on low-order sites.
    let block = (2 * masks.iter().max().copied().unwrap_or(1)).max(1 << 12);

    for_each_chunk_mut(exec, amps, block, |_, chunk| {
        let mut gathered = [C64::new(0.0, 0.0); 64];
        for base in 0..chunk.len() {
            if base & all != 0 {
                continue;
            }
            for t in 0..dim {
                gathered[t] = chunk[base + offsets[t]];
            }
            for r in 0..dim {
                let row = &op[r * dim..(r + 1) * dim];
                let mut acc = C64::new(0.0, 0.0);
                for (c, g) in row.iter().zip(&gathered[..dim]) {
                    acc += c * g;
                }
                chunk[base + offsets[r]] = acc;
            }
        }
    });
}

/// `ρ ← A ρ A†` for a local operator `A`.
pub(crate) fn conjugate_local(
    m: &mut DMatrix<C64>,
    n_qubits: usize,
    sites: &[usize],
    op: &[C64],
    exec: Exec,
) {
    left_multiply_columns(m, n_qubits, sites, op, exec);
    m.adjoint_mut();
    left_multiply_columns(m, n_qubits, sites, op, exec);
    m.adjoint_mut();
}

/// `M ← A M`, column by column (columns are contiguous in nalgebra storage).
fn left_multiply_columns(
    m: &mut DMatrix<C64>,
    n_qubits: usize,
    sites: &[usize],
    op: &[C64],
    exec: Exec,
) {
    let dim = m.nrows();
    for_each_chunk_mut(exec, m.as_mut_slice(), dim, |_, col| {
        apply_local(col, n_qubits, sites, op, Exec::Sequential);
    });
}
