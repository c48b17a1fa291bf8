//! SU(2) sectors of an even number of qubits.
//!
//! The Schur basis `|s, m, α⟩` is built by coupling one spin-1/2 at a time in
//! site order with Condon–Shortley Clebsch–Gordan coefficients, `|0⟩` being
//! spin up. `α` enumerates coupling paths. The transform is real and block
//! diagonal in the number of ones `k`, with `m = N/2 − k`, so it is stored
//! as one `C(N,k) × C(N,k)` block per `k`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector, Matrix2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::lattice::LatticeGeometry;
use crate::quantum::entropy::{hermitian_eigenvalues, shannon, spectrum_entropy};
use crate::quantum::{
    expectation, von_neumann_entropy, Caps, DensityMatrix, Observable, Pauli, QuantumState, C64,
};
use crate::u1::{charge_distribution, AsymmetryReport, Bounds, Group};

/// Column label of the Schur basis. `s` and `m` are integers because `N` is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchurLabel {
    pub s: usize,
    pub m: i64,
    pub alpha: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct Sector {
    /// Computational indices with `k` ones, ascending; the block's rows.
    indices: Vec<usize>,
    /// Global label positions of the block's columns.
    columns: Vec<usize>,
    /// `(s, first column, count)` runs; columns are grouped by `s` ascending.
    runs: Vec<(usize, usize, usize)>,
    block: DMatrix<f64>,
}

/// Change of basis from the computational basis to `|s, m, α⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurBasis {
    n_qubits: usize,
    labels: Vec<SchurLabel>,
    sectors: Vec<Sector>,
}

/// Exact binomial coefficient; zero outside `0 ≤ k ≤ n`.
pub fn binomial_exact(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `n_s = C(N, N/2 − s) − C(N, N/2 − s − 1)`.
pub fn multiplicity(n_qubits: usize, s: usize) -> u128 {
    let (n, h, s) = (n_qubits as i64, n_qubits as i64 / 2, s as i64);
    binomial_exact(n, h - s) - binomial_exact(n, h - s - 1)
}

/// A coupled multiplet on the first `n` sites: `members[t]` has `2m = j2 − 2t`
/// and is stored densely over its weight sector.
struct Multiplet {
    j2: usize,
    members: Vec<Vec<f64>>,
}

/// Rank of each index among the indices with the same popcount.
fn sector_positions(n: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut pos = vec![0; 1 << n];
    let mut lists = vec![Vec::new(); n + 1];
    for i in 0..1usize << n {
        let k = i.count_ones() as usize;
        pos[i] = lists[k].len();
        lists[k].push(i);
    }
    (pos, lists)
}

fn couple(n: usize, old: &[Multiplet]) -> Vec<Multiplet> {
    let (_, old_lists) = sector_positions(n);
    let (new_pos, new_lists) = sector_positions(n + 1);
    let ones = |n: usize, m2: i64| ((n as i64 - m2) / 2) as usize;
    let mut out = Vec::new();
    for mult in old {
        let j1 = mult.j2 as i64;
        // Old member carrying 2m1, if any.
        let member = |m2: i64| -> Option<&Vec<f64>> {
            if m2.abs() > j1 {
                None
            } else {
                Some(&mult.members[((j1 - m2) / 2) as usize])
            }
        };
        let children: &[i64] = if j1 == 0 { &[1] } else { &[1, -1] };
        for &dir in children {
            let j2 = j1 + dir;
            let members = (0..=j2)
                .map(|t| {
                    let m2 = j2 - 2 * t;
                    let k = ones(n + 1, m2);
                    let mut v = vec![0.0; new_lists[k].len()];
                    let den = 2.0 * (j1 + 1) as f64;
                    let a = ((j1 + m2 + 1) as f64 / den).sqrt();
                    let b = ((j1 - m2 + 1) as f64 / den).sqrt();
                    let (cu, cd) = if dir == 1 { (a, b) } else { (-b, a) };
                    // |m − ½⟩|↑⟩ and |m + ½⟩|↓⟩.
                    for (m1, bit, c) in [(m2 - 1, 0usize, cu), (m2 + 1, 1usize, cd)] {
                        if let Some(src) = member(m1) {
                            let list = &old_lists[ones(n, m1)];
                            for (p, &x) in src.iter().enumerate() {
                                if x != 0.0 {
                                    v[new_pos[(list[p] << 1) | bit]] += c * x;
                                }
                            }
                        }
                    }
                    v
                })
                .collect();
            out.push(Multiplet {
                j2: j2 as usize,
                members,
            });
        }
    }
    out
}

impl SchurBasis {
    /// Couples `n_qubits` spins; `n_qubits` must be even and within the density cap.
    pub fn build(n_qubits: usize, caps: &Caps) -> Result<Self> {
        if n_qubits == 0 || n_qubits % 2 == 1 {
            return Err(Error::Unsupported(format!(
                "the Schur basis is built for even N ≥ 2, got {n_qubits}"
            )));
        }
        caps.check_density(n_qubits)?;
        let mut mults = vec![Multiplet {
            j2: 1,
            members: vec![vec![1.0], vec![1.0]],
        }];
        for n in 1..n_qubits {
            mults = couple(n, &mults);
        }
        // α counts multiplets of equal s in construction order.
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut tagged: Vec<(SchurLabel, Vec<f64>)> = Vec::with_capacity(1 << n_qubits);
        for mult in mults {
            let s = mult.j2 / 2;
            let alpha = *seen.entry(s).and_modify(|a| *a += 1).or_insert(0);
            for (t, v) in mult.members.into_iter().enumerate() {
                let label = SchurLabel {
                    s,
                    m: s as i64 - t as i64,
                    alpha,
                };
                tagged.push((label, v));
            }
        }
        tagged.sort_by(|a, b| {
            (a.0.s, a.0.alpha, std::cmp::Reverse(a.0.m)).cmp(&(b.0.s, b.0.alpha, std::cmp::Reverse(b.0.m)))
        });
        let labels: Vec<SchurLabel> = tagged.iter().map(|(l, _)| *l).collect();
        let mut columns: Vec<Vec<f64>> = tagged.into_iter().map(|(_, v)| v).collect();
        let (_, lists) = sector_positions(n_qubits);
        let sectors = (0..=n_qubits)
            .map(|k| {
                let m = n_qubits as i64 / 2 - k as i64;
                let cols: Vec<usize> = (0..labels.len()).filter(|&c| labels[c].m == m).collect();
                let dim = lists[k].len();
                let mut block = DMatrix::zeros(dim, cols.len());
                for (j, &c) in cols.iter().enumerate() {
                    let v = std::mem::take(&mut columns[c]);
                    block.set_column(j, &DVector::from_vec(v));
                }
                Sector::new(lists[k].clone(), cols, &labels, block)
            })
            .collect();
        Ok(Self {
            n_qubits,
            labels,
            sectors,
        })
    }

    /// Shared instance per `N`, built on first use.
    pub fn cached(n_qubits: usize, caps: &Caps) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SchurBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(b) = cache.lock().expect("cache lock").get(&n_qubits) {
            return Ok(b.clone());
        }
        let built = Arc::new(Self::build(n_qubits, caps)?);
        Ok(cache
            .lock()
            .expect("cache lock")
            .entry(n_qubits)
            .or_insert(built)
            .clone())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn labels(&self) -> &[SchurLabel] {
        &self.labels
    }

    pub fn max_spin(&self) -> usize {
        self.n_qubits / 2
    }

    /// Number of columns labelled with spin `s` and a fixed `m`, i.e. `n_s`.
    pub fn counted_multiplicity(&self, s: usize) -> usize {
        self.labels.iter().filter(|l| l.s == s && l.m == 0).count()
    }

    /// Full `2^N × 2^N` transform, columns in label order.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = 1usize << self.n_qubits;
        let mut u = DMatrix::zeros(dim, dim);
        for sec in &self.sectors {
            for (j, &c) in sec.columns.iter().enumerate() {
                for (r, &i) in sec.indices.iter().enumerate() {
                    u[(i, c)] = sec.block[(r, j)];
                }
            }
        }
        u
    }

    /// `max |U^T U − 1|` over the blocks.
    pub fn unitarity_error(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| {
                let d = s.block.ncols();
                (s.block.transpose() * &s.block - DMatrix::identity(d, d)).amax()
            })
            .fold(0.0, f64::max)
    }

    fn check_state(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return arg(format!("state has {n} qubits, basis has {}", self.n_qubits));
        }
        Ok(())
    }

    /// Diagonal sector blocks `B_k^T ρ_kk B_k` in Schur coordinates.
    fn schur_blocks(&self, state: &QuantumState) -> Vec<DMatrix<C64>> {
        self.sectors
            .iter()
            .map(|sec| {
                let b = sec.block.map(|x| C64::new(x, 0.0));
                match state {
                    QuantumState::Pure(psi) => {
                        let a = psi.amplitudes();
                        let v = DVector::from_iterator(sec.indices.len(), sec.indices.iter().map(|&i| a[i]));
                        let c = b.transpose() * v;
                        &c * c.adjoint()
                    }
                    QuantumState::Mixed(rho) => {
                        let m = rho.matrix();
                        let d = sec.indices.len();
                        let r = DMatrix::from_fn(d, d, |x, y| m[(sec.indices[x], sec.indices[y])]);
                        b.transpose() * r * b
                    }
                }
            })
            .collect()
    }

    /// Writes `schur_N{N}.bin` and the `schur_N{N}.json` label sidecar into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let (bin, json) = cache_paths(dir, self.n_qubits);
        let mut out = Vec::new();
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&(self.n_qubits as u64).to_le_bytes());
        for sec in &self.sectors {
            out.extend_from_slice(&(sec.block.nrows() as u64).to_le_bytes());
            out.extend_from_slice(&(sec.block.ncols() as u64).to_le_bytes());
            for x in sec.block.iter() {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        fs::File::create(&bin)?.write_all(&out)?;
        let side = Sidecar {
            n_qubits: self.n_qubits,
            labels: self.labels.iter().map(|l| (l.s, l.m, l.alpha)).collect(),
        };
        fs::write(&json, serde_json::to_string(&side)?)?;
        Ok(())
    }

    /// Reads a basis written by [`SchurBasis::save`].
    pub fn load(dir: &Path, n_qubits: usize) -> Result<Self> {
        let (bin, json) = cache_paths(dir, n_qubits);
        let side: Sidecar = serde_json::from_str(&fs::read_to_string(&json)?)?;
        if side.n_qubits != n_qubits {
            return Err(Error::Validation(format!("sidecar is for N = {}", side.n_qubits)));
        }
        let labels: Vec<SchurLabel> = side
            .labels
            .iter()
            .map(|&(s, m, alpha)| SchurLabel { s, m, alpha })
            .collect();
        let mut bytes = Vec::new();
        fs::File::open(&bin)?.read_to_end(&mut bytes)?;
        let mut cur = bytes.as_slice();
        let mut take = |len: usize| -> Result<&[u8]> {
            if cur.len() < len {
                return Err(Error::Validation("truncated Schur cache".into()));
            }
            let (h, t) = cur.split_at(len);
            cur = t;
            Ok(h)
        };
        let u64_at = |b: &[u8]| u64::from_le_bytes(b.try_into().expect("8 bytes")) as usize;
        if take(CACHE_MAGIC.len())? != CACHE_MAGIC || u64_at(take(8)?) != n_qubits {
            return Err(Error::Validation("not a Schur cache for this N".into()));
        }
        let (_, lists) = sector_positions(n_qubits);
        let mut sectors = Vec::with_capacity(n_qubits + 1);
        for (k, list) in lists.into_iter().enumerate() {
            let (rows, cols) = (u64_at(take(8)?), u64_at(take(8)?));
            let m = n_qubits as i64 / 2 - k as i64;
            let columns: Vec<usize> = (0..labels.len()).filter(|&c| labels[c].m == m).collect();
            if rows != list.len() || cols != columns.len() {
                return Err(Error::Validation(format!("sector {k} has the wrong shape")));
            }
            let data: Vec<f64> = take(rows * cols * 8)?
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect();
            let block = DMatrix::from_vec(rows, cols, data);
            sectors.push(Sector::new(list, columns, &labels, block));
        }
        Ok(Self {
            n_qubits,
            labels,
            sectors,
        })
    }

    /// Loads from `dir` when a cache exists, otherwise builds and saves.
    pub fn load_or_build(dir: &Path, n_qubits: usize, caps: &Caps) -> Result<Self> {
        if cache_paths(dir, n_qubits).0.exists() {
            if let Ok(b) = Self::load(dir, n_qubits) {
                return Ok(b);
            }
        }
        let b = Self::build(n_qubits, caps)?;
        b.save(dir)?;
        Ok(b)
    }
}

impl Sector {
    fn new(indices: Vec<usize>, columns: Vec<usize>, labels: &[SchurLabel], block: DMatrix<f64>) -> Self {
        let mut runs: Vec<(usize, usize, usize)> = Vec::new();
        for (j, &c) in columns.iter().enumerate() {
            let s = labels[c].s;
            match runs.last_mut() {
                Some(r) if r.0 == s => r.2 += 1,
                _ => runs.push((s, j, 1)),
            }
        }
        Self {
            indices,
            columns,
            runs,
            block,
        }
    }
}

const CACHE_MAGIC: &[u8; 8] = b"ASYMSCHR";

#[derive(Serialize, Deserialize)]
struct Sidecar {
    #[serde(rename = "N")]
    n_qubits: usize,
    labels: Vec<(usize, i64, usize)>,
}

fn cache_paths(dir: &Path, n: usize) -> (PathBuf, PathBuf) {
    (dir.join(format!("schur_N{n}.bin")), dir.join(format!("schur_N{n}.json")))
}

/// Joint distribution of total spin and magnetization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorTable {
    /// `p_s`, `s = 0..=N/2`.
    pub p_s: Vec<f64>,
    /// `p_sm[s][m + s]`, `m = −s..=s`.
    pub p_sm: Vec<Vec<f64>>,
    /// `n_s`.
    pub multiplicities: Vec<u128>,
}

impl SectorTable {
    pub fn p(&self, s: usize, m: i64) -> f64 {
        if m.unsigned_abs() as usize > s {
            return 0.0;
        }
        self.p_sm[s][(m + s as i64) as usize]
    }

    pub fn n_qubits(&self) -> usize {
        2 * (self.p_s.len() - 1)
    }
}

pub fn sector_distribution(state: &QuantumState, basis: &SchurBasis) -> Result<SectorTable> {
    basis.check_state(state.n_qubits())?;
    Ok(table_from_blocks(basis, &basis.schur_blocks(state)))
}

fn table_from_blocks(basis: &SchurBasis, blocks: &[DMatrix<C64>]) -> SectorTable {
    let smax = basis.max_spin();
    let mut p_sm: Vec<Vec<f64>> = (0..=smax).map(|s| vec![0.0; 2 * s + 1]).collect();
    for (sec, r) in basis.sectors.iter().zip(blocks) {
        for (j, &c) in sec.columns.iter().enumerate() {
            let l = basis.labels[c];
            p_sm[l.s][(l.m + l.s as i64) as usize] += r[(j, j)].re;
        }
    }
    for row in p_sm.iter_mut() {
        for p in row.iter_mut() {
            *p = p.max(0.0);
        }
    }
    SectorTable {
        p_s: p_sm.iter().map(|r| r.iter().sum()).collect(),
        p_sm,
        multiplicities: (0..=smax).map(|s| multiplicity(basis.n_qubits, s)).collect(),
    }
}

/// `A_s[α, α'] = w(s) Σ_m ρ_{(s,m,α),(s,m,α')}`, one matrix per `s`.
fn reduced_multiplicity_blocks(
    basis: &SchurBasis,
    blocks: &[DMatrix<C64>],
    weight: &dyn Fn(usize) -> f64,
) -> Vec<DMatrix<C64>> {
    let smax = basis.max_spin();
    let mut a: Vec<DMatrix<C64>> = (0..=smax)
        .map(|s| {
            let n = multiplicity(basis.n_qubits, s) as usize;
            DMatrix::zeros(n, n)
        })
        .collect();
    for (sec, r) in basis.sectors.iter().zip(blocks) {
        for &(s, start, len) in &sec.runs {
            a[s] += r.view((start, start), (len, len));
        }
    }
    for (s, m) in a.iter_mut().enumerate() {
        *m *= C64::new(weight(s), 0.0);
    }
    a
}

/// Exact SU(2) twirl: coherences between spins vanish and every irrep space
/// is replaced by its maximally mixed state.
pub fn su2_twirl(dm: &DensityMatrix, basis: &SchurBasis) -> Result<DensityMatrix> {
    su2_twirl_with_weight(dm, basis, &|s| 1.0 / (2 * s + 1) as f64)
}

/// [`su2_twirl`] with the irrep normalization `1/(2s+1)` replaced by `weight(s)`.
/// Exists so verification can inject a faulty normalization.
#[doc(hidden)]
pub fn su2_twirl_with_weight(
    dm: &DensityMatrix,
    basis: &SchurBasis,
    weight: &dyn Fn(usize) -> f64,
) -> Result<DensityMatrix> {
    let n = dm.n_qubits();
    basis.check_state(n)?;
    let state = QuantumState::Mixed(dm.clone());
    let a = reduced_multiplicity_blocks(basis, &basis.schur_blocks(&state), weight);
    let mut out = DMatrix::zeros(dm.dim(), dm.dim());
    for sec in &basis.sectors {
        let d = sec.columns.len();
        let mut t = DMatrix::<C64>::zeros(d, d);
        for &(s, start, len) in &sec.runs {
            t.view_mut((start, start), (len, len)).copy_from(&a[s]);
        }
        let b = sec.block.map(|x| C64::new(x, 0.0));
        let g = &b * t * b.transpose();
        for (x, &i) in sec.indices.iter().enumerate() {
            for (y, &j) in sec.indices.iter().enumerate() {
                out[(i, j)] = g[(x, y)];
            }
        }
    }
    DensityMatrix::from_matrix_unchecked(n, out)
}

/// `S_V(𝒢[ρ])` from the spectra of the `A_s`, each eigenvalue repeated `2s+1` times.
fn twirled_entropy(basis: &SchurBasis, state: &QuantumState) -> Result<f64> {
    let a = reduced_multiplicity_blocks(basis, &basis.schur_blocks(state), &|s| 1.0 / (2 * s + 1) as f64);
    let mut spectrum = Vec::new();
    for (s, m) in a.iter().enumerate() {
        if m.nrows() == 0 {
            continue;
        }
        for e in hermitian_eigenvalues(m) {
            spectrum.extend(std::iter::repeat_n(e, 2 * s + 1));
        }
    }
    spectrum_entropy(&spectrum)
}

/// `Σ_s p_s ln(2s+1) − Σ_{s,m} p_{s,m} ln p_{s,m}`.
pub fn su2_shannon_rhs(t: &SectorTable) -> f64 {
    let dims: f64 = t
        .p_s
        .iter()
        .enumerate()
        .map(|(s, p)| p * ((2 * s + 1) as f64).ln())
        .sum();
    let flat: Vec<f64> = t.p_sm.iter().flatten().copied().collect();
    dims + shannon(&flat)
}

/// `ln Σ_s (2s+1) min(n_s, 2s+1)`.
pub fn support_bound(n_qubits: usize) -> f64 {
    let total: u128 = (0..=n_qubits / 2)
        .map(|s| (2 * s + 1) as u128 * multiplicity(n_qubits, s).min((2 * s + 1) as u128))
        .sum();
    (total as f64).ln()
}

/// SU(2) asymmetry with the spin-resolved Shannon bound and the support bound.
pub fn su2_asymmetry(state: &QuantumState, basis: &SchurBasis, caps: &Caps) -> Result<AsymmetryReport> {
    let n = state.n_qubits();
    basis.check_state(n)?;
    let s_twirled = twirled_entropy(basis, state)?;
    let delta_s = match state {
        QuantumState::Pure(_) => s_twirled,
        QuantumState::Mixed(rho) => {
            caps.check_density(n)?;
            s_twirled - von_neumann_entropy(rho)?
        }
    };
    let table = sector_distribution(state, basis)?;
    let rhs = su2_shannon_rhs(&table);
    let support = support_bound(n);
    let flat: Vec<f64> = table.p_sm.iter().flatten().copied().collect();
    let mut margins = BTreeMap::new();
    margins.insert("su2_shannon".to_string(), rhs - delta_s);
    margins.insert("support".to_string(), support - delta_s);
    Ok(AsymmetryReport {
        group: Group::Su2,
        n_qubits: n,
        delta_s,
        shannon: shannon(&flat),
        variance: charge_distribution(state).variance(),
        bounds: Bounds {
            su2_shannon: Some(rhs),
            support: Some(support),
            ..Bounds::default()
        },
        margins,
    })
}

/// `(⟨S^x⟩, ⟨S^y⟩, ⟨S^z⟩)`.
pub fn magnetization(state: &QuantumState) -> Result<Vector3<f64>> {
    let n = state.n_qubits();
    let mut v = Vector3::zeros();
    for (i, p) in Pauli::NONTRIVIAL.iter().enumerate() {
        v[i] = expectation(state, &Observable::spin(n, *p))?.re;
    }
    Ok(v)
}

/// Single-qubit rotation taking the unit vector `v` to `+z` under `u σ·n u†`.
pub fn alignment_rotation(v: &Vector3<f64>) -> Matrix2<C64> {
    let id = Matrix2::identity();
    let norm = v.norm();
    if norm < 1e-12 {
        return id;
    }
    let n = v / norm;
    let z = Vector3::z();
    let cross = n.cross(&z);
    let (axis, theta) = if cross.norm() < 1e-15 {
        if n.z > 0.0 {
            return id;
        }
        (Vector3::x(), std::f64::consts::PI)
    } else {
        (cross.normalize(), n.z.clamp(-1.0, 1.0).acos())
    };
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let i = C64::new(0.0, 1.0);
    // cos(θ/2) 1 − i sin(θ/2) k·σ.
    Matrix2::new(
        C64::new(c, 0.0) - i * s * axis.z,
        -i * s * C64::new(axis.x, -axis.y),
        -i * s * C64::new(axis.x, axis.y),
        C64::new(c, 0.0) + i * s * axis.z,
    )
}

/// Rotates every qubit by the same `u` so the magnetization points along `+z`.
pub fn zero_transverse_rotation(state: &QuantumState) -> Result<(QuantumState, Matrix2<C64>)> {
    let u = alignment_rotation(&magnetization(state)?);
    let mut out = state.clone();
    if u != Matrix2::identity() {
        out.apply_global(&u, crate::exec::Exec::default());
    }
    Ok((out, u))
}

/// `c(Λ) = (3/2) z_Λ`.
pub fn casimir_constant(g: &LatticeGeometry, range: usize) -> f64 {
    1.5 * g.neighborhood_cardinality(range) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasimirReport {
    /// `⟨S²⟩ − ⟨(S^z)²⟩`.
    pub lhs: f64,
    /// `⟨S²⟩ − Σ_α ⟨S^α⟩²`.
    pub precursor: f64,
    /// `c(Λ) N`.
    pub bound: f64,
    pub constraint_holds: bool,
    pub precursor_holds: bool,
}

impl CasimirReport {
    pub fn passed(&self) -> bool {
        self.constraint_holds && self.precursor_holds
    }
}

/// Checks `⟨S²⟩ − ⟨(S^z)²⟩ ≤ c(Λ)N` and `⟨S²⟩ − Σ_α⟨S^α⟩² ≤ c(Λ)N` on a
/// gauge-fixed state.
pub fn casimir_constraint_check(
    state: &QuantumState,
    range: usize,
    g: &LatticeGeometry,
) -> Result<CasimirReport> {
    let n = state.n_qubits();
    if g.total_sites() != n {
        return arg(format!("lattice has {} sites, state has {n} qubits", g.total_sites()));
    }
    let v = magnetization(state)?;
    if v.x.abs() > 1e-6 || v.y.abs() > 1e-6 {
        return Err(Error::Validation(format!(
            "transverse magnetization ({:.3e}, {:.3e}) exceeds 1e-6; rotate first",
            v.x, v.y
        )));
    }
    let s2 = expectation(state, &Observable::casimir(n))?.re;
    let sz2 = expectation(state, &Observable::spin_squared_component(n, Pauli::Z))?.re;
    let bound = casimir_constant(g, range) * n as f64;
    let lhs = s2 - sz2;
    let precursor = s2 - v.norm_squared();
    Ok(CasimirReport {
        lhs,
        precursor,
        bound,
        constraint_holds: lhs <= bound + crate::u1::BOUND_SLACK,
        precursor_holds: precursor <= bound + crate::u1::BOUND_SLACK,
    })
}
