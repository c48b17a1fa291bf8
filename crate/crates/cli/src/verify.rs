//! Seeded invariant batteries behind `asymlab verify`.
//!
//! Every check reduces to a margin: the distance to failure, negative when
//! violated. Equality checks report `tolerance − error`.

use asymlab::closed_forms::{
    dicke_state, kink_distribution, poisson_binomial, rotated_dicke_coefficients, rotated_dicke_distribution, Axis,
};
use asymlab::clustering::{operator_spreading_range, variance_bound_check, verify_cluster_property};
use asymlab::oracles::{dense_observable, dense_spin_distribution, dense_u1_asymmetry, haar_twirl};
use asymlab::quantum::random::{haar_qubit_unitary, random_density_matrix, random_qubit, random_statevector};
use asymlab::quantum::{
    apply_channel, apply_circuit, expectation, product_state, random_brickwork, Caps, DensityMatrix, KrausChannel,
    LocalState, Observable, QuantumState,
};
use asymlab::states::kink;
use asymlab::su2::{
    casimir_constraint_check, multiplicity, sector_distribution, su2_asymmetry, su2_twirl, su2_twirl_with_weight,
    zero_transverse_rotation, SchurBasis,
};
use asymlab::u1::{
    charge_distribution, generating_function, invert_generating_function, shannon_entropy, u1_asymmetry, u1_twirl,
    BOUND_SLACK,
};
use asymlab::{Exec, LatticeGeometry};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Deliberate defects for checking that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// SU(2) twirl normalized by `1/(2s)` instead of `1/(2s+1)`.
    TwirlWeight,
}

impl Fault {
    fn twirl_weight(self) -> impl Fn(usize) -> f64 {
        move |s| match self {
            Fault::None => 1.0 / (2 * s + 1) as f64,
            Fault::TwirlWeight => 1.0 / (2 * s) as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub n: usize,
    pub inputs: String,
    pub margin: f64,
    pub passed: bool,
}

#[derive(Default)]
struct Battery {
    checks: Vec<Check>,
}

impl Battery {
    /// Records `margin`; NaN fails.
    fn push(&mut self, module: &'static str, name: &'static str, n: usize, inputs: String, margin: f64) {
        self.checks.push(Check {
            module,
            name,
            n,
            inputs,
            margin,
            passed: margin >= -BOUND_SLACK,
        });
    }

    fn equal(&mut self, module: &'static str, name: &'static str, n: usize, inputs: String, err: f64, tol: f64) {
        self.push(module, name, n, inputs, tol - err);
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_product(n: usize, rng: &mut ChaCha8Rng) -> QuantumState {
    let locals: Vec<LocalState> = (0..n).map(|_| LocalState::Pure(random_qubit(rng))).collect();
    product_state(&locals).expect("valid product")
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn lattice_checks(b: &mut Battery, seed: u64) {
    use rand::Rng;
    let mut rng = rng_for(seed, 1);
    let g = LatticeGeometry::new(2, 5).unwrap();
    let mut triangle = f64::INFINITY;
    let mut symmetry: f64 = 0.0;
    for _ in 0..200 {
        let [i, j, k] = [0; 3].map(|_| rng.random_range(0..25));
        let d = |a, c| g.distance(a, c).unwrap() as f64;
        triangle = triangle.min(d(i, j) + d(j, k) - d(i, k));
        symmetry = symmetry.max((d(i, j) - d(j, i)).abs());
    }
    b.push("lattice", "triangle inequality", 25, "200 random triples on 5x5".into(), triangle);
    b.equal("lattice", "distance symmetry", 25, "200 random pairs on 5x5".into(), symmetry, 0.0);
    let chain = LatticeGeometry::chain(21);
    let err = (0..=10)
        .map(|r| (chain.neighborhood_cardinality(r) as f64 - (2 * r + 1) as f64).abs())
        .fold(0.0, f64::max);
    b.equal("lattice", "ball size 2r+1", 21, "ring of 21".into(), err, 0.0);
}

fn quantum_checks(b: &mut Battery, seed: u64) {
    let mut rng = rng_for(seed, 2);
    let g = LatticeGeometry::chain(12);
    let c = random_brickwork(&g, 3, &mut rng);
    let psi = apply_circuit(&random_product(12, &mut rng), &c).unwrap();
    let norm = match &psi {
        QuantumState::Pure(v) => v.norm_sqr(),
        QuantumState::Mixed(_) => unreachable!(),
    };
    b.equal("quantum-core", "unitary circuits preserve norm", 12, "depth 3".into(), (norm - 1.0).abs(), 1e-12);
    let rho = random_density_matrix(5, 3, &mut rng);
    let out = apply_channel(&rho, &KrausChannel::depolarizing(2, 0.3).unwrap()).unwrap();
    b.equal("quantum-core", "channels preserve trace", 5, "depolarizing p = 0.3".into(), (out.trace() - 1.0).abs(), 1e-12);
    let q = expectation(&psi, &Observable::charge(12)).unwrap();
    let mean = charge_distribution(&psi).mean();
    b.equal("quantum-core", "charge expectation is the mean", 12, "circuit state".into(), (q.re - mean).abs() + q.im.abs(), 1e-10);
}

fn u1_checks(b: &mut Battery, seed: u64) {
    let caps = Caps::default();
    let mut rng = rng_for(seed, 3);
    let mut tightest = [f64::INFINITY; 3];
    for (t, n) in [6usize, 8, 10, 12].into_iter().cycle().take(12).enumerate() {
        let g = LatticeGeometry::chain(n);
        let c = random_brickwork(&g, 1 + t % 3, &mut rng);
        let state = apply_circuit(&random_product(n, &mut rng), &c).unwrap();
        let r = u1_asymmetry(&state, None, &g, &caps).unwrap();
        tightest[0] = tightest[0].min(r.delta_s);
        tightest[1] = tightest[1].min(r.margins["log_n_plus_1"]);
        tightest[2] = tightest[2].min(r.margins.get("massey").copied().unwrap_or(f64::INFINITY));
    }
    let inputs = || "12 circuit states, N = 6..12".to_string();
    b.push("u1-asymmetry", "nonnegativity", 12, inputs(), tightest[0]);
    b.push("u1-asymmetry", "ln(N+1) bound", 12, inputs(), tightest[1]);
    b.push("u1-asymmetry", "entropy-variance bound", 12, inputs(), tightest[2]);

    let rho = random_density_matrix(4, 2, &mut rng);
    let once = u1_twirl(&rho);
    let err = (u1_twirl(&once).matrix() - once.matrix()).camax();
    b.equal("u1-asymmetry", "twirl idempotence", 4, "rank-2 mixed".into(), err, 1e-15);
    b.equal("u1-asymmetry", "twirl trace", 4, "rank-2 mixed".into(), (once.trace() - 1.0).abs(), 1e-12);

    let d = charge_distribution(&random_statevector(9, &mut rng).into());
    let samples: Vec<_> = (0..10).map(|k| generating_function(&d, 2.0 * std::f64::consts::PI * k as f64 / 10.0)).collect();
    let back = invert_generating_function(&samples);
    b.equal("u1-asymmetry", "generating function inversion", 9, "random state".into(), max_abs_diff(&back, d.probs()), 1e-12);
}

fn su2_checks(b: &mut Battery, seed: u64, fault: Fault) {
    let caps = Caps::default();
    let mut rng = rng_for(seed, 4);
    for n in (2..=12).step_by(2) {
        let total: u128 = (0..=n / 2).map(|s| (2 * s as u128 + 1) * multiplicity(n, s)).sum();
        b.equal("su2-asymmetry", "irrep dimension count", n, format!("N = {n}"), total.abs_diff(1 << n) as f64, 0.0);
    }
    let weight = fault.twirl_weight();
    for n in [2usize, 4, 6, 8] {
        let basis = SchurBasis::cached(n, &caps).unwrap();
        b.equal("su2-asymmetry", "Schur unitarity", n, format!("N = {n}"), basis.unitarity_error(), 1e-10);
        let rho = random_density_matrix(n, 2, &mut rng);
        let once = su2_twirl_with_weight(&rho, &basis, &weight).unwrap();
        let twice = su2_twirl_with_weight(&once, &basis, &weight).unwrap();
        let err = (twice.matrix() - once.matrix()).camax();
        b.equal("su2-asymmetry", "twirl idempotence", n, "rank-2 mixed".into(), err, 1e-10);
        b.equal("su2-asymmetry", "twirl trace", n, "rank-2 mixed".into(), (once.trace() - 1.0).abs(), 1e-10);

        let mut shannon = f64::INFINITY;
        let mut support = f64::INFINITY;
        let mut casimir = f64::INFINITY;
        let mut invariance: f64 = 0.0;
        let g = LatticeGeometry::chain(n);
        for t in 0..5 {
            let depth = 1 + t % 3;
            let c = random_brickwork(&g, depth, &mut rng);
            let state = apply_circuit(&random_product(n, &mut rng), &c).unwrap();
            let r = su2_asymmetry(&state, &basis, &caps).unwrap();
            shannon = shannon.min(r.margins["su2_shannon"]);
            support = support.min(r.margins["support"]);
            let (fixed, _) = zero_transverse_rotation(&state).unwrap();
            let cas = casimir_constraint_check(&fixed, 2 * depth, &g).unwrap();
            casimir = casimir.min((cas.bound - cas.lhs).min(cas.bound - cas.precursor));
            let mut rotated = state.clone();
            rotated.apply_global(&haar_qubit_unitary(&mut rng), Exec::default());
            let again = su2_asymmetry(&rotated, &basis, &caps).unwrap();
            invariance = invariance.max((again.delta_s - r.delta_s).abs());
        }
        let inputs = || "5 circuit states, depth 1..3".to_string();
        b.push("su2-asymmetry", "spin-resolved entropy bound", n, inputs(), shannon);
        b.push("su2-asymmetry", "support bound", n, inputs(), support);
        b.push("su2-asymmetry", "Casimir constraint", n, inputs(), casimir);
        b.equal("su2-asymmetry", "invariance under u^N", n, inputs(), invariance, 1e-9);
    }
}

fn closed_form_checks(b: &mut Battery) {
    let caps = Caps::default();
    let mut worst: f64 = 0.0;
    for n in 1..=10 {
        for k in 0..=n {
            let sv = charge_distribution(&dicke_state(n, k, Axis::X, &caps).unwrap().into());
            worst = worst.max(max_abs_diff(sv.probs(), rotated_dicke_distribution(n, k).unwrap().probs()));
        }
    }
    b.equal("closed-forms", "rotated Dicke vs statevector", 10, "all k, N <= 10".into(), worst, 1e-10);
    let mut worst: f64 = 0.0;
    for n in 1..=12 {
        let sv = charge_distribution(&kink(n, &caps).unwrap().into());
        worst = worst.max(max_abs_diff(sv.probs(), kink_distribution(n).unwrap().probs()));
    }
    b.equal("closed-forms", "kink vs statevector", 12, "N <= 12".into(), worst, 1e-12);
    let x: Vec<f64> = (0..10).map(|i| 0.05 + 0.09 * i as f64).collect();
    let locals: Vec<LocalState> = x.iter().map(|&xi| LocalState::bernoulli(xi)).collect();
    let sv = charge_distribution(&product_state(&locals).unwrap());
    let err = max_abs_diff(sv.probs(), poisson_binomial(&x).unwrap().probs());
    b.equal("closed-forms", "Poisson binomial vs statevector", 10, "x_i = 0.05 + 0.09 i".into(), err, 1e-12);
    for n in [1_000usize, 100_000] {
        let phi = rotated_dicke_coefficients(n, n / 3).unwrap();
        let norm: f64 = phi.iter().map(|p| p * p).sum();
        b.equal("closed-forms", "coefficient normalization", n, format!("k = {}", n / 3), (norm - 1.0).abs(), 1e-10);
    }
    let n = 1_000;
    let d = poisson_binomial(&vec![0.5; n]).unwrap();
    let sigma = (n as f64 / 4.0).sqrt();
    let sup = d
        .probs()
        .iter()
        .enumerate()
        .map(|(q, p)| {
            let z = (q as f64 - n as f64 / 2.0) / sigma;
            (p - (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())).abs()
        })
        .fold(0.0, f64::max);
    b.push("closed-forms", "Gaussian regime", n, "x_i = 1/2".into(), 0.02 / sigma - sup);
}

fn clustering_checks(b: &mut Battery, seed: u64) {
    let caps = Caps::default();
    let mut rng = rng_for(seed, 5);
    for (dim, m) in [(1usize, 10usize), (2, 3)] {
        let g = LatticeGeometry::new(dim, m).unwrap();
        let n = g.total_sites();
        for depth in 1..=3 {
            let c = random_brickwork(&g, depth, &mut rng);
            let state = apply_circuit(&random_product(n, &mut rng), &c).unwrap();
            let lambda = operator_spreading_range(&c, &g, &caps).unwrap();
            let inputs = format!("{dim}D, M = {m}, depth {depth}");
            b.push("clustering-verify", "spreading within depth", n, inputs.clone(), depth as f64 - lambda as f64);
            let r = verify_cluster_property(&state, 2 * depth, &g, 1e-9).unwrap();
            b.push("clustering-verify", "effective range within 2D", n, inputs.clone(), (2 * depth) as f64 - r.effective_range as f64);
            let v = variance_bound_check(&state, 2 * depth, &g).unwrap();
            b.push("clustering-verify", "variance bound", n, inputs, v.margin);
        }
    }
}

/// Invariants of every module, seeded by `seed`.
pub fn bound_suite(seed: u64, fault: Fault) -> Vec<Check> {
    let mut b = Battery::default();
    lattice_checks(&mut b, seed);
    quantum_checks(&mut b, seed);
    u1_checks(&mut b, seed);
    su2_checks(&mut b, seed, fault);
    closed_form_checks(&mut b);
    clustering_checks(&mut b, seed);
    b.checks
}

/// Fast paths against the dense reference implementations.
pub fn oracle_suite(seed: u64, fault: Fault) -> Vec<Check> {
    let caps = Caps::default();
    let mut b = Battery::default();
    let mut rng = rng_for(seed, 6);
    for n in 1..=4 {
        let rho = random_density_matrix(n, 2, &mut rng);
        let fast = u1_asymmetry(&QuantumState::Mixed(rho.clone()), None, &LatticeGeometry::chain(n), &caps)
            .unwrap()
            .delta_s;
        b.equal("oracles", "U(1) asymmetry vs dense projectors", n, "rank-2 mixed".into(), (fast - dense_u1_asymmetry(&rho)).abs(), 1e-10);
    }
    let weight = fault.twirl_weight();
    for n in [2usize, 4, 6] {
        let basis = SchurBasis::cached(n, &caps).unwrap();
        let state: QuantumState = random_statevector(n, &mut rng).into();
        let table = sector_distribution(&state, &basis).unwrap();
        let err = dense_spin_distribution(&state.to_density())
            .into_iter()
            .map(|(s, m, p)| (table.p(s, m) - p).abs())
            .fold(0.0, f64::max);
        b.equal("oracles", "spin sectors vs dense Casimir", n, "random pure".into(), err, 1e-10);
        if n <= 4 {
            let rho = random_density_matrix(n, 2, &mut rng);
            let exact = su2_twirl_with_weight(&rho, &basis, &weight).unwrap();
            let quad = haar_twirl(&rho, 1e-10).unwrap();
            b.equal("oracles", "SU(2) twirl vs Haar quadrature", n, "rank-2 mixed".into(), (exact.matrix() - quad.matrix()).camax(), 1e-6);
        }
    }
    let n = 6;
    let state: QuantumState = random_statevector(n, &mut rng).into();
    let rho = state.to_density();
    let dense = dense_observable(n, &Observable::casimir(n));
    let direct = (rho.matrix() * &dense).trace().re;
    let via = expectation(&state, &Observable::casimir(n)).unwrap().re;
    b.equal("oracles", "Casimir expectation vs dense", n, "random pure".into(), (direct - via).abs(), 1e-10);
    let basis = SchurBasis::cached(n, &caps).unwrap();
    let t = su2_twirl(&DensityMatrix::maximally_mixed(n), &basis).unwrap();
    let err = (t.matrix() - DensityMatrix::maximally_mixed(n).matrix()).camax();
    b.equal("oracles", "twirl fixes the maximally mixed state", n, String::new(), err, 1e-12);
    let x = [0.2, 0.5, 0.9, 0.7];
    let d = poisson_binomial(&x).unwrap();
    let h = shannon_entropy(&d);
    let locals: Vec<LocalState> = x.iter().map(|&v| LocalState::bernoulli(v)).collect();
    let sv = shannon_entropy(&charge_distribution(&product_state(&locals).unwrap()));
    b.equal("oracles", "product entropy vs statevector", 4, format!("{x:?}"), (h - sv).abs(), 1e-12);
    b.checks
}

/// Fixed-width check matrix.
pub fn render(checks: &[Check]) -> String {
    let mut out = format!("{:<18} {:<40} {:>7} {:>12}  {}\n", "module", "check", "N", "margin", "status");
    for c in checks {
        out.push_str(&format!(
            "{:<18} {:<40} {:>7} {:>12.3e}  {}{}\n",
            c.module,
            c.name,
            c.n,
            c.margin,
            if c.passed { "PASS" } else { "FAIL" },
            if c.passed { String::new() } else { format!(" ({})", c.inputs) }
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    out
}
