use asymlab::closed_forms::{ln_binomial, poisson_binomial, product_generating_function, rotated_dicke_coefficients};
use asymlab::clustering::{verify_cluster_property, verify_cluster_property_with};
use asymlab::quantum::random::{haar_qubit_unitary, random_density_matrix, random_qubit, random_statevector};
use asymlab::quantum::{product_state, Caps, LocalState, QuantumState};
use asymlab::su2::{su2_asymmetry, su2_twirl, SchurBasis};
use asymlab::u1::{
    charge_distribution_with, generating_function, massey_bound, shannon_entropy, u1_asymmetry, u1_twirl,
    ChargeDistribution,
};
use asymlab::{Exec, LatticeGeometry};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_distance_is_a_metric(d in 1usize..4, m in 1usize..7, a in 0usize..1000, b in 0usize..1000, c in 0usize..1000) {
        let g = LatticeGeometry::new(d, m).unwrap();
        let n = g.total_sites();
        let (a, b, c) = (a % n, b % n, c % n);
        let dist = |x, y| g.distance(x, y).unwrap();
        prop_assert_eq!(dist(a, b), dist(b, a));
        prop_assert_eq!(dist(a, a), 0);
        prop_assert!(dist(a, c) <= dist(a, b) + dist(b, c));
        prop_assert!(dist(a, b) <= g.diameter());
    }

    #[test]
    fn pure_asymmetry_between_zero_and_log_n_plus_1(n in 1usize..10, seed in any::<u64>()) {
        let state: QuantumState = random_statevector(n, &mut rng(seed)).into();
        let r = u1_asymmetry(&state, None, &LatticeGeometry::chain(n), &Caps::default()).unwrap();
        prop_assert!(r.delta_s >= -1e-12);
        prop_assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn mixed_asymmetry_is_nonnegative_and_twirl_is_a_projection(n in 1usize..5, rank in 1usize..5, seed in any::<u64>()) {
        let rho = random_density_matrix(n, rank.min(1 << n), &mut rng(seed));
        let ds = u1_asymmetry(&QuantumState::Mixed(rho.clone()), None, &LatticeGeometry::chain(n), &Caps::default())
            .unwrap()
            .delta_s;
        prop_assert!(ds >= -1e-10);
        let once = u1_twirl(&rho);
        prop_assert!((u1_twirl(&once).matrix() - once.matrix()).camax() == 0.0);
        prop_assert!((once.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_obeys_the_variance_bound(weights in prop::collection::vec(0.0f64..1.0, 2..40)) {
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 1e-6);
        let d = ChargeDistribution::new(weights.iter().map(|w| w / total).collect()).unwrap();
        prop_assume!(d.variance() > 1e-9);
        prop_assert!(shannon_entropy(&d) < massey_bound(d.variance()).unwrap());
    }

    #[test]
    fn poisson_binomial_moments(x in prop::collection::vec(0.0f64..=1.0, 1..60), alpha in -3.2f64..3.2) {
        let d = poisson_binomial(&x).unwrap();
        let mean: f64 = x.iter().sum();
        let var: f64 = x.iter().map(|v| v * (1.0 - v)).sum();
        prop_assert!((d.mean() - mean).abs() < 1e-9);
        prop_assert!((d.variance() - var).abs() < 1e-8);
        prop_assert!((generating_function(&d, alpha) - product_generating_function(&x, alpha)).norm() < 1e-10);
    }

    #[test]
    fn rotated_dicke_coefficients_are_unit_and_mirrored(n in 1usize..400, k_frac in 0.0f64..=1.0) {
        let k = (k_frac * n as f64).round() as usize;
        let phi = rotated_dicke_coefficients(n, k).unwrap();
        let norm: f64 = phi.iter().map(|p| p * p).sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        for i in 0..=n {
            prop_assert!((phi[n - i] - sign * phi[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn ln_binomial_symmetry(n in 0u64..5000, k_frac in 0.0f64..=1.0) {
        let k = (k_frac * n as f64).round() as u64;
        prop_assert_eq!(ln_binomial(n, k), ln_binomial(n, n - k));
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise(n in 2usize..15, a in 0usize..14, seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = random_statevector(n, &mut r);
        let state: QuantumState = psi.clone().into();
        let seq = charge_distribution_with(&state, Exec::Sequential);
        let par = charge_distribution_with(&state, Exec::Parallel);
        prop_assert_eq!(seq.probs(), par.probs());
        let site = a % (n - 1);
        let u = haar_qubit_unitary(&mut r);
        let op = asymlab::quantum::gates::charge_conserving(0.3, -1.1, &u);
        let (mut s, mut p) = (psi.clone(), psi);
        s.apply_local(&[site, site + 1], &op, Exec::Sequential).unwrap();
        p.apply_local(&[site, site + 1], &op, Exec::Parallel).unwrap();
        prop_assert_eq!(s.amplitudes(), p.amplitudes());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pair_scan_is_mode_independent(n in 2usize..9, seed in any::<u64>()) {
        let state: QuantumState = random_statevector(n, &mut rng(seed)).into();
        let g = LatticeGeometry::chain(n);
        let s = verify_cluster_property_with(&state, 1, &g, 1e-10, Exec::Sequential).unwrap();
        let p = verify_cluster_property_with(&state, 1, &g, 1e-10, Exec::Parallel).unwrap();
        prop_assert_eq!(s, p);
    }

    #[test]
    fn product_states_cluster_at_range_zero(n in 2usize..9, seed in any::<u64>()) {
        let mut r = rng(seed);
        let locals: Vec<LocalState> = (0..n).map(|_| LocalState::Pure(random_qubit(&mut r))).collect();
        let report = verify_cluster_property(&product_state(&locals).unwrap(), 0, &LatticeGeometry::chain(n), 1e-10).unwrap();
        prop_assert!(report.clusters());
        prop_assert_eq!(report.effective_range, 0);
    }

    #[test]
    fn su2_twirl_is_covariant_and_asymmetry_invariant(half in 1usize..3, seed in any::<u64>()) {
        let n = 2 * half;
        let caps = Caps::default();
        let basis = SchurBasis::cached(n, &caps).unwrap();
        let mut r = rng(seed);
        let rho = random_density_matrix(n, 2, &mut r);
        let u = haar_qubit_unitary(&mut r);
        let mut rotated = rho.clone();
        rotated.apply_global(&u, Exec::default());
        let mut twirled_then_rotated = su2_twirl(&rho, &basis).unwrap();
        twirled_then_rotated.apply_global(&u, Exec::default());
        let rotated_then_twirled = su2_twirl(&rotated, &basis).unwrap();
        // The twirl output commutes with every u^N, so both orders agree with the plain twirl.
        prop_assert!((twirled_then_rotated.matrix() - rotated_then_twirled.matrix()).camax() < 1e-10);
        let a = su2_asymmetry(&QuantumState::Mixed(rho), &basis, &caps).unwrap().delta_s;
        let b = su2_asymmetry(&QuantumState::Mixed(rotated), &basis, &caps).unwrap().delta_s;
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!(a >= -1e-10);
    }
}
