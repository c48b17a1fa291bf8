//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! for each and exits nonzero if any fails or overruns its time budget.

use std::time::{Duration, Instant};

use asymlab::closed_forms::{
    asymptotic_fit, dicke_half_charge_prob, dicke_half_distribution, dicke_intercept_candidates,
    kink_distribution, poisson_binomial, rotated_dicke_coefficients,
};
use asymlab::clustering::{operator_spreading_range, variance_bound_check, verify_cluster_property};
use asymlab::oracles::haar_twirl;
use asymlab::quantum::gates::charge_conserving;
use asymlab::quantum::random::{haar_qubit_unitary, random_density_matrix, random_qubit};
use asymlab::quantum::{
    apply_channel, apply_circuit, product_state, random_brickwork, BrickworkCircuit, Caps, DensityMatrix, Gate,
    KrausChannel, LocalState, QuantumState,
};
use asymlab::states::{dicke_state, ghz, kink, Axis};
use asymlab::su2::{
    binomial_exact, casimir_constraint_check, magnetization, multiplicity, su2_asymmetry, su2_twirl,
    zero_transverse_rotation, SchurBasis,
};
use asymlab::u1::{
    charge_distribution, report_from_distribution, shannon_entropy, u1_asymmetric_residual, u1_asymmetry,
    u1_twirl, ChargeDistribution,
};
use asymlab::{Exec, LatticeGeometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_product(n: usize, rng: &mut ChaCha8Rng) -> QuantumState {
    let locals: Vec<LocalState> = (0..n).map(|_| LocalState::Pure(random_qubit(rng))).collect();
    product_state(&locals).expect("valid product")
}

fn kink_maximality() -> Outcome {
    let caps = Caps::default();
    for n in [4usize, 10, 1_000, 1_000_000] {
        let d = kink_distribution(n).map_err(|e| e.to_string())?;
        let p = d.probs();
        ensure(p[0] == 0.0 && p[1..].iter().all(|&x| x == 1.0 / n as f64), || {
            format!("kink distribution at N = {n} is not flat over 1..=N")
        })?;
        let h = shannon_entropy(&d);
        ensure((h - (n as f64).ln()).abs() <= 1e-12 * (n as f64).ln(), || {
            format!("H = {h} at N = {n}, expected ln N")
        })?;
    }
    for n in 1..=14 {
        let sv = charge_distribution(&kink(n, &caps).map_err(|e| e.to_string())?.into());
        let cf = kink_distribution(n).unwrap();
        let err = sv.probs().iter().zip(cf.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(err <= 1e-12, || format!("statevector kink differs by {err:e} at N = {n}"))?;
    }
    for n in [4usize, 10, 1_000, 1_000_000] {
        let flat = ChargeDistribution::flat(n);
        let h = shannon_entropy(&flat);
        let r = report_from_distribution(n, h, &flat, None);
        let margin = r.margins["log_n_plus_1"];
        ensure(margin.abs() <= 1e-12 * h, || format!("flat(N+1) misses ln(N+1) by {margin:e} at N = {n}"))?;
    }
    Ok("flat over N charges, H = ln N up to N = 1e6; flat(N+1) saturates ln(N+1)".into())
}

fn rotated_dicke_exactness() -> Outcome {
    let caps = Caps::default();
    let phi = rotated_dicke_coefficients(3, 1).map_err(|e| e.to_string())?;
    let want = [(3.0f64 / 8.0).sqrt(), (1.0f64 / 8.0).sqrt(), -(1.0f64 / 8.0).sqrt(), -(3.0f64 / 8.0).sqrt()];
    for (a, b) in phi.iter().zip(want) {
        ensure((a - b).abs() <= 1e-12, || format!("N = 3 coefficients {phi:?}"))?;
    }
    let mut worst: f64 = 0.0;
    for n in (2..=14).step_by(2) {
        let psi = dicke_state(n, n / 2, Axis::X, &caps).map_err(|e| e.to_string())?;
        let d = charge_distribution(&psi.into());
        for (q, &p) in d.probs().iter().enumerate() {
            if q % 2 == 1 {
                ensure(p < 1e-12, || format!("odd charge {q} has weight {p:e} at N = {n}"))?;
            }
            let err = (p - dicke_half_charge_prob(n / 2, q)).abs();
            worst = worst.max(err);
            ensure(err <= 1e-10, || format!("p({q}) off by {err:e} at N = {n}"))?;
        }
    }
    Ok(format!("N = 3 coefficients exact, brute force N <= 14 max error {worst:.1e}"))
}

fn dicke_entropy(n: usize) -> Result<(f64, f64), String> {
    let d = dicke_half_distribution(n / 2).map_err(|e| e.to_string())?;
    Ok((n as f64, shannon_entropy(&d)))
}

fn dicke_scaling() -> Outcome {
    let points = [100usize, 1_000, 10_000, 100_000]
        .into_iter()
        .map(dicke_entropy)
        .collect::<Result<Vec<_>, _>>()?;
    let fit = asymptotic_fit(&points).map_err(|e| e.to_string())?;
    // Diagnostic only: the same fit one decade further out.
    let far = [1_000usize, 10_000, 100_000, 1_000_000]
        .into_iter()
        .map(dicke_entropy)
        .collect::<Result<Vec<_>, _>>()?;
    let far = asymptotic_fit(&far).map_err(|e| e.to_string())?;
    let candidates: Vec<String> = dicke_intercept_candidates()
        .iter()
        .map(|(name, v)| format!("{name} = {v:.4}"))
        .collect();
    let detail = format!(
        "slope {:.4}, intercept {:.4} over 1e2..1e5 (1e3..1e6: slope {:.4}, intercept {:.4}); candidates {}",
        fit.slope,
        fit.intercept,
        far.slope,
        far.intercept,
        candidates.join(", ")
    );
    ensure((fit.slope - 1.0).abs() <= 0.01, || format!("{detail}; slope outside 1 ± 0.01"))?;
    Ok(detail)
}

fn product_scaling() -> Outcome {
    let mut points = Vec::new();
    for n in [100usize, 316, 1_000, 3_162, 10_000] {
        let d = poisson_binomial(&vec![0.5; n]).map_err(|e| e.to_string())?;
        points.push((n as f64, shannon_entropy(&d)));
    }
    let fit = asymptotic_fit(&points).map_err(|e| e.to_string())?;
    ensure((fit.slope - 0.5).abs() <= 0.01, || format!("slope {}", fit.slope))?;

    let h_max = shannon_entropy(&poisson_binomial(&[0.5; 8]).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut closest = f64::INFINITY;
    for t in 0..10_000 {
        // Half the draws are small perturbations of 1/2, half are anywhere in [0, 1].
        let scale = if t % 2 == 0 { 0.05 } else { 0.5 };
        let x: Vec<f64> = (0..8)
            .map(|_| (0.5 + scale * (2.0 * rng.random::<f64>() - 1.0)).clamp(0.0, 1.0))
            .collect();
        let h = shannon_entropy(&poisson_binomial(&x).unwrap());
        ensure(h <= h_max + 1e-12, || format!("H = {h} exceeds the uniform value {h_max} at x = {x:?}"))?;
        closest = closest.min(h_max - h);
    }
    Ok(format!(
        "slope {:.4}; uniform 1/2 is maximal at N = 8 over 1e4 draws (closest gap {closest:.1e})",
        fit.slope
    ))
}

fn abelian_bound_chain() -> Outcome {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let shapes = [(1, 6), (1, 8), (1, 10), (1, 12), (1, 14), (2, 2), (2, 3)];
    let mut worst_margin = f64::INFINITY;
    for c in 0..50 {
        let (dim, m) = shapes[c % shapes.len()];
        let depth = 1 + c % 3;
        let g = LatticeGeometry::new(dim, m).map_err(|e| e.to_string())?;
        let n = g.total_sites();
        let circuit = random_brickwork(&g, depth, &mut rng);
        let state = apply_circuit(&random_product(n, &mut rng), &circuit).map_err(|e| e.to_string())?;
        let range = 2 * depth;
        let lambda = operator_spreading_range(&circuit, &g, &caps).map_err(|e| e.to_string())?;
        ensure(lambda <= depth, || format!("circuit {c}: spreading {lambda} > depth {depth}"))?;
        let cluster = verify_cluster_property(&state, range, &g, 1e-9).map_err(|e| e.to_string())?;
        ensure(cluster.effective_range <= range, || {
            format!("circuit {c}: effective range {} > {range}", cluster.effective_range)
        })?;
        let report = u1_asymmetry(&state, Some(range), &g, &caps).map_err(|e| e.to_string())?;
        ensure(report.margins.contains_key("massey"), || format!("circuit {c}: zero variance"))?;
        // The entropy bound is strict.
        ensure(report.margins["massey"] > 0.0, || format!("circuit {c}: H reaches the bound"))?;
        ensure(report.passed(), || format!("circuit {c} (N = {n}, D = {depth}): {:?}", report.failures()))?;
        // ΔS = H exactly for pure states, so that margin is left out.
        let tightest = report
            .margins
            .iter()
            .filter(|(k, _)| k.as_str() != "shannon")
            .map(|(_, &m)| m)
            .fold(f64::INFINITY, f64::min);
        worst_margin = worst_margin.min(tightest);
    }
    Ok(format!("50 circuits, no violations (smallest margin {worst_margin:.3e})"))
}

fn non_abelian_suite() -> Outcome {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bases = Vec::new();
    for n in [2usize, 4, 6, 8] {
        let total: u128 = (0..=n / 2).map(|s| (2 * s as u128 + 1) * multiplicity(n, s)).sum();
        ensure(total == 1u128 << n && binomial_exact(n as i64, (n / 2) as i64) > 0, || {
            format!("dimension count {total} at N = {n}")
        })?;
        let basis = SchurBasis::build(n, &caps).map_err(|e| e.to_string())?;
        for s in 0..=n / 2 {
            ensure(basis.counted_multiplicity(s) as u128 == multiplicity(n, s), || {
                format!("multiplicity of s = {s} at N = {n}")
            })?;
        }
        let err = basis.unitarity_error();
        ensure(err <= 1e-10, || format!("unitarity error {err:e} at N = {n}"))?;
        bases.push(basis);
    }
    let mut haar_err: f64 = 0.0;
    for (idx, n) in [2usize, 4].into_iter().enumerate() {
        for rank in [1, 3] {
            let rho = random_density_matrix(n, rank, &mut rng);
            let exact = su2_twirl(&rho, &bases[idx]).map_err(|e| e.to_string())?;
            let quad = haar_twirl(&rho, 1e-10).map_err(|e| e.to_string())?;
            haar_err = haar_err.max((exact.matrix() - quad.matrix()).camax());
        }
    }
    ensure(haar_err <= 1e-6, || format!("twirl differs from Haar quadrature by {haar_err:e}"))?;
    let mut invariance: f64 = 0.0;
    for c in 0..100 {
        let idx = c % 4;
        let n = 2 * (idx + 1);
        let depth = 1 + (c / 4) % 3;
        let g = LatticeGeometry::chain(n);
        let circuit = random_brickwork(&g, depth, &mut rng);
        let state = apply_circuit(&random_product(n, &mut rng), &circuit).map_err(|e| e.to_string())?;
        let report = su2_asymmetry(&state, &bases[idx], &caps).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("state {c}: {:?}", report.failures()))?;
        let (fixed, _) = zero_transverse_rotation(&state).map_err(|e| e.to_string())?;
        let v = magnetization(&fixed).map_err(|e| e.to_string())?;
        ensure(v.x.abs() <= 1e-9 && v.y.abs() <= 1e-9, || format!("state {c}: gauge left {v:?}"))?;
        let cas = casimir_constraint_check(&fixed, 2 * depth, &g).map_err(|e| e.to_string())?;
        ensure(cas.passed(), || format!("state {c}: {cas:?}"))?;
        let mut rotated = state.clone();
        rotated.apply_global(&haar_qubit_unitary(&mut rng), Exec::default());
        let again = su2_asymmetry(&rotated, &bases[idx], &caps).map_err(|e| e.to_string())?;
        invariance = invariance.max((again.delta_s - report.delta_s).abs());
    }
    ensure(invariance <= 1e-9, || format!("ΔS changes by {invariance:e} under u^N"))?;
    Ok(format!(
        "Schur checks N = 2..8, Haar error {haar_err:.1e}, 100 states within bounds, invariance {invariance:.1e}"
    ))
}

fn delta_s(rho: &DensityMatrix, g: &LatticeGeometry, caps: &Caps) -> Result<f64, String> {
    u1_asymmetry(&QuantumState::Mixed(rho.clone()), None, g, caps)
        .map(|r| r.delta_s)
        .map_err(|e| e.to_string())
}

fn monotone_axioms() -> Outcome {
    let caps = Caps::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fixed = 0;
    for t in 0..200 {
        let n = 1 + t % 5;
        let g = LatticeGeometry::chain(n);
        let rank = rng.random_range(1..=(1usize << n).min(4));
        let mut rho = random_density_matrix(n, rank, &mut rng);
        if t % 4 == 3 {
            rho = u1_twirl(&rho);
        }
        let ds = delta_s(&rho, &g, &caps)?;
        ensure(ds >= -1e-10, || format!("state {t}: ΔS = {ds:e}"))?;
        let residual = u1_asymmetric_residual(&rho);
        ensure((ds <= 1e-10) == (residual <= 1e-10), || {
            format!("state {t}: ΔS = {ds:e} but twirl residual {residual:e}")
        })?;
        if ds <= 1e-10 {
            fixed += 1;
        }
        let site = rng.random_range(0..n);
        let ch = KrausChannel::dephasing(site, rng.random::<f64>()).map_err(|e| e.to_string())?;
        let after = delta_s(&apply_channel(&rho, &ch).map_err(|e| e.to_string())?, &g, &caps)?;
        ensure(after <= ds + 1e-9, || format!("state {t}: dephasing raised ΔS from {ds} to {after}"))?;
        if n >= 2 {
            let a = rng.random_range(0..n - 1);
            let gate = charge_conserving(
                rng.random::<f64>() * 6.3,
                rng.random::<f64>() * 6.3,
                &haar_qubit_unitary(&mut rng),
            );
            let circuit = BrickworkCircuit::new(n, vec![vec![Gate::new(vec![a, a + 1], gate.to_vec()).unwrap()]])
                .map_err(|e| e.to_string())?;
            let out = apply_circuit(&QuantumState::Mixed(rho.clone()), &circuit).map_err(|e| e.to_string())?;
            let after = delta_s(&out.to_density(), &g, &caps)?;
            ensure(after <= ds + 1e-9, || format!("state {t}: symmetric gate raised ΔS from {ds} to {after}"))?;
        }
    }
    Ok(format!("200 states ({fixed} symmetric), nonnegative, faithful and monotone"))
}

fn negative_controls() -> Outcome {
    let caps = Caps::default();
    for n in [8usize, 10, 12] {
        let g = LatticeGeometry::chain(n);
        let ghz_state: QuantumState = ghz(n, &caps).unwrap().into();
        let r = verify_cluster_property(&ghz_state, 2, &g, 1e-9).map_err(|e| e.to_string())?;
        ensure(!r.clusters(), || format!("GHZ at N = {n} passed as clustering"))?;
        let r = verify_cluster_property(&kink(n, &caps).unwrap().into(), 2, &g, 1e-9).map_err(|e| e.to_string())?;
        ensure(!r.clusters(), || format!("kink at N = {n} passed as clustering"))?;
        let v = variance_bound_check(&ghz_state, 0, &g).map_err(|e| e.to_string())?;
        ensure((v.variance - (n * n) as f64 / 4.0).abs() < 1e-9, || format!("GHZ variance {}", v.variance))?;
        // N²/4 > 2N only once N > 8.
        ensure(v.passed == (n <= 8), || format!("GHZ variance check at N = {n}: {v:?}"))?;
        let report = u1_asymmetry(&ghz_state, Some(0), &g, &caps).map_err(|e| e.to_string())?;
        ensure(report.passed() == (n <= 8), || format!("GHZ bound report at N = {n}: {:?}", report.failures()))?;
    }
    Ok("GHZ and kink flagged non-clustering; GHZ variance exceeds 2N for N > 8".into())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("kink maximality", Duration::from_secs(5), kink_maximality),
        ("rotated Dicke exactness", Duration::from_secs(30), rotated_dicke_exactness),
        ("Dicke scaling", Duration::from_secs(60), dicke_scaling),
        ("product-state scaling", Duration::from_secs(60), product_scaling),
        ("abelian bound chain", Duration::from_secs(300), abelian_bound_chain),
        ("non-abelian suite", Duration::from_secs(300), non_abelian_suite),
        ("monotone axioms", Duration::from_secs(120), monotone_axioms),
        ("negative controls", Duration::from_secs(10), negative_controls),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {limit:?} budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {} {name}: {status} [{:.2} s] {detail}", k + 1, took.as_secs_f64());
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
