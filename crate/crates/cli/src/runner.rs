//! Evaluates an [`ExperimentConfig`] and writes results.csv, report.json and plot.gp.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use asymlab::closed_forms::{dicke_state, kink_distribution, poisson_binomial, rotated_dicke_distribution, Axis};
use asymlab::clustering::{operator_spreading_range, variance_bound_check, verify_cluster_property, DEFAULT_TOLERANCE};
use asymlab::quantum::random::random_state;
use asymlab::quantum::{apply_circuit, product_state, BrickworkCircuit, Caps, QuantumState, StateVector, C64};
use asymlab::states::{ghz, kink};
use asymlab::su2::{su2_asymmetry, SchurBasis};
use asymlab::u1::{report_from_distribution, shannon_entropy, u1_asymmetry, AsymmetryReport, Bounds, ChargeDistribution};
use serde::Serialize;
use serde_json::json;

use crate::config::{Experiment, ExperimentConfig, LogBase, ProductInput, StateSpec};
use crate::verify::{self, Check, Fault};
use crate::CliError;

/// One evaluated point: a size in a sweep, or a check of the bound suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub n: usize,
    pub delta_s: Option<f64>,
    pub shannon: Option<f64>,
    pub variance: Option<f64>,
    pub bounds: Bounds,
    pub margins: std::collections::BTreeMap<String, f64>,
    pub passed: bool,
}

impl Row {
    fn from_report(r: &AsymmetryReport, base: LogBase) -> Self {
        let k = base.scale();
        let b = &r.bounds;
        let scale = |x: Option<f64>| x.map(|v| v / k);
        Row {
            label: format!("N={}", r.n_qubits),
            n: r.n_qubits,
            delta_s: Some(r.delta_s / k),
            shannon: Some(r.shannon / k),
            variance: Some(r.variance),
            bounds: Bounds {
                log_n_plus_1: scale(b.log_n_plus_1),
                massey: scale(b.massey),
                clustering: scale(b.clustering),
                su2_shannon: scale(b.su2_shannon),
                support: scale(b.support),
            },
            // The variance margin is not an entropy and keeps its units.
            margins: r
                .margins
                .iter()
                .map(|(name, m)| (name.clone(), if name == "variance" { *m } else { m / k }))
                .collect(),
            passed: r.passed(),
        }
    }

    fn from_check(c: &Check) -> Self {
        Row {
            label: format!("{}/{}", c.module, c.name),
            n: c.n,
            delta_s: None,
            shannon: None,
            variance: None,
            bounds: Bounds::default(),
            margins: [("check".to_string(), c.margin)].into(),
            passed: c.passed,
        }
    }

    pub fn min_margin(&self) -> Option<f64> {
        self.margins.values().copied().reduce(f64::min)
    }

    /// `e^{ΔS}` whatever the log base.
    pub fn linearized(&self, base: LogBase) -> Option<f64> {
        self.delta_s.map(|d| (d * base.scale()).exp())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub config_hash: String,
    pub experiment: Experiment,
    pub log_base: LogBase,
    pub rows: Vec<Row>,
    /// Experiment-specific extras, e.g. the pair table of a clustering run.
    pub details: serde_json::Value,
    #[serde(skip)]
    pub pairs_csv: Option<String>,
}

impl RunOutcome {
    pub fn failures(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| !r.passed)
            .map(|r| {
                let bad: Vec<String> = r
                    .margins
                    .iter()
                    .filter(|(_, m)| !(**m >= -asymlab::u1::BOUND_SLACK))
                    .map(|(k, m)| format!("{k} margin {m:.3e}"))
                    .collect();
                format!("{}: {}", r.label, bad.join(", "))
            })
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

fn fmt_float(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:.16e}"))
}

pub const CSV_HEADER: [&str; 15] = [
    "config_hash",
    "experiment",
    "label",
    "n",
    "delta_s",
    "linearized",
    "shannon",
    "variance",
    "log_n_plus_1",
    "massey",
    "clustering",
    "su2_shannon",
    "support",
    "min_margin",
    "passed",
];

pub fn results_csv(out: &RunOutcome) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    let experiment = serde_json::to_value(out.experiment).expect("enum serializes");
    for r in &out.rows {
        let b = &r.bounds;
        w.write_record([
            out.config_hash.clone(),
            experiment.as_str().unwrap_or_default().to_string(),
            r.label.clone(),
            r.n.to_string(),
            fmt_float(r.delta_s),
            fmt_float(r.linearized(out.log_base)),
            fmt_float(r.shannon),
            fmt_float(r.variance),
            fmt_float(b.log_n_plus_1),
            fmt_float(b.massey),
            fmt_float(b.clustering),
            fmt_float(b.su2_shannon),
            fmt_float(b.support),
            fmt_float(r.min_margin()),
            r.passed.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

/// gnuplot script drawing `e^{ΔS}` against N with a power-law fit.
pub fn plot_script(out: &RunOutcome, csv_name: &str) -> String {
    let title = serde_json::to_value(out.experiment).expect("enum serializes");
    format!(
        "# e^dS against N; the fitted exponent p is 1 for maximal and 1/2 for product-like scaling\n\
         set datafile separator ','\n\
         set key top left\n\
         set logscale xy\n\
         set xlabel 'N'\n\
         set ylabel 'exp(delta S)'\n\
         set title '{title}'\n\
         f(x) = a * x**p\n\
         a = 1; p = 1\n\
         fit f(x) '{csv_name}' using 4:6 via a, p\n\
         plot '{csv_name}' using 4:6 skip 1 with linespoints title 'exact', \\\n     \
         f(x) title sprintf('%.3f N^{{%.3f}}', a, p)\n",
        title = title.as_str().unwrap_or_default()
    )
}

fn product_input(spec: &Option<StateSpec>) -> ProductInput {
    match spec {
        Some(StateSpec::Product { input }) => input.clone(),
        _ => ProductInput::Bernoulli { x: 0.5 },
    }
}

fn load_circuit(path: &Path, n: Option<usize>) -> Result<BrickworkCircuit, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read circuit {}: {e}", path.display())))?;
    BrickworkCircuit::from_json(&text, n).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Prepares the configured state on `n` qubits.
pub fn build_state(spec: &StateSpec, n: usize, caps: &Caps) -> Result<QuantumState, CliError> {
    let state: QuantumState = match spec {
        StateSpec::Product { input } => {
            caps.check_statevector(n)?;
            product_state(&input.locals(n)?)?
        }
        StateSpec::Circuit { circuit, input } => {
            caps.check_statevector(n)?;
            let c = load_circuit(circuit, Some(n))?;
            apply_circuit(&product_state(&input.locals(n)?)?, &c)?
        }
        StateSpec::Dicke { k, ratio } => dicke_state(n, dicke_k(*k, *ratio, n), Axis::X, caps)?.into(),
        StateSpec::Kink => kink(n, caps)?.into(),
        StateSpec::Ghz => ghz(n, caps)?.into(),
        StateSpec::Random { seed } => random_state(n, *seed, caps)?.into(),
        StateSpec::File { path } => {
            caps.check_statevector(n)?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read state {}: {e}", path.display())))?;
            let raw: Vec<[f64; 2]> =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let amps = raw.into_iter().map(|[re, im]| C64::new(re, im)).collect();
            StateVector::new(n, amps).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?.into()
        }
    };
    Ok(state)
}

fn dicke_k(k: Option<usize>, ratio: Option<f64>, n: usize) -> usize {
    k.unwrap_or_else(|| (ratio.unwrap_or(0.5) * n as f64).round() as usize)
}

fn closed_form_row(cfg: &ExperimentConfig, n: usize, d: &ChargeDistribution) -> Result<Row, CliError> {
    let g = match cfg.range {
        Some(r) => Some((cfg.geometry_for(n)?, r)),
        None => None,
    };
    let report = report_from_distribution(n, shannon_entropy(d), d, g.as_ref().map(|(g, r)| (g, *r)));
    Ok(Row::from_report(&report, cfg.log_base))
}

fn sweep_point(cfg: &ExperimentConfig, n: usize, caps: &Caps) -> Result<Row, CliError> {
    match cfg.experiment {
        Experiment::DickeSweep => {
            let (k, ratio) = match &cfg.state_spec {
                Some(StateSpec::Dicke { k, ratio }) => (*k, *ratio),
                _ => (None, None),
            };
            closed_form_row(cfg, n, &rotated_dicke_distribution(n, dicke_k(k, ratio, n))?)
        }
        Experiment::KinkSweep => closed_form_row(cfg, n, &kink_distribution(n)?),
        Experiment::ProductSweep => {
            let x = product_input(&cfg.state_spec).zero_probabilities(n)?;
            closed_form_row(cfg, n, &poisson_binomial(&x)?)
        }
        Experiment::U1Asymmetry => {
            let spec = cfg.state_spec.as_ref().expect("validated");
            let state = build_state(spec, n, caps)?;
            let r = u1_asymmetry(&state, cfg.range, &cfg.geometry_for(n)?, caps)?;
            Ok(Row::from_report(&r, cfg.log_base))
        }
        Experiment::Su2Asymmetry => {
            let spec = cfg.state_spec.as_ref().expect("validated");
            let state = build_state(spec, n, caps)?;
            let basis = SchurBasis::cached(n, caps)?;
            let r = su2_asymmetry(&state, &basis, caps)?;
            Ok(Row::from_report(&r, cfg.log_base))
        }
        Experiment::CircuitClustering | Experiment::BoundSuite => unreachable!("not a sweep"),
    }
}

#[cfg(feature = "parallel")]
fn map_sizes(sizes: &[usize], f: impl Fn(usize) -> Result<Row, CliError> + Sync + Send) -> Vec<Result<Row, CliError>> {
    use rayon::prelude::*;
    sizes.par_iter().map(|&n| f(n)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_sizes(sizes: &[usize], f: impl Fn(usize) -> Result<Row, CliError>) -> Vec<Result<Row, CliError>> {
    sizes.iter().map(|&n| f(n)).collect()
}

fn circuit_clustering(cfg: &ExperimentConfig, caps: &Caps) -> Result<RunOutcome, CliError> {
    let Some(StateSpec::Circuit { circuit, input }) = &cfg.state_spec else {
        return Err(CliError::Config("circuit-clustering takes a circuit state_spec".into()));
    };
    let c = load_circuit(circuit, None)?;
    let n = c.n_qubits();
    caps.check_statevector(n)?;
    let g = cfg.geometry_for(n)?;
    c.check_nearest_neighbor(&g)?;
    let state = apply_circuit(&product_state(&input.locals(n)?)?, &c)?;
    let lambda = operator_spreading_range(&c, &g, caps)?;
    let range = cfg.range.unwrap_or(2 * lambda);
    let cluster = verify_cluster_property(&state, range, &g, DEFAULT_TOLERANCE)?;
    let variance = variance_bound_check(&state, range, &g)?;
    let report = u1_asymmetry(&state, Some(range), &g, caps)?;
    let mut row = Row::from_report(&report, cfg.log_base);
    row.margins.insert("cluster".into(), cluster.tolerance - cluster.max_violation);
    row.passed = row.passed && cluster.clusters() && variance.passed;
    Ok(RunOutcome {
        config_hash: cfg.hash(),
        experiment: cfg.experiment,
        log_base: cfg.log_base,
        rows: vec![row],
        details: json!({
            "spreading_range": lambda,
            "range": range,
            "effective_range": cluster.effective_range,
            "max_violation": cluster.max_violation,
            "variance": variance,
            "pairs": cluster.pairs,
        }),
        pairs_csv: Some(cluster.to_csv()),
    })
}

/// Evaluates `cfg` without touching the filesystem beyond reading inputs.
pub fn evaluate(cfg: &ExperimentConfig, caps: &Caps) -> Result<RunOutcome, CliError> {
    cfg.validate(caps)?;
    match cfg.experiment {
        Experiment::CircuitClustering => circuit_clustering(cfg, caps),
        Experiment::BoundSuite => {
            let checks = verify::bound_suite(cfg.seed, Fault::None);
            Ok(RunOutcome {
                config_hash: cfg.hash(),
                experiment: cfg.experiment,
                log_base: cfg.log_base,
                rows: checks.iter().map(Row::from_check).collect(),
                details: json!({ "checks": checks }),
                pairs_csv: None,
            })
        }
        _ => {
            let rows = map_sizes(&cfg.sizes(), |n| sweep_point(cfg, n, caps));
            Ok(RunOutcome {
                config_hash: cfg.hash(),
                experiment: cfg.experiment,
                log_base: cfg.log_base,
                rows: rows.into_iter().collect::<Result<_, _>>()?,
                details: serde_json::Value::Null,
                pairs_csv: None,
            })
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes the artifacts next to `prefix` and returns their paths.
pub fn write_artifacts(out: &RunOutcome, prefix: &Path) -> Result<Vec<PathBuf>, CliError> {
    let csv_path = with_suffix(prefix, "results.csv");
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    let write = |path: &PathBuf, text: String| {
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    };
    let csv_name = csv_path.file_name().expect("has a file name").to_string_lossy().into_owned();
    let mut paths = vec![csv_path.clone(), with_suffix(prefix, "report.json"), with_suffix(prefix, "plot.gp")];
    write(&paths[0], results_csv(out)?)?;
    let report = json!({
        "config_hash": out.config_hash,
        "experiment": out.experiment,
        "log_base": out.log_base,
        "passed": out.passed(),
        "failures": out.failures(),
        "rows": out.rows,
        "details": out.details,
    });
    write(&paths[1], serde_json::to_string_pretty(&report).expect("report serializes") + "\n")?;
    write(&paths[2], plot_script(out, &csv_name))?;
    if let Some(pairs) = &out.pairs_csv {
        let p = with_suffix(prefix, "pairs.csv");
        write(&p, pairs.clone())?;
        paths.push(p);
    }
    Ok(paths)
}

/// Evaluates and writes; fails with an invariant error when any row fails.
pub fn run(cfg: &ExperimentConfig, caps: &Caps) -> Result<RunOutcome, CliError> {
    let out = evaluate(cfg, caps)?;
    write_artifacts(&out, &cfg.output)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(text).unwrap()
    }

    #[test]
    fn dicke_sweep_grows_linearly() {
        let c = cfg(r#"{"experiment": "dicke-sweep", "geometry": {"dimension": 1, "linear_size": 2},
            "state_spec": {"kind": "dicke", "ratio": 0.5}, "sweep": [100, 1000, 10000], "output": "x"}"#);
        let out = evaluate(&c, &Caps::default()).unwrap();
        let lin: Vec<f64> = out.rows.iter().map(|r| r.linearized(c.log_base).unwrap()).collect();
        // e^{ΔS} ≈ (π/8) N at large N.
        let ratio = lin[2] / lin[1];
        assert!((ratio - 10.0).abs() < 0.3, "ratio {ratio}");
        assert!(out.passed());
    }

    #[test]
    fn product_sweep_grows_like_sqrt_n() {
        let c = cfg(r#"{"experiment": "product-sweep", "geometry": {"dimension": 1, "linear_size": 2},
            "state_spec": {"kind": "product", "input": {"kind": "bernoulli", "x": 0.5}},
            "sweep": [100, 10000], "output": "x"}"#);
        let out = evaluate(&c, &Caps::default()).unwrap();
        let ratio = out.rows[1].linearized(c.log_base).unwrap() / out.rows[0].linearized(c.log_base).unwrap();
        assert!((ratio - 10.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn log_base_two_rescales_entropies_only() {
        let text = r#"{"experiment": "kink-sweep", "geometry": {"dimension": 1, "linear_size": 2},
            "sweep": [8], "output": "x", "log_base": "2"}"#;
        let out = evaluate(&cfg(text), &Caps::default()).unwrap();
        assert!((out.rows[0].delta_s.unwrap() - 3.0).abs() < 1e-12);
        assert!((out.rows[0].linearized(LogBase::Two).unwrap() - 8.0).abs() < 1e-9);
        let e = evaluate(&cfg(&text.replace("\"2\"", "\"e\"")), &Caps::default()).unwrap();
        assert_eq!(e.rows[0].variance, out.rows[0].variance);
    }

    #[test]
    fn csv_rows_carry_hash_and_full_precision() {
        let c = cfg(r#"{"experiment": "kink-sweep", "geometry": {"dimension": 1, "linear_size": 2},
            "sweep": [4, 10], "output": "x"}"#);
        let out = evaluate(&c, &Caps::default()).unwrap();
        let text = results_csv(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        for line in lines {
            assert!(line.starts_with(&c.hash()));
        }
        assert!(text.contains(&format!("{:.16e}", 4f64.ln())));
    }

    #[test]
    fn su2_and_u1_points() {
        let c = cfg(r#"{"experiment": "su2-asymmetry", "geometry": {"dimension": 1, "linear_size": 4},
            "state_spec": {"kind": "product", "input": {"kind": "random", "seed": 3}}, "sweep": [2, 4, 6], "output": "x"}"#);
        let out = evaluate(&c, &Caps::default()).unwrap();
        assert!(out.passed() && out.rows.iter().all(|r| r.bounds.support.is_some()));
        let c = cfg(r#"{"experiment": "u1-asymmetry", "geometry": {"dimension": 1, "linear_size": 10},
            "state_spec": {"kind": "ghz"}, "range": 0, "output": "x"}"#);
        let out = evaluate(&c, &Caps::default()).unwrap();
        assert!(!out.passed());
        assert!(out.failures()[0].contains("variance"));
    }
}
