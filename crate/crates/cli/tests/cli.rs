use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use asymlab::quantum::random_brickwork;
use asymlab::LatticeGeometry;
use asymlab_cli::config::ExperimentConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn asymlab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_asymlab"));
    cmd.args(args).env_remove("ASYMLAB_MAX_QUBITS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    let prefix = dir.join("out").join(format!("{name}_"));
    let body = body.replace("OUTPUT", &prefix.display().to_string());
    std::fs::write(&path, body).unwrap();
    path
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn dicke_run_writes_stable_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "dicke",
        r#"{"experiment": "dicke-sweep", "geometry": {"dimension": 1, "linear_size": 100},
            "state_spec": {"kind": "dicke", "ratio": 0.5}, "sweep": [100, 1000, 10000, 100000],
            "output": "OUTPUT"}"#,
    );
    let out = asymlab(&["run", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let prefix = dir.path().join("out").join("dicke_");
    let read = |suffix: &str| std::fs::read(format!("{}{suffix}", prefix.display())).unwrap();
    let csv = read("results.csv");
    let hash = ExperimentConfig::load(&cfg).unwrap().hash();
    let text = String::from_utf8(csv.clone()).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.starts_with(&hash)));
    let report: serde_json::Value = serde_json::from_slice(&read("report.json")).unwrap();
    assert_eq!(report["passed"], true);
    assert!(String::from_utf8(read("plot.gp")).unwrap().contains("dicke_results.csv"));

    let again = asymlab(&["run", cfg.to_str().unwrap()], &[]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(read("results.csv"), csv, "rerun changed the CSV");
}

#[test]
fn bound_suite_run_reports_no_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bounds",
        r#"{"experiment": "bound-suite", "geometry": {"dimension": 1, "linear_size": 8}, "seed": 42, "output": "OUTPUT"}"#,
    );
    let out = asymlab(&["run", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("out/bounds_report.json")).unwrap()).unwrap();
    assert_eq!(report["failures"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write_config(
        dir.path(),
        "typo",
        r#"{"experiment": "kink-sweep", "geometry": {"dimension": 1, "linear_size": 4}, "sweeps": [4], "output": "OUTPUT"}"#,
    );
    let out = asymlab(&["run", typo.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sweeps"));

    let big = write_config(
        dir.path(),
        "big",
        r#"{"experiment": "u1-asymmetry", "geometry": {"dimension": 1, "linear_size": 10},
            "state_spec": {"kind": "kink"}, "output": "OUTPUT"}"#,
    );
    let out = asymlab(&["run", big.to_str().unwrap()], &[("ASYMLAB_MAX_QUBITS", "8")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("cap is 8"), "{}", stderr(&out));
    assert_eq!(asymlab(&["run", big.to_str().unwrap()], &[]).status.code(), Some(0));

    let ghz = write_config(
        dir.path(),
        "ghz",
        r#"{"experiment": "u1-asymmetry", "geometry": {"dimension": 1, "linear_size": 10},
            "state_spec": {"kind": "ghz"}, "range": 0, "output": "OUTPUT"}"#,
    );
    let out = asymlab(&["run", ghz.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("variance"));

    let missing = dir.path().join("missing.json");
    assert_eq!(asymlab(&["run", missing.to_str().unwrap()], &[]).status.code(), Some(2));
}

#[test]
fn verify_and_fault_injection() {
    let out = asymlab(&["verify", "bound-suite", "--seed", "3"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 failed"));
    let out = asymlab(&["verify", "oracle-suite"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let out = asymlab(&["verify", "bound-suite", "--inject-twirl-fault"], &[]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("twirl"));
}

#[test]
fn sweep_subcommands_print_csv() {
    let out = asymlab(&["kink", "--n-min", "4", "--n-max", "4000", "--points", "4"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].contains(&format!("{:.16e}", 4f64.ln())));
    let out = asymlab(&["dicke", "--ratio", "0.5", "--n-min", "10", "--n-max", "1000", "--points", "3", "--log-base", "2"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn su2_and_clustering_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let psi = asymlab::quantum::random::random_statevector(4, &mut rng);
    let amps: Vec<[f64; 2]> = psi.amplitudes().iter().map(|z| [z.re, z.im]).collect();
    let state = dir.path().join("state.json");
    std::fs::write(&state, serde_json::to_string(&amps).unwrap()).unwrap();
    let out = asymlab(&["su2", "--state", state.to_str().unwrap(), "--n", "4"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("su2-asymmetry"));
    let out = asymlab(&["su2", "--state", state.to_str().unwrap(), "--n", "3"], &[]);
    assert_eq!(out.status.code(), Some(2));

    let g = LatticeGeometry::chain(8);
    let circuit = dir.path().join("circuit.json");
    std::fs::write(&circuit, random_brickwork(&g, 2, &mut rng).to_json()).unwrap();
    let prefix = dir.path().join("clu_");
    let out = asymlab(
        &["clustering", "--circuit", circuit.to_str().unwrap(), "--input", "random:5", "--output", prefix.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("clu_report.json")).unwrap()).unwrap();
    assert!(report["details"]["spreading_range"].as_u64().unwrap() <= 2);
    let pairs = std::fs::read_to_string(dir.path().join("clu_pairs.csv")).unwrap();
    assert_eq!(pairs.lines().count(), 1 + 28);
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.validate(&asymlab::quantum::Caps::default()).unwrap();
        seen += 1;
    }
    assert!(seen >= 4);
}
