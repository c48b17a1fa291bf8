use std::path::PathBuf;
use std::process::ExitCode;

use asymlab::quantum::Caps;
use asymlab::LatticeGeometry;
use asymlab_cli::config::{Experiment, ExperimentConfig, LogBase, ProductInput, StateSpec};
use asymlab_cli::runner::{self, RunOutcome};
use asymlab_cli::verify::{self, Fault};
use asymlab_cli::CliError;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "asymlab", version, about = "Entanglement asymmetry of qubit lattice states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    BoundSuite,
    OracleSuite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    E,
    #[value(name = "2")]
    Two,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::E => LogBase::E,
            Base::Two => LogBase::Two,
        }
    }
}

#[derive(clap::Args)]
struct Sweep {
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    /// Points per sweep, spaced geometrically.
    #[arg(long, default_value_t = 10)]
    points: usize,
    /// Write results.csv, report.json and plot.gp under this prefix instead of printing.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "e")]
    log_base: Base,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config.
    Run { config: PathBuf },
    /// Run a verification suite and print the check matrix.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_twirl_fault: bool,
    },
    /// Sweep the rotated Dicke state with k = ratio·N.
    Dicke {
        #[arg(long, default_value_t = 0.5)]
        ratio: f64,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Sweep the kink state.
    Kink {
        #[command(flatten)]
        sweep: Sweep,
    },
    /// SU(2) asymmetry of a state file holding `[[re, im], ...]` amplitudes.
    Su2 {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "e")]
        log_base: Base,
    },
    /// Clustering diagnostics of a circuit applied to a product input.
    Clustering {
        #[arg(long)]
        circuit: PathBuf,
        /// `plus`, `zero`, `bernoulli:X` or `random:SEED`.
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1)]
        dimension: usize,
        /// Range to test at; defaults to twice the measured operator spreading.
        #[arg(long)]
        range: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn geometric_sizes(lo: usize, hi: usize, points: usize) -> Result<Vec<usize>, CliError> {
    if lo == 0 || hi < lo || points == 0 {
        return Err(CliError::Config(format!("bad sweep {lo}..{hi} with {points} points")));
    }
    if points == 1 || lo == hi {
        return Ok(vec![lo]);
    }
    let step = (hi as f64 / lo as f64).ln() / (points - 1) as f64;
    let mut sizes: Vec<usize> = (0..points)
        .map(|i| (lo as f64 * (step * i as f64).exp()).round() as usize)
        .collect();
    sizes.dedup();
    Ok(sizes)
}

fn sweep_config(experiment: Experiment, spec: Option<StateSpec>, s: &Sweep) -> Result<ExperimentConfig, CliError> {
    Ok(ExperimentConfig {
        experiment,
        geometry: LatticeGeometry::chain(s.n_min.max(1)),
        state_spec: spec,
        sweep: geometric_sizes(s.n_min, s.n_max, s.points)?,
        range: None,
        seed: 0,
        output: s.output.clone().unwrap_or_default(),
        log_base: s.log_base.into(),
    })
}

fn finish(out: &RunOutcome, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(prefix) => {
            for p in runner::write_artifacts(out, prefix)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => print!("{}", runner::results_csv(out)?),
    }
    if out.passed() {
        Ok(())
    } else {
        Err(CliError::Invariant(out.failures().join("; ")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let caps = Caps::from_env();
    match cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let out = runner::run(&cfg, &caps)?;
            eprintln!("wrote artifacts under {}", cfg.output.display());
            if out.passed() {
                Ok(())
            } else {
                Err(CliError::Invariant(out.failures().join("; ")))
            }
        }
        Command::Verify {
            suite,
            seed,
            inject_twirl_fault,
        } => {
            let fault = if inject_twirl_fault { Fault::TwirlWeight } else { Fault::None };
            let checks = match suite {
                Suite::BoundSuite => verify::bound_suite(seed, fault),
                Suite::OracleSuite => verify::oracle_suite(seed, fault),
            };
            print!("{}", verify::render(&checks));
            let failed: Vec<String> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}/{} at N = {} ({}), margin {:.3e}", c.module, c.name, c.n, c.inputs, c.margin))
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Invariant(failed.join("; ")))
            }
        }
        Command::Dicke { ratio, sweep } => {
            let cfg = sweep_config(Experiment::DickeSweep, Some(StateSpec::Dicke { k: None, ratio: Some(ratio) }), &sweep)?;
            finish(&runner::evaluate(&cfg, &caps)?, sweep.output.as_ref())
        }
        Command::Kink { sweep } => {
            let cfg = sweep_config(Experiment::KinkSweep, Some(StateSpec::Kink), &sweep)?;
            finish(&runner::evaluate(&cfg, &caps)?, sweep.output.as_ref())
        }
        Command::Su2 { state, n, log_base } => {
            let cfg = ExperimentConfig {
                experiment: Experiment::Su2Asymmetry,
                geometry: LatticeGeometry::chain(n.max(1)),
                state_spec: Some(StateSpec::File { path: state }),
                sweep: vec![n],
                range: None,
                seed: 0,
                output: PathBuf::new(),
                log_base: log_base.into(),
            };
            finish(&runner::evaluate(&cfg, &caps)?, None)
        }
        Command::Clustering {
            circuit,
            input,
            dimension,
            range,
            output,
        } => {
            let cfg = ExperimentConfig {
                experiment: Experiment::CircuitClustering,
                geometry: LatticeGeometry::new(dimension, 1).map_err(|e| CliError::Config(e.to_string()))?,
                state_spec: Some(StateSpec::Circuit {
                    circuit,
                    input: ProductInput::parse(&input)?,
                }),
                sweep: Vec::new(),
                range,
                seed: 0,
                output: output.clone().unwrap_or_default(),
                log_base: LogBase::E,
            };
            finish(&runner::evaluate(&cfg, &caps)?, output.as_ref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("asymlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
