//! `slnh`: certify, verify, simulate and probe invariant control systems on
//! `Sl(n,H)` from JSON files.
//!
//! Exit codes: 0 for a controllable certificate or a passing run, 2 for
//! `NotAccessible`, 3 for `Inconclusive`, 1 for any input or runtime error
//! and for a verification run with failing checks.

pub mod verify;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use slnh_core::certify::{self, diagonalize_cartan, sample_generic, CertifyOptions, SampleOptions};
use slnh_core::flow::{flow_trace, reach_probe};
use slnh_core::hmat::random_algebra_element_with;
use slnh_core::seed::{derive_seed, stream};
use slnh_core::{ControlSignal, HMatrix, Verdict};
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub use verify::Suite;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] slnh_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Parser)]
#[command(name = "slnh", version, about = "Controllability certificates for ġ = Ag + uBg on Sl(n,H)")]
pub struct Cli {
    /// Relative tolerance for membership and spectral tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Resolution for deciding irrationality of b_1/b_n.
    #[arg(long = "Q", global = true, default_value_t = 10_000)]
    pub resolution: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Bracket generations before the closure counts as unstable.
    #[arg(long, global = true)]
    pub max_depth: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Machine-readable output for commands that default to text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a system file `{"A": …, "B": …}`.
    Certify { input: PathBuf },
    /// Run a battery of numerical checks.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Integrate a piecewise-constant control from `g0` (default identity).
    Simulate {
        input: PathBuf,
        signal: PathBuf,
        /// Also write every intermediate state as JSON lines.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Random-shooting probe towards a target group element.
    Reach {
        input: PathBuf,
        /// HMatrix JSON; a seeded random target when omitted.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Conjugate B into the diagonal Cartan subalgebra.
    Diag { input: PathBuf },
    /// Certify Gaussian pairs and report the fractions.
    Sample {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 100)]
        conjugations: usize,
    },
}

/// Validated global options.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    #[serde(rename = "Q")]
    pub resolution: u64,
    pub seed: u64,
    pub max_depth: Option<usize>,
}

impl RunConfig {
    pub fn new(tol: f64, resolution: u64, seed: u64, max_depth: Option<usize>) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!("tol must be positive, got {tol}")));
        }
        if resolution < 2 {
            return Err(CliError::Config(format!("Q must be at least 2, got {resolution}")));
        }
        Ok(RunConfig {
            tol,
            resolution,
            seed,
            max_depth,
        })
    }

    pub fn certify_options(&self) -> CertifyOptions {
        CertifyOptions {
            tol: self.tol,
            resolution: self.resolution,
            max_depth: self.max_depth,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    #[serde(rename = "A")]
    a: Option<HMatrix>,
    #[serde(rename = "B")]
    b: HMatrix,
    g0: Option<HMatrix>,
}

impl SystemFile {
    fn pair(&self, path: &Path) -> Result<(HMatrix, HMatrix)> {
        let a = self
            .a
            .clone()
            .ok_or_else(|| CliError::Config(format!("{}: missing \"A\"", path.display())))?;
        if a.n() != self.b.n() {
            return Err(slnh_core::Error::SizeMismatch {
                expected: a.n(),
                found: self.b.n(),
            }
            .into());
        }
        Ok((a, self.b.clone()))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

/// What a command produced: the report text and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub code: i32,
}

pub fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Controllable => 0,
        Verdict::NotAccessible => 2,
        Verdict::Inconclusive => 3,
    }
}

#[derive(Serialize)]
struct SimulateReport {
    n: usize,
    segments: usize,
    total_duration: f64,
    det_drift: f64,
    #[serde(rename = "final")]
    final_state: HMatrix,
}

#[derive(Serialize)]
struct ReachReport {
    target: HMatrix,
    budget: usize,
    seed: u64,
    best_dist: f64,
    best_index: usize,
    best_signal: ControlSignal,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let config = RunConfig::new(cli.tol, cli.resolution, cli.seed, cli.max_depth)?;
    match &cli.command {
        Command::Certify { input } => {
            let sys: SystemFile = read_json(input)?;
            let (a, b) = sys.pair(input)?;
            let cert = certify::certify(&a, &b, &config.certify_options())?;
            Ok(Outcome {
                report: to_json(&cert),
                code: verdict_code(cert.verdict),
            })
        }
        Command::Verify { suite } => {
            let report = verify::run_suite(*suite, &config)?;
            let code = if report.passed { 0 } else { 1 };
            let text = if cli.json {
                to_json(&report)
            } else {
                report.to_text()
            };
            Ok(Outcome { report: text, code })
        }
        Command::Simulate {
            input,
            signal,
            trajectory,
        } => {
            let sys: SystemFile = read_json(input)?;
            let (a, b) = sys.pair(input)?;
            let sig: ControlSignal = read_json(signal)?;
            let g0 = sys.g0.clone().unwrap_or_else(|| HMatrix::identity(a.n()));
            let tr = flow_trace(&a, &b, &sig, &g0)?;
            if let Some(path) = trajectory {
                let lines: String = tr
                    .states
                    .iter()
                    .map(|g| serde_json::to_string(g).expect("matrices serialize") + "\n")
                    .collect();
                write_file(path, &lines)?;
            }
            let report = SimulateReport {
                n: a.n(),
                segments: sig.len(),
                total_duration: sig.total_duration(),
                det_drift: tr.max_det_drift,
                final_state: tr.final_state().clone(),
            };
            Ok(Outcome {
                report: to_json(&report),
                code: 0,
            })
        }
        Command::Reach { input, target, budget } => {
            let sys: SystemFile = read_json(input)?;
            let (a, b) = sys.pair(input)?;
            let target = match target {
                Some(path) => read_json::<HMatrix>(path)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, stream::TARGET, 0));
                    random_algebra_element_with(a.n(), &mut rng)?.scale(0.5).exp()
                }
            };
            let res = reach_probe(&a, &b, &target, *budget, config.seed)?;
            let report = ReachReport {
                target,
                budget: *budget,
                seed: config.seed,
                best_dist: res.best_dist,
                best_index: res.best_index,
                best_signal: res.best_signal,
            };
            Ok(Outcome {
                report: to_json(&report),
                code: 0,
            })
        }
        Command::Diag { input } => {
            let sys: SystemFile = read_json(input)?;
            let frame = diagonalize_cartan(&sys.b)?;
            Ok(Outcome {
                report: to_json(&frame),
                code: 0,
            })
        }
        Command::Sample {
            n,
            trials,
            conjugations,
        } => {
            let sample = SampleOptions {
                conjugations: *conjugations,
                ..Default::default()
            };
            let stats = sample_generic(*n, *trials, config.seed, &config.certify_options(), &sample)?;
            Ok(Outcome {
                report: to_json(&stats),
                code: 0,
            })
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}
