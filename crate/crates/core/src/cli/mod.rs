//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver or runtime
//! failure, 4 failed `--check`. Errors are reported on stderr as one JSON
//! object; each command prints its summary JSON on stdout.

mod commands;
mod config;
mod output;

pub use commands::REFERENCE_TABLE;
pub use config::{preset, RunConfig, DEFAULT_NBAR_VALUES, ENV_PREFIX, PRESETS};
pub use output::{fmt_f64, to_json};

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::SculptError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

/// Failures of a CLI run, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Sculpt(#[from] SculptError),

    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },

    #[error("{} row(s) outside tolerance", failures.len())]
    Check { failures: Vec<Value> },
}

impl CliError {
    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Sculpt(SculptError::InvalidParameter(_) | SculptError::OutOfCone { .. }) => EXIT_CONFIG,
            CliError::Sculpt(_) | CliError::Io { .. } => EXIT_SOLVER,
            CliError::Check { .. } => EXIT_CHECK,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Sculpt(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Check { .. } => "check_failed",
        }
    }

    /// Machine-readable report printed on stderr.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Check { failures } = self {
            v["failures"] = Value::Array(failures.clone());
        }
        v
    }
}

#[derive(Debug, Parser)]
#[command(name = "ion-sculpt", version, about = "Trapped-ion motional state sculpture")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat JSON config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Maximum worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Compare the table against the reference rows (exit 4 on mismatch).
    #[arg(long, global = true)]
    pub check: bool,
    /// Run the noisy pulse optimizer instead of mapping ideal roots.
    #[arg(long, global = true)]
    pub optimize: bool,
    /// Noise scale Γ in seconds.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Initial mean phonon number; for table1 the only row scanned.
    #[arg(long, global = true)]
    pub nbar: Option<f64>,
    /// Objective evaluations for the optimizer.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Solve and run the ideal cycles for the target.
    SculptIdeal,
    /// Run the target's pulses under intensity noise.
    SculptNoisy,
    /// Rate-maximizing scan over the initial mean phonon number.
    Table1,
    /// Iso-fidelity two-level states, their Bloch cone and Wigner grids.
    AppendixC,
    /// Wigner grid of a state file.
    Wigner {
        /// JSON with {n_max, amps} or {n_max, rho}.
        state: Option<PathBuf>,
    },
    /// Carrier and JC single-pulse fidelity curves.
    PulseFidelity,
}

impl Cli {
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = Some(j);
        }
        if let Some(g) = self.gamma {
            cfg.gamma = Some(g);
        }
        if let Some(n) = self.nbar {
            cfg.nbar = n;
            cfg.alpha = None;
            cfg.nbar_values = vec![n];
        }
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        cfg.validate()
    }
}

fn execute(cli: &Cli, env: Vec<(String, String)>) -> Result<Value, CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), env)?;
    cli.apply(&mut cfg)?;
    let go = || match &cli.command {
        Command::SculptIdeal => commands::sculpt_ideal(&cfg),
        Command::SculptNoisy => commands::sculpt_noisy(&cfg, cli.optimize),
        Command::Table1 => commands::table1(&cfg, cli.check),
        Command::AppendixC => commands::appendix_c(&cfg),
        Command::Wigner { state } => commands::wigner_file(&cfg, state.as_deref()),
        Command::PulseFidelity => commands::pulse_fidelity(&cfg),
    };
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    }
}

/// Runs the CLI on `args` (including the program name) with the given
/// environment and returns the exit code.
pub fn run<I, T>(args: I, env: Vec<(String, String)>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let err = CliError::Config(e.to_string().trim().to_string());
            eprintln!("{}", to_json(&err.to_json()));
            return err.exit_code();
        }
    };
    match execute(&cli, env) {
        Ok(summary) => {
            println!("{}", to_json(&summary));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{}", to_json(&e.to_json()));
            e.exit_code()
        }
    }
}
