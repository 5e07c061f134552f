//! Command-line interface.
//!
//! Exit codes: 0 success, 1 a verification command found a failing check,
//! 2 domain validation failure, 3 I/O, parse or usage error.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Result;
use crate::gks::DEFAULT_GAP_TOL;
use crate::report::{
    cmd_analyze, cmd_heisenberg, cmd_selftest, cmd_sweep, cmd_table1, cmd_verify_appendix, Format,
    Render, RunConfig,
};

#[derive(Debug, Parser)]
#[command(name = "spinlab", version, about = "Invariant generalised Killing spinors on metric Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Relative tolerance for identity checks [default: 1e-9; selftest uses per-check defaults]
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Relative gap below which eigenvalues count as equal
    #[arg(long, global = true, default_value_t = DEFAULT_GAP_TOL)]
    pub gap_tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Write the result here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Random metrics per family (per parameter value for table1)
    #[arg(long)]
    pub samples: Option<usize>,

    #[arg(long, env = "SPINLAB_SEED", default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full GK analysis of one metric Lie algebra
    Analyze {
        /// Catalog name (L3(1), L3(2,-1), H(5), ...), inline JSON or a JSON file
        #[arg(long)]
        algebra: String,
        /// `identity`, inline JSON ({"gram": ...} or {"frame_P": ...}) or a JSON file
        #[arg(long, default_value = "identity")]
        metric: String,
    },
    /// Heisenberg algebra h_{2n+1} with the diagonal metric (a, b, c)
    Heisenberg {
        #[arg(long)]
        n: usize,
        /// a_1,...,a_n [default: p^2]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Option<Vec<f64>>,
        /// b_1,...,b_n [default: 1]
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<f64>>,
        /// [default: 1]
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
    },
    /// Compare the solver with the closed forms over random metrics
    VerifyAppendix {
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Distribution of GK space dimension and eigenvalue count over random metrics
    Sweep {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Reproduce the 3-dimensional classification table
    Table1 {
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the invariant suite
    Selftest {
        #[command(flatten)]
        sampling: Sampling,
        /// Use a Clifford action with a wrong sign (negative control)
        #[arg(long, hide = true)]
        broken_clifford: bool,
    },
}

impl Common {
    fn config(&self, sampling: Option<&Sampling>, default_samples: usize) -> RunConfig {
        RunConfig {
            tol: self.tol,
            gap_tol: self.gap_tol,
            samples: sampling.and_then(|s| s.samples).unwrap_or(default_samples),
            seed: sampling.map_or(1, |s| s.seed),
            format: match self.format {
                OutputFormat::Json => Format::Json,
                OutputFormat::Table => Format::Table,
            },
        }
    }
}

/// Rendered output and exit code of one invocation.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn finish<R: Render>(r: &R, cfg: &RunConfig) -> Outcome {
    Outcome {
        text: r.render(cfg.format),
        code: if r.passed() { 0 } else { 1 },
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let common = &cli.common;
    match &cli.command {
        Command::Analyze { algebra, metric } => {
            let cfg = common.config(None, 0);
            Ok(finish(&cmd_analyze(&cfg, algebra, metric)?, &cfg))
        }
        Command::Heisenberg { n, a, b, c } => {
            let cfg = common.config(None, 0);
            let start = Instant::now();
            let out = cmd_heisenberg(&cfg, *n, a.clone(), b.clone(), *c)?;
            // timing goes to stderr so that stdout stays reproducible
            eprintln!("runtime: {:.3} s", start.elapsed().as_secs_f64());
            Ok(finish(&out, &cfg))
        }
        Command::VerifyAppendix { sampling } => {
            let cfg = common.config(Some(sampling), 100);
            Ok(finish(&cmd_verify_appendix(&cfg)?, &cfg))
        }
        Command::Sweep { algebra, sampling } => {
            let cfg = common.config(Some(sampling), 1000);
            Ok(finish(&cmd_sweep(&cfg, algebra)?, &cfg))
        }
        Command::Table1 { sampling } => {
            let cfg = common.config(Some(sampling), 1000);
            Ok(finish(&cmd_table1(&cfg)?, &cfg))
        }
        Command::Selftest {
            sampling,
            broken_clifford,
        } => {
            let cfg = common.config(Some(sampling), 20);
            Ok(finish(&cmd_selftest(&cfg, *broken_clifford)?, &cfg))
        }
    }
}

/// Parses arguments, runs the command and writes the result; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match &cli.common.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.text) {
                eprintln!("error: {}: {e}", path.display());
                return 3;
            }
        }
        None => print!("{}", outcome.text),
    }
    outcome.code
}
