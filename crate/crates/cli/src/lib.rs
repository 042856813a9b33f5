//! Command-line front end: `curve`, `check`, `search`, `scan`, `reproduce`.
//!
//! Exit codes: 0 holds / success, 1 fails, 2 inconclusive (or a scan minimum
//! not above tolerance), 3 configuration or usage error, 4 runtime error.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{CheckWhich, CurveSpec, EquilibriumKind, Mode, Outcome, Quantity};
use config::{BenefitKind, Resolved, RunConfig};
use error::CliResult;

#[derive(Debug, Parser)]
#[command(
    name = "echelon",
    version,
    about = "Wake benefit and equilibrium checks for echelon formations"
)]
pub struct Cli {
    /// TOML run configuration; unspecified keys take goose defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Condition-check grid spacing (m).
    #[arg(long, global = true)]
    pub grid_step: Option<f64>,
    /// Verdict tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `P = [-alpha_l, -alpha_s]` (m).
    #[arg(long, global = true)]
    pub alpha_s: Option<f64>,
    #[arg(long, global = true)]
    pub alpha_l: Option<f64>,
    /// Follower count.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub benefit: Option<BenefitKind>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate f or f_x along x at y = -beta or -2 beta.
    Curve {
        #[arg(long, value_enum, default_value_t = Quantity::F)]
        quantity: Quantity,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        y_multiple: u8,
        /// Defaults to -20 b.
        #[arg(long, allow_hyphen_values = true)]
        x_min: Option<f64>,
        /// Defaults to 20 b.
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<f64>,
        /// Defaults to 0.01 b.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        svg: bool,
    },
    /// Decide one nonexistence condition on the configured interval.
    Check {
        #[arg(value_enum)]
        which: CheckWhich,
    },
    /// Seeded equilibrium-search restarts.
    Search {
        #[arg(value_enum)]
        kind: EquilibriumKind,
        /// Write per-restart trajectory CSVs.
        #[arg(long)]
        trajectories: bool,
        /// Best-response update order.
        #[arg(long, value_enum, default_value_t = Mode::Cyclic)]
        mode: Mode,
    },
    /// Brute-force residual scan over P x P.
    Scan {
        #[arg(value_enum)]
        kind: EquilibriumKind,
        /// Grid spacing (m); defaults to the configured scan_step.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Run the fixed batch of curves, checks and scans.
    Reproduce {
        #[arg(long)]
        svg: bool,
    },
}

impl Cli {
    /// The configuration file (or defaults) with command-line overrides applied.
    pub fn config(&self) -> CliResult<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.out {
            c.output_dir = v.clone();
        }
        if let Some(v) = self.grid_step {
            c.grid_step = Some(v);
        }
        if let Some(v) = self.tol {
            c.tolerance = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.alpha_s {
            c.alpha_s = v;
        }
        if let Some(v) = self.alpha_l {
            c.alpha_l = v;
        }
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.benefit {
            c.benefit = v;
        }
        Ok(c)
    }
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let r = Resolved::new(cli.config()?)?;
    match cli.command {
        Command::Curve {
            quantity,
            y_multiple,
            x_min,
            x_max,
            step,
            svg,
        } => commands::curve(
            &r,
            &CurveSpec {
                quantity,
                y_multiple,
                x_min,
                x_max,
                step,
                svg,
            },
        ),
        Command::Check { which } => commands::check(&r, which),
        Command::Search {
            kind,
            trajectories,
            mode,
        } => commands::search(&r, kind, mode, trajectories),
        Command::Scan { kind, step } => commands::scan(&r, kind, step),
        Command::Reproduce { svg } => commands::reproduce(&r, svg),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
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
    match execute(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                println!("  wrote {}", f.display());
            }
            outcome.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
