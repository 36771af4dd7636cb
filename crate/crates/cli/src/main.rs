//! `qdisc` command-line front end.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qdisc::compare::{SweepConfig, SweepKind};
use qdisc::Tolerances;

use report::{CliError, CliReport, Outcome};

#[derive(Parser)]
#[command(name = "qdisc", version, about = "Lower bounds and exact solvers for quantum state discrimination")]
struct Cli {
    /// Print a JSON report instead of the human summary.
    #[arg(long, global = true)]
    json: bool,

    /// Tolerance overrides, e.g. `tol_psd=1e-9,tol_eig=1e-13`.
    #[arg(long, global = true, env = "QDISC_TOLERANCES")]
    tolerances: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    General,
    Commuting,
    Equiprobable,
    Structured,
}

impl From<Kind> for SweepKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::General => SweepKind::General,
            Kind::Commuting => SweepKind::Commuting,
            Kind::Equiprobable => SweepKind::Equiprobable,
            Kind::Structured => SweepKind::Structured,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// All seven lower bounds, their ranking and L4 attainability.
    Bounds { ensemble: PathBuf },
    /// Exact minimum error for two-state or commuting ensembles.
    Exact { ensemble: PathBuf },
    /// Check a measurement against the optimality conditions.
    Certify { ensemble: PathBuf, povm: PathBuf },
    /// Closed-form solution of the structured family.
    Structured {
        /// Comma-separated overlaps; fractions like `1/3` are accepted.
        #[arg(long, allow_hyphen_values = true)]
        alphas: String,
        /// `uniform` or a comma-separated list.
        #[arg(long, default_value = "uniform")]
        priors: String,
        /// Exit 2 unless Q_U / Q_E exceeds this value.
        #[arg(long)]
        ratio_threshold: Option<f64>,
    },
    /// Seeded random sweep comparing the bounds and checking inequalities.
    Compare {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value = "general")]
        kind: Kind,
        /// Number of per-trial records to include.
        #[arg(long, default_value_t = 0)]
        records: usize,
    },
    /// Evaluate the built-in worked examples against their known constants.
    Examples,
    /// Write a random ensemble file.
    Random {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_enum, default_value = "general")]
        kind: Kind,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Bounds { .. } => "bounds",
            Command::Exact { .. } => "exact",
            Command::Certify { .. } => "certify",
            Command::Structured { .. } => "structured",
            Command::Compare { .. } => "compare",
            Command::Examples => "examples",
            Command::Random { .. } => "random",
        }
    }
}

/// Runs the command. The second value is raw text for stdout, bypassing the report.
fn dispatch(cmd: &Command, tol: &Tolerances) -> Result<(Outcome, Option<String>), CliError> {
    let plain = |o: Outcome| (o, None);
    match cmd {
        Command::Bounds { ensemble } => commands::bounds(ensemble, tol).map(plain),
        Command::Exact { ensemble } => commands::exact(ensemble, tol).map(plain),
        Command::Certify { ensemble, povm } => commands::certify(ensemble, povm, tol).map(plain),
        Command::Structured {
            alphas,
            priors,
            ratio_threshold,
        } => commands::structured(alphas, priors, *ratio_threshold, tol).map(plain),
        Command::Compare {
            seed,
            trials,
            m,
            dim,
            kind,
            records,
        } => {
            let mut cfg = SweepConfig::new(*seed, *trials, *m, *dim, (*kind).into());
            cfg.tolerances = *tol;
            cfg.record_cap = *records;
            commands::compare(&cfg).map(plain)
        }
        Command::Examples => commands::examples(tol).map(plain),
        Command::Random {
            seed,
            m,
            dim,
            kind,
            output,
        } => commands::random(*seed, *m, *dim, (*kind).into(), output.as_deref(), tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();

    let tol = match cli.tolerances.as_deref() {
        Some(spec) => Tolerances::default().with_overrides(spec),
        None => Ok(Tolerances::default()),
    };
    let tol = match tol {
        Ok(t) => t,
        Err(e) => {
            let e = CliError::from(e);
            eprintln!("{e}");
            return ExitCode::from(e.exit as u8);
        }
    };

    match dispatch(&cli.command, &tol) {
        Ok((outcome, raw)) => {
            if cli.json {
                let report = CliReport {
                    command: cli.command.name(),
                    args: &args,
                    tolerances: &tol,
                    outcome: &outcome,
                };
                println!("{}", qdisc::json::render(&report.to_value()));
            } else {
                print!("{}", raw.as_deref().unwrap_or(&outcome.human));
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit as u8)
        }
    }
}
