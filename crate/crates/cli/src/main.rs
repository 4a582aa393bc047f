//! Batch front end for the poset-duality library.
//!
//! Exit status: 0 when every verdict holds, 1 when some verdict is false (the
//! report is still written), 2 on usage, validation or budget errors.

mod commands;
mod instance;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use poset_duality::group::{Caps, DEFAULT_ENUMERATION_CAP, DEFAULT_SCHEME_CAP, DEFAULT_SUBGROUP_CAP};
use poset_duality::survey::DEFAULT_MAX_N;

use crate::commands::{Check, PiArgs, SurveyArgs};
use crate::instance::Instance;

/// Errors that end the run with exit status 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
}

impl CliError {
    pub fn invalid(e: impl std::fmt::Display) -> CliError {
        CliError::Invalid(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Invalid(m) => write!(f, "error: {m}"),
        }
    }
}

pub struct Output {
    pub text: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "poset-duality", version, about = "Weight partitions of poset metrics on finite abelian groups and their duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Instance file (JSON).
    #[arg(long, global = true)]
    instance: Option<PathBuf>,

    /// Coefficient ring for `pi`: int, rational, modp:<p> or symbolic.
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Per-element tau: comma-separated values, `sizes`, `generic` or `random`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tau: Option<String>,

    /// Per-element eta: comma-separated values, `sizes`, `tau-1`, `generic` or `random`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    eta: Option<String>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for `random` parameters.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest group that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap_enum: u64,

    /// Largest group whose subgroup lattice may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBGROUP_CAP)]
    cap_subgroups: u64,

    /// Largest group on which the cubic scheme axioms are checked.
    #[arg(long, global = true, default_value_t = DEFAULT_SCHEME_CAP)]
    cap_scheme: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Poset summary: ideals, levels and the hierarchical characterisations.
    Inspect,
    /// Weight partition, its dual computed two ways, and reflexivity verdicts.
    Partitions,
    /// MacWilliams identity for one code or every subgroup.
    Macwilliams {
        /// Generator codeword, residues run together (`01`) or dot-separated (`0.1`).
        #[arg(long = "gen")]
        generators: Vec<String>,
        #[arg(long)]
        all_subgroups: bool,
    },
    /// The ideal-sum polynomial pi(Y, D) with optional identity checks.
    Pi {
        /// Comma-separated elements of Y; defaults to the whole ground set.
        #[arg(long, value_delimiter = ',')]
        y: Option<Vec<String>>,
        /// Comma-separated elements of D.
        #[arg(long, value_delimiter = ',', default_value = "")]
        d: Vec<String>,
        /// A single maximal element for the removal and addition checks.
        #[arg(long)]
        e: Option<String>,
        /// Comma-separated checks, or `all`.
        #[arg(long, default_value = "")]
        check: String,
    },
    /// One row of verdicts per labeled poset and size assignment.
    Survey {
        /// Number of poset elements swept.
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Also sweep every size from this one up to `--max-n`.
        #[arg(long)]
        min_n: Option<usize>,
        /// Comma-separated cyclic orders assigned to each element.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        sizes: Vec<u64>,
        /// Refuse sweeps above this many elements.
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        cap_n: usize,
    },
}

fn load(cli: &Cli, caps: Caps) -> Result<Instance, CliError> {
    let path = cli.instance.as_ref().ok_or_else(|| CliError::Usage("--instance is required".into()))?;
    Instance::load(path, caps)
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let caps = Caps { enumerate: cli.cap_enum, subgroups: cli.cap_subgroups, scheme: cli.cap_scheme };
    let json_only = |name: &str| match cli.format {
        Some(Format::Csv) => Err(CliError::Usage(format!("{name} only writes JSON"))),
        _ => Ok(()),
    };
    match &cli.command {
        Command::Inspect => {
            json_only("inspect")?;
            commands::inspect(&load(cli, caps)?)
        }
        Command::Partitions => {
            json_only("partitions")?;
            commands::partitions(&load(cli, caps)?)
        }
        Command::Macwilliams { generators, all_subgroups } => {
            commands::macwilliams(&load(cli, caps)?, generators, *all_subgroups, cli.format.unwrap_or(Format::Csv))
        }
        Command::Pi { y, d, e, check } => {
            json_only("pi")?;
            let args = PiArgs {
                ring: cli.ring.clone(),
                tau: cli.tau.clone(),
                eta: cli.eta.clone(),
                seed: cli.seed,
                y: y.clone(),
                d: d.iter().filter(|s| !s.is_empty()).cloned().collect(),
                e: e.clone(),
                checks: Check::parse_list(check)?,
            };
            commands::pi(&load(cli, caps)?, &args)
        }
        Command::Survey { max_n, min_n, sizes, cap_n } => {
            let args = SurveyArgs { min_n: *min_n, max_n: *max_n, sizes: sizes.clone(), cap_n: *cap_n };
            commands::survey(&args, caps, cli.format.unwrap_or(Format::Csv))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &out.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(out.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("some verdict is false; see the report");
        ExitCode::from(1)
    }
}
