use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod render;

use commands::{CommandError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "thr", version, about = "Mackey functors, dihedral nerves and cube assemblies for real THH")]
struct Cli {
    /// Output format for the report on stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,

    /// Suppress progress messages on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Presentation of pi0 THR(A), the Frobenius sequence and the alpha verdict.
    Pi0thr {
        /// Ring spec file.
        spec: PathBuf,
    },
    /// Compare pi0 THR(A) tensored up to B with pi0 THR(B).
    Basechange {
        /// Spec file of the source ring A.
        source: PathBuf,
        /// Spec file of the target ring B.
        target: PathBuf,
        /// Ring map file: `images = [...]`, one target expression per source generator.
        #[arg(long)]
        hom: PathBuf,
    },
    /// A weight piece of the dihedral nerve of a monoid.
    Nerve {
        /// Monoid spec file (a `[monoid]` section).
        spec: PathBuf,
        /// Weight as comma-separated coordinates, e.g. `2` or `1,-1`.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        weight: Vec<i64>,
        /// Truncation degree.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=12))]
        q_max: u64,
        /// Bound on the entries x_1..x_q; needed when the weight fiber is infinite.
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        window: Option<i64>,
        /// Homology of the normalized chains.
        #[arg(long)]
        homology: bool,
        /// Components of the fixed points of the edgewise subdivision.
        #[arg(long)]
        fixed_pi0: bool,
        /// Check every structural identity.
        #[arg(long)]
        validate: bool,
    },
    /// Weight-by-weight certificates for projective lines and spaces.
    Projective {
        /// One of 1, sigma, 2, 3, 4.
        #[arg(value_parser = ["1", "sigma", "2", "3", "4"])]
        space: String,
        /// Weight window: |v|_inf bound.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..=8))]
        window: i64,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run a single criterion.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10))]
        criterion: Option<u32>,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CommandError> {
    match &cli.command {
        Command::Pi0thr { spec } => commands::pi0thr(spec),
        Command::Basechange { source, target, hom } => commands::basechange(source, target, hom),
        Command::Nerve { spec, weight, q_max, window, homology, fixed_pi0, validate } => commands::nerve(
            spec,
            &commands::NerveOptions {
                weight: weight.clone(),
                q_max: *q_max as usize,
                window: *window,
                homology: *homology,
                fixed_pi0: *fixed_pi0,
                validate: *validate,
            },
        ),
        Command::Projective { space, window } => commands::projective(space, *window),
        Command::Selftest { criterion } => commands::selftest(*criterion),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.quiet { log::LevelFilter::Warn } else { log::LevelFilter::Info })
        .format_timestamp(None)
        .format_target(false)
        .init();

    match run(&cli) {
        Ok(outcome) => {
            print!("{}", render::outcome(&outcome, cli.format));
            ExitCode::from(outcome.exit_code())
        }
        Err(err) => {
            if cli.format == Format::Json {
                print!("{}", render::error(&err));
            }
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
