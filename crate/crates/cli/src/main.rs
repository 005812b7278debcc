use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncdelay::{commands, CliError, Scenario};

/// Per-packet delay bounds for FIFO rate-latency servers.
#[derive(Parser)]
#[command(name = "ncdelay", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classic and per-length delay bounds for a scenario.
    Bound {
        config: PathBuf,
        /// Also write the table as CSV (bits and seconds).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build the execution that attains the bound for `lengths[0]`.
    Tightness {
        config: PathBuf,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Simulate seeds × policies and check every packet against its bound.
    Simulate {
        config: PathBuf,
        /// Overrides `sim.seeds`.
        #[arg(long)]
        seeds: Option<u64>,
        /// Per-run results as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Built-in case studies.
    Casestudy {
        study: Study,
        /// Override a parameter, e.g. `--param n=8`.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Study {
    Drr,
    Cbs,
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Bound { config, csv } => {
            commands::bound(&Scenario::load(&config)?, csv.as_deref(), out)
        }
        Command::Tightness { config, trace_out } => {
            commands::tightness(&Scenario::load(&config)?, trace_out.as_deref(), out)
        }
        Command::Simulate { config, seeds, csv } => {
            commands::simulate_cmd(&Scenario::load(&config)?, seeds, csv.as_deref(), out)
        }
        Command::Casestudy {
            study: Study::Drr,
            params,
        } => commands::casestudy_drr(&params, out),
        Command::Casestudy {
            study: Study::Cbs,
            params,
        } => commands::casestudy_cbs(&params, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let outcome = run(cli, &mut out);
    let _ = out.flush();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncdelay: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
