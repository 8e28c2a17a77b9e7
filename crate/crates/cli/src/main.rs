//! `bspdc`: command-line front end. Every subcommand writes one CSV table to
//! stdout, to `--output`, or into `$BSPDC_OUTPUT_DIR`.

mod commands;
mod failure;
mod grid;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{AmplitudeArgs, DualityArgs, ObservablesCommand, QpdcArgs};
use output::{destination, OUTPUT_DIR_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "bspdc",
    version,
    about = "Beam-splitter / parametric-amplifier duality simulator"
)]
struct Cli {
    /// CSV destination; relative paths resolve against the output directory.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Directory receiving `<command>.csv` when `--output` is not given.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV)]
    output_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One transition amplitude through several evaluation routes.
    Amplitude(AmplitudeArgs),
    /// Exhaustive duality check; exits 1 when a residual exceeds the tolerance.
    DualityCheck(DualityArgs),
    /// Truncated amplifier transition probabilities over a gain grid.
    Qpdc(QpdcArgs),
    /// Photon-number and quadrature observables.
    Observables {
        #[command(subcommand)]
        which: ObservablesCommand,
    },
    #[command(hide = true)]
    SelfTest,
}

impl Command {
    fn default_file(&self) -> &'static str {
        match self {
            Command::Amplitude(_) => "amplitude.csv",
            Command::DualityCheck(_) => "duality.csv",
            Command::Qpdc(_) => "qpdc.csv",
            Command::Observables {
                which: ObservablesCommand::Ratio(_),
            } => "ratio.csv",
            Command::Observables {
                which: ObservablesCommand::Fluctuation(_),
            } => "fluctuation.csv",
            Command::SelfTest => "self-test.csv",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = destination(
        cli.output.as_deref(),
        cli.output_dir.as_deref(),
        cli.command.default_file(),
    );
    let path = path.as_deref();
    let result = match &cli.command {
        Command::Amplitude(a) => commands::amplitude(a, path),
        Command::DualityCheck(a) => commands::duality(a, path),
        Command::Qpdc(a) => commands::qpdc(a, path),
        Command::Observables { which } => commands::observables(which, path),
        Command::SelfTest => selftest::run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bspdc: {e}");
            e.exit_code()
        }
    }
}
