use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wdparity::commands;
use wdparity::datum::{self, Parsed};
use wdparity::report::Report;

/// Local and global parity signs of symplectic Weil-Deligne data.
#[derive(Parser, Debug)]
#[command(name = "wdparity", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    /// Treat warnings as failures.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Output {
    Text,
    Record,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local sign at each place, by every route, with identity checks.
    EpsLocal { file: PathBuf },
    /// Cohomology dimensions from a numerology.
    Formulary { file: PathBuf },
    /// Global parity report of a point, or constancy across a family.
    Global { file: PathBuf },
    /// Validation log only.
    Verify { file: PathBuf },
    /// Randomized identity suites.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

fn load(path: &PathBuf) -> Result<Parsed, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    datum::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: &Cli) -> Result<Report, String> {
    let report = match &cli.command {
        Command::EpsLocal { file } => {
            commands::eps_local(&load(file)?).map_err(|e| e.to_string())?
        }
        Command::Formulary { file } => {
            commands::formulary(&load(file)?).map_err(|e| e.to_string())?
        }
        Command::Global { file } => commands::global(&load(file)?).map_err(|e| e.to_string())?,
        Command::Verify { file } => commands::verify(&load(file)?),
        Command::Selfcheck { seed, cases } => commands::selfcheck(*seed, *cases),
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.output {
                Output::Text => report.to_text(cli.strict),
                Output::Record => report.to_record(cli.strict),
            };
            print!("{text}");
            if report.passed(cli.strict) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
