//! `warpbank` command-line tool.

mod commands;
mod error;
mod signal;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "warpbank", version, about = "Warped nonuniform filter banks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design a bank and write its spec file.
    Design(commands::DesignArgs),
    /// Analyze a signal into a coefficient container.
    Analyze(commands::AnalyzeArgs),
    /// Reconstruct a signal from a coefficient container.
    Synthesize(commands::SynthesizeArgs),
    /// Compute frame bounds and write a report.
    Diagnose(commands::DiagnoseArgs),
}

fn configure_threads() {
    let Ok(value) = std::env::var("WARPBANK_THREADS") else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        _ => eprintln!("warning: ignoring WARPBANK_THREADS={value}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match cli.command {
        Command::Design(args) => commands::design(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Synthesize(args) => commands::synthesize(args),
        Command::Diagnose(args) => commands::diagnose(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code as u8)
        }
    }
}
