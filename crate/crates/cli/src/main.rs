mod args;
mod commands;
mod output;
mod verify;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use output::{write_report, Exit, Failure, Metadata};

/// Sizes the global rayon pool from `SECST_THREADS` when set.
fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SECST_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::validation(format!("SECST_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::validation(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<Exit, Failure> {
    configure_threads()?;
    let cmd = &cli.command;
    let report = match cmd {
        Command::Matrix(a) => commands::matrix(a)?,
        Command::Pnd(a) => commands::pnd(a)?,
        Command::QSurface(a) => commands::q_surface(a)?,
        Command::Capacity(a) => commands::capacity(a)?,
        Command::Wigner(a) => commands::wigner(a)?,
        Command::Marginal(a) => commands::marginal(a)?,
        Command::Verify(a) => verify::verify(a)?,
    };
    let out = cmd.output();
    let meta = Metadata { command: cmd.name(), format: out.format, config: cmd.config() };
    write_report(&meta, &report, out.output.as_deref())?;

    if report.failures > 0 {
        return Err(Failure {
            exit: Exit::Numerical,
            kind: "verification",
            message: format!("{} check(s) exceeded the tolerance", report.failures),
        });
    }
    let lossy = report.accuracy_warnings();
    if out.strict && lossy > 0 {
        let first = report.warnings.iter().find(|w| w.is_accuracy_loss()).expect("counted above");
        return Err(Failure {
            exit: Exit::Numerical,
            kind: "strict",
            message: format!("{lossy} accuracy warning(s), first: {first}"),
        });
    }
    Ok(Exit::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            Failure::validation(first.trim_start_matches("error: ")).emit();
            return ExitCode::from(Exit::Validation as u8);
        }
    };
    match run(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(f) => {
            f.emit();
            ExitCode::from(f.exit as u8)
        }
    }
}
