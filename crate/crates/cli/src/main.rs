mod args;
mod commands;
mod emit;
mod scan;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::{Cli, Command, Format, OUTPUT_DIR_ENV};
use commands::{UsageError, Units};
use emit::{write_to, NonFinite, Style};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;
const EXIT_VERIFY_FAILED: u8 = 5;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        // reader went away, e.g. piped into `head`
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain()
        .filter_map(|e| e.downcast_ref::<std::io::Error>())
        .any(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use anyon_thermo::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    if err.downcast_ref::<NonFinite>().is_some() {
        return EXIT_NUMERICAL;
    }
    match err.downcast_ref::<E>() {
        Some(E::NoBracket { .. }) => EXIT_NUMERICAL,
        Some(E::InvalidParameter { .. } | E::EmptyAntisymmetric { .. } | E::TooLarge { .. } | E::Infeasible(_)) => {
            EXIT_DOMAIN
        }
        _ => EXIT_IO,
    }
}

fn output_path(given: Option<PathBuf>) -> Option<PathBuf> {
    let path = given?;
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Some(PathBuf::from(dir).join(path)),
        _ => Some(path),
    }
}

fn run(cli: Cli) -> Result<u8> {
    let style = Style { precision: cli.output.precision };
    let units = Units::select(cli.output.si);
    let mut code = 0;
    let (out, default_format) = match &cli.command {
        Command::Props(a) => (commands::props(a, units, style)?, Format::Json),
        Command::Scan(a) => (commands::scan(a, units, style)?, Format::Json),
        Command::Stirling(a) => (commands::stirling(a, units, style)?, Format::Json),
        Command::Otto(a) => (commands::otto(a, units, style)?, Format::Json),
        Command::Qubits(a) => (commands::qubits(a, units, style)?, Format::Json),
        Command::Verify(a) => {
            let checks = verify::run_checks(a.thorough)?;
            if !checks.iter().all(verify::Check::passed) {
                code = EXIT_VERIFY_FAILED;
            }
            (verify::output(&checks, style)?, Format::Table)
        }
    };
    let bytes = out.render(style, cli.output.format.unwrap_or(default_format))?;
    write_to(output_path(cli.output.output).as_deref(), &bytes)?;
    Ok(code)
}
