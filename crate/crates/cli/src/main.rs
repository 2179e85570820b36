mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Params};

/// Everything that ends a run with a nonzero exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(cpainleve_core::Error),
    Io(String),
    /// A report was written but its acceptance threshold was not met.
    Check(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(cpainleve_core::Error::InvalidInput(_)) => 2,
            _ => 1,
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Numerical(e) => e.tag(),
            Failure::Io(_) => "io",
            Failure::Check(_) => "check-failed",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Check(m) => m.clone(),
            Failure::Numerical(e) => e.to_string(),
        }
    }
}

impl From<cpainleve_core::Error> for Failure {
    fn from(e: cpainleve_core::Error) -> Self {
        Failure::Numerical(e)
    }
}

fn load_config(flags: Params) -> Result<Params, Failure> {
    let Some(path) = flags.config.clone() else {
        return Ok(flags);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let file: Params = toml::from_str(&text)
        .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?;
    Ok(flags.or(file))
}

fn run(argv: impl IntoIterator<Item = OsString>) -> Result<(), Failure> {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(Failure::Usage(e.render().to_string().trim().to_string())),
    };
    let (name, flags) = cli.command.split();
    let params = load_config(flags)?;
    let report = commands::dispatch(name, &params)?;
    output::emit(&report.table, params.format.unwrap_or(args::Format::Csv), params.out.as_deref())?;
    match report.verdict {
        Some(failure) => Err(failure),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let record = json!({ "error": failure.tag(), "message": failure.message() });
            eprintln!("{record}");
            ExitCode::from(failure.exit_code())
        }
    }
}
