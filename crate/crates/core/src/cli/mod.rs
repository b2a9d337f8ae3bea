//! Command-line experiment runner.
//!
//! Exit codes: 0 all checks passed, 1 a check failed (the report is still
//! written), 2 invalid arguments (nothing on standard output), 3 numerical or
//! I/O failure.

mod args;
mod commands;
mod output;
mod suite;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

pub use args::{Cli, Command, Format};
pub use output::{
    format_float, write_csv, write_json, Check, CheckStatus, Relation, RunReport, SCHEMA_VERSION,
    UNIT_SYSTEM,
};
pub use suite::report_all;

use crate::cloud::CloudError;
use crate::kinematics::KinematicsError;
use crate::numerics::NumericsError;
use crate::uncertainty::UncertaintyError;
use crate::vacuum::VacuumError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl From<KinematicsError> for CliError {
    fn from(e: KinematicsError) -> Self {
        match e {
            KinematicsError::InvalidParameter { .. }
            | KinematicsError::DimensionMismatch { .. }
            | KinematicsError::StepTooLarge { .. }
            | KinematicsError::BudgetExceeded { .. }
            | KinematicsError::TooFewRecords { .. }
            | KinematicsError::InvalidBinning => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

macro_rules! numerical_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Numerical(e.to_string())
            }
        }
    )*};
}

numerical_from!(NumericsError, CloudError, UncertaintyError, VacuumError);

pub(crate) fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report payloads serialize")
}

/// Parses, runs and emits a report; returns the process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "tremor: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut report = commands::dispatch(&cli.command, cli.format)?;
    if !cli.no_timestamp {
        report.timestamp_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    let value = to_value(&report);
    match &cli.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            emit(&mut file, &value, cli.format)?;
            file.flush()?;
        }
        None => emit(stdout, &value, cli.format)?,
    }
    Ok(if report.any_failed() {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

fn emit(w: &mut dyn Write, value: &Value, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(w, value)?,
        Format::Csv => write_csv(w, value)?,
    }
    Ok(())
}
