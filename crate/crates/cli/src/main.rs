mod args;
mod cache;
mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format, JobConfig};
use commands::Report;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters: exit status 2.
    Usage(String),
    /// A computation failed: exit status 1.
    Failure(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<koornwinder::Error> for CliError {
    fn from(e: koornwinder::Error) -> Self {
        use koornwinder::Error as E;
        match e {
            E::InvalidParams(_)
            | E::Range(_)
            | E::Dimension { .. }
            | E::NotDominant(_)
            | E::Parse(_)
            | E::Quadrature(_)
            | E::InsufficientData(_) => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out =
                serde_json::to_vec_pretty(&report.json).map_err(|e| CliError::Io(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .flexible(true)
                .from_writer(Vec::new());
            for record in &report.csv {
                w.write_record(record)
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
        Format::Pretty => Ok(report.pretty.clone().into_bytes()),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let env_cache = std::env::var_os("KOORN_CACHE").map(PathBuf::from);
    let job = JobConfig::resolve(cli.command.flags(), env_cache)?;
    let report = match &cli.command {
        Command::Poly(_) => commands::cmd_poly(&job)?,
        Command::Spectrum(_) => commands::cmd_spectrum(&job)?,
        Command::Gram(_) => commands::cmd_gram(&job)?,
        Command::Reflect(_) => commands::cmd_reflect(&job)?,
        Command::Grassmann(_) => commands::cmd_grassmann(&job)?,
    };
    let bytes = render(&report, job.format)?;
    match &job.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("koorn: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
