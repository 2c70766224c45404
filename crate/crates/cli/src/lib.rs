//! `codemix` command-line front end.
//!
//! Exit codes: 0 success, 1 output or internal failure, 2 usage or input
//! error (nothing is written), 3 translation backend failure.

mod clean;
mod commands;
pub mod config;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use clean::clean_line;
pub use commands::{clean, generate, segment, stats, Output};
pub use config::{BackendChoice, Flags, Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "codemix", version, about = "Synthesize code-switched text from dependency parses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Split CoNLL-U sentences into clause and adjunct segments (segments.jsonl)
    Segment,
    /// Generate code-switched variants (generated.jsonl)
    Generate,
    /// Remove mentions, URLs and hashtags from plain-text lines (cleaned.txt)
    Clean,
    /// Corpus statistics for generated JSONL or `form/lang` tagged text
    Stats,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Backend(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::Backend(_) => EXIT_BACKEND,
            CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {}", m),
            CliError::Input(m) => write!(f, "input error: {}", m),
            CliError::Backend(m) => write!(f, "backend error: {}", m),
            CliError::Io(m) => write!(f, "i/o error: {}", m),
        }
    }
}

impl std::error::Error for CliError {}

/// Runs one command and writes its output to `--out` or `stdout`.
pub fn execute(command: Command, config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let output = match command {
        Command::Segment => segment(config)?,
        Command::Generate => generate(config)?,
        Command::Clean => clean(config)?,
        Command::Stats => stats(config)?,
    };
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match &config.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            let path = dir.join(output.file_name);
            std::fs::write(&path, &output.body).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
        }
        None => stdout.write_all(output.body.as_bytes()).map_err(io)?,
    }
    if !output.summary.is_empty() {
        stderr.write_all(output.summary.as_bytes()).map_err(io)?;
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let text = e.render().to_string();
            return if informational {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_INPUT
            };
        }
    };
    let result = RunConfig::resolve(&cli.flags).and_then(|config| execute(cli.command, &config, stdout, stderr));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "codemix: {}", e);
            e.exit_code()
        }
    }
}
