//! Command-line front end: parameter intake, pipeline wiring and
//! deterministic CSV/JSON emission.
//!
//! Exit status: 0 on success, 2 for invalid input, 3 for a numerical
//! failure. Errors are reported on stderr as `{"error": {"code", "message"}}`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use config::{KRange, OdeConfig, Overrides, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Core(vortfront_core::Error),
    Config(String),
    Io(String),
    /// Some pipeline stages failed; the partial result was still written.
    Incomplete(String),
}

impl From<vortfront_core::Error> for CliError {
    fn from(e: vortfront_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Config(m) | CliError::Io(m) => f.write_str(m),
            CliError::Incomplete(m) => write!(f, "incomplete result: {m}"),
        }
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Config(_) => "CONFIG",
            CliError::Io(_) => "IO",
            CliError::Incomplete(_) => "INCOMPLETE",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Config(_) => 2,
            CliError::Core(_) | CliError::Io(_) | CliError::Incomplete(_) => 3,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            code: &'a str,
            message: String,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        serde_json::to_string(&Wrapper {
            error: Body {
                code: self.code(),
                message: self.to_string(),
            },
        })
        .unwrap_or_else(|_| format!("{{\"error\":{{\"code\":\"{}\"}}}}", self.code()))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "vortfront",
    version,
    about = "Solitary waves on a two-layer constant-vorticity channel flow"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Region label, θ, c* and equilibrium interfaces, as JSON on stdout.
    Classify(Overrides),
    /// (k, 𝔡(k)) samples as CSV.
    Dispersion(Overrides),
    /// Reduced-ODE trajectory as CSV.
    Ode(Overrides),
    /// Field grid (X, Y, U, V, Psi, layer) as CSV.
    Construct(Overrides),
    /// Diagnostics report as JSON.
    Validate(Overrides),
    /// Streamline portrait CSV plus stagnation JSON.
    Portrait(Overrides),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Dispersion(_) => "dispersion",
            Command::Ode(_) => "ode",
            Command::Construct(_) => "construct",
            Command::Validate(_) => "validate",
            Command::Portrait(_) => "portrait",
        }
    }

    fn overrides(&self) -> &Overrides {
        match self {
            Command::Classify(o)
            | Command::Dispersion(o)
            | Command::Ode(o)
            | Command::Construct(o)
            | Command::Validate(o)
            | Command::Portrait(o) => o,
        }
    }
}

/// What a command produced: text for stdout and the files it wrote. A
/// command can succeed in writing output and still carry an error (e.g. a
/// partial diagnostics report).
pub struct Outcome {
    pub stdout: String,
    pub error: Option<CliError>,
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    let cfg = cmd.overrides().resolve()?;
    let name = cmd.name();
    match cmd {
        Command::Classify(_) => commands::classify(&cfg),
        Command::Dispersion(_) => commands::dispersion(&cfg, name),
        Command::Ode(_) => commands::ode(&cfg, name),
        Command::Construct(_) => commands::construct(&cfg, name),
        Command::Validate(_) => commands::validate(&cfg, name),
        Command::Portrait(_) => commands::portrait(&cfg, name),
    }
}

/// Runs a parsed command, prints its output, and returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let (stdout, err) = match execute(&cli.command) {
        Ok(o) => (o.stdout, o.error),
        Err(e) => (String::new(), Some(e)),
    };
    // A closed pipe is not worth a panic; the exit status still tells.
    if !stdout.is_empty() {
        let _ = writeln!(std::io::stdout(), "{stdout}");
    }
    match err {
        None => 0,
        Some(e) => {
            let _ = writeln!(std::io::stderr(), "{}", e.to_json());
            e.exit_code()
        }
    }
}
