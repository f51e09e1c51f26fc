//! Command-line front end: config parsing, subcommands and output formats.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.
//! Failures are reported on stderr as `error kind=<kind> msg="<message>"`.

pub mod commands;
pub mod config;
pub mod csv;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
pub use commands::{Options, Report};
pub use config::{emit_config, parse_config, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "roadfield",
    version,
    about = "Spreading speeds for KPP fronts along a road"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    /// Tolerance of the critical speed search.
    #[arg(long, global = true, value_name = "X", default_value_t = commands::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Critical speeds in both directions.
    Speed,
    /// Closed-form threshold against the computed speed over a sweep.
    Thresholds,
    /// Stationary solution (U, V(y)).
    Stationary,
    /// Finite-difference simulation with front tracking.
    Simulate,
    /// Large-D and large-q constants h and k.
    Limits,
    /// SVG of the dispersion sets.
    Geometry,
    /// Critical speeds over a parameter grid.
    Sweep,
}

fn quote(msg: &str) -> String {
    msg.replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', " ")
}

/// The machine-readable error line.
pub fn error_line(err: &Error) -> String {
    format!(
        "error kind={} msg=\"{}\"",
        err.kind(),
        quote(&err.to_string())
    )
}

/// Exit status for a failure.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_config() {
        EXIT_CONFIG
    } else {
        EXIT_NUMERICAL
    }
}

/// Run one subcommand with a parsed config.
pub fn dispatch(command: Command, cfg: &RunConfig, opts: &Options) -> Result<Report> {
    match command {
        Command::Speed => commands::cmd_speed(cfg, opts),
        Command::Thresholds => commands::cmd_thresholds(cfg, opts),
        Command::Stationary => commands::cmd_stationary(cfg, opts),
        Command::Simulate => commands::cmd_simulate(cfg, opts),
        Command::Limits => commands::cmd_limits(cfg, opts),
        Command::Geometry => commands::cmd_geometry(cfg, opts),
        Command::Sweep => commands::cmd_sweep(cfg, opts),
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config {
        line: 0,
        message: "missing --config PATH".into(),
    })?;
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Error::invalid("tol", cli.tol, "must be positive"));
    }
    let workers = match cli.workers {
        Some(0) => return Err(Error::invalid("workers", 0.0, "must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let cfg = commands::load_config(path)?;
    let opts = Options {
        out: cli.out.clone(),
        tol: cli.tol,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config {
            line: 0,
            message: format!("cannot start {workers} workers: {e}"),
        })?;
    pool.install(|| dispatch(cli.command, &cfg, &opts))
}

/// Parse arguments, run, print, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            for line in &report.stdout {
                println!("{line}");
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            EXIT_OK
        }
        Err(err) => {
            eprintln!("{}", error_line(&err));
            exit_code(&err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_line_is_quoted() {
        let err = Error::Config {
            line: 3,
            message: "bad \"x\"".into(),
        };
        assert_eq!(
            error_line(&err),
            "error kind=config msg=\"line 3: bad \\\"x\\\"\""
        );
        assert_eq!(exit_code(&err), EXIT_CONFIG);
        let num = Error::NoFront { threshold: 0.5 };
        assert_eq!(exit_code(&num), EXIT_NUMERICAL);
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli =
            Cli::try_parse_from(["roadfield", "speed", "--config", "a.toml", "--workers", "2"])
                .unwrap();
        assert_eq!(cli.command, Command::Speed);
        assert_eq!(cli.workers, Some(2));
        assert_eq!(cli.tol, commands::DEFAULT_TOL);
    }
}
