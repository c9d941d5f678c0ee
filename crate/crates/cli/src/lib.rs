//! Command line harness for `hopfjoin`: configuration, the `verify`, `solve`,
//! `sweep`, `q3` and `fibers` subcommands, and their JSON and CSV outputs.
//!
//! Exit codes: 0 when every verdict passes, 1 when one fails, 2 for
//! configuration and file-system errors, 3 for numeric failures.

pub mod args;
pub mod config;
pub mod error;
pub mod fibers;
pub mod output;
pub mod q3;
pub mod solve;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

pub use args::{Cli, Command};
pub use config::{load, CMode, Mode, RunConfig, Tolerances};
pub use error::{CliError, CliResult};

use output::{emit, to_json};

/// What a finished command reports back to the shell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub passed: bool,
    /// Human readable lines for stderr.
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn verdict_line(name: &str, pass: bool) -> String {
    format!("{} {name}", if pass { "PASS" } else { "FAIL" })
}

pub fn execute(config: &RunConfig) -> CliResult<Outcome> {
    let out = config.out.as_deref();
    match config.mode {
        Mode::Verify => {
            let report = verify::cmd_verify(config)?;
            emit(&to_json(&report), out)?;
            let v = serde_json::to_value(report.verdicts).expect("verdicts serialize");
            let summary = v
                .as_object()
                .into_iter()
                .flatten()
                .map(|(k, pass)| verdict_line(k, pass.as_bool().unwrap_or(false)))
                .collect();
            Ok(Outcome { passed: report.passed, summary })
        }
        Mode::Solve => {
            let solved = solve::cmd_solve(config)?;
            let mut summary = Vec::new();
            for p in &solved {
                summary.push(format!("wrote {} {}", p.json.display(), p.csv.display()));
            }
            let monotone = solved.iter().all(|p| p.monotone);
            summary.push(verdict_line("monotone", monotone));
            Ok(Outcome { passed: monotone, summary })
        }
        Mode::Sweep => {
            let report = sweep::cmd_sweep(config)?;
            emit(&to_json(&report), out)?;
            let underflows = report
                .cells
                .iter()
                .filter(|c| c.lower.stopped.is_some() || c.upper.stopped.is_some())
                .count();
            let summary = vec![format!(
                "{} cells, {} conformal, {} stopped early",
                report.cells.len(),
                report.conformal_cells,
                underflows
            )];
            Ok(Outcome { passed: true, summary })
        }
        Mode::Q3 => {
            let report = q3::cmd_q3(config)?;
            emit(&to_json(&report), out)?;
            let mut summary = vec![verdict_line("harmonic", report.verdicts.harmonic)];
            if let Some(b) = report.verdicts.bracket_identity {
                summary.push(verdict_line("bracket_identity", b));
            }
            Ok(Outcome { passed: report.passed, summary })
        }
        Mode::Fibers => {
            let report = fibers::cmd_fibers(config)?;
            let path = config.out.clone().unwrap_or_else(|| PathBuf::from(".")).join("fibers.json");
            output::write_text(&path, &to_json(&report))?;
            let mut summary: Vec<String> = report
                .fibers
                .iter()
                .map(|f| format!("wrote {} ({} points)", f.csv, f.points))
                .collect();
            summary.push(verdict_line("fibers", report.passed));
            Ok(Outcome { passed: report.passed, summary })
        }
    }
}

/// Loads the configuration of a parsed command line and runs it.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let (mode, file, flags) = cli.command.parts();
    let config = load(mode, file.as_deref(), flags)?;
    execute(&config)
}
