//! Command-line front end of `qaoa-ring`.
//!
//! Every subcommand writes its tables as CSV (with `#` metadata lines), any
//! schedules as JSON, and a `<subcommand>.manifest.json` recording the
//! command line, configuration, seed and SHA-256 digests of the outputs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod par;
pub mod schedule_io;
pub mod verify;

use std::ffi::OsString;

use chrono::{SecondsFormat, Utc};
use clap::Parser;

use args::{Cli, Command, Globals};
use error::{CliError, CliResult};
use output::{write_manifest, write_outputs, Report, RunManifest};

fn check_globals(g: &Globals) -> CliResult<()> {
    if let Some(n) = g.n {
        if n < 4 || n % 2 != 0 {
            return Err(CliError::usage(format!("--n must be even and at least 4, got {n}")));
        }
    }
    if !(g.tol_bound > 0.0 && g.tol_iter > 0.0) {
        return Err(CliError::usage("tolerances must be positive"));
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> CliResult<Report> {
    check_globals(&cli.globals)?;
    let g = &cli.globals;
    match &cli.command {
        Command::Optimize(a) => commands::optimize(g, a),
        Command::Regular(a) => commands::regular(g, a),
        Command::Minima(a) => commands::minima(g, a),
        Command::Scaling(a) => commands::scaling(g, a),
        Command::Entropy(a) => commands::entropy(g, a),
        Command::Collapse(a) => commands::collapse(g, a),
        Command::Verify(a) => commands::verify_cmd(g, a),
        Command::Cost(a) => commands::cost(g, a),
    }
}

fn finish(cli: &Cli, argv: &[OsString], started: String, report: &Report) -> CliResult<bool> {
    let outputs = write_outputs(report, &cli.globals.out)?;
    let manifest = RunManifest {
        command_line: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        subcommand: cli.command.name().to_string(),
        config: serde_json::json!({
            "globals": cli.globals,
            "command": cli.command,
            "resolved": report.config,
        }),
        rng_seed: cli.globals.seed,
        serial: cli.globals.serial,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        started_at: started,
        finished_at: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
        checks: report.checks.clone(),
        passed: report.passed(),
        outputs,
    };
    let path = write_manifest(&manifest, &cli.globals.out)?;
    for c in &report.checks {
        println!("{}", c.line());
    }
    for o in &manifest.outputs {
        println!("wrote {}", o.path);
    }
    println!("wrote {}", path.display());
    Ok(manifest.passed)
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code: 0 on success, 1 on a failed check or runtime error,
/// 2 on a usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let started = Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true);
    let outcome = execute(&cli).and_then(|report| finish(&cli, &argv, started, &report));
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("error: verification failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
