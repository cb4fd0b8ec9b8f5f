//! `spiral-dims`: command-line front end for the spiral dimension laboratory.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod config;
mod output;
mod svg;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use crate::cli::Cli;

/// Machine-readable error record on stderr.
fn report(kind: &str, message: &str) -> ExitCode {
    let rec = json!({ "schema": output::SCHEMA, "error": { "kind": kind, "message": message } });
    let _ = writeln!(std::io::stderr(), "{rec}");
    ExitCode::from(2)
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let argv = match config::expand_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => return report("config", &format!("{e:#}")),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report("usage", e.to_string().trim()),
    };
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e
                .downcast_ref::<spiral_dims::Error>()
                .map_or("runtime", spiral_dims::Error::kind);
            report(kind, &format!("{e:#}"))
        }
    }
}
