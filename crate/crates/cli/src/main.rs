//! `orderlab`: JSON front end for the orderlab library.
//!
//! Exit codes: 0 pass, 1 fail (certificate or violated invariant),
//! 2 inconclusive (bounded search exhausted), 3 usage or input error.

mod commands;
mod input;
mod schema;

use std::io::Write;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::Parser;
use serde::Serialize;
use serde_json::Value;

use commands::Outcome;

pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "orderlab",
    version,
    about = "Left orders, circle actions and elementary decompositions"
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Report wallTimeMs as 0 so identical runs give identical bytes.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Print the JSON schema of this subcommand's report and exit.
    #[arg(long, global = true)]
    schema: bool,
    /// Give up after this many milliseconds and report inconclusive.
    #[arg(long, global = true)]
    time_budget_ms: Option<u64>,
    #[command(subcommand)]
    command: commands::Command,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ReportEnvelope {
    tool_version: &'static str,
    subcommand: &'static str,
    config: Value,
    result: Value,
    verdict: commands::Verdict,
    wall_time_ms: u64,
}

fn schema_request(args: &[String]) -> Option<Result<&'static str, String>> {
    if !args.iter().any(|a| a == "--schema") {
        return None;
    }
    let name = args.iter().skip(1).find(|a| !a.starts_with('-'))?;
    Some(schema::for_subcommand(name).ok_or_else(|| format!("unknown subcommand '{name}'")))
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("ORDERLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("ORDERLAB_THREADS must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn emit(path: Option<&std::path::Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => {
            std::fs::write(p, format!("{text}\n")).map_err(|e| format!("{}: {e}", p.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| e.to_string())
        }
    }
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

/// Runs the command on a worker thread; on timeout the worker is abandoned
/// and the process exits once the report is written.
fn run_with_budget(command: commands::Command, budget_ms: Option<u64>) -> Result<Outcome, String> {
    let Some(ms) = budget_ms else {
        return commands::run(&command).map_err(|e| e.to_string());
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(commands::run(&command).map_err(|e| e.to_string()));
    });
    match rx.recv_timeout(Duration::from_millis(ms)) {
        Ok(outcome) => outcome,
        Err(_) => Ok(Outcome {
            result: serde_json::json!({"status": "timeBudgetExceeded", "timeBudgetMs": ms}),
            verdict: commands::Verdict::Inconclusive,
        }),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if let Some(schema) = schema_request(&args) {
        return match schema {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(&e),
        };
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        return usage_error(&e);
    }
    let start = Instant::now();
    let subcommand = cli.command.name();
    let mut config = cli.command.config();
    if let Some(ms) = cli.time_budget_ms {
        config["timeBudgetMs"] = ms.into();
    }
    let Outcome { result, verdict } = match run_with_budget(cli.command, cli.time_budget_ms) {
        Ok(o) => o,
        Err(e) => return usage_error(&e),
    };
    let envelope = ReportEnvelope {
        tool_version: env!("CARGO_PKG_VERSION"),
        subcommand,
        config,
        result,
        verdict,
        wall_time_ms: if cli.reproducible {
            0
        } else {
            start.elapsed().as_millis() as u64
        },
    };
    let text = serde_json::to_string_pretty(&envelope).expect("report serializes");
    if let Err(e) = emit(cli.output.as_deref(), &text) {
        return usage_error(&e);
    }
    ExitCode::from(verdict.exit_code())
}
