mod args;
mod commands;
mod config;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, GLOBAL_FLAGS, GLOBAL_VALUED};

const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// The command-line tokens after the program name, minus presentation options.
fn echo(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if GLOBAL_FLAGS.contains(&a.as_str()) {
            continue;
        }
        if GLOBAL_VALUED.contains(&a.as_str()) {
            it.next();
            continue;
        }
        if GLOBAL_VALUED.iter().any(|g| a.strip_prefix(g).is_some_and(|r| r.starts_with('='))) {
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<unipotent_lab::Error>() {
        Some(unipotent_lab::Error::TooLarge(_)) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let limits = match config::load(cli.config.as_deref()) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let start = Instant::now();
    match commands::run(&cli.command, &limits) {
        Ok(mut report) => {
            report.echo = echo(&argv);
            if cli.timings {
                report.elapsed = Some(start.elapsed().as_secs_f64());
            }
            let mut out = std::io::stdout().lock();
            if out.write_all(report.render(cli.format).as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(report.outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
