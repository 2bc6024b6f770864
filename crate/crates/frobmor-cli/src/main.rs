use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use frobmor::harness::{run_suite, Report, SessionConfig, Suite};

/// Verification suites for chains of injective maps over k[x]/(x^n).
#[derive(Parser, Debug)]
#[command(name = "frobmor", version)]
struct Args {
    /// Characteristic of the ground field.
    #[arg(long, default_value_t = 5)]
    p: u32,
    /// Nilpotency order of x.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Chain length.
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    trials: usize,
    /// Bound on the dimension of each generated term.
    #[arg(long = "max-dim", default_value_t = 6)]
    max_dim: usize,
    /// One of exactness, sod, polygon, mutations, theta-sigma, adjoints, duality, or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long = "json-out")]
    json_out: Option<PathBuf>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("frobmor: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = SessionConfig { p: args.p, n: args.n, l: args.l, seed: args.seed, trials: args.trials, max_dim: args.max_dim };
    if let Err(e) = cfg.validate() {
        return usage(e);
    }
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match args.suite.parse() {
            Ok(s) => vec![s],
            Err(e) => return usage(e),
        }
    };
    let mut reports: Vec<Report> = Vec::new();
    for suite in suites {
        match run_suite(suite, &cfg) {
            Ok(r) => {
                print!("{}", r.text());
                reports.push(r);
            }
            Err(e) => return usage(e),
        }
    }
    if let Some(path) = &args.json_out {
        let json = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])
        } else {
            serde_json::to_string_pretty(&reports)
        }
        .expect("reports serialize");
        if path.as_os_str() == "-" {
            println!("{json}");
        } else if let Err(e) = std::fs::write(path, json + "\n") {
            eprintln!("frobmor: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if reports.iter().all(Report::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
