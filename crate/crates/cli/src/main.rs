//! `qroots`: run verification suites and inspect elements.
//!
//! Exit codes: 0 every check passed, 1 some check failed, 2 bad config or input.

use clap::{Parser, Subcommand};
use qroots_core::suites::{dump_element, run_suite, Config, ConfigError, Status, SuiteReport, SUITES};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qroots", version, about = "Exact checks for quantum groups at roots of unity")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a suite (or `all`) and write its JSON report.
    Verify {
        /// hopf, pbw, braid, pairing, modules, coordring, omega, local-formulas, center, poisson, azumaya or all
        suite: String,
        #[arg(long)]
        config: String,
        /// Report path; overrides `output` in the config. Without either the report goes to stdout.
        #[arg(long)]
        out: Option<String>,
        /// Include wall time in the report (breaks byte-identical reruns).
        #[arg(long)]
        timing: bool,
    },
    /// Parse an element, normalize it and print its PBW forms.
    Dump {
        expr: String,
        #[arg(long)]
        config: String,
        /// Print the dump as JSON.
        #[arg(long)]
        json: bool,
    },
    /// List the registered suites.
    Suites,
}

fn config_error(e: ConfigError) -> ExitCode {
    eprintln!("config error: {e}");
    ExitCode::from(2)
}

fn verify(suite: &str, config: &str, out: Option<String>, timing: bool) -> ExitCode {
    let cfg = match Config::load(config) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        match run_suite(name, &cfg) {
            Ok(r) => {
                for c in &r.checks {
                    let tag = match c.status {
                        Status::Pass => "pass",
                        Status::Fail => "FAIL",
                        Status::Skipped => "skip",
                    };
                    eprintln!("{tag:4}  {name}/{}", c.name);
                }
                eprintln!("{name}: {} ms", r.wall_time_ms.unwrap_or(0));
                reports.push(r);
            }
            Err(e) => return config_error(e),
        }
    }
    let text = if reports.len() == 1 {
        reports[0].to_json(timing)
    } else {
        let vals: Vec<serde_json::Value> =
            reports.iter().map(|r| serde_json::from_str(&r.to_json(timing)).expect("report is JSON")).collect();
        serde_json::to_string_pretty(&vals).expect("reports serialize") + "\n"
    };
    match out.or(cfg.output.clone()) {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("cannot write '{path}': {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if reports.iter().all(SuiteReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dump(expr: &str, config: &str, json: bool) -> ExitCode {
    let cfg = match Config::load(config) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    match dump_element(expr, &cfg) {
        Ok(d) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&d).expect("dump serializes"));
            } else {
                println!("{}", d.canonical);
                println!("divided: {}", d.divided);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    // a panicking check is reported as failed; keep stderr to one line
    std::panic::set_hook(Box::new(|info| eprintln!("panic: {info}")));
    match Cli::parse().cmd {
        Cmd::Verify { suite, config, out, timing } => verify(&suite, &config, out, timing),
        Cmd::Dump { expr, config, json } => dump(&expr, &config, json),
        Cmd::Suites => {
            for s in SUITES {
                println!("{s}");
            }
            ExitCode::SUCCESS
        }
    }
}
