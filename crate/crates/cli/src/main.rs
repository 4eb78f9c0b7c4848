//! Batch front end: config-driven sweeps, validation suites and pipeline
//! comparisons with machine-readable output.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage/config error.

use clap::{Args, Parser, Subcommand};
use semiscat::sweep::{self, SweepConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "semiscat", version, about = "Semiclassical 1D scattering sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write CSV or JSON rows.
    Sweep(SweepArgs),
    /// Run the validation suite; exit 0 iff all checks pass.
    Validate(ValidateArgs),
    /// Compare two sweep configs over identical grids.
    Compare(CompareArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// TOML sweep configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Regime threshold nu_0 override.
    #[arg(long)]
    regime_threshold: Option<f64>,
}

#[derive(Args)]
struct ValidateArgs {
    /// TOML configuration (the shipped default when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Emit the report as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    config_a: PathBuf,
    #[arg(long)]
    config_b: PathBuf,
    /// Output path for the JSON diff report (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

const DEFAULT_CONFIG: &str = include_str!("../../../configs/default.toml");

fn load_config(path: &PathBuf) -> Result<SweepConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("config parse error: {e}"))
}

fn set_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write output: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> ExitCode {
    set_jobs(args.jobs);
    let mut config = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if args.regime_threshold.is_some() {
        config.regime_threshold = args.regime_threshold;
    }
    let rows = match sweep::run_sweep(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match args.format.as_str() {
        "csv" => sweep::rows_to_csv(&rows),
        "json" => sweep::rows_to_json(&config, &rows),
        other => {
            eprintln!("unknown format '{other}' (use csv or json)");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_out(&args.out, &text) {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn cmd_validate(args: ValidateArgs) -> ExitCode {
    let config: SweepConfig = match &args.config {
        Some(p) => match load_config(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        None => toml::from_str(DEFAULT_CONFIG).expect("shipped default config"),
    };
    let checks = match sweep::validate(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("validation aborted: {e}");
            return ExitCode::from(2);
        }
    };
    let all_pass = checks.iter().all(|c| c.pass);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&checks).unwrap());
    } else {
        println!(
            "{:<34} {:>14} {:>12} {:>6}",
            "check", "measured", "threshold", "pass"
        );
        for c in &checks {
            println!(
                "{:<34} {:>14.4e} {:>12.1e} {:>6}",
                c.name,
                c.measured,
                c.threshold,
                if c.pass { "ok" } else { "FAIL" }
            );
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_compare(args: CompareArgs) -> ExitCode {
    set_jobs(args.jobs);
    let (ca, cb) = match (load_config(&args.config_a), load_config(&args.config_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let (ra, rb) = match (sweep::run_sweep(&ca), sweep::run_sweep(&cb)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match sweep::compare(&ra, &rb) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("usage error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&report).unwrap();
    if let Err(e) = write_out(&args.out, &format!("{text}\n")) {
        eprintln!("{e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Compare(a) => cmd_compare(a),
    }
}
