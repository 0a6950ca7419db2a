//! `hedgebench`: run a seeded benchmark experiment and emit the aggregate.
//!
//! A thin wrapper over `hedgeopt::bench`: assemble a configuration from an
//! optional key=value file plus flag overrides, run the trials, and write
//! the aggregate as CSV or plot data to a file or stdout.
//!
//! Exit codes: 0 on success, 1 for configuration problems (bad flags, bad
//! config file, unknown function), 2 for runtime failures (all trials
//! failed, output not writable).

use clap::{Parser, ValueEnum};
use hedgeopt::bench::{
    aggregate, emit_csv, emit_plotdata, parse_config, parse_spec, parse_strategy,
    run_experiment, write_csv_to, write_plotdata_to, ExperimentConfig,
};
use hedgeopt::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hedgebench",
    version,
    about = "Benchmark a portfolio of acquisition functions on the bundled test surfaces"
)]
struct Cli {
    /// Plain-text key=value experiment configuration; flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Benchmark surface: branin, hartmann3, or hartmann6.
    #[arg(long, value_name = "NAME")]
    function: Option<String>,

    /// Selection strategy: hedge, exp3, or single:SPEC (e.g. single:ei:xi=0.01).
    #[arg(long, value_name = "NAME")]
    strategy: Option<String>,

    /// Acquisition spec such as ei:xi=0.01 or gpucb:delta=0.1,nu=0.2.
    /// Repeatable; giving any replaces the whole portfolio (restate
    /// --strategy single:... against the new arms if you use one).
    #[arg(long = "spec", value_name = "SPEC")]
    specs: Vec<String>,

    /// Iterations per trial.
    #[arg(long, value_name = "N")]
    iterations: Option<usize>,

    /// Number of independent trials; trial k runs with seed SEED + k.
    #[arg(long, value_name = "N")]
    trials: Option<usize>,

    /// Base seed.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,

    /// Learning rate of the exponential-weights selection.
    #[arg(long, value_name = "ETA")]
    eta: Option<f64>,

    /// Uniform mixing weight between 0 and 1 (exp3 only).
    #[arg(long = "exp3-mix", value_name = "MIX")]
    exp3_mix: Option<f64>,

    /// Output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    emit: Emit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    /// iteration,mean_gap,var_gap,mean_cum_regret rows.
    Csv,
    /// Whitespace-separated block with arm-frequency columns.
    Plotdata,
}

fn build_config(cli: &Cli) -> hedgeopt::Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config file {}: {e}", path.display()))
            })?;
            parse_config(&text)?
        }
        None => ExperimentConfig::new("branin"),
    };
    if let Some(function) = &cli.function {
        config.function_name = function.clone();
    }
    if !cli.specs.is_empty() {
        config.portfolio_specs =
            cli.specs.iter().map(|s| parse_spec(s)).collect::<hedgeopt::Result<Vec<_>>>()?;
    }
    if let Some(strategy) = &cli.strategy {
        config.strategy = parse_strategy(strategy, &config.portfolio_specs)?;
    }
    if let Some(iterations) = cli.iterations {
        config.iterations = iterations;
    }
    if let Some(trials) = cli.trials {
        config.trials = trials;
    }
    if let Some(seed) = cli.seed {
        config.base_seed = seed;
    }
    if let Some(eta) = cli.eta {
        config.eta = eta;
    }
    if let Some(mix) = cli.exp3_mix {
        config.exp3_mix = mix;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let config = match build_config(&cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("hedgebench: {e}");
            return ExitCode::from(1);
        }
    };

    let record = match run_experiment(&config) {
        Ok(record) => record,
        Err(e) => {
            eprintln!("hedgebench: {e}");
            return ExitCode::from(if e.is_config_error() { 1 } else { 2 });
        }
    };
    if record.failed_trials > 0 {
        eprintln!(
            "hedgebench: warning: {} of {} trials failed and were excluded",
            record.failed_trials, config.trials
        );
    }

    let report = match aggregate(&record) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("hedgebench: {e}");
            return ExitCode::from(2);
        }
    };

    let written = match (&cli.out, cli.emit) {
        (Some(path), Emit::Csv) => emit_csv(&report, path),
        (Some(path), Emit::Plotdata) => emit_plotdata(&report, path),
        (None, Emit::Csv) => write_csv_to(&report, &mut std::io::stdout().lock())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
        (None, Emit::Plotdata) => write_plotdata_to(&report, &mut std::io::stdout().lock())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hedgebench: {e}");
            ExitCode::from(2)
        }
    }
}
