//! Produce the benchmark artifacts programmatically: one CSV of the
//! aggregate traces and one plot-data file stacking two strategy series
//! as separate blocks (ready for gnuplot's `index` addressing or any
//! whitespace-tolerant plotting tool).
//!
//! The `hedgebench` binary does the same from the command line:
//!
//!   hedgebench --function branin --iterations 40 --trials 5 --out gap.csv
//!   hedgebench --function branin --strategy exp3 --emit plotdata --out gap.dat
//!
//! Run with: cargo run --release --example benchmark_csv

use hedgeopt::bench::{
    aggregate, emit_csv, run_experiment, write_plotdata_to, ExperimentConfig,
};
use hedgeopt::Strategy;
use std::io::Write;

fn main() -> hedgeopt::Result<()> {
    let mut config = ExperimentConfig::new("branin");
    config.iterations = 40;
    config.trials = 5;

    // Hedge series.
    let hedge_report = aggregate(&run_experiment(&config)?)?;
    emit_csv(&hedge_report, "branin_hedge.csv")?;
    println!("wrote branin_hedge.csv ({} data rows)", hedge_report.mean_gap.len());

    // Exp3 series on the same budget, stacked into one plot-data file.
    config.strategy = Strategy::Exp3;
    let exp3_report = aggregate(&run_experiment(&config)?)?;
    let path = "branin_strategies.dat";
    let mut out = std::fs::File::create(path)
        .map_err(|source| hedgeopt::Error::Io { path: path.into(), source })?;
    for report in [&hedge_report, &exp3_report] {
        write_plotdata_to(report, &mut out)
            .map_err(|source| hedgeopt::Error::Io { path: path.into(), source })?;
    }
    out.flush().map_err(|source| hedgeopt::Error::Io { path: path.into(), source })?;
    println!("wrote {path} (blocks: {}, {})", hedge_report.series, exp3_report.series);

    println!("\nfinal mean gap: hedge {:.4}, exp3 {:.4}",
        hedge_report.mean_gap.last().expect("non-empty"),
        exp3_report.mean_gap.last().expect("non-empty"));
    println!("arm-selection frequencies at the last iteration (hedge): {:?}",
        hedge_report.arm_frequency.last().expect("non-empty"));
    Ok(())
}
