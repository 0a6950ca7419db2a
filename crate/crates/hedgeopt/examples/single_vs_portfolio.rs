//! The crate's central comparison, in miniature: run the same budget of
//! iterations with each acquisition function alone and with the Hedge
//! portfolio over all of them, and compare mean final gaps across seeded
//! trials.
//!
//! The full-scale version of this experiment (100 iterations, 25 trials)
//! is what the `hedgebench` binary and the acceptance suite run; this
//! example trims the counts to finish in a few seconds.
//!
//! Run with: cargo run --release --example single_vs_portfolio

use hedgeopt::bench::{aggregate, run_experiment, ExperimentConfig};
use hedgeopt::Strategy;

fn main() -> hedgeopt::Result<()> {
    let mut config = ExperimentConfig::new("branin");
    config.iterations = 30;
    config.trials = 8;

    println!("branin, {} iterations, {} trials each:\n", config.iterations, config.trials);
    let mut results: Vec<(String, f64)> = Vec::new();
    let strategies = [
        Strategy::Hedge,
        Strategy::Single(0),
        Strategy::Single(1),
        Strategy::Single(2),
    ];
    for strategy in strategies {
        config.strategy = strategy;
        let record = run_experiment(&config)?;
        let report = aggregate(&record)?;
        let final_mean = *report.mean_gap.last().expect("non-empty");
        let final_var = *report.var_gap.last().expect("non-empty");
        println!(
            "  {:<22} mean final gap {:.4} (variance {:.5})",
            config.strategy_label(),
            final_mean,
            final_var
        );
        results.push((config.strategy_label(), final_mean));
    }

    let (best_name, best_gap) =
        results[1..].iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty").clone();
    let (hedge_name, hedge_gap) = results[0].clone();
    println!("\nbest single strategy here: {best_name} at {best_gap:.4}");
    println!("the portfolio ({hedge_name}) reached {hedge_gap:.4} without knowing in advance which arm to trust");
    Ok(())
}
