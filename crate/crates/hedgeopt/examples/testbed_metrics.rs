//! Tour the bundled benchmark surfaces and the run-quality metrics: look
//! functions up in the registry, probe them, and turn a toy run into gap
//! and regret traces.
//!
//! Run with: cargo run --example testbed_metrics

use hedgeopt::testbed::{gap_metric, regret_traces, registry, GapTrace};
use hedgeopt::Point;

fn main() -> hedgeopt::Result<()> {
    // The registry re-derives each recorded optimum with an independent
    // search the first time it is touched, and refuses to hand out a
    // function whose constants fail that check.
    println!("registered benchmark surfaces:");
    for fun in registry() {
        let center: Point = (0..fun.domain().dim())
            .map(|k| fun.domain().lower()[k] + 0.5 * fun.domain().range(k))
            .collect::<Vec<f64>>()
            .into();
        println!(
            "  {:<10} d = {}, optimum {:+.6}, value at center {:+.6}",
            fun.name(),
            fun.domain().dim(),
            fun.f_opt(),
            fun.eval(&center)?
        );
    }

    // Out-of-domain points are rejected, not silently clipped.
    let branin = registry().iter().find(|f| f.name() == "branin").expect("registered");
    let err = branin.eval(&vec![-6.0, 0.0].into()).unwrap_err();
    println!("\nprobing branin outside its box: {err}");

    // The gap metric normalizes progress: 0 = no better than the first
    // sample, 1 = optimum reached. A toy run on a made-up objective with
    // optimum 10, starting from 2:
    let samples = [2.0, 1.5, 6.0, 6.0, 9.0, 10.0];
    println!("\nsamples {samples:?}, optimum 10:");
    println!("  final gap  {:.3}", gap_metric(10.0, samples[0], 10.0)?);
    let trace = GapTrace::from_samples(&samples, 10.0)?;
    println!("  gap trace  {:?}", trace.values);
    let regret = regret_traces(&samples, 10.0)?;
    println!("  instantaneous regret {:?}", regret.instantaneous);
    println!("  cumulative regret    {:?}", regret.cumulative);
    Ok(())
}
