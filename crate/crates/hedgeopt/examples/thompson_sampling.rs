//! Propose points by Thompson sampling: draw one joint function sample
//! from the posterior over a candidate set and take its argmax. Repeating
//! the draw shows the proposals concentrating where the model is good
//! while still occasionally exploring.
//!
//! Run with: cargo run --example thompson_sampling

use hedgeopt::optimizer::propose_thompson;
use hedgeopt::{BoxDomain, Dataset, GpModel, KernelParams};
use rand::SeedableRng;

fn main() -> hedgeopt::Result<()> {
    // A 1-D model that clearly prefers the middle of the domain.
    let mut data = Dataset::new();
    for (x, y) in [(0.05, 0.1), (0.35, 0.9), (0.65, 0.85), (0.95, 0.0)] {
        data.push(vec![x].into(), y)?;
    }
    let model = GpModel::build(data, KernelParams::isotropic(1, 0.15, 1e-6)?)?;
    let domain = BoxDomain::from_bounds(&[(0.0, 1.0)])?;

    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2024);
    let mut histogram = [0usize; 10];
    let draws = 400;
    for _ in 0..draws {
        let x = propose_thompson(&model, &domain, 256, &mut rng)?;
        histogram[((x[0] * 10.0) as usize).min(9)] += 1;
    }

    println!("where {draws} posterior-sample proposals landed:");
    for (i, count) in histogram.iter().enumerate() {
        println!(
            "[{:.1}, {:.1})  {:>4}  {}",
            i as f64 / 10.0,
            (i + 1) as f64 / 10.0,
            count,
            "#".repeat(count / 4)
        );
    }
    println!(
        "\nMost proposals cluster around the high-mean region near x = 0.5, but\n\
         the tails are not empty: a random function draw sometimes peaks in\n\
         uncertain territory, which is the exploration half of the bargain."
    );
    Ok(())
}
