//! Fit a Gaussian process to a handful of 1-D samples and print the
//! posterior along a grid, first with hand-picked hyperparameters and then
//! with fitted ones.
//!
//! Run with: cargo run --example gp_regression

use hedgeopt::gp::{fit_hyperparams, log_marginal_likelihood};
use hedgeopt::{Dataset, GpModel, KernelParams, Point};
use rand::SeedableRng;

fn target(x: f64) -> f64 {
    (3.0 * x).sin() + 0.5 * x
}

fn main() -> hedgeopt::Result<()> {
    // Seven noiseless samples of a smooth function on [0, 3].
    let xs = [0.0, 0.4, 0.9, 1.3, 1.9, 2.4, 3.0];
    let mut data = Dataset::new();
    for x in xs {
        data.push(vec![x].into(), target(x))?;
    }

    // A deliberately mediocre guess: length scale 1, a little noise.
    let guess = KernelParams::isotropic(1, 1.0, 1e-4)?;
    println!("guessed params:  theta = {:?}, noise = {:.1e}", guess.theta, guess.noise_variance);
    println!("  log marginal likelihood = {:.4}", log_marginal_likelihood(&data, &guess)?);

    // Multistart maximum-likelihood fit over the same data.
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
    let fitted = fit_hyperparams(&data, &[(1e-2, 30.0)], (1e-6, 1e-1), &mut rng)?;
    println!(
        "fitted params:   theta = [{:.4}], noise = {:.3e}",
        fitted.theta[0], fitted.noise_variance
    );
    println!("  log marginal likelihood = {:.4}", log_marginal_likelihood(&data, &fitted)?);

    // Posterior under the fitted model. At the samples the mean should
    // interpolate and the uncertainty should collapse; between them it
    // widens.
    let model = GpModel::build(data, fitted)?;
    println!("\n     x      truth      mean    std dev");
    for i in 0..=15 {
        let x = 3.0 * i as f64 / 15.0;
        let p: Point = vec![x].into();
        let post = model.predict(&p)?;
        println!("{x:6.2}  {:9.4}  {:8.4}  {:9.4}", target(x), post.mean, post.std_dev());
    }
    Ok(())
}
