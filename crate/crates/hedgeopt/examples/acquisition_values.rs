//! Score a grid of points under every closed-form acquisition function and
//! print the surfaces side by side, showing how each criterion trades off
//! the posterior mean against its uncertainty.
//!
//! Run with: cargo run --example acquisition_values

use hedgeopt::acquisition::{acquisition_value, gp_ucb_beta};
use hedgeopt::{AcquisitionSpec, Dataset, GpModel, IncumbentContext, KernelParams, Point};

fn main() -> hedgeopt::Result<()> {
    // Three observations of a bumpy function on [0, 1]; the incumbent is
    // the middle sample.
    let mut data = Dataset::new();
    for (x, y) in [(0.1, 0.3), (0.5, 0.8), (0.9, 0.2)] {
        data.push(vec![x].into(), y)?;
    }
    let f_plus = data.best().expect("non-empty").y;
    let model = GpModel::build(data, KernelParams::isotropic(1, 0.2, 1e-6)?)?;
    let ctx = IncumbentContext { f_plus, t: 4, d: 1 };

    let specs = [
        AcquisitionSpec::pi(0.01),
        AcquisitionSpec::ei(0.01),
        AcquisitionSpec::ucb(1.5),
        AcquisitionSpec::eipi(0.01, 1.0),
        AcquisitionSpec::gp_ucb(0.1, 0.2),
    ];
    println!(
        "gp-ucb schedule: beta_4 = {:.4} (grows with t, shrinks nothing)",
        gp_ucb_beta(ctx.t, ctx.d, 0.1, 0.2)?
    );
    println!("\n    x      mean     std |        pi        ei       ucb      eipi     gpucb");
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        let p: Point = vec![x].into();
        let post = model.predict(&p)?;
        print!("{x:5.2}  {:7.3} {:7.3} |", post.mean, post.std_dev());
        for spec in &specs {
            print!("  {:8.4}", acquisition_value(spec, &post, &ctx)?);
        }
        println!();
    }
    println!(
        "\nPI spikes only where beating the incumbent is likely; EI also weighs\n\
         how much better; the confidence bounds reward plain uncertainty."
    );
    Ok(())
}
