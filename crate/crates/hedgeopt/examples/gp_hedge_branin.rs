//! Drive the portfolio loop by hand on the negated Branin surface and
//! watch Hedge reweight its three acquisition functions as evidence
//! accumulates.
//!
//! Run with: cargo run --example gp_hedge_branin

use hedgeopt::testbed::{gap_metric, lookup};
use hedgeopt::{
    gp_hedge_step, AcquisitionSpec, Dataset, KernelParams, Point, PortfolioState,
    ProposalBudget, Strategy,
};
use rand::SeedableRng;

fn main() -> hedgeopt::Result<()> {
    let fun = lookup("branin")?;
    let domain = fun.domain();
    let mut objective = |x: &Point| fun.eval(x);

    // Two corner-ish starting samples, far from every optimum.
    let mut data = Dataset::new();
    for coords in [vec![-4.0, 1.0], vec![8.0, 13.0]] {
        let x: Point = coords.into();
        let y = objective(&x)?;
        data.push(x, y)?;
    }
    let f_first = data.observations()[0].y;

    let specs = vec![
        AcquisitionSpec::ei(0.01),
        AcquisitionSpec::pi(0.01),
        AcquisitionSpec::gp_ucb(0.1, 0.2),
    ];
    let labels: Vec<String> = specs.iter().map(|s| s.label()).collect();
    let mut state = PortfolioState::new(specs.len(), 1.0, Strategy::Hedge)?;
    // Length scales of a quarter domain width per axis work fine here
    // without any fitting (the benchmark harness fits them instead).
    let params = KernelParams::new(vec![3.75, 3.75], 1e-6)?;
    let budget = ProposalBudget::default_for_dim(domain.dim());
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);

    println!("arms: 0 = {}, 1 = {}, 2 = {}\n", labels[0], labels[1], labels[2]);
    println!("iter  arm        y        best       gap   p(arms)");
    for t in 1..=25 {
        let step = gp_hedge_step(
            &mut state, &mut data, &specs, &params, &mut objective, domain, &budget, &mut rng,
        )?;
        let best = data.best().expect("non-empty").y;
        let gap = gap_metric(best, f_first, fun.f_opt())?;
        let probs: Vec<String> =
            step.probabilities.iter().map(|p| format!("{p:.2}")).collect();
        println!(
            "{t:>4}  {:>3}  {:>8.3}  {:>8.3}  {:>8.3}   [{}]",
            step.chosen,
            step.observed,
            best,
            gap,
            probs.join(" ")
        );
    }
    println!(
        "\noptimum value {:.6}; the gap column shows the fraction of the way\n\
         from the first sample to that optimum.",
        fun.f_opt()
    );
    println!("final cumulative gains per arm: {:?}", state.gains);
    Ok(())
}
