//! Bandit allocation over a portfolio of acquisition functions.
//!
//! Each iteration, every acquisition function nominates a point; an
//! exponential-weights bandit picks which nominee to actually evaluate.
//! Under the full-information Hedge strategy every arm is afterwards
//! rewarded with the updated posterior mean at its nominee; the Exp3
//! variant rewards only the selected arm, importance-weighted by its
//! pre-mixing selection probability. A `Single(i)` strategy short-circuits
//! selection to arm `i`, turning the loop into plain single-acquisition
//! Bayesian optimization while keeping the same bookkeeping.
//!
//! The loop step (`gp_hedge_step`) is deliberately rigid about its order of
//! operations and random-draw sequence so whole runs are bit-reproducible
//! from the seed.

use crate::acquisition::{AcquisitionKind, AcquisitionSpec, IncumbentContext};
use crate::error::{Error, Result};
use crate::gp::{GpModel, KernelParams};
use crate::optimizer::{propose, propose_thompson, ProposalBudget};
use crate::types::{BoxDomain, Dataset, Point};
use rand::Rng;

/// How the portfolio chooses among nominees each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Full information: softmax selection, every arm rewarded each step.
    Hedge,
    /// Partial information: uniform-mixed softmax selection, only the
    /// chosen arm rewarded (importance-weighted).
    Exp3,
    /// Always play arm `i`; gains stay untouched.
    Single(usize),
}

/// Cumulative gains and selection parameters of the bandit layer.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioState {
    /// Cumulative gain per arm, starts at 0.
    pub gains: Vec<f64>,
    /// Learning rate η > 0 of the exponential weights.
    pub eta: f64,
    /// Uniform mixing weight in \\[0,1\\]; consulted by Exp3 only.
    pub exp3_mix: f64,
    /// Selection strategy.
    pub strategy: Strategy,
}

impl PortfolioState {
    /// Fresh state with zero gains for `n_arms` arms and the default Exp3
    /// mixing weight of 0.1.
    pub fn new(n_arms: usize, eta: f64, strategy: Strategy) -> Result<Self> {
        if n_arms == 0 {
            return Err(Error::InvalidArgument("portfolio needs at least one arm".into()));
        }
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
        }
        if let Strategy::Single(i) = strategy {
            if i >= n_arms {
                return Err(Error::InvalidArgument(format!(
                    "single-arm strategy index {i} out of range for {n_arms} arms"
                )));
            }
        }
        Ok(PortfolioState { gains: vec![0.0; n_arms], eta, exp3_mix: 0.1, strategy })
    }

    /// Same state with a different Exp3 mixing weight.
    pub fn with_exp3_mix(mut self, mix: f64) -> Result<Self> {
        if !mix.is_finite() || !(0.0..=1.0).contains(&mix) {
            return Err(Error::InvalidArgument(format!("exp3 mix must lie in [0,1], got {mix}")));
        }
        self.exp3_mix = mix;
        Ok(self)
    }

    /// Number of arms.
    pub fn n_arms(&self) -> usize {
        self.gains.len()
    }
}

/// The nominees of one iteration and the rewards they earned from the
/// updated model.
#[derive(Debug, Clone, PartialEq)]
pub struct NomineeSet {
    /// One nominee per arm, in arm order.
    pub nominees: Vec<Point>,
    /// Posterior mean at each nominee under the model that already saw the
    /// new observation.
    pub rewards: Vec<f64>,
}

/// Everything one loop iteration produced.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    /// Which arm's nominee was evaluated.
    pub chosen: usize,
    /// Selection probabilities in effect when the choice was made.
    pub probabilities: Vec<f64>,
    /// Nominees and their rewards.
    pub nominees: NomineeSet,
    /// The observed objective value at the chosen nominee.
    pub observed: f64,
}

fn check_gains(gains: &[f64], eta: f64) -> Result<()> {
    if gains.is_empty() {
        return Err(Error::InvalidArgument("gains vector is empty".into()));
    }
    if let Some(bad) = gains.iter().find(|g| !g.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite gain {bad}")));
    }
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
    }
    Ok(())
}

/// Softmax selection probabilities p(j) ∝ exp(η·g_j), computed after
/// subtracting the maximum gain so the exponentials cannot overflow.
/// Entries sum to 1 within 1e-12 and are strictly positive up to
/// floating-point underflow (an arm hundreds of nats behind the leader
/// flushes to exactly 0).
pub fn hedge_probabilities(gains: &[f64], eta: f64) -> Result<Vec<f64>> {
    check_gains(gains, eta)?;
    let m = gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = gains.iter().map(|g| (eta * (g - m)).exp()).collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Exp3 selection probabilities: (1 − mix)·hedge + mix·uniform. Every entry
/// is at least mix/N.
pub fn exp3_probabilities(gains: &[f64], eta: f64, mix: f64) -> Result<Vec<f64>> {
    if !mix.is_finite() || !(0.0..=1.0).contains(&mix) {
        return Err(Error::InvalidArgument(format!("mix must lie in [0,1], got {mix}")));
    }
    let hedge = hedge_probabilities(gains, eta)?;
    let uniform = mix / gains.len() as f64;
    Ok(hedge.into_iter().map(|p| (1.0 - mix) * p + uniform).collect())
}

/// Inverse-CDF draw from a categorical distribution over arm indices.
///
/// Consumes exactly one uniform draw — except for a single-arm
/// distribution, which is deterministic and consults no randomness at all
/// (this keeps a one-arm portfolio run stream-identical to a plain
/// single-acquisition loop).
pub fn select_nominee<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Result<usize> {
    if probs.is_empty() {
        return Err(Error::InvalidArgument("empty probability vector".into()));
    }
    let mut total = 0.0;
    for p in probs {
        if !p.is_finite() || *p < 0.0 {
            return Err(Error::InvalidArgument(format!("bad probability {p}")));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
    }
    if probs.len() == 1 {
        return Ok(0);
    }
    let u: f64 = rng.random();
    let mut cum = 0.0;
    for (i, p) in probs.iter().enumerate() {
        cum += p;
        if u < cum {
            return Ok(i);
        }
    }
    // Round-off pushed the cumulative sum a hair under u; the draw belongs
    // to the final arm.
    Ok(probs.len() - 1)
}

/// Full-information rewards: the updated model's posterior mean at every
/// nominee. The model must already include the iteration's new observation.
pub fn compute_rewards(model_after_update: &GpModel, nominees: &[Point]) -> Result<Vec<f64>> {
    nominees.iter().map(|x| Ok(model_after_update.predict(x)?.mean)).collect()
}

/// Applies one iteration's rewards to the cumulative gains.
///
/// Hedge adds every arm's reward; Exp3 adds only the chosen arm's reward,
/// divided by its pre-mixing Hedge probability (importance weighting);
/// Single leaves the gains untouched (they are diagnostics there).
pub fn update_gains(state: &mut PortfolioState, rewards: &[f64], chosen: usize) -> Result<()> {
    if rewards.len() != state.gains.len() {
        return Err(Error::DimensionMismatch { expected: state.gains.len(), got: rewards.len() });
    }
    if chosen >= state.gains.len() {
        return Err(Error::InvalidArgument(format!(
            "chosen index {chosen} out of range for {} arms",
            state.gains.len()
        )));
    }
    if let Some(bad) = rewards.iter().find(|r| !r.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite reward {bad}")));
    }
    match state.strategy {
        Strategy::Hedge => {
            for (g, r) in state.gains.iter_mut().zip(rewards) {
                *g += r;
            }
        }
        Strategy::Exp3 => {
            let hedge = hedge_probabilities(&state.gains, state.eta)?;
            let increment = rewards[chosen] / hedge[chosen];
            if !increment.is_finite() {
                // The uniform mixing can select an arm whose pre-mixing
                // weight has already underflowed to zero, making the
                // importance weight infinite. Refuse to poison the gains;
                // the cure is a smaller eta or rewards on a tamer scale.
                return Err(Error::NumericalFailure(format!(
                    "exp3 importance weight overflowed: arm {chosen} has selection weight \
                     {:.3e} for reward {:.3e}; lower eta or standardize the objective",
                    hedge[chosen], rewards[chosen]
                )));
            }
            state.gains[chosen] += increment;
        }
        Strategy::Single(_) => {}
    }
    Ok(())
}

/// One full portfolio iteration.
///
/// In order: build the surrogate on the current data; collect one nominee
/// per arm (arm order, sharing the random stream); form selection
/// probabilities per the strategy; select (one uniform draw, none for
/// `Single` or a one-arm portfolio); evaluate the objective at the chosen
/// nominee; append the observation; rebuild the surrogate; reward every
/// nominee with the updated posterior mean; update the gains.
///
/// The iteration index used by schedule-driven acquisitions is
/// `dataset.len() + 1` — the 1-based index of the sample about to be
/// chosen. (For a run seeded with initial points the schedule is simply
/// further along by that many samples.)
///
/// Hyperparameters are the caller's: refitting on whatever schedule is
/// wanted happens between steps, not inside them.
#[allow(clippy::too_many_arguments)]
pub fn gp_hedge_step<R: Rng + ?Sized>(
    state: &mut PortfolioState,
    dataset: &mut Dataset,
    specs: &[AcquisitionSpec],
    params: &KernelParams,
    objective: &mut dyn FnMut(&Point) -> Result<f64>,
    domain: &BoxDomain,
    budget: &ProposalBudget,
    rng: &mut R,
) -> Result<StepOutcome> {
    if specs.len() != state.n_arms() {
        return Err(Error::DimensionMismatch { expected: state.n_arms(), got: specs.len() });
    }

    let model = GpModel::build(dataset.clone(), params.clone())?;
    let ctx = IncumbentContext {
        f_plus: dataset.best().map(|o| o.y).unwrap_or(0.0),
        t: dataset.len() + 1,
        d: domain.dim(),
    };

    let mut nominees = Vec::with_capacity(specs.len());
    for spec in specs {
        let nominee = if spec.kind == AcquisitionKind::Thompson {
            propose_thompson(&model, domain, spec.thompson_candidates, rng)?
        } else {
            propose(&model, spec, domain, &ctx, budget, rng)?
        };
        nominees.push(nominee);
    }

    let probabilities = match state.strategy {
        Strategy::Hedge => hedge_probabilities(&state.gains, state.eta)?,
        Strategy::Exp3 => exp3_probabilities(&state.gains, state.eta, state.exp3_mix)?,
        Strategy::Single(i) => {
            let mut p = vec![0.0; state.n_arms()];
            p[i] = 1.0;
            p
        }
    };
    let chosen = match state.strategy {
        Strategy::Single(i) => i,
        _ => select_nominee(&probabilities, rng)?,
    };

    let x_t = nominees[chosen].clone();
    let y_t = objective(&x_t)?;
    if !y_t.is_finite() {
        return Err(Error::NonFiniteObjective { point: x_t.coords, value: y_t });
    }
    dataset.push(x_t, y_t)?;

    let updated = GpModel::build(dataset.clone(), params.clone())?;
    let rewards = compute_rewards(&updated, &nominees)?;
    update_gains(state, &rewards, chosen)?;

    Ok(StepOutcome {
        chosen,
        probabilities,
        nominees: NomineeSet { nominees, rewards },
        observed: y_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::KernelParams;
    // Shadow proptest's `Strategy` trait with the portfolio enum; the
    // explicit import outranks both globs.
    use crate::portfolio::Strategy;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn equal_gains_give_the_uniform_distribution() {
        let p = hedge_probabilities(&[2.5, 2.5, 2.5], 1.0).unwrap();
        for v in &p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hedge_matches_hand_evaluated_softmax() {
        // gains (1,0) with η = ln 2: weights (2,1), so (2/3, 1/3).
        let p = hedge_probabilities(&[1.0, 0.0], 2f64.ln()).unwrap();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((p[1] - 1.0 / 3.0).abs() < 1e-15);

        // gains (1,2,3) with η = 1, frozen from 30-digit arithmetic.
        let q = hedge_probabilities(&[1.0, 2.0, 3.0], 1.0).unwrap();
        let want = [0.090_030_573_170_380_458, 0.244_728_471_054_797_65, 0.665_240_955_774_821_89];
        for (got, want) in q.iter().zip(want) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn hedge_matches_naive_softmax_where_it_does_not_overflow() {
        let mut rng = ChaCha12Rng::seed_from_u64(40);
        for _ in 0..200 {
            let n = rng.random_range(2..6);
            let gains: Vec<f64> = (0..n).map(|_| rng.random_range(-50.0..50.0)).collect();
            let eta = rng.random_range(0.1..3.0);
            let stable = hedge_probabilities(&gains, eta).unwrap();
            let weights: Vec<f64> = gains.iter().map(|g| (eta * g).exp()).collect();
            let total: f64 = weights.iter().sum();
            assert!(total.is_finite());
            for (s, w) in stable.iter().zip(&weights) {
                assert!((s - w / total).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shifting_gains_by_an_exact_constant_changes_nothing_bitwise() {
        // 1024 + {0.5, 1.5, 2.5} is exactly representable, and subtracting
        // the shifted maximum recovers the original differences exactly, so
        // the softmax is bit-identical.
        let gains = [0.5, 1.5, 2.5];
        let shifted: Vec<f64> = gains.iter().map(|g| g + 1024.0).collect();
        let a = hedge_probabilities(&gains, 0.7).unwrap();
        let b = hedge_probabilities(&shifted, 0.7).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn exp3_mixes_toward_uniform() {
        let gains = [1.0, 0.0];
        let eta = 2f64.ln();
        // mix 0 is Hedge, bit for bit.
        let h = hedge_probabilities(&gains, eta).unwrap();
        let e0 = exp3_probabilities(&gains, eta, 0.0).unwrap();
        for (x, y) in h.iter().zip(&e0) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        // mix 1 is uniform regardless of gains.
        let e1 = exp3_probabilities(&[5.0, -3.0, 0.2], 1.0, 1.0).unwrap();
        for v in &e1 {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        // Hand mixture of the (2/3, 1/3) example at mix = 0.5.
        let e = exp3_probabilities(&gains, eta, 0.5).unwrap();
        assert!((e[0] - (0.5 * 2.0 / 3.0 + 0.25)).abs() < 1e-15);
        assert!((e[1] - (0.5 / 3.0 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn probability_vectors_stay_on_the_simplex() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..300 {
            let n = rng.random_range(1..7);
            // Spreads kept under ~400 nats so the softmax cannot underflow
            // and positivity is exact (see the extreme-spread test below).
            let gains: Vec<f64> = (0..n).map(|_| rng.random_range(-100.0..100.0)).collect();
            let eta = rng.random_range(0.05..2.0);
            let mix = rng.random_range(0.0..1.0);
            let h = hedge_probabilities(&gains, eta).unwrap();
            assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(h.iter().all(|p| *p > 0.0));
            let e = exp3_probabilities(&gains, eta, mix).unwrap();
            assert!((e.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let floor = mix / n as f64;
            assert!(e.iter().all(|p| *p >= floor - 1e-15));
        }
    }

    #[test]
    fn astronomical_gain_spreads_underflow_to_zero_but_stay_normalized() {
        // exp(-2000) flushes to +0.0; the leader still gets everything and
        // the vector remains a valid distribution.
        let p = hedge_probabilities(&[0.0, -2000.0, -3000.0], 1.0).unwrap();
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        assert_eq!(select_nominee(&p, &mut rng).unwrap(), 0);
    }

    #[test]
    fn select_nominee_handles_degenerate_and_uniform_cases() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..100 {
            assert_eq!(select_nominee(&[1.0, 0.0, 0.0], &mut rng).unwrap(), 0);
        }
        let uniform = [1.0 / 3.0; 3];
        let mut counts = [0usize; 3];
        let draws = 30_000;
        for _ in 0..draws {
            counts[select_nominee(&uniform, &mut rng).unwrap()] += 1;
        }
        for c in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.02, "frequency {freq}");
        }
    }

    #[test]
    fn select_nominee_is_seed_deterministic_and_validates() {
        let p = [0.2, 0.3, 0.5];
        let a = select_nominee(&p, &mut ChaCha12Rng::seed_from_u64(9)).unwrap();
        let b = select_nominee(&p, &mut ChaCha12Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        assert!(select_nominee(&[], &mut rng).is_err());
        assert!(select_nominee(&[0.5, 0.6], &mut rng).is_err());
        assert!(select_nominee(&[0.5, f64::NAN], &mut rng).is_err());
    }

    #[test]
    fn single_arm_selection_consumes_no_randomness() {
        let mut with_select = ChaCha12Rng::seed_from_u64(77);
        assert_eq!(select_nominee(&[1.0], &mut with_select).unwrap(), 0);
        let mut untouched = ChaCha12Rng::seed_from_u64(77);
        let a: f64 = with_select.random();
        let b: f64 = untouched.random();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    fn tiny_model() -> GpModel {
        let mut ds = Dataset::new();
        ds.push(vec![0.2].into(), 0.5).unwrap();
        ds.push(vec![0.8].into(), -0.1).unwrap();
        GpModel::build(ds, KernelParams::isotropic(1, 0.4, 1e-6).unwrap()).unwrap()
    }

    #[test]
    fn rewards_are_posterior_means_at_the_nominees() {
        let model = tiny_model();
        let nominees: Vec<Point> = vec![vec![0.1].into(), vec![0.5].into(), vec![0.5].into()];
        let rewards = compute_rewards(&model, &nominees).unwrap();
        for (x, r) in nominees.iter().zip(&rewards) {
            assert!((r - model.predict(x).unwrap().mean).abs() < 1e-12);
        }
        // Identical nominees earn identical rewards.
        assert_eq!(rewards[1], rewards[2]);
    }

    #[test]
    fn update_gains_follows_each_strategy() {
        // Hedge: elementwise accumulation.
        let mut hedge = PortfolioState::new(2, 1.0, Strategy::Hedge).unwrap();
        update_gains(&mut hedge, &[0.5, 0.2], 0).unwrap();
        assert_eq!(hedge.gains, vec![0.5, 0.2]);
        update_gains(&mut hedge, &[0.1, 0.3], 1).unwrap();
        assert!((hedge.gains[0] - 0.6).abs() < 1e-15);
        assert!((hedge.gains[1] - 0.5).abs() < 1e-15);

        // Exp3 from zero gains: pre-mixing distribution is uniform, so the
        // chosen arm's reward is importance-weighted by 1/0.5.
        let mut exp3 = PortfolioState::new(2, 1.0, Strategy::Exp3).unwrap();
        update_gains(&mut exp3, &[0.5, 0.2], 0).unwrap();
        assert_eq!(exp3.gains, vec![1.0, 0.0]);

        // Single: bookkeeping only.
        let mut single = PortfolioState::new(2, 1.0, Strategy::Single(1)).unwrap();
        update_gains(&mut single, &[0.5, 0.2], 1).unwrap();
        assert_eq!(single.gains, vec![0.0, 0.0]);

        // Bad index is rejected.
        assert!(update_gains(&mut hedge, &[0.0, 0.0], 5).is_err());
        assert!(update_gains(&mut hedge, &[0.0], 0).is_err());
    }

    #[test]
    fn exp3_overflowing_importance_weight_fails_without_poisoning_gains() {
        // Arm 1 sits so far behind that its pre-mixing weight underflows to
        // exactly zero; importance-weighting a reward for it would be
        // infinite. The update must refuse and leave the gains untouched.
        let mut state = PortfolioState::new(2, 1.0, Strategy::Exp3).unwrap();
        state.gains = vec![0.0, -2000.0];
        assert_eq!(hedge_probabilities(&state.gains, state.eta).unwrap()[1], 0.0);
        let err = update_gains(&mut state, &[0.5, 0.5], 1).unwrap_err();
        assert!(matches!(err, Error::NumericalFailure(_)), "got {err:?}");
        assert_eq!(state.gains, vec![0.0, -2000.0]);
        // A zero reward over a zero weight (NaN) is refused the same way.
        assert!(update_gains(&mut state, &[0.5, 0.0], 1).is_err());
        // The healthy arm still updates fine.
        update_gains(&mut state, &[0.5, 0.0], 0).unwrap();
        assert_eq!(state.gains, vec![0.5, -2000.0]);
    }

    fn branin_like(x: &Point) -> Result<f64> {
        // Any smooth deterministic stand-in works for loop tests.
        Ok(-(x[0] - 0.3) * (x[0] - 0.3))
    }

    #[test]
    fn one_step_grows_the_dataset_by_one_and_single_reduces() {
        let domain = BoxDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        let specs = vec![AcquisitionSpec::ei(0.01)];
        let params = KernelParams::isotropic(1, 0.3, 1e-6).unwrap();
        let budget = ProposalBudget { n_candidates: 40, n_local_steps: 4, local_shrink: 0.5 };
        let mut state = PortfolioState::new(1, 1.0, Strategy::Hedge).unwrap();
        let mut ds = Dataset::new();
        ds.push(vec![0.1].into(), branin_like(&vec![0.1].into()).unwrap()).unwrap();
        ds.push(vec![0.9].into(), branin_like(&vec![0.9].into()).unwrap()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..4 {
            let before = ds.len();
            let out = gp_hedge_step(
                &mut state,
                &mut ds,
                &specs,
                &params,
                &mut branin_like,
                &domain,
                &budget,
                &mut rng,
            )
            .unwrap();
            assert_eq!(ds.len(), before + 1);
            assert_eq!(out.chosen, 0);
            assert_eq!(out.probabilities, vec![1.0]);
        }
    }

    #[test]
    fn steps_are_bit_reproducible_from_the_seed() {
        let domain = BoxDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        let specs = vec![AcquisitionSpec::ei(0.01), AcquisitionSpec::pi(0.01), AcquisitionSpec::gp_ucb(0.1, 0.2)];
        let params = KernelParams::isotropic(1, 0.3, 1e-6).unwrap();
        let budget = ProposalBudget { n_candidates: 30, n_local_steps: 3, local_shrink: 0.5 };

        let run = |seed: u64| -> (Vec<StepOutcome>, Dataset, Vec<f64>) {
            let mut state = PortfolioState::new(3, 1.0, Strategy::Hedge).unwrap();
            let mut ds = Dataset::new();
            ds.push(vec![0.15].into(), branin_like(&vec![0.15].into()).unwrap()).unwrap();
            ds.push(vec![0.85].into(), branin_like(&vec![0.85].into()).unwrap()).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut outs = Vec::new();
            for _ in 0..5 {
                outs.push(
                    gp_hedge_step(
                        &mut state,
                        &mut ds,
                        &specs,
                        &params,
                        &mut branin_like,
                        &domain,
                        &budget,
                        &mut rng,
                    )
                    .unwrap(),
                );
            }
            (outs, ds, state.gains)
        };

        let (a_outs, a_ds, a_gains) = run(1234);
        let (b_outs, b_ds, b_gains) = run(1234);
        assert_eq!(a_ds, b_ds);
        for (a, b) in a_outs.iter().zip(&b_outs) {
            assert_eq!(a.chosen, b.chosen);
            assert_eq!(a.observed.to_bits(), b.observed.to_bits());
            assert_eq!(a.nominees, b.nominees);
            assert_eq!(a.probabilities, b.probabilities);
        }
        for (a, b) in a_gains.iter().zip(&b_gains) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn hedge_gains_equal_independently_accumulated_rewards() {
        let domain = BoxDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        let specs = vec![AcquisitionSpec::ei(0.01), AcquisitionSpec::ucb(1.5)];
        let params = KernelParams::isotropic(1, 0.3, 1e-6).unwrap();
        let budget = ProposalBudget { n_candidates: 25, n_local_steps: 2, local_shrink: 0.5 };
        let mut state = PortfolioState::new(2, 1.0, Strategy::Hedge).unwrap();
        let mut ds = Dataset::new();
        ds.push(vec![0.2].into(), branin_like(&vec![0.2].into()).unwrap()).unwrap();
        ds.push(vec![0.7].into(), branin_like(&vec![0.7].into()).unwrap()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let mut acc = vec![0.0; 2];
        for _ in 0..6 {
            let out = gp_hedge_step(
                &mut state,
                &mut ds,
                &specs,
                &params,
                &mut branin_like,
                &domain,
                &budget,
                &mut rng,
            )
            .unwrap();
            for (a, r) in acc.iter_mut().zip(&out.nominees.rewards) {
                *a += r;
            }
        }
        for (g, a) in state.gains.iter().zip(&acc) {
            assert!((g - a).abs() < 1e-9, "gain {g} vs accumulated {a}");
        }
    }

    #[test]
    fn incumbent_is_monotone_across_steps() {
        let domain = BoxDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        let specs = vec![AcquisitionSpec::ei(0.01), AcquisitionSpec::pi(0.1)];
        let params = KernelParams::isotropic(1, 0.25, 1e-6).unwrap();
        let budget = ProposalBudget { n_candidates: 30, n_local_steps: 2, local_shrink: 0.5 };
        let mut state = PortfolioState::new(2, 1.0, Strategy::Exp3).unwrap();
        let mut ds = Dataset::new();
        ds.push(vec![0.1].into(), branin_like(&vec![0.1].into()).unwrap()).unwrap();
        ds.push(vec![0.6].into(), branin_like(&vec![0.6].into()).unwrap()).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(15);
        let mut incumbent = ds.best().unwrap().y;
        for _ in 0..8 {
            gp_hedge_step(
                &mut state,
                &mut ds,
                &specs,
                &params,
                &mut branin_like,
                &domain,
                &budget,
                &mut rng,
            )
            .unwrap();
            let now = ds.best().unwrap().y;
            assert!(now >= incumbent);
            incumbent = now;
        }
    }

    #[test]
    fn non_finite_objective_is_reported_with_the_point() {
        let domain = BoxDomain::from_bounds(&[(0.0, 1.0)]).unwrap();
        let specs = vec![AcquisitionSpec::ei(0.01)];
        let params = KernelParams::isotropic(1, 0.3, 1e-6).unwrap();
        let budget = ProposalBudget { n_candidates: 10, n_local_steps: 0, local_shrink: 0.5 };
        let mut state = PortfolioState::new(1, 1.0, Strategy::Hedge).unwrap();
        let mut ds = Dataset::new();
        ds.push(vec![0.2].into(), 0.1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let mut bad = |_x: &Point| -> Result<f64> { Ok(f64::NAN) };
        let err = gp_hedge_step(
            &mut state,
            &mut ds,
            &specs,
            &params,
            &mut bad,
            &domain,
            &budget,
            &mut rng,
        );
        assert!(matches!(err, Err(Error::NonFiniteObjective { .. })));
    }

    proptest! {
        #[test]
        fn gain_shifts_do_not_move_selection_probabilities(
            gains in proptest::collection::vec(-40.0f64..40.0, 2..5),
            eta in 0.1f64..2.0,
            shift in -60.0f64..60.0,
        ) {
            let shifted: Vec<f64> = gains.iter().map(|g| g + shift).collect();
            let a = hedge_probabilities(&gains, eta).unwrap();
            let b = hedge_probabilities(&shifted, eta).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn scaling_eta_against_gains_cancels(
            gains in proptest::collection::vec(-20.0f64..20.0, 2..5),
            eta in 0.1f64..3.0,
            scale in 0.5f64..4.0,
        ) {
            let scaled: Vec<f64> = gains.iter().map(|g| g / scale).collect();
            let a = hedge_probabilities(&gains, eta).unwrap();
            let b = hedge_probabilities(&scaled, eta * scale).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
