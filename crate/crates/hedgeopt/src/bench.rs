//! Seeded multi-trial benchmark harness.
//!
//! Runs a configured portfolio-optimization experiment `trials` times with
//! consecutive seeds, collects per-trial gap and regret traces, aggregates
//! them across trials, and writes the aggregate as CSV or plot data. The
//! whole pipeline is deterministic from the configuration: identical
//! configs (including the base seed) give byte-identical output files, no
//! matter how the trials are scheduled across threads.
//!
//! Objective values can be standardized online (subtract the running mean,
//! divide by the running standard deviation, recomputed whenever the model
//! is refit) so the unit-amplitude prior stays reasonable on surfaces with
//! large output ranges. Gap and regret are always reported in raw units.

use crate::acquisition::{AcquisitionKind, AcquisitionSpec};
use crate::error::{Error, Result};
use crate::gp::fit_hyperparams;
use crate::optimizer::{latin_hypercube, ProposalBudget};
use crate::portfolio::{gp_hedge_step, PortfolioState, Strategy};
use crate::testbed::{lookup, regret_traces, GapTrace, RegretTrace, TestFunction};
use crate::types::{Dataset, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

/// Number of space-filling samples drawn before the first model is built.
pub const INIT_POINTS: usize = 2;

/// Everything one experiment needs: the surface, the portfolio, the
/// bandit strategy, and the run lengths and seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Registry name of the benchmark surface.
    pub function_name: String,
    /// How nominees are chosen each iteration.
    pub strategy: Strategy,
    /// The portfolio, in arm order.
    pub portfolio_specs: Vec<AcquisitionSpec>,
    /// Iterations per trial (after the initialization samples).
    pub iterations: usize,
    /// Independent repetitions; trial k runs with seed `base_seed + k`.
    pub trials: usize,
    /// Seed of trial 0.
    pub base_seed: u64,
    /// Learning rate of the exponential-weights selection.
    pub eta: f64,
    /// Uniform mixing weight (Exp3 only).
    pub exp3_mix: f64,
    /// Proposal search effort; `None` picks the per-dimension default.
    pub budget: Option<ProposalBudget>,
    /// Observation-noise variance of the surrogate (fixed, not fitted).
    pub noise_variance: f64,
    /// Hyperparameters are refit every this many new observations.
    pub refit_interval: usize,
    /// Standardize objective values before they reach the surrogate.
    pub standardize: bool,
}

impl ExperimentConfig {
    /// The defaults: the 3-arm portfolio (expected improvement ξ = 0.01,
    /// probability of improvement ξ = 0.01, schedule-driven confidence
    /// bound δ = 0.1, ν = 0.2) under Hedge, 100 iterations, 25 trials,
    /// seed 0.
    pub fn new(function_name: impl Into<String>) -> Self {
        ExperimentConfig {
            function_name: function_name.into(),
            strategy: Strategy::Hedge,
            portfolio_specs: vec![
                AcquisitionSpec::ei(0.01),
                AcquisitionSpec::pi(0.01),
                AcquisitionSpec::gp_ucb(0.1, 0.2),
            ],
            iterations: 100,
            trials: 25,
            base_seed: 0,
            eta: 1.0,
            exp3_mix: 0.1,
            budget: None,
            noise_variance: 1e-6,
            refit_interval: 5,
            standardize: true,
        }
    }

    /// Checks every field and resolves the benchmark surface. All failures
    /// are config errors, reported before any trial work starts.
    pub fn validate(&self) -> Result<&'static TestFunction> {
        let fun = lookup(&self.function_name)?;
        let bad = |msg: String| Error::Config(msg);
        if self.iterations == 0 {
            return Err(bad("iterations must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(bad("trials must be at least 1".into()));
        }
        if self.portfolio_specs.is_empty() {
            return Err(bad("the portfolio needs at least one acquisition spec".into()));
        }
        for spec in &self.portfolio_specs {
            spec.validate().map_err(|e| bad(format!("bad acquisition spec: {e}")))?;
        }
        if !self.eta.is_finite() || self.eta <= 0.0 {
            return Err(bad(format!("eta must be positive, got {}", self.eta)));
        }
        if !self.exp3_mix.is_finite() || !(0.0..=1.0).contains(&self.exp3_mix) {
            return Err(bad(format!("exp3_mix must lie in [0,1], got {}", self.exp3_mix)));
        }
        if !self.noise_variance.is_finite() || self.noise_variance <= 0.0 {
            return Err(bad(format!("noise_variance must be positive, got {}", self.noise_variance)));
        }
        if self.refit_interval == 0 {
            return Err(bad("refit_interval must be at least 1".into()));
        }
        if let Some(budget) = &self.budget {
            budget.validate().map_err(|e| bad(format!("bad proposal budget: {e}")))?;
        }
        if let Strategy::Single(i) = self.strategy {
            if i >= self.portfolio_specs.len() {
                return Err(bad(format!(
                    "single-arm strategy index {i} out of range for {} specs",
                    self.portfolio_specs.len()
                )));
            }
        }
        Ok(fun)
    }

    /// Short name of the strategy series, used as the plot-data block label.
    pub fn strategy_label(&self) -> String {
        match self.strategy {
            Strategy::Hedge => "hedge".to_string(),
            Strategy::Exp3 => "exp3".to_string(),
            Strategy::Single(i) => match self.portfolio_specs.get(i) {
                Some(spec) => format!("single:{}", spec.label()),
                None => format!("single:#{i}"),
            },
        }
    }
}

/// One trial's complete history.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// The seed this trial ran with.
    pub seed: u64,
    /// Every sample of the run in raw (unstandardized) units,
    /// initialization first.
    pub dataset: Dataset,
    /// Gap after each iteration (length `iterations`). The underlying
    /// normalization covers the whole run from its first sample; this trace
    /// is the per-iteration tail of it.
    pub gap: GapTrace,
    /// Instantaneous and cumulative optimality gap over the iteration
    /// samples (length `iterations`).
    pub regret: RegretTrace,
    /// Selected arm per iteration.
    pub chosen: Vec<usize>,
    /// Selection probabilities per iteration (rows of length N).
    pub probabilities: Vec<Vec<f64>>,
    /// How long the trial took. Diagnostic only — every other field is
    /// deterministic from the seed.
    pub wall_clock: Duration,
}

/// A full experiment: config snapshot plus every successful trial.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    /// The configuration that produced this record.
    pub config: ExperimentConfig,
    /// Successful trials in trial-index order. Together with
    /// `failed_trials` they account for exactly `config.trials` runs.
    pub trials: Vec<TrialRecord>,
    /// Trials that hit a numerical or evaluation failure and were excluded
    /// from the record.
    pub failed_trials: usize,
}

/// Cross-trial summary, one row per iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    /// Label of the strategy series (block label in plot data).
    pub series: String,
    /// Arm labels in portfolio order.
    pub arm_labels: Vec<String>,
    /// Mean gap per iteration, in \\[0,1\\].
    pub mean_gap: Vec<f64>,
    /// Unbiased sample variance of the gap per iteration; all zeros when
    /// only one trial succeeded (see `single_trial`).
    pub var_gap: Vec<f64>,
    /// Mean cumulative optimality gap per iteration.
    pub mean_cum_regret: Vec<f64>,
    /// Arm-selection frequency per iteration (rows sum to 1).
    pub arm_frequency: Vec<Vec<f64>>,
    /// How many trials the summary covers.
    pub n_trials: usize,
    /// Set when `n_trials == 1`, in which case the variance column carries
    /// the n = 1 convention of 0 rather than an estimate.
    pub single_trial: bool,
}

fn standardization(standardize: bool, raw: &[(Point, f64)]) -> (f64, f64) {
    if !standardize {
        return (0.0, 1.0);
    }
    let n = raw.len() as f64;
    let mean = raw.iter().map(|(_, y)| *y).sum::<f64>() / n;
    let var = raw.iter().map(|(_, y)| (y - mean) * (y - mean)).sum::<f64>() / n;
    (mean, var.sqrt().max(1e-12))
}

fn standardized_dataset(raw: &[(Point, f64)], m: f64, s: f64) -> Result<Dataset> {
    let mut ds = Dataset::new();
    for (x, y) in raw {
        ds.push(x.clone(), (y - m) / s)?;
    }
    Ok(ds)
}

/// Runs one seeded trial: 2-point space-filling initialization, then
/// `iterations` portfolio steps, refitting hyperparameters every
/// `refit_interval` new observations.
pub fn run_trial(config: &ExperimentConfig, fun: &TestFunction, seed: u64) -> Result<TrialRecord> {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let domain = fun.domain();
    let d = domain.dim();
    let budget =
        config.budget.clone().unwrap_or_else(|| ProposalBudget::default_for_dim(d));
    let theta_bounds: Vec<(f64, f64)> =
        (0..d).map(|k| (1e-2 * domain.range(k), 10.0 * domain.range(k))).collect();
    let noise_bounds = (config.noise_variance, config.noise_variance);

    let mut raw_obs: Vec<(Point, f64)> = Vec::with_capacity(INIT_POINTS + config.iterations);
    for x in latin_hypercube(domain, INIT_POINTS, &mut rng) {
        let y = fun.eval(&x)?;
        if !y.is_finite() {
            return Err(Error::NonFiniteObjective { point: x.coords, value: y });
        }
        raw_obs.push((x, y));
    }

    let (mut m, mut s) = standardization(config.standardize, &raw_obs);
    let mut dataset = standardized_dataset(&raw_obs, m, s)?;
    let mut params = fit_hyperparams(&dataset, &theta_bounds, noise_bounds, &mut rng)?;
    let mut last_fit = raw_obs.len();

    let mut state = PortfolioState::new(config.portfolio_specs.len(), config.eta, config.strategy)?
        .with_exp3_mix(config.exp3_mix)?;

    let mut chosen = Vec::with_capacity(config.iterations);
    let mut probabilities = Vec::with_capacity(config.iterations);
    for _ in 0..config.iterations {
        if raw_obs.len() - last_fit >= config.refit_interval {
            (m, s) = standardization(config.standardize, &raw_obs);
            dataset = standardized_dataset(&raw_obs, m, s)?;
            params = fit_hyperparams(&dataset, &theta_bounds, noise_bounds, &mut rng)?;
            last_fit = raw_obs.len();
        }
        let mut raw_value: Option<f64> = None;
        let outcome = {
            let mut objective = |x: &Point| -> Result<f64> {
                let raw = fun.eval(x)?;
                raw_value = Some(raw);
                Ok((raw - m) / s)
            };
            gp_hedge_step(
                &mut state,
                &mut dataset,
                &config.portfolio_specs,
                &params,
                &mut objective,
                domain,
                &budget,
                &mut rng,
            )?
        };
        let raw_y = raw_value.expect("the objective runs exactly once per step");
        let x_new = dataset.observations().last().expect("the step appends").x.clone();
        raw_obs.push((x_new, raw_y));
        chosen.push(outcome.chosen);
        probabilities.push(outcome.probabilities);
    }

    let raw_ys: Vec<f64> = raw_obs.iter().map(|(_, y)| *y).collect();
    let whole_run = GapTrace::from_samples(&raw_ys, fun.f_opt())?;
    let gap = GapTrace { values: whole_run.values[INIT_POINTS..].to_vec() };
    let regret = regret_traces(&raw_ys[INIT_POINTS..], fun.f_opt())?;

    let mut record_ds = Dataset::new();
    for (x, y) in raw_obs {
        record_ds.push(x, y)?;
    }

    Ok(TrialRecord {
        seed,
        dataset: record_ds,
        gap,
        regret,
        chosen,
        probabilities,
        wall_clock: started.elapsed(),
    })
}

/// Runs every trial of the experiment, in parallel, and collects the
/// results in trial-index order (so scheduling cannot change the record).
///
/// A trial that fails — a factorization that stays singular, a degenerate
/// run whose first sample already sits at the optimum — is excluded and
/// counted in `failed_trials` rather than aborting the sweep.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunRecord> {
    let fun = config.validate()?;
    let outcomes: Vec<Result<TrialRecord>> = (0..config.trials)
        .into_par_iter()
        .map(|k| run_trial(config, fun, config.base_seed.wrapping_add(k as u64)))
        .collect();
    let mut trials = Vec::with_capacity(config.trials);
    let mut failed_trials = 0;
    for outcome in outcomes {
        match outcome {
            Ok(trial) => trials.push(trial),
            Err(_) => failed_trials += 1,
        }
    }
    Ok(RunRecord { config: config.clone(), trials, failed_trials })
}

/// Cross-trial mean/variance of the gap, mean cumulative regret, and
/// arm-selection frequencies. Errors if no trial succeeded.
pub fn aggregate(record: &RunRecord) -> Result<AggregateReport> {
    if record.trials.is_empty() {
        return Err(Error::EmptyAggregate { failed: record.failed_trials });
    }
    let t_len = record.config.iterations;
    let n_arms = record.config.portfolio_specs.len();
    for trial in &record.trials {
        if trial.gap.values.len() != t_len || trial.chosen.len() != t_len {
            return Err(Error::InvalidArgument(format!(
                "trial with seed {} has traces of the wrong length",
                trial.seed
            )));
        }
    }
    let n = record.trials.len() as f64;
    let mut mean_gap = vec![0.0; t_len];
    let mut var_gap = vec![0.0; t_len];
    let mut mean_cum_regret = vec![0.0; t_len];
    let mut arm_frequency = vec![vec![0.0; n_arms]; t_len];
    for trial in &record.trials {
        for t in 0..t_len {
            mean_gap[t] += trial.gap.values[t];
            mean_cum_regret[t] += trial.regret.cumulative[t];
            arm_frequency[t][trial.chosen[t]] += 1.0;
        }
    }
    for t in 0..t_len {
        mean_gap[t] /= n;
        mean_cum_regret[t] /= n;
        for f in &mut arm_frequency[t] {
            *f /= n;
        }
    }
    let single_trial = record.trials.len() == 1;
    if !single_trial {
        for trial in &record.trials {
            for t in 0..t_len {
                let delta = trial.gap.values[t] - mean_gap[t];
                var_gap[t] += delta * delta;
            }
        }
        for v in &mut var_gap {
            *v /= n - 1.0;
        }
    }
    Ok(AggregateReport {
        series: record.config.strategy_label(),
        arm_labels: record.config.portfolio_specs.iter().map(|s| s.label()).collect(),
        mean_gap,
        var_gap,
        mean_cum_regret,
        arm_frequency,
        n_trials: record.trials.len(),
        single_trial,
    })
}

/// Writes the aggregate as CSV: header
/// `iteration,mean_gap,var_gap,mean_cum_regret`, then one row per
/// iteration with values at full double precision.
pub fn write_csv_to<W: Write>(report: &AggregateReport, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "iteration,mean_gap,var_gap,mean_cum_regret")?;
    for t in 0..report.mean_gap.len() {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e}",
            t + 1,
            report.mean_gap[t],
            report.var_gap[t],
            report.mean_cum_regret[t]
        )?;
    }
    Ok(())
}

/// Writes the aggregate CSV to a file.
pub fn emit_csv(report: &AggregateReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let as_io = |source| Error::Io { path: path.display().to_string(), source };
    let mut out = BufWriter::new(File::create(path).map_err(as_io)?);
    write_csv_to(report, &mut out).map_err(as_io)?;
    out.flush().map_err(as_io)
}

/// Writes the aggregate as one whitespace-separated plot-data block:
/// a `# series <label>` header, a column legend, one row per iteration
/// (iteration, mean gap, gap variance, mean cumulative regret, then one
/// arm-selection frequency per arm), and a terminating blank line.
///
/// Call it repeatedly on one writer to stack several strategy series into
/// a single file for index-addressable plotting.
pub fn write_plotdata_to<W: Write>(report: &AggregateReport, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "# series {}", report.series)?;
    write!(out, "# columns: iteration mean_gap var_gap mean_cum_regret")?;
    for label in &report.arm_labels {
        write!(out, " freq[{label}]")?;
    }
    writeln!(out)?;
    for t in 0..report.mean_gap.len() {
        write!(
            out,
            "{} {:.16e} {:.16e} {:.16e}",
            t + 1,
            report.mean_gap[t],
            report.var_gap[t],
            report.mean_cum_regret[t]
        )?;
        for f in &report.arm_frequency[t] {
            write!(out, " {f:.16e}")?;
        }
        writeln!(out)?;
    }
    writeln!(out)
}

/// Writes one plot-data block to a file.
pub fn emit_plotdata(report: &AggregateReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let as_io = |source| Error::Io { path: path.display().to_string(), source };
    let mut out = BufWriter::new(File::create(path).map_err(as_io)?);
    write_plotdata_to(report, &mut out).map_err(as_io)?;
    out.flush().map_err(as_io)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} value {value:?}")))
}

/// Parses one acquisition spec from its compact text form: a kind name
/// (`pi`, `ei`, `ucb`, `eipi`, `gpucb`, `thompson`), optionally followed by
/// `:` and comma-separated `param=value` settings — `ei:xi=0.01`,
/// `gpucb:delta=0.1,nu=0.2`. Omitted parameters keep their defaults.
/// The format round-trips with [`AcquisitionSpec::label`].
pub fn parse_spec(text: &str) -> Result<AcquisitionSpec> {
    let text = text.trim();
    let (kind_name, param_text) = match text.split_once(':') {
        Some((k, p)) => (k.trim(), Some(p)),
        None => (text, None),
    };
    let mut spec = match kind_name {
        "pi" => AcquisitionSpec::pi(0.01),
        "ei" => AcquisitionSpec::ei(0.01),
        "ucb" => AcquisitionSpec::ucb(1.0),
        "eipi" => AcquisitionSpec::eipi(0.01, 1.0),
        "gpucb" => AcquisitionSpec::gp_ucb(0.1, 0.2),
        "thompson" => AcquisitionSpec::thompson(500),
        other => {
            return Err(Error::Config(format!(
                "unknown acquisition kind {other:?} (known: pi, ei, ucb, eipi, gpucb, thompson)"
            )))
        }
    };
    if let Some(param_text) = param_text {
        for item in param_text.split(',') {
            let item = item.trim();
            let (key, value) = item.split_once('=').ok_or_else(|| {
                Error::Config(format!("acquisition parameter {item:?} is not param=value"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match (spec.kind, key) {
                (AcquisitionKind::Pi | AcquisitionKind::Ei | AcquisitionKind::EiPi, "xi") => {
                    spec.xi = parse_num(key, value)?;
                }
                (AcquisitionKind::Ucb | AcquisitionKind::EiPi, "lambda") => {
                    spec.lambda = parse_num(key, value)?;
                }
                (AcquisitionKind::GpUcb, "delta") => spec.delta = parse_num(key, value)?,
                (AcquisitionKind::GpUcb, "nu") => spec.nu = parse_num(key, value)?,
                (AcquisitionKind::Thompson, "candidates") => {
                    spec.thompson_candidates = parse_num(key, value)?;
                }
                _ => {
                    return Err(Error::Config(format!(
                        "parameter {key:?} does not apply to {kind_name}"
                    )))
                }
            }
        }
    }
    spec.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(spec)
}

/// Resolves a strategy name against the portfolio: `hedge`, `exp3`, or
/// `single:<spec>` where `<spec>` is either a full spec label
/// (`single:ei:xi=0.01`) or a bare kind name that matches exactly one arm
/// (`single:ei`).
pub fn parse_strategy(text: &str, specs: &[AcquisitionSpec]) -> Result<Strategy> {
    let t = text.trim().to_ascii_lowercase();
    match t.as_str() {
        "hedge" => return Ok(Strategy::Hedge),
        "exp3" => return Ok(Strategy::Exp3),
        _ => {}
    }
    let Some(name) = t.strip_prefix("single:") else {
        return Err(Error::Config(format!(
            "unknown strategy {text:?} (hedge, exp3, or single:<spec>)"
        )));
    };
    if let Some(i) = specs.iter().position(|s| s.label() == name) {
        return Ok(Strategy::Single(i));
    }
    let kind_matches: Vec<usize> = specs
        .iter()
        .enumerate()
        .filter(|(_, s)| s.label().split(':').next() == Some(name))
        .map(|(i, _)| i)
        .collect();
    match kind_matches.as_slice() {
        [i] => Ok(Strategy::Single(*i)),
        [] => {
            let labels: Vec<String> = specs.iter().map(|s| s.label()).collect();
            Err(Error::Config(format!(
                "strategy {text:?} names no portfolio arm; arms: {}",
                labels.join(", ")
            )))
        }
        _ => Err(Error::Config(format!(
            "strategy {text:?} is ambiguous; give the full spec label"
        ))),
    }
}

/// Parses a plain-text configuration.
///
/// One `key=value` per line; `#` starts a comment; blank lines are
/// ignored. Recognized keys: `function`, `strategy`, `spec` (repeatable —
/// the first occurrence replaces the default portfolio), `iterations`,
/// `trials`, `seed`, `eta`, `exp3_mix`, `noise_variance`,
/// `refit_interval`, `standardize`. Unknown keys are errors.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::new("branin");
    let mut specs_given: Vec<AcquisitionSpec> = Vec::new();
    let mut strategy_text: Option<String> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key=value, got {raw_line:?}", idx + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "function" => config.function_name = value.to_string(),
            "strategy" => strategy_text = Some(value.to_string()),
            "spec" => specs_given.push(parse_spec(value)?),
            "iterations" => config.iterations = parse_num(key, value)?,
            "trials" => config.trials = parse_num(key, value)?,
            "seed" => config.base_seed = parse_num(key, value)?,
            "eta" => config.eta = parse_num(key, value)?,
            "exp3_mix" => config.exp3_mix = parse_num(key, value)?,
            "noise_variance" => config.noise_variance = parse_num(key, value)?,
            "refit_interval" => config.refit_interval = parse_num(key, value)?,
            "standardize" => {
                config.standardize = match value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(Error::Config(format!(
                            "standardize must be true or false, got {other:?}"
                        )))
                    }
                };
            }
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
    }
    if !specs_given.is_empty() {
        config.portfolio_specs = specs_given;
    }
    if let Some(text) = strategy_text {
        config.strategy = parse_strategy(&text, &config.portfolio_specs)?;
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_trial(gap: Vec<f64>, regret: Vec<f64>, chosen: Vec<usize>, n_arms: usize) -> TrialRecord {
        let t = gap.len();
        let mut dataset = Dataset::new();
        dataset.push(vec![0.5, 0.5].into(), 0.0).unwrap();
        let mut cumulative = Vec::new();
        let mut total = 0.0;
        for r in &regret {
            total += r;
            cumulative.push(total);
        }
        TrialRecord {
            seed: 0,
            dataset,
            gap: GapTrace { values: gap },
            regret: RegretTrace { instantaneous: regret, cumulative },
            chosen,
            probabilities: vec![vec![1.0 / n_arms as f64; n_arms]; t],
            wall_clock: Duration::ZERO,
        }
    }

    fn toy_record(trials: Vec<TrialRecord>) -> RunRecord {
        let mut config = ExperimentConfig::new("branin");
        config.iterations = trials[0].gap.values.len();
        config.trials = trials.len();
        RunRecord { config, trials, failed_trials: 0 }
    }

    #[test]
    fn aggregate_matches_hand_mean_and_unbiased_variance() {
        let record = toy_record(vec![
            toy_trial(vec![0.1, 0.8], vec![1.0, 0.5], vec![0, 1], 3),
            toy_trial(vec![0.3, 1.0], vec![0.5, 0.5], vec![0, 2], 3),
        ]);
        let report = aggregate(&record).unwrap();
        assert!((report.mean_gap[1] - 0.9).abs() < 1e-15);
        assert!((report.var_gap[1] - 0.02).abs() < 1e-15);
        assert!((report.mean_gap[0] - 0.2).abs() < 1e-15);
        assert!((report.mean_cum_regret[0] - 0.75).abs() < 1e-15);
        assert!((report.mean_cum_regret[1] - 1.25).abs() < 1e-15);
        // Frequencies: iteration 0 all on arm 0; iteration 1 split 1/2.
        assert_eq!(report.arm_frequency[0], vec![1.0, 0.0, 0.0]);
        assert_eq!(report.arm_frequency[1], vec![0.0, 0.5, 0.5]);
        for row in &report.arm_frequency {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(!report.single_trial);
    }

    #[test]
    fn single_trial_reports_zero_variance_with_a_flag() {
        let record = toy_record(vec![toy_trial(vec![0.4, 0.6], vec![1.0, 0.0], vec![1, 1], 2)]);
        let report = aggregate(&record).unwrap();
        assert!(report.single_trial);
        assert_eq!(report.var_gap, vec![0.0, 0.0]);
        assert_eq!(report.n_trials, 1);
    }

    #[test]
    fn empty_record_is_an_aggregation_error() {
        let mut config = ExperimentConfig::new("branin");
        config.trials = 3;
        let record = RunRecord { config, trials: vec![], failed_trials: 3 };
        assert!(matches!(aggregate(&record), Err(Error::EmptyAggregate { failed: 3 })));
    }

    #[test]
    fn permuting_trials_leaves_the_means_unchanged() {
        let a = toy_trial(vec![0.1, 0.5], vec![2.0, 1.0], vec![0, 0], 2);
        let b = toy_trial(vec![0.7, 0.9], vec![1.0, 0.0], vec![1, 0], 2);
        let c = toy_trial(vec![0.2, 0.2], vec![0.5, 0.5], vec![0, 1], 2);
        let fwd = aggregate(&toy_record(vec![a.clone(), b.clone(), c.clone()])).unwrap();
        let rev = aggregate(&toy_record(vec![c, a, b])).unwrap();
        for (x, y) in fwd.mean_gap.iter().zip(&rev.mean_gap) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in fwd.var_gap.iter().zip(&rev.var_gap) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in fwd.mean_cum_regret.iter().zip(&rev.mean_cum_regret) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_has_header_plus_one_row_per_iteration_and_round_trips() {
        let record = toy_record(vec![
            toy_trial(vec![0.125, 0.75], vec![1.5, 0.25], vec![0, 1], 2),
            toy_trial(vec![0.25, 1.0], vec![0.5, 0.0], vec![1, 0], 2),
        ]);
        let report = aggregate(&record).unwrap();
        let mut buf = Vec::new();
        write_csv_to(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with('\n'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "iteration,mean_gap,var_gap,mean_cum_regret");
        for (t, line) in lines[1..].iter().enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 4);
            assert_eq!(fields[0].parse::<usize>().unwrap(), t + 1);
            assert!((fields[1].parse::<f64>().unwrap() - report.mean_gap[t]).abs() < 1e-9);
            assert!((fields[2].parse::<f64>().unwrap() - report.var_gap[t]).abs() < 1e-9);
            assert!(
                (fields[3].parse::<f64>().unwrap() - report.mean_cum_regret[t]).abs() < 1e-9
            );
        }
    }

    #[test]
    fn plotdata_blocks_differ_only_in_the_series_label() {
        // The toy record keeps the default 3-arm portfolio, so rows carry
        // three frequency columns.
        let record = toy_record(vec![toy_trial(vec![0.5], vec![1.0], vec![0], 3)]);
        let report = aggregate(&record).unwrap();
        let mut renamed = report.clone();
        renamed.series = "exp3".to_string();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        write_plotdata_to(&report, &mut a).unwrap();
        write_plotdata_to(&renamed, &mut b).unwrap();
        let a = String::from_utf8(a).unwrap();
        let b = String::from_utf8(b).unwrap();
        let differing: Vec<(&str, &str)> =
            a.lines().zip(b.lines()).filter(|(x, y)| x != y).collect();
        assert_eq!(differing, vec![("# series hedge", "# series exp3")]);
        // Block shape: header, legend, one row per iteration, blank line
        // (which `lines` reports as a trailing empty entry).
        assert!(a.ends_with("\n\n"));
        let rows: Vec<&str> = a.lines().collect();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3], "");
        let fields: Vec<&str> = rows[2].split_whitespace().collect();
        assert_eq!(fields.len(), 4 + 3);
    }

    #[test]
    fn spec_text_round_trips_through_labels() {
        let cases = [
            "pi:xi=0.01",
            "ei:xi=0.25",
            "ucb:lambda=1.5",
            "eipi:xi=0.01,lambda=2",
            "gpucb:delta=0.1,nu=0.2",
            "thompson:candidates=300",
        ];
        for text in cases {
            let spec = parse_spec(text).unwrap();
            assert_eq!(spec.label(), text);
            assert_eq!(parse_spec(&spec.label()).unwrap(), spec);
        }
        // Bare kinds get defaults.
        assert_eq!(parse_spec("ei").unwrap(), AcquisitionSpec::ei(0.01));
        assert_eq!(parse_spec("gpucb").unwrap(), AcquisitionSpec::gp_ucb(0.1, 0.2));
        // Rejections.
        assert!(parse_spec("entropy").is_err());
        assert!(parse_spec("ei:lambda=2").is_err());
        assert!(parse_spec("ei:xi").is_err());
        assert!(parse_spec("ei:xi=-1").is_err());
        assert!(parse_spec("gpucb:delta=1.5").is_err());
    }

    #[test]
    fn strategy_names_resolve_against_the_portfolio() {
        let specs =
            vec![AcquisitionSpec::ei(0.01), AcquisitionSpec::pi(0.01), AcquisitionSpec::gp_ucb(0.1, 0.2)];
        assert_eq!(parse_strategy("hedge", &specs).unwrap(), Strategy::Hedge);
        assert_eq!(parse_strategy("EXP3", &specs).unwrap(), Strategy::Exp3);
        assert_eq!(parse_strategy("single:pi", &specs).unwrap(), Strategy::Single(1));
        assert_eq!(parse_strategy("single:ei:xi=0.01", &specs).unwrap(), Strategy::Single(0));
        assert_eq!(parse_strategy("single:gpucb", &specs).unwrap(), Strategy::Single(2));
        assert!(parse_strategy("single:thompson", &specs).is_err());
        assert!(parse_strategy("greedy", &specs).is_err());
        let twins = vec![AcquisitionSpec::ei(0.01), AcquisitionSpec::ei(0.1)];
        assert!(parse_strategy("single:ei", &twins).is_err());
        assert_eq!(parse_strategy("single:ei:xi=0.1", &twins).unwrap(), Strategy::Single(1));
    }

    #[test]
    fn config_text_parses_with_comments_and_rejects_unknown_keys() {
        let text = "\
# experiment
function = hartmann3
strategy = single:pi   # degenerate portfolio
spec = pi:xi=0.1
iterations = 7
trials = 2
seed = 42
eta = 0.5
exp3_mix = 0.2
noise_variance = 1e-5
refit_interval = 3
standardize = false
";
        let config = parse_config(text).unwrap();
        assert_eq!(config.function_name, "hartmann3");
        assert_eq!(config.strategy, Strategy::Single(0));
        assert_eq!(config.portfolio_specs, vec![AcquisitionSpec::pi(0.1)]);
        assert_eq!(config.iterations, 7);
        assert_eq!(config.trials, 2);
        assert_eq!(config.base_seed, 42);
        assert_eq!(config.eta, 0.5);
        assert_eq!(config.exp3_mix, 0.2);
        assert_eq!(config.noise_variance, 1e-5);
        assert_eq!(config.refit_interval, 3);
        assert!(!config.standardize);
        config.validate().unwrap();

        assert!(matches!(parse_config("budget = 9"), Err(Error::Config(_))));
        assert!(matches!(parse_config("iterations"), Err(Error::Config(_))));
        assert!(matches!(parse_config("trials = minus"), Err(Error::Config(_))));
        // Defaults survive an empty config.
        let default = parse_config("# nothing here\n").unwrap();
        assert_eq!(default, ExperimentConfig::new("branin"));
    }

    #[test]
    fn validate_rejects_bad_configs_before_any_work() {
        assert!(matches!(
            ExperimentConfig::new("rosenbrock").validate(),
            Err(Error::Config(_))
        ));
        let mut config = ExperimentConfig::new("branin");
        config.iterations = 0;
        assert!(matches!(config.validate(), Err(Error::Config(_))));
        let mut config = ExperimentConfig::new("branin");
        config.portfolio_specs.clear();
        assert!(matches!(config.validate(), Err(Error::Config(_))));
        let mut config = ExperimentConfig::new("branin");
        config.strategy = Strategy::Single(7);
        assert!(matches!(config.validate(), Err(Error::Config(_))));
        let mut config = ExperimentConfig::new("branin");
        config.portfolio_specs[0].xi = -3.0;
        assert!(matches!(config.validate(), Err(Error::Config(_))));
    }

    fn small_config() -> ExperimentConfig {
        let mut config = ExperimentConfig::new("branin");
        config.iterations = 3;
        config.trials = 2;
        config.base_seed = 11;
        config.budget = Some(ProposalBudget { n_candidates: 25, n_local_steps: 2, local_shrink: 0.5 });
        config
    }

    #[test]
    fn experiments_are_deterministic_from_the_config() {
        let config = small_config();
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(a.trials.len(), b.trials.len());
        assert_eq!(a.failed_trials, b.failed_trials);
        for (x, y) in a.trials.iter().zip(&b.trials) {
            assert_eq!(x.seed, y.seed);
            assert_eq!(x.dataset, y.dataset);
            assert_eq!(x.gap, y.gap);
            assert_eq!(x.regret, y.regret);
            assert_eq!(x.chosen, y.chosen);
            assert_eq!(x.probabilities, y.probabilities);
        }
        let (ra, rb) = (aggregate(&a).unwrap(), aggregate(&b).unwrap());
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        write_csv_to(&ra, &mut ca).unwrap();
        write_csv_to(&rb, &mut cb).unwrap();
        assert_eq!(ca, cb);
    }

    #[test]
    fn trial_traces_have_the_documented_shape() {
        let config = small_config();
        let record = run_experiment(&config).unwrap();
        assert_eq!(record.trials.len() + record.failed_trials, config.trials);
        for (k, trial) in record.trials.iter().enumerate() {
            assert_eq!(trial.seed, config.base_seed + k as u64);
            assert_eq!(trial.dataset.len(), INIT_POINTS + config.iterations);
            assert_eq!(trial.gap.values.len(), config.iterations);
            assert_eq!(trial.regret.cumulative.len(), config.iterations);
            assert_eq!(trial.chosen.len(), config.iterations);
            assert_eq!(trial.probabilities.len(), config.iterations);
            for w in trial.gap.values.windows(2) {
                assert!(w[1] >= w[0]);
            }
            for g in &trial.gap.values {
                assert!((0.0..=1.0).contains(g));
            }
            for p in &trial.probabilities {
                assert_eq!(p.len(), config.portfolio_specs.len());
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_single_arm_portfolio_always_chooses_arm_zero() {
        let mut config = small_config();
        config.portfolio_specs = vec![AcquisitionSpec::ei(0.01)];
        config.strategy = Strategy::Single(0);
        config.trials = 1;
        let record = run_experiment(&config).unwrap();
        for trial in &record.trials {
            assert!(trial.chosen.iter().all(|c| *c == 0));
            assert!(trial.probabilities.iter().all(|p| p == &vec![1.0]));
        }
        assert_eq!(record.config.strategy_label(), "single:ei:xi=0.01");
    }

    #[test]
    fn standardization_is_optional_and_runs_unstandardized_too() {
        let mut config = small_config();
        config.standardize = false;
        config.trials = 1;
        let record = run_experiment(&config).unwrap();
        assert_eq!(record.trials.len(), 1);
        assert_eq!(record.trials[0].gap.values.len(), config.iterations);
    }

    #[test]
    fn emitters_write_files_and_report_io_failures_with_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let record = toy_record(vec![toy_trial(vec![0.5, 0.9], vec![1.0, 0.5], vec![0, 0], 1)]);
        let report = aggregate(&record).unwrap();
        let csv_path = dir.path().join("out.csv");
        emit_csv(&report, &csv_path).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert_eq!(text.lines().count(), 3);
        let plot_path = dir.path().join("out.dat");
        emit_plotdata(&report, &plot_path).unwrap();
        assert!(std::fs::read_to_string(&plot_path).unwrap().starts_with("# series"));

        let missing = dir.path().join("no-such-dir").join("out.csv");
        match emit_csv(&report, &missing) {
            Err(Error::Io { path, .. }) => assert!(path.contains("no-such-dir")),
            other => panic!("expected an I/O error, got {other:?}"),
        }
    }
}
