//! Benchmark functions and run-quality metrics.
//!
//! The functions are the classic global-optimization test surfaces, negated
//! so that the crate's maximization convention applies everywhere: the
//! optimizer seeks the largest value, and each function's recorded optimum
//! is a maximum. Every function checks its box domain and refuses points
//! outside it.
//!
//! A process-wide registry exposes the functions by name. Registration
//! re-derives each recorded optimum with an independent grid/multi-start
//! pattern search and panics if the stored constants cannot be reproduced,
//! so a corrupted table is impossible to benchmark against silently.

use crate::error::{Error, Result};
use crate::types::{BoxDomain, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;
use std::sync::OnceLock;

// ---------------------------------------------------------------------------
// Test surfaces (negated for maximization)
// ---------------------------------------------------------------------------

const BRANIN_BOUNDS: [(f64, f64); 2] = [(-5.0, 10.0), (0.0, 15.0)];
const UNIT_CUBE_3: [(f64, f64); 3] = [(0.0, 1.0); 3];
const UNIT_CUBE_6: [(f64, f64); 6] = [(0.0, 1.0); 6];

/// Largest value of the negated two-well surface on its domain.
pub const BRANIN_MAX: f64 = -0.397_887_357_729_738_36;
/// Largest value of the negated 3-dimensional exponential-well surface.
pub const HARTMANN3_MAX: f64 = 3.862_779_786_949_336_5;
/// Largest value of the negated 6-dimensional exponential-well surface.
pub const HARTMANN6_MAX: f64 = 3.322_368_011_391_338_6;

fn check_domain(name: &str, x: &Point, bounds: &[(f64, f64)]) -> Result<()> {
    if x.dim() != bounds.len() {
        return Err(Error::DimensionMismatch { expected: bounds.len(), got: x.dim() });
    }
    for (xi, (lo, hi)) in x.coords.iter().zip(bounds) {
        if !(*xi >= *lo && *xi <= *hi) {
            return Err(Error::OutOfDomain { function: name.to_string(), point: x.coords.clone() });
        }
    }
    Ok(())
}

/// Negated Branin surface on [-5, 10] x [0, 15]. Three global maxima of
/// value [`BRANIN_MAX`].
pub fn branin(x: &Point) -> Result<f64> {
    check_domain("branin", x, &BRANIN_BOUNDS)?;
    let (x1, x2) = (x.coords[0], x.coords[1]);
    let b = 5.1 / (4.0 * PI * PI);
    let c = 5.0 / PI;
    let t = 1.0 / (8.0 * PI);
    let inner = x2 - b * x1 * x1 + c * x1 - 6.0;
    Ok(-(inner * inner + 10.0 * (1.0 - t) * x1.cos() + 10.0))
}

const HART_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

const HART3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const HART3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];

const HART6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HART6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann<const D: usize>(x: &Point, a: &[[f64; D]; 4], p: &[[f64; D]; 4]) -> f64 {
    let mut total = 0.0;
    for i in 0..4 {
        let mut arg = 0.0;
        for j in 0..D {
            let diff = x.coords[j] - p[i][j];
            arg += a[i][j] * diff * diff;
        }
        total += HART_ALPHA[i] * (-arg).exp();
    }
    total
}

/// Negated 3-dimensional Hartmann surface on the unit cube. One global
/// maximum of value [`HARTMANN3_MAX`].
pub fn hartmann3(x: &Point) -> Result<f64> {
    check_domain("hartmann3", x, &UNIT_CUBE_3)?;
    Ok(hartmann(x, &HART3_A, &HART3_P))
}

/// Negated 6-dimensional Hartmann surface on the unit cube. One global
/// maximum of value [`HARTMANN6_MAX`].
pub fn hartmann6(x: &Point) -> Result<f64> {
    check_domain("hartmann6", x, &UNIT_CUBE_6)?;
    Ok(hartmann(x, &HART6_A, &HART6_P))
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// A named benchmark surface with its domain and recorded global maximum.
#[derive(Debug, Clone)]
pub struct TestFunction {
    name: &'static str,
    domain: BoxDomain,
    eval_fn: fn(&Point) -> Result<f64>,
    f_opt: f64,
    known_optima: Vec<Point>,
}

impl TestFunction {
    /// Registry name (also the CLI spelling).
    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Box domain the function is defined on.
    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// Recorded global maximum value.
    pub fn f_opt(&self) -> f64 {
        self.f_opt
    }

    /// Published maximizer locations (rounded to the usual table precision).
    pub fn known_optima(&self) -> &[Point] {
        &self.known_optima
    }

    /// Evaluates the surface, rejecting out-of-domain points.
    pub fn eval(&self, x: &Point) -> Result<f64> {
        (self.eval_fn)(x)
    }
}

fn build_catalog() -> Vec<TestFunction> {
    vec![
        TestFunction {
            name: "branin",
            domain: BoxDomain::from_bounds(&BRANIN_BOUNDS).expect("static bounds"),
            eval_fn: branin,
            f_opt: BRANIN_MAX,
            known_optima: vec![
                vec![-PI, 12.275].into(),
                vec![PI, 2.275].into(),
                vec![9.424_78, 2.475].into(),
            ],
        },
        TestFunction {
            name: "hartmann3",
            domain: BoxDomain::from_bounds(&UNIT_CUBE_3).expect("static bounds"),
            eval_fn: hartmann3,
            f_opt: HARTMANN3_MAX,
            known_optima: vec![vec![0.114_614, 0.555_649, 0.852_547].into()],
        },
        TestFunction {
            name: "hartmann6",
            domain: BoxDomain::from_bounds(&UNIT_CUBE_6).expect("static bounds"),
            eval_fn: hartmann6,
            f_opt: HARTMANN6_MAX,
            known_optima: vec![
                vec![0.201_69, 0.150_011, 0.476_874, 0.275_332, 0.311_652, 0.657_3].into(),
            ],
        },
    ]
}

/// Coordinate-descent polish: sweeps axis probes at a geometrically
/// shrinking step until no probe improves, then halves the step. Returns
/// the best point found and its value.
fn pattern_polish(fun: &TestFunction, start: &Point, rounds: u32) -> Result<(Point, f64)> {
    let d = fun.domain.dim();
    let mut x = fun.domain.clip(start);
    let mut fx = fun.eval(&x)?;
    for round in 0..rounds {
        let frac = 0.1 * 0.5f64.powi(round as i32);
        let mut sweeps = 0;
        loop {
            let mut improved = false;
            for k in 0..d {
                for dir in [1.0f64, -1.0] {
                    let mut probe = x.clone();
                    probe.coords[k] = (probe.coords[k] + dir * frac * fun.domain.range(k))
                        .clamp(fun.domain.lower()[k], fun.domain.upper()[k]);
                    let fp = fun.eval(&probe)?;
                    if fp > fx {
                        x = probe;
                        fx = fp;
                        improved = true;
                    }
                }
            }
            sweeps += 1;
            if !improved || sweeps >= 64 {
                break;
            }
        }
    }
    Ok((x, fx))
}

/// Re-derives a function's recorded maximum from scratch and checks the
/// stored constants against it.
///
/// Three things must hold: the published maximizer locations actually
/// attain the recorded value (to the precision their coordinates are
/// published at, and exactly after a local polish), an independent
/// grid/multi-start search reaches the recorded value to 1e-6, and no
/// probe anywhere lands measurably above it.
pub fn verify_known_optima(fun: &TestFunction) -> Result<()> {
    let fail = |msg: String| Err(Error::InvalidArgument(format!("{}: {msg}", fun.name)));
    if fun.known_optima.is_empty() {
        return fail("no recorded maximizer locations".into());
    }

    let mut best_probe = f64::NEG_INFINITY;
    let mut best_polished = f64::NEG_INFINITY;

    for opt in &fun.known_optima {
        if !fun.domain.contains(opt) {
            return fail(format!("recorded maximizer {:?} is outside the domain", opt.coords));
        }
        let at = fun.eval(opt)?;
        if at > fun.f_opt + 1e-9 {
            return fail(format!("value {at} at a recorded maximizer exceeds the recorded maximum"));
        }
        if at < fun.f_opt - 1e-5 {
            return fail(format!("value {at} at a recorded maximizer is far below the recorded maximum"));
        }
        let (_, polished) = pattern_polish(fun, opt, 50)?;
        best_polished = best_polished.max(polished);
        if polished > fun.f_opt + 1e-9 {
            return fail(format!("local polish reached {polished}, above the recorded maximum"));
        }
        if polished < fun.f_opt - 1e-9 {
            return fail(format!("local polish stalled at {polished}, below the recorded maximum"));
        }
    }

    // Independent sweep, blind to the recorded locations.
    let mut starts: Vec<(f64, Point)> = Vec::new();
    if fun.domain.dim() == 2 {
        let n = 600;
        for i in 0..n {
            for j in 0..n {
                let x = fun.domain.lower()[0] + fun.domain.range(0) * (i as f64 + 0.5) / n as f64;
                let y = fun.domain.lower()[1] + fun.domain.range(1) * (j as f64 + 0.5) / n as f64;
                let p: Point = vec![x, y].into();
                let v = fun.eval(&p)?;
                best_probe = best_probe.max(v);
                starts.push((v, p));
                if starts.len() > 32 {
                    starts.sort_by(|a, b| b.0.total_cmp(&a.0));
                    starts.truncate(16);
                }
            }
        }
    } else {
        let mut rng = ChaCha12Rng::seed_from_u64(0x7e57_bed5);
        for _ in 0..10_000 {
            let p = fun.domain.sample_uniform(&mut rng);
            let v = fun.eval(&p)?;
            best_probe = best_probe.max(v);
            starts.push((v, p));
            if starts.len() > 64 {
                starts.sort_by(|a, b| b.0.total_cmp(&a.0));
                starts.truncate(32);
            }
        }
    }
    starts.sort_by(|a, b| b.0.total_cmp(&a.0));
    starts.truncate(16);
    for (_, start) in &starts {
        let (_, polished) = pattern_polish(fun, start, 50)?;
        best_probe = best_probe.max(polished);
    }

    if best_probe > fun.f_opt + 1e-9 {
        return fail(format!("independent search reached {best_probe}, above the recorded maximum"));
    }
    let best = best_probe.max(best_polished);
    if best < fun.f_opt - 1e-6 {
        return fail(format!("independent search topped out at {best}, short of the recorded maximum"));
    }
    Ok(())
}

/// All registered benchmark functions. Built once per process; every
/// function's recorded optimum is re-derived by [`verify_known_optima`]
/// first, and a mismatch panics rather than registering a bad table.
pub fn registry() -> &'static [TestFunction] {
    static CATALOG: OnceLock<Vec<TestFunction>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let catalog = build_catalog();
        for fun in &catalog {
            if let Err(e) = verify_known_optima(fun) {
                panic!("benchmark registry self-check failed: {e}");
            }
        }
        catalog
    })
}

/// Looks a benchmark function up by its registry name.
pub fn lookup(name: &str) -> Result<&'static TestFunction> {
    registry().iter().find(|f| f.name == name).ok_or_else(|| {
        let known: Vec<&str> = registry().iter().map(|f| f.name).collect();
        Error::Config(format!("unknown function {name:?}; known: {}", known.join(", ")))
    })
}

// ---------------------------------------------------------------------------
// Run-quality metrics
// ---------------------------------------------------------------------------

/// Normalized progress from the first sample toward the optimum:
/// (f_best - f_first) / (f_opt - f_first), clamped to [0, 1].
///
/// 0 means no improvement over the first sample, 1 means the optimum was
/// reached. Errors if the first sample already attains (or exceeds) the
/// optimum value, which leaves nothing to normalize by.
pub fn gap_metric(f_best: f64, f_first: f64, f_opt: f64) -> Result<f64> {
    for v in [f_best, f_first, f_opt] {
        if !v.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite metric input {v}")));
        }
    }
    if f_opt <= f_first {
        return Err(Error::DegenerateStart { value: f_first });
    }
    Ok(((f_best - f_first) / (f_opt - f_first)).clamp(0.0, 1.0))
}

/// Per-sample gap values of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct GapTrace {
    /// `values[i]` is the gap after samples `0..=i`; `values[0]` is 0 by
    /// construction.
    pub values: Vec<f64>,
}

impl GapTrace {
    /// Builds the trace of running gaps from a run's objective samples in
    /// evaluation order.
    pub fn from_samples(samples: &[f64], f_opt: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("cannot build a gap trace from no samples".into()));
        }
        let f_first = samples[0];
        let mut best = f64::NEG_INFINITY;
        let mut values = Vec::with_capacity(samples.len());
        for y in samples {
            best = best.max(*y);
            values.push(gap_metric(best, f_first, f_opt)?);
        }
        Ok(GapTrace { values })
    }

    /// Final gap of the run.
    pub fn last(&self) -> f64 {
        *self.values.last().expect("gap traces are non-empty")
    }
}

/// Instantaneous and cumulative optimality gaps of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    /// f_opt - y_i per sample (how far each individual evaluation fell
    /// short of the optimum).
    pub instantaneous: Vec<f64>,
    /// Running sums of the instantaneous values.
    pub cumulative: Vec<f64>,
}

/// Builds regret traces from a run's objective samples in evaluation order.
pub fn regret_traces(samples: &[f64], f_opt: f64) -> Result<RegretTrace> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("cannot build regret traces from no samples".into()));
    }
    if !f_opt.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite optimum {f_opt}")));
    }
    let mut instantaneous = Vec::with_capacity(samples.len());
    let mut cumulative = Vec::with_capacity(samples.len());
    let mut total = 0.0;
    for y in samples {
        if !y.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite sample {y}")));
        }
        let r = f_opt - y;
        total += r;
        instantaneous.push(r);
        cumulative.push(total);
    }
    Ok(RegretTrace { instantaneous, cumulative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn surfaces_match_hand_evaluated_probes() {
        // Frozen from 30-digit evaluations of the defining formulas.
        let cases: [(fn(&Point) -> Result<f64>, Vec<f64>, f64); 5] = [
            (branin, vec![2.5, 7.5], -24.129_964_413_622_261),
            (branin, vec![0.0, 0.0], -55.602_112_642_270_262),
            (hartmann3, vec![0.5, 0.5, 0.5], 0.628_022_015_070_594_2),
            (hartmann6, vec![0.5; 6], 0.505_314_991_702_233_14),
            (hartmann6, vec![0.2; 6], 0.408_109_215_729_529_91),
        ];
        for (f, coords, want) in cases {
            let got = f(&coords.into()).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "got {got}, want {want}"
            );
        }
    }

    #[test]
    fn recorded_maximizers_attain_the_recorded_maxima() {
        for fun in registry() {
            for opt in fun.known_optima() {
                let v = fun.eval(opt).unwrap();
                assert!(
                    (v - fun.f_opt()).abs() < 1e-5,
                    "{}: {v} vs {}",
                    fun.name(),
                    fun.f_opt()
                );
            }
        }
    }

    #[test]
    fn out_of_domain_points_are_rejected_by_name() {
        let err = branin(&vec![-6.0, 0.0].into()).unwrap_err();
        match err {
            Error::OutOfDomain { function, point } => {
                assert_eq!(function, "branin");
                assert_eq!(point, vec![-6.0, 0.0]);
            }
            other => panic!("expected domain error, got {other}"),
        }
        assert!(matches!(
            hartmann3(&vec![0.5, 1.5, 0.5].into()),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            hartmann6(&vec![0.5, 0.5, 0.5, 0.5, 0.5, -0.1].into()),
            Err(Error::OutOfDomain { .. })
        ));
        // Wrong arity is a dimension problem, not a domain one.
        assert!(matches!(
            branin(&vec![0.0].into()),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn registry_carries_the_three_surfaces_and_lookup_works() {
        let names: Vec<&str> = registry().iter().map(|f| f.name()).collect();
        assert_eq!(names, vec!["branin", "hartmann3", "hartmann6"]);
        assert_eq!(lookup("hartmann6").unwrap().domain().dim(), 6);
        let err = lookup("rosenbrock").unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("branin"));
    }

    #[test]
    fn self_check_rejects_a_corrupted_optimum() {
        let mut fun = lookup("branin").unwrap().clone();
        fun.f_opt += 0.5;
        assert!(verify_known_optima(&fun).is_err());
        let mut fun = lookup("hartmann3").unwrap().clone();
        fun.f_opt -= 0.5;
        assert!(verify_known_optima(&fun).is_err());
        let mut fun = lookup("branin").unwrap().clone();
        fun.known_optima = vec![vec![0.0, 0.0].into()];
        assert!(verify_known_optima(&fun).is_err());
    }

    #[test]
    fn gap_metric_matches_hand_cases() {
        assert_eq!(gap_metric(2.0, 2.0, 10.0).unwrap(), 0.0);
        assert_eq!(gap_metric(10.0, 2.0, 10.0).unwrap(), 1.0);
        assert!((gap_metric(6.0, 2.0, 10.0).unwrap() - 0.5).abs() < 1e-15);
        // Values past the optimum (noise, say) clamp rather than exceed 1.
        assert_eq!(gap_metric(11.0, 2.0, 10.0).unwrap(), 1.0);
        assert_eq!(gap_metric(1.0, 2.0, 10.0).unwrap(), 0.0);
        assert!(matches!(
            gap_metric(5.0, 10.0, 10.0),
            Err(Error::DegenerateStart { value }) if value == 10.0
        ));
        assert!(matches!(gap_metric(5.0, 11.0, 10.0), Err(Error::DegenerateStart { .. })));
        assert!(gap_metric(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn gap_trace_starts_at_zero_and_is_monotone() {
        let trace = GapTrace::from_samples(&[2.0, 1.0, 6.0, 4.0, 10.0], 10.0).unwrap();
        assert_eq!(trace.values[0], 0.0);
        assert_eq!(trace.values, vec![0.0, 0.0, 0.5, 0.5, 1.0]);
        assert_eq!(trace.last(), 1.0);
        assert!(GapTrace::from_samples(&[], 1.0).is_err());
        assert!(GapTrace::from_samples(&[10.0, 2.0], 10.0).is_err());
    }

    #[test]
    fn regret_traces_match_hand_cases() {
        let r = regret_traces(&[7.0, 9.0, 10.0], 10.0).unwrap();
        assert_eq!(r.instantaneous, vec![3.0, 1.0, 0.0]);
        assert_eq!(r.cumulative, vec![3.0, 4.0, 4.0]);
        assert!(regret_traces(&[], 1.0).is_err());
        assert!(regret_traces(&[f64::NAN], 1.0).is_err());
    }

    proptest! {
        // Positive affine rescalings of the objective leave the gap alone.
        #[test]
        fn gap_is_invariant_under_positive_affine_maps(
            f_first in -10.0f64..10.0,
            lift in 0.01f64..20.0,
            frac in 0.0f64..1.0,
            scale in 0.1f64..100.0,
            shift in -1000.0f64..1000.0,
        ) {
            let f_opt = f_first + lift;
            let f_best = f_first + frac * lift;
            let g = gap_metric(f_best, f_first, f_opt).unwrap();
            let g2 = gap_metric(
                scale * f_best + shift,
                scale * f_first + shift,
                scale * f_opt + shift,
            ).unwrap();
            prop_assert!((g - g2).abs() < 1e-9, "{g} vs {g2}");
        }

        #[test]
        fn gap_traces_are_monotone_and_bounded(
            samples in proptest::collection::vec(-100.0f64..100.0, 1..40),
        ) {
            let f_opt = 101.0;
            let trace = GapTrace::from_samples(&samples, f_opt).unwrap();
            prop_assert_eq!(trace.values[0], 0.0);
            for w in trace.values.windows(2) {
                prop_assert!(w[1] >= w[0]);
            }
            for v in &trace.values {
                prop_assert!((0.0..=1.0).contains(v));
            }
        }

        #[test]
        fn cumulative_regret_is_nondecreasing_below_the_optimum(
            samples in proptest::collection::vec(-100.0f64..100.0, 1..40),
        ) {
            let f_opt = 100.5;
            let r = regret_traces(&samples, f_opt).unwrap();
            prop_assert!(r.instantaneous.iter().all(|v| *v >= 0.0));
            for w in r.cumulative.windows(2) {
                prop_assert!(w[1] >= w[0]);
            }
            let total: f64 = r.instantaneous.iter().sum();
            prop_assert!((total - r.cumulative.last().unwrap()).abs() < 1e-9);
        }
    }
}
