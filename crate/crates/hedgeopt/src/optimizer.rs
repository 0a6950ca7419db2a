//! Inner maximization: turn an acquisition surface into a concrete nominee.
//!
//! The outer optimization loop needs `argmax_x u(x | D)` over the box each
//! iteration. This module does that with seeded random search plus
//! axis-aligned pattern refinement — derivative-free, trivially checkable
//! against a brute-force scan, and budget-tunable. Also home to the
//! latin-hypercube initial design used to seed runs.
//!
//! Reproducibility contract: every proposal draws all of its random
//! candidates up front (one box sample each, coordinate order inside), and
//! the refinement phase is deterministic, so a proposal is a pure function
//! of (model, spec, budget, seed). Ties break toward the first candidate
//! drawn.

use crate::acquisition::{acquisition_value, AcquisitionKind, AcquisitionSpec, IncumbentContext};
use crate::error::{Error, Result};
use crate::gp::GpModel;
use crate::types::{BoxDomain, Point};
use rand::Rng;

/// How much work one proposal is allowed to do.
#[derive(Debug, Clone, PartialEq)]
pub struct ProposalBudget {
    /// Uniform random candidates scanned per proposal (≥ 1).
    pub n_candidates: usize,
    /// Pattern-search refinement sweeps after the scan.
    pub n_local_steps: usize,
    /// Step-size decay per sweep, in (0, 1); sweep k probes at
    /// `local_shrink^k · range` along each axis.
    pub local_shrink: f64,
}

impl ProposalBudget {
    /// The default budget for a `dim`-dimensional domain: 1000·dim random
    /// candidates, then 20 shrinking pattern sweeps at decay 0.5.
    pub fn default_for_dim(dim: usize) -> Self {
        ProposalBudget { n_candidates: 1000 * dim.max(1), n_local_steps: 20, local_shrink: 0.5 }
    }

    /// Validates the budget fields.
    pub fn validate(&self) -> Result<()> {
        if self.n_candidates == 0 {
            return Err(Error::InvalidArgument("budget needs at least one candidate".into()));
        }
        if !self.local_shrink.is_finite() || self.local_shrink <= 0.0 || self.local_shrink >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "local_shrink must lie in (0,1), got {}",
                self.local_shrink
            )));
        }
        Ok(())
    }
}

/// Nominates the acquisition maximizer: scans `n_candidates` uniform random
/// points, then refines the best with axis-aligned pattern search (clipped
/// to the box). The returned point is feasible and its acquisition value is
/// never below the best raw candidate's.
pub fn propose<R: Rng + ?Sized>(
    model: &GpModel,
    spec: &AcquisitionSpec,
    domain: &BoxDomain,
    ctx: &IncumbentContext,
    budget: &ProposalBudget,
    rng: &mut R,
) -> Result<Point> {
    if spec.kind == AcquisitionKind::Thompson {
        return Err(Error::UnsupportedDispatch);
    }
    spec.validate()?;
    budget.validate()?;
    if domain.dim() != model.params().dim() {
        return Err(Error::DimensionMismatch { expected: model.params().dim(), got: domain.dim() });
    }

    // All randomness happens here, before any model evaluation.
    let candidates: Vec<Point> =
        (0..budget.n_candidates).map(|_| domain.sample_uniform(rng)).collect();

    let score = |p: &Point| -> Result<f64> {
        let post = model.predict(p)?;
        acquisition_value(spec, &post, ctx)
    };

    let mut best = candidates[0].clone();
    let mut best_val = score(&best)?;
    for cand in &candidates[1..] {
        let v = score(cand)?;
        if v > best_val {
            best_val = v;
            best = cand.clone();
        }
    }

    // Axis-aligned pattern search: sweep k probes ± local_shrink^k · range
    // along every axis, moving only on strict improvement.
    let d = domain.dim();
    for k in 1..=budget.n_local_steps {
        let scale = budget.local_shrink.powi(k as i32);
        for axis in 0..d {
            let step = scale * domain.range(axis);
            for dir in [1.0, -1.0] {
                let mut probe = best.clone();
                probe.coords[axis] += dir * step;
                let probe = domain.clip(&probe);
                let v = score(&probe)?;
                if v > best_val {
                    best_val = v;
                    best = probe;
                }
            }
        }
    }
    Ok(best)
}

/// Thompson sampling proposal: draws `n_candidates` uniform points, takes
/// one joint posterior sample over the whole set, and returns the candidate
/// with the largest sampled value (first maximum wins).
pub fn propose_thompson<R: Rng + ?Sized>(
    model: &GpModel,
    domain: &BoxDomain,
    n_candidates: usize,
    rng: &mut R,
) -> Result<Point> {
    if n_candidates == 0 {
        return Err(Error::InvalidArgument("Thompson sampling needs at least one candidate".into()));
    }
    if domain.dim() != model.params().dim() {
        return Err(Error::DimensionMismatch { expected: model.params().dim(), got: domain.dim() });
    }
    let candidates: Vec<Point> = (0..n_candidates).map(|_| domain.sample_uniform(rng)).collect();
    let draw = model.sample_posterior(&candidates, rng)?;
    let mut best = 0;
    for (i, v) in draw.iter().enumerate() {
        if *v > draw[best] {
            best = i;
        }
    }
    Ok(candidates[best].clone())
}

/// Latin-hypercube design: `n` points such that every dimension's range,
/// split into `n` equal strata, holds exactly one point.
///
/// Draw order (part of the seed contract): dimensions are processed in
/// order; each shuffles a stratum permutation, then draws one uniform
/// offset per point.
pub fn latin_hypercube<R: Rng + ?Sized>(domain: &BoxDomain, n: usize, rng: &mut R) -> Vec<Point> {
    use rand::seq::SliceRandom;
    let d = domain.dim();
    let mut coords = vec![vec![0.0; d]; n];
    for k in 0..d {
        let mut strata: Vec<usize> = (0..n).collect();
        strata.shuffle(rng);
        let width = domain.range(k) / n as f64;
        for (i, &s) in strata.iter().enumerate() {
            let offset: f64 = rng.random_range(0.0..1.0);
            coords[i][k] = domain.lower()[k] + (s as f64 + offset) * width;
        }
    }
    coords.into_iter().map(Point::from).collect()
}
