//! Closed-form acquisition functions over a Gaussian posterior.
//!
//! Each function scores a candidate from its predictive distribution and
//! the run context (incumbent value, iteration, dimension): probability of
//! improvement, expected improvement, plain and schedule-driven confidence
//! bounds, and the PI + λ·EI combination. Thompson sampling is the odd one
//! out — it is a set-level procedure with no pointwise score, so the
//! uniform dispatcher rejects it and the proposal layer handles it by
//! drawing a joint posterior sample instead.
//!
//! All functions here are pure and safe to call concurrently.

use crate::error::{Error, Result};
use crate::gp::PosteriorGaussian;

/// 1/√(2π), the standard normal density at zero.
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_68;

/// Standard normal CDF Φ(z), computed through the complementary error
/// function (absolute error well below 1e-12 over the whole real line).
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal density φ(z).
pub fn normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Which acquisition criterion to use and the parameters it reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcquisitionKind {
    /// Probability of improving on the incumbent by at least ξ.
    Pi,
    /// Expected improvement over the incumbent, with ξ inside the margin.
    Ei,
    /// Mean plus a fixed multiple λ of the standard deviation.
    Ucb,
    /// PI + λ·EI.
    EiPi,
    /// Confidence bound with the growing β_t schedule driven by (δ, ν).
    GpUcb,
    /// Joint posterior-sample argmax over a candidate set (set-level; no
    /// pointwise value).
    Thompson,
}

/// An acquisition criterion plus every tunable it might consult. Only the
/// fields relevant to `kind` are read; the constructors fill the rest with
/// the crate defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionSpec {
    /// The criterion.
    pub kind: AcquisitionKind,
    /// Improvement margin ξ ≥ 0 (PI, EI, EI-PI).
    pub xi: f64,
    /// Weight λ ≥ 0: the exploration weight of UCB, or the EI weight of EI-PI.
    pub lambda: f64,
    /// Confidence parameter δ ∈ (0,1) of the GP-UCB schedule.
    pub delta: f64,
    /// Scale ν > 0 of the GP-UCB schedule.
    pub nu: f64,
    /// Candidate-set size for Thompson sampling.
    pub thompson_candidates: usize,
}

impl AcquisitionSpec {
    fn with_kind(kind: AcquisitionKind) -> Self {
        AcquisitionSpec {
            kind,
            xi: 0.01,
            lambda: 1.0,
            delta: 0.1,
            nu: 0.2,
            thompson_candidates: 500,
        }
    }

    /// Probability of improvement with margin `xi`.
    pub fn pi(xi: f64) -> Self {
        AcquisitionSpec { xi, ..Self::with_kind(AcquisitionKind::Pi) }
    }

    /// Expected improvement with margin `xi`.
    pub fn ei(xi: f64) -> Self {
        AcquisitionSpec { xi, ..Self::with_kind(AcquisitionKind::Ei) }
    }

    /// Fixed-weight upper confidence bound.
    pub fn ucb(lambda: f64) -> Self {
        AcquisitionSpec { lambda, ..Self::with_kind(AcquisitionKind::Ucb) }
    }

    /// PI + λ·EI combination.
    pub fn eipi(xi: f64, lambda: f64) -> Self {
        AcquisitionSpec { xi, lambda, ..Self::with_kind(AcquisitionKind::EiPi) }
    }

    /// Schedule-driven confidence bound.
    pub fn gp_ucb(delta: f64, nu: f64) -> Self {
        AcquisitionSpec { delta, nu, ..Self::with_kind(AcquisitionKind::GpUcb) }
    }

    /// Thompson sampling over `candidates` joint draws.
    pub fn thompson(candidates: usize) -> Self {
        AcquisitionSpec { thompson_candidates: candidates, ..Self::with_kind(AcquisitionKind::Thompson) }
    }

    /// Checks the fields the kind consults.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self.kind {
            AcquisitionKind::Pi | AcquisitionKind::Ei => {
                if !self.xi.is_finite() || self.xi < 0.0 {
                    return bad(format!("xi must be ≥ 0, got {}", self.xi));
                }
            }
            AcquisitionKind::Ucb => {
                if !self.lambda.is_finite() || self.lambda < 0.0 {
                    return bad(format!("lambda must be ≥ 0, got {}", self.lambda));
                }
            }
            AcquisitionKind::EiPi => {
                if !self.xi.is_finite() || self.xi < 0.0 {
                    return bad(format!("xi must be ≥ 0, got {}", self.xi));
                }
                if !self.lambda.is_finite() || self.lambda < 0.0 {
                    return bad(format!("lambda must be ≥ 0, got {}", self.lambda));
                }
            }
            AcquisitionKind::GpUcb => {
                if !self.delta.is_finite() || self.delta <= 0.0 || self.delta >= 1.0 {
                    return bad(format!("delta must lie in (0,1), got {}", self.delta));
                }
                if !self.nu.is_finite() || self.nu <= 0.0 {
                    return bad(format!("nu must be positive, got {}", self.nu));
                }
            }
            AcquisitionKind::Thompson => {
                if self.thompson_candidates == 0 {
                    return bad("thompson_candidates must be ≥ 1".into());
                }
            }
        }
        Ok(())
    }

    /// Canonical text form, e.g. `ei:xi=0.01` or `gpucb:delta=0.1,nu=0.2`
    /// — the same syntax the benchmark CLI accepts, so labels round-trip.
    pub fn label(&self) -> String {
        match self.kind {
            AcquisitionKind::Pi => format!("pi:xi={}", self.xi),
            AcquisitionKind::Ei => format!("ei:xi={}", self.xi),
            AcquisitionKind::Ucb => format!("ucb:lambda={}", self.lambda),
            AcquisitionKind::EiPi => format!("eipi:xi={},lambda={}", self.xi, self.lambda),
            AcquisitionKind::GpUcb => format!("gpucb:delta={},nu={}", self.delta, self.nu),
            AcquisitionKind::Thompson => format!("thompson:candidates={}", self.thompson_candidates),
        }
    }
}

/// Run context consulted by the acquisition functions: the incumbent (best
/// observed value so far), the 1-based iteration index, and the domain
/// dimension (the β_t schedule needs both).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncumbentContext {
    /// Best observed objective value so far.
    pub f_plus: f64,
    /// 1-based iteration index.
    pub t: usize,
    /// Search-space dimension.
    pub d: usize,
}

fn check_finite(post: &PosteriorGaussian, ctx: &IncumbentContext) -> Result<()> {
    if !post.mean.is_finite() || !post.variance.is_finite() || post.variance < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "posterior must be finite with variance ≥ 0, got mean {} variance {}",
            post.mean, post.variance
        )));
    }
    if !ctx.f_plus.is_finite() {
        return Err(Error::InvalidArgument(format!("incumbent must be finite, got {}", ctx.f_plus)));
    }
    if ctx.t == 0 {
        return Err(Error::InvalidArgument("iteration index is 1-based".into()));
    }
    Ok(())
}

/// Probability of improvement: Φ((μ − f⁺ − ξ)/σ).
///
/// When σ = 0 the CDF limit is an indicator of strict improvement: 1 if the
/// mean clears f⁺ + ξ, otherwise 0.
pub fn pi_value(post: &PosteriorGaussian, ctx: &IncumbentContext, xi: f64) -> Result<f64> {
    check_finite(post, ctx)?;
    if !xi.is_finite() || xi < 0.0 {
        return Err(Error::InvalidArgument(format!("xi must be ≥ 0, got {xi}")));
    }
    let sigma = post.std_dev();
    if sigma == 0.0 {
        return Ok(if post.mean > ctx.f_plus + xi { 1.0 } else { 0.0 });
    }
    Ok(normal_cdf((post.mean - ctx.f_plus - xi) / sigma))
}

/// Expected improvement: (μ − f⁺ − ξ)Φ(Z) + σφ(Z) with
/// Z = (μ − f⁺ − ξ)/σ, and 0 when σ = 0.
pub fn ei_value(post: &PosteriorGaussian, ctx: &IncumbentContext, xi: f64) -> Result<f64> {
    check_finite(post, ctx)?;
    if !xi.is_finite() || xi < 0.0 {
        return Err(Error::InvalidArgument(format!("xi must be ≥ 0, got {xi}")));
    }
    let sigma = post.std_dev();
    if sigma == 0.0 {
        return Ok(0.0);
    }
    let diff = post.mean - ctx.f_plus - xi;
    let z = diff / sigma;
    // Mathematically ≥ 0; the max guards against round-off in the far tail.
    Ok((diff * normal_cdf(z) + sigma * normal_pdf(z)).max(0.0))
}

/// Upper confidence bound: μ + λσ.
pub fn ucb_value(post: &PosteriorGaussian, lambda: f64) -> Result<f64> {
    if !post.mean.is_finite() || !post.variance.is_finite() || post.variance < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "posterior must be finite with variance ≥ 0, got mean {} variance {}",
            post.mean, post.variance
        )));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("lambda must be ≥ 0, got {lambda}")));
    }
    Ok(post.mean + lambda * post.std_dev())
}

/// The exploration schedule β_t = 2ν·log(t^(d/2+2)·π²/(3δ)) — strictly
/// increasing in t, linear in ν.
pub fn gp_ucb_beta(t: usize, d: usize, delta: f64, nu: f64) -> Result<f64> {
    if t == 0 || d == 0 {
        return Err(Error::InvalidArgument("t and d are 1-based".into()));
    }
    if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
        return Err(Error::InvalidArgument(format!("delta must lie in (0,1), got {delta}")));
    }
    if !nu.is_finite() || nu <= 0.0 {
        return Err(Error::InvalidArgument(format!("nu must be positive, got {nu}")));
    }
    let t = t as f64;
    let exponent = d as f64 / 2.0 + 2.0;
    let pi_sq = std::f64::consts::PI * std::f64::consts::PI;
    Ok(nu * 2.0 * (exponent * t.ln() + (pi_sq / (3.0 * delta)).ln()))
}

/// Schedule-driven confidence bound: μ + √β_t·σ. Identical to
/// [`ucb_value`] with λ = √β_t.
pub fn gp_ucb_value(post: &PosteriorGaussian, beta_t: f64) -> Result<f64> {
    if !beta_t.is_finite() || beta_t < 0.0 {
        return Err(Error::InvalidArgument(format!("beta_t must be ≥ 0, got {beta_t}")));
    }
    ucb_value(post, beta_t.sqrt())
}

/// PI + λ·EI.
pub fn eipi_value(
    post: &PosteriorGaussian,
    ctx: &IncumbentContext,
    xi: f64,
    lambda: f64,
) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("lambda must be ≥ 0, got {lambda}")));
    }
    Ok(pi_value(post, ctx, xi)? + lambda * ei_value(post, ctx, xi)?)
}

/// Uniform dispatch: routes to the operation matching `spec.kind`, feeding
/// it the spec's parameters and the context's t and d for the β schedule.
/// Thompson sampling is rejected — it has no pointwise value.
pub fn acquisition_value(
    spec: &AcquisitionSpec,
    post: &PosteriorGaussian,
    ctx: &IncumbentContext,
) -> Result<f64> {
    spec.validate()?;
    match spec.kind {
        AcquisitionKind::Pi => pi_value(post, ctx, spec.xi),
        AcquisitionKind::Ei => ei_value(post, ctx, spec.xi),
        AcquisitionKind::Ucb => ucb_value(post, spec.lambda),
        AcquisitionKind::EiPi => eipi_value(post, ctx, spec.xi, spec.lambda),
        AcquisitionKind::GpUcb => {
            let beta = gp_ucb_beta(ctx.t, ctx.d, spec.delta, spec.nu)?;
            gp_ucb_value(post, beta)
        }
        AcquisitionKind::Thompson => Err(Error::UnsupportedDispatch),
    }
}
