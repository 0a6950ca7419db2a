//! Core domain types: points, box domains, observations, and datasets.
//!
//! Everything downstream (surrogate, acquisition functions, portfolio,
//! benchmarks) speaks in these types. The whole crate uses a maximization
//! convention: larger objective values are better.

use crate::error::{Error, Result};
use std::ops::Index;

/// A candidate input — a point in the search space.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    /// Coordinates, one per input dimension.
    pub coords: Vec<f64>,
}

impl Point {
    /// Wraps a coordinate vector. Returns an error if any coordinate is
    /// non-finite or the vector is empty.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("a point needs at least one coordinate".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coordinate {bad}")));
        }
        Ok(Point { coords })
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates as a slice.
    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }
}

impl From<Vec<f64>> for Point {
    /// Unchecked wrap for literals in examples and tests; library code that
    /// accepts outside input goes through [`Point::new`].
    fn from(coords: Vec<f64>) -> Self {
        Point { coords }
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.coords[k]
    }
}

/// An axis-aligned box: the search space, with finite lower and upper
/// bounds on every variable.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    /// Builds a box from per-dimension bounds. Every lower bound must be
    /// strictly below its upper bound, and there must be at least one
    /// dimension.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidArgument("a domain needs at least one dimension".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        for (k, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::InvalidArgument(format!(
                    "bad bounds in dimension {k}: [{lo}, {hi}]"
                )));
            }
        }
        Ok(BoxDomain { lower, upper })
    }

    /// Convenience constructor from `(lo, hi)` pairs.
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        let lower = bounds.iter().map(|b| b.0).collect();
        let upper = bounds.iter().map(|b| b.1).collect();
        BoxDomain::new(lower, upper)
    }

    /// Number of dimensions.
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Lower bounds.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// Upper bounds.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Width `upper[k] − lower[k]` of dimension `k`.
    pub fn range(&self, k: usize) -> f64 {
        self.upper[k] - self.lower[k]
    }

    /// Whether `p` lies inside the box (bounds inclusive).
    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.coords
                .iter()
                .zip(&self.lower)
                .zip(&self.upper)
                .all(|((x, lo), hi)| *x >= *lo && *x <= *hi)
    }

    /// Clips every coordinate of `p` into the box.
    pub fn clip(&self, p: &Point) -> Point {
        let coords = p
            .coords
            .iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .map(|((x, lo), hi)| x.clamp(*lo, *hi))
            .collect();
        Point { coords }
    }

    /// One uniform sample from the box.
    ///
    /// Draw order is part of the reproducibility contract: exactly one
    /// uniform draw per coordinate, in dimension order 0, 1, ..., d−1.
    pub fn sample_uniform<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let coords = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| rng.random_range(*lo..*hi))
            .collect();
        Point { coords }
    }
}

/// One evaluation of the objective: where it was sampled and what came back
/// (possibly noise-corrupted).
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    /// Where the objective was evaluated.
    pub x: Point,
    /// The observed value.
    pub y: f64,
}

/// An ordered list of observations.
///
/// Insertion order is preserved — index 0 is the first sample of a run,
/// which the gap metric uses as its reference point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    observations: Vec<Observation>,
}

impl Dataset {
    /// An empty dataset.
    pub fn new() -> Self {
        Dataset { observations: Vec::new() }
    }

    /// Appends one observation, checking that its dimension matches the
    /// existing observations and that the value is finite.
    pub fn push(&mut self, x: Point, y: f64) -> Result<()> {
        if !y.is_finite() {
            return Err(Error::NonFiniteObjective { point: x.coords, value: y });
        }
        if let Some(d) = self.dim() {
            if x.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: x.dim() });
            }
        }
        self.observations.push(Observation { x, y });
        Ok(())
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    /// Whether the dataset holds no observations.
    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// The shared dimension of the stored points, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.observations.first().map(|o| o.x.dim())
    }

    /// All observations, in insertion order.
    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    /// The observed values, in insertion order.
    pub fn ys(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.y).collect()
    }

    /// The incumbent: the observation with the largest value, ties broken
    /// toward the earliest. `None` when empty.
    pub fn best(&self) -> Option<&Observation> {
        let mut best: Option<&Observation> = None;
        for o in &self.observations {
            if best.is_none_or(|b| o.y > b.y) {
                best = Some(o);
            }
        }
        best
    }
}
