//! The black-box scoring interface every estimator works against.

use crate::error::Result;
use crate::sample::{Sample, SampleSet};

/// A prediction function `s: X → R`.
///
/// Implementations must be deterministic: the same sample always yields the
/// same score. Shared read-only across workers, so `Send + Sync`.
pub trait Predictor: Send + Sync {
    fn score(&self, x: &Sample) -> Result<f64>;

    /// Scores every sample of a set in order.
    fn score_all(&self, set: &SampleSet) -> Result<Vec<f64>> {
        set.iter().map(|s| self.score(s)).collect()
    }
}

/// Wraps a closure as a predictor. Handy for analytic scoring functions in
/// experiments and tests.
pub struct FnPredictor<F>
where
    F: Fn(&Sample) -> f64 + Send + Sync,
{
    f: F,
}

impl<F> FnPredictor<F>
where
    F: Fn(&Sample) -> f64 + Send + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f }
    }
}

impl<F> Predictor for FnPredictor<F>
where
    F: Fn(&Sample) -> f64 + Send + Sync,
{
    fn score(&self, x: &Sample) -> Result<f64> {
        Ok((self.f)(x))
    }
}
