//! Feature selectors and conditioning specs: which feature `f(X)` to hold at
//! which target value `t`, and how matches are realized.

use crate::error::{Error, Result};
use crate::sample::SampleShape;
use std::fmt;

/// The feature `f(X)` conditioned on.
///
/// Coordinates are 0-based here; user-facing formats (CLI flags, CSV files)
/// are 1-based and converted at the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureSelector {
    /// One pixel of an image sample.
    Pixel { row: usize, col: usize },
    /// The k-mer window starting at `start`.
    Kmer { start: usize, k: usize },
    /// `f(X) = t` constant: every sample matches (model-based explanation).
    Constant,
}

impl fmt::Display for FeatureSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureSelector::Pixel { row, col } => write!(f, "pixel({},{})", row + 1, col + 1),
            FeatureSelector::Kmer { start, k } => write!(f, "kmer(i={},k={k})", start + 1),
            FeatureSelector::Constant => write!(f, "const"),
        }
    }
}

/// The target value `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetValue {
    Real(f64),
    /// Raw k-mer characters; validated against the sample set's alphabet
    /// when the condition is applied.
    Kmer(String),
    None,
}

impl fmt::Display for TargetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetValue::Real(v) => write!(f, "{v}"),
            TargetValue::Kmer(s) => f.write_str(s),
            TargetValue::None => f.write_str("-"),
        }
    }
}

/// How `f(X) = t` is realized on an empirical sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatchStrategy {
    /// Keep samples with `f(z) = t` exactly.
    Exact,
    /// Keep samples with `|f(z) − t| ≤ ε` (real-valued features only).
    EpsilonBand(f64),
    /// Keep all samples and overwrite the conditioned coordinates with `t`
    /// before scoring.
    Intervene,
}

impl fmt::Display for MatchStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchStrategy::Exact => f.write_str("exact"),
            MatchStrategy::EpsilonBand(eps) => write!(f, "epsilon({eps})"),
            MatchStrategy::Intervene => f.write_str("intervene"),
        }
    }
}

/// A complete conditioning specification `(f, t, strategy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSpec {
    pub selector: FeatureSelector,
    pub target: TargetValue,
    pub strategy: MatchStrategy,
}

impl ConditionSpec {
    /// Condition on the pixel at 0-based `(row, col)` equalling `target`.
    pub fn pixel(row: usize, col: usize, target: f64, strategy: MatchStrategy) -> Result<Self> {
        if !target.is_finite() {
            return Err(Error::InvalidCondition(format!(
                "pixel target {target} is not finite"
            )));
        }
        let spec = Self {
            selector: FeatureSelector::Pixel { row, col },
            target: TargetValue::Real(target),
            strategy,
        };
        spec.check_strategy()?;
        Ok(spec)
    }

    /// Condition on the k-mer window at 0-based `start` equalling `target`;
    /// `k` is the target's character length.
    pub fn kmer(start: usize, target: &str, strategy: MatchStrategy) -> Result<Self> {
        let k = target.chars().count();
        if k == 0 {
            return Err(Error::InvalidCondition("empty k-mer target".into()));
        }
        let spec = Self {
            selector: FeatureSelector::Kmer { start, k },
            target: TargetValue::Kmer(target.to_string()),
            strategy,
        };
        spec.check_strategy()?;
        Ok(spec)
    }

    /// The constant condition: `f(X) = t` for every sample.
    pub fn constant() -> Self {
        Self {
            selector: FeatureSelector::Constant,
            target: TargetValue::None,
            strategy: MatchStrategy::Exact,
        }
    }

    fn check_strategy(&self) -> Result<()> {
        match (&self.strategy, &self.selector) {
            (MatchStrategy::EpsilonBand(eps), _) if *eps <= 0.0 => Err(Error::InvalidParam {
                name: "epsilon",
                reason: format!("must be > 0, got {eps}"),
            }),
            (MatchStrategy::EpsilonBand(_), FeatureSelector::Kmer { .. }) => {
                Err(Error::InvalidCondition(
                    "epsilon-band matching is undefined for k-mer features".into(),
                ))
            }
            _ => Ok(()),
        }
    }

    /// Validates selector coordinates against a sample shape.
    pub fn check_shape(&self, shape: SampleShape) -> Result<()> {
        match (&self.selector, shape) {
            (FeatureSelector::Constant, _) => Ok(()),
            (FeatureSelector::Pixel { row, col }, SampleShape::Image { rows, cols }) => {
                if *row < rows && *col < cols {
                    Ok(())
                } else {
                    Err(Error::OutOfBounds {
                        coord: format!("pixel({},{})", row + 1, col + 1),
                        bounds: shape.to_string(),
                    })
                }
            }
            (FeatureSelector::Kmer { start, k }, SampleShape::Sequence { len }) => {
                if *k > len {
                    Err(Error::KmerTooLong { k: *k, len })
                } else if start + k > len {
                    Err(Error::OutOfBounds {
                        coord: format!("kmer(i={},k={k})", start + 1),
                        bounds: shape.to_string(),
                    })
                } else {
                    Ok(())
                }
            }
            (sel, shape) => Err(Error::InvalidCondition(format!(
                "selector {sel} does not apply to {shape} samples"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_must_be_positive() {
        let err = ConditionSpec::pixel(0, 0, 0.5, MatchStrategy::EpsilonBand(0.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidParam { name: "epsilon", .. }));
    }

    #[test]
    fn epsilon_band_rejected_for_kmers() {
        let err = ConditionSpec::kmer(0, "AC", MatchStrategy::EpsilonBand(0.1)).unwrap_err();
        assert!(matches!(err, Error::InvalidCondition(_)));
    }

    #[test]
    fn kmer_window_bounds_checked() {
        let spec = ConditionSpec::kmer(3, "AC", MatchStrategy::Exact).unwrap();
        assert!(spec.check_shape(SampleShape::Sequence { len: 5 }).is_ok());
        assert!(spec.check_shape(SampleShape::Sequence { len: 4 }).is_err());
        let long = ConditionSpec::kmer(0, "ACGTA", MatchStrategy::Exact).unwrap();
        assert!(matches!(
            long.check_shape(SampleShape::Sequence { len: 4 }),
            Err(Error::KmerTooLong { k: 5, len: 4 })
        ));
    }

    #[test]
    fn selector_kind_must_match_sample_kind() {
        let spec = ConditionSpec::pixel(0, 0, 0.5, MatchStrategy::Exact).unwrap();
        assert!(spec.check_shape(SampleShape::Sequence { len: 5 }).is_err());
    }
}
