//! Explanation modes: the map `φ(X)` whose covariance with the score is
//! reported, and enumeration of the feature coordinates each mode produces.

use crate::alphabet::AlphabetSpec;
use crate::error::{Error, Result};
use crate::sample::SampleShape;
use std::fmt;

/// The explanation mode `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExplanationMode {
    /// `φ(X) = 1`: instance-based explanation, importance carried entirely by
    /// the conditioning feature.
    Unit,
    /// `φ(X) = X` for images: the map stays in pixel space.
    IdentityImage,
    /// Sequences map to a sparse PWM: a binary `|Σ|^k × (L−k+1)` matrix whose
    /// entries indicate presence of each positional k-mer.
    SparsePwm { k: usize },
}

impl fmt::Display for ExplanationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExplanationMode::Unit => f.write_str("unit"),
            ExplanationMode::IdentityImage => f.write_str("identity-image"),
            ExplanationMode::SparsePwm { k } => write!(f, "sparse-pwm(k={k})"),
        }
    }
}

/// One output coordinate of an explanation mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FeatureCoord {
    /// 0-based pixel coordinate of a grid map.
    Pixel { row: usize, col: usize },
    /// 0-based window start of a positional map.
    Window { start: usize },
    /// (k-mer rank, 0-based position) entry of a PO matrix.
    PositionalKmer { kmer: usize, position: usize },
}

/// Enumerates all feature coordinates of `mode` over samples of `shape`.
///
/// Cardinalities: grid → d1·d2; sparse-pwm → |Σ|^k·(L−k+1). The unit mode has
/// a single scalar output and yields one `Window { start: 0 }` coordinate.
pub fn enumerate_pos(
    mode: ExplanationMode,
    shape: SampleShape,
    alphabet: Option<&AlphabetSpec>,
) -> Result<Vec<FeatureCoord>> {
    match (mode, shape) {
        (ExplanationMode::Unit, _) => Ok(vec![FeatureCoord::Window { start: 0 }]),
        (ExplanationMode::IdentityImage, SampleShape::Image { rows, cols }) => {
            let mut coords = Vec::with_capacity(rows * cols);
            for row in 0..rows {
                for col in 0..cols {
                    coords.push(FeatureCoord::Pixel { row, col });
                }
            }
            Ok(coords)
        }
        (ExplanationMode::SparsePwm { k }, SampleShape::Sequence { len }) => {
            if k == 0 || k > len {
                return Err(Error::KmerTooLong { k, len });
            }
            let alphabet = alphabet.ok_or(Error::InvalidParam {
                name: "alphabet",
                reason: "sparse-pwm enumeration needs the sequence alphabet".into(),
            })?;
            let num_kmers = alphabet.kmer_count(k)?;
            let positions = len - k + 1;
            let mut coords = Vec::with_capacity(num_kmers * positions);
            for kmer in 0..num_kmers {
                for position in 0..positions {
                    coords.push(FeatureCoord::PositionalKmer { kmer, position });
                }
            }
            Ok(coords)
        }
        (mode, shape) => Err(Error::InvalidParam {
            name: "mode",
            reason: format!("mode {mode} does not apply to {shape} samples"),
        }),
    }
}

/// All k-window start coordinates over a sequence of length `len`
/// (the coordinate set of instance-based sequence maps): `len − k + 1` of them.
pub fn enumerate_windows(len: usize, k: usize) -> Result<Vec<FeatureCoord>> {
    if k == 0 || k > len {
        return Err(Error::KmerTooLong { k, len });
    }
    Ok((0..=len - k)
        .map(|start| FeatureCoord::Window { start })
        .collect())
}
