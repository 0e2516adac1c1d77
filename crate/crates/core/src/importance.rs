//! Importance maps: the output of every estimator, with explicit missing
//! values and provenance metadata.

use crate::error::{Error, Result};
use crate::mode::FeatureCoord;
use std::fmt;

/// Output layout of an importance map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapLayout {
    /// d1×d2 per-pixel grid.
    Grid { rows: usize, cols: usize },
    /// Per-window-start vector of length `len`.
    Positional { len: usize },
    /// (k-mer rank × position) matrix, `|Σ|^k` rows and `L−k+1` columns.
    PoMatrix {
        num_kmers: usize,
        num_positions: usize,
        k: usize,
    },
}

impl MapLayout {
    pub fn num_entries(&self) -> usize {
        match self {
            MapLayout::Grid { rows, cols } => rows * cols,
            MapLayout::Positional { len } => *len,
            MapLayout::PoMatrix {
                num_kmers,
                num_positions,
                ..
            } => num_kmers * num_positions,
        }
    }

    /// Row-major flat index of a coordinate, if it belongs to this layout.
    pub fn flat_index(&self, coord: &FeatureCoord) -> Option<usize> {
        match (self, coord) {
            (MapLayout::Grid { rows, cols }, FeatureCoord::Pixel { row, col })
                if row < rows && col < cols =>
            {
                Some(row * cols + col)
            }
            (MapLayout::Positional { len }, FeatureCoord::Window { start }) if start < len => {
                Some(*start)
            }
            (
                MapLayout::PoMatrix {
                    num_kmers,
                    num_positions,
                    ..
                },
                FeatureCoord::PositionalKmer { kmer, position },
            ) if kmer < num_kmers && position < num_positions => {
                Some(kmer * num_positions + position)
            }
            _ => None,
        }
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn coord_at(&self, idx: usize) -> FeatureCoord {
        match self {
            MapLayout::Grid { cols, .. } => FeatureCoord::Pixel {
                row: idx / cols,
                col: idx % cols,
            },
            MapLayout::Positional { .. } => FeatureCoord::Window { start: idx },
            MapLayout::PoMatrix { num_positions, .. } => FeatureCoord::PositionalKmer {
                kmer: idx / num_positions,
                position: idx % num_positions,
            },
        }
    }
}

impl fmt::Display for MapLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapLayout::Grid { rows, cols } => write!(f, "grid({rows},{cols})"),
            MapLayout::Positional { len } => write!(f, "positional({len})"),
            MapLayout::PoMatrix {
                num_kmers,
                num_positions,
                ..
            } => write!(f, "po-matrix({num_kmers},{num_positions})"),
        }
    }
}

/// Provenance of a map: enough to regenerate it bit-exactly together with the
/// generator parameters of the sample set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MapMetadata {
    /// Explanation mode descriptor, e.g. `sparse-pwm(k=3)`.
    pub mode: String,
    /// Condition descriptor: selector, target, strategy.
    pub condition: String,
    /// Seed of the sample set the expectations were taken over.
    pub seed: u64,
    /// Number of samples in that set.
    pub n: usize,
}

/// A feature-importance map over one of the three layouts.
///
/// Entries are `None` where the estimator had no evidence (empty conditioned
/// subset); missing is deliberately distinct from an estimated zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceMap {
    layout: MapLayout,
    values: Vec<Option<f64>>,
    metadata: MapMetadata,
}

impl ImportanceMap {
    /// A map of the given layout with every entry missing.
    pub fn empty(layout: MapLayout, metadata: MapMetadata) -> Self {
        Self {
            layout,
            values: vec![None; layout.num_entries()],
            metadata,
        }
    }

    /// Builds a map from row-major values; length must match the layout.
    pub fn from_values(
        layout: MapLayout,
        values: Vec<Option<f64>>,
        metadata: MapMetadata,
    ) -> Result<Self> {
        if values.len() != layout.num_entries() {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: layout.num_entries(),
            });
        }
        if let Some(v) = values.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParam {
                name: "values",
                reason: format!("non-finite importance value {v}"),
            });
        }
        Ok(Self {
            layout,
            values,
            metadata,
        })
    }

    pub fn layout(&self) -> MapLayout {
        self.layout
    }

    pub fn metadata(&self) -> &MapMetadata {
        &self.metadata
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn get(&self, coord: &FeatureCoord) -> Option<f64> {
        self.layout.flat_index(coord).and_then(|i| self.values[i])
    }

    pub fn set(&mut self, coord: &FeatureCoord, value: f64) -> Result<()> {
        let idx = self.layout.flat_index(coord).ok_or(Error::OutOfBounds {
            coord: format!("{coord:?}"),
            bounds: self.layout.to_string(),
        })?;
        self.values[idx] = Some(value);
        Ok(())
    }

    /// Number of present (non-missing) entries.
    pub fn present_count(&self) -> usize {
        self.values.iter().flatten().count()
    }

    /// Coordinate of the largest present value; ties break toward the lowest
    /// row-major index. `None` if every entry is missing.
    pub fn argmax(&self) -> Option<FeatureCoord> {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in self.values.iter().enumerate() {
            if let Some(v) = *v {
                match best {
                    Some((_, bv)) if v <= bv => {}
                    _ => best = Some((i, v)),
                }
            }
        }
        best.map(|(i, _)| self.layout.coord_at(i))
    }

    /// Frobenius norm over present entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius distance to another map of the same layout, skipping entries
    /// missing in either map.
    pub fn frobenius_distance(&self, other: &ImportanceMap) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch {
                left: self.layout.num_entries(),
                right: other.layout.num_entries(),
            });
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .filter_map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some((a - b) * (a - b)),
                _ => None,
            })
            .sum();
        Ok(sum.sqrt())
    }

    /// Same map with every present value replaced by its absolute value.
    pub fn abs(&self) -> ImportanceMap {
        ImportanceMap {
            layout: self.layout,
            values: self.values.iter().map(|v| v.map(f64::abs)).collect(),
            metadata: self.metadata.clone(),
        }
    }

    /// Coordinates sorted by descending value, ties broken by ascending
    /// row-major index; missing entries sort last (in index order).
    pub fn coords_by_relevance(&self) -> Vec<FeatureCoord> {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| match (self.values[a], self.values[b]) {
            (Some(va), Some(vb)) => vb.partial_cmp(&va).unwrap().then(a.cmp(&b)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.cmp(&b),
        });
        idx.into_iter().map(|i| self.layout.coord_at(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2x2(values: Vec<Option<f64>>) -> ImportanceMap {
        ImportanceMap::from_values(
            MapLayout::Grid { rows: 2, cols: 2 },
            values,
            MapMetadata {
                mode: "identity-image".into(),
                condition: "const".into(),
                seed: 3,
                n: 10,
            },
        )
        .unwrap()
    }

    #[test]
    fn metadata_records_provenance() {
        let m = grid2x2(vec![Some(0.0); 4]);
        assert_eq!(m.metadata().seed, 3);
        assert_eq!(m.metadata().n, 10);
        assert_eq!(m.metadata().mode, "identity-image");
    }

    #[test]
    fn argmax_breaks_ties_by_row_major_order() {
        let m = grid2x2(vec![Some(1.0), Some(2.0), Some(2.0), None]);
        assert_eq!(m.argmax(), Some(FeatureCoord::Pixel { row: 0, col: 1 }));
    }

    #[test]
    fn frobenius_distance_skips_missing() {
        let a = grid2x2(vec![Some(1.0), Some(2.0), None, Some(3.0)]);
        let b = grid2x2(vec![Some(1.0), None, Some(5.0), Some(0.0)]);
        // only (0,0) and (1,1) are present in both
        assert!((a.frobenius_distance(&b).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn relevance_order_is_deterministic() {
        let m = grid2x2(vec![Some(0.5), Some(0.5), None, Some(1.0)]);
        let coords = m.coords_by_relevance();
        assert_eq!(coords[0], FeatureCoord::Pixel { row: 1, col: 1 });
        assert_eq!(coords[1], FeatureCoord::Pixel { row: 0, col: 0 });
        assert_eq!(coords[2], FeatureCoord::Pixel { row: 0, col: 1 });
        assert_eq!(coords[3], FeatureCoord::Pixel { row: 1, col: 0 });
    }

    #[test]
    fn po_matrix_indexing_round_trips() {
        let layout = MapLayout::PoMatrix {
            num_kmers: 16,
            num_positions: 3,
            k: 2,
        };
        for idx in 0..layout.num_entries() {
            let coord = layout.coord_at(idx);
            assert_eq!(layout.flat_index(&coord), Some(idx));
        }
    }
}
