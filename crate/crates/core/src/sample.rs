//! Sample types: discrete sequences, grayscale images, and homogeneous
//! collections of either.

use crate::alphabet::AlphabetSpec;
use crate::error::{Error, Result};
use ndarray::Array2;
use std::fmt;
use std::sync::Arc;

/// A fixed-length string over a finite alphabet, stored as symbol indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSample {
    symbols: Vec<u8>,
    alphabet: Arc<AlphabetSpec>,
}

impl SequenceSample {
    /// Validates every character against the alphabet and encodes it.
    pub fn new(chars: &str, alphabet: Arc<AlphabetSpec>) -> Result<Self> {
        let symbols = alphabet.encode(chars)?;
        Ok(Self { symbols, alphabet })
    }

    /// Builds a sequence directly from symbol indices.
    pub fn from_indices(symbols: Vec<u8>, alphabet: Arc<AlphabetSpec>) -> Result<Self> {
        let n = alphabet.len() as usize;
        if let Some(&bad) = symbols.iter().find(|&&i| (i as usize) >= n) {
            return Err(Error::InvalidAlphabet(format!(
                "symbol index {bad} out of range for alphabet of size {n}"
            )));
        }
        Ok(Self { symbols, alphabet })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet(&self) -> &Arc<AlphabetSpec> {
        &self.alphabet
    }

    /// Symbol indices, one per position.
    pub fn indices(&self) -> &[u8] {
        &self.symbols
    }

    /// The window of `k` symbol indices starting at 0-based `start`.
    pub fn window(&self, start: usize, k: usize) -> Option<&[u8]> {
        self.symbols.get(start..start + k)
    }

    /// Overwrites the window at 0-based `start` with the given indices.
    pub(crate) fn overwrite_window(&mut self, start: usize, replacement: &[u8]) {
        self.symbols[start..start + replacement.len()].copy_from_slice(replacement);
    }

    pub(crate) fn set_symbol(&mut self, pos: usize, idx: u8) {
        self.symbols[pos] = idx;
    }

    /// Renders the sequence as a string.
    pub fn as_string(&self) -> String {
        self.alphabet.decode(&self.symbols)
    }
}

impl fmt::Display for SequenceSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_string())
    }
}

/// A d1×d2 grayscale image with intensities in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSample {
    pixels: Array2<f64>,
}

impl ImageSample {
    /// Validates that every intensity is finite and within [0, 1].
    pub fn new(pixels: Array2<f64>) -> Result<Self> {
        for ((row, col), &v) in pixels.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFinitePixel { row, col });
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::PixelOutOfRange { row, col, value: v });
            }
        }
        Ok(Self { pixels })
    }

    pub fn rows(&self) -> usize {
        self.pixels.nrows()
    }

    pub fn cols(&self) -> usize {
        self.pixels.ncols()
    }

    pub fn pixels(&self) -> &Array2<f64> {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.pixels.get((row, col)).copied()
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: f64) {
        self.pixels[(row, col)] = value;
    }

    /// Row-major flattened view of the intensities.
    pub fn flat(&self) -> &[f64] {
        self.pixels.as_slice().expect("row-major layout")
    }
}

/// Either kind of sample. Sample sets are homogeneous in this variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Sequence(SequenceSample),
    Image(ImageSample),
}

impl Sample {
    pub fn shape(&self) -> SampleShape {
        match self {
            Sample::Sequence(s) => SampleShape::Sequence { len: s.len() },
            Sample::Image(im) => SampleShape::Image {
                rows: im.rows(),
                cols: im.cols(),
            },
        }
    }

    pub fn as_sequence(&self) -> Option<&SequenceSample> {
        match self {
            Sample::Sequence(s) => Some(s),
            Sample::Image(_) => None,
        }
    }

    pub fn as_image(&self) -> Option<&ImageSample> {
        match self {
            Sample::Image(im) => Some(im),
            Sample::Sequence(_) => None,
        }
    }
}

/// Shared shape of every sample in a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleShape {
    Sequence { len: usize },
    Image { rows: usize, cols: usize },
}

impl fmt::Display for SampleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleShape::Sequence { len } => write!(f, "sequence(L={len})"),
            SampleShape::Image { rows, cols } => write!(f, "image({rows}x{cols})"),
        }
    }
}

/// Checks a sample's own invariants and its shape against an expected shape.
pub fn validate_sample(sample: &Sample, expected: SampleShape) -> Result<()> {
    let actual = sample.shape();
    if actual != expected {
        return Err(Error::ShapeMismatch {
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }
    match sample {
        // constructors enforce these, but ingestion paths re-check
        Sample::Sequence(s) => {
            let n = s.alphabet().len();
            if s.indices().iter().any(|&i| (i as usize) >= n) {
                return Err(Error::InvalidAlphabet(
                    "symbol index out of alphabet range".into(),
                ));
            }
        }
        Sample::Image(im) => {
            for ((row, col), &v) in im.pixels().indexed_iter() {
                if !v.is_finite() {
                    return Err(Error::NonFinitePixel { row, col });
                }
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::PixelOutOfRange { row, col, value: v });
                }
            }
        }
    }
    Ok(())
}

/// The empirical sample collection all expectations are taken over.
///
/// Immutable after construction; `seed` records how the set was generated or
/// subsampled so downstream importance maps can state their provenance.
#[derive(Debug, Clone)]
pub struct SampleSet {
    samples: Vec<Sample>,
    shape: SampleShape,
    seed: u64,
}

impl SampleSet {
    /// Builds a set from at least one sample; all must share one shape.
    pub fn new(samples: Vec<Sample>, seed: u64) -> Result<Self> {
        let first = samples.first().ok_or(Error::EmptySampleSet)?;
        let shape = first.shape();
        for s in &samples {
            validate_sample(s, shape)?;
        }
        Ok(Self {
            samples,
            shape,
            seed,
        })
    }

    pub fn from_sequences(seqs: Vec<SequenceSample>, seed: u64) -> Result<Self> {
        Self::new(seqs.into_iter().map(Sample::Sequence).collect(), seed)
    }

    pub fn from_images(images: Vec<ImageSample>, seed: u64) -> Result<Self> {
        Self::new(images.into_iter().map(Sample::Image).collect(), seed)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: n >= 1
    }

    pub fn shape(&self) -> SampleShape {
        self.shape
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get(&self, idx: usize) -> Option<&Sample> {
        self.samples.get(idx)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sample> {
        self.samples.iter()
    }

    /// The alphabet shared by all sequences, if this is a sequence set.
    pub fn alphabet(&self) -> Option<&Arc<AlphabetSpec>> {
        self.samples.first().and_then(|s| match s {
            Sample::Sequence(seq) => Some(seq.alphabet()),
            Sample::Image(_) => None,
        })
    }

    /// New set holding the first `n` samples; `n` must be in 1..=len.
    pub fn prefix(&self, n: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidParam {
                name: "n",
                reason: format!("prefix size {n} not in 1..={}", self.len()),
            });
        }
        Ok(Self {
            samples: self.samples[..n].to_vec(),
            shape: self.shape,
            seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn well_formed_sequence_validates() {
        let a = AlphabetSpec::dna();
        let s = SequenceSample::new("ACGT", a).unwrap();
        assert_eq!(s.len(), 4);
        assert!(validate_sample(
            &Sample::Sequence(s),
            SampleShape::Sequence { len: 4 }
        )
        .is_ok());
    }

    #[test]
    fn foreign_symbol_is_rejected() {
        let a = AlphabetSpec::dna();
        let err = SequenceSample::new("ACGX", a).unwrap_err();
        assert!(matches!(err, Error::SymbolNotInAlphabet { symbol: 'X' }));
    }

    #[test]
    fn nan_pixel_is_rejected() {
        let err = ImageSample::new(array![[0.1, 0.2], [f64::NAN, 0.4]]).unwrap_err();
        assert!(matches!(err, Error::NonFinitePixel { row: 1, col: 0 }));
    }

    #[test]
    fn out_of_range_pixel_is_rejected() {
        let err = ImageSample::new(array![[0.1, 1.5]]).unwrap_err();
        assert!(matches!(err, Error::PixelOutOfRange { row: 0, col: 1, .. }));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = AlphabetSpec::dna();
        let s = Sample::Sequence(SequenceSample::new("ACG", a).unwrap());
        let err = validate_sample(&s, SampleShape::Sequence { len: 4 }).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));
    }

    #[test]
    fn sets_must_be_homogeneous() {
        let a = AlphabetSpec::dna();
        let s1 = Sample::Sequence(SequenceSample::new("ACG", a.clone()).unwrap());
        let s2 = Sample::Sequence(SequenceSample::new("ACGT", a).unwrap());
        assert!(matches!(
            SampleSet::new(vec![s1, s2], 0),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(SampleSet::new(vec![], 0), Err(Error::EmptySampleSet)));
    }

    #[test]
    fn prefix_preserves_shape_and_order() {
        let a = AlphabetSpec::dna();
        let seqs = ["AA", "CC", "GG"]
            .iter()
            .map(|s| SequenceSample::new(s, a.clone()).unwrap())
            .collect();
        let set = SampleSet::from_sequences(seqs, 7).unwrap();
        let p = set.prefix(2, 7).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.get(1).unwrap().as_sequence().unwrap().as_string(), "CC");
        assert!(set.prefix(4, 7).is_err());
    }
}
