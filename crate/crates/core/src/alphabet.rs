//! Finite symbol alphabets for discrete sequence samples.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// An ordered set of distinct symbols. The index of a symbol is fixed for the
/// lifetime of the spec and is what sequence samples store internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetSpec {
    symbols: Vec<char>,
    index: HashMap<char, u8>,
}

impl AlphabetSpec {
    /// Builds an alphabet from an ordered symbol list.
    ///
    /// Rejects fewer than two symbols, duplicates, and more than 256 symbols
    /// (sequences store one byte per position).
    pub fn new(symbols: &[char]) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        if symbols.len() > 256 {
            return Err(Error::InvalidAlphabet(format!(
                "at most 256 symbols supported, got {}",
                symbols.len()
            )));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, &c) in symbols.iter().enumerate() {
            if index.insert(c, i as u8).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol '{c}'")));
            }
        }
        Ok(Self {
            symbols: symbols.to_vec(),
            index,
        })
    }

    /// Parses an alphabet from a string of symbols, e.g. `"ACGT"`.
    pub fn from_str_symbols(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        Self::new(&chars)
    }

    /// The DNA alphabet {A, C, G, T}, the default for sequence data.
    pub fn dna() -> Arc<Self> {
        Arc::new(Self::new(&['A', 'C', 'G', 'T']).expect("static alphabet is valid"))
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: >= 2 symbols
    }

    /// Symbol at a given index.
    pub fn symbol(&self, idx: usize) -> Option<char> {
        self.symbols.get(idx).copied()
    }

    /// Index of a symbol, if present.
    pub fn index_of(&self, c: char) -> Option<u8> {
        self.index.get(&c).copied()
    }

    pub fn contains(&self, c: char) -> bool {
        self.index.contains_key(&c)
    }

    /// All symbols in order.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// Encodes a string as symbol indices; errors on foreign symbols.
    pub fn encode(&self, s: &str) -> Result<Vec<u8>> {
        s.chars()
            .map(|c| {
                self.index_of(c)
                    .ok_or(Error::SymbolNotInAlphabet { symbol: c })
            })
            .collect()
    }

    /// Decodes symbol indices back into a string.
    ///
    /// Indices are assumed valid; out-of-range indices cannot be produced by
    /// [`encode`](Self::encode) on the same alphabet.
    pub fn decode(&self, indices: &[u8]) -> String {
        indices
            .iter()
            .map(|&i| self.symbols[i as usize])
            .collect()
    }

    /// Number of distinct k-mers, `|Σ|^k`. Errors on overflow.
    pub fn kmer_count(&self, k: usize) -> Result<usize> {
        let base = self.len();
        let mut count: usize = 1;
        for _ in 0..k {
            count = count.checked_mul(base).ok_or(Error::InvalidParam {
                name: "k",
                reason: format!("|alphabet|^{k} overflows usize"),
            })?;
        }
        Ok(count)
    }

    /// Maps an encoded k-mer to its rank in lexicographic symbol-index order.
    pub fn kmer_to_index(&self, kmer: &[u8]) -> usize {
        let base = self.len();
        kmer.iter().fold(0usize, |acc, &c| acc * base + c as usize)
    }

    /// Inverse of [`kmer_to_index`](Self::kmer_to_index) for k-mers of length `k`.
    pub fn kmer_from_index(&self, mut idx: usize, k: usize) -> Vec<u8> {
        let base = self.len();
        let mut out = vec![0u8; k];
        for slot in out.iter_mut().rev() {
            *slot = (idx % base) as u8;
            idx /= base;
        }
        out
    }

    /// Renders the k-mer with a given rank as a string.
    pub fn kmer_string(&self, idx: usize, k: usize) -> String {
        self.decode(&self.kmer_from_index(idx, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dna_default_has_fixed_order() {
        let a = AlphabetSpec::dna();
        assert_eq!(a.symbols(), &['A', 'C', 'G', 'T']);
        assert_eq!(a.index_of('G'), Some(2));
    }

    #[test]
    fn rejects_duplicates_and_short_alphabets() {
        assert!(matches!(
            AlphabetSpec::new(&['A', 'A']),
            Err(Error::InvalidAlphabet(_))
        ));
        assert!(matches!(
            AlphabetSpec::new(&['A']),
            Err(Error::InvalidAlphabet(_))
        ));
    }

    #[test]
    fn symbol_index_round_trip() {
        let a = AlphabetSpec::from_str_symbols("ACGT-").unwrap();
        for (i, &c) in a.symbols().iter().enumerate() {
            assert_eq!(a.index_of(c), Some(i as u8));
            assert_eq!(a.symbol(i), Some(c));
        }
    }

    #[test]
    fn encode_rejects_foreign_symbol() {
        let a = AlphabetSpec::dna();
        assert!(matches!(
            a.encode("ACGX"),
            Err(Error::SymbolNotInAlphabet { symbol: 'X' })
        ));
    }

    #[test]
    fn kmer_rank_round_trip() {
        let a = AlphabetSpec::dna();
        let total = a.kmer_count(3).unwrap();
        assert_eq!(total, 64);
        for idx in 0..total {
            let kmer = a.kmer_from_index(idx, 3);
            assert_eq!(a.kmer_to_index(&kmer), idx);
        }
        assert_eq!(a.kmer_string(0, 2), "AA");
        assert_eq!(a.kmer_string(63, 3), "TTT");
    }
}
