//! Alphabets, symbol sequences, and double-sided contexts.
//!
//! Symbols are stored as compact `u8` indices into an [`Alphabet`]; labels only
//! appear at I/O boundaries. Out-of-range context positions are filled with the
//! reserved [`Alphabet::pad`] index, which equals the alphabet size.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Symbol index within an alphabet.
pub type Symbol = u8;

/// Ordered set of distinct symbol labels. The canonical index of a label is its
/// position in the list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    /// Largest supported alphabet; one index value is reserved for padding.
    pub const MAX_SIZE: usize = u8::MAX as usize;

    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = labels.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("no symbols".into()));
        }
        if symbols.len() > Self::MAX_SIZE {
            return Err(Error::InvalidAlphabet(format!(
                "{} symbols, at most {} supported",
                symbols.len(),
                Self::MAX_SIZE
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidAlphabet(format!("empty label at {i}")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet(format!("duplicate label {s:?}")));
            }
        }
        Ok(Self { symbols })
    }

    pub fn binary() -> Self {
        Self::new(["0", "1"]).expect("static alphabet")
    }

    pub fn dna() -> Self {
        Self::new(["A", "C", "G", "T"]).expect("static alphabet")
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    /// The reserved padding index (one past the last real symbol).
    pub fn pad(&self) -> Symbol {
        self.symbols.len() as Symbol
    }

    pub fn labels(&self) -> &[String] {
        &self.symbols
    }

    pub fn label(&self, index: Symbol) -> Option<&str> {
        self.symbols.get(index as usize).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|s| s == label)
            .map(|i| i as Symbol)
    }

    /// True when every label is exactly one character, so sequences can be
    /// written as plain strings.
    pub fn is_single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(","))
    }
}

/// A finite-alphabet sequence stored as symbol indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    data: Vec<Symbol>,
    alphabet: Arc<Alphabet>,
}

impl Sequence {
    pub fn new(data: Vec<Symbol>, alphabet: Arc<Alphabet>) -> Result<Self> {
        let size = alphabet.size();
        if let Some(&bad) = data.iter().find(|&&s| s as usize >= size) {
            return Err(Error::SymbolOutOfRange {
                index: bad as usize,
                size,
            });
        }
        Ok(Self { data, alphabet })
    }

    pub fn from_labels<'a, I>(labels: I, alphabet: Arc<Alphabet>) -> Result<Self>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let data = labels
            .into_iter()
            .map(|l| {
                alphabet
                    .index_of(l)
                    .ok_or_else(|| Error::UnknownSymbol(l.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { data, alphabet })
    }

    pub fn data(&self) -> &[Symbol] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Symbol> {
        self.data
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Same alphabet, new data; indices are checked.
    pub fn with_data(&self, data: Vec<Symbol>) -> Result<Self> {
        Self::new(data, Arc::clone(&self.alphabet))
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming_distance(&self, other: &Sequence) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| a != b)
            .count())
    }
}

/// The `k` symbols on each side of a position, center excluded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    pub left: Vec<Symbol>,
    pub right: Vec<Symbol>,
}

impl Context {
    pub fn k(&self) -> usize {
        self.left.len()
    }

    pub fn has_pad(&self, pad: Symbol) -> bool {
        self.left.iter().chain(&self.right).any(|&s| s == pad)
    }
}

/// Context of position `i` (0-based) with half-width `k`. Positions outside
/// the sequence are filled with the alphabet's pad index.
pub fn extract_context(seq: &Sequence, i: usize, k: usize) -> Context {
    let mut left = Vec::with_capacity(k);
    let mut right = Vec::with_capacity(k);
    fill_context(
        seq.data(),
        seq.alphabet().pad(),
        i,
        k,
        &mut left,
        &mut right,
    );
    Context { left, right }
}

pub(crate) fn fill_context(
    data: &[Symbol],
    pad: Symbol,
    i: usize,
    k: usize,
    left: &mut Vec<Symbol>,
    right: &mut Vec<Symbol>,
) {
    left.clear();
    right.clear();
    for j in (1..=k).rev() {
        left.push(if i >= j { data[i - j] } else { pad });
    }
    for j in 1..=k {
        right.push(data.get(i + j).copied().unwrap_or(pad));
    }
}

/// Canonical integer key of a context over an alphabet of `alphabet_size`
/// symbols.
///
/// The symbols of `left ++ right` are read as digits, first symbol most
/// significant. PAD-free contexts use base `alphabet_size` and occupy
/// `[0, size^{2k})`; contexts with padding use base `size + 1` offset by
/// `size^{2k}`, so the two ranges are disjoint.
pub fn context_key(c: &Context, alphabet_size: usize) -> Result<u128> {
    let k = c.k();
    let too_wide = || Error::ContextTooWide {
        k,
        symbols: alphabet_size,
    };
    let pad = alphabet_size as Symbol;
    let free_span = (alphabet_size as u128)
        .checked_pow(2 * k as u32)
        .ok_or_else(too_wide)?;
    let digits = c.left.iter().chain(&c.right);
    if !c.has_pad(pad) {
        let base = alphabet_size as u128;
        return Ok(digits.fold(0u128, |acc, &s| acc * base + s as u128));
    }
    let base = alphabet_size as u128 + 1;
    let padded_span = base.checked_pow(2 * k as u32).ok_or_else(too_wide)?;
    free_span.checked_add(padded_span).ok_or_else(too_wide)?;
    Ok(free_span + digits.fold(0u128, |acc, &s| acc * base + s as u128))
}

/// Keys of the PAD-free contexts at interior positions `k..n-k` (0-based),
/// computed with a rolling window. Each key equals [`context_key`] of the
/// corresponding context.
pub fn interior_context_keys(seq: &Sequence, k: usize) -> Result<Vec<u128>> {
    let n = seq.len();
    if n <= 2 * k {
        return Err(Error::SequenceTooShort { n, k });
    }
    let size = seq.alphabet().size();
    let base = size as u128;
    let side_span = base
        .checked_pow(k as u32)
        .ok_or(Error::ContextTooWide { k, symbols: size })?;
    side_span
        .checked_mul(side_span)
        .ok_or(Error::ContextTooWide { k, symbols: size })?;
    let z = seq.data();
    let fold = |s: &[Symbol]| s.iter().fold(0u128, |acc, &v| acc * base + v as u128);

    let mut left = fold(&z[0..k]);
    let mut right = fold(&z[k + 1..2 * k + 1]);
    let mut keys = Vec::with_capacity(n - 2 * k);
    keys.push(left * side_span + right);
    for i in k + 1..n - k {
        left = (left * base + z[i - 1] as u128) % side_span;
        right = (right * base + z[i + k] as u128) % side_span;
        keys.push(left * side_span + right);
    }
    Ok(keys)
}
