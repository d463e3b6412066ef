//! The two-pass DUDE.
//!
//! The first pass counts, for every double-sided context seen at an interior
//! position, how often each noisy symbol occurs in the middle. The second
//! pass picks a reconstruction per position. Two equivalent rules are
//! provided: the classical per-symbol rule [`OriginalRule`] and the
//! estimated-loss form [`dude_rule_estimated`], which picks one single-symbol
//! denoiser per context. [`dude_denoise`] uses the latter; boundary positions
//! (first and last `k`) are passed through unchanged.

use std::collections::HashMap;

use crate::alphabet::{interior_context_keys, Sequence, Symbol};
use crate::assignment::Assignment;
use crate::channel::{ChannelMatrix, EstimatedLossTables, LossMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Context counts `m[c](a)`, keyed by the PAD-free context key.
#[derive(Debug, Clone)]
pub struct CountTable {
    k: usize,
    alphabet_size: usize,
    slots: HashMap<u128, usize>,
    keys: Vec<u128>,
    counts: Vec<u64>,
    n_effective: usize,
}

impl CountTable {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of counted (interior) positions, `n - 2k`.
    pub fn n_effective(&self) -> usize {
        self.n_effective
    }

    pub fn num_contexts(&self) -> usize {
        self.keys.len()
    }

    pub fn get(&self, key: u128) -> Option<&[u64]> {
        self.slots.get(&key).map(|&s| self.slot(s))
    }

    /// `(key, count vector)` in first-seen order.
    pub fn iter(&self) -> impl Iterator<Item = (u128, &[u64])> + '_ {
        self.keys
            .iter()
            .enumerate()
            .map(|(s, &k)| (k, self.slot(s)))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn slot(&self, s: usize) -> &[u64] {
        &self.counts[s * self.alphabet_size..(s + 1) * self.alphabet_size]
    }

    /// Adds another table's counts (same `k` and alphabet).
    pub fn merge(&mut self, other: &CountTable) -> Result<()> {
        if other.k != self.k || other.alphabet_size != self.alphabet_size {
            return Err(Error::DimensionMismatch(
                "merging incompatible count tables".into(),
            ));
        }
        for (key, m) in other.iter() {
            let s = self.slot_for(key);
            for (dst, src) in self.counts[s * self.alphabet_size..].iter_mut().zip(m) {
                *dst += src;
            }
        }
        self.n_effective += other.n_effective;
        Ok(())
    }

    fn slot_for(&mut self, key: u128) -> usize {
        let next = self.keys.len();
        let s = *self.slots.entry(key).or_insert(next);
        if s == next {
            self.keys.push(key);
            self.counts
                .extend(std::iter::repeat(0).take(self.alphabet_size));
        }
        s
    }
}

/// Counts over interior positions `k..n-k` (0-based). Requires `n > 2k`.
pub fn collect_counts(z: &Sequence, k: usize) -> Result<CountTable> {
    let keys = interior_context_keys(z, k)?;
    let mut table = CountTable {
        k,
        alphabet_size: z.alphabet().size(),
        slots: HashMap::new(),
        keys: Vec::new(),
        counts: Vec::new(),
        n_effective: keys.len(),
    };
    let a = table.alphabet_size;
    for (key, &zi) in keys.iter().zip(&z.data()[k..]) {
        let s = table.slot_for(*key);
        table.counts[s * a + zi as usize] += 1;
    }
    Ok(table)
}

/// Classical DUDE rule: `argmin_x̂ mᵀ Π⁻¹ [λ_x̂ ⊙ π_z]`, with `Π⁻¹` cached.
#[derive(Debug, Clone)]
pub struct OriginalRule {
    pi: ChannelMatrix,
    pi_inv: Matrix,
    lam: LossMatrix,
}

impl OriginalRule {
    pub fn new(pi: &ChannelMatrix, lam: &LossMatrix) -> Result<Self> {
        if lam.clean_size() != pi.size() {
            return Err(Error::DimensionMismatch(
                "loss rows must match channel size".into(),
            ));
        }
        Ok(Self {
            pi: pi.clone(),
            pi_inv: pi.inverse()?,
            lam: lam.clone(),
        })
    }

    /// Reconstruction for a center symbol given its context's count vector.
    /// Ties go to the lowest symbol index.
    pub fn apply(&self, m: &[u64], z_center: Symbol) -> Symbol {
        let mf: Vec<f64> = m.iter().map(|&c| c as f64).collect();
        let q = self.pi_inv.left_mul(&mf);
        let mut best = (0, f64::INFINITY);
        for xhat in 0..self.lam.reconstruction_size() {
            let score: f64 = q
                .iter()
                .enumerate()
                .map(|(x, qx)| {
                    qx * self.lam.loss(x as Symbol, xhat as Symbol)
                        * self.pi.prob(x as Symbol, z_center)
                })
                .sum();
            if score < best.1 {
                best = (xhat, score);
            }
        }
        best.0 as Symbol
    }
}

/// One-shot form of [`OriginalRule::apply`].
pub fn dude_rule_original(
    m: &[u64],
    z_center: Symbol,
    pi: &ChannelMatrix,
    lam: &LossMatrix,
) -> Result<Symbol> {
    Ok(OriginalRule::new(pi, lam)?.apply(m, z_center))
}

/// `argmin_s mᵀ L(·, s)`; returns the denoiser index, lowest index on ties.
pub fn dude_rule_estimated(m: &[u64], tables: &EstimatedLossTables) -> usize {
    let l = tables.loss();
    let mut best = (0, f64::INFINITY);
    for s in 0..tables.num_denoisers() {
        let score: f64 = m
            .iter()
            .enumerate()
            .map(|(z, &c)| c as f64 * l[(z, s)])
            .sum();
        if score < best.1 {
            best = (s, score);
        }
    }
    best.0
}

/// Fits DUDE of half-width `k` on `z` and returns the per-position choice of
/// single-symbol denoiser. Boundary positions get the identity denoiser.
pub fn dude_assignment(z: &Sequence, k: usize, tables: &EstimatedLossTables) -> Result<Assignment> {
    check_tables(z, tables)?;
    let identity = tables.identity_index().ok_or_else(|| {
        Error::DimensionMismatch(
            "pass-through needs the noisy alphabet inside the reconstruction alphabet".into(),
        )
    })? as u32;
    let keys = interior_context_keys(z, k)?;
    let counts = collect_counts(z, k)?;
    let rules: HashMap<u128, u32> = counts
        .iter()
        .map(|(key, m)| (key, dude_rule_estimated(m, tables) as u32))
        .collect();
    let mut choices = vec![identity; z.len()];
    for (i, key) in keys.iter().enumerate() {
        choices[i + k] = rules[key];
    }
    Ok(Assignment::new(k, choices))
}

/// DUDE reconstruction of `z` with half-width `k`.
pub fn dude_denoise(z: &Sequence, k: usize, tables: &EstimatedLossTables) -> Result<Sequence> {
    dude_assignment(z, k, tables)?.reconstruct(z, tables)
}

/// Same reconstruction computed per position with the classical rule.
pub fn dude_denoise_original(
    z: &Sequence,
    k: usize,
    pi: &ChannelMatrix,
    lam: &LossMatrix,
) -> Result<Sequence> {
    let rule = OriginalRule::new(pi, lam)?;
    let keys = interior_context_keys(z, k)?;
    let counts = collect_counts(z, k)?;
    let mut out = z.data().to_vec();
    for (i, key) in keys.iter().enumerate() {
        let m = counts.get(*key).expect("every interior key was counted");
        out[i + k] = rule.apply(m, z.data()[i + k]);
    }
    z.with_data(out)
}

fn check_tables(z: &Sequence, tables: &EstimatedLossTables) -> Result<()> {
    if tables.noisy_size() != z.alphabet().size() {
        return Err(Error::DimensionMismatch(format!(
            "tables built for {} noisy symbols, sequence alphabet has {}",
            tables.noisy_size(),
            z.alphabet().size()
        )));
    }
    Ok(())
}
