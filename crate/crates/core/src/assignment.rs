//! Per-position choice of single-symbol denoiser.
//!
//! Every sliding-window denoiser in this crate (DUDE, Neural DUDE) reduces to
//! picking, at each position `i`, a single-symbol denoiser `s_i` from its
//! context and reconstructing `x̂_i = s_i(z_i)`. Keeping the choice explicit
//! lets the estimated loss be computed without the clean sequence.

use crate::alphabet::{Sequence, Symbol};
use crate::channel::EstimatedLossTables;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    k: usize,
    choices: Vec<u32>,
}

impl Assignment {
    pub fn new(k: usize, choices: Vec<u32>) -> Self {
        Self { k, choices }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn choices(&self) -> &[u32] {
        &self.choices
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// `x̂_i = s_i(z_i)` at every position.
    pub fn reconstruct(&self, z: &Sequence, tables: &EstimatedLossTables) -> Result<Sequence> {
        self.check_len(z)?;
        let data: Vec<Symbol> = z
            .data()
            .iter()
            .zip(&self.choices)
            .map(|(&zi, &s)| tables.denoiser(s as usize).apply(zi))
            .collect();
        z.with_data(data)
    }

    /// Mean of `L(z_i, s_i)` over all positions.
    pub fn estimated_loss(&self, z: &Sequence, tables: &EstimatedLossTables) -> Result<f64> {
        self.check_len(z)?;
        if z.is_empty() {
            return Ok(0.0);
        }
        let l = tables.loss();
        let total: f64 = z
            .data()
            .iter()
            .zip(&self.choices)
            .map(|(&zi, &s)| l[(zi as usize, s as usize)])
            .sum();
        Ok(total / z.len() as f64)
    }

    fn check_len(&self, z: &Sequence) -> Result<()> {
        if z.len() != self.choices.len() {
            return Err(Error::LengthMismatch {
                left: z.len(),
                right: self.choices.len(),
            });
        }
        Ok(())
    }
}
