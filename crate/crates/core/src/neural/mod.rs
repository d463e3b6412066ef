//! Neural DUDE: one network shared by all contexts.
//!
//! The network maps a one-hot encoded context to a distribution over the
//! `|S|` single-symbol denoisers. It is trained on the noisy sequence alone,
//! using rows of `L_new` as pseudo-labels under the generalized cross-entropy
//! `C(g, p) = -Σ g_i log p_i`, then applied to the same sequence by taking
//! the most probable denoiser per context.

mod adam;
mod checkpoint;
mod mlp;
mod train;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use adam::Adam;
pub use checkpoint::{
    load_checkpoint, save_checkpoint, save_checkpoint_with, CHECKPOINT_FORMAT, CHECKPOINT_VERSION,
};
pub use mlp::{argmax_rows, softmax_rows, ForwardPass, Gradients, InputBatch, Mlp, Real, INACTIVE};
pub use train::{train, NeuralDenoiser, TrainLog};

use crate::alphabet::Context;
use crate::error::{Error, Result};

/// Floor applied to probabilities inside [`cost`].
pub const LOG_FLOOR: f64 = 1e-30;

/// Generalized cross-entropy `C(g, p) = -Σ g_i log p_i` with `g ≥ 0` not
/// necessarily normalized.
pub fn cost(g: &[f64], p: &[f64]) -> f64 {
    debug_assert_eq!(g.len(), p.len());
    -g.iter()
        .zip(p)
        .map(|(&gi, &pi)| {
            if gi == 0.0 {
                0.0
            } else {
                gi * pi.max(LOG_FLOOR).ln()
            }
        })
        .sum::<f64>()
}

/// Concatenation of `2k` one-hot blocks of width `alphabet_size`; padding
/// encodes as an all-zero block.
pub fn encode_context(c: &Context, alphabet_size: usize) -> Vec<f64> {
    let mut v = vec![0.0; 2 * c.k() * alphabet_size];
    for (slot, &s) in c.left.iter().chain(&c.right).enumerate() {
        if (s as usize) < alphabet_size {
            v[slot * alphabet_size + s as usize] = 1.0;
        }
    }
    v
}

/// Hidden layer widths; an empty list is linear softmax regression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub hidden: Vec<usize>,
}

impl Architecture {
    /// `layers` weight layers in total, each hidden one `width` wide.
    pub fn uniform(layers: usize, width: usize) -> Self {
        Self {
            hidden: vec![width; layers.saturating_sub(1)],
        }
    }

    /// Three hidden layers of 40 rectifier units.
    pub fn four_layer() -> Self {
        Self::uniform(4, 40)
    }

    /// Wider preset for four-letter alphabets.
    pub fn four_layer_wide() -> Self {
        Self::uniform(4, 80)
    }

    pub fn linear() -> Self {
        Self { hidden: Vec::new() }
    }

    pub fn layers(&self) -> usize {
        self.hidden.len() + 1
    }

    /// Full layer dimensions for half-width `k`.
    pub fn dims(&self, k: usize, alphabet_size: usize, num_denoisers: usize) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.hidden.len() + 2);
        dims.push(2 * k * alphabet_size);
        dims.extend(&self.hidden);
        dims.push(num_denoisers);
        dims
    }
}

impl Default for Architecture {
    fn default() -> Self {
        Self::four_layer()
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hidden.is_empty() {
            return f.write_str("linear");
        }
        let parts: Vec<String> = self.hidden.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("-"))
    }
}

impl FromStr for Architecture {
    type Err = Error;

    /// Accepts `linear`, `<layers>x<width>` (e.g. `4x40`), or hidden widths
    /// separated by `,` or `-` (e.g. `40-40-40`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("bad architecture {s:?}"));
        if s.eq_ignore_ascii_case("linear") || s.eq_ignore_ascii_case("1L") {
            return Ok(Self::linear());
        }
        if let Some((layers, width)) = s.split_once('x') {
            let layers: usize = layers.parse().map_err(|_| bad())?;
            let width: usize = width.parse().map_err(|_| bad())?;
            if layers == 0 || width == 0 {
                return Err(bad());
            }
            return Ok(Self::uniform(layers, width));
        }
        let hidden = s
            .split([',', '-'])
            .map(|w| {
                w.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&w| w > 0)
                    .ok_or_else(bad)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { hidden })
    }
}

/// Optimizer and schedule settings for [`train`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 10,
            batch_size: 100,
            learning_rate: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.epochs > 0
            && self.batch_size > 0
            && self.learning_rate > 0.0
            && (0.0..1.0).contains(&self.beta1)
            && (0.0..1.0).contains(&self.beta2)
            && self.epsilon > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "invalid training configuration {self:?}"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_examples() {
        assert_eq!(cost(&[0.0, 0.0], &[0.5, 0.5]), 0.0);
        assert!((cost(&[1.0, 0.0], &[0.5, 0.5]) - 2f64.ln()).abs() < 1e-15);
        assert!((cost(&[2.0, 1.0], &[0.5, 0.5]) - 3.0 * 2f64.ln()).abs() < 1e-15);
        assert!(cost(&[1.0, 1.0], &[0.0, 1.0]).is_finite());
    }

    #[test]
    fn encode_examples() {
        let c = Context {
            left: vec![1],
            right: vec![0],
        };
        assert_eq!(encode_context(&c, 2), vec![0.0, 1.0, 1.0, 0.0]);
        let c = Context {
            left: vec![2],
            right: vec![1],
        };
        assert_eq!(encode_context(&c, 2), vec![0.0, 0.0, 0.0, 1.0]);
        let c = Context {
            left: vec![0, 1],
            right: vec![2, 3],
        };
        assert_eq!(encode_context(&c, 4).len(), 16);
    }

    #[test]
    fn architecture_parsing() {
        assert_eq!(
            "4x40".parse::<Architecture>().unwrap(),
            Architecture::four_layer()
        );
        assert_eq!(
            "40-40-40".parse::<Architecture>().unwrap(),
            Architecture::four_layer()
        );
        assert_eq!(
            "80,80,80".parse::<Architecture>().unwrap(),
            Architecture::four_layer_wide()
        );
        assert_eq!("linear".parse::<Architecture>().unwrap().layers(), 1);
        assert_eq!(
            "1x40".parse::<Architecture>().unwrap(),
            Architecture::linear()
        );
        assert!("4x0".parse::<Architecture>().is_err());
        assert!("abc".parse::<Architecture>().is_err());
        assert_eq!(Architecture::four_layer().to_string(), "40-40-40");
        assert_eq!(
            Architecture::four_layer().dims(5, 2, 4),
            vec![20, 40, 40, 40, 4]
        );
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        let bad = TrainConfig {
            batch_size: 0,
            ..TrainConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
