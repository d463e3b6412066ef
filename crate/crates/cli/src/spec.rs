//! Channel and source arguments given on the command line.

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use ndude_core::baselines::MarkovSource;
use ndude_core::io::ModelConfig;
use ndude_core::{Alphabet, ChannelMatrix, LossMatrix, Matrix};

/// `bsc:<delta>` or a JSON model file.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Bsc(f64),
    File(PathBuf),
}

impl FromStr for ChannelSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.strip_prefix("bsc:") {
            Some(d) => {
                let delta: f64 = d
                    .parse()
                    .map_err(|_| format!("bad crossover probability {d:?}"))?;
                if !(0.0..=1.0).contains(&delta) {
                    return Err(format!("crossover probability {delta} not in [0,1]"));
                }
                Ok(Self::Bsc(delta))
            }
            None if s.is_empty() => Err("empty channel spec".into()),
            None => Ok(Self::File(PathBuf::from(s))),
        }
    }
}

/// Everything derived from a channel spec.
pub struct Model {
    pub alphabet: Arc<Alphabet>,
    pub channel: ChannelMatrix,
    pub loss: LossMatrix,
    pub transition: Option<Matrix>,
    /// Crossover probability when the channel is a BSC preset.
    pub delta: Option<f64>,
    pub label: String,
}

impl ChannelSpec {
    pub fn resolve(&self) -> Result<Model> {
        match self {
            Self::Bsc(delta) => Ok(Model {
                alphabet: Arc::new(Alphabet::binary()),
                channel: ChannelMatrix::bsc(*delta)?,
                loss: LossMatrix::hamming(2),
                transition: None,
                delta: Some(*delta),
                label: format!("bsc:{delta}"),
            }),
            Self::File(path) => {
                let m = ModelConfig::load(path)
                    .and_then(|c| c.build())
                    .with_context(|| format!("loading model file {}", path.display()))?;
                Ok(Model {
                    alphabet: m.alphabet,
                    channel: m.channel,
                    loss: m.loss,
                    transition: m.transition,
                    delta: None,
                    label: path.display().to_string(),
                })
            }
        }
    }
}

/// `bsmc:<alpha>` or a JSON model file carrying a `transition` matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Bsmc(f64),
    File(PathBuf),
}

impl FromStr for SourceSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.strip_prefix("bsmc:") {
            Some(a) => {
                let alpha: f64 = a
                    .parse()
                    .map_err(|_| format!("bad transition probability {a:?}"))?;
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(format!("transition probability {alpha} not in [0,1]"));
                }
                Ok(Self::Bsmc(alpha))
            }
            None if s.is_empty() => Err("empty source spec".into()),
            None => Ok(Self::File(PathBuf::from(s))),
        }
    }
}

impl SourceSpec {
    pub fn resolve(&self, seed: u64) -> Result<MarkovSource> {
        match self {
            Self::Bsmc(alpha) => Ok(MarkovSource::bsmc(*alpha, seed)?),
            Self::File(path) => {
                let m = ModelConfig::load(path)
                    .and_then(|c| c.build())
                    .with_context(|| format!("loading model file {}", path.display()))?;
                let Some(t) = m.transition else {
                    bail!("{} has no transition matrix", path.display());
                };
                Ok(MarkovSource::new(m.alphabet, t, seed)?)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Bsmc(alpha) => format!("bsmc:{alpha}"),
            Self::File(path) => path.display().to_string(),
        }
    }
}

/// Seed for the channel noise, kept apart from the source seed.
pub fn noise_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}
