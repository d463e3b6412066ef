//! JSON model files: alphabet, channel matrix, loss matrix, and optionally a
//! Markov transition matrix, all row-major.
//!
//! ```json
//! {
//!   "alphabet": ["A", "C", "G", "T"],
//!   "channel": [0.9, 0.05, 0.03, 0.02, ...],
//!   "loss": [0, 1, 1, 1, ...],
//!   "transition": [...]
//! }
//! ```
//!
//! `loss` defaults to Hamming; `transition` is only needed by the
//! Forward-Backward baseline.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::channel::{ChannelMatrix, LossMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub alphabet: Vec<String>,
    pub channel: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<Vec<f64>>,
}

/// Parsed and validated model file.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub alphabet: Arc<Alphabet>,
    pub channel: ChannelMatrix,
    pub loss: LossMatrix,
    pub transition: Option<Matrix>,
}

impl ModelConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<LoadedModel> {
        let alphabet = Arc::new(Alphabet::new(self.alphabet.clone())?);
        let n = alphabet.size();
        let square = |v: &[f64], what: &str| -> Result<Matrix> {
            if v.len() != n * n {
                return Err(Error::InvalidMatrix(format!(
                    "{what} has {} entries; a square {n}x{n} matrix needs {} (non-square channels are not supported)",
                    v.len(),
                    n * n
                )));
            }
            Matrix::from_row_major(n, n, v.to_vec())
        };
        let channel = ChannelMatrix::new(Arc::clone(&alphabet), square(&self.channel, "channel")?)?;
        let loss = match &self.loss {
            Some(v) => LossMatrix::new(square(v, "loss")?)?,
            None => LossMatrix::hamming(n),
        };
        let transition = self
            .transition
            .as_deref()
            .map(|v| square(v, "transition"))
            .transpose()?;
        Ok(LoadedModel {
            alphabet,
            channel,
            loss,
            transition,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_dna_model() {
        let text = r#"{"alphabet":["A","C","G","T"],
            "channel":[0.91,0.03,0.03,0.03, 0.03,0.91,0.03,0.03, 0.03,0.03,0.91,0.03, 0.03,0.03,0.03,0.91]}"#;
        let m = ModelConfig::parse(text).unwrap().build().unwrap();
        assert_eq!(m.alphabet.size(), 4);
        assert_eq!(m.loss, LossMatrix::hamming(4));
        assert!(m.transition.is_none());
    }

    #[test]
    fn rejects_non_square() {
        let text = r#"{"alphabet":["0","1"], "channel":[0.9,0.1,0.0, 0.1,0.9,0.0]}"#;
        let err = ModelConfig::parse(text).unwrap().build().unwrap_err();
        assert!(err.to_string().contains("non-square"));
    }
}
