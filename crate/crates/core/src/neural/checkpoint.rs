//! Versioned JSON checkpoints for trained networks.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::mlp::{real, Mlp, Real};
use super::train::NeuralDenoiser;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "ndude-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointFile {
    format: String,
    version: u32,
    k: usize,
    alphabet: Vec<String>,
    /// Digest of the channel and loss matrices the network was trained for.
    fingerprint: String,
    layer_dims: Vec<usize>,
    /// Per layer, row-major `dims[l] x dims[l+1]`.
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
    /// Free-form run metadata (seed, training settings).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    provenance: BTreeMap<String, String>,
}

pub fn save_checkpoint<F: Real>(model: &NeuralDenoiser<F>, path: &Path) -> Result<()> {
    save_checkpoint_with(model, path, &[])
}

/// Like [`save_checkpoint`], also storing `provenance` key/value pairs.
pub fn save_checkpoint_with<F: Real>(
    model: &NeuralDenoiser<F>,
    path: &Path,
    provenance: &[(&str, String)],
) -> Result<()> {
    let net = model.network();
    let file = CheckpointFile {
        format: CHECKPOINT_FORMAT.to_string(),
        version: CHECKPOINT_VERSION,
        k: model.k(),
        alphabet: model.alphabet().labels().to_vec(),
        fingerprint: model.fingerprint().to_string(),
        layer_dims: net.dims().to_vec(),
        weights: net
            .weights()
            .iter()
            .map(|w| w.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
            .collect(),
        biases: net
            .biases()
            .iter()
            .map(|b| b.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
            .collect(),
        provenance: provenance
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
    };
    let mut text = serde_json::to_string(&file)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_checkpoint<F: Real>(path: &Path) -> Result<NeuralDenoiser<F>> {
    let text = fs::read_to_string(path)?;
    let file: CheckpointFile = serde_json::from_str(&text)?;
    if file.format != CHECKPOINT_FORMAT {
        return Err(Error::Parse(format!(
            "not a checkpoint: format {:?}",
            file.format
        )));
    }
    if file.version != CHECKPOINT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported checkpoint version {}",
            file.version
        )));
    }
    let dims = &file.layer_dims;
    if dims.len() < 2 || file.weights.len() != dims.len() - 1 || file.biases.len() != dims.len() - 1
    {
        return Err(Error::DimensionMismatch("checkpoint layer count".into()));
    }
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for (l, (w, b)) in file.weights.iter().zip(&file.biases).enumerate() {
        let w = Array2::from_shape_vec(
            (dims[l], dims[l + 1]),
            w.iter().map(|&v| real::<F>(v)).collect(),
        )
        .map_err(|e| Error::DimensionMismatch(format!("layer {l} weights: {e}")))?;
        if b.len() != dims[l + 1] {
            return Err(Error::DimensionMismatch(format!("layer {l} bias length")));
        }
        weights.push(w);
        biases.push(Array1::from_iter(b.iter().map(|&v| real::<F>(v))));
    }
    let net = Mlp::from_parts(weights, biases)
        .ok_or_else(|| Error::DimensionMismatch("inconsistent layer shapes".into()))?;
    let alphabet = Arc::new(Alphabet::new(file.alphabet)?);
    NeuralDenoiser::new(file.k, alphabet, file.fingerprint, net)
}
