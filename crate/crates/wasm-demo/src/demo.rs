//! The demo operations as plain Rust, so they can be tested off the browser.

use std::sync::Arc;

use ndude_core::baselines::corrupt;
use ndude_core::dude::dude_assignment;
use ndude_core::neural::train;
use ndude_core::{
    Alphabet, Architecture, ChannelMatrix, EstimatedLossTables, LossMatrix, Sequence, TrainConfig,
};

/// A reconstruction and its estimated error rate (no clean image needed).
#[derive(Debug, Clone, PartialEq)]
pub struct Denoised {
    pub pixels: Vec<u8>,
    pub estimated_loss: f64,
}

fn tables(delta: f64) -> Result<EstimatedLossTables, String> {
    let pi = ChannelMatrix::bsc(delta).map_err(|e| e.to_string())?;
    EstimatedLossTables::build(&pi, &LossMatrix::hamming(2)).map_err(|e| e.to_string())
}

fn binary(pixels: &[u8]) -> Result<Sequence, String> {
    Sequence::new(pixels.to_vec(), Arc::new(Alphabet::binary())).map_err(|e| e.to_string())
}

/// Flips each pixel independently with probability `delta`.
pub fn corrupt_pixels(pixels: &[u8], delta: f64, seed: u64) -> Result<Vec<u8>, String> {
    let pi = ChannelMatrix::bsc(delta).map_err(|e| e.to_string())?;
    Ok(corrupt(&binary(pixels)?, &pi, seed)
        .map_err(|e| e.to_string())?
        .into_data())
}

pub fn dude_pixels(noisy: &[u8], delta: f64, k: usize) -> Result<Denoised, String> {
    let t = tables(delta)?;
    let z = binary(noisy)?;
    let a = dude_assignment(&z, k, &t).map_err(|e| e.to_string())?;
    finish(&z, &a, &t)
}

pub fn neural_pixels(
    noisy: &[u8],
    delta: f64,
    k: usize,
    epochs: usize,
    seed: u64,
) -> Result<Denoised, String> {
    let t = tables(delta)?;
    let z = binary(noisy)?;
    let cfg = TrainConfig {
        epochs,
        seed,
        ..TrainConfig::default()
    };
    let (model, _) =
        train::<f32>(&z, k, &t, &Architecture::four_layer(), &cfg).map_err(|e| e.to_string())?;
    let a = model.assignment(&z).map_err(|e| e.to_string())?;
    finish(&z, &a, &t)
}

fn finish(
    z: &Sequence,
    a: &ndude_core::Assignment,
    t: &EstimatedLossTables,
) -> Result<Denoised, String> {
    Ok(Denoised {
        pixels: a.reconstruct(z, t).map_err(|e| e.to_string())?.into_data(),
        estimated_loss: a.estimated_loss(z, t).map_err(|e| e.to_string())?,
    })
}

/// Estimated loss of DUDE for `k = 1..=kmax`.
pub fn dude_curve(noisy: &[u8], delta: f64, kmax: usize) -> Result<Vec<f64>, String> {
    let t = tables(delta)?;
    let z = binary(noisy)?;
    (1..=kmax)
        .map(|k| {
            dude_assignment(&z, k, &t)
                .and_then(|a| a.estimated_loss(&z, &t))
                .map_err(|e| e.to_string())
        })
        .collect()
}

pub fn error_rate(a: &[u8], b: &[u8]) -> f64 {
    if a.is_empty() || a.len() != b.len() {
        return f64::NAN;
    }
    a.iter().zip(b).filter(|(x, y)| x != y).count() as f64 / a.len() as f64
}

const DENOISER_NAMES: [&str; 4] = ["always 0", "flip", "identity", "always 1"];

/// ρ, L and L_new for a BSC with Hamming loss, as JSON.
pub fn loss_tables_json(delta: f64) -> Result<String, String> {
    let t = tables(delta)?;
    let rows = |m: &ndude_core::Matrix| -> Vec<Vec<f64>> {
        (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
    };
    let value = serde_json::json!({
        "delta": delta,
        "denoisers": DENOISER_NAMES,
        "rho": rows(t.rho()),
        "loss": rows(t.loss()),
        "loss_new": rows(t.loss_new()),
        "l_max": t.l_max(),
    });
    Ok(value.to_string())
}
