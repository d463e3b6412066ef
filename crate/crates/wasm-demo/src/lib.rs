//! Browser bindings: corrupt a binary image, denoise it with DUDE or
//! Neural DUDE, and inspect the estimated-loss tables of a BSC.
//!
//! Pixels cross the boundary as `Uint8Array`s of 0/1 values in row-major
//! order.

pub mod demo;

use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Reconstruction {
    pixels: Vec<u8>,
    estimated_loss: f64,
}

#[wasm_bindgen]
impl Reconstruction {
    #[wasm_bindgen(getter)]
    pub fn pixels(&self) -> Vec<u8> {
        self.pixels.clone()
    }

    #[wasm_bindgen(getter, js_name = estimatedLoss)]
    pub fn estimated_loss(&self) -> f64 {
        self.estimated_loss
    }
}

impl From<demo::Denoised> for Reconstruction {
    fn from(d: demo::Denoised) -> Self {
        Self {
            pixels: d.pixels,
            estimated_loss: d.estimated_loss,
        }
    }
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub fn corrupt(pixels: &[u8], delta: f64, seed: u32) -> Result<Vec<u8>, JsError> {
    demo::corrupt_pixels(pixels, delta, seed.into()).map_err(js)
}

#[wasm_bindgen(js_name = denoiseDude)]
pub fn denoise_dude(noisy: &[u8], delta: f64, k: u32) -> Result<Reconstruction, JsError> {
    demo::dude_pixels(noisy, delta, k as usize)
        .map(Into::into)
        .map_err(js)
}

#[wasm_bindgen(js_name = denoiseNeural)]
pub fn denoise_neural(
    noisy: &[u8],
    delta: f64,
    k: u32,
    epochs: u32,
    seed: u32,
) -> Result<Reconstruction, JsError> {
    demo::neural_pixels(noisy, delta, k as usize, epochs as usize, seed.into())
        .map(Into::into)
        .map_err(js)
}

#[wasm_bindgen(js_name = dudeCurve)]
pub fn dude_curve(noisy: &[u8], delta: f64, kmax: u32) -> Result<Vec<f64>, JsError> {
    demo::dude_curve(noisy, delta, kmax as usize).map_err(js)
}

#[wasm_bindgen(js_name = errorRate)]
pub fn error_rate(a: &[u8], b: &[u8]) -> f64 {
    demo::error_rate(a, b)
}

#[wasm_bindgen(js_name = lossTables)]
pub fn loss_tables(delta: f64) -> Result<String, JsError> {
    demo::loss_tables_json(delta).map_err(js)
}
