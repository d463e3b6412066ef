//! Discrete universal denoising of finite-alphabet sequences.
//!
//! Given a noisy sequence and the channel that produced it, the denoisers in
//! this crate recover the clean sequence without any clean training data:
//!
//! * [`dude`]: the two-pass sliding-window DUDE,
//! * [`neural`]: Neural DUDE, a single network trained on pseudo-labels
//!   derived from an unbiased estimate of the true loss,
//! * [`baselines`]: Markov-source simulation and the clairvoyant
//!   Forward-Backward denoiser.
//!
//! [`evaluation`] sweeps the window half-width `k` and picks `k*` from the
//! estimated loss alone.

pub mod alphabet;
pub mod assignment;
pub mod baselines;
pub mod channel;
pub mod dude;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod linalg;
pub mod neural;

pub use alphabet::{context_key, extract_context, Alphabet, Context, Sequence, Symbol};
pub use assignment::Assignment;
pub use channel::{ChannelMatrix, EstimatedLossTables, LossMatrix, SingleSymbolDenoiser};
pub use error::{Error, Result};
pub use evaluation::{ExperimentReport, KRecord, Method};
pub use linalg::Matrix;
pub use neural::{Architecture, NeuralDenoiser, TrainConfig};
