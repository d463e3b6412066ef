use std::sync::Arc;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::adam::Adam;
use super::mlp::{argmax_rows, real, InputBatch, Mlp, Real};
use super::{Architecture, TrainConfig};
use crate::alphabet::{Alphabet, Context, Sequence};
use crate::assignment::Assignment;
use crate::channel::EstimatedLossTables;
use crate::error::{Error, Result};

const INFERENCE_BATCH: usize = 4096;

/// Mean training objective per epoch.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainLog {
    pub epoch_objective: Vec<f64>,
}

/// A trained network together with what it was trained for.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralDenoiser<F = f32> {
    pub(crate) k: usize,
    pub(crate) alphabet: Arc<Alphabet>,
    pub(crate) fingerprint: String,
    pub(crate) net: Mlp<F>,
}

impl<F: Real> NeuralDenoiser<F> {
    pub fn new(
        k: usize,
        alphabet: Arc<Alphabet>,
        fingerprint: String,
        net: Mlp<F>,
    ) -> Result<Self> {
        let expected_input = 2 * k * alphabet.size();
        if net.dims()[0] != expected_input {
            return Err(Error::DimensionMismatch(format!(
                "network input is {} wide, k={k} over {} symbols needs {expected_input}",
                net.dims()[0],
                alphabet.size()
            )));
        }
        Ok(Self {
            k,
            alphabet,
            fingerprint,
            net,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn network(&self) -> &Mlp<F> {
        &self.net
    }

    pub fn num_denoisers(&self) -> usize {
        *self.net.dims().last().expect("non-empty dims")
    }

    /// Output distribution over denoisers for one context.
    pub fn probabilities(&self, c: &Context) -> Vec<F> {
        let mut batch = InputBatch::new(2 * self.k);
        let symbols: Vec<u8> = c.left.iter().chain(&c.right).copied().collect();
        batch.push_context(&symbols, self.alphabet.size());
        self.net
            .forward(&batch)
            .probabilities()
            .into_iter()
            .collect()
    }

    /// Most probable denoiser at every position (padded contexts at the
    /// boundaries). Ties go to the lowest index.
    pub fn assignment(&self, z: &Sequence) -> Result<Assignment> {
        self.check(z)?;
        let n = z.len();
        let a = self.alphabet.size();
        let mut choices = Vec::with_capacity(n);
        let mut batch = InputBatch::new(2 * self.k);
        for start in (0..n).step_by(INFERENCE_BATCH) {
            batch.clear();
            for i in start..(start + INFERENCE_BATCH).min(n) {
                batch.push_position(z.data(), a, self.k, i);
            }
            let logits = self.net.forward(&batch);
            choices.extend(argmax_rows(logits.logits()).into_iter().map(|s| s as u32));
        }
        Ok(Assignment::new(self.k, choices))
    }

    pub fn denoise(&self, z: &Sequence, tables: &EstimatedLossTables) -> Result<Sequence> {
        if tables.num_denoisers() != self.num_denoisers() {
            return Err(Error::DimensionMismatch(format!(
                "network has {} outputs, tables have {} denoisers",
                self.num_denoisers(),
                tables.num_denoisers()
            )));
        }
        self.assignment(z)?.reconstruct(z, tables)
    }

    fn check(&self, z: &Sequence) -> Result<()> {
        if z.alphabet().as_ref() != self.alphabet.as_ref() {
            return Err(Error::DimensionMismatch(format!(
                "network trained on alphabet {}, sequence uses {}",
                self.alphabet,
                z.alphabet()
            )));
        }
        Ok(())
    }
}

/// Trains a Neural DUDE network of half-width `k` on every position of `z`.
///
/// Each position contributes the pair (context, `L_newᵀ 1_{z_i}`). Minibatches
/// are drawn from a per-epoch shuffle of a generator seeded by `cfg.seed`; the
/// last partial minibatch is kept. Single-threaded, so identical inputs give
/// bit-identical weights.
pub fn train<F: Real>(
    z: &Sequence,
    k: usize,
    tables: &EstimatedLossTables,
    arch: &Architecture,
    cfg: &TrainConfig,
) -> Result<(NeuralDenoiser<F>, TrainLog)> {
    cfg.validate()?;
    let n = z.len();
    if n == 0 {
        return Err(Error::SequenceTooShort { n, k });
    }
    let a = z.alphabet().size();
    if tables.noisy_size() != a {
        return Err(Error::DimensionMismatch(format!(
            "tables built for {} noisy symbols, sequence alphabet has {a}",
            tables.noisy_size()
        )));
    }
    let num_s = tables.num_denoisers();
    let dims = arch.dims(k, a, num_s);

    // One pseudo-label row per noisy symbol, referenced by z_i.
    let labels = Array2::from_shape_fn((a, num_s), |(zv, s)| real::<F>(tables.loss_new()[(zv, s)]));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut net: Mlp<F> = Mlp::new(&dims, &mut rng);
    let mut adam = Adam::new(&net, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);
    let mut grads = net.zero_gradients();

    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut batch = InputBatch::new(2 * k);
    let mut batch_labels = Array2::<F>::zeros((cfg.batch_size, num_s));
    let mut log = TrainLog::default();
    let data = z.data();
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut weighted = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            batch.clear();
            if chunk.len() != batch_labels.nrows() {
                batch_labels = Array2::zeros((chunk.len(), num_s));
            }
            for (r, &i) in chunk.iter().enumerate() {
                let i = i as usize;
                batch.push_position(data, a, k, i);
                batch_labels
                    .row_mut(r)
                    .assign(&labels.row(data[i] as usize));
            }
            let obj = net.gradient(&batch, batch_labels.view(), &mut grads);
            adam.update(&mut net, &grads);
            weighted += obj.to_f64().unwrap_or(f64::NAN) * chunk.len() as f64;
        }
        let epoch_mean = weighted / n as f64;
        if !epoch_mean.is_finite() {
            return Err(Error::Numerical(format!(
                "training objective diverged at k={k}"
            )));
        }
        log.epoch_objective.push(epoch_mean);
    }

    let denoiser = NeuralDenoiser::new(
        k,
        Arc::clone(z.alphabet()),
        tables.fingerprint().to_string(),
        net,
    )?;
    Ok((denoiser, log))
}
