//! Synthetic data and the clairvoyant Forward-Backward denoiser.

use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Sequence, Symbol};
use crate::channel::{check_stochastic, ChannelMatrix, LossMatrix};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// First-order Markov source.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovSource {
    alphabet: Arc<Alphabet>,
    transition: Matrix,
    initial: Vec<f64>,
    pub seed: u64,
}

impl MarkovSource {
    /// Starts from the stationary distribution of `transition`.
    pub fn new(alphabet: Arc<Alphabet>, transition: Matrix, seed: u64) -> Result<Self> {
        let initial = stationary_distribution(&transition)?;
        Self::with_initial(alphabet, transition, initial, seed)
    }

    pub fn with_initial(
        alphabet: Arc<Alphabet>,
        transition: Matrix,
        initial: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        let n = alphabet.size();
        if transition.rows() != n || transition.cols() != n || initial.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "Markov source over {n} symbols needs an {n}x{n} transition matrix"
            )));
        }
        check_stochastic(&transition, "transition")?;
        let init = Matrix::from_row_major(1, n, initial.clone())?;
        check_stochastic(&init, "initial distribution")?;
        Ok(Self {
            alphabet,
            transition,
            initial,
            seed,
        })
    }

    /// Binary symmetric Markov chain flipping with probability `alpha`.
    pub fn bsmc(alpha: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidMatrix(format!(
                "transition probability {alpha} not in [0,1]"
            )));
        }
        let t = Matrix::from_rows(&[vec![1.0 - alpha, alpha], vec![alpha, 1.0 - alpha]])?;
        Self::with_initial(Arc::new(Alphabet::binary()), t, vec![0.5, 0.5], seed)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }
}

/// Stationary distribution by power iteration on `πᵀ T`.
pub fn stationary_distribution(t: &Matrix) -> Result<Vec<f64>> {
    let n = t.rows();
    if n == 0 || t.cols() != n {
        return Err(Error::DimensionMismatch(
            "transition matrix must be square".into(),
        ));
    }
    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..100_000 {
        // Lazy chain (T + I)/2 has the same stationary law and cannot oscillate.
        let step = t.left_mul(&p);
        let next: Vec<f64> = p.iter().zip(&step).map(|(a, b)| 0.5 * (a + b)).collect();
        let diff: f64 = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if diff < 1e-15 {
            break;
        }
    }
    let s: f64 = p.iter().sum();
    Ok(p.into_iter().map(|v| v / s).collect())
}

fn sampler(row: &[f64]) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(row)
        .map_err(|e| Error::InvalidMatrix(format!("cannot sample row {row:?}: {e}")))
}

/// Draws `n` symbols from the source; deterministic in `src.seed`.
pub fn generate_source(src: &MarkovSource, n: usize) -> Result<Sequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(src.seed);
    let rows = (0..src.transition.rows())
        .map(|r| sampler(src.transition.row(r)))
        .collect::<Result<Vec<_>>>()?;
    let mut data = Vec::with_capacity(n);
    if n > 0 {
        let mut x = sampler(&src.initial)?.sample(&mut rng);
        data.push(x as Symbol);
        for _ in 1..n {
            x = rows[x].sample(&mut rng);
            data.push(x as Symbol);
        }
    }
    Sequence::new(data, Arc::clone(&src.alphabet))
}

/// Passes `x` through the channel, each symbol independently.
pub fn corrupt(x: &Sequence, pi: &ChannelMatrix, seed: u64) -> Result<Sequence> {
    if x.alphabet().size() != pi.size() {
        return Err(Error::DimensionMismatch(format!(
            "sequence has {} symbols, channel {}",
            x.alphabet().size(),
            pi.size()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = pi.size();
    // Inverse-CDF per row keeps exactly one uniform draw per symbol.
    let cdfs: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut acc = 0.0;
            pi.matrix()
                .row(r)
                .iter()
                .map(|p| {
                    acc += p;
                    acc
                })
                .collect()
        })
        .collect();
    let data = x
        .data()
        .iter()
        .map(|&xi| {
            let u: f64 = rng.gen();
            let cdf = &cdfs[xi as usize];
            let row = pi.matrix().row(xi as usize);
            cdf.iter()
                .zip(row)
                .position(|(&c, &p)| p > 0.0 && u < c)
                .unwrap_or_else(|| row.iter().rposition(|&p| p > 0.0).unwrap_or(0))
                as Symbol
        })
        .collect();
    x.with_data(data)
}

/// A hidden Markov model: Markov source observed through a memoryless channel.
#[derive(Debug, Clone)]
pub struct HmmSpec {
    pub source: MarkovSource,
    pub channel: ChannelMatrix,
}

impl HmmSpec {
    pub fn new(source: MarkovSource, channel: ChannelMatrix) -> Result<Self> {
        if source.alphabet().size() != channel.size() {
            return Err(Error::DimensionMismatch(
                "source and channel alphabets differ".into(),
            ));
        }
        Ok(Self { source, channel })
    }
}

/// Posterior marginals `P(x_i = x | z^n)`, row `i`, from scaled forward and
/// backward passes (messages renormalized at every step).
pub fn forward_backward_posteriors(z: &Sequence, spec: &HmmSpec) -> Result<Matrix> {
    let n = z.len();
    let s = spec.channel.size();
    if z.alphabet().size() != s {
        return Err(Error::DimensionMismatch(
            "sequence alphabet does not match the HMM".into(),
        ));
    }
    let t = spec.source.transition();
    let emit = |x: usize, i: usize| spec.channel.prob(x as Symbol, z.data()[i]);
    let normalize = |v: &mut [f64], i: usize| -> Result<()> {
        let total: f64 = v.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Numerical(format!(
                "observation {i} has zero likelihood under the model"
            )));
        }
        v.iter_mut().for_each(|x| *x /= total);
        Ok(())
    };

    let mut alpha = Matrix::zeros(n, s);
    if n == 0 {
        return Ok(alpha);
    }
    let mut cur: Vec<f64> = (0..s)
        .map(|x| spec.source.initial()[x] * emit(x, 0))
        .collect();
    normalize(&mut cur, 0)?;
    for x in 0..s {
        alpha[(0, x)] = cur[x];
    }
    for i in 1..n {
        let pred = t.left_mul(&cur);
        cur = (0..s).map(|x| pred[x] * emit(x, i)).collect();
        normalize(&mut cur, i)?;
        for x in 0..s {
            alpha[(i, x)] = cur[x];
        }
    }

    let mut beta = vec![1.0; s];
    let mut post = Matrix::zeros(n, s);
    for i in (0..n).rev() {
        let mut row: Vec<f64> = (0..s).map(|x| alpha[(i, x)] * beta[x]).collect();
        normalize(&mut row, i)?;
        for x in 0..s {
            post[(i, x)] = row[x];
        }
        if i > 0 {
            let weighted: Vec<f64> = (0..s).map(|x| emit(x, i) * beta[x]).collect();
            let mut next: Vec<f64> = (0..s)
                .map(|x| t.row(x).iter().zip(&weighted).map(|(a, b)| a * b).sum())
                .collect();
            normalize(&mut next, i)?;
            beta = next;
        }
    }
    Ok(post)
}

/// Bayes-optimal per-symbol reconstruction under the known HMM:
/// `x̂_i = argmin_x̂ Σ_x P(x_i = x | z^n) Λ(x, x̂)`, lowest index on ties.
pub fn forward_backward_denoise(
    z: &Sequence,
    spec: &HmmSpec,
    lam: &LossMatrix,
) -> Result<Sequence> {
    let post = forward_backward_posteriors(z, spec)?;
    if lam.clean_size() != post.cols() {
        return Err(Error::DimensionMismatch(
            "loss rows must match the HMM alphabet".into(),
        ));
    }
    let data = (0..z.len())
        .map(|i| {
            let p = post.row(i);
            let mut best = (0usize, f64::INFINITY);
            for xhat in 0..lam.reconstruction_size() {
                let risk: f64 = p
                    .iter()
                    .enumerate()
                    .map(|(x, px)| px * lam.loss(x as Symbol, xhat as Symbol))
                    .sum();
                if risk < best.1 {
                    best = (xhat, risk);
                }
            }
            best.0 as Symbol
        })
        .collect();
    z.with_data(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_zero_is_constant() {
        let x = generate_source(&MarkovSource::bsmc(0.0, 5).unwrap(), 1000).unwrap();
        assert!(x.data().iter().all(|&v| v == x.data()[0]));
    }

    #[test]
    fn alpha_one_alternates() {
        let x = generate_source(&MarkovSource::bsmc(1.0, 5).unwrap(), 1000).unwrap();
        assert!(x.data().windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn source_is_seeded() {
        let a = generate_source(&MarkovSource::bsmc(0.3, 9).unwrap(), 500).unwrap();
        let b = generate_source(&MarkovSource::bsmc(0.3, 9).unwrap(), 500).unwrap();
        let c = generate_source(&MarkovSource::bsmc(0.3, 10).unwrap(), 500).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn identity_channel_keeps_sequence() {
        let x = generate_source(&MarkovSource::bsmc(0.2, 1).unwrap(), 2000).unwrap();
        let pi = ChannelMatrix::identity(Arc::clone(x.alphabet()));
        assert_eq!(corrupt(&x, &pi, 3).unwrap(), x);
    }

    #[test]
    fn stationary_of_asymmetric_chain() {
        let t = Matrix::from_rows(&[vec![0.9, 0.1], vec![0.3, 0.7]]).unwrap();
        let p = stationary_distribution(&t).unwrap();
        assert!((p[0] - 0.75).abs() < 1e-12 && (p[1] - 0.25).abs() < 1e-12);
        let periodic = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let p = stationary_distribution(&periodic).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn noiseless_fb_returns_observation() {
        let x = generate_source(&MarkovSource::bsmc(0.1, 2).unwrap(), 3000).unwrap();
        let spec = HmmSpec::new(
            MarkovSource::bsmc(0.1, 0).unwrap(),
            ChannelMatrix::bsc(0.0).unwrap(),
        )
        .unwrap();
        let out = forward_backward_denoise(&x, &spec, &LossMatrix::hamming(2)).unwrap();
        assert_eq!(out, x);
    }

    #[test]
    fn iid_source_fb_is_identity() {
        let x = generate_source(&MarkovSource::bsmc(0.5, 2).unwrap(), 3000).unwrap();
        let pi = ChannelMatrix::bsc(0.1).unwrap();
        let z = corrupt(&x, &pi, 8).unwrap();
        let spec = HmmSpec::new(MarkovSource::bsmc(0.5, 0).unwrap(), pi).unwrap();
        let out = forward_backward_denoise(&z, &spec, &LossMatrix::hamming(2)).unwrap();
        assert_eq!(out, z);
    }

    #[test]
    fn impossible_observation_is_a_numerical_error() {
        let alphabet = Arc::new(Alphabet::binary());
        let z = Sequence::new(vec![0, 1], alphabet).unwrap();
        let spec = HmmSpec::new(
            MarkovSource::bsmc(0.0, 0).unwrap(),
            ChannelMatrix::bsc(0.0).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            forward_backward_posteriors(&z, &spec),
            Err(Error::Numerical(_))
        ));
    }
}
