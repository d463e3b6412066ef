//! Channel and loss algebra.
//!
//! Single-symbol denoisers `s: Z -> X̂` are indexed little-endian in base
//! `|X̂|` over the canonical order of `Z`: `index = Σ_z s(z)·|X̂|^z`. For the
//! binary alphabet this gives `[always-0, flip, identity, always-1]`. The
//! encoding is shared by pseudo-labels, network outputs, and reports, so it
//! must not change.

use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PIVOT_EPSILON};

/// Default cap on `|X̂|^|Z|` for full denoiser enumeration.
pub const DEFAULT_DENOISER_CAP: usize = 65536;

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Transition matrix `Π(x, z) = Pr(Z = z | X = x)` of a discrete memoryless
/// channel over a single alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    matrix: Matrix,
    alphabet: Arc<Alphabet>,
}

impl ChannelMatrix {
    /// Validates shape and stochasticity. Invertibility is checked where the
    /// inverse is needed ([`ChannelMatrix::inverse`]), so noisy-only channels
    /// such as BSC(0.5) can still drive a simulation.
    pub fn new(alphabet: Arc<Alphabet>, matrix: Matrix) -> Result<Self> {
        let n = alphabet.size();
        if matrix.rows() != matrix.cols() {
            return Err(Error::InvalidMatrix(format!(
                "channel matrix must be square, got {}x{} (non-square channels are not supported)",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "channel is {}x{} but the alphabet has {n} symbols",
                matrix.rows(),
                matrix.cols()
            )));
        }
        check_stochastic(&matrix, "channel")?;
        Ok(Self { matrix, alphabet })
    }

    /// Binary symmetric channel with crossover probability `delta`.
    pub fn bsc(delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidMatrix(format!(
                "crossover {delta} not in [0,1]"
            )));
        }
        let m = Matrix::from_rows(&[vec![1.0 - delta, delta], vec![delta, 1.0 - delta]])?;
        Self::new(Arc::new(Alphabet::binary()), m)
    }

    /// Symmetric channel keeping a symbol with probability `1 - delta` and
    /// otherwise replacing it uniformly with one of the other symbols.
    pub fn symmetric(alphabet: Arc<Alphabet>, delta: f64) -> Result<Self> {
        let n = alphabet.size();
        if n < 2 || !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidMatrix(format!(
                "symmetric channel needs >= 2 symbols and delta in [0,1], got {n} and {delta}"
            )));
        }
        let mut m = Matrix::zeros(n, n);
        for x in 0..n {
            for z in 0..n {
                m[(x, z)] = if x == z {
                    1.0 - delta
                } else {
                    delta / (n - 1) as f64
                };
            }
        }
        Self::new(alphabet, m)
    }

    pub fn identity(alphabet: Arc<Alphabet>) -> Self {
        let n = alphabet.size();
        Self {
            matrix: Matrix::identity(n),
            alphabet,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn prob(&self, x: Symbol, z: Symbol) -> f64 {
        self.matrix[(x as usize, z as usize)]
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.matrix.inverse(PIVOT_EPSILON)
    }
}

/// Loss matrix `Λ(x, x̂)`, entries non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct LossMatrix {
    matrix: Matrix,
}

impl LossMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if let Some(v) = matrix
            .as_slice()
            .iter()
            .find(|v| !(**v >= 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidMatrix(format!(
                "loss entry {v} is not a finite non-negative value"
            )));
        }
        Ok(Self { matrix })
    }

    /// 0/1 loss; the average loss is then the symbol error rate.
    pub fn hamming(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    m[(x, y)] = 1.0;
                }
            }
        }
        Self { matrix: m }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn loss(&self, x: Symbol, xhat: Symbol) -> f64 {
        self.matrix[(x as usize, xhat as usize)]
    }

    pub fn clean_size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn reconstruction_size(&self) -> usize {
        self.matrix.cols()
    }
}

/// A map from noisy symbols to reconstructions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingleSymbolDenoiser {
    mapping: Vec<Symbol>,
    index: usize,
}

impl SingleSymbolDenoiser {
    pub fn from_index(index: usize, noisy_size: usize, recon_size: usize) -> Self {
        let mut rest = index;
        let mapping = (0..noisy_size)
            .map(|_| {
                let s = (rest % recon_size) as Symbol;
                rest /= recon_size;
                s
            })
            .collect();
        Self { mapping, index }
    }

    pub fn from_mapping(mapping: Vec<Symbol>, recon_size: usize) -> Result<Self> {
        if let Some(&bad) = mapping.iter().find(|&&s| s as usize >= recon_size) {
            return Err(Error::SymbolOutOfRange {
                index: bad as usize,
                size: recon_size,
            });
        }
        let index = mapping
            .iter()
            .rev()
            .fold(0usize, |acc, &s| acc * recon_size + s as usize);
        Ok(Self { mapping, index })
    }

    pub fn apply(&self, z: Symbol) -> Symbol {
        self.mapping[z as usize]
    }

    pub fn mapping(&self) -> &[Symbol] {
        &self.mapping
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

/// All `|X̂|^|Z|` single-symbol denoisers in canonical index order.
pub fn enumerate_denoisers(
    noisy_size: usize,
    recon_size: usize,
    cap: usize,
) -> Result<Vec<SingleSymbolDenoiser>> {
    let count = (recon_size as u128)
        .checked_pow(noisy_size as u32)
        .unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::CapExceeded { size: count, cap });
    }
    Ok((0..count as usize)
        .map(|i| SingleSymbolDenoiser::from_index(i, noisy_size, recon_size))
        .collect())
}

/// `ρ(x, s) = Σ_z Π(x,z) Λ(x, s(z))`, the expected loss of `s` on clean `x`.
pub fn build_rho(
    pi: &ChannelMatrix,
    lam: &LossMatrix,
    denoisers: &[SingleSymbolDenoiser],
) -> Result<Matrix> {
    let nx = pi.size();
    if lam.clean_size() != nx {
        return Err(Error::DimensionMismatch(format!(
            "loss has {} rows, channel has {nx}",
            lam.clean_size()
        )));
    }
    let mut rho = Matrix::zeros(nx, denoisers.len());
    for x in 0..nx {
        for (j, s) in denoisers.iter().enumerate() {
            if s.mapping().len() != pi.size() {
                return Err(Error::DimensionMismatch(
                    "denoiser domain does not match channel output alphabet".into(),
                ));
            }
            rho[(x, j)] = (0..nx)
                .map(|z| {
                    pi.prob(x as Symbol, z as Symbol) * lam.loss(x as Symbol, s.apply(z as Symbol))
                })
                .sum();
        }
    }
    Ok(rho)
}

/// Precomputed estimated-loss tables for one `(Π, Λ)` pair.
///
/// `loss = Π⁻¹ρ` is an unbiased estimate of the true loss from the noisy
/// symbol alone; `loss_new = l_max - loss` is its non-negative, sign-flipped
/// shift whose rows serve as pseudo-labels.
#[derive(Debug, Clone)]
pub struct EstimatedLossTables {
    denoisers: Vec<SingleSymbolDenoiser>,
    rho: Matrix,
    loss: Matrix,
    loss_new: Matrix,
    l_max: f64,
    identity_index: Option<usize>,
    fingerprint: String,
}

impl EstimatedLossTables {
    pub fn build(pi: &ChannelMatrix, lam: &LossMatrix) -> Result<Self> {
        Self::build_with_cap(pi, lam, DEFAULT_DENOISER_CAP)
    }

    pub fn build_with_cap(pi: &ChannelMatrix, lam: &LossMatrix, cap: usize) -> Result<Self> {
        let denoisers = enumerate_denoisers(pi.size(), lam.reconstruction_size(), cap)?;
        let rho = build_rho(pi, lam, &denoisers)?;
        let loss = pi.inverse()?.matmul(&rho)?;
        let l_max = loss.max_entry();
        let mut loss_new = Matrix::zeros(loss.rows(), loss.cols());
        for r in 0..loss.rows() {
            for c in 0..loss.cols() {
                loss_new[(r, c)] = l_max - loss[(r, c)];
            }
        }
        let identity_index = (lam.reconstruction_size() >= pi.size()).then(|| {
            let id: Vec<Symbol> = (0..pi.size()).map(|z| z as Symbol).collect();
            SingleSymbolDenoiser::from_mapping(id, lam.reconstruction_size())
                .expect("identity fits")
                .index()
        });
        Ok(Self {
            denoisers,
            rho,
            loss,
            loss_new,
            l_max,
            identity_index,
            fingerprint: fingerprint(pi, lam),
        })
    }

    pub fn denoisers(&self) -> &[SingleSymbolDenoiser] {
        &self.denoisers
    }

    pub fn denoiser(&self, index: usize) -> &SingleSymbolDenoiser {
        &self.denoisers[index]
    }

    pub fn num_denoisers(&self) -> usize {
        self.denoisers.len()
    }

    pub fn noisy_size(&self) -> usize {
        self.loss.rows()
    }

    pub fn rho(&self) -> &Matrix {
        &self.rho
    }

    /// The estimated loss matrix `L`, indexed `(z, s)`.
    pub fn loss(&self) -> &Matrix {
        &self.loss
    }

    pub fn loss_new(&self) -> &Matrix {
        &self.loss_new
    }

    pub fn l_max(&self) -> f64 {
        self.l_max
    }

    /// Row `z` of `L_new`: the pseudo-label for a noisy symbol `z`.
    pub fn pseudo_label(&self, z: Symbol) -> &[f64] {
        self.loss_new.row(z as usize)
    }

    /// Index of the say-what-you-see denoiser, when `X̂ ⊇ Z`.
    pub fn identity_index(&self) -> Option<usize> {
        self.identity_index
    }

    /// Hex digest of the `(Π, Λ)` pair these tables were built from.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

/// `Σ_z Π(x,z) L(z,s)`; equals `ρ(x,s)` because `L` is unbiased.
pub fn expected_estimated_loss(
    x: Symbol,
    s: &SingleSymbolDenoiser,
    tables: &EstimatedLossTables,
    pi: &ChannelMatrix,
) -> f64 {
    (0..pi.size())
        .map(|z| pi.prob(x, z as Symbol) * tables.loss()[(z, s.index())])
        .sum()
}

/// Short digest identifying a `(Π, Λ)` pair.
pub fn fingerprint(pi: &ChannelMatrix, lam: &LossMatrix) -> String {
    let mut h = Sha256::new();
    for label in pi.alphabet().labels() {
        h.update(label.as_bytes());
        h.update([0u8]);
    }
    for m in [pi.matrix(), lam.matrix()] {
        h.update((m.rows() as u64).to_le_bytes());
        h.update((m.cols() as u64).to_le_bytes());
        for v in m.as_slice() {
            h.update(v.to_bits().to_le_bytes());
        }
    }
    h.finalize()[..8]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub(crate) fn check_stochastic(m: &Matrix, what: &str) -> Result<()> {
    for r in 0..m.rows() {
        let row = m.row(r);
        if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidMatrix(format!(
                "{what} row {r} has entry {v} outside [0,1]"
            )));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::InvalidMatrix(format!(
                "{what} row {r} sums to {sum}"
            )));
        }
    }
    Ok(())
}
