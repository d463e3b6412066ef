#![allow(dead_code)]

use std::sync::Arc;

use ndude_core::{Alphabet, ChannelMatrix, LossMatrix, Matrix, Sequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alphabet(n: usize) -> Arc<Alphabet> {
    match n {
        2 => Arc::new(Alphabet::binary()),
        4 => Arc::new(Alphabet::dna()),
        _ => Arc::new(Alphabet::new((0..n).map(|i| format!("s{i}"))).unwrap()),
    }
}

/// Row-stochastic with a heavy diagonal, well away from singular.
pub fn random_channel(rng: &mut ChaCha8Rng, n: usize) -> ChannelMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            let mut row: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            row[x] += n as f64;
            let s: f64 = row.iter().sum();
            row.into_iter().map(|v| v / s).collect()
        })
        .collect();
    ChannelMatrix::new(alphabet(n), Matrix::from_rows(&rows).unwrap()).unwrap()
}

pub fn random_loss(rng: &mut ChaCha8Rng, n: usize) -> LossMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0.0..2.0)).collect())
        .collect();
    LossMatrix::new(Matrix::from_rows(&rows).unwrap()).unwrap()
}

pub fn random_sequence(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Sequence {
    Sequence::new(
        (0..len).map(|_| rng.gen_range(0..n as u8)).collect(),
        alphabet(n),
    )
    .unwrap()
}
