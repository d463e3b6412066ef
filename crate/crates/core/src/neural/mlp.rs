//! Feed-forward softmax network over one-hot contexts, with exact
//! back-propagation of the generalized cross-entropy.

use std::fmt::{Debug, Display};

use ndarray::{Array1, Array2, ArrayView2, Axis, LinalgScalar, ScalarOperand, Zip};
use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::distributions::{Distribution, Uniform};
use rand::Rng;

use crate::alphabet::Symbol;

/// Floating-point type the network can be instantiated with.
pub trait Real:
    Float
    + LinalgScalar
    + ScalarOperand
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + std::iter::Sum
    + std::ops::AddAssign
    + std::ops::SubAssign
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn real<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("representable")
}

/// Marker for an inactive (padded) input slot.
pub const INACTIVE: u32 = u32::MAX;

/// A minibatch of one-hot encoded contexts stored sparsely: each row has
/// `slots` entries, each either the active input column or [`INACTIVE`].
#[derive(Debug, Clone, Default)]
pub struct InputBatch {
    slots: usize,
    active: Vec<u32>,
}

impl InputBatch {
    pub fn new(slots: usize) -> Self {
        Self {
            slots,
            active: Vec::new(),
        }
    }

    pub fn clear(&mut self) {
        self.active.clear();
    }

    pub fn rows(&self) -> usize {
        if self.slots == 0 {
            // With no context there is no input; rows are tracked separately.
            self.active.len()
        } else {
            self.active.len() / self.slots
        }
    }

    /// Appends the context of position `i` of `data`, half-width `k`. Slot `j`
    /// with symbol `a` activates column `j·alphabet_size + a`.
    pub fn push_position(&mut self, data: &[Symbol], alphabet_size: usize, k: usize, i: usize) {
        debug_assert_eq!(self.slots, 2 * k);
        if k == 0 {
            self.active.push(INACTIVE);
            return;
        }
        let n = data.len();
        let mut slot = 0usize;
        for j in (1..=k).rev() {
            self.active.push(if i >= j {
                (slot * alphabet_size + data[i - j] as usize) as u32
            } else {
                INACTIVE
            });
            slot += 1;
        }
        for j in 1..=k {
            self.active.push(if i + j < n {
                (slot * alphabet_size + data[i + j] as usize) as u32
            } else {
                INACTIVE
            });
            slot += 1;
        }
    }

    /// Appends a context given as slot symbols; symbols `>= alphabet_size`
    /// are padding.
    pub fn push_context(&mut self, symbols: &[Symbol], alphabet_size: usize) {
        debug_assert_eq!(symbols.len(), self.slots);
        if self.slots == 0 {
            self.active.push(INACTIVE);
            return;
        }
        for (slot, &s) in symbols.iter().enumerate() {
            self.active.push(if (s as usize) < alphabet_size {
                (slot * alphabet_size + s as usize) as u32
            } else {
                INACTIVE
            });
        }
    }

    fn row(&self, r: usize) -> &[u32] {
        let w = self.slots.max(1);
        &self.active[r * w..(r + 1) * w]
    }
}

/// Parameters of a fully connected network. Layer `l` maps `dims[l]` to
/// `dims[l+1]`; hidden layers use rectifiers and the last layer a softmax.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp<F> {
    dims: Vec<usize>,
    // Stored input-major (`dims[l] x dims[l+1]`) so a batch forward is `A·W`.
    weights: Vec<Array2<F>>,
    biases: Vec<Array1<F>>,
}

/// Gradients with the same layout as [`Mlp`] parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<F> {
    pub weights: Vec<Array2<F>>,
    pub biases: Vec<Array1<F>>,
}

impl<F: Real> Gradients<F> {
    /// Weights then biases, layer by layer; same order as
    /// [`Mlp::parameters_mut`].
    pub fn iter(&self) -> impl Iterator<Item = F> + '_ {
        self.weights
            .iter()
            .flat_map(|w| w.iter().copied())
            .chain(self.biases.iter().flat_map(|b| b.iter().copied()))
    }
}

/// Activations kept from a forward pass for back-propagation.
pub struct ForwardPass<F> {
    hidden: Vec<Array2<F>>,
    logits: Array2<F>,
}

impl<F: Real> ForwardPass<F> {
    pub fn logits(&self) -> &Array2<F> {
        &self.logits
    }

    pub fn probabilities(&self) -> Array2<F> {
        softmax_rows(&self.logits)
    }
}

impl<F: Real> Mlp<F> {
    /// Uniform initialization in `±1/sqrt(fan_in)`, zero biases.
    pub fn new<R: Rng>(dims: &[usize], rng: &mut R) -> Self {
        assert!(dims.len() >= 2, "need at least input and output dimensions");
        let mut weights = Vec::with_capacity(dims.len() - 1);
        let mut biases = Vec::with_capacity(dims.len() - 1);
        for w in dims.windows(2) {
            let bound = 1.0 / (w[0].max(1) as f64).sqrt();
            let dist = Uniform::new_inclusive(-bound, bound);
            weights.push(Array2::from_shape_fn((w[0], w[1]), |_| {
                real(dist.sample(rng))
            }));
            biases.push(Array1::zeros(w[1]));
        }
        Self {
            dims: dims.to_vec(),
            weights,
            biases,
        }
    }

    pub fn from_parts(weights: Vec<Array2<F>>, biases: Vec<Array1<F>>) -> Option<Self> {
        if weights.is_empty() || weights.len() != biases.len() {
            return None;
        }
        let mut dims = vec![weights[0].nrows()];
        for (w, b) in weights.iter().zip(&biases) {
            if w.nrows() != *dims.last().unwrap() || w.ncols() != b.len() {
                return None;
            }
            dims.push(w.ncols());
        }
        Some(Self {
            dims,
            weights,
            biases,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn weights(&self) -> &[Array2<F>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Array1<F>] {
        &self.biases
    }

    pub fn num_parameters(&self) -> usize {
        self.weights.iter().map(Array2::len).sum::<usize>()
            + self.biases.iter().map(Array1::len).sum::<usize>()
    }

    pub fn parameters_mut(&mut self) -> impl Iterator<Item = &mut F> + '_ {
        self.weights
            .iter_mut()
            .flat_map(|w| w.iter_mut())
            .chain(self.biases.iter_mut().flat_map(|b| b.iter_mut()))
    }

    pub(crate) fn layers_mut(&mut self) -> (&mut [Array2<F>], &mut [Array1<F>]) {
        (&mut self.weights, &mut self.biases)
    }

    pub fn zero_gradients(&self) -> Gradients<F> {
        Gradients {
            weights: self
                .weights
                .iter()
                .map(|w| Array2::zeros(w.raw_dim()))
                .collect(),
            biases: self
                .biases
                .iter()
                .map(|b| Array1::zeros(b.raw_dim()))
                .collect(),
        }
    }

    pub fn forward(&self, x: &InputBatch) -> ForwardPass<F> {
        let rows = x.rows();
        let last = self.weights.len() - 1;
        let mut a = self.first_layer(x, rows);
        let mut hidden = Vec::with_capacity(last);
        for l in 1..=last {
            relu_inplace(&mut a);
            let mut next = a.dot(&self.weights[l]);
            next += &self.biases[l];
            hidden.push(a);
            a = next;
        }
        ForwardPass { hidden, logits: a }
    }

    /// Forward pass on dense inputs (one row per sample).
    pub fn forward_dense(&self, x: ArrayView2<F>) -> Array2<F> {
        let mut a = x.dot(&self.weights[0]);
        a += &self.biases[0];
        for l in 1..self.weights.len() {
            relu_inplace(&mut a);
            let mut next = a.dot(&self.weights[l]);
            next += &self.biases[l];
            a = next;
        }
        softmax_rows(&a)
    }

    fn first_layer(&self, x: &InputBatch, rows: usize) -> Array2<F> {
        let width = self.dims[1];
        let w0 = self.weights[0].as_slice().expect("standard layout");
        let bias = self.biases[0].as_slice().expect("standard layout");
        let mut a = Array2::zeros((rows, width));
        let out = a.as_slice_mut().expect("standard layout");
        for (r, out) in out.chunks_exact_mut(width).enumerate() {
            out.copy_from_slice(bias);
            for &col in x.row(r) {
                if col != INACTIVE {
                    let w = &w0[col as usize * width..(col as usize + 1) * width];
                    for (o, &v) in out.iter_mut().zip(w) {
                        *o += v;
                    }
                }
            }
        }
        a
    }

    /// Mean generalized cross-entropy `(1/B) Σ_b C(g_b, p_b)` over the batch
    /// and its exact gradient. `labels` is `B x |S|` with non-negative rows.
    pub fn gradient(&self, x: &InputBatch, labels: ArrayView2<F>, grads: &mut Gradients<F>) -> F {
        let rows = x.rows();
        let pass = self.forward(x);
        let inv_b = F::one() / real::<F>(rows.max(1) as f64);

        // Output layer: d C / d logits = ‖g‖₁ p - g.
        let mut objective = F::zero();
        let mut delta = pass.logits;
        for (mut row, g) in delta.axis_iter_mut(Axis(0)).zip(labels.axis_iter(Axis(0))) {
            let max = row.iter().copied().fold(F::neg_infinity(), F::max);
            let sum = row.iter().map(|&v| (v - max).exp()).sum::<F>();
            let log_sum = sum.ln();
            let mut g_total = F::zero();
            for (p, &gi) in row.iter_mut().zip(g.iter()) {
                let log_p = *p - max - log_sum;
                objective = objective - gi * log_p;
                *p = log_p.exp();
                g_total = g_total + gi;
            }
            for (p, &gi) in row.iter_mut().zip(g.iter()) {
                *p = (g_total * *p - gi) * inv_b;
            }
        }

        let last = self.weights.len() - 1;
        for l in (1..=last).rev() {
            let input = &pass.hidden[l - 1];
            grads.weights[l] = input.t().dot(&delta);
            grads.biases[l] = delta.sum_axis(Axis(0));
            let mut back = delta.dot(&self.weights[l].t());
            Zip::from(&mut back).and(input).for_each(|d, &a| {
                if a <= F::zero() {
                    *d = F::zero();
                }
            });
            delta = back;
        }
        grads.weights[0].fill(F::zero());
        let width = self.dims[1];
        let gw0 = grads.weights[0].as_slice_mut().expect("standard layout");
        let delta_rows = delta.as_slice().expect("standard layout");
        for (r, d) in delta_rows.chunks_exact(width).enumerate() {
            for &col in x.row(r) {
                if col != INACTIVE {
                    let g = &mut gw0[col as usize * width..(col as usize + 1) * width];
                    for (o, &v) in g.iter_mut().zip(d) {
                        *o += v;
                    }
                }
            }
        }
        grads.biases[0] = delta.sum_axis(Axis(0));
        objective * inv_b
    }

    /// Mean objective without gradients.
    pub fn objective(&self, x: &InputBatch, labels: ArrayView2<F>) -> F {
        let logits = self.forward(x).logits;
        let rows = logits.nrows().max(1);
        let mut total = F::zero();
        for (row, g) in logits.axis_iter(Axis(0)).zip(labels.axis_iter(Axis(0))) {
            let max = row.iter().copied().fold(F::neg_infinity(), F::max);
            let log_sum = row.iter().map(|&v| (v - max).exp()).sum::<F>().ln();
            for (&v, &gi) in row.iter().zip(g.iter()) {
                total = total - gi * (v - max - log_sum);
            }
        }
        total / real(rows as f64)
    }
}

fn relu_inplace<F: Real>(a: &mut Array2<F>) {
    a.mapv_inplace(|v| if v > F::zero() { v } else { F::zero() });
}

/// Row-wise softmax with max subtraction.
pub fn softmax_rows<F: Real>(logits: &Array2<F>) -> Array2<F> {
    let mut p = logits.clone();
    for mut row in p.axis_iter_mut(Axis(0)) {
        let max = row.iter().copied().fold(F::neg_infinity(), F::max);
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
    p
}

/// Index of the first maximum of each row.
pub fn argmax_rows<F: Real>(a: &Array2<F>) -> Vec<usize> {
    a.axis_iter(Axis(0))
        .map(|row| {
            let mut best = 0;
            for (j, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn sparse_and_dense_forward_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let net: Mlp<f64> = Mlp::new(&[6, 5, 4], &mut rng);
        let mut batch = InputBatch::new(3);
        batch.push_context(&[1, 2, 0], 2);
        let dense = array![[0.0, 1.0, 0.0, 0.0, 1.0, 0.0]];
        let sparse = net.forward(&batch).probabilities();
        let dense = net.forward_dense(dense.view());
        for (a, b) in sparse.iter().zip(dense.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_labels_give_zero_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let net: Mlp<f64> = Mlp::new(&[4, 3, 4], &mut rng);
        let mut batch = InputBatch::new(2);
        batch.push_context(&[0, 1], 2);
        batch.push_context(&[1, 2], 2);
        let labels = Array2::<f64>::zeros((2, 4));
        let mut g = net.zero_gradients();
        let obj = net.gradient(&batch, labels.view(), &mut g);
        assert_eq!(obj, 0.0);
        assert!(g.iter().all(|v| v == 0.0));
    }

    #[test]
    fn stationary_when_softmax_matches_label() {
        // Linear softmax with zero weights and biases = log g: p ∝ g.
        let g = [2.0, 1.0, 0.5, 0.5];
        let w = Array2::<f64>::zeros((2, 4));
        let b = Array1::from_iter(g.iter().map(|v: &f64| v.ln()));
        let net = Mlp::from_parts(vec![w], vec![b]).unwrap();
        let mut batch = InputBatch::new(1);
        batch.push_context(&[1], 2);
        let labels = Array2::from_shape_vec((1, 4), g.to_vec()).unwrap();
        let mut grads = net.zero_gradients();
        net.gradient(&batch, labels.view(), &mut grads);
        assert!(grads.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn argmax_breaks_ties_low() {
        let a = array![[0.25, 0.25, 0.25, 0.25], [0.1, 0.4, 0.4, 0.1]];
        assert_eq!(argmax_rows(&a), vec![0, 1]);
    }
}
