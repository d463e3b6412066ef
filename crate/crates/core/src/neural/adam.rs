use ndarray::Zip;

use super::mlp::{real, Gradients, Mlp, Real};

/// Adam with bias correction folded into the step size.
#[derive(Debug, Clone)]
pub struct Adam<F> {
    learning_rate: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    step: i32,
    first: Gradients<F>,
    second: Gradients<F>,
}

impl<F: Real> Adam<F> {
    pub fn new(net: &Mlp<F>, learning_rate: f64, beta1: f64, beta2: f64, epsilon: f64) -> Self {
        Self {
            learning_rate,
            beta1,
            beta2,
            epsilon,
            step: 0,
            first: net.zero_gradients(),
            second: net.zero_gradients(),
        }
    }

    pub fn steps(&self) -> i32 {
        self.step
    }

    pub fn update(&mut self, net: &mut Mlp<F>, grads: &Gradients<F>) {
        self.step += 1;
        let t = self.step;
        let lr_t =
            self.learning_rate * (1.0 - self.beta2.powi(t)).sqrt() / (1.0 - self.beta1.powi(t));
        let (b1, b2, eps, lr_t) = (
            real::<F>(self.beta1),
            real::<F>(self.beta2),
            real::<F>(self.epsilon),
            real::<F>(lr_t),
        );
        let (one_b1, one_b2) = (F::one() - b1, F::one() - b2);
        let tiny = F::min_positive_value();
        let (weights, biases) = net.layers_mut();
        for l in 0..weights.len() {
            Zip::from(&mut weights[l])
                .and(&mut self.first.weights[l])
                .and(&mut self.second.weights[l])
                .and(&grads.weights[l])
                .for_each(|p, m, v, &g| {
                    moments(m, v, g, b1, b2, one_b1, one_b2, tiny);
                    *p = *p - lr_t * *m / (v.sqrt() + eps);
                });
            Zip::from(&mut biases[l])
                .and(&mut self.first.biases[l])
                .and(&mut self.second.biases[l])
                .and(&grads.biases[l])
                .for_each(|p, m, v, &g| {
                    moments(m, v, g, b1, b2, one_b1, one_b2, tiny);
                    *p = *p - lr_t * *m / (v.sqrt() + eps);
                });
        }
    }
}

/// Moment updates with subnormals flushed to zero: parameters whose gradient
/// is exactly zero (dead rectifiers) would otherwise decay into the subnormal
/// range, where arithmetic is very slow.
#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn moments<F: Real>(m: &mut F, v: &mut F, g: F, b1: F, b2: F, one_b1: F, one_b2: F, tiny: F) {
    *m = b1 * *m + one_b1 * g;
    *v = b2 * *v + one_b2 * g * g;
    if m.abs() < tiny {
        *m = F::zero();
    }
    if *v < tiny {
        *v = F::zero();
    }
}
