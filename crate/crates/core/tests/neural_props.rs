mod common;

use std::collections::HashMap;

use common::{random_channel, random_loss, random_sequence, rng};
use ndarray::Array2;
use ndude_core::neural::{cost, softmax_rows, train, InputBatch, Mlp};
use ndude_core::{Architecture, ChannelMatrix, EstimatedLossTables, LossMatrix, TrainConfig};
use proptest::prelude::*;
use rand::Rng;

fn random_batch(r: &mut impl Rng, rows: usize, k: usize, a: usize) -> InputBatch {
    let mut batch = InputBatch::new(2 * k);
    for _ in 0..rows {
        let symbols: Vec<u8> = (0..2 * k).map(|_| r.gen_range(0..=a as u8)).collect();
        batch.push_context(&symbols, a);
    }
    batch
}

#[test]
fn gradient_matches_central_differences() {
    let mut r = rng(31);
    for &(k, a, hidden) in &[(1usize, 2usize, 8usize), (2, 3, 6), (1, 4, 5)] {
        let s = a.pow(a as u32);
        let mut net: Mlp<f64> = Mlp::new(&[2 * k * a, hidden, s], &mut r);
        // Non-zero biases so no ReLU sits exactly on its kink.
        for p in net.parameters_mut() {
            *p += r.gen_range(-0.05..0.05);
        }
        let batch = random_batch(&mut r, 10, k, a);
        let labels = Array2::from_shape_fn((10, s), |_| r.gen_range(0.0..1.5));
        let mut grads = net.zero_gradients();
        net.gradient(&batch, labels.view(), &mut grads);
        let analytic: Vec<f64> = grads.iter().collect();

        // Five-point stencil keeps rounding noise well below the tolerance
        // even when the objective is large.
        let h = 1e-3;
        let count = net.num_parameters();
        let shifted = |idx: usize, step: f64| {
            let mut moved = net.clone();
            *moved.parameters_mut().nth(idx).unwrap() += step;
            moved.objective(&batch, labels.view())
        };
        for idx in 0..count {
            let numeric = (shifted(idx, -2.0 * h) - 8.0 * shifted(idx, -h) + 8.0 * shifted(idx, h)
                - shifted(idx, 2.0 * h))
                / (12.0 * h);
            let scale = analytic[idx].abs().max(numeric.abs()).max(1e-6);
            let rel = (analytic[idx] - numeric).abs() / scale;
            assert!(
                rel < 1e-4,
                "param {idx}: analytic {} numeric {numeric}",
                analytic[idx]
            );
        }
    }
}

#[test]
fn objective_is_mean_cost() {
    let mut r = rng(32);
    let net: Mlp<f64> = Mlp::new(&[4, 6, 4], &mut r);
    let batch = random_batch(&mut r, 7, 1, 2);
    let labels = Array2::from_shape_fn((7, 4), |_| r.gen_range(0.0..1.0));
    let probs = net.forward(&batch).probabilities();
    let mean: f64 = (0..7)
        .map(|b| {
            cost(
                labels.row(b).as_slice().unwrap(),
                probs.row(b).as_slice().unwrap(),
            )
        })
        .sum::<f64>()
        / 7.0;
    assert!((net.objective(&batch, labels.view()) - mean).abs() < 1e-12);
}

proptest! {
    #[test]
    fn softmax_lies_on_simplex(logits in prop::collection::vec(-500.0f64..500.0, 1..40)) {
        let n = logits.len();
        let p = softmax_rows(&Array2::from_shape_vec((1, n), logits).unwrap());
        prop_assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
        prop_assert!((p.sum() - 1.0).abs() < 1e-12);
    }
}

/// With `k = 0` every position shares the empty context, so the trained
/// network should put its largest probability on the largest entry of the
/// summed pseudo-label vector.
#[test]
fn single_context_training_recovers_summed_label_argmax() {
    let mut r = rng(33);
    let cfg = TrainConfig {
        epochs: 150,
        learning_rate: 0.01,
        ..TrainConfig::default()
    };
    for case in 0..20 {
        let a = 2 + case % 2;
        let pi = random_channel(&mut r, a);
        let tables = EstimatedLossTables::build(&pi, &random_loss(&mut r, a)).unwrap();
        let z = random_sequence(&mut r, a, 300);
        let mut g = vec![0.0; tables.num_denoisers()];
        for &zi in z.data() {
            for (acc, v) in g.iter_mut().zip(tables.pseudo_label(zi)) {
                *acc += v;
            }
        }
        let (model, _) = train::<f64>(
            &z,
            0,
            &tables,
            &Architecture::uniform(2, 20),
            &TrainConfig {
                seed: case as u64,
                ..cfg.clone()
            },
        )
        .unwrap();
        let p = model.probabilities(&ndude_core::Context {
            left: vec![],
            right: vec![],
        });
        let argmax = |v: &[f64]| {
            v.iter()
                .enumerate()
                .fold(0, |b, (i, &x)| if x > v[b] { i } else { b })
        };
        assert_eq!(argmax(&p), argmax(&g), "case {case}: p={p:?} g={g:?}");
        let total: f64 = g.iter().sum();
        for (pi, gi) in p.iter().zip(&g) {
            assert!((pi - gi / total).abs() < 0.02, "case {case}");
        }
    }
}

#[test]
fn training_is_deterministic() {
    let mut r = rng(34);
    let tables =
        EstimatedLossTables::build(&ChannelMatrix::bsc(0.1).unwrap(), &LossMatrix::hamming(2))
            .unwrap();
    let z = random_sequence(&mut r, 2, 3000);
    let cfg = TrainConfig {
        epochs: 3,
        ..TrainConfig::with_seed(9)
    };
    let arch = Architecture::four_layer();
    let (m1, log1) = train::<f32>(&z, 3, &tables, &arch, &cfg).unwrap();
    let (m2, log2) = train::<f32>(&z, 3, &tables, &arch, &cfg).unwrap();
    assert_eq!(m1.network(), m2.network());
    assert_eq!(log1, log2);
    let (m3, _) = train::<f32>(
        &z,
        3,
        &tables,
        &arch,
        &TrainConfig {
            seed: 10,
            ..cfg.clone()
        },
    )
    .unwrap();
    assert_ne!(m1.network(), m3.network());
}

#[test]
fn assignment_depends_only_on_context() {
    let mut r = rng(35);
    let tables =
        EstimatedLossTables::build(&ChannelMatrix::bsc(0.15).unwrap(), &LossMatrix::hamming(2))
            .unwrap();
    let z = random_sequence(&mut r, 2, 2000);
    let k = 2;
    let cfg = TrainConfig {
        epochs: 2,
        ..TrainConfig::default()
    };
    let (model, _) = train::<f32>(&z, k, &tables, &Architecture::four_layer(), &cfg).unwrap();
    let assignment = model.assignment(&z).unwrap();
    assert_eq!(assignment.len(), z.len());
    let mut seen: HashMap<Vec<u8>, u32> = HashMap::new();
    for i in 0..z.len() {
        let c = ndude_core::extract_context(&z, i, k);
        let key = [c.left, c.right].concat();
        let s = assignment.choices()[i];
        assert_eq!(*seen.entry(key).or_insert(s), s, "position {i}");
    }
}
