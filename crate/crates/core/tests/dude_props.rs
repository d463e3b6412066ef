mod common;

use std::collections::HashMap;

use common::{random_channel, random_loss, random_sequence, rng};
use ndude_core::alphabet::{context_key, extract_context};
use ndude_core::dude::{collect_counts, dude_assignment, dude_denoise, dude_denoise_original};
use ndude_core::{ChannelMatrix, EstimatedLossTables, LossMatrix};
use rand::Rng;

#[test]
fn both_rule_forms_agree_on_random_instances() {
    let mut r = rng(21);
    for trial in 0..50 {
        let a = if trial % 2 == 0 { 2 } else { 4 };
        let pi = random_channel(&mut r, a);
        let lam = random_loss(&mut r, a);
        let tables = EstimatedLossTables::build(&pi, &lam).unwrap();
        let len = r.gen_range(50..400);
        let k = r.gen_range(0..4);
        let z = random_sequence(&mut r, a, len);
        let est = dude_denoise(&z, k, &tables).unwrap();
        let orig = dude_denoise_original(&z, k, &pi, &lam).unwrap();
        assert_eq!(est.data(), orig.data(), "trial {trial} a={a} k={k}");
    }
}

#[test]
fn both_rule_forms_agree_for_bsc_hamming() {
    let mut r = rng(22);
    for trial in 0..20 {
        let delta = r.gen_range(0.01..0.45);
        let pi = ChannelMatrix::bsc(delta).unwrap();
        let lam = LossMatrix::hamming(2);
        let tables = EstimatedLossTables::build(&pi, &lam).unwrap();
        let z = random_sequence(&mut r, 2, 300);
        let k = 1 + trial % 3;
        assert_eq!(
            dude_denoise(&z, k, &tables).unwrap().data(),
            dude_denoise_original(&z, k, &pi, &lam).unwrap().data()
        );
    }
}

#[test]
fn counts_conserve_interior_positions() {
    let mut r = rng(23);
    for _ in 0..30 {
        let a = r.gen_range(2..5);
        let len = r.gen_range(10..200);
        let k = r.gen_range(0..4);
        let z = random_sequence(&mut r, a, len);
        let counts = collect_counts(&z, k).unwrap();
        assert_eq!(counts.total() as usize, len - 2 * k);
        assert_eq!(counts.n_effective(), len - 2 * k);
        // Brute-force recount.
        let mut brute: HashMap<u128, Vec<u64>> = HashMap::new();
        for i in k..len - k {
            let key = context_key(&extract_context(&z, i, k), a).unwrap();
            brute.entry(key).or_insert_with(|| vec![0; a])[z.data()[i] as usize] += 1;
        }
        assert_eq!(brute.len(), counts.num_contexts());
        for (key, m) in counts.iter() {
            assert_eq!(brute[&key], m);
        }
    }
}

#[test]
fn output_depends_only_on_window() {
    let mut r = rng(24);
    let pi = random_channel(&mut r, 3);
    let tables = EstimatedLossTables::build(&pi, &random_loss(&mut r, 3)).unwrap();
    let z = random_sequence(&mut r, 3, 2000);
    let k = 2;
    let assignment = dude_assignment(&z, k, &tables).unwrap();
    let xhat = assignment.reconstruct(&z, &tables).unwrap();
    let mut seen: HashMap<Vec<u8>, u8> = HashMap::new();
    for i in k..z.len() - k {
        let window = z.data()[i - k..=i + k].to_vec();
        let out = xhat.data()[i];
        assert_eq!(*seen.entry(window).or_insert(out), out);
    }
    // Boundaries pass through.
    for i in (0..k).chain(z.len() - k..z.len()) {
        assert_eq!(xhat.data()[i], z.data()[i]);
    }
}
