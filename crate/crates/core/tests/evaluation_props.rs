mod common;

use common::{random_channel, random_loss, rng};
use ndude_core::baselines::{corrupt, generate_source, MarkovSource};
use ndude_core::evaluation::{estimated_loss, sweep, sweep_k, true_loss, KRecord};
use ndude_core::{
    Assignment, ChannelMatrix, EstimatedLossTables, ExperimentReport, LossMatrix, Method, Sequence,
};
use rand::Rng;

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// For a denoiser choice fixed independently of the noise, the estimated loss
/// should match the true loss on average over channel realizations.
#[test]
fn fixed_choice_estimate_is_unbiased_over_noise() {
    let mut r = rng(61);
    for &a in &[2usize, 3] {
        let pi = random_channel(&mut r, a);
        let lam = random_loss(&mut r, a);
        let tables = EstimatedLossTables::build(&pi, &lam).unwrap();
        let n = 4000;
        let x = common::random_sequence(&mut r, a, n);
        let choices: Vec<u32> = (0..n)
            .map(|_| r.gen_range(0..tables.num_denoisers() as u32))
            .collect();
        let assignment = Assignment::new(0, choices);
        let diffs: Vec<f64> = (0..40)
            .map(|t| {
                let z = corrupt(&x, &pi, 1000 + t).unwrap();
                let est = estimated_loss(&z, &assignment, &tables).unwrap();
                let truth =
                    true_loss(&x, &assignment.reconstruct(&z, &tables).unwrap(), &lam).unwrap();
                est - truth
            })
            .collect();
        let (mean, se) = mean_and_se(&diffs);
        assert!(mean.abs() < 3.0 * se, "a={a}: mean {mean} se {se}");
    }
}

#[test]
fn dude_sweep_tracks_true_loss_at_small_k() {
    let x = generate_source(&MarkovSource::bsmc(0.1, 1).unwrap(), 100_000).unwrap();
    let pi = ChannelMatrix::bsc(0.1).unwrap();
    let lam = LossMatrix::hamming(2);
    let z = corrupt(&x, &pi, 2).unwrap();
    let tables = EstimatedLossTables::build(&pi, &lam).unwrap();
    let out = sweep_k(&z, 6, &tables, &lam, &Method::Dude, Some(&x)).unwrap();
    assert_eq!(out.report.records.len(), 6);
    for rec in &out.report.records[..3] {
        let ber = rec.true_ber.unwrap();
        assert!(
            (rec.estimated_loss - ber).abs() < 0.005,
            "k={} est {} true {ber}",
            rec.k,
            rec.estimated_loss
        );
    }
    let best = out.report.best();
    assert_eq!(best.k, out.report.k_star);
    assert_eq!(out.assignment.k(), out.report.k_star);
    assert_eq!(
        out.reconstruction,
        out.assignment.reconstruct(&z, &tables).unwrap()
    );
    assert!(out
        .report
        .records
        .iter()
        .all(|r| r.estimated_loss >= best.estimated_loss));
}

#[test]
fn sweep_without_timing_is_reproducible() {
    let x = generate_source(&MarkovSource::bsmc(0.1, 3).unwrap(), 20_000).unwrap();
    let pi = ChannelMatrix::bsc(0.1).unwrap();
    let lam = LossMatrix::hamming(2);
    let z = corrupt(&x, &pi, 4).unwrap();
    let tables = EstimatedLossTables::build(&pi, &lam).unwrap();
    let run = || {
        let out = sweep(
            &z,
            &[1, 3, 5],
            &tables,
            &lam,
            &Method::Dude,
            Some(&x),
            |_| {},
        )
        .unwrap();
        let mut buf = Vec::new();
        out.report
            .without_timing()
            .write_csv(&mut buf, &[("seed", "4".into())])
            .unwrap();
        buf
    };
    let first = run();
    assert_eq!(first, run());
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("k,estimated_loss,true_ber,wall_time_s"));
}

#[test]
fn k_star_prefers_smaller_k_on_ties() {
    let rec = |k, est| KRecord {
        k,
        estimated_loss: est,
        true_ber: None,
        wall_time_s: None,
    };
    let report = ExperimentReport::new(
        "dude".into(),
        "f".into(),
        vec![rec(4, 0.2), rec(2, 0.1), rec(3, 0.1)],
    )
    .unwrap();
    assert_eq!(report.k_star, 2);
    assert_eq!(
        report.records.iter().map(|r| r.k).collect::<Vec<_>>(),
        vec![2, 3, 4]
    );
}

#[test]
fn true_loss_rejects_length_mismatch() {
    let a = Sequence::new(
        vec![0, 1],
        std::sync::Arc::new(ndude_core::Alphabet::binary()),
    )
    .unwrap();
    let b = a.with_data(vec![0]).unwrap();
    assert!(true_loss(&a, &b, &LossMatrix::hamming(2)).is_err());
}
