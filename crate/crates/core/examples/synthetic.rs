//! Binary Markov source through a BSC: FB, DUDE, and Neural DUDE at chosen k.
//!
//! cargo run --release -p ndude-core --example synthetic -- [n] [k...]

use std::time::Instant;

use ndude_core::baselines::{
    corrupt, forward_backward_denoise, generate_source, HmmSpec, MarkovSource,
};
use ndude_core::dude::dude_denoise;
use ndude_core::evaluation::true_loss;
use ndude_core::neural::train;
use ndude_core::{Architecture, ChannelMatrix, EstimatedLossTables, LossMatrix, TrainConfig};

fn main() -> ndude_core::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let n = args.first().copied().unwrap_or(1_000_000);
    let ks = if args.len() > 1 {
        args[1..].to_vec()
    } else {
        vec![5]
    };
    let delta = 0.1;

    let src = MarkovSource::bsmc(0.1, 1)?;
    let pi = ChannelMatrix::bsc(delta)?;
    let lam = LossMatrix::hamming(2);
    let x = generate_source(&src, n)?;
    let z = corrupt(&x, &pi, 2)?;
    let tables = EstimatedLossTables::build(&pi, &lam)?;

    let fb = forward_backward_denoise(&z, &HmmSpec::new(src, pi.clone())?, &lam)?;
    println!("noisy BER/δ {:.4}", true_loss(&x, &z, &lam)? / delta);
    println!("FB    BER/δ {:.4}", true_loss(&x, &fb, &lam)? / delta);
    for k in ks {
        let d = dude_denoise(&z, k, &tables)?;
        println!(
            "k={k:2} DUDE  BER/δ {:.4}",
            true_loss(&x, &d, &lam)? / delta
        );
        let t = Instant::now();
        let (model, log) = train::<f32>(
            &z,
            k,
            &tables,
            &Architecture::four_layer(),
            &TrainConfig::default(),
        )?;
        let a = model.assignment(&z)?;
        let xhat = a.reconstruct(&z, &tables)?;
        println!(
            "k={k:2} NDUDE BER/δ {:.4}  est/δ {:.4}  ({:.1}s) objective {:?}",
            true_loss(&x, &xhat, &lam)? / delta,
            a.estimated_loss(&z, &tables)? / delta,
            t.elapsed().as_secs_f64(),
            log.epoch_objective
        );
    }
    Ok(())
}
