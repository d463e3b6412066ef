use ndude_wasm::demo::{
    corrupt_pixels, dude_curve, dude_pixels, error_rate, loss_tables_json, neural_pixels,
};

fn stripes(n: usize) -> Vec<u8> {
    (0..n).map(|i| ((i / 37) % 2) as u8).collect()
}

#[test]
fn corrupt_flips_about_delta() {
    let clean = stripes(50_000);
    let noisy = corrupt_pixels(&clean, 0.1, 1).unwrap();
    let rate = error_rate(&clean, &noisy);
    assert!((rate - 0.1).abs() < 0.01, "{rate}");
    assert_eq!(noisy, corrupt_pixels(&clean, 0.1, 1).unwrap());
    assert_eq!(corrupt_pixels(&clean, 0.0, 1).unwrap(), clean);
}

#[test]
fn denoisers_reduce_errors() {
    let clean = stripes(20_000);
    let noisy = corrupt_pixels(&clean, 0.1, 2).unwrap();
    let d = dude_pixels(&noisy, 0.1, 3).unwrap();
    assert!(error_rate(&clean, &d.pixels) < 0.05);
    let n = neural_pixels(&noisy, 0.1, 3, 2, 0).unwrap();
    assert!(error_rate(&clean, &n.pixels) < 0.05);
    assert!(n.estimated_loss < 0.1);
    assert_eq!(dude_curve(&noisy, 0.1, 4).unwrap().len(), 4);
}

#[test]
fn rejects_bad_input() {
    assert!(corrupt_pixels(&[0, 2], 0.1, 0).is_err());
    assert!(dude_pixels(&[0, 1], 0.5, 1).is_err());
    assert!(error_rate(&[0], &[0, 1]).is_nan());
}

#[test]
fn tables_json_has_shifted_losses() {
    let v: serde_json::Value = serde_json::from_str(&loss_tables_json(0.1).unwrap()).unwrap();
    assert_eq!(v["loss_new"].as_array().unwrap().len(), 2);
    assert_eq!(v["denoisers"][2], "identity");
}
