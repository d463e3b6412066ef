mod common;

use std::path::Path;

use common::{random_sequence, rng};
use ndude_core::io::{
    derasterize, encode_boundaries, encode_fasta, encode_pbm, load_pbm, merge_reads,
    parse_boundaries, parse_fasta, parse_pbm, rasterize, read_sequence, save_pbm_with, split_reads,
    write_sequence, ImageGrid, ModelConfig, PbmFormat, Read, ReadSet,
};
use ndude_core::neural::{load_checkpoint, save_checkpoint, train};
use ndude_core::{
    Alphabet, Architecture, ChannelMatrix, Error, EstimatedLossTables, LossMatrix, TrainConfig,
};
use proptest::prelude::*;
use rand::Rng;

fn random_grid(r: &mut impl Rng, w: usize, h: usize) -> ImageGrid {
    ImageGrid::new(w, h, (0..w * h).map(|_| r.gen_range(0..2)).collect()).unwrap()
}

#[test]
fn pbm_roundtrip_both_encodings() {
    let mut r = rng(51);
    let dir = tempfile::tempdir().unwrap();
    for &(w, h) in &[(64usize, 64usize), (1, 1), (7, 3), (9, 17)] {
        let grid = random_grid(&mut r, w, h);
        for format in [PbmFormat::Plain, PbmFormat::Raw] {
            let path = dir.path().join("img.pbm");
            save_pbm_with(&grid, &path, format, &["seed 3".to_string()]).unwrap();
            assert_eq!(load_pbm(&path).unwrap(), grid);
            assert_eq!(parse_pbm(&encode_pbm(&grid, format, &[])).unwrap(), grid);
        }
        let seq = rasterize(&grid);
        assert_eq!(seq.len(), w * h);
        assert_eq!(derasterize(&seq, w, h).unwrap(), grid);
    }
}

#[test]
fn raster_order_is_row_major() {
    let grid = ImageGrid::new(3, 2, vec![0, 1, 1, 0, 0, 1]).unwrap();
    assert_eq!(rasterize(&grid).data(), &[0, 1, 1, 0, 0, 1]);
    assert_eq!(grid.get(1, 2), 1);
}

#[test]
fn truncated_raw_pbm_is_rejected() {
    let grid = ImageGrid::new(16, 4, vec![1; 64]).unwrap();
    let mut bytes = encode_pbm(&grid, PbmFormat::Raw, &[]);
    bytes.truncate(bytes.len() - 3);
    assert!(matches!(
        parse_pbm(&bytes),
        Err(Error::TruncatedPayload { .. })
    ));
}

proptest! {
    #[test]
    fn fasta_merge_split_roundtrip(lengths in prop::collection::vec(0usize..150, 1..8), seed in any::<u64>()) {
        let mut r = rng(seed);
        let reads = ReadSet {
            reads: lengths
                .iter()
                .enumerate()
                .map(|(i, &len)| Read { id: format!("read{i} sample"), bases: (0..len).map(|_| r.gen_range(0..4)).collect() })
                .collect(),
        };
        let text = encode_fasta(&reads, &["fingerprint abc".to_string()]);
        let parsed = parse_fasta(&text, Path::new("mem.fa")).unwrap();
        prop_assert_eq!(&parsed, &reads);
        let (merged, bounds) = merge_reads(&reads);
        prop_assert_eq!(merged.len(), lengths.iter().sum::<usize>());
        let bounds2 = parse_boundaries(&encode_boundaries(&bounds)).unwrap();
        prop_assert_eq!(&bounds2, &bounds);
        prop_assert_eq!(split_reads(&merged, &bounds2).unwrap(), reads);
    }
}

#[test]
fn fasta_rejects_unknown_bases_with_location() {
    let err = parse_fasta(">r1\nACGT\n>r2\nACNT\n", Path::new("x.fa")).unwrap_err();
    match err {
        Error::InvalidBase {
            record,
            offset,
            base,
        } => {
            assert_eq!((record.as_str(), offset, base), ("r2", 2, 'N'));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn text_sequence_roundtrip_keeps_metadata() {
    let mut r = rng(52);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.txt");
    let z = random_sequence(&mut r, 4, 1001);
    write_sequence(
        &path,
        &z,
        &[("seed", "17".into()), ("fingerprint", "00ff".into())],
    )
    .unwrap();
    let back = read_sequence(&path, z.alphabet().clone()).unwrap();
    assert_eq!(back.sequence, z);
    assert_eq!(back.meta("seed"), Some("17"));
    assert_eq!(back.meta("fingerprint"), Some("00ff"));
}

#[test]
fn model_config_builds_channel_and_loss() {
    let cfg = ModelConfig::parse(r#"{"alphabet":["0","1"],"channel":[0.9,0.1,0.2,0.8]}"#).unwrap();
    let model = cfg.build().unwrap();
    assert_eq!(model.alphabet.as_ref(), &Alphabet::binary());
    assert_eq!(model.channel.prob(1, 0), 0.2);
    assert_eq!(model.loss, LossMatrix::hamming(2));
    assert!(
        ModelConfig::parse(r#"{"alphabet":["0","1"],"channel":[0.9,0.1,0.2]}"#)
            .unwrap()
            .build()
            .is_err()
    );
    assert!(
        ModelConfig::parse(r#"{"alphabet":["0","1"],"channel":[0.9,0.2,0.2,0.8]}"#)
            .unwrap()
            .build()
            .is_err()
    );
}

#[test]
fn checkpoint_roundtrip_preserves_predictions() {
    let mut r = rng(53);
    let tables =
        EstimatedLossTables::build(&ChannelMatrix::bsc(0.1).unwrap(), &LossMatrix::hamming(2))
            .unwrap();
    let z = random_sequence(&mut r, 2, 2000);
    let cfg = TrainConfig {
        epochs: 1,
        ..TrainConfig::default()
    };
    let (model, _) = train::<f32>(&z, 2, &tables, &Architecture::four_layer(), &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    save_checkpoint(&model, &path).unwrap();
    let loaded = load_checkpoint::<f32>(&path).unwrap();
    assert_eq!(loaded.network(), model.network());
    assert_eq!(loaded.fingerprint(), tables.fingerprint());
    assert_eq!(
        loaded.assignment(&z).unwrap(),
        model.assignment(&z).unwrap()
    );
}
