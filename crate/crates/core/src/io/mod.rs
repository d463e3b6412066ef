//! File formats: PBM images, FASTA reads, text sequences, model files.

pub mod config;
pub mod fasta;
pub mod pbm;
pub mod seqtext;

pub use config::{LoadedModel, ModelConfig};
pub use fasta::{
    encode_boundaries, encode_fasta, load_fasta, merge_reads, parse_boundaries, parse_fasta,
    save_fasta, save_fasta_with, split_reads, MergeBoundaries, Read, ReadSet,
};
pub use pbm::{
    derasterize, encode_pbm, load_pbm, parse_pbm, rasterize, save_pbm, save_pbm_with, ImageGrid,
    PbmFormat,
};
pub use seqtext::{encode_sequence, parse_sequence, read_sequence, write_sequence, SequenceFile};
