//! Reading and writing sequences in the format implied by the file extension:
//! `.pbm` images, `.fa`/`.fasta`/`.fna` reads, anything else plain text.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use ndude_core::io::{
    derasterize, load_fasta, load_pbm, merge_reads, rasterize, read_sequence, save_fasta_with,
    save_pbm_with, split_reads, write_sequence, MergeBoundaries, PbmFormat, Read, ReadSet,
};
use ndude_core::{Alphabet, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Pbm,
    Fasta,
    Text,
}

fn format_of(path: &Path) -> Format {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("pbm") => Format::Pbm,
        Some("fa" | "fasta" | "fna") => Format::Fasta,
        _ => Format::Text,
    }
}

/// How a loaded sequence maps back onto its file.
#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    Text,
    Image { width: usize, height: usize },
    Reads(MergeBoundaries),
}

pub struct Loaded {
    pub seq: Sequence,
    pub layout: Layout,
}

pub fn load(path: &Path, alphabet: &Arc<Alphabet>) -> Result<Loaded> {
    let what = || format!("reading {}", path.display());
    match format_of(path) {
        Format::Pbm => {
            if alphabet.size() != 2 {
                bail!("PBM images need a binary channel, got alphabet {alphabet}");
            }
            let grid = load_pbm(path).with_context(what)?;
            let seq = Sequence::new(rasterize(&grid).into_data(), Arc::clone(alphabet))
                .with_context(what)?;
            Ok(Loaded {
                seq,
                layout: Layout::Image {
                    width: grid.width(),
                    height: grid.height(),
                },
            })
        }
        Format::Fasta => {
            if alphabet.as_ref() != &Alphabet::dna() {
                bail!("FASTA input needs the A,C,G,T alphabet, got {alphabet}");
            }
            let reads = load_fasta(path).with_context(what)?;
            let (seq, bounds) = merge_reads(&reads);
            Ok(Loaded {
                seq,
                layout: Layout::Reads(bounds),
            })
        }
        Format::Text => {
            let file = read_sequence(path, Arc::clone(alphabet)).with_context(what)?;
            Ok(Loaded {
                seq: file.sequence,
                layout: Layout::Text,
            })
        }
    }
}

pub fn save(
    path: &Path,
    seq: &Sequence,
    layout: &Layout,
    provenance: &[(&str, String)],
) -> Result<()> {
    let what = || format!("writing {}", path.display());
    let comments: Vec<String> = provenance
        .iter()
        .map(|(k, v)| format!("{k}: {v}"))
        .collect();
    match format_of(path) {
        Format::Pbm => {
            let Layout::Image { width, height } = layout else {
                bail!(
                    "cannot write {} as PBM: input was not an image",
                    path.display()
                );
            };
            let grid = derasterize(seq, *width, *height)?;
            save_pbm_with(&grid, path, PbmFormat::Raw, &comments).with_context(what)
        }
        Format::Fasta => {
            if seq.alphabet().as_ref() != &Alphabet::dna() {
                bail!(
                    "cannot write {} as FASTA: alphabet is {}",
                    path.display(),
                    seq.alphabet()
                );
            }
            let reads = match layout {
                Layout::Reads(bounds) => split_reads(seq, bounds)?,
                _ => ReadSet {
                    reads: vec![Read {
                        id: "sequence".into(),
                        bases: seq.data().to_vec(),
                    }],
                },
            };
            save_fasta_with(&reads, path, &comments).with_context(what)
        }
        Format::Text => write_sequence(path, seq, provenance).with_context(what),
    }
}
