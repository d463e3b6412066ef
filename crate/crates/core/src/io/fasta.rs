//! FASTA reads over the DNA alphabet and merging into one sequence.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Sequence, Symbol};
use crate::error::{Error, Result};

const LINE_WIDTH: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Read {
    pub id: String,
    /// Symbol indices into [`Alphabet::dna`].
    pub bases: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReadSet {
    pub reads: Vec<Read>,
}

/// Where each read ends in a merged sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeBoundaries {
    pub ids: Vec<String>,
    /// Cumulative end offsets, one per read.
    pub ends: Vec<usize>,
}

fn base_index(b: char) -> Option<Symbol> {
    match b.to_ascii_uppercase() {
        'A' => Some(0),
        'C' => Some(1),
        'G' => Some(2),
        'T' => Some(3),
        _ => None,
    }
}

pub fn load_fasta(path: &Path) -> Result<ReadSet> {
    let text = fs::read_to_string(path)?;
    parse_fasta(&text, path)
}

/// Parses FASTA text; `origin` is only used in error messages. Lines starting
/// with `;` are comments. Lowercase bases are accepted.
pub fn parse_fasta(text: &str, origin: &Path) -> Result<ReadSet> {
    let mut reads: Vec<Read> = Vec::new();
    for line in text.lines() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            reads.push(Read {
                id: header.trim().to_string(),
                bases: Vec::new(),
            });
            continue;
        }
        let read = reads
            .last_mut()
            .ok_or_else(|| Error::Parse("sequence data before the first '>' header".into()))?;
        for c in line.chars().filter(|c| !c.is_whitespace()) {
            let b = base_index(c).ok_or_else(|| Error::InvalidBase {
                record: read.id.clone(),
                offset: read.bases.len(),
                base: c,
            })?;
            read.bases.push(b);
        }
    }
    if reads.is_empty() {
        return Err(Error::EmptyFile(origin.to_path_buf()));
    }
    Ok(ReadSet { reads })
}

pub fn encode_fasta(rs: &ReadSet, comments: &[String]) -> String {
    let labels = Alphabet::dna();
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            out.push_str(&format!("; {line}\n"));
        }
    }
    for r in &rs.reads {
        out.push('>');
        out.push_str(&r.id);
        out.push('\n');
        for chunk in r.bases.chunks(LINE_WIDTH) {
            out.extend(
                chunk
                    .iter()
                    .map(|&b| labels.label(b).expect("DNA index").chars().next().unwrap()),
            );
            out.push('\n');
        }
    }
    out
}

pub fn save_fasta(rs: &ReadSet, path: &Path) -> Result<()> {
    save_fasta_with(rs, path, &[])
}

pub fn save_fasta_with(rs: &ReadSet, path: &Path, comments: &[String]) -> Result<()> {
    fs::write(path, encode_fasta(rs, comments))?;
    Ok(())
}

/// Concatenates all reads in order.
pub fn merge_reads(rs: &ReadSet) -> (Sequence, MergeBoundaries) {
    let mut data = Vec::with_capacity(rs.reads.iter().map(|r| r.bases.len()).sum());
    let mut ends = Vec::with_capacity(rs.reads.len());
    for r in &rs.reads {
        data.extend_from_slice(&r.bases);
        ends.push(data.len());
    }
    let ids = rs.reads.iter().map(|r| r.id.clone()).collect();
    let seq = Sequence::new(data, Arc::new(Alphabet::dna())).expect("bases are DNA indices");
    (seq, MergeBoundaries { ids, ends })
}

/// Inverse of [`merge_reads`].
pub fn split_reads(seq: &Sequence, boundaries: &MergeBoundaries) -> Result<ReadSet> {
    if boundaries.ids.len() != boundaries.ends.len() {
        return Err(Error::DimensionMismatch(
            "one end offset per read id".into(),
        ));
    }
    if boundaries.ends.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Parse(
            "read boundaries must be non-decreasing".into(),
        ));
    }
    let total = boundaries.ends.last().copied().unwrap_or(0);
    if total != seq.len() {
        return Err(Error::LengthMismatch {
            left: seq.len(),
            right: total,
        });
    }
    let mut start = 0;
    let reads = boundaries
        .ids
        .iter()
        .zip(&boundaries.ends)
        .map(|(id, &end)| {
            let r = Read {
                id: id.clone(),
                bases: seq.data()[start..end].to_vec(),
            };
            start = end;
            r
        })
        .collect();
    Ok(ReadSet { reads })
}

/// Boundaries serialized as `id<TAB>end` lines.
pub fn encode_boundaries(b: &MergeBoundaries) -> String {
    b.ids
        .iter()
        .zip(&b.ends)
        .map(|(id, end)| format!("{id}\t{end}\n"))
        .collect()
}

pub fn parse_boundaries(text: &str) -> Result<MergeBoundaries> {
    let mut ids = Vec::new();
    let mut ends = Vec::new();
    for line in text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
    {
        let (id, end) = line
            .rsplit_once('\t')
            .ok_or_else(|| Error::Parse(format!("bad boundary line {line:?}")))?;
        ids.push(id.to_string());
        ends.push(
            end.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad offset in {line:?}")))?,
        );
    }
    Ok(MergeBoundaries { ids, ends })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ReadSet> {
        parse_fasta(text, Path::new("<test>"))
    }

    #[test]
    fn merge_two_reads() {
        let rs = parse(">r1\nACGT\n>r2\nGG\n").unwrap();
        let (seq, b) = merge_reads(&rs);
        assert_eq!(seq.len(), 6);
        assert_eq!(b.ends, vec![4, 6]);
        assert_eq!(split_reads(&seq, &b).unwrap(), rs);
    }

    #[test]
    fn wrapped_and_lowercase() {
        let rs = parse("; comment\n>read one\nAC\ngt\n\n>r2\nT\n").unwrap();
        assert_eq!(rs.reads[0].id, "read one");
        assert_eq!(rs.reads[0].bases, vec![0, 1, 2, 3]);
        assert_eq!(rs.reads[1].bases, vec![3]);
    }

    #[test]
    fn n_is_rejected_with_position() {
        match parse(">ok\nAC\n>bad\nACG\nTNA\n") {
            Err(Error::InvalidBase {
                record,
                offset,
                base,
            }) => {
                assert_eq!(record, "bad");
                assert_eq!(offset, 4);
                assert_eq!(base, 'N');
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(parse(""), Err(Error::EmptyFile(_))));
        assert!(matches!(
            parse("; only a comment\n"),
            Err(Error::EmptyFile(_))
        ));
        assert!(matches!(parse("ACGT\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn boundaries_roundtrip() {
        let b = MergeBoundaries {
            ids: vec!["a b".into(), "c".into()],
            ends: vec![3, 10],
        };
        assert_eq!(parse_boundaries(&encode_boundaries(&b)).unwrap(), b);
    }
}
