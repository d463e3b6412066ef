//! Plain-text symbol sequences: one character per symbol, `#` lines carry
//! `key: value` metadata, whitespace between symbols is ignored.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Sequence, Symbol};
use crate::error::{Error, Result};

const LINE_WIDTH: usize = 80;

/// A parsed sequence file.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFile {
    pub sequence: Sequence,
    pub metadata: Vec<(String, String)>,
}

impl SequenceFile {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn parse_sequence(text: &str, alphabet: Arc<Alphabet>) -> Result<SequenceFile> {
    if !alphabet.is_single_char() {
        return Err(Error::InvalidAlphabet(
            "text sequences need single-character labels".into(),
        ));
    }
    let lookup: Vec<(char, Symbol)> = alphabet
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.chars().next().unwrap(), i as Symbol))
        .collect();
    let mut data = Vec::new();
    let mut metadata = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if let Some(body) = line.strip_prefix('#') {
            if let Some((k, v)) = body.split_once(':') {
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        for c in line.chars().filter(|c| !c.is_whitespace()) {
            let s = lookup
                .iter()
                .find(|(l, _)| *l == c)
                .map(|(_, s)| *s)
                .ok_or_else(|| Error::UnknownSymbol(format!("{c} (line {})", lineno + 1)))?;
            data.push(s);
        }
    }
    Ok(SequenceFile {
        sequence: Sequence::new(data, alphabet)?,
        metadata,
    })
}

pub fn read_sequence(path: &Path, alphabet: Arc<Alphabet>) -> Result<SequenceFile> {
    parse_sequence(&fs::read_to_string(path)?, alphabet)
}

pub fn encode_sequence(seq: &Sequence, metadata: &[(&str, String)]) -> Result<String> {
    let alphabet = seq.alphabet();
    if !alphabet.is_single_char() {
        return Err(Error::InvalidAlphabet(
            "text sequences need single-character labels".into(),
        ));
    }
    let chars: Vec<char> = alphabet
        .labels()
        .iter()
        .map(|l| l.chars().next().unwrap())
        .collect();
    let mut out = String::with_capacity(seq.len() + seq.len() / LINE_WIDTH + 64);
    for (k, v) in metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    for chunk in seq.data().chunks(LINE_WIDTH) {
        out.extend(chunk.iter().map(|&s| chars[s as usize]));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_sequence(path: &Path, seq: &Sequence, metadata: &[(&str, String)]) -> Result<()> {
    fs::write(path, encode_sequence(seq, metadata)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_metadata_and_wrapped_symbols() {
        let f = parse_sequence(
            "# seed: 7\n# n: 5\n010\n 1 1\n",
            Arc::new(Alphabet::binary()),
        )
        .unwrap();
        assert_eq!(f.sequence.data(), &[0, 1, 0, 1, 1]);
        assert_eq!(f.meta("seed"), Some("7"));
    }

    #[test]
    fn unknown_symbol() {
        assert!(matches!(
            parse_sequence("0102", Arc::new(Alphabet::binary())),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn encode_decode() {
        let s = Sequence::new(
            (0..200).map(|i| (i % 4) as u8).collect(),
            Arc::new(Alphabet::dna()),
        )
        .unwrap();
        let text = encode_sequence(&s, &[("seed", "3".into())]).unwrap();
        let back = parse_sequence(&text, Arc::new(Alphabet::dna())).unwrap();
        assert_eq!(back.sequence, s);
        assert_eq!(back.meta("seed"), Some("3"));
    }
}
