//! Building fixed-size benchmark corpora from a source text.

use std::fs;
use std::path::Path;

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transform {
    Lowercase,
    StripNewlines,
    #[default]
    None,
}

impl Transform {
    pub fn apply(self, text: &str) -> String {
        match self {
            Transform::Lowercase => text.to_lowercase(),
            Transform::StripNewlines => text.chars().filter(|&c| c != '\n' && c != '\r').collect(),
            Transform::None => text.to_string(),
        }
    }
}

/// Transforms `text` and repeats it to exactly `target` bytes.
///
/// If byte `target` falls inside a multi-byte character the output stops at
/// the preceding character boundary, so it may be up to three bytes short.
pub fn build_corpus(text: &str, target: usize, transform: Transform) -> Result<String, Error> {
    let unit = transform.apply(text);
    if unit.is_empty() && target > 0 {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "corpus source is empty after the transform",
        )));
    }
    let mut out = String::with_capacity(target + unit.len());
    while out.len() < target {
        out.push_str(&unit);
    }
    let mut cut = target;
    while !out.is_char_boundary(cut) {
        cut -= 1;
    }
    out.truncate(cut);
    Ok(out)
}

/// Reads `source`, builds the corpus and writes it to `dest`.
pub fn make_corpus(
    source: &Path,
    dest: &Path,
    target: usize,
    transform: Transform,
) -> Result<usize, Error> {
    let bytes = fs::read(source)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::Decode {
        offset: e.valid_up_to(),
    })?;
    let corpus = build_corpus(text, target, transform)?;
    fs::write(dest, &corpus)?;
    Ok(corpus.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_size() {
        let c = build_corpus("abc", 10, Transform::None).unwrap();
        assert_eq!(c, "abcabcabca");
        assert_eq!(build_corpus("abc", 3, Transform::None).unwrap(), "abc");
    }

    #[test]
    fn transforms() {
        assert_eq!(
            build_corpus("ac\ngt", 4, Transform::StripNewlines).unwrap(),
            "acgt"
        );
        assert_eq!(
            build_corpus("AbC", 6, Transform::Lowercase).unwrap(),
            "abcabc"
        );
    }

    #[test]
    fn backs_off_to_a_char_boundary() {
        // "é" is two bytes
        let c = build_corpus("aé", 5, Transform::None).unwrap();
        assert_eq!(c, "aéa");
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn empty_source() {
        assert!(build_corpus("", 10, Transform::None).is_err());
        assert!(build_corpus("\n", 10, Transform::StripNewlines).is_err());
        assert_eq!(build_corpus("", 0, Transform::None).unwrap(), "");
    }
}
