//! Text ingestion: tokenization into ordered word occurrences with
//! normalized positions, and segmentation into fixed-word-length samples.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A text reduced to its ordered word occurrences.
///
/// The i-th occurrence carries the normalized position `i / n`, so every
/// position lies in `[0, 1)` regardless of text length.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenSequence {
    tokens: Vec<String>,
    positions: Vec<f64>,
}

impl TokenSequence {
    fn from_tokens(tokens: Vec<String>) -> Self {
        debug_assert!(!tokens.is_empty());
        let n = tokens.len() as f64;
        let positions = (0..tokens.len()).map(|i| i as f64 / n).collect();
        TokenSequence { tokens, positions }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Normalized occurrence positions, `positions()[i] == i / len()`.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Word count `n`. Always at least 1.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits a raw text into lowercase word occurrences.
///
/// A word is a maximal run of alphabetic characters plus embedded
/// apostrophes ("don't" is one word); digits, punctuation and hyphens
/// separate words. Typographic apostrophes are normalized to `'`.
pub fn tokenize(text: &str) -> Result<TokenSequence> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_alphabetic() {
            current.extend(c.to_lowercase());
        } else if is_apostrophe(c)
            && !current.is_empty()
            && chars.peek().is_some_and(|next| next.is_alphabetic())
        {
            current.push('\'');
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    if tokens.is_empty() {
        return Err(Error::EmptyText);
    }
    Ok(TokenSequence::from_tokens(tokens))
}

/// How [`segment`] cuts a sequence into samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentMode {
    /// The first `word_length` tokens only (the whole text if shorter).
    Front,
    /// Consecutive non-overlapping pieces of exactly `word_length` tokens,
    /// trailing remainder dropped; the whole text if shorter.
    Chunks,
}

/// Cuts `seq` into samples of `word_length` tokens, re-normalizing each
/// sample's positions over its own length.
pub fn segment(seq: &TokenSequence, word_length: usize, mode: SegmentMode) -> Vec<TokenSequence> {
    assert!(word_length >= 1, "word_length must be at least 1");
    let n = seq.len();
    match mode {
        SegmentMode::Front => {
            let take = word_length.min(n);
            vec![TokenSequence::from_tokens(seq.tokens[..take].to_vec())]
        }
        SegmentMode::Chunks => {
            if n < word_length {
                return vec![TokenSequence::from_tokens(seq.tokens.clone())];
            }
            seq.tokens
                .chunks_exact(word_length)
                .map(|chunk| TokenSequence::from_tokens(chunk.to_vec()))
                .collect()
        }
    }
}

/// A raw text with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub author_label: Option<String>,
    pub source_id: String,
    pub text: String,
}

impl Document {
    pub fn new(
        author_label: Option<impl Into<String>>,
        source_id: impl Into<String>,
        text: impl Into<String>,
    ) -> Self {
        Document {
            author_label: author_label.map(Into::into),
            source_id: source_id.into(),
            text: text.into(),
        }
    }
}

/// A file that could not be ingested; the load continues past it.
#[derive(Debug, Clone)]
pub struct LoadIssue {
    pub path: PathBuf,
    pub message: String,
}

/// Outcome of [`load_corpus`]: documents in deterministic order plus
/// per-file issues.
#[derive(Debug, Clone)]
pub struct CorpusLoad {
    pub documents: Vec<Document>,
    pub issues: Vec<LoadIssue>,
}

/// Loads a corpus laid out as `<root>/<author_label>/<doc>`, one document
/// per UTF-8 text file.
///
/// Authors and files are visited in lexicographic order, so the returned
/// document list is deterministic. Unreadable files are reported as issues
/// and skipped.
pub fn load_corpus(root: &Path) -> Result<CorpusLoad> {
    if !root.is_dir() {
        return Err(Error::MissingRoot(root.to_path_buf()));
    }
    let mut authors: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    authors.sort();

    let mut documents = Vec::new();
    let mut issues = Vec::new();
    for author_dir in authors {
        let label = author_dir
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut files: Vec<PathBuf> = fs::read_dir(&author_dir)
            .map_err(|e| Error::io(&author_dir, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for file in files {
            let name = file
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let source_id = format!("{label}/{name}");
            match fs::read_to_string(&file) {
                Ok(text) => documents.push(Document::new(Some(&label), source_id, text)),
                Err(e) => issues.push(LoadIssue {
                    path: file,
                    message: format!("unreadable file: {e}"),
                }),
            }
        }
    }
    Ok(CorpusLoad { documents, issues })
}
