//! Natural-frequency dictionary: each word mapped to its overall
//! occurrence count in a reference corpus.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::text::{tokenize, Document};

/// Word → natural-frequency mapping. Immutable once built or loaded.
#[derive(Debug, Clone, Default)]
pub struct NfDictionary {
    entries: HashMap<String, u64>,
    f_max: u64,
    source: String,
}

impl NfDictionary {
    /// Builds a dictionary from raw counts. Duplicate words are summed.
    pub fn from_counts(
        counts: impl IntoIterator<Item = (String, u64)>,
        source: impl Into<String>,
    ) -> Self {
        let mut entries: HashMap<String, u64> = HashMap::new();
        for (word, count) in counts {
            *entries.entry(word).or_insert(0) += count;
        }
        let f_max = entries.values().copied().max().unwrap_or(0);
        NfDictionary {
            entries,
            f_max,
            source: source.into(),
        }
    }

    /// Counts every word over all documents (tokenized like the analysis
    /// texts). Documents without any word are skipped; if none yields a
    /// word the corpus is empty.
    pub fn build(docs: &[Document]) -> Result<Self> {
        let counts = docs
            .par_iter()
            .map(|doc| {
                let mut map: HashMap<String, u64> = HashMap::new();
                if let Ok(seq) = tokenize(&doc.text) {
                    for token in seq.tokens() {
                        *map.entry(token.clone()).or_insert(0) += 1;
                    }
                }
                map
            })
            .reduce(HashMap::new, |mut acc, map| {
                for (word, count) in map {
                    *acc.entry(word).or_insert(0) += count;
                }
                acc
            });
        if counts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(NfDictionary::from_counts(
            counts,
            format!("built from {} documents", docs.len()),
        ))
    }

    /// The word's natural frequency; 0 for words not in the dictionary.
    pub fn lookup(&self, word: &str) -> u64 {
        self.entries.get(word).copied().unwrap_or(0)
    }

    /// Largest NF value over all entries (0 for an empty dictionary).
    pub fn f_max(&self) -> u64 {
        self.f_max
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    fn sorted_entries(&self) -> Vec<(&str, u64)> {
        let mut entries: Vec<(&str, u64)> = self
            .entries
            .iter()
            .map(|(w, &c)| (w.as_str(), c))
            .collect();
        entries.sort_by_key(|&(w, c)| (Reverse(c), w));
        entries
    }

    /// The `count` highest-NF words, descending NF, ties broken
    /// lexicographically; fewer if the dictionary is smaller.
    pub fn top_words(&self, count: usize) -> Vec<String> {
        self.sorted_entries()
            .into_iter()
            .take(count)
            .map(|(w, _)| w.to_string())
            .collect()
    }

    /// Writes the canonical TSV: one `word<TAB>count` per line, descending
    /// count, ties by word, no header.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (word, count) in self.sorted_entries() {
            writeln!(out, "{word}\t{count}").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Reads a `word<TAB>count` TSV in any line order. Words are
    /// case-normalized like analysis tokens; `f_max` is recomputed.
    pub fn load(path: &Path) -> Result<Self> {
        let contents = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut entries: HashMap<String, u64> = HashMap::new();
        for (idx, line) in contents.lines().enumerate() {
            let lineno = idx + 1;
            let bad = || Error::Format {
                path: path.to_path_buf(),
                line: lineno,
            };
            let (word, count) = line.split_once('\t').ok_or_else(bad)?;
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(bad());
            }
            let count: u64 = count.trim().parse().map_err(|_| bad())?;
            let word: String = word.chars().flat_map(char::to_lowercase).collect();
            if entries.insert(word.clone(), count).is_some() {
                return Err(Error::DuplicateWord {
                    path: path.to_path_buf(),
                    line: lineno,
                    word,
                });
            }
        }
        let f_max = entries.values().copied().max().unwrap_or(0);
        Ok(NfDictionary {
            entries,
            f_max,
            source: path.display().to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> Document {
        Document::new(None::<&str>, "test", text)
    }

    #[test]
    fn build_counts_words() {
        let dict = NfDictionary::build(&[doc("a a b")]).unwrap();
        assert_eq!(dict.lookup("a"), 2);
        assert_eq!(dict.lookup("b"), 1);
        assert_eq!(dict.f_max(), 2);
    }

    #[test]
    fn build_sums_across_documents() {
        let dict = NfDictionary::build(&[doc("a"), doc("a")]).unwrap();
        assert_eq!(dict.lookup("a"), 2);
        assert_eq!(dict.f_max(), 2);
        assert_eq!(dict.len(), 1);
    }

    #[test]
    fn build_rejects_wordless_corpus() {
        assert!(matches!(
            NfDictionary::build(&[doc("")]),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn lookup_unknown_words_is_zero() {
        let dict = NfDictionary::from_counts([("a".to_string(), 2)], "test");
        assert_eq!(dict.lookup("a"), 2);
        assert_eq!(dict.lookup("zzz"), 0);
        let empty = NfDictionary::default();
        assert_eq!(empty.lookup("a"), 0);
        assert_eq!(empty.f_max(), 0);
    }

    #[test]
    fn save_writes_descending_tsv() {
        let dict = NfDictionary::from_counts(
            [("a".to_string(), 2), ("b".to_string(), 1)],
            "test",
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dict.tsv");
        dict.save(&path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "a\t2\nb\t1\n");
    }

    #[test]
    fn load_rejects_bad_count() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dict.tsv");
        fs::write(&path, "a\t2\nb\tbadcount\n").unwrap();
        match NfDictionary::load(&path) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_missing_tab_and_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dict.tsv");
        fs::write(&path, "a 2\n").unwrap();
        assert!(matches!(
            NfDictionary::load(&path),
            Err(Error::Format { line: 1, .. })
        ));
        fs::write(&path, "a\t2\nA\t3\n").unwrap();
        match NfDictionary::load(&path) {
            Err(Error::DuplicateWord { line, word, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(word, "a");
            }
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn save_load_round_trip() {
        let dict = NfDictionary::from_counts(
            [("a".to_string(), 2), ("b".to_string(), 1)],
            "test",
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dict.tsv");
        dict.save(&path).unwrap();
        let loaded = NfDictionary::load(&path).unwrap();
        assert_eq!(loaded.lookup("a"), 2);
        assert_eq!(loaded.lookup("b"), 1);
        assert_eq!(loaded.f_max(), 2);
        assert_eq!(loaded.len(), 2);
    }

    #[test]
    fn load_accepts_any_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dict.tsv");
        fs::write(&path, "b\t1\na\t2\n").unwrap();
        let dict = NfDictionary::load(&path).unwrap();
        assert_eq!(dict.f_max(), 2);
    }

    #[test]
    fn top_words_breaks_ties_lexicographically() {
        let dict = NfDictionary::from_counts(
            [
                ("a".to_string(), 5),
                ("b".to_string(), 3),
                ("c".to_string(), 3),
            ],
            "test",
        );
        assert_eq!(dict.top_words(2), ["a", "b"]);
        assert_eq!(dict.top_words(3), ["a", "b", "c"]);
        assert_eq!(dict.top_words(150), ["a", "b", "c"]);
        let small = NfDictionary::from_counts([("a".to_string(), 5)], "test");
        assert_eq!(small.top_words(150), ["a"]);
    }

    #[test]
    fn build_matches_brute_force_recount() {
        let texts = ["the cat sat", "the dog the cat", "a dog barks"];
        let docs: Vec<Document> = texts.iter().map(|t| doc(t)).collect();
        let dict = NfDictionary::build(&docs).unwrap();
        for word in ["the", "cat", "dog", "a", "sat", "barks", "missing"] {
            let mut expected = 0;
            for t in &texts {
                expected += t.split_whitespace().filter(|w| *w == word).count() as u64;
            }
            assert_eq!(dict.lookup(word), expected, "word {word}");
        }
    }
}
