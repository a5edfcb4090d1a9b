//! Burrows Delta baseline: mean absolute difference of z-scores of the
//! top-N most frequent words' relative frequencies between a test text
//! and an author signature.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dict::NfDictionary;
use crate::error::{Error, Result};
use crate::text::TokenSequence;

/// Relative frequency of each listed word in `seq`, order preserved.
pub fn word_frequencies(seq: &TokenSequence, words: &[String]) -> Vec<f64> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for token in seq.tokens() {
        *counts.entry(token.as_str()).or_insert(0) += 1;
    }
    let n = seq.len() as f64;
    words
        .iter()
        .map(|w| counts.get(w.as_str()).copied().unwrap_or(0) as f64 / n)
        .collect()
}

/// Frequent-word norm statistics plus one mean z-score signature per
/// author.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaProfile {
    words: Vec<String>,
    means: Vec<f64>,
    stds: Vec<f64>,
    authors: Vec<String>,
    signatures: Vec<Vec<f64>>,
}

impl DeltaProfile {
    /// Builds the profile: word list from the dictionary's top `n_words`,
    /// per-word corpus mean and population standard deviation over all
    /// training texts, and per-author mean z-score vectors. Zero-std
    /// words get z-score 0 everywhere.
    pub fn build(
        train: &[(TokenSequence, String)],
        dict: &NfDictionary,
        n_words: usize,
    ) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::EmptyTraining);
        }
        let words = dict.top_words(n_words);
        let frequencies: Vec<Vec<f64>> = train
            .iter()
            .map(|(seq, _)| word_frequencies(seq, &words))
            .collect();
        let texts = frequencies.len() as f64;
        let mut means = vec![0.0; words.len()];
        for row in &frequencies {
            for (m, &x) in means.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in &mut means {
            *m /= texts;
        }
        let mut stds = vec![0.0; words.len()];
        for row in &frequencies {
            for (col, &x) in row.iter().enumerate() {
                stds[col] += (x - means[col]) * (x - means[col]);
            }
        }
        for s in &mut stds {
            *s = (*s / texts).sqrt();
        }

        let mut per_author: BTreeMap<&str, (Vec<f64>, usize)> = BTreeMap::new();
        for ((_, label), row) in train.iter().zip(&frequencies) {
            let entry = per_author
                .entry(label.as_str())
                .or_insert_with(|| (vec![0.0; words.len()], 0));
            for (col, &x) in row.iter().enumerate() {
                entry.0[col] += z_score(x, means[col], stds[col]);
            }
            entry.1 += 1;
        }
        let mut authors = Vec::new();
        let mut signatures = Vec::new();
        for (label, (mut sums, count)) in per_author {
            for v in &mut sums {
                *v /= count as f64;
            }
            authors.push(label.to_string());
            signatures.push(sums);
        }
        Ok(DeltaProfile {
            words,
            means,
            stds,
            authors,
            signatures,
        })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn authors(&self) -> &[String] {
        &self.authors
    }

    /// The test text's z-scores under the profile's norm statistics.
    pub fn z_scores(&self, seq: &TokenSequence) -> Vec<f64> {
        word_frequencies(seq, &self.words)
            .into_iter()
            .enumerate()
            .map(|(col, x)| z_score(x, self.means[col], self.stds[col]))
            .collect()
    }

    /// Delta measure between `seq` and one author's signature: the mean
    /// absolute z-score difference over the word list.
    pub fn score(&self, seq: &TokenSequence, author: &str) -> Result<f64> {
        let idx = self
            .authors
            .iter()
            .position(|a| a == author)
            .ok_or_else(|| Error::UnknownAuthor(author.to_string()))?;
        Ok(self.score_against(&self.z_scores(seq), idx))
    }

    fn score_against(&self, test_z: &[f64], author_idx: usize) -> f64 {
        let signature = &self.signatures[author_idx];
        if self.words.is_empty() {
            return 0.0;
        }
        signature
            .iter()
            .zip(test_z)
            .map(|(a, t)| (a - t).abs())
            .sum::<f64>()
            / self.words.len() as f64
    }

    /// Delta measures against every author, in [`Self::authors`] order.
    pub fn score_all(&self, seq: &TokenSequence) -> Vec<f64> {
        let test_z = self.z_scores(seq);
        (0..self.authors.len())
            .map(|idx| self.score_against(&test_z, idx))
            .collect()
    }

    /// All authors with their Delta measures, ascending by (score, label).
    pub fn rank(&self, seq: &TokenSequence) -> Vec<(String, f64)> {
        let test_z = self.z_scores(seq);
        let mut scored: Vec<(String, f64)> = self
            .authors
            .iter()
            .enumerate()
            .map(|(idx, label)| (label.clone(), self.score_against(&test_z, idx)))
            .collect();
        scored.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        scored
    }

    /// Closed-set attribution: the author with the smallest Delta, ties
    /// broken by ascending label.
    pub fn attribute(&self, seq: &TokenSequence) -> (String, f64) {
        self.rank(seq).into_iter().next().expect("profile has authors")
    }

    /// Open-set variant: the argmin author if its score is within the
    /// threshold, otherwise reject.
    pub fn open_attribute(&self, seq: &TokenSequence, threshold: f64) -> Option<String> {
        let (author, score) = self.attribute(seq);
        (score <= threshold).then_some(author)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer_pretty(file, self).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_reader(file).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })
    }
}

fn z_score(x: f64, mean: f64, std: f64) -> f64 {
    if std == 0.0 {
        0.0
    } else {
        (x - mean) / std
    }
}
