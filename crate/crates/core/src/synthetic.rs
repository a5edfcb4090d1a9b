//! Synthetic banded corpora for tests and benchmarks.
//!
//! Each band is a vocabulary whose NF values occupy a distinct range, so
//! authors writing from different bands produce style vectors with
//! disjoint zone support and attribution outcomes are known by
//! construction.

use std::fs;
use std::io;
use std::path::Path;

use rand::Rng;

use crate::dict::NfDictionary;
use crate::text::Document;

/// One vocabulary band: `words` distinct words with NF values spread
/// linearly over `[nf_low, nf_high]`.
#[derive(Debug, Clone, Copy)]
pub struct BandSpec {
    pub words: usize,
    pub nf_low: u64,
    pub nf_high: u64,
}

/// A generator over a banded vocabulary with its NF dictionary.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    bands: Vec<Vec<String>>,
    dict: NfDictionary,
}

// Suffixes use only a..y so the 'z' separator cannot collide.
fn alpha_suffix(mut i: usize) -> String {
    let mut s = String::new();
    loop {
        s.push((b'a' + (i % 25) as u8) as char);
        i /= 25;
        if i == 0 {
            break;
        }
    }
    s
}

impl SyntheticCorpus {
    pub fn new(bands: &[BandSpec]) -> Self {
        assert!(bands.len() <= 25, "at most 25 bands");
        let mut vocab = Vec::with_capacity(bands.len());
        let mut counts = Vec::new();
        for (band_idx, spec) in bands.iter().enumerate() {
            assert!(spec.words >= 1 && spec.nf_low <= spec.nf_high);
            let prefix = (b'a' + band_idx as u8) as char;
            let mut words = Vec::with_capacity(spec.words);
            for j in 0..spec.words {
                let word = format!("{prefix}z{}", alpha_suffix(j));
                let span = spec.nf_high - spec.nf_low;
                let nf = if spec.words == 1 {
                    spec.nf_low
                } else {
                    spec.nf_low + span * j as u64 / (spec.words as u64 - 1)
                };
                counts.push((word.clone(), nf));
                words.push(word);
            }
            vocab.push(words);
        }
        SyntheticCorpus {
            bands: vocab,
            dict: NfDictionary::from_counts(counts, "synthetic banded vocabulary"),
        }
    }

    pub fn dictionary(&self) -> &NfDictionary {
        &self.dict
    }

    pub fn band_words(&self, band: usize) -> &[String] {
        &self.bands[band]
    }

    /// A text of `words` tokens drawn uniformly from one band.
    pub fn text_from_band(&self, band: usize, words: usize, rng: &mut impl Rng) -> String {
        self.text_from_mixture(&[(band, 1.0)], words, rng)
    }

    /// A text of `words` tokens, each drawn from a band chosen by the
    /// given weights (normalized internally), then uniformly within it.
    pub fn text_from_mixture(
        &self,
        weights: &[(usize, f64)],
        words: usize,
        rng: &mut impl Rng,
    ) -> String {
        assert!(!weights.is_empty() && words >= 1);
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        let mut text = Vec::with_capacity(words);
        for _ in 0..words {
            let mut pick = rng.random_range(0.0..total);
            let mut band = weights[weights.len() - 1].0;
            for &(candidate, weight) in weights {
                if pick < weight {
                    band = candidate;
                    break;
                }
                pick -= weight;
            }
            let vocab = &self.bands[band];
            text.push(vocab[rng.random_range(0..vocab.len())].as_str());
        }
        text.join(" ")
    }

    /// A two-band text whose rare-band occurrences arrive in bursts.
    ///
    /// A two-state chain emits from `rare_band` while "hot" and from
    /// `common_band` otherwise; it stays hot with probability
    /// `persistence` and enters the hot state at the rate that makes the
    /// long-run rare fraction exactly `rare_fraction`. With
    /// `persistence == rare_fraction` emissions are independent; higher
    /// persistence clumps the rare band's occurrences without changing
    /// expected frequencies.
    pub fn text_with_bursts(
        &self,
        common_band: usize,
        rare_band: usize,
        rare_fraction: f64,
        persistence: f64,
        words: usize,
        rng: &mut impl Rng,
    ) -> String {
        assert!(rare_fraction > 0.0 && rare_fraction < 1.0);
        assert!((rare_fraction..1.0).contains(&persistence));
        let enter = rare_fraction * (1.0 - persistence) / (1.0 - rare_fraction);
        let mut hot = rng.random_range(0.0..1.0) < rare_fraction;
        let mut text = Vec::with_capacity(words);
        for _ in 0..words {
            let band = if hot { rare_band } else { common_band };
            let vocab = &self.bands[band];
            text.push(vocab[rng.random_range(0..vocab.len())].as_str());
            hot = if hot {
                rng.random_range(0.0..1.0) < persistence
            } else {
                rng.random_range(0.0..1.0) < enter
            };
        }
        text.join(" ")
    }

    /// `count` labeled documents of `words_each` tokens from one band.
    pub fn band_documents(
        &self,
        label: &str,
        band: usize,
        count: usize,
        words_each: usize,
        rng: &mut impl Rng,
    ) -> Vec<Document> {
        (0..count)
            .map(|i| {
                Document::new(
                    Some(label),
                    format!("{label}/doc{i:03}.txt"),
                    self.text_from_band(band, words_each, rng),
                )
            })
            .collect()
    }

    /// `count` labeled documents drawn from a band mixture.
    pub fn mixture_documents(
        &self,
        label: &str,
        weights: &[(usize, f64)],
        count: usize,
        words_each: usize,
        rng: &mut impl Rng,
    ) -> Vec<Document> {
        (0..count)
            .map(|i| {
                Document::new(
                    Some(label),
                    format!("{label}/doc{i:03}.txt"),
                    self.text_from_mixture(weights, words_each, rng),
                )
            })
            .collect()
    }
}

/// Writes documents to `<root>/<author_label>/<file>` so they can be
/// re-read with the corpus loader.
pub fn write_corpus(root: &Path, docs: &[Document]) -> io::Result<()> {
    for doc in docs {
        let label = doc.author_label.as_deref().unwrap_or("unknown");
        let dir = root.join(label);
        fs::create_dir_all(&dir)?;
        let name = doc
            .source_id
            .rsplit('/')
            .next()
            .filter(|n| !n.is_empty())
            .unwrap_or("doc.txt");
        fs::write(dir.join(name), &doc.text)?;
    }
    Ok(())
}
