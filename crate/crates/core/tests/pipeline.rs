//! End-to-end attribution runs on synthetic banded corpora.

use std::sync::Arc;

use nfzwda::synthetic::{BandSpec, SyntheticCorpus};
use nfzwda::{
    basic_attribute, open_attribute, BasicPipeline, Document, Error, OdvMode, PartitionScheme,
    PipelineConfig, TrainConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn three_band_corpus() -> SyntheticCorpus {
    SyntheticCorpus::new(&[
        BandSpec {
            words: 40,
            nf_low: 50,
            nf_high: 900,
        },
        BandSpec {
            words: 40,
            nf_low: 5_000,
            nf_high: 9_000,
        },
        BandSpec {
            words: 40,
            nf_low: 50_000,
            nf_high: 90_000,
        },
    ])
}

fn config(word_length: usize) -> PipelineConfig {
    PipelineConfig {
        scheme: PartitionScheme::Linear { l: 1000 },
        odv_mode: OdvMode::Variance,
        word_length,
        classifier: TrainConfig::default(),
    }
}

#[test]
fn disjoint_bands_attribute_perfectly() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for band in 0..3usize {
        let label = format!("author{band}");
        train.extend(corpus.band_documents(&label, band, 8, 300, &mut rng));
        test.extend(corpus.band_documents(&label, band, 4, 300, &mut rng));
    }
    let dict = Arc::new(corpus.dictionary().clone());
    let report = basic_attribute(&train, &test, dict, config(300)).unwrap();
    assert_eq!(report.accuracy, 1.0);
    let proportions = report.confusion.row_proportions();
    for (row, p) in proportions.iter().enumerate() {
        assert_eq!(p[row], 1.0);
    }
}

#[test]
fn single_author_training_fails() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let train = corpus.band_documents("only", 0, 5, 200, &mut rng);
    let test = corpus.band_documents("only", 0, 1, 200, &mut rng);
    let dict = Arc::new(corpus.dictionary().clone());
    let result = basic_attribute(&train, &test, dict, config(200));
    assert!(matches!(result, Err(Error::SingleClass)));
}

#[test]
fn short_test_text_uses_whole_text() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut train = Vec::new();
    for band in 0..2usize {
        train.extend(corpus.band_documents(&format!("author{band}"), band, 6, 400, &mut rng));
    }
    let dict = Arc::new(corpus.dictionary().clone());
    let pipeline = BasicPipeline::train(&train, dict, config(400)).unwrap();
    // 80-word document, well under the 400-word front length
    let short = Document::new(
        Some("author1"),
        "author1/short.txt",
        corpus.text_from_band(1, 80, &mut rng),
    );
    let report = pipeline.attribute(&[short]).unwrap();
    assert_eq!(report.accuracy, 1.0);
}

#[test]
fn end_to_end_runs_are_deterministic() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for band in 0..3usize {
        let label = format!("author{band}");
        // overlapping vocabulary so predictions are not trivially fixed
        let weights = [(band, 0.5), ((band + 1) % 3, 0.25), ((band + 2) % 3, 0.25)];
        train.extend(corpus.mixture_documents(&label, &weights, 6, 250, &mut rng));
        test.extend(corpus.mixture_documents(&label, &weights, 3, 250, &mut rng));
    }
    let dict = Arc::new(corpus.dictionary().clone());
    let r1 = basic_attribute(&train, &test, dict.clone(), config(250)).unwrap();
    let r2 = basic_attribute(&train, &test, dict, config(250)).unwrap();
    assert_eq!(
        serde_json::to_string(&r1).unwrap(),
        serde_json::to_string(&r2).unwrap()
    );
}

fn trained_open_pipeline(
    corpus: &SyntheticCorpus,
    rng: &mut ChaCha8Rng,
    word_length: usize,
) -> BasicPipeline {
    let mut train = Vec::new();
    for band in 0..3usize {
        train.extend(corpus.band_documents(&format!("author{band}"), band, 8, word_length, rng));
    }
    let dict = Arc::new(corpus.dictionary().clone());
    BasicPipeline::train(&train, dict, config(word_length)).unwrap()
}

#[test]
fn open_attribution_accepts_in_set_long_text() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let pipeline = trained_open_pipeline(&corpus, &mut rng, 200);
    let long_text = Document::new(
        Some("author1"),
        "author1/long.txt",
        corpus.text_from_band(1, 200 * 24, &mut rng),
    );
    let report = open_attribute(&pipeline, &long_text, 200, 0.5).unwrap();
    assert_eq!(report.segments, 24);
    assert_eq!(report.decision.as_deref(), Some("author1"));
    assert!(report.max_confidence >= 0.5);
    let p_sum: f64 = report.candidates.iter().map(|c| c.proportion).sum();
    assert!((p_sum - 1.0).abs() <= 1e-12);
    let counted: usize = report.candidates.iter().map(|c| c.attributed_count).sum();
    assert_eq!(counted, report.segments);
}

#[test]
fn open_attribution_rejects_scattered_long_text() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let pipeline = trained_open_pipeline(&corpus, &mut rng, 200);
    // out-of-set author: each segment leans toward a rotating band, so
    // attributions scatter across the candidate set
    let mut segments = Vec::new();
    for s in 0..24usize {
        let dominant = s % 3;
        let weights = [
            (dominant, 0.5),
            ((dominant + 1) % 3, 0.25),
            ((dominant + 2) % 3, 0.25),
        ];
        segments.push(corpus.text_from_mixture(&weights, 200, &mut rng));
    }
    let long_text = Document::new(Some("outsider"), "outsider/long.txt", segments.join(" "));
    let report = open_attribute(&pipeline, &long_text, 200, 0.5).unwrap();
    assert_eq!(report.segments, 24);
    assert_eq!(report.decision, None);
    assert!(report.max_confidence < 0.5);
}

#[test]
fn open_attribution_validates_parameters() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let pipeline = trained_open_pipeline(&corpus, &mut rng, 100);
    let doc = Document::new(
        Some("author0"),
        "author0/long.txt",
        corpus.text_from_band(0, 500, &mut rng),
    );
    assert!(matches!(
        open_attribute(&pipeline, &doc, 100, 0.0),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        open_attribute(&pipeline, &doc, 100, 1.5),
        Err(Error::InvalidParameter(_))
    ));
    let empty = Document::new(Some("author0"), "author0/empty.txt", "");
    assert!(matches!(
        open_attribute(&pipeline, &empty, 100, 0.5),
        Err(Error::EmptyText)
    ));
}

#[test]
fn confidence_report_serializes_with_fixed_field_names() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let pipeline = trained_open_pipeline(&corpus, &mut rng, 100);
    let doc = Document::new(
        Some("author0"),
        "author0/long.txt",
        corpus.text_from_band(0, 100 * 21, &mut rng),
    );
    let report = open_attribute(&pipeline, &doc, 100, 0.5).unwrap();
    let value: serde_json::Value = serde_json::to_value(&report).unwrap();
    let object = value.as_object().unwrap();
    let mut keys: Vec<&str> = object.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "candidates",
            "decision",
            "max_confidence",
            "segments",
            "subset_id",
            "theta"
        ]
    );
    let candidate = value["candidates"][0].as_object().unwrap();
    let mut keys: Vec<&str> = candidate.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["attributed_count", "confidence", "label", "proportion"]
    );
}

#[test]
fn parallel_extraction_matches_serial() {
    use nfzwda::{style_vector_with, tokenize, StyleVector, ZoneIndexer};
    use rayon::prelude::*;

    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut docs: Vec<Document> = Vec::new();
    for band in 0..3usize {
        docs.extend(corpus.band_documents(&format!("author{band}"), band, 4, 200, &mut rng));
    }
    let dict = corpus.dictionary();
    let scheme = PartitionScheme::Linear { l: 1000 };
    let indexer = ZoneIndexer::new(&scheme, dict.f_max()).unwrap();
    let extract = |doc: &Document| -> StyleVector {
        let seq = tokenize(&doc.text).unwrap();
        style_vector_with(&indexer, &seq, dict, OdvMode::Variance)
    };
    let serial: Vec<StyleVector> = docs.iter().map(extract).collect();
    let parallel: Vec<StyleVector> = docs.par_iter().map(extract).collect();
    assert_eq!(serial, parallel);
    assert_eq!(
        serde_json::to_string(&serial).unwrap(),
        serde_json::to_string(&parallel).unwrap()
    );
}

#[test]
fn training_is_independent_of_thread_count() {
    let corpus = three_band_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let mut train = Vec::new();
    for band in 0..3usize {
        train.extend(corpus.band_documents(&format!("author{band}"), band, 5, 200, &mut rng));
    }
    let dict = Arc::new(corpus.dictionary().clone());
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| BasicPipeline::train(&train, dict.clone(), config(200)).unwrap());
    let parallel = BasicPipeline::train(&train, dict, config(200)).unwrap();
    assert_eq!(
        serde_json::to_string(single.model()).unwrap(),
        serde_json::to_string(parallel.model()).unwrap()
    );
}

mod zipf {
    use super::*;
    use nfzwda::NfDictionary;
    use rand::Rng;

    fn word(mut i: usize) -> String {
        let mut s = String::new();
        loop {
            s.push((b'a' + (i % 26) as u8) as char);
            i /= 26;
            if i == 0 {
                break;
            }
        }
        s
    }

    /// 500-word vocabulary with Zipf-like NF values (NF of rank i is
    /// 1e6 / (i+1)), shared by every author.
    fn vocabulary() -> (Vec<String>, NfDictionary) {
        let words: Vec<String> = (0..500).map(word).collect();
        let dict = NfDictionary::from_counts(
            words
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), 1_000_000 / (i as u64 + 1))),
            "zipf vocabulary",
        );
        (words, dict)
    }

    /// Samples ranks with probability proportional to 1 / rank^exponent;
    /// different exponents tilt the same vocabulary differently.
    fn zipf_text(
        words: &[String],
        cumulative: &[f64],
        length: usize,
        rng: &mut impl Rng,
    ) -> String {
        let total = *cumulative.last().unwrap();
        let mut text = Vec::with_capacity(length);
        for _ in 0..length {
            let pick = rng.random_range(0.0..total);
            let idx = cumulative.partition_point(|&c| c <= pick);
            text.push(words[idx.min(words.len() - 1)].as_str());
        }
        text.join(" ")
    }

    fn cumulative_weights(n: usize, exponent: f64) -> Vec<f64> {
        let mut acc = 0.0;
        (0..n)
            .map(|i| {
                acc += 1.0 / ((i + 1) as f64).powf(exponent);
                acc
            })
            .collect()
    }

    #[test]
    fn shared_vocabulary_styles_are_separable() {
        let (words, dict) = vocabulary();
        let exponents = [0.8f64, 1.0, 1.2];
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (author, &exponent) in exponents.iter().enumerate() {
            let label = format!("author{author}");
            let cumulative = cumulative_weights(words.len(), exponent);
            for i in 0..15usize {
                train.push(Document::new(
                    Some(&label),
                    format!("{label}/train{i:02}.txt"),
                    zipf_text(&words, &cumulative, 600, &mut rng),
                ));
            }
            for i in 0..8usize {
                test.push(Document::new(
                    Some(&label),
                    format!("{label}/test{i:02}.txt"),
                    zipf_text(&words, &cumulative, 600, &mut rng),
                ));
            }
        }
        let pipeline_config = PipelineConfig {
            scheme: PartitionScheme::Logarithm { r: 1.1 },
            odv_mode: OdvMode::Variance,
            word_length: 600,
            classifier: TrainConfig::default(),
        };
        let report =
            basic_attribute(&train, &test, Arc::new(dict), pipeline_config).unwrap();
        println!("zipf shared-vocabulary accuracy: {:.4}", report.accuracy);
        // shared vocabulary, purely distributional differences: well
        // above the 1/3 chance level
        assert!(
            report.accuracy > 0.6,
            "zipf-corpus accuracy {}",
            report.accuracy
        );
    }
}
