//! End-to-end attribution: the closed-set pipeline (tokenize, segment,
//! featurize, train, predict) and the open-set scheme that segments a
//! long text, attributes every segment, and accepts a candidate only
//! when exactly one confidence reaches the threshold.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{train, AttributionReport, ClassifierModel, Sample, TrainConfig};
use crate::dict::NfDictionary;
use crate::error::{Error, Result};
use crate::features::{style_vector_with, OdvMode};
use crate::text::{segment, tokenize, Document, SegmentMode};
use crate::zone::{PartitionScheme, ZoneIndexer};

/// Everything the closed-set pipeline needs besides the dictionary.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub scheme: PartitionScheme,
    pub odv_mode: OdvMode,
    /// Front-segment length for training and testing samples.
    pub word_length: usize,
    pub classifier: TrainConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            scheme: PartitionScheme::Linear { l: 10 },
            odv_mode: OdvMode::Variance,
            word_length: 1000,
            classifier: TrainConfig::default(),
        }
    }
}

/// A trained closed-set pipeline over a fixed candidate author set,
/// reusable across test documents and open-set runs.
#[derive(Debug, Clone)]
pub struct BasicPipeline {
    dict: Arc<NfDictionary>,
    config: PipelineConfig,
    indexer: ZoneIndexer,
    model: ClassifierModel,
}

impl BasicPipeline {
    /// Trains on one front segment per labeled document.
    pub fn train(
        train_docs: &[Document],
        dict: Arc<NfDictionary>,
        config: PipelineConfig,
    ) -> Result<Self> {
        if config.word_length == 0 {
            return Err(Error::InvalidParameter("word_length must be >= 1".into()));
        }
        let indexer = ZoneIndexer::new(&config.scheme, dict.f_max())?;
        let samples: Vec<Sample> = train_docs
            .par_iter()
            .map(|doc| {
                let label = doc
                    .author_label
                    .clone()
                    .ok_or_else(|| Error::UnlabeledDocument(doc.source_id.clone()))?;
                let vector = featurize_front(doc, &indexer, &dict, &config)?;
                Ok(Sample::new(&doc.source_id, label, vector))
            })
            .collect::<Result<Vec<_>>>()?;
        let model = train(&samples, &config.classifier)?;
        Ok(BasicPipeline {
            dict,
            config,
            indexer,
            model,
        })
    }

    /// Rebuilds a pipeline around a persisted model; the dictionary must
    /// be the one the model was trained with for predictions to be
    /// meaningful.
    pub fn from_model(
        model: ClassifierModel,
        dict: Arc<NfDictionary>,
        word_length: usize,
    ) -> Result<Self> {
        if word_length == 0 {
            return Err(Error::InvalidParameter("word_length must be >= 1".into()));
        }
        let indexer = ZoneIndexer::new(model.scheme(), dict.f_max())?;
        let config = PipelineConfig {
            scheme: *model.scheme(),
            odv_mode: model.odv_mode(),
            word_length,
            classifier: model.config().clone(),
        };
        Ok(BasicPipeline {
            dict,
            config,
            indexer,
            model,
        })
    }

    pub fn model(&self) -> &ClassifierModel {
        &self.model
    }

    /// The candidate author set Y, ascending.
    pub fn labels(&self) -> &[String] {
        self.model.labels()
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn dictionary(&self) -> &NfDictionary {
        &self.dict
    }

    /// Attributes one unlabeled document (front segment).
    pub fn predict_document(&self, doc: &Document) -> Result<String> {
        let vector = featurize_front(doc, &self.indexer, &self.dict, &self.config)?;
        Ok(self.model.predict(&vector)?.to_string())
    }

    /// Scores labeled test documents, one front segment each.
    pub fn attribute(&self, test_docs: &[Document]) -> Result<AttributionReport> {
        if test_docs.is_empty() {
            return Err(Error::EmptyTestSet);
        }
        let samples: Vec<Sample> = test_docs
            .par_iter()
            .map(|doc| {
                let label = doc
                    .author_label
                    .clone()
                    .ok_or_else(|| Error::UnlabeledDocument(doc.source_id.clone()))?;
                let vector = featurize_front(doc, &self.indexer, &self.dict, &self.config)?;
                Ok(Sample::new(&doc.source_id, label, vector))
            })
            .collect::<Result<Vec<_>>>()?;
        self.model.evaluate(&samples)
    }
}

fn featurize_front(
    doc: &Document,
    indexer: &ZoneIndexer,
    dict: &NfDictionary,
    config: &PipelineConfig,
) -> Result<crate::features::StyleVector> {
    let seq = tokenize(&doc.text)?;
    let front = segment(&seq, config.word_length, SegmentMode::Front)
        .into_iter()
        .next()
        .expect("front segmentation yields one sample");
    Ok(style_vector_with(indexer, &front, dict, config.odv_mode))
}

/// Runs the whole closed-set scheme: train on `train_docs`, score
/// `test_docs`.
pub fn basic_attribute(
    train_docs: &[Document],
    test_docs: &[Document],
    dict: Arc<NfDictionary>,
    config: PipelineConfig,
) -> Result<AttributionReport> {
    let pipeline = BasicPipeline::train(train_docs, dict, config)?;
    pipeline.attribute(test_docs)
}

/// Normalized excess of an attribution proportion over the random
/// baseline: `(p - 1/|Y|) / (1 - 1/|Y|)`. Zero at `p = 1/|Y|`, one at
/// `p = 1`.
pub fn confidence(p: f64, set_size: usize) -> f64 {
    assert!(set_size >= 2, "candidate set needs at least 2 authors");
    let random = 1.0 / set_size as f64;
    (p - random) / (1.0 - random)
}

/// The unique label whose confidence reaches `theta` (inclusive), if
/// exactly one exists; otherwise `None` (reject).
pub fn decide(confidences: &[(String, f64)], theta: f64) -> Option<&str> {
    let mut qualified = confidences.iter().filter(|(_, f)| *f >= theta);
    match (qualified.next(), qualified.next()) {
        (Some((label, _)), None) => Some(label),
        _ => None,
    }
}

/// Per-candidate attribution outcome for one long text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateConfidence {
    pub label: String,
    pub attributed_count: usize,
    pub proportion: f64,
    pub confidence: f64,
}

/// Outcome of open attribution of one long text: per-candidate
/// proportions and confidences, the threshold, and the decision
/// (`None` means reject).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceReport {
    pub subset_id: String,
    pub segments: usize,
    pub theta: f64,
    pub candidates: Vec<CandidateConfidence>,
    pub decision: Option<String>,
    pub max_confidence: f64,
}

/// Open-set attribution: chunk-segments `long_text` into
/// `word_length`-token samples, attributes each with the trained
/// pipeline, and decides by confidence threshold `theta`.
pub fn open_attribute(
    pipeline: &BasicPipeline,
    long_text: &Document,
    word_length: usize,
    theta: f64,
) -> Result<ConfidenceReport> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidParameter("theta must be in (0, 1]".into()));
    }
    if word_length == 0 {
        return Err(Error::InvalidParameter("word_length must be >= 1".into()));
    }
    let seq = tokenize(&long_text.text)?;
    let segments = segment(&seq, word_length, SegmentMode::Chunks);
    if segments.is_empty() {
        return Err(Error::NoSegments);
    }
    let predicted: Vec<usize> = segments
        .par_iter()
        .map(|sample| {
            let vector = style_vector_with(
                &pipeline.indexer,
                sample,
                &pipeline.dict,
                pipeline.config.odv_mode,
            );
            let label = pipeline.model.predict(&vector)?;
            Ok(pipeline
                .labels()
                .iter()
                .position(|l| l == label)
                .expect("prediction is a candidate"))
        })
        .collect::<Result<Vec<_>>>()?;

    let labels = pipeline.labels();
    let mut counts = vec![0usize; labels.len()];
    for &idx in &predicted {
        counts[idx] += 1;
    }
    let total = segments.len();
    let candidates: Vec<CandidateConfidence> = labels
        .iter()
        .zip(&counts)
        .map(|(label, &count)| {
            let proportion = count as f64 / total as f64;
            CandidateConfidence {
                label: label.clone(),
                attributed_count: count,
                proportion,
                confidence: confidence(proportion, labels.len()),
            }
        })
        .collect();
    let max_confidence = candidates
        .iter()
        .map(|c| c.confidence)
        .fold(f64::NEG_INFINITY, f64::max);
    let decision = {
        let pairs: Vec<(String, f64)> = candidates
            .iter()
            .map(|c| (c.label.clone(), c.confidence))
            .collect();
        decide(&pairs, theta).map(str::to_string)
    };
    Ok(ConfidenceReport {
        subset_id: long_text.source_id.clone(),
        segments: total,
        theta,
        candidates,
        decision,
        max_confidence,
    })
}
