//! Stylometry by natural-frequency-zoned word distribution analysis.
//!
//! A text is read as an ordered sequence of word occurrences with
//! normalized positions. Words are grouped into zones by their natural
//! frequency (their count in a large reference corpus), and each zone
//! contributes two features: the occurrence distance expectation (ODE)
//! and the occurrence distance variance (ODV), computed from the gaps
//! between neighboring occurrences of the zone's words. The sparse
//! vector of per-zone (ODE, ODV) pairs is the text's style vector.
//!
//! On top of the features sit two attribution schemes: a closed-set
//! scheme (a deterministic linear-margin classifier over style vectors)
//! and an open-set scheme that segments a long text, attributes every
//! segment, and accepts a candidate author only when exactly one
//! attribution confidence reaches a threshold. A Burrows Delta baseline
//! over the top-N most frequent words is included for comparison.

pub mod attribution;
pub mod classify;
pub mod delta;
pub mod dict;
pub mod error;
pub mod features;
mod smo;
pub mod synthetic;
pub mod text;
pub mod zone;

#[cfg(feature = "testkit")]
pub mod testkit;

pub use attribution::{
    basic_attribute, confidence, decide, open_attribute, BasicPipeline, CandidateConfidence,
    ConfidenceReport, PipelineConfig,
};
pub use classify::{
    fit_scaling, train, AttributionReport, ClassifierModel, ConfusionMatrix, FeatureSelector,
    PredictionRecord, Sample, ScalingParams, TrainConfig,
};
pub use delta::{word_frequencies, DeltaProfile};
pub use dict::NfDictionary;
pub use error::{Error, Result};
pub use features::{
    occurrence_distances, ode, odv, style_vector, style_vector_with, FeatureRecord, OdvMode,
    StyleVector,
};
pub use text::{load_corpus, segment, tokenize, CorpusLoad, Document, SegmentMode, TokenSequence};
pub use zone::{partition, partition_with, zone_count, zone_index, PartitionScheme, ZoneIndexer};
