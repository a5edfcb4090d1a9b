//! Style features: occurrence distances, per-zone ODE and ODV values,
//! and the sparse style vector assembled from them.
//!
//! Distances are measured between neighboring occurrences of a zone's
//! words, with the text start (position 0) and end (position 1) counted
//! as two extra boundary occurrences, so a zone with `n_k` occurrences
//! yields `n_k + 1` distances.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dict::NfDictionary;
use crate::error::Result;
use crate::text::TokenSequence;
use crate::zone::{partition_with, PartitionScheme, ZoneIndexer, ZoneOccurrences};

/// Which dispersion statistic ODV reports.
///
/// `Variance` scales the root mean squared deviation of the distances
/// from their mean; `Rms` scales the plain root mean square of the
/// distances. Per zone the two satisfy `rms^2 = variance^2 + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OdvMode {
    Variance,
    Rms,
}

/// The `n_k + 1` distances between neighboring occurrences of a zone,
/// including the two boundary occurrences. An empty zone yields `[1]`.
/// The distances always sum to 1.
pub fn occurrence_distances(zone: &ZoneOccurrences) -> Vec<f64> {
    let positions = zone.positions();
    let mut distances = Vec::with_capacity(positions.len() + 1);
    let mut previous = 0.0;
    for &p in positions {
        distances.push(p - previous);
        previous = p;
    }
    distances.push(1.0 - previous);
    distances
}

/// Occurrence distance expectation `alpha = 1 / (n_k + 1)`: the mean of
/// the zone's distances, which telescope to 1.
pub fn ode(zone: &ZoneOccurrences) -> f64 {
    1.0 / (zone.count() as f64 + 1.0)
}

/// Occurrence distance variance `gamma`: the chosen dispersion of the
/// zone's distances, scaled by `1 / alpha`.
pub fn odv(zone: &ZoneOccurrences, mode: OdvMode) -> f64 {
    let distances = occurrence_distances(zone);
    gamma_of_distances(&distances, mode)
}

fn gamma_of_distances(distances: &[f64], mode: OdvMode) -> f64 {
    let m = distances.len() as f64; // n_k + 1
    let alpha = 1.0 / m;
    let mean_square = match mode {
        OdvMode::Variance => distances.iter().map(|d| (d - alpha) * (d - alpha)).sum::<f64>() / m,
        OdvMode::Rms => distances.iter().map(|d| d * d).sum::<f64>() / m,
    };
    mean_square.sqrt() / alpha
}

/// Sparse per-zone style features of one text: zone index → (alpha,
/// gamma). Zones the text never touches are absent; their implied values
/// are alpha = 1 and gamma = 0 (variance) or 1 (rms).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleVector {
    n: usize,
    scheme: PartitionScheme,
    odv_mode: OdvMode,
    features: BTreeMap<u64, (f64, f64)>,
}

impl StyleVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scheme(&self) -> &PartitionScheme {
        &self.scheme
    }

    pub fn odv_mode(&self) -> OdvMode {
        self.odv_mode
    }

    /// Present zones in ascending index order.
    pub fn features(&self) -> &BTreeMap<u64, (f64, f64)> {
        &self.features
    }

    pub fn alpha(&self, zone: u64) -> Option<f64> {
        self.features.get(&zone).map(|&(a, _)| a)
    }

    pub fn gamma(&self, zone: u64) -> Option<f64> {
        self.features.get(&zone).map(|&(_, g)| g)
    }

    /// Implied alpha for zones absent from the text.
    pub fn alpha_fill() -> f64 {
        1.0
    }

    /// Implied gamma for zones absent from the text.
    pub fn gamma_fill(mode: OdvMode) -> f64 {
        match mode {
            OdvMode::Variance => 0.0,
            OdvMode::Rms => 1.0,
        }
    }

    pub fn config_matches(&self, other: &StyleVector) -> bool {
        self.scheme == other.scheme && self.odv_mode == other.odv_mode
    }
}

/// Extracts the style vector of `seq`: partitions its occurrences by
/// zone and computes (alpha, gamma) for every present zone.
pub fn style_vector(
    seq: &TokenSequence,
    dict: &NfDictionary,
    scheme: &PartitionScheme,
    mode: OdvMode,
) -> Result<StyleVector> {
    let max_f = seq
        .tokens()
        .iter()
        .map(|t| dict.lookup(t))
        .max()
        .unwrap_or(0);
    let indexer = ZoneIndexer::new(scheme, max_f)?;
    Ok(style_vector_with(&indexer, seq, dict, mode))
}

/// [`style_vector`] with a prebuilt indexer; extraction across texts is
/// embarrassingly parallel and bit-identical to serial runs.
pub fn style_vector_with(
    indexer: &ZoneIndexer,
    seq: &TokenSequence,
    dict: &NfDictionary,
    mode: OdvMode,
) -> StyleVector {
    let zones = partition_with(indexer, seq, dict);
    let features = zones
        .iter()
        .map(|(&k, zone)| (k, (ode(zone), odv(zone, mode))))
        .collect();
    StyleVector {
        n: seq.len(),
        scheme: *indexer.scheme(),
        odv_mode: mode,
        features,
    }
}

/// One exported feature record: the JSON row written by `featurize`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub source_id: String,
    pub author_label: Option<String>,
    pub n: usize,
    pub scheme: PartitionScheme,
    pub odv_mode: OdvMode,
    /// `[zone, alpha, gamma]` triples in ascending zone order.
    pub features: Vec<(u64, f64, f64)>,
}

impl FeatureRecord {
    pub fn new(source_id: String, author_label: Option<String>, vector: &StyleVector) -> Self {
        FeatureRecord {
            source_id,
            author_label,
            n: vector.n(),
            scheme: *vector.scheme(),
            odv_mode: vector.odv_mode(),
            features: vector
                .features()
                .iter()
                .map(|(&k, &(a, g))| (k, a, g))
                .collect(),
        }
    }

    pub fn vector(&self) -> StyleVector {
        StyleVector {
            n: self.n,
            scheme: self.scheme,
            odv_mode: self.odv_mode,
            features: self
                .features
                .iter()
                .map(|&(k, a, g)| (k, (a, g)))
                .collect(),
        }
    }
}
