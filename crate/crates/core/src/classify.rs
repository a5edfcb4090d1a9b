//! Closed-set classification over style vectors: min-max feature
//! scaling and a deterministic linear soft-margin classifier trained per
//! unordered label pair, combined by majority vote.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{OdvMode, StyleVector};
use crate::smo::{dot, PairProblem};
use crate::zone::PartitionScheme;

/// Which feature components enter the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSelector {
    Full,
    OdeOnly,
    OdvOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Alpha,
    Gamma,
}

/// One model dimension: a zone paired with a feature component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDim {
    pub zone: u64,
    pub component: Component,
}

/// Per-dimension training minima and maxima, together with the dimension
/// map itself (the union of zones seen in training, ascending, alpha
/// before gamma).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    dims: Vec<FeatureDim>,
    mins: Vec<f64>,
    maxs: Vec<f64>,
    odv_mode: OdvMode,
}

impl ScalingParams {
    pub fn dims(&self) -> &[FeatureDim] {
        &self.dims
    }

    fn raw_value(&self, vector: &StyleVector, dim: &FeatureDim) -> f64 {
        match dim.component {
            Component::Alpha => vector.alpha(dim.zone).unwrap_or(StyleVector::alpha_fill()),
            Component::Gamma => vector
                .gamma(dim.zone)
                .unwrap_or(StyleVector::gamma_fill(self.odv_mode)),
        }
    }

    /// Densifies `vector` over the trained dimensions (absent zones take
    /// their fill values) and min-max scales each dimension to `[0, 1]`.
    /// Constant dimensions map to 0.5; out-of-range values clamp.
    pub fn densify_scaled(&self, vector: &StyleVector) -> Vec<f64> {
        self.dims
            .iter()
            .enumerate()
            .map(|(col, dim)| {
                let x = self.raw_value(vector, dim);
                let (min, max) = (self.mins[col], self.maxs[col]);
                if max == min {
                    0.5
                } else {
                    ((x - min) / (max - min)).clamp(0.0, 1.0)
                }
            })
            .collect()
    }
}

fn check_uniform_config(vectors: &[&StyleVector]) -> Result<()> {
    if let Some(first) = vectors.first() {
        if !vectors.iter().all(|v| first.config_matches(v)) {
            return Err(Error::MixedConfig);
        }
    }
    Ok(())
}

/// Fits per-dimension min/max over the training vectors, absent-zone
/// fill values included.
pub fn fit_scaling(train: &[StyleVector], selector: FeatureSelector) -> Result<ScalingParams> {
    let refs: Vec<&StyleVector> = train.iter().collect();
    fit_scaling_refs(&refs, selector)
}

fn fit_scaling_refs(train: &[&StyleVector], selector: FeatureSelector) -> Result<ScalingParams> {
    let first = train.first().ok_or(Error::EmptyTraining)?;
    check_uniform_config(train)?;
    let odv_mode = first.odv_mode();
    let zones: BTreeSet<u64> = train
        .iter()
        .flat_map(|v| v.features().keys().copied())
        .collect();
    let mut dims = Vec::new();
    for zone in zones {
        if selector != FeatureSelector::OdvOnly {
            dims.push(FeatureDim {
                zone,
                component: Component::Alpha,
            });
        }
        if selector != FeatureSelector::OdeOnly {
            dims.push(FeatureDim {
                zone,
                component: Component::Gamma,
            });
        }
    }
    let mut params = ScalingParams {
        mins: vec![f64::INFINITY; dims.len()],
        maxs: vec![f64::NEG_INFINITY; dims.len()],
        dims,
        odv_mode,
    };
    for vector in train {
        for (col, dim) in params.dims.iter().enumerate() {
            let x = params.raw_value(vector, dim);
            params.mins[col] = params.mins[col].min(x);
            params.maxs[col] = params.maxs[col].max(x);
        }
    }
    Ok(params)
}

/// Classifier training configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub c: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub selector: FeatureSelector,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            c: 1.0,
            tolerance: 1e-3,
            max_iterations: 100_000,
            seed: 42,
            selector: FeatureSelector::Full,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.c <= 0.0 || self.tolerance <= 0.0 || self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "classifier requires C > 0, tolerance > 0, max_iterations >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// A labeled style vector.
#[derive(Debug, Clone)]
pub struct Sample {
    pub id: String,
    pub label: String,
    pub vector: StyleVector,
}

impl Sample {
    pub fn new(id: impl Into<String>, label: impl Into<String>, vector: StyleVector) -> Self {
        Sample {
            id: id.into(),
            label: label.into(),
            vector,
        }
    }
}

/// Hyperplane separating one unordered label pair; positive decisions
/// vote for `pos` (the earlier label).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PairClassifier {
    pos: usize,
    neg: usize,
    weights: Vec<f64>,
    bias: f64,
}

/// Trained one-vs-one voting model over the candidate author set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    labels: Vec<String>,
    scheme: PartitionScheme,
    odv_mode: OdvMode,
    scaling: ScalingParams,
    pairs: Vec<PairClassifier>,
    config: TrainConfig,
}

fn pair_seed(seed: u64, pos: usize, neg: usize, label_count: usize) -> u64 {
    seed.wrapping_add(((pos * label_count + neg) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Trains one linear soft-margin classifier per unordered label pair on
/// the scaled vectors. Deterministic: identical samples, config and seed
/// produce an identical model.
pub fn train(samples: &[Sample], config: &TrainConfig) -> Result<ClassifierModel> {
    if samples.is_empty() {
        return Err(Error::EmptyTraining);
    }
    config.validate()?;
    let vectors: Vec<&StyleVector> = samples.iter().map(|s| &s.vector).collect();
    check_uniform_config(&vectors)?;
    let labels: Vec<String> = samples
        .iter()
        .map(|s| s.label.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if labels.len() < 2 {
        return Err(Error::SingleClass);
    }
    let scaling = fit_scaling_refs(&vectors, config.selector)?;
    let scaled: Vec<Vec<f64>> = vectors.iter().map(|v| scaling.densify_scaled(v)).collect();
    let label_index: Vec<usize> = samples
        .iter()
        .map(|s| labels.binary_search(&s.label).expect("label present"))
        .collect();

    let index_pairs: Vec<(usize, usize)> = (0..labels.len())
        .flat_map(|i| ((i + 1)..labels.len()).map(move |j| (i, j)))
        .collect();
    // independent subproblems; collected in pair order, so the parallel
    // result is identical to the serial one
    let pairs: Vec<PairClassifier> = index_pairs
        .par_iter()
        .map(|&(pos, neg)| {
            let mut x = Vec::new();
            let mut y = Vec::new();
            for (sample_idx, &label_idx) in label_index.iter().enumerate() {
                if label_idx == pos || label_idx == neg {
                    x.push(scaled[sample_idx].clone());
                    y.push(if label_idx == pos { 1.0 } else { -1.0 });
                }
            }
            let (weights, bias) = PairProblem {
                x: &x,
                y: &y,
                c: config.c,
                tolerance: config.tolerance,
                max_iterations: config.max_iterations,
                seed: pair_seed(config.seed, pos, neg, labels.len()),
            }
            .solve();
            PairClassifier {
                pos,
                neg,
                weights,
                bias,
            }
        })
        .collect();

    Ok(ClassifierModel {
        labels,
        scheme: *vectors[0].scheme(),
        odv_mode: vectors[0].odv_mode(),
        scaling,
        pairs,
        config: config.clone(),
    })
}

impl ClassifierModel {
    /// The ordered candidate author set.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn scheme(&self) -> &PartitionScheme {
        &self.scheme
    }

    pub fn odv_mode(&self) -> OdvMode {
        self.odv_mode
    }

    pub fn scaling(&self) -> &ScalingParams {
        &self.scaling
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    fn check_config(&self, vector: &StyleVector) -> Result<()> {
        if *vector.scheme() != self.scheme || vector.odv_mode() != self.odv_mode {
            return Err(Error::ConfigMismatch);
        }
        Ok(())
    }

    /// Majority vote across the pairwise decisions; ties break toward
    /// the earlier label in ascending order.
    pub fn predict(&self, vector: &StyleVector) -> Result<&str> {
        self.check_config(vector)?;
        let x = self.scaling.densify_scaled(vector);
        let mut votes = vec![0usize; self.labels.len()];
        for pair in &self.pairs {
            let decision = dot(&pair.weights, &x) + pair.bias;
            let winner = if decision >= 0.0 { pair.pos } else { pair.neg };
            votes[winner] += 1;
        }
        let mut best = 0;
        for (idx, &count) in votes.iter().enumerate() {
            if count > votes[best] {
                best = idx;
            }
        }
        Ok(&self.labels[best])
    }

    /// Scores every test sample; the confusion matrix keeps one row per
    /// distinct true label (out-of-set authors included) and one column
    /// per candidate.
    pub fn evaluate(&self, test: &[Sample]) -> Result<AttributionReport> {
        if test.is_empty() {
            return Err(Error::EmptyTestSet);
        }
        let mut predictions = Vec::with_capacity(test.len());
        for sample in test {
            let predicted = self.predict(&sample.vector)?.to_string();
            predictions.push(PredictionRecord {
                id: sample.id.clone(),
                true_label: sample.label.clone(),
                predicted,
            });
        }
        let true_labels: Vec<String> = test
            .iter()
            .map(|s| s.label.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut counts = vec![vec![0u32; self.labels.len()]; true_labels.len()];
        let mut correct = 0usize;
        for record in &predictions {
            let row = true_labels
                .binary_search(&record.true_label)
                .expect("label present");
            let col = self
                .labels
                .binary_search(&record.predicted)
                .expect("prediction is a candidate");
            counts[row][col] += 1;
            if record.true_label == record.predicted {
                correct += 1;
            }
        }
        Ok(AttributionReport {
            accuracy: correct as f64 / test.len() as f64,
            confusion: ConfusionMatrix {
                true_labels,
                attributed_labels: self.labels.clone(),
                counts,
            },
            predictions,
        })
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

/// One scored test sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub true_label: String,
    pub predicted: String,
}

/// Rows are true authors, columns attributed authors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_labels: Vec<String>,
    pub attributed_labels: Vec<String>,
    pub counts: Vec<Vec<u32>>,
}

impl ConfusionMatrix {
    /// Rows normalized to proportions; all-zero rows stay zero.
    pub fn row_proportions(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let total: u32 = row.iter().sum();
                row.iter()
                    .map(|&c| {
                        if total == 0 {
                            0.0
                        } else {
                            c as f64 / total as f64
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Attribution outcome over a test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionReport {
    pub predictions: Vec<PredictionRecord>,
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
}
