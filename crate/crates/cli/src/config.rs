//! Experiment configuration: one TOML file describing data roots,
//! pipeline parameters and protocol sweeps. Command-line flags override
//! file values.

use std::fs;
use std::path::{Path, PathBuf};

use nfzwda::{FeatureSelector, OdvMode, PartitionScheme};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Partition scheme selector; parameters live alongside in
/// [`PipelineSection`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionKind {
    Linear,
    Radix,
    #[serde(alias = "log")]
    Logarithm,
}

impl std::str::FromStr for PartitionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(PartitionKind::Linear),
            "radix" => Ok(PartitionKind::Radix),
            "log" | "logarithm" => Ok(PartitionKind::Logarithm),
            other => Err(format!(
                "unknown partition {other:?} (expected linear, radix or log)"
            )),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataSection {
    pub train_root: Option<PathBuf>,
    pub test_root: Option<PathBuf>,
    pub dict: Option<PathBuf>,
    /// Keep only the N longest documents per author before any protocol.
    pub longest_chapters: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineSection {
    pub partition: PartitionKind,
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "R")]
    pub radix: u64,
    #[serde(rename = "r")]
    pub log_base: f64,
    pub odv_mode: OdvMode,
    pub word_lengths: Vec<usize>,
    pub feature_sets: Vec<FeatureSelector>,
}

impl Default for PipelineSection {
    fn default() -> Self {
        PipelineSection {
            partition: PartitionKind::Linear,
            l: 10,
            radix: 100_000,
            log_base: 1.0001,
            odv_mode: OdvMode::Variance,
            word_lengths: vec![1000],
            feature_sets: vec![FeatureSelector::Full],
        }
    }
}

impl PipelineSection {
    pub fn scheme(&self) -> PartitionScheme {
        match self.partition {
            PartitionKind::Linear => PartitionScheme::Linear { l: self.l },
            PartitionKind::Radix => PartitionScheme::Radix {
                l: self.l,
                r: self.radix,
            },
            PartitionKind::Logarithm => PartitionScheme::Logarithm { r: self.log_base },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifierSection {
    pub c: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ClassifierSection {
    fn default() -> Self {
        ClassifierSection {
            c: 1.0,
            tolerance: 1e-3,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeltaSection {
    pub n_words: Vec<usize>,
    pub top_k: usize,
    pub threshold: Option<f64>,
}

impl Default for DeltaSection {
    fn default() -> Self {
        DeltaSection {
            n_words: vec![150, 700],
            top_k: 1,
            threshold: None,
        }
    }
}

/// Random author-subset sweep: for each entry of `counts`, sample that
/// many authors `repetitions` times (single repetition value broadcasts).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuthorCountSweep {
    pub counts: Vec<usize>,
    pub repetitions: Vec<usize>,
}

impl AuthorCountSweep {
    pub fn repetitions_for(&self, index: usize) -> usize {
        if self.repetitions.len() == 1 {
            self.repetitions[0]
        } else {
            self.repetitions.get(index).copied().unwrap_or(1)
        }
    }
}

/// Grid over per-author training and testing document counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainTestSweep {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepsSection {
    pub author_counts: Option<AuthorCountSweep>,
    pub train_test_counts: Option<TrainTestSweep>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenSection {
    pub in_root: PathBuf,
    pub out_root: PathBuf,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_open_word_length")]
    pub word_length: usize,
}

fn default_theta() -> f64 {
    0.5
}

fn default_open_word_length() -> usize {
    400
}

/// The whole experiment description; echoed into every output header.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub data: DataSection,
    pub pipeline: PipelineSection,
    pub classifier: ClassifierSection,
    pub delta: Option<DeltaSection>,
    pub sweeps: SweepsSection,
    pub open: Option<OpenSection>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 42,
            out_dir: PathBuf::from("results"),
            data: DataSection::default(),
            pipeline: PipelineSection::default(),
            classifier: ClassifierSection::default(),
            delta: None,
            sweeps: SweepsSection::default(),
            open: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let raw = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: ExperimentConfig = toml::from_str(&raw)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.pipeline.word_lengths.iter().any(|&w| w == 0) {
            return Err(CliError::Usage("word_lengths must all be >= 1".into()));
        }
        if let Some(delta) = &self.delta {
            if delta.n_words.iter().any(|&n| n == 0) {
                return Err(CliError::Usage("delta n_words must all be >= 1".into()));
            }
        }
        if let Some(open) = &self.open {
            if !(open.theta > 0.0 && open.theta <= 1.0) {
                return Err(CliError::Usage("open theta must be in (0, 1]".into()));
            }
            if open.word_length == 0 {
                return Err(CliError::Usage("open word_length must be >= 1".into()));
            }
        }
        Ok(())
    }

    /// Training classifier settings with the experiment seed and feature
    /// selector applied.
    pub fn train_config(&self, selector: FeatureSelector) -> nfzwda::TrainConfig {
        nfzwda::TrainConfig {
            c: self.classifier.c,
            tolerance: self.classifier.tolerance,
            max_iterations: self.classifier.max_iterations,
            seed: self.seed,
            selector,
        }
    }
}
