//! Subcommand definitions and dispatch.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use nfzwda::{
    open_attribute, segment, tokenize, BasicPipeline, ClassifierModel, DeltaProfile, Document,
    FeatureRecord, FeatureSelector, NfDictionary, OdvMode, PipelineConfig, SegmentMode,
    ZoneIndexer,
};

use crate::config::{ExperimentConfig, PartitionKind};
use crate::harness::{
    self, load_author_corpus, run_closed_experiment, run_open_experiment, OpenRow,
};
use crate::{emit, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "nfzwda",
    version,
    about = "Stylometry and authorship attribution by zoned word distribution analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count words over a corpus and write the frequency dictionary TSV
    BuildDict(BuildDictArgs),
    /// Extract style vectors as JSON lines
    Featurize(FeaturizeArgs),
    /// Train a closed-set classifier and save the model JSON
    Train(TrainArgs),
    /// Attribute test documents with a trained or freshly trained model
    Attribute(AttributeArgs),
    /// Open-set attribution of long texts with confidence thresholding
    OpenAttribute(OpenAttributeArgs),
    /// Burrows Delta baseline attribution
    Delta(DeltaArgs),
    /// Run the configured experiment protocols and emit CSV/JSON results
    Experiment(ExperimentArgs),
}

fn parse_partition(s: &str) -> Result<PartitionKind, String> {
    s.parse()
}

fn parse_odv_mode(s: &str) -> Result<OdvMode, String> {
    match s {
        "variance" => Ok(OdvMode::Variance),
        "rms" => Ok(OdvMode::Rms),
        other => Err(format!("unknown odv mode {other:?} (variance or rms)")),
    }
}

fn parse_selector(s: &str) -> Result<FeatureSelector, String> {
    match s {
        "full" => Ok(FeatureSelector::Full),
        "ode" | "ode_only" => Ok(FeatureSelector::OdeOnly),
        "odv" | "odv_only" => Ok(FeatureSelector::OdvOnly),
        other => Err(format!(
            "unknown feature set {other:?} (full, ode_only or odv_only)"
        )),
    }
}

fn parse_segment_mode(s: &str) -> Result<SegmentMode, String> {
    match s {
        "front" => Ok(SegmentMode::Front),
        "chunks" => Ok(SegmentMode::Chunks),
        other => Err(format!("unknown segment mode {other:?} (front or chunks)")),
    }
}

/// Partition and featurization flags shared by the analysis commands.
/// Values fall back to `--config`, then to the documented defaults.
#[derive(Debug, Args)]
pub struct PipelineFlags {
    /// Configuration file supplying defaults; flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Partition scheme: linear, radix or log
    #[arg(long, value_parser = parse_partition)]
    pub partition: Option<PartitionKind>,
    /// Zone width L (linear and radix)
    #[arg(long = "L")]
    pub l: Option<u64>,
    /// Base radix R (radix)
    #[arg(long = "R")]
    pub radix: Option<u64>,
    /// Logarithm base r
    #[arg(long = "r")]
    pub log_base: Option<f64>,
    /// ODV statistic: variance or rms
    #[arg(long, value_parser = parse_odv_mode)]
    pub odv_mode: Option<OdvMode>,
    /// Sample length in words
    #[arg(long)]
    pub word_length: Option<usize>,
}

impl PipelineFlags {
    fn base_config(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(partition) = self.partition {
            cfg.pipeline.partition = partition;
        }
        if let Some(l) = self.l {
            cfg.pipeline.l = l;
        }
        if let Some(r) = self.radix {
            cfg.pipeline.radix = r;
        }
        if let Some(r) = self.log_base {
            cfg.pipeline.log_base = r;
        }
        if let Some(mode) = self.odv_mode {
            cfg.pipeline.odv_mode = mode;
        }
        if let Some(word_length) = self.word_length {
            cfg.pipeline.word_lengths = vec![word_length.max(1)];
            if word_length == 0 {
                return Err(CliError::Usage("--word-length must be >= 1".into()));
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ClassifierFlags {
    /// Soft-margin penalty C
    #[arg(long)]
    pub c: Option<f64>,
    /// KKT tolerance
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Maximum optimization sweeps per label pair
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Seed for all randomized steps
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ClassifierFlags {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(c) = self.c {
            cfg.classifier.c = c;
        }
        if let Some(t) = self.tolerance {
            cfg.classifier.tolerance = t;
        }
        if let Some(m) = self.max_iterations {
            cfg.classifier.max_iterations = m;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildDictArgs {
    /// Corpus root: `<root>/<author>/<doc>.txt`
    #[arg(long)]
    pub corpus: PathBuf,
    /// Output dictionary TSV
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Dictionary TSV (or data.dict from --config)
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineFlags,
    /// front (default) or chunks
    #[arg(long, value_parser = parse_segment_mode)]
    pub segment_mode: Option<SegmentMode>,
    /// Output JSONL path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training corpus root
    #[arg(long)]
    pub train: PathBuf,
    /// Dictionary TSV (built from the training corpus when omitted)
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineFlags,
    #[command(flatten)]
    pub classifier: ClassifierFlags,
    /// Output model JSON
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AttributeArgs {
    /// Training corpus root (alternative to --model)
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Trained model JSON (alternative to --train; requires --dict)
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Test corpus root
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineFlags,
    #[command(flatten)]
    pub classifier: ClassifierFlags,
    /// Write the full attribution report JSON here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OpenAttributeArgs {
    /// Candidate-set training corpus root (alternative to --model)
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Trained model JSON (alternative to --train; requires --dict)
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Root of long texts to test, one file per text
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineFlags,
    #[command(flatten)]
    pub classifier: ClassifierFlags,
    /// Confidence threshold in (0, 1]
    #[arg(long)]
    pub theta: Option<f64>,
    /// Write one confidence report JSON per line here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Dictionary TSV (built from the training corpus when omitted)
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineFlags,
    /// Number of most frequent words
    #[arg(long)]
    pub n_words: Option<usize>,
    /// Count a test as correct when the true author ranks in the top k
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Delta threshold for open-set style accept/reject reporting
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Save the Delta profile JSON here
    #[arg(long)]
    pub save_profile: Option<PathBuf>,
    /// Write the result JSON here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Experiment configuration TOML
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub train: Option<PathBuf>,
    #[arg(long)]
    pub test: Option<PathBuf>,
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[arg(long, value_parser = parse_partition)]
    pub partition: Option<PartitionKind>,
    #[arg(long = "L")]
    pub l: Option<u64>,
    #[arg(long = "R")]
    pub radix: Option<u64>,
    #[arg(long = "r")]
    pub log_base: Option<f64>,
    #[arg(long, value_parser = parse_odv_mode)]
    pub odv_mode: Option<OdvMode>,
    /// Comma-separated sample lengths, e.g. 400,1000
    #[arg(long, value_delimiter = ',')]
    pub word_lengths: Option<Vec<usize>>,
    /// Comma-separated feature sets, e.g. full,ode_only,odv_only
    #[arg(long, value_delimiter = ',', value_parser = parse_selector)]
    pub feature_sets: Option<Vec<FeatureSelector>>,
    /// Keep only the N longest documents per author
    #[arg(long)]
    pub longest_chapters: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::BuildDict(args) => build_dict(args),
        Command::Featurize(args) => featurize(args),
        Command::Train(args) => train(args),
        Command::Attribute(args) => attribute(args),
        Command::OpenAttribute(args) => open_attribute_cmd(args),
        Command::Delta(args) => delta(args),
        Command::Experiment(args) => experiment(args),
    }
}

fn resolve_dict(
    flag: &Option<PathBuf>,
    cfg: &ExperimentConfig,
    fallback_docs: Option<&[Document]>,
) -> Result<Arc<NfDictionary>, CliError> {
    if let Some(path) = flag.as_ref().or(cfg.data.dict.as_ref()) {
        return Ok(Arc::new(NfDictionary::load(path)?));
    }
    match fallback_docs {
        Some(docs) => Ok(Arc::new(NfDictionary::build(docs)?)),
        None => Err(CliError::Usage(
            "a dictionary is required: pass --dict or set data.dict in --config".into(),
        )),
    }
}

fn word_length_of(cfg: &ExperimentConfig) -> usize {
    cfg.pipeline.word_lengths.first().copied().unwrap_or(1000)
}

fn build_dict(args: BuildDictArgs) -> Result<(), CliError> {
    let corpus = load_author_corpus(&args.corpus)?;
    let docs = corpus_docs(&corpus);
    let dict = NfDictionary::build(&docs)?;
    dict.save(&args.out)?;
    println!(
        "wrote {} words (f_max {}) to {}",
        dict.len(),
        dict.f_max(),
        args.out.display()
    );
    Ok(())
}

fn corpus_docs(corpus: &harness::AuthorCorpus) -> Vec<Document> {
    corpus
        .authors
        .iter()
        .flat_map(|a| corpus.docs[a].iter().cloned())
        .collect()
}

fn featurize(args: FeaturizeArgs) -> Result<(), CliError> {
    let cfg = args.pipeline.base_config()?;
    let dict = resolve_dict(&args.dict, &cfg, None)?;
    let scheme = cfg.pipeline.scheme();
    let odv_mode = cfg.pipeline.odv_mode;
    let word_length = word_length_of(&cfg);
    let mode = args.segment_mode.unwrap_or(SegmentMode::Front);
    let corpus = load_author_corpus(&args.corpus)?;
    let docs = corpus_docs(&corpus);

    let indexer = ZoneIndexer::new(&scheme, dict.f_max())?;
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(fs::File::create(path).map_err(|e| {
            CliError::Data(format!("cannot create {}: {e}", path.display()))
        })?),
        None => Box::new(std::io::stdout()),
    };
    let mut written = 0usize;
    for doc in &docs {
        let seq = match tokenize(&doc.text) {
            Ok(seq) => seq,
            Err(e) => {
                eprintln!("warning: skipping {}: {e}", doc.source_id);
                continue;
            }
        };
        let samples = segment(&seq, word_length, mode);
        let multi = samples.len() > 1;
        for (idx, sample) in samples.iter().enumerate() {
            let id = if multi {
                format!("{}#{idx}", doc.source_id)
            } else {
                doc.source_id.clone()
            };
            let vector = nfzwda::style_vector_with(&indexer, sample, &dict, odv_mode);
            let record = FeatureRecord::new(id, doc.author_label.clone(), &vector);
            let line = serde_json::to_string(&record)
                .map_err(|e| CliError::Data(format!("serialization failed: {e}")))?;
            writeln!(sink, "{line}").map_err(|e| CliError::Data(format!("write failed: {e}")))?;
            written += 1;
        }
    }
    sink.flush()
        .map_err(|e| CliError::Data(format!("write failed: {e}")))?;
    if let Some(path) = &args.out {
        eprintln!("wrote {written} records to {}", path.display());
    }
    Ok(())
}

fn pipeline_config(cfg: &ExperimentConfig) -> PipelineConfig {
    PipelineConfig {
        scheme: cfg.pipeline.scheme(),
        odv_mode: cfg.pipeline.odv_mode,
        word_length: word_length_of(cfg),
        classifier: cfg.train_config(FeatureSelector::Full),
    }
}

fn train(args: TrainArgs) -> Result<(), CliError> {
    let mut cfg = args.pipeline.base_config()?;
    args.classifier.apply(&mut cfg);
    let corpus = load_author_corpus(&args.train)?;
    let docs = corpus_docs(&corpus);
    let dict = resolve_dict(&args.dict, &cfg, Some(&docs))?;
    let pipeline = BasicPipeline::train(&docs, dict, pipeline_config(&cfg))?;
    pipeline.model().save(&args.out)?;
    println!(
        "trained on {} samples over {} authors; model written to {}",
        docs.len(),
        pipeline.labels().len(),
        args.out.display()
    );
    Ok(())
}

fn build_pipeline(
    train_root: &Option<PathBuf>,
    model_path: &Option<PathBuf>,
    dict_flag: &Option<PathBuf>,
    cfg: &ExperimentConfig,
) -> Result<BasicPipeline, CliError> {
    match (train_root, model_path) {
        (Some(root), None) => {
            let corpus = load_author_corpus(root)?;
            let docs = corpus_docs(&corpus);
            let dict = resolve_dict(dict_flag, cfg, Some(&docs))?;
            Ok(BasicPipeline::train(&docs, dict, pipeline_config(cfg))?)
        }
        (None, Some(path)) => {
            let model = ClassifierModel::load(path)?;
            let dict = resolve_dict(dict_flag, cfg, None)?;
            Ok(BasicPipeline::from_model(
                model,
                dict,
                word_length_of(cfg),
            )?)
        }
        _ => Err(CliError::Usage(
            "pass exactly one of --train and --model".into(),
        )),
    }
}

fn attribute(args: AttributeArgs) -> Result<(), CliError> {
    let mut cfg = args.pipeline.base_config()?;
    args.classifier.apply(&mut cfg);
    let pipeline = build_pipeline(&args.train, &args.model, &args.dict, &cfg)?;
    let test_docs = corpus_docs(&load_author_corpus(&args.test)?);
    if test_docs.is_empty() {
        return Err(CliError::Data("test corpus has no documents".into()));
    }
    let report = pipeline.attribute(&test_docs)?;
    for record in &report.predictions {
        println!("{}\t{}\t{}", record.id, record.predicted, record.true_label);
    }
    println!(
        "accuracy: {:.4} ({}/{})",
        report.accuracy,
        report
            .predictions
            .iter()
            .filter(|p| p.predicted == p.true_label)
            .count(),
        report.predictions.len()
    );
    if let Some(path) = &args.out {
        let json = serde_json::to_vec_pretty(&report)
            .map_err(|e| CliError::Data(format!("serialization failed: {e}")))?;
        fs::write(path, json)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn open_attribute_cmd(args: OpenAttributeArgs) -> Result<(), CliError> {
    let mut cfg = args.pipeline.base_config()?;
    args.classifier.apply(&mut cfg);
    if args.pipeline.word_length.is_none() && args.pipeline.config.is_none() {
        // open attribution defaults to shorter samples
        cfg.pipeline.word_lengths = vec![400];
    }
    let theta = args.theta.unwrap_or(0.5);
    let pipeline = build_pipeline(&args.train, &args.model, &args.dict, &cfg)?;
    let word_length = word_length_of(&cfg);
    let candidates: Vec<String> = pipeline.labels().to_vec();
    let long_texts = corpus_docs(&load_author_corpus(&args.test)?);
    if long_texts.is_empty() {
        return Err(CliError::Data("test corpus has no documents".into()));
    }

    let mut sink: Option<fs::File> = match &args.out {
        Some(path) => Some(fs::File::create(path).map_err(|e| {
            CliError::Data(format!("cannot create {}: {e}", path.display()))
        })?),
        None => None,
    };
    let mut rows = Vec::new();
    for doc in &long_texts {
        let report = open_attribute(&pipeline, doc, word_length, theta)?;
        let decision = report.decision.clone().unwrap_or_default();
        println!(
            "{}\t{}\tmax_conf={:.4}\tsegments={}",
            report.subset_id,
            if decision.is_empty() {
                "Reject"
            } else {
                decision.as_str()
            },
            report.max_confidence,
            report.segments
        );
        if let Some(file) = sink.as_mut() {
            let line = serde_json::to_string(&report)
                .map_err(|e| CliError::Data(format!("serialization failed: {e}")))?;
            writeln!(file, "{line}")
                .map_err(|e| CliError::Data(format!("write failed: {e}")))?;
        }
        let true_author = doc.author_label.clone().unwrap_or_default();
        let in_set = candidates.contains(&true_author);
        let correct = if in_set {
            decision == true_author
        } else {
            decision.is_empty()
        };
        rows.push(OpenRow {
            method: "nfz".into(),
            subset_id: report.subset_id,
            true_author,
            in_set,
            segments: report.segments,
            threshold: theta,
            decision,
            statistic: report.max_confidence,
            correct,
        });
    }
    let summary = harness::summarize_open("nfz", &rows);
    println!(
        "in-set accepted: {}; out-of-set rejected: {}; overall accuracy: {:.4}",
        summary.accepted_rate, summary.rejected_rate, summary.overall_accuracy
    );
    Ok(())
}

fn delta(args: DeltaArgs) -> Result<(), CliError> {
    let cfg = args.pipeline.base_config()?;
    let word_length = word_length_of(&cfg);
    let n_words = args.n_words.unwrap_or(150);
    if n_words == 0 {
        return Err(CliError::Usage("--n-words must be >= 1".into()));
    }
    let top_k = args.top_k.unwrap_or(1).max(1);
    let train_docs = corpus_docs(&load_author_corpus(&args.train)?);
    let test_docs = corpus_docs(&load_author_corpus(&args.test)?);
    if test_docs.is_empty() {
        return Err(CliError::Data("test corpus has no documents".into()));
    }
    let dict = resolve_dict(&args.dict, &cfg, Some(&train_docs))?;
    let train_seqs = harness::front_sequences(&train_docs, word_length)?;
    let profile = DeltaProfile::build(&train_seqs, &dict, n_words)?;
    if let Some(path) = &args.save_profile {
        profile.save(path)?;
    }

    #[derive(serde::Serialize)]
    struct DeltaRecord {
        source_id: String,
        true_author: String,
        attributed: String,
        score: f64,
        top_k_correct: bool,
        accepted: Option<bool>,
    }

    let mut records = Vec::new();
    let mut correct = 0usize;
    for doc in &test_docs {
        let seq = tokenize(&doc.text)?;
        let front = segment(&seq, word_length, SegmentMode::Front)
            .into_iter()
            .next()
            .expect("front segmentation yields one sample");
        let rank = profile.rank(&front);
        let (attributed, score) = rank[0].clone();
        let true_author = doc.author_label.clone().unwrap_or_default();
        let top_k_correct = rank.iter().take(top_k).any(|(a, _)| *a == true_author);
        if top_k_correct {
            correct += 1;
        }
        let accepted = args.threshold.map(|t| score <= t);
        println!(
            "{}\t{}\tscore={:.4}\t{}",
            doc.source_id, attributed, score, true_author
        );
        records.push(DeltaRecord {
            source_id: doc.source_id.clone(),
            true_author,
            attributed,
            score,
            top_k_correct,
            accepted,
        });
    }
    let accuracy = correct as f64 / test_docs.len() as f64;
    println!(
        "delta accuracy (N={n_words}, top_k={top_k}): {:.4} ({}/{})",
        accuracy,
        correct,
        test_docs.len()
    );
    if let Some(path) = &args.out {
        let body = serde_json::json!({
            "n_words": n_words,
            "top_k": top_k,
            "word_length": word_length,
            "threshold": args.threshold,
            "accuracy": accuracy,
            "rows": records,
        });
        let json = serde_json::to_vec_pretty(&body)
            .map_err(|e| CliError::Data(format!("serialization failed: {e}")))?;
        fs::write(path, json)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &args.out_dir {
        cfg.out_dir = dir.clone();
    }
    if let Some(root) = &args.train {
        cfg.data.train_root = Some(root.clone());
    }
    if let Some(root) = &args.test {
        cfg.data.test_root = Some(root.clone());
    }
    if let Some(path) = &args.dict {
        cfg.data.dict = Some(path.clone());
    }
    if let Some(partition) = args.partition {
        cfg.pipeline.partition = partition;
    }
    if let Some(l) = args.l {
        cfg.pipeline.l = l;
    }
    if let Some(r) = args.radix {
        cfg.pipeline.radix = r;
    }
    if let Some(r) = args.log_base {
        cfg.pipeline.log_base = r;
    }
    if let Some(mode) = args.odv_mode {
        cfg.pipeline.odv_mode = mode;
    }
    if let Some(lengths) = &args.word_lengths {
        cfg.pipeline.word_lengths = lengths.clone();
    }
    if let Some(sets) = &args.feature_sets {
        cfg.pipeline.feature_sets = sets.clone();
    }
    if let Some(n) = args.longest_chapters {
        cfg.data.longest_chapters = Some(n);
    }
    if let Some(theta) = args.theta {
        if let Some(open) = cfg.open.as_mut() {
            open.theta = theta;
        }
    }

    let run_closed = cfg.data.test_root.is_some();
    let run_open = cfg.open.is_some();
    if !run_closed && !run_open {
        return Err(CliError::Usage(
            "config drives nothing: set data.test_root and/or an [open] section".into(),
        ));
    }
    if run_closed {
        let results = run_closed_experiment(&cfg)?;
        let files = emit::emit_closed(&results, &cfg.out_dir)?;
        println!(
            "closed: {} rows -> {}",
            results.rows.len(),
            files
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    if run_open {
        let results = run_open_experiment(&cfg)?;
        let files = emit::emit_open(&results, &cfg.out_dir)?;
        println!(
            "open: {} rows -> {}",
            results.rows.len(),
            files
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        for summary in &results.summaries {
            println!(
                "{}: accepted {} in-set; rejected {} out-of-set; overall accuracy {:.4}",
                summary.method,
                summary.accepted_rate,
                summary.rejected_rate,
                summary.overall_accuracy
            );
        }
    }
    Ok(())
}
