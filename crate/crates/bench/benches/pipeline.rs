use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;
use std::sync::Arc;

use nfzwda::synthetic::{BandSpec, SyntheticCorpus};
use nfzwda::{
    style_vector_with, tokenize, BasicPipeline, DeltaProfile, OdvMode, PartitionScheme,
    PipelineConfig, TrainConfig, ZoneIndexer,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus() -> SyntheticCorpus {
    SyntheticCorpus::new(&[
        BandSpec {
            words: 200,
            nf_low: 100,
            nf_high: 9_900,
        },
        BandSpec {
            words: 200,
            nf_low: 100_100,
            nf_high: 109_900,
        },
        BandSpec {
            words: 200,
            nf_low: 200_100,
            nf_high: 209_900,
        },
    ])
}

fn bench_zone_index(c: &mut Criterion) {
    let mut group = c.benchmark_group("zone_index");
    let frequencies: Vec<u64> = (0..1000u64).map(|i| i * 3_001).collect();
    for scheme in [
        PartitionScheme::Linear { l: 10 },
        PartitionScheme::Radix { l: 10, r: 100_000 },
        PartitionScheme::Logarithm { r: 1.0001 },
    ] {
        let indexer = ZoneIndexer::new(&scheme, 3_100_000).unwrap();
        group.bench_function(scheme.describe(), |b| {
            b.iter(|| {
                let mut sum = 0u64;
                for &f in &frequencies {
                    sum = sum.wrapping_add(indexer.zone_index(black_box(f)));
                }
                sum
            })
        });
    }
    group.finish();
}

fn bench_style_vector(c: &mut Criterion) {
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let text = corpus.text_from_mixture(&[(0, 0.5), (1, 0.3), (2, 0.2)], 1000, &mut rng);
    let seq = tokenize(&text).unwrap();
    let dict = corpus.dictionary();
    let scheme = PartitionScheme::Logarithm { r: 1.0001 };
    let indexer = ZoneIndexer::new(&scheme, dict.f_max()).unwrap();
    c.bench_function("style_vector_1000_words", |b| {
        b.iter(|| style_vector_with(&indexer, black_box(&seq), dict, OdvMode::Variance))
    });
}

fn bench_train(c: &mut Criterion) {
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut docs = Vec::new();
    for band in 0..3usize {
        docs.extend(corpus.band_documents(&format!("author{band}"), band, 10, 400, &mut rng));
    }
    let dict = Arc::new(corpus.dictionary().clone());
    let config = PipelineConfig {
        scheme: PartitionScheme::Linear { l: 1000 },
        odv_mode: OdvMode::Variance,
        word_length: 400,
        classifier: TrainConfig::default(),
    };
    c.bench_function("train_3x10_docs", |b| {
        b.iter_batched(
            || (docs.clone(), dict.clone(), config.clone()),
            |(docs, dict, config)| BasicPipeline::train(&docs, dict, config).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_delta_score(c: &mut Criterion) {
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut train = Vec::new();
    for band in 0..3usize {
        for _ in 0..10 {
            let seq = tokenize(&corpus.text_from_band(band, 400, &mut rng)).unwrap();
            train.push((seq, format!("author{band}")));
        }
    }
    let profile = DeltaProfile::build(&train, corpus.dictionary(), 150).unwrap();
    let test = tokenize(&corpus.text_from_band(1, 400, &mut rng)).unwrap();
    c.bench_function("delta_rank_150_words", |b| {
        b.iter(|| profile.rank(black_box(&test)))
    });
}

criterion_group!(
    benches,
    bench_zone_index,
    bench_style_vector,
    bench_train,
    bench_delta_score
);
criterion_main!(benches);
