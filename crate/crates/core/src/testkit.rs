//! Brute-force reference evaluators for the test suites (feature
//! `testkit`). Everything here recomputes the defining formulas from
//! first principles and stays independent of the library's
//! implementation paths: positions, grouping, means and deviations are
//! all re-derived naively.

use std::collections::BTreeMap;

use crate::zone::PartitionScheme;

/// Reference features of one zone.
#[derive(Debug, Clone)]
pub struct ZoneFeatures {
    pub distances: Vec<f64>,
    pub alpha: f64,
    pub gamma_variance: f64,
    pub gamma_rms: f64,
}

fn naive_zone(scheme: &PartitionScheme, f: u64) -> u64 {
    match *scheme {
        PartitionScheme::Linear { l } => f / l,
        PartitionScheme::Radix { l, r } => {
            let b = f / l;
            if b < r {
                b
            } else {
                // float estimate of the exponent, corrected by integer checks
                let mut e = (b as f64).log(r as f64).floor() as u32;
                while r.checked_pow(e + 1).is_some_and(|p| p <= b) {
                    e += 1;
                }
                while e > 0 && r.pow(e) > b {
                    e -= 1;
                }
                (r - 1) * e as u64 + b / r.pow(e)
            }
        }
        PartitionScheme::Logarithm { r } => {
            if f <= 1 {
                return 0;
            }
            let mut k = ((f as f64).ln() / r.ln()).floor() as i64;
            while r.powi(k as i32 + 1) <= f as f64 {
                k += 1;
            }
            while k > 0 && r.powi(k as i32) > f as f64 {
                k -= 1;
            }
            k as u64
        }
    }
}

/// Recomputes per-zone occurrence distances, ODE and both ODV variants
/// directly from the token list.
pub fn style_features(
    tokens: &[String],
    nf_of: &dyn Fn(&str) -> u64,
    scheme: &PartitionScheme,
) -> BTreeMap<u64, ZoneFeatures> {
    let n = tokens.len() as f64;
    let mut zone_positions: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for (i, token) in tokens.iter().enumerate() {
        let zone = naive_zone(scheme, nf_of(token));
        zone_positions.entry(zone).or_default().push(i as f64 / n);
    }
    zone_positions
        .into_iter()
        .map(|(zone, positions)| {
            let mut distances = Vec::with_capacity(positions.len() + 1);
            for (i, &p) in positions.iter().enumerate() {
                let previous = if i == 0 { 0.0 } else { positions[i - 1] };
                distances.push((p - previous).abs());
            }
            distances.push(1.0 - positions.last().copied().unwrap_or(0.0));
            let count = distances.len() as f64;
            // the mean of the distances, not the closed form
            let alpha: f64 = distances.iter().sum::<f64>() / count;
            let variance = distances.iter().map(|d| (d - alpha) * (d - alpha)).sum::<f64>() / count;
            let mean_square = distances.iter().map(|d| d * d).sum::<f64>() / count;
            let features = ZoneFeatures {
                distances,
                alpha,
                gamma_variance: variance.sqrt() / alpha,
                gamma_rms: mean_square.sqrt() / alpha,
            };
            (zone, features)
        })
        .collect()
}

/// Recomputes a Delta measure from raw counts: relative frequencies,
/// population norm statistics over all training texts, per-author mean
/// z-scores, and the mean absolute z-difference to the test text.
pub fn delta_score(
    train: &[(Vec<String>, String)],
    words: &[String],
    test: &[String],
    author: &str,
) -> f64 {
    let freq = |tokens: &[String], word: &str| {
        tokens.iter().filter(|t| t.as_str() == word).count() as f64 / tokens.len() as f64
    };
    let texts = train.len() as f64;
    let mut total = 0.0;
    for word in words {
        let values: Vec<f64> = train.iter().map(|(tokens, _)| freq(tokens, word)).collect();
        let mean = values.iter().sum::<f64>() / texts;
        let std = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / texts).sqrt();
        let z = |x: f64| if std == 0.0 { 0.0 } else { (x - mean) / std };
        let author_z: Vec<f64> = train
            .iter()
            .zip(&values)
            .filter(|((_, label), _)| label == author)
            .map(|(_, &v)| z(v))
            .collect();
        let signature = author_z.iter().sum::<f64>() / author_z.len() as f64;
        total += (signature - z(freq(test, word))).abs();
    }
    if words.is_empty() {
        0.0
    } else {
        total / words.len() as f64
    }
}
