//! Natural-frequency zone partition: mapping NF values to zone indices
//! under the linear, radix and logarithm schemes, and grouping a token
//! sequence's occurrences by zone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dict::NfDictionary;
use crate::error::{Error, Result};
use crate::text::TokenSequence;

/// Zone partition rule.
///
/// Zone indices grow monotonically with NF; NF 0 maps to zone 0 under
/// every scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "partition", rename_all = "lowercase")]
pub enum PartitionScheme {
    /// Equal-width zones: zone `k` covers NF values `[kL, (k+1)L)`.
    Linear {
        #[serde(rename = "L")]
        l: u64,
    },
    /// The first `R` zones have NF width `L`; later levels widen by
    /// factors of `R`.
    Radix {
        #[serde(rename = "L")]
        l: u64,
        #[serde(rename = "R")]
        r: u64,
    },
    /// Zone `k` covers NF values `[r^k, r^(k+1))`.
    Logarithm { r: f64 },
}

// Radix zone indices stay far below u64::MAX for any R up to 2^32.
const MAX_RADIX: u64 = 1 << 32;
// Cap on precomputed logarithm boundaries; indices past the table are
// reached by continuing the same recurrence.
const LOG_TABLE_MAX: usize = 4_000_000;

impl PartitionScheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PartitionScheme::Linear { l } if l >= 1 => Ok(()),
            PartitionScheme::Linear { .. } => {
                Err(Error::InvalidScheme("linear requires L >= 1".into()))
            }
            PartitionScheme::Radix { l, r } if l >= 1 && r > 1 && r <= MAX_RADIX => Ok(()),
            PartitionScheme::Radix { .. } => Err(Error::InvalidScheme(
                "radix requires L >= 1 and integer 1 < R <= 2^32".into(),
            )),
            PartitionScheme::Logarithm { r } if r.is_finite() && r > 1.0 => Ok(()),
            PartitionScheme::Logarithm { .. } => {
                Err(Error::InvalidScheme("logarithm requires real r > 1".into()))
            }
        }
    }

    /// Canonical short parameter text, e.g. `linear(L=10)`.
    pub fn describe(&self) -> String {
        match *self {
            PartitionScheme::Linear { l } => format!("linear(L={l})"),
            PartitionScheme::Radix { l, r } => format!("radix(L={l},R={r})"),
            PartitionScheme::Logarithm { r } => format!("logarithm(r={r})"),
        }
    }
}

/// Double-double value: `hi + lo` with `|lo| <= ulp(hi)/2`. Keeps the
/// running power of `r` exact enough that integer boundary comparisons
/// are unambiguous.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn mul(self, factor: f64) -> Dd {
        let p = self.hi * factor;
        // exact residual of hi*factor via fused multiply-add
        let e = self.hi.mul_add(factor, -p);
        let lo = self.lo.mul_add(factor, e);
        let s = p + lo;
        let err = lo - (s - p);
        Dd { hi: s, lo: err }
    }

    /// `self <= f`, exact for `f < 2^53`.
    fn le_u64(self, f: u64) -> bool {
        let fv = f as f64;
        self.hi < fv || (self.hi == fv && self.lo <= 0.0)
    }
}

fn radix_index(base: u64, radix: u64) -> u64 {
    if base < radix {
        return base;
    }
    // largest exponent with radix^exponent <= base, by integer arithmetic
    let mut power: u128 = radix as u128;
    let mut exponent: u64 = 1;
    while power * radix as u128 <= base as u128 {
        power *= radix as u128;
        exponent += 1;
    }
    (radix - 1) * exponent + base / power as u64
}

/// Largest `k` with `r^k <= f`, by iterated extended-precision
/// multiplication. `f <= 1` maps to zone 0.
fn log_index_iterative(f: u64, r: f64) -> u64 {
    if f <= 1 {
        return 0;
    }
    let mut power = Dd::ONE;
    let mut k = 0u64;
    loop {
        let next = power.mul(r);
        if next.le_u64(f) {
            power = next;
            k += 1;
        } else {
            return k;
        }
    }
}

/// Maps one NF value to its zone index.
pub fn zone_index(scheme: &PartitionScheme, f: u64) -> u64 {
    match *scheme {
        PartitionScheme::Linear { l } => f / l,
        PartitionScheme::Radix { l, r } => radix_index(f / l, r),
        PartitionScheme::Logarithm { r } => log_index_iterative(f, r),
    }
}

/// Count of zones needed to cover NF values up to `f_max`: the maximal
/// zone index plus one.
pub fn zone_count(scheme: &PartitionScheme, f_max: u64) -> u64 {
    zone_index(scheme, f_max) + 1
}

/// Reusable zone-index evaluator. For the logarithm scheme the zone
/// boundaries `r^k` are precomputed once, so repeated lookups cost a
/// binary search instead of re-deriving the power sequence.
#[derive(Debug, Clone)]
pub struct ZoneIndexer {
    scheme: PartitionScheme,
    log_powers: Vec<Dd>,
}

impl ZoneIndexer {
    /// Builds an indexer covering NF values up to `max_f`. Larger values
    /// still index correctly (the recurrence continues past the table).
    pub fn new(scheme: &PartitionScheme, max_f: u64) -> Result<Self> {
        scheme.validate()?;
        let mut log_powers = Vec::new();
        if let PartitionScheme::Logarithm { r } = *scheme {
            log_powers.push(Dd::ONE);
            // extend until the first boundary beyond max_f
            while log_powers.last().unwrap().le_u64(max_f) && log_powers.len() < LOG_TABLE_MAX {
                let next = log_powers.last().unwrap().mul(r);
                log_powers.push(next);
            }
        }
        Ok(ZoneIndexer {
            scheme: *scheme,
            log_powers,
        })
    }

    pub fn scheme(&self) -> &PartitionScheme {
        &self.scheme
    }

    pub fn zone_index(&self, f: u64) -> u64 {
        match self.scheme {
            PartitionScheme::Linear { l } => f / l,
            PartitionScheme::Radix { l, r } => radix_index(f / l, r),
            PartitionScheme::Logarithm { r } => {
                if f <= 1 {
                    return 0;
                }
                // leading run of boundaries <= f
                let covered = self.log_powers.partition_point(|p| p.le_u64(f));
                if covered == 0 {
                    return 0;
                }
                if covered < self.log_powers.len() {
                    return (covered - 1) as u64;
                }
                // past the table: continue the recurrence
                let mut power = *self.log_powers.last().unwrap();
                let mut k = (self.log_powers.len() - 1) as u64;
                loop {
                    let next = power.mul(r);
                    if next.le_u64(f) {
                        power = next;
                        k += 1;
                    } else {
                        return k;
                    }
                }
            }
        }
    }
}

/// Occurrence positions of one zone's words within a text.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneOccurrences {
    zone: u64,
    positions: Vec<f64>,
}

impl ZoneOccurrences {
    /// `positions` must be strictly increasing, each in `[0, 1)`.
    pub fn new(zone: u64, positions: Vec<f64>) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(positions.iter().all(|&p| (0.0..1.0).contains(&p)));
        ZoneOccurrences { zone, positions }
    }

    pub fn empty(zone: u64) -> Self {
        ZoneOccurrences {
            zone,
            positions: Vec::new(),
        }
    }

    pub fn zone(&self) -> u64 {
        self.zone
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Occurrence count `n_k`.
    pub fn count(&self) -> usize {
        self.positions.len()
    }
}

/// Groups every occurrence of `seq` by zone. Zones without occurrences
/// are absent from the map; the position multisets of all present zones
/// partition the sequence's position list.
pub fn partition(
    seq: &TokenSequence,
    dict: &NfDictionary,
    scheme: &PartitionScheme,
) -> Result<BTreeMap<u64, ZoneOccurrences>> {
    let max_f = seq
        .tokens()
        .iter()
        .map(|t| dict.lookup(t))
        .max()
        .unwrap_or(0);
    let indexer = ZoneIndexer::new(scheme, max_f)?;
    Ok(partition_with(&indexer, seq, dict))
}

/// [`partition`] with a prebuilt indexer; used when many texts share one
/// scheme.
pub fn partition_with(
    indexer: &ZoneIndexer,
    seq: &TokenSequence,
    dict: &NfDictionary,
) -> BTreeMap<u64, ZoneOccurrences> {
    let mut zones: BTreeMap<u64, ZoneOccurrences> = BTreeMap::new();
    for (token, &position) in seq.tokens().iter().zip(seq.positions()) {
        let k = indexer.zone_index(dict.lookup(token));
        zones
            .entry(k)
            .or_insert_with(|| ZoneOccurrences::empty(k))
            .positions
            .push(position);
    }
    zones
}
