//! Gaussian transaction similarity (TSIM) and pairwise matrix assembly.
//!
//! For a pair of transactions every item contributes a numerator term α and a
//! denominator term β:
//!
//! | φ          | α                     | β |
//! |------------|-----------------------|---|
//! | Match      | ½·(1 + e^(−γ²))       | 1 |
//! | Mismatch   | −e^(−γ²)              | 1 |
//! | BothAbsent | 0                     | 0 |
//!
//! with γ = |Δ| / σ_k and σ_k the standard deviation of item k's counts over
//! the whole dataset. `S = Σα / Σβ` (or −1 when Σβ = 0) and
//! `TSIM = (S + 1) / (λ + 1)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline;
use crate::error::{Error, Result};
use crate::model::{Dataset, TransactionVector};
use crate::sequence::{Phi, SequenceEntry, SequenceVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdMode {
    /// Divisor n − 1.
    #[default]
    Sample,
    /// Divisor n.
    Population,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    #[default]
    Tsim,
    Jaccard,
    Cosine,
    Euclidean,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Tsim,
        Measure::Jaccard,
        Measure::Cosine,
        Measure::Euclidean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Tsim => "tsim",
            Measure::Jaccard => "jaccard",
            Measure::Cosine => "cosine",
            Measure::Euclidean => "euclidean",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown measure `{s}` (expected tsim, jaccard, cosine or euclidean)"
                ))
            })
    }
}

impl fmt::Display for StdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StdMode::Sample => "sample",
            StdMode::Population => "population",
        })
    }
}

impl FromStr for StdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sample" => Ok(StdMode::Sample),
            "population" => Ok(StdMode::Population),
            _ => Err(Error::InvalidConfig(format!(
                "unknown std mode `{s}` (expected sample or population)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityConfig {
    /// Bias constant in `(S + 1) / (λ + 1)`.
    pub lambda: f64,
    pub std_mode: StdMode,
    pub measure: Measure,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            std_mode: StdMode::Sample,
            measure: Measure::Tsim,
        }
    }
}

impl SimilarityConfig {
    pub fn with_measure(measure: Measure) -> Self {
        Self {
            measure,
            ..Self::default()
        }
    }

    /// λ must be finite and at least 1 so that TSIM stays inside [0, 1].
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "lambda must be a finite value >= 1, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Per-item standard deviation of counts over a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemStats {
    pub sigma: Vec<f64>,
    pub n: usize,
    pub std_mode: StdMode,
}

impl ItemStats {
    /// Gaussian factor e^(−(1/σ_k)²) paid by a unit-count mismatch on item `k`.
    pub fn unit_penalty(&self, k: usize) -> f64 {
        gaussian(1, self.sigma[k])
    }
}

pub fn compute_stats(ds: &Dataset, std_mode: StdMode) -> Result<ItemStats> {
    let n = ds.len();
    if n < 2 {
        return Err(Error::TooFewTransactions(n));
    }
    let sigma = (0..ds.catalog().len())
        .map(|k| {
            // Welford
            let mut mean = 0.0f64;
            let mut m2 = 0.0f64;
            for (i, c) in ds.column(k).enumerate() {
                let x = f64::from(c);
                let d = x - mean;
                mean += d / (i + 1) as f64;
                m2 += d * (x - mean);
            }
            let divisor = match std_mode {
                StdMode::Sample => (n - 1) as f64,
                StdMode::Population => n as f64,
            };
            (m2.max(0.0) / divisor).sqrt()
        })
        .collect();
    Ok(ItemStats { sigma, n, std_mode })
}

/// e^(−γ²) with γ = |Δ|/σ. Δ = 0 gives 1 for any σ; Δ ≠ 0 with σ = 0 gives 0.
pub fn gaussian(delta: i64, sigma: f64) -> f64 {
    if delta == 0 {
        1.0
    } else if sigma == 0.0 {
        0.0
    } else {
        let gamma = delta.unsigned_abs() as f64 / sigma;
        (-gamma * gamma).exp()
    }
}

pub fn alpha(entry: SequenceEntry, sigma_k: f64) -> f64 {
    match entry.phi {
        Phi::Match => 0.5 * (1.0 + gaussian(entry.delta, sigma_k)),
        Phi::Mismatch => -gaussian(entry.delta, sigma_k),
        Phi::BothAbsent => 0.0,
    }
}

pub fn beta(entry: SequenceEntry) -> f64 {
    match entry.phi {
        Phi::BothAbsent => 0.0,
        Phi::Match | Phi::Mismatch => 1.0,
    }
}

fn ratio<I: Iterator<Item = (SequenceEntry, f64)>>(entries: I) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (e, sigma) in entries {
        num += alpha(e, sigma);
        den += beta(e);
    }
    if den == 0.0 {
        // nothing present on either side
        -1.0
    } else {
        num / den
    }
}

/// `Σα / Σβ`, or −1 when every entry is `BothAbsent`.
pub fn s_alpha_beta(sv: &SequenceVector, stats: &ItemStats) -> f64 {
    assert_eq!(
        sv.len(),
        stats.sigma.len(),
        "stats built for another catalog"
    );
    ratio(sv.entries.iter().copied().zip(stats.sigma.iter().copied()))
}

/// TSIM of two vectors without materializing their sequence vector.
pub fn tsim_vectors(
    a: &TransactionVector,
    b: &TransactionVector,
    stats: &ItemStats,
    lambda: f64,
) -> f64 {
    assert_eq!(
        a.len(),
        stats.sigma.len(),
        "stats built for another catalog"
    );
    assert_eq!(
        b.len(),
        stats.sigma.len(),
        "stats built for another catalog"
    );
    let entries = a
        .counts()
        .iter()
        .zip(b.counts())
        .map(|(&ci, &cj)| SequenceEntry::new(ci, cj))
        .zip(stats.sigma.iter().copied());
    (ratio(entries) + 1.0) / (lambda + 1.0)
}

pub fn tsim(
    ds: &Dataset,
    stats: &ItemStats,
    cfg: &SimilarityConfig,
    tid_i: &str,
    tid_j: &str,
) -> Result<f64> {
    let sv = crate::sequence::sequence_vector(ds, tid_i, tid_j)?;
    Ok((s_alpha_beta(&sv, stats) + 1.0) / (cfg.lambda + 1.0))
}

/// Square, symmetric matrix of similarity values in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    ids: Vec<String>,
    values: Vec<f64>,
    measure: Measure,
}

const SYMMETRY_TOLERANCE: f64 = 1e-9;

impl SimilarityMatrix {
    /// Validates and wraps a row-major `n × n` value buffer.
    pub fn new(ids: Vec<String>, values: Vec<f64>, measure: Measure) -> Result<Self> {
        let n = ids.len();
        if values.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "{} values for {n} ids",
                values.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
            return Err(Error::InvalidMatrix(format!("duplicate id `{dup}`")));
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidMatrix(format!(
                        "value {v} at ({}, {}) outside [0, 1]",
                        ids[i], ids[j]
                    )));
                }
                if j > i && (v - values[j * n + i]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric at ({}, {}): {v} vs {}",
                        ids[i],
                        ids[j],
                        values[j * n + i]
                    )));
                }
            }
        }
        Ok(Self {
            ids,
            values,
            measure,
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ids.len() + j]
    }

    pub fn get_by_id(&self, a: &str, b: &str) -> Result<f64> {
        let pos = |t: &str| {
            self.ids
                .iter()
                .position(|id| id == t)
                .ok_or_else(|| Error::NotFound(t.to_owned()))
        };
        Ok(self.get(pos(a)?, pos(b)?))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.ids.len();
        &self.values[i * n..(i + 1) * n]
    }
}

enum Scorer {
    Tsim { stats: ItemStats, lambda: f64 },
    Jaccard,
    Cosine,
    Euclidean,
}

impl Scorer {
    fn new(ds: &Dataset, cfg: &SimilarityConfig) -> Result<Self> {
        cfg.validate()?;
        if ds.len() < 2 {
            return Err(Error::TooFewTransactions(ds.len()));
        }
        Ok(match cfg.measure {
            Measure::Tsim => Scorer::Tsim {
                stats: compute_stats(ds, cfg.std_mode)?,
                lambda: cfg.lambda,
            },
            Measure::Jaccard => Scorer::Jaccard,
            Measure::Cosine => Scorer::Cosine,
            Measure::Euclidean => Scorer::Euclidean,
        })
    }

    fn score(&self, a: &TransactionVector, b: &TransactionVector) -> f64 {
        match self {
            Scorer::Tsim { stats, lambda } => tsim_vectors(a, b, stats, *lambda),
            Scorer::Jaccard => baseline::jaccard(a, b),
            Scorer::Cosine => baseline::cosine(a, b),
            Scorer::Euclidean => baseline::euclidean_sim(a, b),
        }
    }
}

fn assemble(ds: &Dataset, measure: Measure, rows: Vec<Vec<f64>>) -> SimilarityMatrix {
    let n = ds.len();
    let mut values = vec![0.0; n * n];
    for (i, upper) in rows.into_iter().enumerate() {
        for (offset, v) in upper.into_iter().enumerate() {
            let j = i + offset;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    SimilarityMatrix {
        ids: ds.ids().map(str::to_owned).collect(),
        values,
        measure,
    }
}

/// All pairwise similarities, one evaluation per unordered pair, rows in parallel.
pub fn similarity_matrix(ds: &Dataset, cfg: &SimilarityConfig) -> Result<SimilarityMatrix> {
    let scorer = Scorer::new(ds, cfg)?;
    let txs = ds.transactions();
    let rows = (0..txs.len())
        .into_par_iter()
        .map(|i| txs[i..].iter().map(|b| scorer.score(&txs[i], b)).collect())
        .collect();
    Ok(assemble(ds, cfg.measure, rows))
}

/// Single-threaded variant of [`similarity_matrix`]; produces identical output.
pub fn similarity_matrix_serial(ds: &Dataset, cfg: &SimilarityConfig) -> Result<SimilarityMatrix> {
    let scorer = Scorer::new(ds, cfg)?;
    let txs = ds.transactions();
    let rows = (0..txs.len())
        .map(|i| txs[i..].iter().map(|b| scorer.score(&txs[i], b)).collect())
        .collect();
    Ok(assemble(ds, cfg.measure, rows))
}
