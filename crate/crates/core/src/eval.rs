//! Pattern-support features and clustering quality.
//!
//! Each series becomes a row of forgetting-weighted supports over a shared
//! pattern vocabulary, rows are clustered with Lloyd's k-means, and the
//! partition is scored with the silhouette coefficient and the
//! Calinski-Harabasz index.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::MiningConfig;
use crate::error::{OpfError, Result};
use crate::miner::{mine_dataset, series_label, MiningResult};
use crate::pattern::Pattern;
use crate::scf::match_support;
use crate::series::TimeSeries;
use crate::weights::ForgettingWeights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeatureValue {
    /// Forgetting-weighted support.
    #[default]
    Support,
    /// 1 when the pattern occurs in the series at all, else 0.
    Presence,
}

/// One row per series, one column per vocabulary pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub ids: Vec<String>,
    /// Sorted by length, then ranks.
    pub vocabulary: Vec<Pattern>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn new(ids: Vec<String>, vocabulary: Vec<Pattern>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if ids.len() != rows.len() {
            return Err(OpfError::input(format!(
                "{} row ids for {} rows",
                ids.len(),
                rows.len()
            )));
        }
        if let Some((i, r)) = rows
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != vocabulary.len())
        {
            return Err(OpfError::input(format!(
                "row {} has {} columns, vocabulary has {}",
                i + 1,
                r.len(),
                vocabulary.len()
            )));
        }
        Ok(FeatureMatrix {
            ids,
            vocabulary,
            rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.vocabulary.len()
    }

    /// Column-wise z-scores; constant columns become 0.
    pub fn standardize(&mut self) {
        let n = self.rows.len() as f64;
        if n == 0.0 {
            return;
        }
        for c in 0..self.n_cols() {
            let mean = self.rows.iter().map(|r| r[c]).sum::<f64>() / n;
            let var = self.rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            for r in self.rows.iter_mut() {
                r[c] = if sd > 0.0 { (r[c] - mean) / sd } else { 0.0 };
            }
        }
    }
}

fn vocab_key(p: &Pattern) -> (usize, &[u32]) {
    (p.len(), p.ranks())
}

/// Mines every series and tabulates supports over the union of all
/// per-series frequent patterns. A column pattern not frequent in a series
/// gets that series' full-scan support (0 when it never occurs).
pub fn extract_features(
    dataset: &[TimeSeries],
    config: &MiningConfig,
    value: FeatureValue,
) -> Result<FeatureMatrix> {
    let mined = mine_dataset(dataset, config)?;
    let mut vocab: BTreeSet<(usize, Pattern)> = BTreeSet::new();
    for res in &mined {
        for fp in res.patterns() {
            vocab.insert((fp.pattern.len(), fp.pattern.clone()));
        }
    }
    let vocabulary: Vec<Pattern> = vocab.into_iter().map(|(_, p)| p).collect();
    debug_assert!(vocabulary
        .windows(2)
        .all(|w| vocab_key(&w[0]) < vocab_key(&w[1])));

    let rows = feature_rows(dataset, &mined, &vocabulary, value)?;
    let ids = dataset
        .iter()
        .enumerate()
        .map(|(i, t)| series_label(i, t))
        .collect();
    FeatureMatrix::new(ids, vocabulary, rows)
}

fn feature_row(
    t: &TimeSeries,
    mined: &MiningResult,
    vocabulary: &[Pattern],
    value: FeatureValue,
) -> Result<Vec<f64>> {
    let weights = ForgettingWeights::new(t.len(), mined.k)?;
    vocabulary
        .iter()
        .map(|p| {
            let (support, occurs) = match mined.find(p) {
                Some(fp) => (fp.support, !fp.occurrences.is_empty()),
                None => {
                    let (occ, sup) = match_support(t, p, &weights)?;
                    (sup, !occ.is_empty())
                }
            };
            Ok(match value {
                FeatureValue::Support => support,
                FeatureValue::Presence => f64::from(u8::from(occurs)),
            })
        })
        .collect()
}

#[cfg(feature = "parallel")]
fn feature_rows(
    dataset: &[TimeSeries],
    mined: &[MiningResult],
    vocabulary: &[Pattern],
    value: FeatureValue,
) -> Result<Vec<Vec<f64>>> {
    use rayon::prelude::*;
    dataset
        .par_iter()
        .zip(mined.par_iter())
        .map(|(t, m)| feature_row(t, m, vocabulary, value))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn feature_rows(
    dataset: &[TimeSeries],
    mined: &[MiningResult],
    vocabulary: &[Pattern],
    value: FeatureValue,
) -> Result<Vec<Vec<f64>>> {
    dataset
        .iter()
        .zip(mined)
        .map(|(t, m)| feature_row(t, m, vocabulary, value))
        .collect()
}

pub const KMEANS_MAX_ITER: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    /// 0-based cluster index per row.
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    /// Empty clusters reseeded to the farthest point.
    pub repairs: usize,
    /// Within-cluster squared scatter after each update step.
    pub objective_history: Vec<f64>,
}

impl KMeansFit {
    pub fn objective(&self) -> f64 {
        self.objective_history.last().copied().unwrap_or(0.0)
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

fn check_rows(x: &[Vec<f64>]) -> Result<usize> {
    let d = x
        .first()
        .map(Vec::len)
        .ok_or_else(|| OpfError::input("no rows"))?;
    if x.iter().any(|r| r.len() != d) {
        return Err(OpfError::input("rows have different lengths"));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(OpfError::input("non-finite feature value"));
    }
    Ok(d)
}

/// Lloyd's k-means with squared Euclidean distance.
///
/// Initial centroids are `k` distinct rows drawn uniformly with a ChaCha8
/// generator seeded by `seed`. Ties between centroids go to the lower index.
/// Stops when assignments no longer change or after [`KMEANS_MAX_ITER`].
pub fn kmeans(x: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansFit> {
    check_rows(x)?;
    let n = x.len();
    if k < 2 || k > n {
        return Err(OpfError::config(format!(
            "K must satisfy 2 <= K <= {} (rows), got {}",
            n, k
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<Vec<f64>> = rand::seq::index::sample(&mut rng, n, k)
        .into_iter()
        .map(|i| x[i].clone())
        .collect();

    let mut assignments = vec![usize::MAX; n];
    let mut history = Vec::new();
    let mut repairs = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < KMEANS_MAX_ITER {
        iterations += 1;
        let next: Vec<usize> = x.iter().map(|row| nearest(row, &centroids)).collect();
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;

        let d = x[0].len();
        let mut sums = vec![vec![0.0; d]; k];
        let mut counts = vec![0usize; k];
        for (row, &c) in x.iter().zip(&assignments) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(row) {
                *s += v;
            }
        }
        let mut empty = Vec::new();
        for c in 0..k {
            if counts[c] == 0 {
                empty.push(c);
            } else {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        if !empty.is_empty() {
            let mut by_distance: Vec<(usize, f64)> = x
                .iter()
                .zip(&assignments)
                .enumerate()
                .map(|(i, (row, &c))| (i, sq_dist(row, &centroids[c])))
                .collect();
            by_distance.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            for (c, (i, _)) in empty.into_iter().zip(by_distance) {
                centroids[c] = x[i].clone();
                repairs += 1;
            }
        }
        history.push(within_scatter(x, &assignments, &centroids));
    }

    Ok(KMeansFit {
        assignments,
        centroids,
        iterations,
        converged,
        repairs,
        objective_history: history,
    })
}

fn nearest(row: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(row, centroid);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

fn within_scatter(x: &[Vec<f64>], assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    x.iter()
        .zip(assignments)
        .map(|(row, &c)| sq_dist(row, &centroids[c]))
        .sum()
}

/// Members of each non-empty cluster, keyed by label.
fn clusters(assignments: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in assignments.iter().enumerate() {
        out.entry(c).or_default().push(i);
    }
    out
}

fn check_labels(x: &[Vec<f64>], assignments: &[usize]) -> Result<BTreeMap<usize, Vec<usize>>> {
    check_rows(x)?;
    if x.len() != assignments.len() {
        return Err(OpfError::input(format!(
            "{} labels for {} rows",
            assignments.len(),
            x.len()
        )));
    }
    let groups = clusters(assignments);
    if groups.len() < 2 {
        return Err(OpfError::UndefinedIndex(
            "at least two non-empty clusters are required".into(),
        ));
    }
    Ok(groups)
}

/// Mean silhouette over all rows, with Euclidean distances.
///
/// For row `i`, `a` is its mean distance to the other members of its cluster
/// and `b` the smallest mean distance to the members of another cluster;
/// `s_i = (b - a) / max(a, b)`. Rows alone in their cluster score 0.
pub fn silhouette(x: &[Vec<f64>], assignments: &[usize]) -> Result<f64> {
    let groups = check_labels(x, assignments)?;
    let n = x.len();
    let mut total = 0.0;
    for i in 0..n {
        let own = assignments[i];
        let members = &groups[&own];
        if members.len() == 1 {
            continue;
        }
        let a = members
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| dist(&x[i], &x[j]))
            .sum::<f64>()
            / (members.len() - 1) as f64;
        let b = groups
            .iter()
            .filter(|(&label, _)| label != own)
            .map(|(_, other)| {
                other.iter().map(|&j| dist(&x[i], &x[j])).sum::<f64>() / other.len() as f64
            })
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / n as f64)
}

/// Calinski-Harabasz index `[Tr(B)(N-K)] / [Tr(W)(K-1)]`, where `K` counts
/// non-empty clusters. Returns `f64::INFINITY` when the within-cluster
/// scatter is zero.
pub fn calinski_harabasz(x: &[Vec<f64>], assignments: &[usize]) -> Result<f64> {
    let groups = check_labels(x, assignments)?;
    let n = x.len();
    let k = groups.len();
    let d = x[0].len();

    let mean = centroid(x, 0..n, d);
    let mut between = 0.0;
    let mut within = 0.0;
    for members in groups.values() {
        let c = centroid(x, members.iter().copied(), d);
        between += members.len() as f64 * sq_dist(&c, &mean);
        within += members.iter().map(|&i| sq_dist(&x[i], &c)).sum::<f64>();
    }
    if within == 0.0 {
        log::warn!("within-cluster scatter is zero; Calinski-Harabasz index is unbounded");
        return Ok(f64::INFINITY);
    }
    Ok(between * (n - k) as f64 / (within * (k - 1) as f64))
}

fn centroid(x: &[Vec<f64>], rows: impl Iterator<Item = usize>, d: usize) -> Vec<f64> {
    let mut sum = vec![0.0; d];
    let mut count = 0usize;
    for i in rows {
        count += 1;
        for (s, v) in sum.iter_mut().zip(&x[i]) {
            *s += v;
        }
    }
    sum.into_iter().map(|s| s / count as f64).collect()
}

/// k-means fit plus both quality indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub k: usize,
    pub seed: u64,
    pub fit: KMeansFit,
    /// `None` when fewer than two clusters are non-empty.
    pub sc: Option<f64>,
    pub chi: Option<f64>,
}

pub fn cluster_and_score(x: &[Vec<f64>], k: usize, seed: u64) -> Result<ClusteringResult> {
    let fit = kmeans(x, k, seed)?;
    let sc = undefined_as_none(silhouette(x, &fit.assignments))?;
    let chi = undefined_as_none(calinski_harabasz(x, &fit.assignments))?;
    Ok(ClusteringResult {
        k,
        seed,
        fit,
        sc,
        chi,
    })
}

fn undefined_as_none(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(OpfError::UndefinedIndex(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
