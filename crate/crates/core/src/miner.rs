//! The level-wise mining loop and its instrumentation.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::config::{CandidateGen, MiningConfig, PruneMode, SupportMethod};
use crate::error::{OpfError, Result};
use crate::fusion::{
    allowed_suffix_groups, build_plist, extend_with, fuse_unchecked, suffix_ranks, GroupLabel,
};
use crate::pattern::Pattern;
use crate::scf::{
    check_prefix_prune, check_suffix_count_prune, check_suffix_prune, match_support, scf_apply,
    scf_extend, windows_scanned, PatternRecord,
};
use crate::series::TimeSeries;
use crate::weights::{ForgettingWeights, OccurrenceList};

/// Work counters for one mining run.
///
/// * `candidates`: super-patterns whose support was evaluated.
/// * `fusions`: ordered `(p, q)` pairs submitted to the suffix/prefix join test.
/// * `support_calcs`: elementary probes; prefix positions visited by the
///   incremental method, windows compared by the full scan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Metrics {
    pub candidates: u64,
    pub fusions: u64,
    pub support_calcs: u64,
    pub wall_time: Duration,
}

impl Metrics {
    /// Counters only, for determinism comparisons.
    pub fn counters(&self) -> (u64, u64, u64) {
        (self.candidates, self.fusions, self.support_calcs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequentPattern {
    pub pattern: Pattern,
    pub group: GroupLabel,
    pub support: f64,
    pub occurrences: OccurrenceList,
}

/// Events recorded when [`MiningConfig::trace`] is set.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    /// A level starts; `plist` is the processing order of its patterns.
    Level {
        length: usize,
        plist: Vec<Pattern>,
    },
    PrefixPruned {
        pattern: Pattern,
        remaining: usize,
    },
    SuffixPruned {
        pattern: Pattern,
        sufsup: f64,
        remaining: usize,
    },
    Candidate {
        pattern: Pattern,
        prefix: Pattern,
        suffix: Option<Pattern>,
        support: f64,
        frequent: bool,
    },
}

#[derive(Debug, Clone)]
pub struct MiningResult {
    pub series_id: Option<String>,
    pub n: usize,
    pub k: f64,
    pub config: MiningConfig,
    /// `levels[0]` holds the length-2 patterns; each level is sorted by ranks.
    pub levels: Vec<Vec<FrequentPattern>>,
    pub metrics: Metrics,
    pub trace: Vec<TraceEvent>,
}

impl MiningResult {
    pub fn patterns(&self) -> impl Iterator<Item = &FrequentPattern> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Frequent patterns of length `m`.
    pub fn level(&self, m: usize) -> &[FrequentPattern] {
        m.checked_sub(2)
            .and_then(|i| self.levels.get(i))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn find(&self, p: &Pattern) -> Option<&FrequentPattern> {
        self.level(p.len()).iter().find(|fp| &fp.pattern == p)
    }

    pub fn max_pattern_len(&self) -> usize {
        self.levels.len() + 1
    }

    /// Patterns with their supports, sorted by length then ranks.
    pub fn support_map(&self) -> Vec<(Pattern, f64)> {
        self.patterns()
            .map(|fp| (fp.pattern.clone(), fp.support))
            .collect()
    }
}

/// Length-2 frequent patterns from one scan: strict ascents are `(1,2)`,
/// strict descents `(2,1)`; equal neighbours are neither.
pub fn mine_level2(t: &TimeSeries, f: &ForgettingWeights, minsup: f64) -> Vec<PatternRecord> {
    let mut up = Vec::new();
    let mut down = Vec::new();
    let (mut up_sup, mut down_sup) = (0.0, 0.0);
    for j in 2..=t.len() {
        let (a, b) = (t.value(j - 1), t.value(j));
        if a < b {
            up.push(j);
            up_sup += f.at(j);
        } else if a > b {
            down.push(j);
            down_sup += f.at(j);
        }
    }
    let mut level = Vec::with_capacity(2);
    if up_sup >= minsup {
        level.push(PatternRecord::new(
            Pattern::from_permutation(vec![1, 2]),
            OccurrenceList::from_sorted(2, up),
            up_sup,
        ));
    }
    if down_sup >= minsup {
        level.push(PatternRecord::new(
            Pattern::from_permutation(vec![2, 1]),
            OccurrenceList::from_sorted(2, down),
            down_sup,
        ));
    }
    level
}

/// Mines every frequent pattern of `t` under `config`.
pub fn mine(t: &TimeSeries, config: &MiningConfig) -> Result<MiningResult> {
    config.validate()?;
    let start = Instant::now();
    let n = t.len();
    let k = config.k.resolve(n)?;
    let weights = ForgettingWeights::new(n, k)?;

    let mut run = LevelRunner {
        t,
        f: &weights,
        config,
        metrics: Metrics::default(),
        trace: Vec::new(),
    };

    let mut levels = Vec::new();
    let mut level = mine_level2(t, &weights, config.minsup);
    let mut m = 2;
    while !level.is_empty() {
        levels.push(snapshot(&level));
        if config.max_length.is_some_and(|max| m >= max) || m >= n {
            break;
        }
        level = run.next_level(level)?;
        m += 1;
    }

    let mut metrics = run.metrics;
    let trace = run.trace;
    metrics.wall_time = start.elapsed();
    Ok(MiningResult {
        series_id: t.id().map(str::to_owned),
        n,
        k,
        config: config.clone(),
        levels,
        metrics,
        trace,
    })
}

fn snapshot(level: &[PatternRecord]) -> Vec<FrequentPattern> {
    let mut out: Vec<FrequentPattern> = level
        .iter()
        .map(|r| FrequentPattern {
            pattern: r.pattern.clone(),
            group: r.group,
            support: r.support,
            occurrences: r.occ.clone(),
        })
        .collect();
    out.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    out
}

struct LevelRunner<'a> {
    t: &'a TimeSeries,
    f: &'a ForgettingWeights,
    config: &'a MiningConfig,
    metrics: Metrics,
    trace: Vec<TraceEvent>,
}

impl LevelRunner<'_> {
    fn next_level(&mut self, level: Vec<PatternRecord>) -> Result<Vec<PatternRecord>> {
        let m = level[0].len();
        let mut plist = build_plist(level, self.config.priority);
        for rec in plist.iter_mut() {
            rec.reset_level_state();
        }
        if self.config.trace {
            self.trace.push(TraceEvent::Level {
                length: m,
                plist: plist.iter().map(|r| r.pattern.clone()).collect(),
            });
        }
        match self.config.candidate_gen {
            CandidateGen::Enumeration => self.enumerate_level(&mut plist),
            CandidateGen::GpFusion | CandidateGen::PlainFusion => self.fuse_level(&mut plist),
        }
    }

    fn fuse_level(&mut self, plist: &mut [PatternRecord]) -> Result<Vec<PatternRecord>> {
        let m = plist[0].len();
        let grouped = self.config.candidate_gen == CandidateGen::GpFusion;
        let mut by_group: HashMap<GroupLabel, Vec<usize>> = HashMap::new();
        for (idx, rec) in plist.iter().enumerate() {
            by_group.entry(rec.group).or_default().push(idx);
        }

        let mut next = Vec::new();
        for pi in 0..plist.len() {
            if self.prefix_gate(&mut plist[pi]) {
                continue;
            }
            let qlist: Vec<usize> = if grouped {
                let mut q: Vec<usize> = allowed_suffix_groups(plist[pi].group, m)
                    .iter()
                    .filter_map(|g| by_group.get(g))
                    .flatten()
                    .copied()
                    .collect();
                q.sort_unstable();
                q
            } else {
                (0..plist.len()).collect()
            };

            for qi in qlist {
                if self.prefix_gate(&mut plist[pi]) {
                    break;
                }
                if self.suffix_gate(&mut plist[qi]) {
                    continue;
                }
                self.metrics.fusions += 1;
                if !plist[pi].joins(&plist[qi]) {
                    continue;
                }
                let outcome = fuse_unchecked(plist[pi].pattern.ranks(), plist[qi].pattern.ranks());
                self.metrics.candidates += outcome.len() as u64;
                let products = match self.config.support_method {
                    SupportMethod::Scf => {
                        let out = scf_apply(plist, pi, qi, outcome, self.t, self.f)?;
                        self.metrics.support_calcs += out.probes;
                        out.records
                    }
                    SupportMethod::NaiveMatch => {
                        let mut recs = Vec::with_capacity(2);
                        for w in outcome.products() {
                            recs.push(self.full_scan(w.clone())?);
                        }
                        recs
                    }
                };
                let prefix = plist[pi].pattern.clone();
                let suffix = plist[qi].pattern.clone();
                for rec in products {
                    self.keep_if_frequent(rec, &prefix, Some(&suffix), &mut next);
                }
            }
        }
        Ok(next)
    }

    fn enumerate_level(&mut self, plist: &mut [PatternRecord]) -> Result<Vec<PatternRecord>> {
        let m = plist[0].len();
        let index: HashMap<Vec<u32>, usize> = plist
            .iter()
            .enumerate()
            .map(|(i, r)| (r.pattern.ranks().to_vec(), i))
            .collect();

        let mut next = Vec::new();
        for pi in 0..plist.len() {
            if self.prefix_gate(&mut plist[pi]) {
                continue;
            }
            for v in 1..=(m as u32 + 1) {
                if self.prefix_gate(&mut plist[pi]) {
                    break;
                }
                let ranks = extend_with(plist[pi].pattern.ranks(), v);
                let owner = index.get(&suffix_ranks(&ranks)).copied();
                if let Some(qi) = owner {
                    if self.suffix_gate(&mut plist[qi]) {
                        continue;
                    }
                }
                self.metrics.candidates += 1;
                let w = Pattern::from_permutation(ranks);
                let rec = match self.config.support_method {
                    SupportMethod::Scf => {
                        let (occ, sup, probes) = scf_extend(plist, pi, v, owner, self.t, self.f)?;
                        self.metrics.support_calcs += probes;
                        PatternRecord::new(w, occ, sup)
                    }
                    SupportMethod::NaiveMatch => self.full_scan(w)?,
                };
                let prefix = plist[pi].pattern.clone();
                let suffix = owner.map(|qi| plist[qi].pattern.clone());
                self.keep_if_frequent(rec, &prefix, suffix.as_ref(), &mut next);
            }
        }
        Ok(next)
    }

    fn full_scan(&mut self, w: Pattern) -> Result<PatternRecord> {
        self.metrics.support_calcs += windows_scanned(self.t.len(), w.len());
        let (occ, sup) = match_support(self.t, &w, self.f)?;
        Ok(PatternRecord::new(w, occ, sup))
    }

    fn keep_if_frequent(
        &mut self,
        rec: PatternRecord,
        prefix: &Pattern,
        suffix: Option<&Pattern>,
        next: &mut Vec<PatternRecord>,
    ) {
        let frequent = rec.support >= self.config.minsup;
        if self.config.trace {
            self.trace.push(TraceEvent::Candidate {
                pattern: rec.pattern.clone(),
                prefix: prefix.clone(),
                suffix: suffix.cloned(),
                support: rec.support,
                frequent,
            });
        }
        // infrequent occurrence lists are dropped here
        if frequent {
            next.push(rec);
        }
    }

    /// True when `p` may no longer be used as a prefix operand this level.
    fn prefix_gate(&mut self, p: &mut PatternRecord) -> bool {
        if !self.config.prune.prunes_prefix() {
            return false;
        }
        let was = p.prefix_pruned;
        let pruned = check_prefix_prune(p, self.config.minsup);
        if pruned && !was && self.config.trace {
            self.trace.push(TraceEvent::PrefixPruned {
                pattern: p.pattern.clone(),
                remaining: p.pre.len(),
            });
        }
        pruned
    }

    /// True when `q` may no longer be used as a suffix operand this level.
    fn suffix_gate(&mut self, q: &mut PatternRecord) -> bool {
        let minsup = self.config.minsup;
        let was = q.suffix_pruned;
        let pruned = match self.config.prune {
            PruneMode::Both | PruneMode::SuffixOnly => check_suffix_prune(q, minsup),
            PruneMode::SameSuffix => check_suffix_count_prune(q, minsup),
            PruneMode::PrefixOnly | PruneMode::None => false,
        };
        if pruned && !was && self.config.trace {
            self.trace.push(TraceEvent::SuffixPruned {
                pattern: q.pattern.clone(),
                sufsup: q.sufsup,
                remaining: q.suf.len(),
            });
        }
        pruned
    }
}

/// How [`mine_dataset_with`] schedules independent series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Series mined concurrently on the rayon pool. Runs sequentially when the
    /// crate is built without the `parallel` feature.
    #[default]
    Parallel,
}

/// Mines each series independently. Results keep the input order; with a
/// coefficient-form `k`, each series resolves its own `k = c / n_i`.
pub fn mine_dataset(series: &[TimeSeries], config: &MiningConfig) -> Result<Vec<MiningResult>> {
    mine_dataset_with(series, config, Execution::default())
}

pub fn mine_dataset_with(
    series: &[TimeSeries],
    config: &MiningConfig,
    execution: Execution,
) -> Result<Vec<MiningResult>> {
    if series.is_empty() {
        return Err(OpfError::input("dataset contains no series"));
    }
    config.validate()?;
    match execution {
        Execution::Sequential => series
            .iter()
            .enumerate()
            .map(|(i, t)| mine_tagged(i, t, config))
            .collect(),
        Execution::Parallel => mine_parallel(series, config),
    }
}

#[cfg(feature = "parallel")]
fn mine_parallel(series: &[TimeSeries], config: &MiningConfig) -> Result<Vec<MiningResult>> {
    use rayon::prelude::*;
    series
        .par_iter()
        .enumerate()
        .map(|(i, t)| mine_tagged(i, t, config))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn mine_parallel(series: &[TimeSeries], config: &MiningConfig) -> Result<Vec<MiningResult>> {
    mine_dataset_with(series, config, Execution::Sequential)
}

fn mine_tagged(index: usize, t: &TimeSeries, config: &MiningConfig) -> Result<MiningResult> {
    mine(t, config).map_err(|e| OpfError::Series {
        id: series_label(index, t),
        source: Box::new(e),
    })
}

pub(crate) fn series_label(index: usize, t: &TimeSeries) -> String {
    t.id()
        .map(str::to_owned)
        .unwrap_or_else(|| format!("#{}", index + 1))
}
