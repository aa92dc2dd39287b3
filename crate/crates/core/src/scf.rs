//! Support calculation with forgetting.
//!
//! Occurrences of a length-`m+1` super-pattern are derived from those of its
//! two length-`m` sub-patterns: `j` is an occurrence of `p ⊕ q` exactly when
//! `j - 1` ends an occurrence of `p` and `j` ends an occurrence of `q` (plus a
//! boundary comparison when the fusion has two products).
//!
//! Every tie-free window belongs to exactly one pattern of its length, so a
//! matched pair `(i, j)` can never contribute to any other super-pattern.
//! Matched positions are therefore removed from `pre_p` and `suf_q`, and the
//! weight of `j` is removed from `sufsup_q`. What remains bounds the support of
//! every super-pattern still to be built from `p` as prefix or `q` as suffix,
//! which is what the pruning checks rely on.

use crate::error::{OpfError, Result};
use crate::fusion::{fuse, group_of, prefix_ranks, suffix_ranks, FusionOutcome, GroupLabel};
use crate::oracle::oracle_occurrences;
use crate::pattern::Pattern;
use crate::series::TimeSeries;
use crate::weights::{fsup, ForgettingWeights, OccurrenceList};

/// A consumable copy of an occurrence list.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PositionSet {
    ends: Vec<usize>,
    alive: Vec<bool>,
    live: usize,
}

impl PositionSet {
    pub fn from_occurrences(occ: &OccurrenceList) -> Self {
        let ends = occ.ends().to_vec();
        let live = ends.len();
        PositionSet {
            alive: vec![true; live],
            ends,
            live,
        }
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn contains(&self, j: usize) -> bool {
        self.slot(j).is_some()
    }

    /// Removes `j`; returns whether it was present.
    pub fn remove(&mut self, j: usize) -> bool {
        match self.slot(j) {
            Some(idx) => {
                self.alive[idx] = false;
                self.live -= 1;
                true
            }
            None => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.ends
            .iter()
            .zip(&self.alive)
            .filter(|(_, &a)| a)
            .map(|(&j, _)| j)
    }

    fn slot(&self, j: usize) -> Option<usize> {
        let idx = self.ends.binary_search(&j).ok()?;
        self.alive[idx].then_some(idx)
    }
}

/// A pattern together with its occurrences, support and the per-level state
/// consumed by the support calculation.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternRecord {
    pub pattern: Pattern,
    pub group: GroupLabel,
    pub occ: OccurrenceList,
    pub support: f64,
    pub pre: PositionSet,
    pub suf: PositionSet,
    pub sufsup: f64,
    pub prefix_pruned: bool,
    pub suffix_pruned: bool,
    pub(crate) prefix_key: Vec<u32>,
    pub(crate) suffix_key: Vec<u32>,
}

impl PatternRecord {
    /// New record with level state already reset. `pattern` must have length >= 2.
    pub fn new(pattern: Pattern, occ: OccurrenceList, support: f64) -> Self {
        let group = group_of(&pattern);
        let prefix_key = prefix_ranks(pattern.ranks());
        let suffix_key = suffix_ranks(pattern.ranks());
        let mut rec = PatternRecord {
            pattern,
            group,
            occ,
            support,
            pre: PositionSet::default(),
            suf: PositionSet::default(),
            sufsup: 0.0,
            prefix_pruned: false,
            suffix_pruned: false,
            prefix_key,
            suffix_key,
        };
        rec.reset_level_state();
        rec
    }

    /// `pre = suf = occ`, `sufsup = support`, pruning flags cleared.
    pub fn reset_level_state(&mut self) {
        self.pre = PositionSet::from_occurrences(&self.occ);
        self.suf = self.pre.clone();
        self.sufsup = self.support;
        self.prefix_pruned = false;
        self.suffix_pruned = false;
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether `self` may be the prefix operand of a fusion with `q`.
    pub fn joins(&self, q: &PatternRecord) -> bool {
        self.suffix_key == q.prefix_key
    }
}

/// Result of deriving the super-patterns of one `(p, q)` pair.
#[derive(Debug, Clone)]
pub struct ScfProducts {
    pub outcome: FusionOutcome,
    /// One record per product, in the order of [`FusionOutcome::products`].
    pub records: Vec<PatternRecord>,
    /// Positions of `pre_p` visited, each including one membership probe into `suf_q`.
    pub probes: u64,
}

/// Fuses `level[p]` with `level[q]` and derives the products' occurrences.
///
/// Consumes matched positions from `level[p].pre` and `level[q].suf` and
/// lowers `level[q].sufsup`. `p == q` is allowed.
pub fn scf_fuse(
    level: &mut [PatternRecord],
    p: usize,
    q: usize,
    t: &TimeSeries,
    f: &ForgettingWeights,
) -> Result<ScfProducts> {
    if p >= level.len() || q >= level.len() {
        return Err(OpfError::InvalidFusion(format!(
            "operand index out of range ({}, {}) for level of {}",
            p,
            q,
            level.len()
        )));
    }
    if level[p].prefix_pruned {
        return Err(OpfError::InvalidFusion(format!(
            "{} is prefix-pruned",
            level[p].pattern
        )));
    }
    if level[q].suffix_pruned {
        return Err(OpfError::InvalidFusion(format!(
            "{} is suffix-pruned",
            level[q].pattern
        )));
    }
    let outcome = fuse(&level[p].pattern, &level[q].pattern)?.ok_or_else(|| {
        OpfError::InvalidFusion(format!(
            "{} and {} do not share a suffix/prefix order",
            level[p].pattern, level[q].pattern
        ))
    })?;
    scf_apply(level, p, q, outcome, t, f)
}

/// [`scf_fuse`] without precondition checks; `outcome` must be `level[p] ⊕ level[q]`.
pub(crate) fn scf_apply(
    level: &mut [PatternRecord],
    p: usize,
    q: usize,
    outcome: FusionOutcome,
    t: &TimeSeries,
    f: &ForgettingWeights,
) -> Result<ScfProducts> {
    let m = level[p].len();
    let n = t.len();
    let two_products = matches!(outcome, FusionOutcome::Case1 { .. });

    let mut r_ends = Vec::new();
    let mut h_ends = Vec::new();
    let (mut r_sup, mut h_sup) = (0.0, 0.0);
    let mut probes = 0u64;

    let (pre, suf, sufsup) = operand_sets(level, p, q);
    let candidates: Vec<usize> = pre.iter().collect();
    for i in candidates {
        probes += 1;
        let j = i + 1;
        if j > n || !suf.contains(j) {
            continue;
        }
        if j <= m {
            return Err(OpfError::internal(format!(
                "super-pattern occurrence {} shorter than length {}",
                j,
                m + 1
            )));
        }
        pre.remove(i);
        suf.remove(j);
        let fj = f.at(j);
        *sufsup -= fj;

        if !two_products {
            r_ends.push(j);
            r_sup += fj;
            continue;
        }
        let first = t.value(j - m);
        let last = t.value(j);
        if first < last {
            r_ends.push(j);
            r_sup += fj;
        } else if first > last {
            h_ends.push(j);
            h_sup += fj;
        }
        // equal boundary values: a tie, occurrence of neither product
    }

    let records = match &outcome {
        FusionOutcome::Case1 { r, h } => vec![
            PatternRecord::new(r.clone(), OccurrenceList::from_sorted(m + 1, r_ends), r_sup),
            PatternRecord::new(h.clone(), OccurrenceList::from_sorted(m + 1, h_ends), h_sup),
        ],
        FusionOutcome::Case2 { r } => vec![PatternRecord::new(
            r.clone(),
            OccurrenceList::from_sorted(m + 1, r_ends),
            r_sup,
        )],
    };
    Ok(ScfProducts {
        outcome,
        records,
        probes,
    })
}

/// Occurrences of the extension `p·v` (rank `v` appended), derived from `pre_p`.
///
/// `j` is an occurrence when `j - 1` is still in `pre_p` and `t_j` has exactly
/// `v - 1` of the preceding `m` values strictly below it and none equal.
/// Matched positions are consumed from `pre_p`, and from `suf` of the
/// extension's suffix pattern when that pattern is in the level.
pub(crate) fn scf_extend(
    level: &mut [PatternRecord],
    p: usize,
    v: u32,
    suffix_owner: Option<usize>,
    t: &TimeSeries,
    f: &ForgettingWeights,
) -> Result<(OccurrenceList, f64, u64)> {
    let m = level[p].len();
    let n = t.len();
    let mut ends = Vec::new();
    let mut support = 0.0;
    let mut probes = 0u64;

    let candidates: Vec<usize> = level[p].pre.iter().collect();
    for i in candidates {
        probes += 1;
        let j = i + 1;
        if j > n {
            continue;
        }
        let x = t.value(j);
        let window = t.window(i, m);
        let mut below = 0u32;
        let mut tied = false;
        for &y in window {
            if y < x {
                below += 1;
            } else if y == x {
                tied = true;
                break;
            }
        }
        if tied || below + 1 != v {
            continue;
        }
        level[p].pre.remove(i);
        if let Some(q) = suffix_owner {
            let owner = &mut level[q];
            if owner.suf.remove(j) {
                owner.sufsup -= f.at(j);
            }
        }
        ends.push(j);
        support += f.at(j);
    }
    Ok((OccurrenceList::from_sorted(m + 1, ends), support, probes))
}

fn operand_sets(
    level: &mut [PatternRecord],
    p: usize,
    q: usize,
) -> (&mut PositionSet, &mut PositionSet, &mut f64) {
    if p == q {
        let rec = &mut level[p];
        (&mut rec.pre, &mut rec.suf, &mut rec.sufsup)
    } else {
        let [a, b] = level
            .get_disjoint_mut([p, q])
            .expect("distinct in-range indices");
        (&mut a.pre, &mut b.suf, &mut b.sufsup)
    }
}

/// Marks `p` prefix-pruned when fewer than `minsup` prefix positions remain.
///
/// Each remaining position contributes at most weight 1 to a super-pattern,
/// so the count bounds the support of every extension still to be built.
pub fn check_prefix_prune(p: &mut PatternRecord, minsup: f64) -> bool {
    if (p.pre.len() as f64) < minsup {
        p.prefix_pruned = true;
    }
    p.prefix_pruned
}

/// Marks `q` suffix-pruned when its remaining suffix support is below `minsup`.
pub fn check_suffix_prune(q: &mut PatternRecord, minsup: f64) -> bool {
    if q.sufsup < minsup {
        q.suffix_pruned = true;
    }
    q.suffix_pruned
}

/// Count-based variant of [`check_suffix_prune`]: prunes when `|suf_q| < minsup`.
pub fn check_suffix_count_prune(q: &mut PatternRecord, minsup: f64) -> bool {
    if (q.suf.len() as f64) < minsup {
        q.suffix_pruned = true;
    }
    q.suffix_pruned
}

/// Full-scan support: every window compared against the pattern.
pub fn match_support(
    t: &TimeSeries,
    p: &Pattern,
    f: &ForgettingWeights,
) -> Result<(OccurrenceList, f64)> {
    let occ = oracle_occurrences(t, p);
    let sup = fsup(&occ, f)?;
    Ok((occ, sup))
}

/// Windows a full scan for a length-`m` pattern examines.
pub(crate) fn windows_scanned(n: usize, m: usize) -> u64 {
    if m > n {
        0
    } else {
        (n - m + 1) as u64
    }
}
