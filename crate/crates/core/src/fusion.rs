//! Pattern fusion, group classification and candidate ordering.
//!
//! Two length-`m` patterns `p` and `q` fuse when the suffix relative order of
//! `p` equals the prefix relative order of `q`. The fused super-patterns are
//! exactly the length-`m+1` permutations whose prefix order is `p` and whose
//! suffix order is `q`: two of them when `p`'s first rank equals `q`'s last
//! rank (the boundary elements are then incomparable through the shared
//! middle), one otherwise.
//!
//! Patterns are bucketed by the directions of their first two adjacent pairs.
//! The suffix order of `p` starts with `p`'s second pair, so `q` can only
//! follow `p` when `q`'s first pair points the same way as `p`'s second pair.
//! That halves the pairs that need testing. A fused product keeps the first
//! two pairs of its prefix operand, and with it the operand's group.

use std::fmt;

use crate::error::{OpfError, Result};
use crate::pattern::Pattern;
use crate::scf::PatternRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    /// first pair ascending, second pair ascending
    G1,
    /// first ascending, second descending
    G2,
    /// first descending, second ascending
    G3,
    /// first descending, second descending
    G4,
}

impl GroupLabel {
    pub fn number(self) -> u8 {
        match self {
            GroupLabel::G1 => 1,
            GroupLabel::G2 => 2,
            GroupLabel::G3 => 3,
            GroupLabel::G4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<GroupLabel> {
        match n {
            1 => Some(GroupLabel::G1),
            2 => Some(GroupLabel::G2),
            3 => Some(GroupLabel::G3),
            4 => Some(GroupLabel::G4),
            _ => None,
        }
    }

    pub const ALL: [GroupLabel; 4] = [
        GroupLabel::G1,
        GroupLabel::G2,
        GroupLabel::G3,
        GroupLabel::G4,
    ];

    fn from_directions(first_up: bool, second_up: bool) -> GroupLabel {
        match (first_up, second_up) {
            (true, true) => GroupLabel::G1,
            (true, false) => GroupLabel::G2,
            (false, true) => GroupLabel::G3,
            (false, false) => GroupLabel::G4,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.number())
    }
}

/// Group of a pattern of length >= 2.
///
/// Length-2 patterns are labelled by their only pair: `(1,2)` is G1 and
/// `(2,1)` is G2. From length 3 on, the label encodes the directions of the
/// first and second pairs. At length 3 the second pair is also the last one.
pub fn group_of(p: &Pattern) -> GroupLabel {
    assert!(p.len() >= 2, "group_of needs a pattern of length >= 2");
    if p.len() == 2 {
        return if p.starts_ascending() {
            GroupLabel::G1
        } else {
            GroupLabel::G2
        };
    }
    GroupLabel::from_directions(p.starts_ascending(), p.second_ascending())
}

/// Groups of length-`m` patterns that may follow a pattern of group `g` in a fusion.
pub fn allowed_suffix_groups(g: GroupLabel, m: usize) -> &'static [GroupLabel] {
    use GroupLabel::*;
    if m == 2 {
        // both length-2 patterns fuse with both
        return &[G1, G2];
    }
    match g {
        G1 | G3 => &[G1, G2],
        G2 | G4 => &[G3, G4],
    }
}

/// `R(p_1, .., p_{m-1})`.
pub fn prefixop(p: &Pattern) -> Result<Pattern> {
    if p.len() < 2 {
        return Err(OpfError::input(
            "prefix order needs a pattern of length >= 2",
        ));
    }
    Ok(Pattern::from_permutation(prefix_ranks(p.ranks())))
}

/// `R(p_2, .., p_m)`.
pub fn suffixop(p: &Pattern) -> Result<Pattern> {
    if p.len() < 2 {
        return Err(OpfError::input(
            "suffix order needs a pattern of length >= 2",
        ));
    }
    Ok(Pattern::from_permutation(suffix_ranks(p.ranks())))
}

// Dropping one element of a permutation only shifts the ranks above it.
pub(crate) fn prefix_ranks(r: &[u32]) -> Vec<u32> {
    let last = r[r.len() - 1];
    r[..r.len() - 1]
        .iter()
        .map(|&x| if x > last { x - 1 } else { x })
        .collect()
}

pub(crate) fn suffix_ranks(r: &[u32]) -> Vec<u32> {
    let first = r[0];
    r[1..]
        .iter()
        .map(|&x| if x > first { x - 1 } else { x })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionCase {
    /// `p_1 = q_m`: two products.
    Case1,
    /// `p_1 != q_m`: one product.
    Case2,
}

/// Products of a successful fusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FusionOutcome {
    /// `r` has its first element below its last, `h` the reverse.
    Case1 {
        r: Pattern,
        h: Pattern,
    },
    Case2 {
        r: Pattern,
    },
}

impl FusionOutcome {
    pub fn case(&self) -> FusionCase {
        match self {
            FusionOutcome::Case1 { .. } => FusionCase::Case1,
            FusionOutcome::Case2 { .. } => FusionCase::Case2,
        }
    }

    pub fn products(&self) -> Vec<&Pattern> {
        match self {
            FusionOutcome::Case1 { r, h } => vec![r, h],
            FusionOutcome::Case2 { r } => vec![r],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FusionOutcome::Case1 { .. } => 2,
            FusionOutcome::Case2 { .. } => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Fuses `p` and `q`; `Ok(None)` when `suffixop(p) != prefixop(q)`.
pub fn fuse(p: &Pattern, q: &Pattern) -> Result<Option<FusionOutcome>> {
    if p.len() != q.len() {
        return Err(OpfError::input(format!(
            "cannot fuse patterns of lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    if p.len() < 2 {
        return Err(OpfError::input("fusion needs patterns of length >= 2"));
    }
    if suffix_ranks(p.ranks()) != prefix_ranks(q.ranks()) {
        return Ok(None);
    }
    Ok(Some(fuse_unchecked(p.ranks(), q.ranks())))
}

/// Builds the products assuming the join condition already holds.
pub(crate) fn fuse_unchecked(p: &[u32], q: &[u32]) -> FusionOutcome {
    let m = p.len();
    let p1 = p[0];
    let qm = q[m - 1];

    // p_1 below q_m: keep p_1, lift the q ranks that are not below it.
    let low_first = || {
        let mut r = Vec::with_capacity(m + 1);
        r.push(p1);
        r.extend(q[..m - 1].iter().map(|&x| if x < p1 { x } else { x + 1 }));
        r.push(qm + 1);
        Pattern::from_permutation(r)
    };
    // p_1 above q_m: keep q_m, lift the p ranks that are not below it.
    let high_first = || {
        let mut h = Vec::with_capacity(m + 1);
        h.push(p1 + 1);
        h.extend(p[1..].iter().map(|&x| if x < qm { x } else { x + 1 }));
        h.push(qm);
        Pattern::from_permutation(h)
    };

    if p1 == qm {
        FusionOutcome::Case1 {
            r: low_first(),
            h: high_first(),
        }
    } else if p1 < qm {
        FusionOutcome::Case2 { r: low_first() }
    } else {
        FusionOutcome::Case2 { r: high_first() }
    }
}

/// All `m+1` one-step extensions of `p`: append rank `v` and lift every
/// existing rank `>= v`. Returned in order of `v = 1..=m+1`.
pub fn enumerate_extensions(p: &Pattern) -> Vec<Pattern> {
    let m = p.len() as u32;
    (1..=m + 1)
        .map(|v| Pattern::from_permutation(extend_with(p.ranks(), v)))
        .collect()
}

pub(crate) fn extend_with(p: &[u32], v: u32) -> Vec<u32> {
    let mut w: Vec<u32> = p.iter().map(|&x| if x >= v { x + 1 } else { x }).collect();
    w.push(v);
    w
}

/// Order in which a level's frequent patterns are used as fusion prefixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Priority {
    /// Descending support.
    #[default]
    Max,
    /// Ascending support.
    Min,
    /// Discovery order.
    None,
}

/// Orders a level for fusion. Equal supports fall back to ascending
/// lexicographic rank order; membership never changes.
pub fn build_plist(mut records: Vec<PatternRecord>, priority: Priority) -> Vec<PatternRecord> {
    match priority {
        Priority::Max => records.sort_by(|a, b| {
            b.support
                .total_cmp(&a.support)
                .then_with(|| a.pattern.cmp(&b.pattern))
        }),
        Priority::Min => records.sort_by(|a, b| {
            a.support
                .total_cmp(&b.support)
                .then_with(|| a.pattern.cmp(&b.pattern))
        }),
        Priority::None => {}
    }
    records
}
