//! Brute-force ground truth: scan every window and compare rank sequences.

use crate::pattern::{relative_order, Pattern};
use crate::series::TimeSeries;
use crate::weights::OccurrenceList;

/// All end positions `j` where the window `t[j-m+1..=j]` has exactly the
/// relative order of `p`. Empty when the pattern is longer than the series.
pub fn oracle_occurrences(t: &TimeSeries, p: &Pattern) -> OccurrenceList {
    let m = p.len();
    let n = t.len();
    if m > n {
        return OccurrenceList::default();
    }
    let ends = (m..=n)
        .filter(|&j| {
            relative_order(t.window(j, m))
                .map(|r| r == p.ranks())
                .unwrap_or(false)
        })
        .collect();
    OccurrenceList::from_sorted(m, ends)
}
