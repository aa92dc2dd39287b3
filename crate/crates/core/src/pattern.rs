use std::fmt;

use crate::error::{OpfError, Result};

/// Rank sequence of a window: `rank(t_i) = 1 + |{t_l in window : t_l < t_i}|`.
///
/// Tied values receive equal ranks, so a window with duplicates yields a
/// sequence that is not a permutation and never equals any [`Pattern`].
pub fn relative_order(window: &[f64]) -> Result<Vec<u32>> {
    if window.is_empty() {
        return Err(OpfError::input("relative order of an empty window"));
    }
    Ok(window
        .iter()
        .map(|&x| 1 + window.iter().filter(|&&y| y < x).count() as u32)
        .collect())
}

/// An order-preserving pattern: a permutation of `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(Vec<u32>);

impl Pattern {
    pub fn new(ranks: Vec<u32>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(OpfError::input("pattern must have at least one rank"));
        }
        let m = ranks.len();
        let mut seen = vec![false; m];
        for &r in &ranks {
            let idx = r as usize;
            if idx == 0 || idx > m || seen[idx - 1] {
                return Err(OpfError::input(format!(
                    "ranks {:?} are not a permutation of 1..={}",
                    ranks, m
                )));
            }
            seen[idx - 1] = true;
        }
        Ok(Pattern(ranks))
    }

    /// Caller guarantees `ranks` is a permutation of `1..=ranks.len()`.
    pub(crate) fn from_permutation(ranks: Vec<u32>) -> Self {
        debug_assert!(
            Pattern::new(ranks.clone()).is_ok(),
            "not a permutation: {ranks:?}"
        );
        Pattern(ranks)
    }

    /// The pattern of a tie-free window, or `None` when the window has duplicates.
    pub fn of_window(window: &[f64]) -> Option<Pattern> {
        let ranks = relative_order(window).ok()?;
        Pattern::new(ranks).ok()
    }

    pub fn ranks(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Direction of the first adjacent pair. Requires `len() >= 2`.
    pub(crate) fn starts_ascending(&self) -> bool {
        self.0[0] < self.0[1]
    }

    /// Direction of the second adjacent pair. Requires `len() >= 3`.
    pub(crate) fn second_ascending(&self) -> bool {
        self.0[1] < self.0[2]
    }

    /// Renders as `1-3-2`, the form used in CSV headers.
    pub fn to_dashed(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        parts.join("-")
    }

    pub fn parse_dashed(s: &str) -> Result<Pattern> {
        let ranks = s
            .split('-')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| OpfError::input(format!("bad rank '{}' in pattern '{}'", tok, s)))
            })
            .collect::<Result<Vec<u32>>>()?;
        Pattern::new(ranks)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", r)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_order_examples() {
        assert_eq!(relative_order(&[15.0, 32.0, 29.0]).unwrap(), vec![1, 3, 2]);
        assert_eq!(relative_order(&[7.0]).unwrap(), vec![1]);
        assert_eq!(relative_order(&[5.0, 5.0, 9.0]).unwrap(), vec![1, 1, 3]);
        assert!(relative_order(&[]).is_err());
    }

    #[test]
    fn ties_never_form_a_pattern() {
        assert_eq!(Pattern::of_window(&[5.0, 5.0, 9.0]), None);
        assert_eq!(
            Pattern::of_window(&[15.0, 32.0, 29.0]),
            Some(Pattern::new(vec![1, 3, 2]).unwrap())
        );
    }

    #[test]
    fn pattern_validation() {
        assert!(Pattern::new(vec![1, 3, 2]).is_ok());
        assert!(Pattern::new(vec![1, 1]).is_err());
        assert!(Pattern::new(vec![0, 1]).is_err());
        assert!(Pattern::new(vec![1, 3]).is_err());
        assert!(Pattern::new(vec![]).is_err());
    }

    #[test]
    fn dashed_round_trip() {
        let p = Pattern::new(vec![2, 4, 3, 1]).unwrap();
        assert_eq!(p.to_dashed(), "2-4-3-1");
        assert_eq!(Pattern::parse_dashed("2-4-3-1").unwrap(), p);
        assert_eq!(p.to_string(), "(2,4,3,1)");
        assert!(Pattern::parse_dashed("2-x").is_err());
    }
}
