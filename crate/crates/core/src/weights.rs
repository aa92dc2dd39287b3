//! Exponential forgetting weights and the weighted support built on them.

use crate::error::{OpfError, Result};

/// Per-position forgetting values `f_j = exp(-k * (n - j))` for `j = 1..=n`.
///
/// Computed once per series and shared read-only by everything downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct ForgettingWeights {
    f: Vec<f64>,
    k: f64,
}

impl ForgettingWeights {
    pub fn new(n: usize, k: f64) -> Result<Self> {
        if n < 1 {
            return Err(OpfError::config("series length must be at least 1"));
        }
        if k <= 0.0 || !k.is_finite() {
            return Err(OpfError::config(format!(
                "forgetting factor must be a positive finite number, got {}",
                k
            )));
        }
        if k >= 1.0 {
            log::warn!(
                "forgetting factor k = {} is >= 1; older positions decay very fast",
                k
            );
        }
        let f = (1..=n).map(|j| (-k * (n - j) as f64).exp()).collect();
        Ok(ForgettingWeights { f, k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// Weight at 1-based position `j`.
    #[inline]
    pub fn at(&self, j: usize) -> f64 {
        self.f[j - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.f
    }

    /// Sum of all weights: an upper bound on any pattern's support.
    pub fn total(&self) -> f64 {
        self.f.iter().sum()
    }
}

/// Shorthand for [`ForgettingWeights::new`].
pub fn forgetting_weights(n: usize, k: f64) -> Result<ForgettingWeights> {
    ForgettingWeights::new(n, k)
}

/// How the forgetting factor is chosen for a series of length `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KSpec {
    /// `k = c / n`.
    Coefficient(f64),
    Absolute(f64),
}

impl Default for KSpec {
    fn default() -> Self {
        KSpec::Coefficient(1.0)
    }
}

impl KSpec {
    pub fn resolve(&self, n: usize) -> Result<f64> {
        let k = match *self {
            KSpec::Coefficient(c) => {
                if c <= 0.0 || !c.is_finite() {
                    return Err(OpfError::config(format!(
                        "k coefficient must be positive and finite, got {}",
                        c
                    )));
                }
                c / n as f64
            }
            KSpec::Absolute(k) => k,
        };
        if k <= 0.0 || !k.is_finite() {
            return Err(OpfError::config(format!(
                "forgetting factor must be positive and finite, got {}",
                k
            )));
        }
        Ok(k)
    }
}

/// End positions (1-based, strictly increasing) of a pattern's occurrences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OccurrenceList {
    pattern_len: usize,
    ends: Vec<usize>,
}

impl OccurrenceList {
    pub fn new(pattern_len: usize, ends: Vec<usize>) -> Result<Self> {
        if ends.windows(2).any(|w| w[0] >= w[1]) {
            return Err(OpfError::internal(
                "occurrence ends must be strictly increasing",
            ));
        }
        if let Some(&first) = ends.first() {
            if first < pattern_len {
                return Err(OpfError::internal(format!(
                    "occurrence end {} precedes pattern length {}",
                    first, pattern_len
                )));
            }
        }
        Ok(OccurrenceList { pattern_len, ends })
    }

    /// Caller guarantees ascending order and `end >= pattern_len`.
    pub(crate) fn from_sorted(pattern_len: usize, ends: Vec<usize>) -> Self {
        debug_assert!(ends.windows(2).all(|w| w[0] < w[1]));
        OccurrenceList { pattern_len, ends }
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern_len
    }

    pub fn ends(&self) -> &[usize] {
        &self.ends
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.ends.binary_search(&j).is_ok()
    }

    pub fn into_ends(self) -> Vec<usize> {
        self.ends
    }
}

/// Forgetting-weighted support: sum of `f_j` over the occurrence end positions.
///
/// Summation runs in ascending position order so that every route to a
/// support value produces the same bits.
pub fn fsup(occurrences: &OccurrenceList, weights: &ForgettingWeights) -> Result<f64> {
    let n = weights.len();
    let mut total = 0.0;
    for &j in occurrences.ends() {
        if j < 1 || j > n {
            return Err(OpfError::internal(format!(
                "occurrence end {} outside 1..={}",
                j, n
            )));
        }
        total += weights.at(j);
    }
    Ok(total)
}
