//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use opf_core::{
    fixtures, forgetting_weights, fsup, oracle_occurrences, prefixop, suffixop, KSpec,
    MiningConfig, Pattern, TimeSeries,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All permutations of `1..=m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Pattern> {
    fn rec(prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Pattern>) {
        if prefix.len() == used.len() {
            out.push(Pattern::new(prefix.clone()).unwrap());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u32 + 1);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), &mut vec![false; m], &mut out);
    out
}

/// Every pattern that occurs in `t` at length `m`, with its oracle support.
pub fn windows_at(t: &TimeSeries, m: usize, k: f64) -> BTreeMap<Pattern, f64> {
    let f = forgetting_weights(t.len(), k).unwrap();
    let mut seen = BTreeSet::new();
    for end in m..=t.len() {
        if let Some(p) = Pattern::of_window(t.window(end, m)) {
            seen.insert(p);
        }
    }
    seen.into_iter()
        .map(|p| {
            let s = fsup(&oracle_occurrences(t, &p), &f).unwrap();
            (p, s)
        })
        .collect()
}

/// Level-wise brute force: a pattern is reported when its support reaches
/// `minsup` and both its prefix and suffix patterns were reported one level
/// down. Length-2 patterns only need the threshold.
pub fn closed_oracle(t: &TimeSeries, config: &MiningConfig) -> BTreeMap<Pattern, f64> {
    let n = t.len();
    let k = config.k.resolve(n).unwrap();
    let mut out = BTreeMap::new();
    let mut prev: BTreeSet<Pattern> = BTreeSet::new();
    let mut m = 2;
    while m <= n {
        let mut level = BTreeSet::new();
        for (p, s) in windows_at(t, m, k) {
            if s < config.minsup {
                continue;
            }
            if m > 2
                && !(prev.contains(&prefixop(&p).unwrap()) && prev.contains(&suffixop(&p).unwrap()))
            {
                continue;
            }
            out.insert(p.clone(), s);
            level.insert(p);
        }
        if level.is_empty() || config.max_length.is_some_and(|x| m >= x) {
            break;
        }
        prev = level;
        m += 1;
    }
    out
}

#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub seed: u64,
    pub series: TimeSeries,
    pub minsup: f64,
    pub k_coeff: f64,
}

impl SuiteCase {
    pub fn config(&self, preset: opf_core::Preset) -> MiningConfig {
        MiningConfig::preset(preset, self.minsup).with_k(KSpec::Coefficient(self.k_coeff))
    }
}

pub const K_COEFFS: [f64; 3] = [1.0 / 7.0, 1.0, 7.0];

/// Seeded random series of length 20..=200 with about 5% repeated values,
/// minsup in [1, 10] and a k coefficient from [`K_COEFFS`].
pub fn randomized_suite(count: usize) -> Vec<SuiteCase> {
    (0..count as u64)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + seed);
            let n = rng.gen_range(20..=200);
            SuiteCase {
                seed,
                series: fixtures::series_with_ties(n, 0.05, 1_000 + seed),
                minsup: rng.gen_range(1.0..=10.0),
                k_coeff: K_COEFFS[rng.gen_range(0..K_COEFFS.len())],
            }
        })
        .collect()
}

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
