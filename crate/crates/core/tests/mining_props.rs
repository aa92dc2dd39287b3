mod common;

use std::collections::BTreeMap;

use opf_core::{
    fixtures, forgetting_weights, fsup, mine, mine_dataset_with, oracle_occurrences, Execution,
    KSpec, MiningConfig, Pattern, Preset, TimeSeries,
};
use proptest::prelude::*;

use common::{closed_oracle, K_COEFFS};

fn arb_case() -> impl Strategy<Value = (TimeSeries, f64, f64)> {
    (
        prop::collection::vec(0u16..40, 3..90),
        0.3f64..6.0,
        prop::sample::select(K_COEFFS.to_vec()),
    )
        .prop_map(|(v, minsup, c)| {
            (
                TimeSeries::new(v.into_iter().map(f64::from).collect()).unwrap(),
                minsup,
                c,
            )
        })
}

fn support_table(t: &TimeSeries, cfg: &MiningConfig) -> BTreeMap<Pattern, f64> {
    mine(t, cfg).unwrap().support_map().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_preset_matches_the_level_wise_oracle((t, minsup, c) in arb_case()) {
        let base = MiningConfig::new(minsup).with_k(KSpec::Coefficient(c));
        let want = closed_oracle(&t, &base);
        for preset in Preset::ALL {
            let cfg = MiningConfig::preset(preset, minsup).with_k(KSpec::Coefficient(c));
            let got = support_table(&t, &cfg);
            prop_assert!(got.keys().eq(want.keys()), "{} differs", preset.name());
            for (p, s) in &got {
                prop_assert!((s - want[p]).abs() <= 1e-9, "{}: {} {} vs {}", preset.name(), p, s, want[p]);
            }
        }
    }

    #[test]
    fn reported_occurrences_equal_the_oracle((t, minsup, c) in arb_case()) {
        let res = mine(&t, &MiningConfig::new(minsup).with_k(KSpec::Coefficient(c))).unwrap();
        let f = forgetting_weights(res.n, res.k).unwrap();
        for fp in res.patterns() {
            let occ = oracle_occurrences(&t, &fp.pattern);
            prop_assert_eq!(&fp.occurrences, &occ);
            prop_assert!((fp.support - fsup(&occ, &f).unwrap()).abs() <= 1e-9);
            prop_assert!(fp.support >= minsup);
        }
    }

    #[test]
    fn max_length_truncates_without_changing_shorter_levels((t, minsup, c) in arb_case(), cap in 2usize..5) {
        let cfg = MiningConfig::new(minsup).with_k(KSpec::Coefficient(c));
        let full = support_table(&t, &cfg);
        let capped = support_table(&t, &cfg.clone().with_max_length(Some(cap)));
        let want: BTreeMap<Pattern, f64> = full.into_iter().filter(|(p, _)| p.len() <= cap).collect();
        prop_assert_eq!(capped, want);
    }

    #[test]
    fn mining_is_deterministic((t, minsup, c) in arb_case()) {
        let cfg = MiningConfig::new(minsup).with_k(KSpec::Coefficient(c)).with_trace(true);
        let a = mine(&t, &cfg).unwrap();
        let b = mine(&t, &cfg).unwrap();
        prop_assert_eq!(a.support_map(), b.support_map());
        prop_assert_eq!(a.metrics.counters(), b.metrics.counters());
        prop_assert_eq!(a.trace, b.trace);
    }
}

#[test]
fn parallel_and_sequential_datasets_agree() {
    let data: Vec<TimeSeries> = (0..400u64)
        .map(|s| fixtures::series_with_ties(40 + (s as usize * 7) % 160, 0.05, s))
        .collect();
    let cfg = MiningConfig::new(3.0);
    let seq = mine_dataset_with(&data, &cfg, Execution::Sequential).unwrap();
    let par = mine_dataset_with(&data, &cfg, Execution::Parallel).unwrap();
    assert_eq!(seq.len(), par.len());
    for (a, b) in seq.iter().zip(&par) {
        assert_eq!(a.series_id, b.series_id);
        assert_eq!(a.support_map(), b.support_map());
        assert_eq!(a.metrics.counters(), b.metrics.counters());
    }
}

#[test]
fn dataset_errors_name_the_series() {
    let data = vec![fixtures::worked_series(), fixtures::random_walk(50, 1)];
    let err =
        mine_dataset_with(&data, &MiningConfig::new(-1.0), Execution::Sequential).unwrap_err();
    assert!(err.is_config());
    assert!(mine_dataset_with(&[], &MiningConfig::new(1.0), Execution::Parallel).is_err());
}

// Only the suffix side is anti-monotone under forgetting weights: a prefix
// occurrence ends one step earlier and weighs less. Level-wise generation
// therefore reports only patterns whose prefix and suffix are frequent.
#[test]
fn weighted_support_is_not_prefix_monotone() {
    let t = TimeSeries::new(vec![2.0, 1.0, 3.0]).unwrap();
    let cfg = MiningConfig::new(1.0);
    let res = mine(&t, &cfg).unwrap();
    let w = Pattern::new(vec![2, 1, 3]).unwrap();
    let f = forgetting_weights(3, 1.0 / 3.0).unwrap();
    assert_eq!(fsup(&oracle_occurrences(&t, &w), &f).unwrap(), 1.0);
    assert!(
        fsup(
            &oracle_occurrences(&t, &Pattern::new(vec![2, 1]).unwrap()),
            &f
        )
        .unwrap()
            < 1.0
    );
    assert!(res.find(&w).is_none());
    assert_eq!(res.len(), 1);
}

#[test]
fn worked_series_pruned_and_unpruned_agree() {
    let t = fixtures::worked_series();
    for minsup in [0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
        let cfg = |p| MiningConfig::preset(p, minsup).with_k(KSpec::Absolute(0.1));
        let a = mine(&t, &cfg(Preset::OpfMiner)).unwrap();
        let b = mine(&t, &cfg(Preset::OpfNoPrune)).unwrap();
        assert_eq!(a.support_map(), b.support_map(), "minsup {minsup}");
        assert!(a.metrics.candidates <= b.metrics.candidates);
    }
}
