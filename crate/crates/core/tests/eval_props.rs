use opf_core::{
    calinski_harabasz, cluster_and_score, extract_features, fixtures, kmeans, silhouette,
    FeatureValue, KSpec, MiningConfig, OpfError, Pattern,
};
use proptest::prelude::*;

fn arb_points() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (3usize..12, 1usize..4)
        .prop_flat_map(|(n, d)| prop::collection::vec(prop::collection::vec(-20.0f64..20.0, d), n))
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Sum of squared distances to cluster means.
fn sse(x: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let d = x[0].len();
    let mut total = 0.0;
    for c in 0..k {
        let members: Vec<&Vec<f64>> = x
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == c)
            .map(|(p, _)| p)
            .collect();
        if members.is_empty() {
            continue;
        }
        let mean: Vec<f64> = (0..d)
            .map(|j| members.iter().map(|p| p[j]).sum::<f64>() / members.len() as f64)
            .collect();
        total += members.iter().map(|p| sq(p, &mean)).sum::<f64>();
    }
    total
}

proptest! {
    #[test]
    fn indices_are_invariant_under_relabel_and_shift(
        x in arb_points(),
        shift in -50.0f64..50.0,
        seed in 0u64..1000,
    ) {
        let n = x.len();
        let labels: Vec<usize> = (0..n).map(|i| (i * 7 + seed as usize) % 2).collect();
        prop_assume!(labels.contains(&0) && labels.contains(&1));
        let sc = silhouette(&x, &labels).unwrap();
        prop_assert!((-1.0..=1.0).contains(&sc));
        let flipped: Vec<usize> = labels.iter().map(|l| 1 - l).collect();
        prop_assert!((silhouette(&x, &flipped).unwrap() - sc).abs() < 1e-9);
        let moved: Vec<Vec<f64>> = x.iter().map(|p| p.iter().map(|v| v + shift).collect()).collect();
        prop_assert!((silhouette(&moved, &labels).unwrap() - sc).abs() < 1e-9);
        let chi = calinski_harabasz(&x, &labels).unwrap();
        let chi_moved = calinski_harabasz(&moved, &labels).unwrap();
        if chi.is_finite() {
            prop_assert!((chi - chi_moved).abs() <= 1e-7 * chi.abs().max(1.0));
            prop_assert!(chi >= 0.0);
        }
    }

    #[test]
    fn kmeans_objective_never_rises(x in arb_points(), k in 2usize..4, seed in any::<u64>()) {
        prop_assume!(k <= x.len());
        let fit = kmeans(&x, k, seed).unwrap();
        for w in fit.objective_history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
        prop_assert_eq!(fit.assignments.len(), x.len());
        prop_assert!(fit.assignments.iter().all(|&a| a < k));
        let again = kmeans(&x, k, seed).unwrap();
        prop_assert_eq!(fit.assignments, again.assignments);
    }
}

#[test]
fn separated_groups_match_the_best_two_partition() {
    let x: Vec<Vec<f64>> = [
        (0.0, 0.0),
        (0.5, 0.2),
        (0.1, 0.7),
        (9.0, 9.0),
        (9.4, 8.8),
        (8.7, 9.3),
        (9.1, 9.6),
    ]
    .iter()
    .map(|&(a, b)| vec![a, b])
    .collect();
    let n = x.len();
    let mut best = (f64::INFINITY, 0u32);
    for mask in 1..(1u32 << n) - 1 {
        let labels: Vec<usize> = (0..n).map(|i| ((mask >> i) & 1) as usize).collect();
        let s = sse(&x, &labels, 2);
        if s < best.0 {
            best = (s, mask);
        }
    }
    for seed in 0..10 {
        let fit = kmeans(&x, 2, seed).unwrap();
        let same = |i: usize, j: usize| fit.assignments[i] == fit.assignments[j];
        for i in 0..n {
            for j in 0..n {
                let want = ((best.1 >> i) & 1) == ((best.1 >> j) & 1);
                assert_eq!(same(i, j), want, "seed {seed}: points {i},{j}");
            }
        }
        assert!((fit.objective() - best.0).abs() < 1e-9);
    }
}

#[test]
fn one_cluster_per_row_has_infinite_chi() {
    let x = vec![vec![0.0], vec![1.0], vec![5.0]];
    let res = cluster_and_score(&x, 3, 0).unwrap();
    assert_eq!(res.fit.objective(), 0.0);
    assert_eq!(res.chi, Some(f64::INFINITY));
}

#[test]
fn identical_rows_collapse_to_one_cluster() {
    let x = vec![vec![1.0, 1.0]; 5];
    let res = cluster_and_score(&x, 2, 3).unwrap();
    assert!(res.fit.repairs >= 1);
    assert!(res.sc.is_none() && res.chi.is_none());
    assert!(matches!(
        silhouette(&x, &res.fit.assignments),
        Err(OpfError::UndefinedIndex(_))
    ));
}

#[test]
fn k_out_of_range_is_a_config_error() {
    let x = vec![vec![0.0], vec![1.0]];
    assert!(kmeans(&x, 1, 0).unwrap_err().is_config());
    assert!(kmeans(&x, 3, 0).unwrap_err().is_config());
}

#[test]
fn worked_series_features() {
    let cfg = MiningConfig::new(1.5).with_k(KSpec::Absolute(0.1));
    let t = fixtures::worked_series();
    let fm = extract_features(&[t.clone(), t], &cfg, FeatureValue::Support).unwrap();
    let names: Vec<String> = fm.vocabulary.iter().map(Pattern::to_dashed).collect();
    assert_eq!(names, ["1-2", "2-1", "1-3-2", "2-1-3", "3-2-1"]);
    let want = [1.96, 4.28, 2.17, 1.51, 2.11];
    for (got, want) in fm.rows[0].iter().zip(want) {
        assert!((got - want).abs() < 0.005);
    }
    assert_eq!(fm.rows[0], fm.rows[1]);
}

#[test]
fn absent_patterns_are_zero() {
    let cfg = MiningConfig::new(0.5);
    let up = opf_core::TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let down = opf_core::TimeSeries::new(vec![4.0, 3.0, 2.0, 1.0]).unwrap();
    let fm = extract_features(&[up, down], &cfg, FeatureValue::Presence).unwrap();
    let col = fm
        .vocabulary
        .iter()
        .position(|p| p.ranks() == [2, 1])
        .unwrap();
    assert_eq!(fm.rows[0][col], 0.0);
    assert_eq!(fm.rows[1][col], 1.0);
}
