//! Mining frequent order-preserving patterns in time series under
//! exponential forgetting.
//!
//! An order-preserving pattern is the relative order of a run of consecutive
//! observations, e.g. `(1,3,2)` for "rise, then partial fall". Each occurrence
//! is weighted by `exp(-k * (n - j))` where `j` is the position it ends at, so
//! recent trends count more than old ones. A pattern is frequent when its
//! weighted support reaches `minsup`.
//!
//! ```
//! use opf_core::{fixtures, mine, KSpec, MiningConfig};
//!
//! let t = fixtures::worked_series();
//! let cfg = MiningConfig::new(1.5).with_k(KSpec::Absolute(0.1));
//! let res = mine(&t, &cfg).unwrap();
//! assert_eq!(res.len(), 5);
//! ```
//!
//! Mining a single series is sequential. Independent series in a dataset are
//! mined on the rayon pool when the default `parallel` feature is enabled.

pub mod config;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod fusion;
pub mod miner;
pub mod oracle;
pub mod pattern;
pub mod scf;
pub mod series;
pub mod weights;

pub use config::{CandidateGen, MiningConfig, Preset, PruneMode, SupportMethod};
pub use error::{OpfError, Result};
pub use eval::{
    calinski_harabasz, cluster_and_score, extract_features, kmeans, silhouette, ClusteringResult,
    FeatureMatrix, FeatureValue, KMeansFit,
};
pub use fusion::{
    allowed_suffix_groups, build_plist, enumerate_extensions, fuse, group_of, prefixop, suffixop,
    FusionCase, FusionOutcome, GroupLabel, Priority,
};
pub use miner::{
    mine, mine_dataset, mine_dataset_with, mine_level2, Execution, FrequentPattern, Metrics,
    MiningResult, TraceEvent,
};
pub use oracle::oracle_occurrences;
pub use pattern::{relative_order, Pattern};
pub use scf::{
    check_prefix_prune, check_suffix_count_prune, check_suffix_prune, match_support, scf_fuse,
    PatternRecord, PositionSet, ScfProducts,
};
pub use series::TimeSeries;
pub use weights::{forgetting_weights, fsup, ForgettingWeights, KSpec, OccurrenceList};

/// Caps the global rayon pool at `threads` workers (0 = one per core).
///
/// Must run before any parallel work; later calls fail. A no-op without the
/// `parallel` feature.
pub fn init_thread_pool(threads: usize) -> Result<()> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| OpfError::config(format!("thread pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}
