use std::fmt;
use std::str::FromStr;

use crate::error::{OpfError, Result};
use crate::fusion::Priority;
use crate::weights::KSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateGen {
    /// Fusion restricted to the admissible suffix groups.
    #[default]
    GpFusion,
    /// Fusion tested against every pattern of the level.
    PlainFusion,
    /// All `m+1` one-step extensions of each prefix pattern.
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportMethod {
    /// Incremental derivation from sub-pattern occurrences.
    #[default]
    Scf,
    /// Full window scan per candidate.
    NaiveMatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PruneMode {
    /// `|pre_p| < minsup` and `sufsup_q < minsup`.
    #[default]
    Both,
    PrefixOnly,
    SuffixOnly,
    /// `|pre_p| < minsup` and `|suf_q| < minsup`.
    SameSuffix,
    None,
}

impl PruneMode {
    pub fn prunes_prefix(self) -> bool {
        matches!(
            self,
            PruneMode::Both | PruneMode::PrefixOnly | PruneMode::SameSuffix
        )
    }

    pub fn prunes_suffix(self) -> bool {
        matches!(
            self,
            PruneMode::Both | PruneMode::SuffixOnly | PruneMode::SameSuffix
        )
    }
}

macro_rules! str_enum {
    ($ty:ty, $what:literal, { $($variant:path => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $($variant => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $ty {
            type Err = OpfError;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
                    $($name => Ok($variant),)+
                    other => Err(OpfError::config(format!(
                        concat!("unknown ", $what, " '{}' (expected one of: {})"),
                        other,
                        [$($name),+].join(", ")
                    ))),
                }
            }
        }
    };
}

str_enum!(CandidateGen, "candidate generation", {
    CandidateGen::GpFusion => "gp-fusion",
    CandidateGen::PlainFusion => "plain-fusion",
    CandidateGen::Enumeration => "enumeration",
});

str_enum!(Priority, "priority", {
    Priority::Max => "max",
    Priority::Min => "min",
    Priority::None => "none",
});

str_enum!(SupportMethod, "support method", {
    SupportMethod::Scf => "scf",
    SupportMethod::NaiveMatch => "naive-match",
});

str_enum!(PruneMode, "prune mode", {
    PruneMode::Both => "both",
    PruneMode::PrefixOnly => "prefix-only",
    PruneMode::SuffixOnly => "suffix-only",
    PruneMode::SameSuffix => "same-suffix",
    PruneMode::None => "none",
});

/// Named algorithm variants; each fixes the four strategy axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    OpfMiner,
    OpfEnum,
    OpfNoGroup,
    OpfNoPriority,
    OpfMinPriority,
    MatOpf,
    OpfSame,
    OpfNoPre,
    OpfNoSuf,
    OpfNoPrune,
    EfoOpf,
}

str_enum!(Preset, "preset", {
    Preset::OpfMiner => "opf-miner",
    Preset::OpfEnum => "opf-enum",
    Preset::OpfNoGroup => "opf-nogroup",
    Preset::OpfNoPriority => "opf-nopriority",
    Preset::OpfMinPriority => "opf-minpriority",
    Preset::MatOpf => "mat-opf",
    Preset::OpfSame => "opf-same",
    Preset::OpfNoPre => "opf-nopre",
    Preset::OpfNoSuf => "opf-nosuf",
    Preset::OpfNoPrune => "opf-noprune",
    Preset::EfoOpf => "efo-opf",
});

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::OpfMiner,
        Preset::OpfEnum,
        Preset::OpfNoGroup,
        Preset::OpfNoPriority,
        Preset::OpfMinPriority,
        Preset::MatOpf,
        Preset::OpfSame,
        Preset::OpfNoPre,
        Preset::OpfNoSuf,
        Preset::OpfNoPrune,
        Preset::EfoOpf,
    ];

    /// `(candidate_gen, priority, support_method, prune)`.
    pub fn axes(self) -> (CandidateGen, Priority, SupportMethod, PruneMode) {
        use CandidateGen::*;
        use SupportMethod::*;
        match self {
            Preset::OpfMiner => (GpFusion, Priority::Max, Scf, PruneMode::Both),
            Preset::OpfEnum => (Enumeration, Priority::Max, Scf, PruneMode::Both),
            Preset::OpfNoGroup => (PlainFusion, Priority::Max, Scf, PruneMode::Both),
            Preset::OpfNoPriority => (GpFusion, Priority::None, Scf, PruneMode::Both),
            Preset::OpfMinPriority => (GpFusion, Priority::Min, Scf, PruneMode::Both),
            Preset::MatOpf => (PlainFusion, Priority::Max, NaiveMatch, PruneMode::None),
            Preset::OpfSame => (GpFusion, Priority::Max, Scf, PruneMode::SameSuffix),
            Preset::OpfNoPre => (GpFusion, Priority::Max, Scf, PruneMode::SuffixOnly),
            Preset::OpfNoSuf => (GpFusion, Priority::Max, Scf, PruneMode::PrefixOnly),
            Preset::OpfNoPrune => (GpFusion, Priority::Max, Scf, PruneMode::None),
            Preset::EfoOpf => (PlainFusion, Priority::None, Scf, PruneMode::PrefixOnly),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig {
    pub minsup: f64,
    pub k: KSpec,
    pub candidate_gen: CandidateGen,
    pub priority: Priority,
    pub support_method: SupportMethod,
    pub prune: PruneMode,
    /// Longest pattern length to mine; `None` runs until a level is empty.
    pub max_length: Option<usize>,
    /// Record pruning and fusion events in the result.
    pub trace: bool,
}

impl MiningConfig {
    pub fn new(minsup: f64) -> Self {
        MiningConfig::preset(Preset::OpfMiner, minsup)
    }

    pub fn preset(preset: Preset, minsup: f64) -> Self {
        let (candidate_gen, priority, support_method, prune) = preset.axes();
        MiningConfig {
            minsup,
            k: KSpec::default(),
            candidate_gen,
            priority,
            support_method,
            prune,
            max_length: None,
            trace: false,
        }
    }

    pub fn with_k(mut self, k: KSpec) -> Self {
        self.k = k;
        self
    }

    pub fn with_max_length(mut self, max_length: Option<usize>) -> Self {
        self.max_length = max_length;
        self
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }

    /// The preset whose axes match this config, if any.
    pub fn preset_name(&self) -> Option<Preset> {
        let axes = (
            self.candidate_gen,
            self.priority,
            self.support_method,
            self.prune,
        );
        Preset::ALL.into_iter().find(|p| p.axes() == axes)
    }

    pub fn validate(&self) -> Result<()> {
        if self.minsup <= 0.0 || !self.minsup.is_finite() {
            return Err(OpfError::config(format!(
                "minsup must be a positive finite number (minsup > 0), got {}",
                self.minsup
            )));
        }
        match self.k {
            KSpec::Coefficient(c) if c <= 0.0 || !c.is_finite() => {
                return Err(OpfError::config(format!(
                    "k coefficient must be > 0, got {}",
                    c
                )))
            }
            KSpec::Absolute(k) if k <= 0.0 || !k.is_finite() => {
                return Err(OpfError::config(format!(
                    "forgetting factor k must be > 0, got {}",
                    k
                )))
            }
            _ => {}
        }
        if let Some(max) = self.max_length {
            if max < 2 {
                return Err(OpfError::config(format!(
                    "max length must be >= 2, got {}",
                    max
                )));
            }
        }
        Ok(())
    }
}
