use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use opf_core::{CandidateGen, KSpec, MiningConfig, Preset, Priority, PruneMode, SupportMethod};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "opf",
    version,
    about = "Frequent order-preserving pattern mining with forgetting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine frequent patterns from every series in a dataset.
    Mine(MineArgs),
    /// Run a grid of presets and thresholds and tabulate work counters.
    Bench(BenchArgs),
    /// Build a pattern-support feature matrix.
    Features(FeaturesArgs),
    /// Cluster a feature matrix with k-means and score it.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ValueKind {
    #[default]
    Support,
    Presence,
}

/// Strategy flags shared by `mine` and `features`.
#[derive(Debug, Clone, Args)]
pub struct MiningFlags {
    /// Forgetting factor as a multiple of 1/n.
    #[arg(long, conflicts_with = "k_abs")]
    pub k_coeff: Option<f64>,
    /// Forgetting factor as an absolute value.
    #[arg(long)]
    pub k_abs: Option<f64>,
    /// Named variant; the axis flags below override its settings.
    #[arg(long, default_value = "opf-miner", value_parser = parse_preset)]
    pub preset: Preset,
    #[arg(long, value_parser = parse_from_str::<CandidateGen>)]
    pub candidate_gen: Option<CandidateGen>,
    #[arg(long, value_parser = parse_from_str::<Priority>)]
    pub priority: Option<Priority>,
    #[arg(long, value_parser = parse_from_str::<SupportMethod>)]
    pub support: Option<SupportMethod>,
    #[arg(long, value_parser = parse_from_str::<PruneMode>)]
    pub prune: Option<PruneMode>,
    #[arg(long)]
    pub max_length: Option<usize>,
}

impl MiningFlags {
    pub fn k_spec(&self) -> KSpec {
        match (self.k_coeff, self.k_abs) {
            (_, Some(k)) => KSpec::Absolute(k),
            (Some(c), None) => KSpec::Coefficient(c),
            (None, None) => KSpec::Coefficient(1.0),
        }
    }

    pub fn config(&self, minsup: f64) -> CliResult<MiningConfig> {
        let mut cfg = MiningConfig::preset(self.preset, minsup)
            .with_k(self.k_spec())
            .with_max_length(self.max_length);
        if let Some(g) = self.candidate_gen {
            cfg.candidate_gen = g;
        }
        if let Some(p) = self.priority {
            cfg.priority = p;
        }
        if let Some(s) = self.support {
            cfg.support_method = s;
        }
        if let Some(p) = self.prune {
            cfg.prune = p;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct MineArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub minsup: f64,
    #[command(flatten)]
    pub mining: MiningFlags,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub emit_occurrences: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated preset names.
    #[arg(long, value_delimiter = ',', value_parser = parse_preset, default_value = "opf-miner,opf-noprune,opf-nogroup,mat-opf")]
    pub presets: Vec<Preset>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub minsup_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k_coeff_list: Vec<f64>,
    /// Concatenate each series with itself this many times.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub replicate: Vec<usize>,
    #[arg(long)]
    pub max_length: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct FeaturesArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub minsup: f64,
    #[command(flatten)]
    pub mining: MiningFlags,
    #[arg(long, value_enum, default_value_t)]
    pub value: ValueKind,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("ks").required(true).args(["k", "k_list"]))]
pub struct EvalArgs {
    #[arg(long)]
    pub features: PathBuf,
    /// Number of clusters.
    #[arg(long = "K")]
    pub k: Option<usize>,
    #[arg(long = "K-list", value_delimiter = ',')]
    pub k_list: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// z-score each feature column before clustering.
    #[arg(long)]
    pub standardize: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl EvalArgs {
    pub fn ks(&self) -> Vec<usize> {
        match (&self.k_list, self.k) {
            (Some(list), _) => list.clone(),
            (None, Some(k)) => vec![k],
            (None, None) => Vec::new(),
        }
    }
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: opf_core::OpfError| e.to_string())
}

fn parse_from_str<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr<Err = opf_core::OpfError>,
{
    s.parse().map_err(|e: opf_core::OpfError| e.to_string())
}

pub(crate) fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
