use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use opf_core::{
    cluster_and_score, extract_features, mine_dataset, FeatureMatrix, FeatureValue, KSpec,
    MiningConfig, MiningResult, Pattern, TimeSeries,
};

use crate::args::{config_err, BenchArgs, EvalArgs, FeaturesArgs, Format, MineArgs, ValueKind};
use crate::dataset::read_dataset;
use crate::error::{CliError, CliResult};
use crate::report::{RunReport, TOOL, VERSION};

pub fn write_output(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {}", p.display(), e))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Runtime(format!("stdout: {e}")))
        }
    }
}

pub fn run_mine(args: &MineArgs) -> CliResult<()> {
    let cfg = args.mining.config(args.minsup)?;
    let data = read_dataset(&args.input)?;
    let results = mine_dataset(&data, &cfg)?;
    let report = RunReport::new(&cfg, &results, args.emit_occurrences);
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    write_output(args.output.as_deref(), &text)
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub preset: String,
    pub replicate: usize,
    pub n: usize,
    pub k_coeff: f64,
    pub minsup: f64,
    pub patterns: usize,
    pub candidates: u64,
    pub fusions: u64,
    pub support_calcs: u64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Serialize)]
struct BenchReport<'a> {
    tool: &'a str,
    version: &'a str,
    input: String,
    rows: &'a [BenchRow],
}

type SupportTable = Vec<Vec<(Pattern, f64)>>;

const EQUIVALENCE_TOL: f64 = 1e-9;

pub fn run_bench(args: &BenchArgs) -> CliResult<()> {
    if args.presets.is_empty() {
        return Err(config_err("at least one preset is required"));
    }
    if args.replicate.contains(&0) {
        return Err(config_err("replication factors must be >= 1"));
    }
    for &minsup in &args.minsup_list {
        for &c in &args.k_coeff_list {
            MiningConfig::new(minsup)
                .with_k(KSpec::Coefficient(c))
                .with_max_length(args.max_length)
                .validate()?;
        }
    }
    let data = read_dataset(&args.input)?;

    let mut rows = Vec::new();
    for &rep in &args.replicate {
        let scaled = data
            .iter()
            .map(|t| t.replicate(rep))
            .collect::<Result<Vec<TimeSeries>, _>>()?;
        let n: usize = scaled.iter().map(TimeSeries::len).sum();
        for &c in &args.k_coeff_list {
            for &minsup in &args.minsup_list {
                let mut reference: Option<(String, SupportTable)> = None;
                for &preset in &args.presets {
                    let cfg = MiningConfig::preset(preset, minsup)
                        .with_k(KSpec::Coefficient(c))
                        .with_max_length(args.max_length);
                    let results = mine_dataset(&scaled, &cfg)?;
                    let table: SupportTable =
                        results.iter().map(MiningResult::support_map).collect();
                    match &reference {
                        None => reference = Some((preset.name().to_owned(), table)),
                        Some((ref_name, ref_table)) => {
                            if let Some(diff) = diff_tables(ref_table, &table) {
                                return Err(CliError::Equivalence(format!(
                                    "{} and {} disagree at replicate={} k_coeff={} minsup={}: {}",
                                    ref_name,
                                    preset.name(),
                                    rep,
                                    c,
                                    minsup,
                                    diff
                                )));
                            }
                        }
                    }
                    rows.push(BenchRow {
                        preset: preset.name().to_owned(),
                        replicate: rep,
                        n,
                        k_coeff: c,
                        minsup,
                        patterns: results.iter().map(MiningResult::len).sum(),
                        candidates: results.iter().map(|r| r.metrics.candidates).sum(),
                        fusions: results.iter().map(|r| r.metrics.fusions).sum(),
                        support_calcs: results.iter().map(|r| r.metrics.support_calcs).sum(),
                        wall_time_ms: results
                            .iter()
                            .map(|r| r.metrics.wall_time.as_secs_f64() * 1e3)
                            .sum(),
                    });
                }
            }
        }
    }

    let text = match args.format {
        Format::Json => {
            let report = BenchReport {
                tool: TOOL,
                version: VERSION,
                input: args.input.display().to_string(),
                rows: &rows,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("bench report serializes");
            s.push('\n');
            s
        }
        Format::Csv => bench_csv(&rows),
    };
    write_output(args.output.as_deref(), &text)
}

fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "preset,replicate,n,k_coeff,minsup,patterns,candidates,fusions,support_calcs,wall_time_ms\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:.3}\n",
            r.preset,
            r.replicate,
            r.n,
            r.k_coeff,
            r.minsup,
            r.patterns,
            r.candidates,
            r.fusions,
            r.support_calcs,
            r.wall_time_ms
        ));
    }
    out
}

/// Describes the first differences between two per-series support tables.
fn diff_tables(a: &SupportTable, b: &SupportTable) -> Option<String> {
    let mut notes = Vec::new();
    for (i, (sa, sb)) in a.iter().zip(b).enumerate() {
        let ma: BTreeMap<&Pattern, f64> = sa.iter().map(|(p, s)| (p, *s)).collect();
        let mb: BTreeMap<&Pattern, f64> = sb.iter().map(|(p, s)| (p, *s)).collect();
        for (p, s) in &ma {
            match mb.get(p) {
                None => notes.push(format!("series {}: {} only in first", i + 1, p)),
                Some(t) if (s - t).abs() > EQUIVALENCE_TOL => {
                    notes.push(format!("series {}: {} support {} vs {}", i + 1, p, s, t))
                }
                _ => {}
            }
        }
        for p in mb.keys().filter(|p| !ma.contains_key(*p)) {
            notes.push(format!("series {}: {} only in second", i + 1, p));
        }
    }
    if notes.is_empty() {
        None
    } else {
        notes.truncate(10);
        Some(notes.join("; "))
    }
}

pub fn run_features(args: &FeaturesArgs) -> CliResult<()> {
    let cfg = args.mining.config(args.minsup)?;
    let data = read_dataset(&args.input)?;
    let value = match args.value {
        ValueKind::Support => FeatureValue::Support,
        ValueKind::Presence => FeatureValue::Presence,
    };
    let fm = extract_features(&data, &cfg, value)?;
    write_output(args.output.as_deref(), &features_to_csv(&fm))
}

/// Header `id,<pattern>,...` with patterns written as `1-3-2`.
pub fn features_to_csv(fm: &FeatureMatrix) -> String {
    let mut out = String::from("id");
    for p in &fm.vocabulary {
        out.push(',');
        out.push_str(&p.to_dashed());
    }
    out.push('\n');
    for (id, row) in fm.ids.iter().zip(&fm.rows) {
        out.push_str(id);
        for v in row {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn features_from_csv(text: &str) -> CliResult<FeatureMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Parse("feature file is empty".into()))?;
    let mut cols = header.split(',');
    if cols.next().map(str::trim) != Some("id") {
        return Err(CliError::Parse(
            "feature header must start with 'id'".into(),
        ));
    }
    let vocabulary = cols
        .map(|c| Pattern::parse_dashed(c.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Parse(format!("feature header: {e}")))?;
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut fields = line.split(',');
        ids.push(fields.next().unwrap_or_default().trim().to_owned());
        let row = fields
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Parse(format!("row {}: bad value '{}'", i + 1, f)))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Parse("feature file has no rows".into()));
    }
    FeatureMatrix::new(ids, vocabulary, rows).map_err(|e| CliError::Parse(e.to_string()))
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum IndexValue {
    Value(f64),
    /// `"inf"` when the within-cluster scatter is zero.
    Sentinel(&'static str),
}

fn index_value(v: Option<f64>) -> Option<IndexValue> {
    v.map(|x| {
        if x.is_infinite() {
            IndexValue::Sentinel("inf")
        } else {
            IndexValue::Value(x)
        }
    })
}

#[derive(Debug, Serialize)]
struct EvalEntry {
    k: usize,
    sc: Option<IndexValue>,
    chi: Option<IndexValue>,
    iterations: usize,
    converged: bool,
    repairs: usize,
    objective: f64,
    /// 1-based cluster labels, in row order.
    assignments: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct EvalReport {
    tool: &'static str,
    version: &'static str,
    rows: usize,
    cols: usize,
    standardized: bool,
    seed: u64,
    ids: Vec<String>,
    results: Vec<EvalEntry>,
}

pub fn run_eval(args: &EvalArgs) -> CliResult<()> {
    let ks = args.ks();
    if ks.is_empty() {
        return Err(config_err("give --K or --K-list"));
    }
    let text = fs::read_to_string(&args.features)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {}", args.features.display(), e)))?;
    let mut fm = features_from_csv(&text)?;
    if args.standardize {
        fm.standardize();
    }
    let mut results = Vec::with_capacity(ks.len());
    for k in ks {
        let res = cluster_and_score(&fm.rows, k, args.seed)?;
        if res.sc.is_none() {
            log::warn!(
                "K={}: fewer than two non-empty clusters, indices undefined",
                k
            );
        }
        results.push(EvalEntry {
            k,
            sc: index_value(res.sc),
            chi: index_value(res.chi),
            iterations: res.fit.iterations,
            converged: res.fit.converged,
            repairs: res.fit.repairs,
            objective: res.fit.objective(),
            assignments: res.fit.assignments.iter().map(|c| c + 1).collect(),
        });
    }
    let report = EvalReport {
        tool: TOOL,
        version: VERSION,
        rows: fm.n_rows(),
        cols: fm.n_cols(),
        standardized: args.standardize,
        seed: args.seed,
        ids: fm.ids.clone(),
        results,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("eval report serializes");
    s.push('\n');
    write_output(args.output.as_deref(), &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use opf_core::{fixtures, KSpec};

    #[test]
    fn feature_csv_round_trip() {
        let cfg = MiningConfig::new(1.5).with_k(KSpec::Absolute(0.1));
        let fm = extract_features(&[fixtures::worked_series()], &cfg, FeatureValue::Support).unwrap();
        let back = features_from_csv(&features_to_csv(&fm)).unwrap();
        assert_eq!(back, fm);
    }

    #[test]
    fn feature_csv_shape_errors() {
        assert!(features_from_csv("").is_err());
        assert!(features_from_csv("name,1-2\na,1\n").is_err());
        assert!(features_from_csv("id,1-2,2-1\na,1\n").is_err());
        assert!(features_from_csv("id,1-2\na,zz\n").is_err());
        assert!(features_from_csv("id,1-2\n").is_err());
    }

    #[test]
    fn table_diff_reports_mismatch() {
        let p = Pattern::new(vec![1, 2]).unwrap();
        let q = Pattern::new(vec![2, 1]).unwrap();
        let a = vec![vec![(p.clone(), 1.0)]];
        let b = vec![vec![(p.clone(), 1.0), (q, 2.0)]];
        assert!(diff_tables(&a, &a).is_none());
        assert!(diff_tables(&a, &b).unwrap().contains("only in second"));
        let c = vec![vec![(p, 1.5)]];
        assert!(diff_tables(&a, &c).unwrap().contains("support"));
    }
}
