//! Mining reports in JSON and CSV.
//!
//! Supports are rounded to 6 decimal places before writing; reading a report
//! back yields exactly those rounded values. Patterns are listed by length,
//! then lexicographically by ranks.

use serde::{Deserialize, Serialize};

use opf_core::{KSpec, MiningConfig, MiningResult, Pattern};

use crate::error::{CliError, CliResult};

pub const TOOL: &str = "opf";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KEcho {
    Coefficient(f64),
    Absolute(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub preset: Option<String>,
    pub minsup: f64,
    pub k: KEcho,
    pub candidate_gen: String,
    pub priority: String,
    pub support: String,
    pub prune: String,
    pub max_length: Option<usize>,
}

impl From<&MiningConfig> for ConfigEcho {
    fn from(c: &MiningConfig) -> Self {
        ConfigEcho {
            preset: c.preset_name().map(|p| p.name().to_owned()),
            minsup: c.minsup,
            k: match c.k {
                KSpec::Coefficient(v) => KEcho::Coefficient(v),
                KSpec::Absolute(v) => KEcho::Absolute(v),
            },
            candidate_gen: c.candidate_gen.name().to_owned(),
            priority: c.priority.name().to_owned(),
            support: c.support_method.name().to_owned(),
            prune: c.prune.name().to_owned(),
            max_length: c.max_length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternRow {
    pub ranks: Vec<u32>,
    pub length: usize,
    pub group: u8,
    pub support: f64,
    pub occurrence_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occurrences: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsEcho {
    pub candidates: u64,
    pub fusions: u64,
    pub support_calcs: u64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub id: String,
    pub n: usize,
    pub k: f64,
    pub pattern_count: usize,
    pub patterns: Vec<PatternRow>,
    pub metrics: MetricsEcho,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub series: Vec<SeriesReport>,
}

impl RunReport {
    pub fn new(config: &MiningConfig, results: &[MiningResult], emit_occurrences: bool) -> Self {
        let series = results
            .iter()
            .enumerate()
            .map(|(i, r)| SeriesReport {
                id: r.series_id.clone().unwrap_or_else(|| format!("s{}", i + 1)),
                n: r.n,
                k: r.k,
                pattern_count: r.len(),
                patterns: r
                    .patterns()
                    .map(|fp| PatternRow {
                        ranks: fp.pattern.ranks().to_vec(),
                        length: fp.pattern.len(),
                        group: fp.group.number(),
                        support: round6(fp.support),
                        occurrence_count: fp.occurrences.len(),
                        occurrences: emit_occurrences.then(|| fp.occurrences.ends().to_vec()),
                    })
                    .collect(),
                metrics: MetricsEcho {
                    candidates: r.metrics.candidates,
                    fusions: r.metrics.fusions,
                    support_calcs: r.metrics.support_calcs,
                    wall_time_ms: r.metrics.wall_time.as_secs_f64() * 1e3,
                },
            })
            .collect();
        RunReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            config: config.into(),
            series,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<RunReport> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("bad report: {e}")))
    }

    /// One row per pattern; run and per-series metadata go in `#` lines.
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let k = match c.k {
            KEcho::Coefficient(v) => format!("k_coeff={v}"),
            KEcho::Absolute(v) => format!("k_abs={v}"),
        };
        let mut out = format!(
            "# {} {} preset={} minsup={} {} candidate_gen={} priority={} support={} prune={} max_length={}\n",
            self.tool,
            self.version,
            c.preset.as_deref().unwrap_or("custom"),
            c.minsup,
            k,
            c.candidate_gen,
            c.priority,
            c.support,
            c.prune,
            c.max_length.map(|m| m.to_string()).unwrap_or_else(|| "none".into()),
        );
        for s in &self.series {
            out.push_str(&format!(
                "# series={} n={} k={} patterns={} candidates={} fusions={} support_calcs={} wall_time_ms={:.3}\n",
                s.id,
                s.n,
                s.k,
                s.pattern_count,
                s.metrics.candidates,
                s.metrics.fusions,
                s.metrics.support_calcs,
                s.metrics.wall_time_ms
            ));
        }
        out.push_str("series_id,length,ranks,group,support,occurrence_count,occurrences\n");
        for s in &self.series {
            for p in &s.patterns {
                let ranks: Vec<String> = p.ranks.iter().map(u32::to_string).collect();
                let occ = p
                    .occurrences
                    .as_ref()
                    .map(|o| o.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{:.6},{},{}\n",
                    s.id,
                    p.length,
                    ranks.join("-"),
                    p.group,
                    p.support,
                    p.occurrence_count,
                    occ
                ));
            }
        }
        out
    }
}

/// Pattern rows of a CSV report, as `(series_id, row)` pairs in file order.
pub fn parse_csv_rows(text: &str) -> CliResult<Vec<(String, PatternRow)>> {
    let bad = |line: usize, what: &str| CliError::Parse(format!("csv line {}: {}", line, what));
    let mut out = Vec::new();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(bad(lineno, "expected 7 fields"));
        }
        let pattern = Pattern::parse_dashed(f[2]).map_err(|e| bad(lineno, &e.to_string()))?;
        let occurrences = if f[6].trim().is_empty() {
            None
        } else {
            Some(
                f[6].split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| bad(lineno, "bad occurrence"))
                    })
                    .collect::<CliResult<Vec<_>>>()?,
            )
        };
        out.push((
            f[0].to_owned(),
            PatternRow {
                ranks: pattern.ranks().to_vec(),
                length: f[1].parse().map_err(|_| bad(lineno, "bad length"))?,
                group: f[3].parse().map_err(|_| bad(lineno, "bad group"))?,
                support: f[4].parse().map_err(|_| bad(lineno, "bad support"))?,
                occurrence_count: f[5].parse().map_err(|_| bad(lineno, "bad count"))?,
                occurrences,
            },
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use opf_core::{fixtures, mine};

    fn worked_report(emit: bool) -> RunReport {
        let cfg = MiningConfig::new(1.5).with_k(KSpec::Absolute(0.1));
        let res = mine(&fixtures::worked_series(), &cfg).unwrap();
        RunReport::new(&cfg, &[res], emit)
    }

    #[test]
    fn json_round_trip() {
        let report = worked_report(true);
        let back = RunReport::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.series[0].patterns.len(), 5);
        assert_eq!(back.config.preset.as_deref(), Some("opf-miner"));
    }

    #[test]
    fn csv_round_trip() {
        let report = worked_report(true);
        let rows = parse_csv_rows(&report.to_csv()).unwrap();
        let originals: Vec<(String, PatternRow)> = report.series[0]
            .patterns
            .iter()
            .map(|p| (report.series[0].id.clone(), p.clone()))
            .collect();
        assert_eq!(rows, originals);
    }

    #[test]
    fn occurrences_omitted_by_default() {
        let json = worked_report(false).to_json();
        assert!(!json.contains("\"occurrences\""));
    }
}
