//! Dataset files: one series per line, comma-separated decimal values.
//!
//! ```text
//! # comment lines and blank lines are skipped
//! id=AMZN,15,32,29,27
//! 1.5e2,151.25,149
//! ```
//!
//! A line may start with an `id=<label>` token; otherwise the series is
//! named `s<k>` after its 1-based position among the series.

use std::fs;
use std::path::Path;

use opf_core::TimeSeries;

use crate::error::{CliError, CliResult};

pub fn read_dataset(path: &Path) -> CliResult<Vec<TimeSeries>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    parse_dataset(&text)
}

pub fn parse_dataset(text: &str) -> CliResult<Vec<TimeSeries>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split(',').map(str::trim).peekable();
        let id = match tokens.peek() {
            Some(tok) if tok.starts_with("id=") => {
                let id = tok["id=".len()..].trim().to_owned();
                tokens.next();
                if id.is_empty() {
                    return Err(CliError::Parse(format!("line {}: empty id", lineno + 1)));
                }
                id
            }
            _ => format!("s{}", out.len() + 1),
        };
        let values = tokens
            .filter(|tok| !tok.is_empty())
            .map(|tok| parse_value(tok, lineno + 1))
            .collect::<CliResult<Vec<f64>>>()?;
        let series = TimeSeries::new(values)
            .map_err(|e| CliError::Parse(format!("line {}: {}", lineno + 1, e)))?;
        out.push(series.with_id(id));
    }
    if out.is_empty() {
        return Err(CliError::Parse("dataset contains no series".into()));
    }
    Ok(out)
}

fn parse_value(tok: &str, lineno: usize) -> CliResult<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| CliError::Parse(format!("line {}: '{}' is not a number", lineno, tok)))?;
    if !v.is_finite() {
        return Err(CliError::Parse(format!(
            "line {}: non-finite value '{}'",
            lineno, tok
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ids_blanks_and_scientific() {
        let ds = parse_dataset("id=a,1,2,3\n\n  4.5, 1e1 ,-2\n# note\nid=b,7\n").unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds[0].id(), Some("a"));
        assert_eq!(ds[0].values(), &[1.0, 2.0, 3.0]);
        assert_eq!(ds[1].id(), Some("s2"));
        assert_eq!(ds[1].values(), &[4.5, 10.0, -2.0]);
        assert_eq!(ds[2].id(), Some("b"));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse_dataset("1,2,x\n").is_err());
        assert!(parse_dataset("1,NaN,3\n").is_err());
        assert!(parse_dataset("1,inf\n").is_err());
        assert!(parse_dataset("\n\n").is_err());
        assert!(parse_dataset("id=only\n").is_err());
        assert!(parse_dataset("id=,1,2\n").is_err());
    }
}
