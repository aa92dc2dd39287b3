use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use opf_cli::report::{parse_csv_rows, RunReport};
use tempfile::TempDir;

const WORKED: &str = "id=worked,15,32,29,27,34,33,25,20,28,23\n";

fn opf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opf"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn dataset(dir: &TempDir) -> PathBuf {
    let mut text = String::from("# synthetic\n");
    for (i, seed) in [3u64, 5, 8, 13, 21, 34].iter().enumerate() {
        let t = opf_core::fixtures::random_walk(120 + 20 * i, *seed);
        let vals: Vec<String> = t.values().iter().map(|v| format!("{v:.4}")).collect();
        text.push_str(&format!("id=w{},{}\n", i + 1, vals.join(",")));
    }
    write(dir, "walks.csv", &text)
}

#[test]
fn mine_worked_series_json() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.csv", WORKED);
    let out = stdout(&opf(&[
        "mine",
        "--input",
        s(&input),
        "--minsup",
        "1.5",
        "--k-abs",
        "0.1",
        "--emit-occurrences",
    ]));
    let report = RunReport::from_json(&out).unwrap();
    let series = &report.series[0];
    assert_eq!(series.id, "worked");
    assert_eq!(series.pattern_count, 5);
    let row = series
        .patterns
        .iter()
        .find(|p| p.ranks == [1, 3, 2])
        .unwrap();
    assert_eq!(row.occurrences.as_deref(), Some(&[3, 6, 10][..]));
    assert!((row.support - 2.166905).abs() < 1e-6);
}

#[test]
fn mine_csv_to_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.csv", WORKED);
    let output = dir.path().join("out.csv");
    let o = opf(&[
        "mine",
        "--input",
        s(&input),
        "--minsup",
        "1.5",
        "--k-abs",
        "0.1",
        "--format",
        "csv",
        "--output",
        s(&output),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows = parse_csv_rows(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(rows.len(), 5);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.csv", WORKED);
    let bad = write(&dir, "bad.csv", "1,2,oops\n");
    let missing = dir.path().join("missing.csv");

    let code = |o: Output| o.status.code().unwrap();
    assert_eq!(
        code(opf(&["mine", "--input", s(&input), "--minsup", "0"])),
        2
    );
    assert_eq!(
        code(opf(&["mine", "--input", s(&missing), "--minsup", "0"])),
        2,
        "config is checked before input"
    );
    assert_eq!(
        code(opf(&[
            "mine",
            "--input",
            s(&input),
            "--minsup",
            "1",
            "--k-abs",
            "-1"
        ])),
        2
    );
    assert_eq!(
        code(opf(&["mine", "--input", s(&missing), "--minsup", "1"])),
        3
    );
    assert_eq!(code(opf(&["mine", "--input", s(&bad), "--minsup", "1"])), 3);
    assert_eq!(
        code(opf(&["eval", "--features", s(&missing), "--K", "2"])),
        3
    );
}

#[test]
fn presets_agree_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let input = dataset(&dir);
    let run = |preset: &str| {
        let out = stdout(&opf(&[
            "mine",
            "--input",
            s(&input),
            "--minsup",
            "4",
            "--preset",
            preset,
        ]));
        let report = RunReport::from_json(&out).unwrap();
        report
            .series
            .into_iter()
            .map(|s| {
                s.patterns
                    .into_iter()
                    .map(|p| (p.ranks, p.support))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let base = run("opf-miner");
    assert!(base.iter().any(|s| s.len() > 4));
    for preset in ["mat-opf", "opf-enum", "opf-nogroup", "efo-opf", "opf-same"] {
        assert_eq!(run(preset), base, "{preset}");
    }
}

#[test]
fn bench_grid_is_monotone() {
    let dir = TempDir::new().unwrap();
    let input = dataset(&dir);
    let out = stdout(&opf(&[
        "bench",
        "--input",
        s(&input),
        "--minsup-list",
        "2,4,8",
        "--k-coeff-list",
        "1",
        "--presets",
        "opf-miner,mat-opf",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let miner: Vec<&serde_json::Value> =
        rows.iter().filter(|r| r["preset"] == "opf-miner").collect();
    for w in miner.windows(2) {
        assert!(w[1]["patterns"].as_u64() <= w[0]["patterns"].as_u64());
        assert!(w[1]["candidates"].as_u64() <= w[0]["candidates"].as_u64());
    }
    for pair in rows.chunks(2) {
        assert_eq!(pair[0]["patterns"], pair[1]["patterns"]);
    }
}

#[test]
fn bench_replication_scales_n() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t.csv", WORKED);
    let out = stdout(&opf(&[
        "bench",
        "--input",
        s(&input),
        "--minsup-list",
        "1.5",
        "--replicate",
        "1,3",
        "--presets",
        "opf-miner",
        "--format",
        "csv",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("opf-miner,1,10,"));
    assert!(lines[2].starts_with("opf-miner,3,30,"));
}

#[test]
fn features_and_eval_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let input = dataset(&dir);
    let f1 = dir.path().join("f1.csv");
    let f2 = dir.path().join("f2.csv");
    for f in [&f1, &f2] {
        stdout(&opf(&[
            "features",
            "--input",
            s(&input),
            "--minsup",
            "5",
            "--output",
            s(f),
        ]));
    }
    let feats = fs::read_to_string(&f1).unwrap();
    assert_eq!(feats, fs::read_to_string(&f2).unwrap());
    assert!(feats.starts_with("id,1-2,2-1,"));
    assert_eq!(feats.lines().count(), 7);

    let e1 = stdout(&opf(&[
        "eval",
        "--features",
        s(&f1),
        "--K-list",
        "2,3",
        "--seed",
        "7",
        "--standardize",
    ]));
    let e2 = stdout(&opf(&[
        "eval",
        "--features",
        s(&f1),
        "--K-list",
        "2,3",
        "--seed",
        "7",
        "--standardize",
    ]));
    assert_eq!(e1, e2);
    let v: serde_json::Value = serde_json::from_str(&e1).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        let k = r["k"].as_u64().unwrap();
        let labels: Vec<u64> = r["assignments"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a.as_u64().unwrap())
            .collect();
        assert!(labels.iter().all(|&a| a >= 1 && a <= k));
        let sc = r["sc"].as_f64().unwrap();
        assert!((-1.0..=1.0).contains(&sc));
    }
}

#[test]
fn eval_with_one_cluster_per_row() {
    let dir = TempDir::new().unwrap();
    let feats = write(&dir, "f.csv", "id,1-2,2-1\na,1,0\nb,0,1\nc,2,2\n");
    let out = stdout(&opf(&["eval", "--features", s(&feats), "--K", "3"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"][0]["chi"], "inf");
    assert_eq!(v["results"][0]["objective"], 0.0);
    let code = opf(&["eval", "--features", s(&feats), "--K", "4"])
        .status
        .code();
    assert_eq!(code, Some(2));
}
