use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spectrograph_cli::io::{parse_matrix_market, parse_signal, parse_table};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectrograph"))
        .args(args)
        .env("SPECTROGRAPH_LOG", "error")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn signal_file(dir: &Path, name: &str, values: &[f64]) -> PathBuf {
    let text: String = values.iter().map(|v| format!("{v:.17e}\n")).collect();
    write(dir, name, &text)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (headers, rows) = parse_table(text).unwrap();
    let k = headers.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generated_graph_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.mtx");
    ok(&["gen", "--family", "er-community", "--seed", "5", "--output", p(&out)]);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l == "% seed: 5"));
    let m = parse_matrix_market(&text).unwrap();
    assert_eq!(m.shape(), (50, 50));
    assert!(m.diagonal().iter().all(|&v| v == 0.0));

    let again = dir.path().join("h.mtx");
    ok(&["gen", "--family", "er-community", "--seed", "5", "--output", p(&again)]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn spectral_and_fir_paths_agree_on_the_cycle() {
    let dir = TempDir::new().unwrap();
    let n = 32;
    let graph = dir.path().join("c.mtx");
    ok(&["gen", "--family", "cycle", "--n", &n.to_string(), "--output", p(&graph)]);
    let x: Vec<f64> = (0..n).map(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0).collect();
    let sig = signal_file(dir.path(), "x.csv", &x);
    let exact = column(&ok(&["hilbert", "--input", p(&graph), "--signal", p(&sig)]), "value");
    let fir = column(
        &ok(&["hilbert", "--input", p(&graph), "--signal", p(&sig), "--fir", &n.to_string()]),
        "value",
    );
    for (a, b) in exact.iter().zip(&fir) {
        assert!((a - b).abs() < 1e-6);
    }
    let json: Value = serde_json::from_str(&ok(&[
        "hilbert", "--input", p(&graph), "--signal", p(&sig), "--fir", "16", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["method"], "fir");
    assert!(json["design_residual"].as_f64().unwrap() > 0.0);
}

#[test]
fn demod_emits_five_columns_with_flat_envelope() {
    let dir = TempDir::new().unwrap();
    let n = 32;
    let graph = dir.path().join("c.mtx");
    ok(&["gen", "--family", "cycle", "--n", "32", "--output", p(&graph)]);
    let x: Vec<f64> = (0..n).map(|m| 2.0 * (2.0 * PI * m as f64 / n as f64 + 0.3).cos()).collect();
    let sig = signal_file(dir.path(), "x.csv", &x);
    let text = ok(&["demod", "--input", p(&graph), "--signal", p(&sig)]);
    let (headers, rows) = parse_table(&text).unwrap();
    assert_eq!(headers, ["node", "am", "pm", "unwrapped", "fm"]);
    assert_eq!(rows.len(), n);
    for am in column(&text, "am") {
        assert!((am - 2.0).abs() < 1e-8);
    }
}

#[test]
fn decompose_reports_partition() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "c.csv", "0,1,0,0\n0,0,1,0\n0,0,0,1\n1,0,0,0\n");
    let json: Value = serde_json::from_str(&ok(&["decompose", "--input", p(&graph)])).unwrap();
    assert_eq!(json["n"], 4);
    assert_eq!(json["theta"], 3);
    assert_eq!(json["gamma2"].as_array().unwrap().len(), 1);
    assert_eq!(json["eigenvalues"].as_array().unwrap().len(), 4);
    let csv = ok(&["decompose", "--input", p(&graph), "--format", "csv"]);
    assert_eq!(column(&csv, "re").len(), 4);
}

#[test]
fn theta_matches_prediction_and_is_deterministic() {
    let args = ["theta", "--family", "gaussian", "--n", "200", "--trials", "50", "--seed", "7"];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let json: Value = serde_json::from_str(&first).unwrap();
    assert!((json["predicted"].as_f64().unwrap() - 11.28).abs() < 0.01);
    assert!(json["relative_error"].as_f64().unwrap() <= 0.15);
    assert_eq!(json["parity_failures"], 0);
    assert!(json["mean_real_eigs"].as_f64().unwrap() > 0.0);
}

#[test]
fn anomaly_is_deterministic_and_follows_relabeling() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.mtx");
    ok(&["gen", "--family", "gaussian", "--n", "12", "--seed", "4", "--output", p(&graph)]);
    let a = parse_matrix_market(&fs::read_to_string(&graph).unwrap()).unwrap();
    let x: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).sin()).collect();
    let sig = signal_file(dir.path(), "x.csv", &x);
    let base = ok(&["anomaly", "--input", p(&graph), "--signal", p(&sig)]);
    assert_eq!(base, ok(&["anomaly", "--input", p(&graph), "--signal", p(&sig)]));

    let perm: Vec<usize> = vec![3, 0, 7, 11, 1, 9, 2, 5, 10, 4, 8, 6];
    let mut rows = String::new();
    for i in 0..12 {
        let row: Vec<String> = (0..12).map(|j| format!("{:.17e}", a[(perm[i], perm[j])])).collect();
        rows.push_str(&row.join(","));
        rows.push('\n');
    }
    let pgraph = write(dir.path(), "p.csv", &rows);
    let px: Vec<f64> = perm.iter().map(|&k| x[k]).collect();
    let psig = signal_file(dir.path(), "px.csv", &px);
    let moved = column(&ok(&["anomaly", "--input", p(&pgraph), "--signal", p(&psig)]), "score");
    let scores = column(&base, "score");
    for (i, &k) in perm.iter().enumerate() {
        assert!((moved[i] - scores[k]).abs() < 1e-8);
    }
}

#[test]
fn emitted_signals_parse_back() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.mtx");
    ok(&["gen", "--family", "jittered", "--n", "20", "--seed", "2", "--output", p(&graph)]);
    let sig = signal_file(dir.path(), "x.csv", &(0..20).map(|i| i as f64).collect::<Vec<_>>());
    let h = dir.path().join("h.csv");
    ok(&["hilbert", "--input", p(&graph), "--signal", p(&sig), "--output", p(&h)]);
    // the transform output is itself a valid signal file
    let parsed = parse_signal(&fs::read_to_string(&h).unwrap()).unwrap();
    assert_eq!(parsed.len(), 20);
    ok(&["hilbert", "--input", p(&graph), "--signal", p(&h)]);
    let f = ok(&["features", "--input", p(&graph), "--signal", p(&sig), "--normalize"]);
    assert_eq!(column(&f, "value").len(), 40);
}

#[test]
fn learn_writes_a_feasible_matrix() {
    let dir = TempDir::new().unwrap();
    let mut text = String::new();
    for i in 0..4 {
        let row: Vec<String> = (0..9).map(|j| format!("{}", ((i * 5 + j * 3) % 7) as f64 - 3.0)).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let x = write(dir.path(), "x.csv", &text);
    let out = ok(&["learn", "--input", p(&x), "--ridge", "1e-6"]);
    let a = parse_matrix_market(&out).unwrap();
    for i in 0..4 {
        assert!(a[(i, i)].abs() < 1e-12);
        assert!((a.row(i).sum() - 1.0).abs() < 1e-8);
        assert!((a.column(i).sum() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn image_input_uses_the_grid() {
    let dir = TempDir::new().unwrap();
    let mut text = String::new();
    for i in 0..6 {
        let row: Vec<String> = (0..6).map(|j| if (2..4).contains(&i) && (2..4).contains(&j) { "1" } else { "0.2" }.to_string()).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    let img = write(dir.path(), "img.csv", &text);
    let json: Value = serde_json::from_str(&ok(&["anomaly", "--image", p(&img), "--format", "json"])).unwrap();
    assert_eq!(json["scores"].as_array().unwrap().len(), 36);
    let bad = write(dir.path(), "bad.csv", "0,2\n0,0\n");
    assert_eq!(run(&["anomaly", "--image", p(&bad)]).status.code(), Some(2));
}

#[test]
fn bedrosian_sweep_on_the_cycle_is_exact_for_low_pairs() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("c.mtx");
    ok(&["gen", "--family", "cycle", "--n", "24", "--output", p(&graph)]);
    let text = ok(&["bedrosian", "--input", p(&graph), "--max-pairs", "5"]);
    let gaps = column(&text, "gap");
    assert_eq!(gaps.len(), 5);
    // the smoothest pairs have bins summing below N/2
    assert!(gaps.iter().all(|&g| g < 1e-8));
}

#[test]
fn errors_are_json_with_split_exit_codes() {
    let dir = TempDir::new().unwrap();
    let missing = run(&["decompose", "--input", p(&dir.path().join("nope.mtx"))]);
    assert_eq!(missing.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"], "Io");

    let ragged = write(dir.path(), "r.csv", "0,1\n1,0,0\n");
    let out = run(&["decompose", "--input", p(&ragged)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"], "Parse");

    let nonsquare = write(dir.path(), "n.csv", "0,1,0\n1,0,0\n");
    assert_eq!(run(&["decompose", "--input", p(&nonsquare)]).status.code(), Some(2));

    let jordan = write(dir.path(), "j.csv", "1,1\n0,1\n");
    let out = run(&["decompose", "--input", p(&jordan)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"], "DefectiveMatrix");

    let graph = write(dir.path(), "c.csv", "0,1\n1,0\n");
    let short = signal_file(dir.path(), "s.csv", &[1.0, 2.0, 3.0]);
    let out = run(&["hilbert", "--input", p(&graph), "--signal", p(&short)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"], "DimensionMismatch");
}
