use std::path::PathBuf;
use std::process::{Command, Output};

fn iris() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/iris.csv")
}

fn hdgm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdgm")).args(args).output().expect("spawn hdgm")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn iris_pipeline_reports_edge_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.json");
    let model = dir.path().join("model.json");
    let data = iris();
    let data = data.to_str().unwrap();

    let out = stdout(&hdgm(&["minforest", data, "--homog", "--out", tree.to_str().unwrap()]));
    assert!(out.contains("Edges from minForest  = 1...4"), "{out}");

    let out = stdout(&hdgm(&[
        "stepw",
        data,
        "--homog",
        "--model",
        tree.to_str().unwrap(),
        "--out",
        model.to_str().unwrap(),
    ]));
    assert!(out.contains("Number of edges       = 7"), "{out}");
    assert!(out.contains("Edges from minForest  = 1...4"), "{out}");
    assert!(out.contains("Edges from stepw      = 5...7"), "{out}");

    let out = stdout(&hdgm(&["fit", data, "--homog", "--model", model.to_str().unwrap()]));
    assert!(out.contains("551.3188"), "{out}");

    let json = stdout(&hdgm(&["fit", data, "--model", model.to_str().unwrap(), "--json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!((v["minus2logL"].as_f64().unwrap() - 410.1435).abs() < 1e-3);
}

#[test]
fn empty_model_has_single_degree_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, r#"{"p": 12, "edges": []}"#).unwrap();
    let out = stdout(&hdgm(&["analyze", "--model", path.to_str().unwrap(), "--degree"]));
    assert_eq!(out, " 0\n12\n");
}

#[test]
fn simulate_then_search_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sim.csv");
    let graph = dir.path().join("truth.json");
    stdout(&hdgm(&[
        "simulate",
        "--p",
        "8",
        "--n",
        "400",
        "--model",
        "chain",
        "--rho",
        "0.8",
        "--seed",
        "3",
        "--out",
        csv.to_str().unwrap(),
        "--graph-out",
        graph.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 401);
    assert!(text.starts_with("X1,X2,"));
    let out = stdout(&hdgm(&["minforest", csv.to_str().unwrap()]));
    assert!(out.contains("Number of edges       = 7"), "{out}");
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, r#"{"p": 3, "edges": [[1, 2], [2, 3]]}"#).unwrap();
    let m = path.to_str().unwrap();
    let dot = stdout(&hdgm(&["export", "--model", m, "--format", "dot"]));
    assert!(dot.contains("--"), "{dot}");
    let svg_path = dir.path().join("g.svg");
    stdout(&hdgm(&["export", "--model", m, "--format", "svg", "--highlight", "2", "--out", svg_path.to_str().unwrap()]));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("red"));
}

#[test]
fn bench_writes_csv_header() {
    let out = stdout(&hdgm(&["bench", "--ps", "10,20", "--n", "30"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p,n,minforest_seconds,stepw_seconds,peak_rss_kb"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn errors_exit_nonzero() {
    let o = hdgm(&["analyze", "--model", "/definitely/missing.json"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let o = hdgm(&["citest", iris().to_str().unwrap(), "1", "9"]);
    assert!(!o.status.success());
}
