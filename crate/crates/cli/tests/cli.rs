use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pvlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvlab"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env_remove("PVLAB_OUT_DIR")
        .output()
        .expect("pvlab runs")
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn small_runs() -> Vec<Vec<&'static str>> {
    vec![
        vec!["typical-cell", "--lambda", "0.5,2", "--replicas", "200"],
        vec!["density", "--lambda", "0.5", "--replicas", "100"],
        vec!["tessellate", "--radius", "4", "--svg", "t.svg", "--color", "--save", "t.json"],
        vec!["surface", "--draws", "20", "--svg", "s.svg"],
        vec!["color", "--trials", "100", "--colorings", "200", "--tessellations", "2"],
        vec!["graph", "--n", "600", "--s", "20", "--trials", "20", "--half-n", "200"],
        vec!["exact-cheeger", "--graph", "random:12:3", "--trials", "20"],
        vec!["lemma", "--samples", "2000"],
    ]
}

#[test]
fn outputs_do_not_depend_on_workers_or_reruns() {
    for args in small_runs() {
        let mut seen = Vec::new();
        for workers in ["1", "8", "8"] {
            let dir = TempDir::new().unwrap();
            let mut full = args.clone();
            full.extend(["--seed", "77", "--workers", workers]);
            let out = pvlab(dir.path(), &full);
            assert!(
                out.status.code() == Some(0) || out.status.code() == Some(2),
                "{args:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            let produced = files(dir.path());
            assert!(!produced.is_empty(), "{args:?} wrote nothing");
            seen.push((produced, out.stdout));
        }
        for other in &seen[1..] {
            assert_eq!(seen[0].0, other.0, "{args:?} artifacts differ");
            assert_eq!(seen[0].1, other.1, "{args:?} stdout differs");
        }
    }
}

#[test]
fn render_reproduces_saved_tessellation() {
    let dir = TempDir::new().unwrap();
    let out = pvlab(dir.path(), &["tessellate", "--radius", "3", "--save", "t.json", "--svg", "a.svg"]);
    assert!(out.status.success());
    let out = pvlab(dir.path(), &["render", "--input", "t.json", "--svg", "b.svg"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = |name: &str| {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        text.lines().filter(|l| !l.starts_with("<!--")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(body("a.svg"), body("b.svg"));
}

#[test]
fn artifacts_start_with_metadata() {
    let dir = TempDir::new().unwrap();
    let out = pvlab(dir.path(), &["typical-cell", "--replicas", "100", "--seed", "5"]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("typical_cell.csv")).unwrap();
    let first = csv.lines().next().unwrap();
    assert!(first.starts_with("# pvlab artifact_version=1 command=typical-cell seed=5 config="));
    assert!(first.contains("\"replicas\":100"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("typical_cell.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 5);
    assert_eq!(summary["config"]["replicas"], 100);
}

#[test]
fn isokawa_reference_value() {
    let dir = TempDir::new().unwrap();
    let out = pvlab(dir.path(), &["isokawa-ref", "--lambda", "1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "4.2282252234");
}

#[test]
fn exact_cheeger_of_petersen() {
    let dir = TempDir::new().unwrap();
    let out = pvlab(dir.path(), &["exact-cheeger", "--graph", "petersen", "--trials", "10"]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("exact_cheeger.json")).unwrap()).unwrap();
    assert_eq!(doc["summary"]["value"], 1.0);
}

#[test]
fn edge_list_input() {
    let dir = TempDir::new().unwrap();
    let edges = dir.path().join("c6.txt");
    fs::write(&edges, "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n").unwrap();
    let out = pvlab(dir.path(), &["exact-cheeger", "--edges", edges.to_str().unwrap(), "--trials", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("exact_cheeger.json")).unwrap()).unwrap();
    let h = doc["summary"]["value"].as_f64().unwrap();
    assert!((h - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let out = pvlab(dir.path(), &["typical-cell", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = pvlab(dir.path(), &["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let out = pvlab(dir.path(), &["exact-cheeger", "--graph", "cycle:2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = pvlab(dir.path(), &["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failed_check_exits_two_only_with_check_flag() {
    let dir = TempDir::new().unwrap();
    // a zero-width band cannot hold
    let args = ["graph", "--n", "300", "--s", "10", "--trials", "5", "--half-n", "100", "--half-band", "0"];
    let out = pvlab(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0));
    let mut with_check = args.to_vec();
    with_check.push("--check");
    let out = pvlab(dir.path(), &with_check);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("check failed"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("pvlab.toml");
    fs::write(&cfg, "seed = 9\n\n[typical-cell]\nreplicas = 120\nout = \"from_file.csv\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = pvlab(dir.path(), &["typical-cell", "--config", cfg, "--replicas", "100"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("from_file.csv")).unwrap();
    let first = csv.lines().next().unwrap();
    assert!(first.contains("seed=9"));
    assert!(first.contains("\"replicas\":100"));

    let out = pvlab(dir.path(), &["typical-cell", "--config", cfg, "--seed", "10"]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("from_file.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("seed=10"));
    assert!(csv.lines().next().unwrap().contains("\"replicas\":120"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[typical-cell]\nreplica = 120\n").unwrap();
    let out = pvlab(dir.path(), &["typical-cell", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("replica"));
}

#[test]
fn out_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pvlab"))
        .args(["typical-cell", "--replicas", "100"])
        .env("PVLAB_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("typical_cell.csv").exists());
}
