use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rng-hdbscan")).args(args).output().expect("binary runs")
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn range_run_writes_one_hierarchy_per_mpts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = run(&["--generate", "n=300,d=3,clusters=3,seed=5", "--k1", "2", "--kmax", "16", "--graph", "rng-star", "--out", out]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for m in 2..=16 {
        let dendro = csv_rows(&dir.path().join(format!("dendrogram_{m}.csv")));
        assert_eq!(dendro.len(), 299);
        for (i, row) in dendro.iter().enumerate() {
            assert_eq!(row[0].parse::<usize>().unwrap(), 300 + i);
        }
        assert_eq!(csv_rows(&dir.path().join(format!("mst_{m}.csv"))).len(), 299);
        assert_eq!(csv_rows(&dir.path().join(format!("selfedges_{m}.csv"))).len(), 300);
    }
    assert!(!dir.path().join("dendrogram_1.csv").exists());
    let count = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("dendrogram_"))
        .count();
    assert_eq!(count, 15);
    let m = manifest(dir.path());
    assert_eq!(m["n"], 300);
    assert_eq!(m["d"], 3);
    assert_eq!(m["files"].as_array().unwrap().len(), 45);
}

#[test]
fn manifest_is_deterministic_apart_from_timings() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let res = run(&["--generate", "n=200,d=2,clusters=4,seed=9", "--kmax", "6", "--out", dir.path().to_str().unwrap()]);
        assert!(res.status.success());
    }
    let strip = |mut v: serde_json::Value| {
        let obj = v.as_object_mut().unwrap();
        obj.remove("timings");
        obj.remove("config").map(|mut c| c.as_object_mut().unwrap().remove("out"));
        v
    };
    assert_eq!(strip(manifest(a.path())), strip(manifest(b.path())));
}

#[test]
fn csv_input_and_graph_export() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("points.csv");
    fs::write(&input, "x,y\n0,0\n1,0\n2,0\n10,10\n11,10\n").unwrap();
    let out = dir.path().join("out");
    fs::create_dir(&out).unwrap();
    let res = run(&[
        "--input", input.to_str().unwrap(), "--has-header", "--kmax", "2", "--graph", "rng",
        "--export-graph", "--dump-neighbors", "--out", out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let edges = csv_rows(&out.join("graph.csv"));
    assert!(edges.iter().all(|e| e[0].parse::<usize>().unwrap() < e[1].parse::<usize>().unwrap()));
    assert!(edges.iter().any(|e| e[0] == "0" && e[1] == "1"));
    assert!(!edges.iter().any(|e| e[0] == "0" && e[1] == "2"));
    let neighbors = csv_rows(&out.join("neighbors.csv"));
    assert_eq!(neighbors.len(), 10);
    assert_eq!(neighbors[0], ["0", "1", "0", "0"]);
    assert_eq!(manifest(&out)["edge_counts"]["complete"], 10);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["--generate", "n=50,d=2,clusters=2,seed=1", "--kmax", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--generate", "n=50,d=2,clusters=2,seed=1"]).status.code(), Some(2));
    assert_eq!(run(&["--generate", "n=50,d=2,clusters=2,seed=1", "--k1", "5", "--kmax", "3"]).status.code(), Some(2));
    assert_eq!(run(&["--generate", "n=50,d=2,clusters=2,seed=1", "--kmax", "3", "--graph", "knn"]).status.code(), Some(2));
}

#[test]
fn bad_input_reports_row_and_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "0,0\n1,0\n2\n").unwrap();
    let res = run(&["--input", input.to_str().unwrap(), "--kmax", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains('3'));
}

#[test]
fn bench_mode_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let res = run(&["--bench", "--bench-n", "300", "--bench-d", "2", "--bench-kmax", "4", "--out", dir.path().to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let rows = csv_rows(&dir.path().join("report.csv"));
    assert_eq!(rows.len(), 4);
    assert!(dir.path().join("ratios.csv").exists());
}
