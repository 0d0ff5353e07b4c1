use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnihom")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn cube_has_six_geodesics() {
    let cube = data("cube.json");
    let v = json(&["graph", "geodesics", &cube, "1", "8"]);
    assert_eq!(v["count"], 6);
    assert_eq!(v["geodesics"].as_array().unwrap().len(), 6);
    assert_eq!(v["geodesics"][0]["length"], "3");
}

#[test]
fn cube_intersection_number() {
    let v = json(&["graph", "nu-f", &data("cube.json"), "--chains", &data("cube_gamma.json"), "--via", "2,7"]);
    assert_eq!(v["nu"], -1);
}

#[test]
fn cube_branches_between_opposite_corners() {
    let v = json(&["graph", "nonbranching", &data("cube.json"), "--pairs", "all-vertices"]);
    assert_eq!(v["pass"], false);
    assert_eq!(v["witness"]["from"], "1");
    assert_eq!(v["witness"]["to"], "8");
}

#[test]
fn circle_rank_and_classes() {
    let circle = data("circle.json");
    let v = json(&["graph", "pi0", &circle, "a", "b"]);
    assert_eq!(v["h2_rank"], 1);
    let r = json(&["graph", "gamma-rank", &circle, "--length", "6", "--q", "3", "--anchors", "a,b", "--start", "a"]);
    assert_eq!(r["rank"], 1);
}

#[test]
fn float_entries_are_rejected() {
    let out = run(&["validate", &data("float.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "{err}");
    assert!(err.contains("not exact"), "{err}");
}

#[test]
fn axiom_violation_is_an_error() {
    let dir = std::env::temp_dir().join(format!("magnihom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"dist": [["0","1","3"],["1","0","1"],["3","1","0"]]}"#).unwrap();
    let out = run(&["--format", "json", "validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(run(&["homology", path.to_str().unwrap(), "--n", "1", "--spectrum", "--all-pairs"]).status.code(), Some(2));
}

#[test]
fn two_points_have_first_homology() {
    let dir = std::env::temp_dir().join(format!("magnihom-two-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two.json");
    std::fs::write(&path, r#"{"labels":["a","b"],"dist":[["0","5/2"],["5/2","0"]]}"#).unwrap();
    let v = json(&["homology", path.to_str().unwrap(), "--n", "1", "--length", "5/2", "--pair", "a,b"]);
    let row = &v[0];
    assert_eq!(row["rank"], 1);
    assert_eq!(row["length"], "5/2");
    let text = String::from_utf8(run(&["--format", "json", "homology", path.to_str().unwrap(), "--n", "1", "--length", "5/2", "--pair", "a,b"]).stdout).unwrap();
    let keys = ["\"n\"", "\"length\"", "\"a\"", "\"b\"", "\"rank\"", "\"torsion\"", "\"dim_chains\"", "\"dim_boundaries\""];
    let at: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn oracles_agree_on_the_square() {
    let out = run(&["oracles", &data("square.json"), "--all-pairs"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(" 0 mismatches"));
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["--format", "json", "homology", &data("square.json"), "--max-n", "3", "--spectrum", "--all-pairs"];
    let first = run(&args).stdout;
    for threads in ["1", "3"] {
        let out = Command::new(env!("CARGO_BIN_EXE_magnihom")).args(args).env("MAGNIHOM_THREADS", threads).output().unwrap();
        assert_eq!(out.stdout, first);
    }
    let rows: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert!(rows.as_array().unwrap().iter().all(|r| r["torsion"].as_array().unwrap().is_empty()));
}

#[test]
fn degree_and_length_flags_are_required() {
    assert_eq!(run(&["homology", &data("square.json"), "--spectrum", "--all-pairs"]).status.code(), Some(2));
    assert_eq!(run(&["homology", &data("square.json"), "--n", "2", "--all-pairs"]).status.code(), Some(2));
}

#[test]
fn corpus_documents_read_back() {
    let v = json(&["corpus", "--seed", "7", "--count", "3", "--sizes", "4"]);
    assert_eq!(v.as_array().unwrap().len(), 3);
    let again = json(&["corpus", "--seed", "7", "--count", "3", "--sizes", "4"]);
    assert_eq!(v, again);
    let text = serde_json::to_string(&v[2]["space"]).unwrap();
    assert_eq!(magnihom::io::read_metric(&text).unwrap().len(), 4);
}
