use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn catalog() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabcover")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gamma_exit_codes() {
    let s3 = catalog().join("gens/S3.gens");
    let o = run(&["gamma", "--group", path(&s3), "--point", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["status"].as_str(), v["value"].as_u64()), (Some("exact"), Some(3)));

    let o = run(&["gamma", "--group", path(&s3), "--mode", "oracle"]);
    assert_eq!(json(&o)["value"], 3);

    let dir = tempfile::tempdir().unwrap();
    let stab = dir.path().join("c3.gens");
    std::fs::write(&stab, "degree 5\n(1 2 3)\n").unwrap();
    let s5 = catalog().join("gens/S5.gens");
    let o = run(&["gamma", "--group", path(&s5), "--stab", path(&stab)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["status"], "infinite");
    assert_eq!(json(&o)["upper"], "infinity");

    let whole = dir.path().join("whole.gens");
    std::fs::write(&whole, "degree 3\n(1 2 3)\n(1 2)\n").unwrap();
    let o = run(&["gamma", "--group", path(&s3), "--stab", path(&whole)]);
    assert_eq!(json(&o)["value"], 1);

    // A single-set frontier loses exactness before the answer is reached.
    let d14 = catalog().join("gens/D14.gens");
    let o = run(&["gamma", "--group", path(&d14), "--frontier-cap", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["status"], "bounds-only");

    let o = run(&["gamma", "--group", "/nonexistent.gens"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn certify_verify_round_trip_for_every_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let mut recipes: Vec<PathBuf> =
        std::fs::read_dir(catalog().join("recipes")).unwrap().map(|e| e.unwrap().path()).collect();
    recipes.sort();
    for r in recipes {
        let out = dir.path().join(r.file_name().unwrap());
        let o = run(&["certify", "--recipe", path(&r), "--out", path(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", r.display(), String::from_utf8_lossy(&o.stderr));
        let o = run(&["verify", "--cert", path(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", r.display(), String::from_utf8_lossy(&o.stdout));
        assert_eq!(json(&o)["passed"], true);
    }
}

#[test]
fn certificates_are_deterministic_and_tampering_fails() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = catalog().join("recipes/diag_a5_2.json");
    let a = run(&["certify", "--recipe", path(&recipe)]);
    let b = run(&["certify", "--recipe", path(&recipe)]);
    assert_eq!(a.stdout, b.stdout);
    let mut cert = json(&a);
    assert_eq!(cert["conjugators"].as_array().unwrap().len(), 4);

    // Replacing every conjugator by the identity leaves a product of Δ alone.
    let id: Vec<u32> = (1..=10).collect();
    for c in cert["conjugators"].as_array_mut().unwrap() {
        *c = serde_json::to_value(&id).unwrap();
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&cert).unwrap()).unwrap();
    let o = run(&["verify", "--cert", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["failure"].as_str().unwrap().contains("misses"));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"recipe\": 3}").unwrap();
    let o = run(&["verify", "--cert", path(&garbage)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn recipe_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("bad.json");
    std::fs::write(&r, r#"{"type":"affine","p":3,"l":2,"h_gens":[[1,1,1,1]]}"#).unwrap();
    let o = run(&["certify", "--recipe", path(&r)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("affine.h_gens[0]"));
}

#[test]
fn lemma3_and_lemmas() {
    let o = run(&["lemma3", "--name", "A5", "--name", "PSL(2,7)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 2);
    let o = run(&["lemma3", "--name", "C5"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["lemmas", "--fp-bound", "100000", "--catalog", path(&catalog())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["fp"]["equality_at"], serde_json::json!([5]));
    assert!(v["entries"].as_array().unwrap().iter().any(|e| e["m0"]["passed"] == true));
}

#[test]
fn scan_empty_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let summary = dir.path().join("summary.json");
    let o = run(&["scan", "--catalog", path(dir.path()), "--out", path(&csv), "--summary", path(&summary)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("format,name,family"));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["entries"], 0);
}

#[test]
fn scan_rows_follow_catalog_order_and_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("cat");
    std::fs::create_dir_all(cat.join("gens")).unwrap();
    std::fs::create_dir_all(cat.join("recipes")).unwrap();
    for f in ["gens/S4.gens", "gens/S3.gens", "gens/D10.gens", "recipes/diag_a5_2.json"] {
        std::fs::copy(catalog().join(f), cat.join(f)).unwrap();
    }
    std::fs::write(
        cat.join("catalog.json"),
        r#"{"entries":[
            {"name":"S4","gens":"gens/S4.gens","order":24},
            {"name":"diag","recipe":"recipes/diag_a5_2.json","order":3600},
            {"name":"S3","gens":"gens/S3.gens","order":6},
            {"name":"D10","gens":"gens/D10.gens","order":10}
        ]}"#,
    )
    .unwrap();
    let scan_once = |tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let summary = dir.path().join(format!("{tag}.json"));
        let o = run(&["scan", "--catalog", path(&cat), "--out", path(&csv), "--summary", path(&summary)]);
        assert_eq!(o.status.code(), Some(0));
        let mut s: Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
        s.as_object_mut().unwrap().remove("timing");
        (std::fs::read_to_string(csv).unwrap(), s)
    };
    let (csv1, s1) = scan_once("a");
    let (csv2, s2) = scan_once("b");
    assert_eq!(csv1, csv2);
    assert_eq!(s1, s2);

    let mut reader = csv::Reader::from_reader(csv1.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    let names: Vec<&str> = rows.iter().map(|r| &r[1]).collect();
    assert_eq!(names, ["S4", "diag", "S3", "D10"]);
    assert!(rows.iter().all(|r| &r[0] == "v1"));
    // Diagonal rows carry the 3k-2 certificate length.
    assert_eq!((&rows[1][12], &rows[1][14]), ("4", "4"));
    // Ratios are γ/log₂ n with six decimals.
    assert_eq!(&rows[2][16], "1.892789");
}
