use std::path::Path;
use std::process::{Command, Output};

use nine_fields_cli::manifest_path;
use serde_json::Value;

fn nine_fields(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nine-fields"))
        .args(args)
        .env_remove("NINEFIELDS_WORKERS")
        .output()
        .expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (String, Value) {
    let out = dir.join(name);
    let mut all = args.to_vec();
    let out_s = out.to_str().unwrap().to_string();
    all.extend(["--out", &out_s]);
    let o = nine_fields(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let jsonl = std::fs::read_to_string(&out).unwrap();
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(manifest_path(&out)).unwrap()).unwrap();
    (jsonl, manifest)
}

fn records(jsonl: &str) -> Vec<Value> {
    jsonl.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn reruns_are_byte_identical_and_manifest_counts_match() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &["two-torsion", "--d", "7", "--bound", "2000"],
        &["mod2-search", "--d", "11", "--bound", "60"],
        &["cm-catalog", "--d", "1", "--bound", "500"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let (a, man) = run_to(dir.path(), &format!("a{i}.jsonl"), args);
        let (b, _) = run_to(dir.path(), &format!("b{i}.jsonl"), args);
        assert_eq!(a, b, "{args:?}");
        let recs = records(&a);
        assert!(!recs.is_empty(), "{args:?}");
        assert_eq!(man["records"].as_u64().unwrap() as usize, recs.len());
        let per_family: u64 = man["per_family"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
        assert_eq!(per_family as usize, recs.len());
        assert_eq!(man["command"], args[0]);
        assert!(man["wall_time_secs"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["torsion", "--ell", "3", "--d", "1"];
    let (a, _) = run_to(dir.path(), "one.jsonl", &[&args[..], &["--workers", "1"]].concat());
    let (b, _) = run_to(dir.path(), "two.jsonl", &[&args[..], &["--workers", "2"]].concat());
    assert_eq!(a, b);
}

#[test]
fn five_torsion_over_eleven() {
    let dir = tempfile::tempdir().unwrap();
    let (jsonl, _) = run_to(dir.path(), "t.jsonl", &["torsion", "--ell", "5", "--d", "11"]);
    let labels: Vec<String> = records(&jsonl).iter().map(|r| r["label"].as_str().unwrap().to_string()).collect();
    assert_eq!(labels.len(), 2);
    assert!(labels.contains(&"11.a2".to_string()) && labels.contains(&"11.a3".to_string()));
    assert!(records(&jsonl).iter().all(|r| r["family"] == "kubert-5"));
}

#[test]
fn cm_catalog_over_eisenstein_integers() {
    let dir = tempfile::tempdir().unwrap();
    let (jsonl, man) = run_to(dir.path(), "cm.jsonl", &["cm-catalog", "--d", "3", "--bound", "100"]);
    let recs = records(&jsonl);
    assert_eq!(man["summary"]["admissible"].as_u64().unwrap() as usize, recs.len());
    assert!(man["summary"]["failures"].as_array().unwrap().is_empty());
    assert!(recs.iter().all(|r| r["conductor"]["exponents"] == serde_json::json!([2])));
}

#[test]
fn verify_curve_of_conductor_47() {
    let o = nine_fields(&["verify-curve", "--d", "11", "--ainvs", "0,w,1,-1,0"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("conductor norm: 47"), "{text}");
    assert!(text.contains("v(D_min) = 2"), "{text}");
    assert!(text.contains("szpiro bound: holds"), "{text}");
    assert!(text.contains("torsion: trivial"), "{text}");
    assert!(text.contains("ring class field: true"), "{text}");
    assert!(text.contains("2.0.11.1-47.1-a1"), "{text}");
}

#[test]
fn verify_curve_reports_the_szpiro_exception() {
    let o = nine_fields(&["verify-curve", "--d", "11", "--ainvs", "0,-1,1,-10,-20"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("szpiro bound: FAILS"), "{text}");
    assert!(text.contains("torsion: Z/5"), "{text}");
}

#[test]
fn usage_errors_exit_nonzero() {
    let bad: [&[&str]; 7] = [
        &["cm-catalog", "--d", "5", "--bound", "100"],
        &["cm-catalog", "--d", "3", "--bound", "1"],
        &["torsion", "--ell", "11", "--d", "7"],
        &["mod2-search", "--d", "7", "--bound", "10"],
        &["two-torsion", "--d", "7"],
        &["verify-curve", "--d", "11", "--ainvs", "0,0,0,0,0"],
        &["acceptance", "--only", "11"],
    ];
    for args in bad {
        let o = nine_fields(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn failed_run_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("x.jsonl");
    let o = nine_fields(&["two-torsion", "--d", "7", "--bound", "100", "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
