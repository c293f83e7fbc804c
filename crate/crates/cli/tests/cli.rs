//! Runs the `akm` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn akm(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akm"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .env_remove("AKM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn describe_reports_affine_data() {
    let dir = TempDir::new().unwrap();
    let out = akm(dir.path(), &["-a", "A1~", "describe"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["coxeter_g"], 2);
    assert_eq!(v["delta_multiplicity"], 1);
    let out = akm(dir.path(), &["-a", "A2~", "describe"]);
    assert_eq!(json(&out)["delta_multiplicity"], 2);
}

#[test]
fn bad_input_exits_with_two_and_a_hint() {
    let dir = TempDir::new().unwrap();
    let out = akm(dir.path(), &["-a", "Z9~", "describe"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error:"));
    let out = akm(
        dir.path(),
        &[
            "-a",
            "A1~",
            "--hw",
            "-3,0",
            "--max-len",
            "1",
            "verify",
            "kostant",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("hint:"));
}

#[test]
fn irreducible_character_string() {
    let dir = TempDir::new().unwrap();
    let out = akm(
        dir.path(),
        &[
            "-a", "A1~", "--hw", "1,0", "--depth", "6", "char", "irrep", "--verify",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        json(&out)["delta_string"],
        serde_json::json!([1, 1, 2, 3, 5, 7, 11])
    );
    let out = akm(
        dir.path(),
        &[
            "-a", "A1~", "--hw", "1,0", "--depth", "0", "char", "irrep", "--format", "tsv",
        ],
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "weight\tmult\n(0; 1; 0)\t1\n"
    );
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let args = [
        "-a", "A2~", "--hw", "1,0,0", "--depth", "2", "char", "irrep", "--method", "weyl-kac",
    ];
    let first = akm(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert!(!stderr(&first).contains("cached"));
    let second = akm(dir.path(), &args);
    assert_eq!(second.stdout, first.stdout);
    assert!(stderr(&second).contains("cached"));
    assert!(dir.path().join("A2~").read_dir().unwrap().count() >= 1);

    // the environment variable selects the same directory
    let via_env = Command::new(env!("CARGO_BIN_EXE_akm"))
        .args(args)
        .env("AKM_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, first.stdout);
    assert!(stderr(&via_env).contains("cached"));
}

#[test]
fn runs_are_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = ["-a", "A1~", "--max-len", "3", "weyl", "enum"];
    assert_eq!(akm(a.path(), &args).stdout, akm(b.path(), &args).stdout);
}

#[test]
fn config_file_and_output_file() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("akm.json");
    fs::write(
        &config,
        r#"{"algebra": "A1~", "hw": [1, 0], "depth": 3, "output_format": "tsv"}"#,
    )
    .unwrap();
    let target = dir.path().join("char.tsv");
    let out = akm(
        dir.path(),
        &[
            "--config",
            config.to_str().unwrap(),
            "--depth",
            "2",
            "--out",
            target.to_str().unwrap(),
            "char",
            "irrep",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("weight\tmult\n"));
    // the flag overrides the file's depth
    assert!(text.contains("(0; 1; -2)"));
    assert!(!text.contains("(0; 1; -3)"));
    let log = fs::read_to_string(dir.path().join("char.tsv.log")).unwrap();
    assert!(log.contains("elapsed_ms="));
}

#[test]
fn kostant_examples() {
    let dir = TempDir::new().unwrap();
    let out = akm(
        dir.path(),
        &[
            "-a",
            "A1~",
            "--hw",
            "1,0",
            "--max-len",
            "2",
            "verify",
            "kostant",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 5);
    for r in records {
        let dims = r["dims"].as_object().unwrap();
        assert_eq!(dims.values().map(|d| d.as_u64().unwrap()).sum::<u64>(), 1);
    }
    assert_eq!(v["matching_index"], "l");

    let out = akm(
        dir.path(),
        &[
            "-a",
            "A1~",
            "--hw",
            "1,0",
            "--max-len",
            "2",
            "verify",
            "kostant",
            "--index",
            "s",
        ],
    );
    assert_eq!(out.status.code(), Some(1));

    let out = akm(
        dir.path(),
        &[
            "-a",
            "A1~",
            "--hw",
            "1,1",
            "--max-len",
            "1",
            "verify",
            "kostant",
        ],
    );
    assert_eq!(out.status.code(), Some(0));

    let out = akm(
        dir.path(),
        &[
            "-a",
            "A1~",
            "--hw",
            "0,0",
            "--max-len",
            "1",
            "verify",
            "kostant",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let trivial = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["beta"] == "[0,0]")
        .unwrap();
    assert_eq!(trivial["dims"]["0"], 1);
}
