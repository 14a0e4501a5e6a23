//! End-to-end checks of the binary surface: exit codes, report formats,
//! cache round-trips, corruption detection, and concurrent cache sharing.

use std::path::Path;
use std::process::Command;

fn msplab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_msplab"))
}

#[test]
fn yukawa_verify_passes_and_reports() {
    let out = msplab()
        .args([
            "yukawa-verify",
            "--k",
            "8",
            "--order",
            "25",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"][0]["status"], "Pass");
    assert_eq!(v["checks"][0]["order"], "order 25");
}

#[test]
fn invalid_jobspec_exits_3() {
    let out = msplab()
        .args(["yukawa-verify", "--k", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = msplab()
        .args(["yukawa-verify", "--N", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_deterministic() {
    let run = || {
        msplab()
            .args([
                "tail-constants",
                "--k",
                "10",
                "--N",
                "7",
                "--format",
                "json",
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn gw0_csv_table() {
    let out = msplab()
        .args(["gw0", "--k", "6", "--dmax", "3", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,numerator,denominator"));
    assert_eq!(lines.next(), Some("1,7884,1"));
}

#[test]
fn membership_emits_certificate_json() {
    let out = msplab()
        .args(["membership", "--series", "DB3", "--degree", "2", "--k", "6"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["target"], 6);
    assert!(v["monomials"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| { m["exponents"].as_array().unwrap().len() == 5 && m["coeff"].is_string() }));
}

fn cache_files(dir: &Path) -> Vec<std::path::PathBuf> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect()
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let run = |label: &str| {
        let out = msplab()
            .args([
                "generators",
                "--k",
                "6",
                "--order",
                "12",
                "--format",
                "json",
            ])
            .env("MSPLAB_CACHE", dir.path())
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{label}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run("first");
    assert!(first.contains("\"from_cache\": false"));
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 1);
    let second = run("second");
    assert!(second.contains("\"from_cache\": true"));
    // identical coefficients either way
    let strip = |s: &str| {
        s.replace("\"from_cache\": true", "")
            .replace("\"from_cache\": false", "")
    };
    assert_eq!(strip(&first), strip(&second));
    // corrupt one digit on disk: the checksum must reject it and the run
    // recomputes
    let path = &files[0];
    let text = std::fs::read_to_string(path).unwrap();
    let corrupted = text.replacen("360", "361", 1);
    assert_ne!(text, corrupted, "expected a 360 coefficient in the payload");
    std::fs::write(path, corrupted).unwrap();
    let third = run("third");
    assert!(
        third.contains("\"from_cache\": false"),
        "corrupted cache must not be trusted"
    );
}

#[test]
fn parallel_cache_sharing_no_interleaving() {
    let dir = tempfile::tempdir().unwrap();
    let spawn = |k: &str| {
        let mut c = msplab();
        c.args(["generators", "--k", k, "--order", "10", "--format", "json"])
            .env("MSPLAB_CACHE", dir.path());
        c.spawn().unwrap()
    };
    // several concurrent writers on the same cache directory
    let children: Vec<_> = (0..3).flat_map(|_| [spawn("6"), spawn("10")]).collect();
    for mut ch in children {
        assert!(ch.wait().unwrap().success());
    }
    // every surviving file must parse and carry a valid checksum: rerun
    // reads them back
    let out = msplab()
        .args([
            "generators",
            "--k",
            "6",
            "--order",
            "10",
            "--format",
            "json",
        ])
        .env("MSPLAB_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("\"from_cache\": true"));
}

#[test]
fn config_file_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("msplab.conf");
    std::fs::write(&cfg, "k=8\norder=25\nformat=json\n").unwrap();
    let out = msplab()
        .args(["yukawa-verify", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["k"], 8);
    assert_eq!(v["order"], 25);
}
