//! End-to-end runs of the `stobgk` binary: exit codes, bundle handling and
//! the checked-in golden outputs.
//!
//! Set `STOBGK_BLESS=1` to rewrite the golden files after an intended
//! change in output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const GOLDEN_FILES: &[&str] = &["trajectory.csv", "norms.csv", "defect.csv", "path.csv", "audit.csv", "continuation.csv"];

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn small_config() -> PathBuf {
    golden_dir().join("small.json")
}

fn stobgk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stobgk"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn simulate_into(dir: &Path, extra: &[&str]) -> Output {
    let cfg = small_config();
    let mut args = vec!["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    stobgk(&args)
}

#[test]
fn simulate_writes_a_sealed_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let out = simulate_into(tmp.path(), &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let bundle = tmp.path().join("simulate");
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(bundle.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "simulate");
    for name in GOLDEN_FILES {
        assert!(bundle.join(name).is_file(), "{name} missing");
    }
    let partials: Vec<_> = fs::read_dir(tmp.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".partial"))
        .collect();
    assert!(partials.is_empty());
}

#[test]
fn golden_run_reproduces_checked_in_csvs() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&simulate_into(tmp.path(), &[])), 0);
    let bundle = tmp.path().join("simulate");
    let expected_dir = golden_dir().join("simulate");
    if std::env::var_os("STOBGK_BLESS").is_some() {
        fs::create_dir_all(&expected_dir).unwrap();
        for name in GOLDEN_FILES {
            fs::copy(bundle.join(name), expected_dir.join(name)).unwrap();
        }
    }
    for name in GOLDEN_FILES {
        let got = fs::read(bundle.join(name)).unwrap();
        let want = fs::read(expected_dir.join(name)).unwrap();
        assert!(got == want, "{name} differs from the golden copy");
    }
}

#[test]
fn worker_count_does_not_change_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("one");
    let b = tmp.path().join("three");
    assert_eq!(code(&simulate_into(&a, &["--threads", "1"])), 0);
    assert_eq!(code(&simulate_into(&b, &["--threads", "3"])), 0);
    for name in GOLDEN_FILES {
        assert_eq!(fs::read(a.join("simulate").join(name)).unwrap(), fs::read(b.join("simulate").join(name)).unwrap(), "{name}");
    }
}

#[test]
fn audit_reproduces_the_stored_report() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&simulate_into(tmp.path(), &[])), 0);
    let bundle = tmp.path().join("simulate");
    let reaudit = tmp.path().join("reaudit");
    let out = stobgk(&["audit", "--bundle", bundle.to_str().unwrap(), "--out", reaudit.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(bundle.join("audit.csv")).unwrap(), fs::read(reaudit.join("audit").join("audit.csv")).unwrap());
}

#[test]
fn corrupted_trajectory_fails_the_audit() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&simulate_into(tmp.path(), &[])), 0);
    let bundle = tmp.path().join("simulate");
    let path = bundle.join("trajectory.csv");
    let text = fs::read_to_string(&path).unwrap();
    let mut done = false;
    let lines: Vec<String> = text
        .lines()
        .map(|l| {
            let fields: Vec<&str> = l.split(',').collect();
            if !done && !l.starts_with('#') && fields.len() == 4 && fields[1] == "2" {
                done = true;
                format!("{},{},{},1.5", fields[0], fields[1], fields[2])
            } else {
                l.to_string()
            }
        })
        .collect();
    assert!(done);
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let out = stobgk(&["audit", "--bundle", bundle.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 1, "{stdout}");
    assert!(stdout.lines().any(|l| l.starts_with("max_principle") && l.ends_with("FAIL")), "{stdout}");
    assert!(stdout.contains("trajectory.csv"), "expected a hash-mismatch note: {stdout}");
}

#[test]
fn partial_bundle_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&simulate_into(tmp.path(), &[])), 0);
    let partial = tmp.path().join(".simulate.partial");
    fs::rename(tmp.path().join("simulate"), &partial).unwrap();
    let out = stobgk(&["audit", "--bundle", partial.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bundle_without_manifest_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&simulate_into(tmp.path(), &[])), 0);
    let bundle = tmp.path().join("simulate");
    fs::remove_file(bundle.join("manifest.json")).unwrap();
    let out = stobgk(&["audit", "--bundle", bundle.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_field_names_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg: serde_json::Value = serde_json::from_str(&fs::read_to_string(small_config()).unwrap()).unwrap();
    cfg["bgk"].as_object_mut().unwrap().remove("t_final");
    let path = tmp.path().join("broken.json");
    fs::write(&path, cfg.to_string()).unwrap();
    let out = stobgk(&["simulate", "--config", path.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("t_final"), "{stderr}");
    assert!(!tmp.path().join("simulate").exists());
}

#[test]
fn unknown_preset_is_a_config_error() {
    let out = stobgk(&["simulate", "--config", "preset:nope"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn box_too_small_for_the_noise_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg: serde_json::Value = serde_json::from_str(&fs::read_to_string(small_config()).unwrap()).unwrap();
    cfg["grid"]["half_width"] = serde_json::json!(2.0);
    cfg["grid"]["cells"] = serde_json::json!(32);
    let path = tmp.path().join("tight.json");
    fs::write(&path, cfg.to_string()).unwrap();
    let out = stobgk(&["simulate", "--config", path.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn seed_override_changes_the_path_and_the_stamp() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(code(&simulate_into(&a, &[])), 0);
    assert_eq!(code(&simulate_into(&b, &["--seed", "100"])), 0);
    let pa = fs::read_to_string(a.join("simulate").join("path.csv")).unwrap();
    let pb = fs::read_to_string(b.join("simulate").join("path.csv")).unwrap();
    assert_ne!(pa, pb);
    assert!(pb.contains("# master_seed=100"));
}

#[test]
fn paths_command_reports_the_levy_statistic() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg: serde_json::Value = serde_json::from_str(&fs::read_to_string(small_config()).unwrap()).unwrap();
    cfg["paths"] = serde_json::json!({"dims": [1], "delta_log2": 10, "steps_per_delta": 4, "paths": 20, "horizon": 1.0});
    let path = tmp.path().join("paths.json");
    fs::write(&path, cfg.to_string()).unwrap();
    let out = stobgk(&["paths", "--config", path.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let summary = fs::read_to_string(tmp.path().join("paths").join("levy_summary.csv")).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("1,")), "{summary}");
}
