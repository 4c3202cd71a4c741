use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bometro_cli::output::read_manifest;

fn bometro(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bometro"))
        .args(args)
        .env("BOMETRO_OUT", out)
        .env_remove("BOMETRO_THREADS")
        .output()
        .unwrap()
}

fn files(dir: &Path, ext: &str) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(ext))
        .collect();
    v.sort();
    v
}

#[test]
fn table_writes_all_formats_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bometro(&["table", "--quiet"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for ext in [".csv", ".json", ".svg"] {
        assert_eq!(files(tmp.path(), ext).iter().filter(|n| n.starts_with("table-")).count(), 1);
    }
    let m = read_manifest(&tmp.path().join("manifest.json")).unwrap();
    assert_eq!(m.outputs.len(), 3);
    assert_eq!(m.config.photons, 10.0);
}

#[test]
fn squeezing_without_bath_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bometro(&["bound", "--target", "squeezing", "--n-env", "0", "--quiet"], tmp.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unbounded"));
}

#[test]
fn bad_configuration_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bometro(&["bound", "--gamma=-1"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let out = bometro(&["figure", "fre", "--target", "loss"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let out = bometro(&["strategy", "--target", "squeezing", "--name", "bogus"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cat"));
    let cfg = tmp.path().join("bad.conf");
    fs::write(&cfg, "photons = lots\n").unwrap();
    let out = bometro(&["table", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unsupported_strategy_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bometro(
        &["strategy", "--target", "squeezing", "--name", "cat", "--n-env", "0.1", "--quiet"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn flags_override_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.conf");
    fs::write(&cfg, "# bound for loss\ntarget = loss\nphotons = 3\nn_env = 0.2\n").unwrap();
    let out = bometro(
        &["bound", "--config", cfg.to_str().unwrap(), "--photons", "7", "--formats", "csv", "--quiet"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m = read_manifest(&tmp.path().join("manifest.json")).unwrap();
    assert_eq!(m.config.photons, 7.0);
    assert_eq!(m.config.n_env, 0.2);
    let csv = fs::read_to_string(tmp.path().join(&m.outputs[0])).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("loss,"));
}

#[test]
fn repeated_runs_do_not_overwrite() {
    let tmp = tempfile::tempdir().unwrap();
    for _ in 0..3 {
        let out = bometro(&["bound", "--formats", "csv", "--quiet"], tmp.path());
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(files(tmp.path(), ".csv").len(), 3);
}

#[test]
fn strategy_list_and_selftest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bometro(&["strategy", "--name", "list"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("temperature: fock, fast"));
    let out = bometro(&["selftest"], tmp.path());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn thread_cap_is_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bometro"))
        .args(["--threads", "1", "figure", "fre", "--points", "20", "--quiet", "--formats", "csv"])
        .env("BOMETRO_OUT", tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 above their bounds"));
}
