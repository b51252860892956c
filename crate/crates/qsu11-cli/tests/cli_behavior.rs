//! Exit-code contract and report determinism of the `qsu11` binary.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qsu11(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsu11"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn temp_config(name: &str, contents: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("qsu11-{}-{}", std::process::id(), name));
    let mut f = std::fs::File::create(&path).expect("config file creates");
    f.write_all(contents.as_bytes()).expect("config file writes");
    path
}

#[test]
fn all_pass_exits_zero() {
    let out = qsu11(&["verify", "qseries"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0 failed"));
}

#[test]
fn failing_checks_exit_one() {
    // The one-power-shifted point-mass constants break invariance of the
    // integral, so this configuration must be reported, not accepted.
    let conf = temp_config("paper-c.conf", "c = paper\n");
    let out = qsu11(&["verify", "nu-x", "--config", conf.to_str().unwrap()]);
    let _ = std::fs::remove_file(&conf);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL"));
    assert!(text.contains("witness"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qsu11(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(qsu11(&["normalize", "t11 @"]).status.code(), Some(2));
    assert_eq!(qsu11(&["normalize", "t31"]).status.code(), Some(2));
    assert_eq!(qsu11(&["verify", "e0", "--pair", "yy"]).status.code(), Some(2));
    assert_eq!(qsu11(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_byte_offset() {
    let out = qsu11(&["normalize", "t11 (t12"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("byte 8"), "stderr was: {}", err);
}

#[test]
fn json_reports_are_byte_identical() {
    for suite in ["e0", "casimir", "nu-x"] {
        let a = qsu11(&["verify", suite, "--json", "--seed", "11"]);
        let b = qsu11(&["verify", suite, "--json", "--seed", "11"]);
        assert_eq!(a.status.code(), Some(0), "suite {}", suite);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "suite {} report is not deterministic", suite);
    }
}

#[test]
fn json_reports_parse_and_echo_the_config() {
    let out = qsu11(&["verify", "lemma65", "--json", "--max-l", "2", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("report parses as JSON");
    assert_eq!(v["suite"], "lemma65");
    let config: Vec<(String, String)> = v["config"]
        .as_array()
        .unwrap()
        .iter()
        .map(|kv| {
            (
                kv[0].as_str().unwrap().to_string(),
                kv[1].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert!(config.contains(&("seed".to_string(), "5".to_string())));
    assert!(config.contains(&("max-l".to_string(), "2".to_string())));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(v["failed"], 0);
}

#[test]
fn seed_changes_the_sampled_witness_stream_but_not_the_verdict() {
    let a = qsu11(&["verify", "trace-l", "--seed", "3"]);
    let b = qsu11(&["verify", "trace-l", "--seed", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
}

#[test]
fn space_and_pair_flags_narrow_the_run() {
    let out = qsu11(&["verify", "relations", "--space", "xi", "--samples", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("on xi"));
    assert!(!text.contains("on x ("), "one-space run leaked the other space: {}", text);

    let out = qsu11(&["verify", "k-relations", "--pair", "xix"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("(xi, x)"));
    assert!(!text.contains("(x, xi)"));
}

#[test]
fn config_file_overrides_are_echoed() {
    let conf = temp_config("twist.conf", "a+ = 1/2\na- = -3/2\n");
    let out = qsu11(&["verify", "module-algebra", "--config", conf.to_str().unwrap()]);
    let _ = std::fs::remove_file(&conf);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("a-plus=1/2"), "config echo missing: {}", text);
    assert!(text.contains("a-minus=-3/2"), "config echo missing: {}", text);
}

#[test]
fn bad_config_files_exit_two() {
    let conf = temp_config("bad.conf", "zeta = 1\n");
    let out = qsu11(&["verify", "e0", "--config", conf.to_str().unwrap()]);
    let _ = std::fs::remove_file(&conf);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        qsu11(&["verify", "e0", "--config", "/no/such/file.conf"]).status.code(),
        Some(2)
    );
}
