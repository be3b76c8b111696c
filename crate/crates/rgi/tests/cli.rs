//! Command-line behavior: exit codes, stage re-runnability, artifact shapes.

use std::path::{Path, PathBuf};
use std::process::Command;

fn rgi() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rgi"))
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rgi-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Small but workable corpus so CLI tests stay fast.
fn small_args(dir: &Path) -> Vec<String> {
    [
        "--preset",
        "binary-b",
        "--seed",
        "3",
        "--train-size",
        "4000",
        "--validation-size",
        "2500",
        "--test-size",
        "500",
        "--out",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain([dir.display().to_string()])
    .collect()
}

#[test]
fn syntax_errors_exit_with_code_two() {
    let dir = temp_dir("syntax");
    let output = rgi()
        .args([
            "generate",
            "--regex",
            "(01*",
            "--alphabet",
            "0 1",
            "--seed",
            "1",
            "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("syntax error"), "stderr: {stderr}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn missing_corpus_exits_with_code_two() {
    let dir = temp_dir("missing");
    let output = rgi()
        .args(["train", "--preset", "binary-a", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn stages_run_independently_and_artifacts_appear() {
    let dir = temp_dir("stages");
    let args = small_args(&dir);

    let run = |stage: &str| {
        let output = rgi().arg(stage).args(&args).output().unwrap();
        assert_eq!(
            output.status.code(),
            Some(0),
            "{stage} failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        output
    };

    run("generate");
    for name in [
        "train.tsv",
        "validation.tsv",
        "test.tsv",
        "metadata.json",
        "truth.dot",
    ] {
        assert!(dir.join(name).exists(), "{name} missing after generate");
    }

    let output = run("train");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("validation accuracy"), "stdout: {stdout}");
    assert!(dir.join("params.txt").exists());
    assert!(dir.join("history.json").exists());

    run("extract");
    for name in ["dfa.dot", "transitions.tsv", "extraction_report.json"] {
        assert!(dir.join(name).exists(), "{name} missing after extract");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("extraction_report.json")).unwrap())
            .unwrap();
    assert!(report["selected_k"].as_u64().is_some());
    assert!(report["dfa_test_accuracy"].as_f64().is_some());
    assert_eq!(report["fidelity_evaluated_on"], "validation");

    run("analyze");
    for name in [
        "cycles.json",
        "pca.csv",
        "pca.svg",
        "errors.json",
        "augmentation.tsv",
    ] {
        assert!(dir.join(name).exists(), "{name} missing after analyze");
    }
    let csv = std::fs::read_to_string(dir.join("pca.csv")).unwrap();
    assert!(csv.starts_with("x,y,cluster_id,is_final,network_decision\n"));
    // one row per collected state point = total validation string length
    let total_tokens: usize = std::fs::read_to_string(dir.join("validation.tsv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|line| {
            line.split('\t')
                .nth(1)
                .map_or(0, |t| t.split_whitespace().count())
        })
        .sum();
    assert_eq!(csv.lines().count() - 1, total_tokens);

    let output = rgi()
        .args(["eval", "--split", "test"])
        .args(&args)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(
        stdout.contains("network accuracy on test"),
        "stdout: {stdout}"
    );
    assert!(
        stdout.contains("automaton accuracy on test"),
        "stdout: {stdout}"
    );

    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn degenerate_threshold_still_extracts() {
    let dir = temp_dir("degenerate");
    let args = small_args(&dir);
    for stage in ["generate", "train"] {
        assert!(rgi().arg(stage).args(&args).status().unwrap().success());
    }
    let output = rgi()
        .args(["extract", "--threshold", "0"])
        .args(&args)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("extraction_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["selected_k"].as_u64(), Some(2));
    assert!(dir.join("dfa.dot").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn unreachable_threshold_exits_four_but_writes_the_curve() {
    let dir = temp_dir("exit4");
    let args = small_args(&dir);
    for stage in ["generate", "train"] {
        assert!(rgi().arg(stage).args(&args).status().unwrap().success());
    }
    // fidelity cannot exceed 1.0; k-max 3 keeps the futile search short
    let output = rgi()
        .args(["extract", "--threshold", "1.1", "--k-max", "3"])
        .args(&args)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(4));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("extraction_report.json")).unwrap())
            .unwrap();
    assert!(report["selected_k"].is_null());
    assert_eq!(report["fidelity_curve"].as_array().unwrap().len(), 2);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn interrupted_run_keeps_partial_artifacts_but_no_summary() {
    let dir = temp_dir("interrupted");
    let mut args = small_args(&dir);
    args.extend([
        "--threshold".to_string(),
        "1.1".to_string(),
        "--k-max".to_string(),
        "3".to_string(),
    ]);
    let output = rgi().arg("run-all").args(&args).output().unwrap();
    assert_eq!(output.status.code(), Some(4));
    // stages before the failure left their artifacts behind
    assert!(dir.join("train.tsv").exists());
    assert!(dir.join("params.txt").exists());
    assert!(dir.join("extraction_report.json").exists());
    assert!(!dir.join("summary.json").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_file_matches_flag_invocation() {
    let dir_flags = temp_dir("config-flags");
    let dir_file = temp_dir("config-file");

    let status = rgi()
        .args([
            "run-all",
            "--preset",
            "binary-a",
            "--seed",
            "11",
            "--train-size",
            "3000",
            "--validation-size",
            "2000",
            "--test-size",
            "400",
            "--out",
        ])
        .arg(&dir_flags)
        .status()
        .unwrap();
    assert!(status.success());

    let config_path = dir_file.join("experiment.json");
    std::fs::write(
        &config_path,
        r#"{
  "preset": "binary-a",
  "seed": 11,
  "gen.train-size": 3000,
  "gen.validation-size": 2000,
  "gen.test-size": 400
}"#,
    )
    .unwrap();
    let status = rgi()
        .args(["run-all", "--config"])
        .arg(&config_path)
        .arg("--out")
        .arg(&dir_file)
        .status()
        .unwrap();
    assert!(status.success());

    let summary_flags = std::fs::read(dir_flags.join("summary.json")).unwrap();
    let summary_file = std::fs::read(dir_file.join("summary.json")).unwrap();
    assert_eq!(
        summary_flags, summary_file,
        "config file and flags disagree"
    );

    let _ = std::fs::remove_dir_all(&dir_flags);
    let _ = std::fs::remove_dir_all(&dir_file);
}
