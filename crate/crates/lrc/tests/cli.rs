//! Black-box tests of the `lrc` binary: construct/verify round trips for
//! every family, error paths, and output formats.

use std::path::Path;
use std::process::{Command, Output};

fn lrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrc"))
        .args(args)
        .env_remove("LRC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// One canonical argument set per family.
fn flagship_args() -> Vec<Vec<&'static str>> {
    vec![
        vec![
            "--family", "baseline", "--p", "3", "--m", "2", "--r", "3", "--b", "8", "--M", "7",
            "--N", "6",
        ],
        vec!["--family", "tamo-barg", "--p", "13", "--r", "3", "--N", "1"],
        vec![
            "--family", "cyclic", "--p", "13", "--r", "3", "--alpha", "2", "--c", "2", "--dd", "12",
        ],
        vec![
            "--family", "p1xp1", "--p", "3", "--m", "2", "--r", "3", "--alpha", "2", "--dd", "8",
        ],
        vec![
            "--family",
            "p1xp1-refined",
            "--p",
            "3",
            "--m",
            "2",
            "--r",
            "3",
            "--alpha",
            "2",
            "--dd",
            "8",
        ],
        vec![
            "--family",
            "hirzebruch",
            "--p",
            "3",
            "--m",
            "2",
            "--r",
            "3",
            "--alpha",
            "2",
            "--mh",
            "0",
            "--dd",
            "8",
        ],
        vec![
            "--family",
            "hirzebruch-refined",
            "--p",
            "3",
            "--m",
            "2",
            "--r",
            "3",
            "--alpha",
            "2",
            "--mh",
            "1",
            "--dd",
            "4",
        ],
        vec![
            "--family",
            "elliptic-legendre",
            "--p",
            "7",
            "--m",
            "2",
            "--d",
            "8",
        ],
        vec!["--family", "elliptic-r5", "--p", "19", "--dd", "12"],
        vec!["--family", "ulmer", "--p", "3", "--m", "2", "--d", "4"],
    ]
}

fn construct_to(args: &[&str], path: &Path) -> Output {
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.push("--out");
    let path_str = path.to_str().unwrap();
    full.push(path_str);
    lrc(&full)
}

#[test]
fn construct_then_verify_every_family() {
    let dir = tempfile::tempdir().unwrap();
    for args in flagship_args() {
        let family = args[1];
        let path = dir.path().join(format!("{family}.json"));
        let out = construct_to(&args, &path);
        assert!(out.status.success(), "construct {family}: {}", stderr(&out));
        assert!(
            stdout(&out).contains("k measured"),
            "construct {family} report"
        );

        let verify = lrc(&[
            "verify",
            "--in",
            path.to_str().unwrap(),
            "--exhaustive-distance",
        ]);
        assert!(
            verify.status.success(),
            "verify {family}: {}\n{}",
            stdout(&verify),
            stderr(&verify)
        );
        assert!(stdout(&verify).contains("verify: PASS"), "verify {family}");
    }
}

#[test]
fn construct_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let run = |path: &Path| {
        let out = Command::new(env!("CARGO_BIN_EXE_lrc"))
            .args([
                "construct",
                "--family",
                "baseline",
                "--p",
                "3",
                "--m",
                "2",
                "--r",
                "3",
                "--b",
                "8",
                "--M",
                "7",
                "--N",
                "6",
                "--seed",
                "5",
                "--out",
            ])
            .arg(path)
            .env_remove("LRC_SEED")
            .output()
            .expect("binary runs");
        assert!(out.status.success());
    };
    run(&a);
    run(&b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn construct_without_out_streams_code_to_stdout() {
    let out = lrc(&[
        "construct",
        "--family",
        "tamo-barg",
        "--p",
        "13",
        "--r",
        "3",
        "--N",
        "1",
    ]);
    assert!(out.status.success());
    let code: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(code["n"], serde_json::json!(12));
    assert!(stderr(&out).contains("k measured"));
}

#[test]
fn construct_rejects_nonprime_characteristic() {
    let out = lrc(&[
        "construct",
        "--family",
        "cyclic",
        "--p",
        "6",
        "--r",
        "3",
        "--dd",
        "3",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("not prime"), "{}", stderr(&out));
}

#[test]
fn construct_rejects_missing_designed_distance() {
    let out = lrc(&["construct", "--family", "cyclic", "--p", "13", "--r", "3"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("dd"), "{}", stderr(&out));
}

#[test]
fn verify_fails_on_tampered_generator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let out = construct_to(
        &["--family", "tamo-barg", "--p", "13", "--r", "3", "--N", "1"],
        &path,
    );
    assert!(out.status.success());

    let mut code: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cell = &mut code["generator"][0][0];
    *cell = serde_json::json!((cell.as_u64().unwrap() + 1) % 13);
    std::fs::write(&path, serde_json::to_string_pretty(&code).unwrap()).unwrap();

    let verify = lrc(&["verify", "--in", path.to_str().unwrap()]);
    assert!(!verify.status.success());
    assert!(stdout(&verify).contains("FAIL"), "{}", stdout(&verify));
}

#[test]
fn verify_falls_back_to_sampling_when_budget_exceeded() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let out = construct_to(
        &[
            "--family", "cyclic", "--p", "13", "--r", "3", "--alpha", "2", "--c", "2", "--dd", "12",
        ],
        &path,
    );
    assert!(out.status.success());

    let verify = lrc(&[
        "verify",
        "--in",
        path.to_str().unwrap(),
        "--exhaustive-distance",
        "--budget",
        "10",
    ]);
    assert!(verify.status.success(), "{}", stdout(&verify));
    let text = stdout(&verify);
    assert!(text.contains("falling back to sampling"), "{text}");
    assert!(text.contains("sampled upper bound"), "{text}");
    assert!(text.contains("verify: PASS"), "{text}");
}

#[test]
fn recover_fills_the_single_erasure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let out = construct_to(
        &["--family", "tamo-barg", "--p", "13", "--r", "3", "--N", "1"],
        &path,
    );
    assert!(out.status.success());

    let code: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let row: Vec<u64> = code["generator"][2]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    let word: Vec<String> = row
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i == 3 {
                "?".to_owned()
            } else {
                v.to_string()
            }
        })
        .collect();
    let recover = lrc(&[
        "recover",
        "--in",
        path.to_str().unwrap(),
        "--word",
        &word.join(","),
    ]);
    assert!(recover.status.success(), "{}", stderr(&recover));
    assert!(
        stdout(&recover).contains(&format!("coordinate 3 = {}", row[3])),
        "{}",
        stdout(&recover)
    );
    assert!(
        stdout(&recover).contains("recovery set: "),
        "{}",
        stdout(&recover)
    );

    // More than one erasure is an error.
    let mut double = word.clone();
    double[7] = "?".to_owned();
    let bad = lrc(&[
        "recover",
        "--in",
        path.to_str().unwrap(),
        "--word",
        &double.join(","),
    ]);
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains("exactly one"), "{}", stderr(&bad));
}

#[test]
fn table_paper_instances_lists_all_families() {
    let out = lrc(&["table", "--suite", "paper-instances"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for tag in [
        "baseline",
        "tamo-barg",
        "cyclic",
        "p1xp1",
        "p1xp1-refined",
        "hirzebruch-refined",
        "elliptic-legendre",
        "elliptic-r5",
        "ulmer",
    ] {
        assert!(text.contains(tag), "missing {tag} in:\n{text}");
    }
    assert!(text.contains("OPTIMAL"), "{text}");
}

#[test]
fn table_optimality_scan_reports_classification() {
    let out = lrc(&["table", "--suite", "optimality-scan"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("105 of 4890"), "{}", stdout(&out));
}

#[test]
fn table_rejects_unknown_suite() {
    let out = lrc(&["table", "--suite", "bogus"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("unknown suite"), "{}", stderr(&out));
}

#[test]
fn json_format_emits_machine_readable_verify_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let out = construct_to(
        &["--family", "ulmer", "--p", "3", "--m", "2", "--d", "4"],
        &path,
    );
    assert!(out.status.success());

    let verify = lrc(&[
        "verify",
        "--in",
        path.to_str().unwrap(),
        "--exhaustive-distance",
        "--format",
        "json",
    ]);
    assert!(verify.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&verify)).unwrap();
    assert_eq!(report["pass"], serde_json::json!(true));
    assert_eq!(report["report"]["d_measured"], serde_json::json!(4));
    assert_eq!(
        report["report"]["distance_mode"],
        serde_json::json!("exact")
    );
    assert!(report["checks"].as_array().unwrap().len() >= 4);
}

#[test]
fn verify_reports_missing_file() {
    let out = lrc(&["verify", "--in", "/nonexistent/code.json"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("i/o error"), "{}", stderr(&out));
}
