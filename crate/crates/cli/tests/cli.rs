//! End-to-end checks of the command surface: outputs, file formats and
//! the exit-code contract.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_goldberg-lab"))
}

fn write_graph(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path
}

fn petersen_text() -> String {
    let mut out = String::from("10\n");
    for i in 0..5 {
        out.push_str(&format!("{} {}\n", i, (i + 1) % 5));
    }
    for i in 0..5 {
        out.push_str(&format!("{} {}\n", i, i + 5));
    }
    for i in 0..5 {
        out.push_str(&format!("{} {}\n", 5 + i, 5 + (i + 2) % 5));
    }
    out
}

fn shannon_text(mu: usize) -> String {
    let mut out = String::from("3\n");
    for (u, v) in [(0, 1), (0, 2), (1, 2)] {
        for _ in 0..mu {
            out.push_str(&format!("{u} {v}\n"));
        }
    }
    out
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn chi_prime_petersen() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "petersen.txt", &petersen_text());
    let out = bin().arg("chi-prime").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_str(&out).trim(), "4");
}

#[test]
fn chi_prime_shannon_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "shannon2.txt", &shannon_text(2));
    let witness = dir.path().join("witness.json");
    let out = bin()
        .arg("chi-prime")
        .arg(&path)
        .arg("--witness")
        .arg(&witness)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_str(&out).trim(), "6");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(doc["k"], 6);
    assert_eq!(doc["colors"].as_object().unwrap().len(), 6);
}

#[test]
fn chi_prime_empty_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "empty.txt", "4\n");
    let out = bin().arg("chi-prime").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_str(&out).trim(), "0");
}

#[test]
fn chi_f_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let petersen = write_graph(&dir, "petersen.txt", &petersen_text());
    let out = bin().arg("chi-f").arg(&petersen).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(doc["chi_f"], "3/1");
    assert_eq!(doc["ceil"], 3);
    assert!(doc["witness"].is_null());

    let s3 = write_graph(&dir, "shannon3.txt", &shannon_text(3));
    let out = bin().arg("chi-f").arg(&s3).output().unwrap();
    let doc: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(doc["chi_f"], "9/1");
    assert_eq!(doc["ceil"], 9);
    assert_eq!(doc["witness"], serde_json::json!([0, 1, 2]));

    let tri = write_graph(&dir, "triangle.txt", "3\n0 1\n1 2\n0 2\n");
    let out = bin().arg("chi-f").arg(&tri).output().unwrap();
    let doc: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(doc["chi_f"], "3/1");
}

#[test]
fn parse_error_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "loop.txt", "2\n0 0\n");
    let out = bin().arg("chi-prime").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_error_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    // complete(7, 2) has 42 edges, above the search cap
    let mut text = String::from("7\n");
    for u in 0..7 {
        for v in (u + 1)..7 {
            text.push_str(&format!("{u} {v}\n{u} {v}\n"));
        }
    }
    let path = write_graph(&dir, "big.txt", &text);
    let out = bin().arg("chi-prime").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn color_certificate_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "shannon2.txt", &shannon_text(2));
    let out = bin()
        .args(["color", "--colors", "5"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let doc: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(doc["verdict"], "certificate");
    assert_eq!(doc["x"], serde_json::json!([0, 1, 2]));
    assert_eq!(doc["density"], 6);
}

#[test]
fn color_colored_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_graph(&dir, "shannon2.txt", &shannon_text(2));
    let out = bin()
        .args(["color", "--colors", "6"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(doc["verdict"], "colored");
    assert_eq!(doc["colors"].as_object().unwrap().len(), 6);
}

#[test]
fn color_auto_always_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("petersen.txt", petersen_text()),
        ("shannon3.txt", shannon_text(3)),
        ("path.txt", "3\n0 1\n1 2\n".to_string()),
    ] {
        let path = write_graph(&dir, name, &text);
        let out = bin().args(["color", "--auto"]).arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}

#[test]
fn color_trace_lines_are_json() {
    let dir = tempfile::tempdir().unwrap();
    let mut ring = String::from("5\n");
    for i in 0..5 {
        for _ in 0..3 {
            ring.push_str(&format!("{} {}\n", i, (i + 1) % 5));
        }
    }
    let path = write_graph(&dir, "ring53.txt", &ring);
    let out = bin()
        .args(["color", "--auto", "--trace"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for line in stdout_str(&out).lines() {
        let doc: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(doc.get("verdict").is_some() || doc.get("op").is_some());
    }
}

#[test]
fn verify_exhaustive_clean() {
    let out = bin()
        .args([
            "verify",
            "--family",
            "exhaustive",
            "--max-n",
            "3",
            "--max-mu",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines.len(), 31);
    for line in lines {
        let doc: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(doc["violation"], serde_json::Value::Null);
    }
}

#[test]
fn verify_random_deterministic() {
    let run = || {
        stdout_str(
            &bin()
                .args([
                    "verify", "--family", "random", "--max-n", "5", "--max-mu", "2",
                    "--count", "20", "--seed", "7",
                ])
                .env("GOLDBERG_LAB_THREADS", "2")
                .output()
                .unwrap(),
        )
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_fault_injection_fails() {
    let out = bin()
        .args([
            "verify",
            "--family",
            "exhaustive",
            "--max-n",
            "3",
            "--max-mu",
            "2",
            "--inject-fault",
            "chi-plus-one",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_str(&out);
    assert!(text.contains("minimized"));
}

#[test]
fn props_zero_count_empty_report() {
    let out = bin()
        .args(["props", "--suite", "tashkinov", "--count", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(doc["triples"], 0);
}

#[test]
fn props_small_suites_pass() {
    for suite in ["tashkinov", "ett"] {
        let out = bin()
            .args(["props", "--suite", suite, "--count", "12", "--seed", "3"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let doc: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
        assert_eq!(doc["triples"], 12);
    }
}

#[test]
fn generate_round_trips_through_chi_prime() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["generate", "shannon", "--mu", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 7);
    let path = write_graph(&dir, "generated.txt", &text);
    let out = bin().arg("chi-prime").arg(&path).output().unwrap();
    assert_eq!(stdout_str(&out).trim(), "6");
}

#[test]
fn generate_random_is_deterministic() {
    let run = || {
        stdout_str(
            &bin()
                .args([
                    "generate", "random", "--n", "6", "--mu-max", "3", "--edge-prob",
                    "0.5", "--seed", "1",
                ])
                .output()
                .unwrap(),
        )
    };
    assert_eq!(run(), run());
}
