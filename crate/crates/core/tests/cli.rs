use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn dualbent(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualbent"))
        .args(args)
        .current_dir(dir)
        .env_remove("DUALBENT_BUDGET")
        .output()
        .expect("spawn dualbent")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn build_and_verify_example1() {
    let dir = TempDir::new().unwrap();
    let b = dualbent(
        &[
            "build",
            "--instance",
            "example1",
            "--kind",
            "theorem1",
            "--s",
            "2",
            "--out",
            "c.json",
            "--matrix",
            "g.txt",
        ],
        dir.path(),
    );
    assert_eq!(code(&b), 0, "{}", stderr(&b));
    let built = json(&b);
    assert_eq!(
        (
            built["q"].as_u64(),
            built["n"].as_u64(),
            built["k"].as_u64()
        ),
        (Some(9), Some(80), Some(3))
    );
    assert_eq!(
        fs::read_to_string(dir.path().join("c.json"))
            .unwrap()
            .trim(),
        String::from_utf8_lossy(&b.stdout).trim()
    );
    assert!(fs::read_to_string(dir.path().join("g.txt"))
        .unwrap()
        .starts_with("9 80 3\n"));

    let v = dualbent(
        &["verify", "c.json", "--matrix", "g.txt", "--csv", "w.csv"],
        dir.path(),
    );
    assert_eq!(code(&v), 0, "{}", stderr(&v));
    let report = json(&v);
    assert_eq!(report["analysis"]["d"], 71);
    assert_eq!(report["analysis"]["prediction"]["matches"], true);
    assert_eq!(report["analysis"]["griesmer"]["meets"], true);
    assert_eq!(
        fs::read_to_string(dir.path().join("w.csv")).unwrap(),
        "weight,count\n0,1\n71,640\n72,80\n80,8\n"
    );
}

#[test]
fn corollaries_verify() {
    let dir = TempDir::new().unwrap();
    for (instance, kind, q) in [
        ("example2", "corollary1", 9),
        ("example6", "corollary2_S", 121),
    ] {
        let b = dualbent(
            &[
                "build",
                "--instance",
                instance,
                "--kind",
                kind,
                "--s1",
                "2",
                "--s2",
                "2",
                "--out",
                "c.json",
            ],
            dir.path(),
        );
        assert_eq!(code(&b), 0, "{instance}: {}", stderr(&b));
        let v = dualbent(&["verify", "c.json"], dir.path());
        assert_eq!(code(&v), 0, "{instance}: {}", stderr(&v));
        let report = json(&v);
        assert_eq!(report["analysis"]["q"], q);
        assert_eq!(report["analysis"]["prediction"]["matches"], true);
        assert_eq!(report["analysis"]["dual_distance"], ">=3");
    }
}

#[test]
fn invalid_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad_s2 = dualbent(
        &[
            "build",
            "--instance",
            "example2",
            "--kind",
            "corollary1",
            "--s1",
            "2",
            "--s2",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(code(&bad_s2), 2);
    assert!(stderr(&bad_s2).contains("s2 must divide m"));

    let missing = dualbent(&["verify", "absent.json"], dir.path());
    assert_eq!(code(&missing), 2);

    let bad_e = dualbent(
        &[
            "function", "--family", "F1", "--p", "3", "--r", "4", "--m", "2", "--e", "2",
        ],
        dir.path(),
    );
    assert_eq!(code(&bad_e), 2);
    assert!(stderr(&bad_e).contains("gcd(e"));

    let bad_field = dualbent(&["field-info", "--p", "4"], dir.path());
    assert_eq!(code(&bad_field), 2);
}

#[test]
fn tampered_matrix_exits_3() {
    let dir = TempDir::new().unwrap();
    let b = dualbent(
        &[
            "build",
            "--instance",
            "example1",
            "--kind",
            "theorem1",
            "--s",
            "2",
            "--out",
            "c.json",
            "--matrix",
            "g.txt",
        ],
        dir.path(),
    );
    assert_eq!(code(&b), 0);
    let path = dir.path().join("g.txt");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let mut row: Vec<u32> = lines[1]
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    row[0] = (row[0] + 1) % 9;
    lines[1] = row.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let v = dualbent(&["verify", "c.json", "--matrix", "g.txt"], dir.path());
    assert_eq!(code(&v), 3, "{}", stderr(&v));
    assert_eq!(json(&v)["analysis"]["prediction"]["matches"], false);
}

#[test]
fn budget_exits_4() {
    let dir = TempDir::new().unwrap();
    let b = dualbent(
        &[
            "build",
            "--instance",
            "example4",
            "--kind",
            "corollary1",
            "--s1",
            "2",
            "--s2",
            "2",
            "--out",
            "c.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&b), 0, "{}", stderr(&b));
    let v = dualbent(&["verify", "c.json"], dir.path());
    assert_eq!(code(&v), 4);
    assert!(stderr(&v).contains("--extended"));
    let sampled = dualbent(
        &["verify", "c.json", "--sample", "500", "--seed", "3"],
        dir.path(),
    );
    assert_eq!(code(&sampled), 0, "{}", stderr(&sampled));
    let out = json(&sampled);
    assert_eq!(out["mode"], "sampled");
    assert_eq!(out["sample"]["unexpected"], serde_json::json!([]));

    fs::write(
        dir.path().join("g.txt"),
        "25 5 4\n1 0 0 0 1\n0 1 0 0 1\n0 0 1 0 1\n0 0 0 1 1\n",
    )
    .unwrap();
    let s = dualbent(&["sss", "--matrix", "g.txt"], dir.path());
    assert_eq!(code(&s), 4);
    let p = dualbent(
        &["sss", "--matrix", "g.txt", "--predicted-only"],
        dir.path(),
    );
    assert_eq!(code(&p), 0);
    assert_eq!(json(&p)["report"]["predicted"]["total"], 15625);
    let e = dualbent(&["--extended", "sss", "--matrix", "g.txt"], dir.path());
    assert_eq!(code(&e), 0, "{}", stderr(&e));
    // one-dimensional dual: every participant alone learns the secret
    let report = json(&e)["report"].clone();
    assert_eq!(report["enumerated"]["total"], 4);
    assert_eq!(report["enumerated"]["code_minimal"], false);
    assert_eq!(report["verdicts"]["total"], false);
}

#[test]
fn sss_deals_and_recovers() {
    let dir = TempDir::new().unwrap();
    let b = dualbent(
        &[
            "build",
            "--instance",
            "f3-p3-r4-m1",
            "--kind",
            "theorem1",
            "--s",
            "1",
            "--out",
            "c.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&b), 0, "{}", stderr(&b));
    let s = dualbent(
        &["sss", "--code", "c.json", "--secret", "2", "--seed", "7"],
        dir.path(),
    );
    assert_eq!(code(&s), 0, "{}", stderr(&s));
    let out = json(&s);
    assert_eq!(out["report"]["enumerated"]["total"], 81);
    assert_eq!(out["recovered"], 2);
    assert_eq!(out["scheme"]["minimality_precondition"], true);
    assert_eq!(out["report"]["groups"], serde_json::json!([]));
    assert_eq!(out["deal"]["shares"].as_array().unwrap().len(), 79);
}

#[test]
fn function_and_field_info() {
    let dir = TempDir::new().unwrap();
    let f = dualbent(&["function", "--instance", "example1"], dir.path());
    assert_eq!(code(&f), 0);
    let report = json(&f);
    assert_eq!(report["condition_a"]["passes"], true);
    assert_eq!(report["condition_a"]["epsilon"], -1);

    let i = dualbent(
        &["field-info", "--p", "3", "--n", "2", "--element", "5"],
        dir.path(),
    );
    assert_eq!(code(&i), 0);
    let info = json(&i);
    assert_eq!(info["order"], 9);
    assert_eq!(info["field"]["modulus"], serde_json::json!([2, 2, 1]));
    assert_eq!(info["element"]["quadratic_character"], -1);
}
