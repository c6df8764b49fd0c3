use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn diagram(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../diagrams")
        .join(name)
}

fn annkh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annkh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(cmd: &str, file: &str, extra: &[&str]) -> (i32, String) {
    let path = diagram(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = annkh(&args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn stdout(cmd: &str, file: &str, extra: &[&str]) -> String {
    let (code, text) = run(cmd, file, extra);
    assert_eq!(code, 0, "{cmd} {file} {extra:?}: {text}");
    text
}

fn json(cmd: &str, file: &str, extra: &[&str]) -> Value {
    let mut extra = extra.to_vec();
    extra.push("--json");
    serde_json::from_str(&stdout(cmd, file, &extra)).unwrap()
}

/// Parses a tab-separated table into rows of integers, skipping the header
/// and the total line.
fn table(text: &str) -> Vec<Vec<i64>> {
    text.lines()
        .skip(1)
        .take_while(|l| !l.starts_with("total"))
        .map(|l| l.split('\t').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn unknot_homology() {
    let out = stdout("homology", "essential_unknot.tng", &[]);
    assert_eq!(out, "i\tj\tdim\n0\t-1\t1\n0\t1\t1\ntotal\t2\n");
    let out = stdout("homology", "essential_unknot.tng", &["--reduced"]);
    assert_eq!(out, "i\tj\tdim\n0\t0\t1\ntotal\t1\n");
}

#[test]
fn trefoil_homology_matches_jones() {
    let rows = table(&stdout("homology", "trefoil.tng", &[]));
    let mut chi = BTreeMap::new();
    for r in &rows {
        *chi.entry(r[1]).or_insert(0) += if r[0] % 2 == 0 { r[2] } else { -r[2] };
    }
    chi.retain(|_, c| *c != 0);
    let jones: BTreeMap<i64, i64> = json("jones", "trefoil.tng", &[])
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["q"].as_i64().unwrap(), t["c"].as_i64().unwrap()))
        .collect();
    assert_eq!(chi, jones);
    assert_eq!(rows.iter().map(|r| r[2]).sum::<i64>(), 6);
}

#[test]
fn annular_tables() {
    let out = stdout("annular", "essential_unknot.tng", &[]);
    assert_eq!(out, "i\tj\tk\tdim\n0\t-1\t-1\t1\n0\t1\t1\t1\ntotal\t2\n");
    let out = stdout("annular", "trivial_circle.tng", &[]);
    assert_eq!(out, "i\tj\tk\tdim\n0\t-1\t0\t1\n0\t1\t0\t1\ntotal\t2\n");
    assert!(stdout("annular", "sigma1.tng", &[]).ends_with("total\t4\n"));
}

#[test]
fn sj_lines() {
    assert_eq!(
        stdout("sj", "essential_unknot.tng", &[]),
        "q*t + q^-1*t^-1 | z | z\nt=1: q + q^-1\n"
    );
    assert_eq!(
        stdout("sj", "trivial_circle.tng", &[]),
        "q + q^-1 | (q+q^-1) | (-a^-2-a^2)\nt=1: q + q^-1\n"
    );
    for file in ["sigma1.tng", "trefoil.tng", "mixed3.tng"] {
        let sj = stdout("sj", file, &[]);
        let jones = stdout("jones", file, &[]);
        assert_eq!(sj.lines().nth(1).unwrap(), format!("t=1: {}", jones.trim_end()));
    }
}

#[test]
fn spectral_pages() {
    let out = stdout("ss", "sigma1.tng", &[]);
    assert!(out.starts_with("E1\n"));
    assert!(out.contains("E2 = E_inf\n"));
    let totals: Vec<&str> = out.lines().filter(|l| l.starts_with("total")).collect();
    assert_eq!(totals, ["total\t4", "total\t2"]);
    for file in ["essential_unknot.tng", "trivial_circle.tng"] {
        assert!(stdout("ss", file, &[]).starts_with("E1 = E_inf\n"));
    }
    let pages = json("ss", "sigma1.tng", &["--max-page", "1"]);
    assert_eq!(pages.as_array().unwrap().len(), 1);
    assert_eq!(pages[0]["final"], false);
}

#[test]
fn rt_blocks() {
    let out = stdout("rt", "e1_tangle.tng", &[]);
    assert!(out.contains("weight 0\n\tud\tdu\nud\tq^-1\t1\ndu\t1\tq\n"), "{out}");
    let out = stdout("rt", "identity1_tangle.tng", &[]);
    assert!(out.contains("d\t1\n") && out.contains("u\t1\n"));
    assert!(out.contains("tr_q: q + q^-1\n"));
    let v = json("rt", "e1_tangle.tng", &[]);
    assert_eq!(v["quantum_trace"], json("jones", "e1_closure.tng", &[]));
    assert_eq!(v["blocks"][1]["rows"], serde_json::json!([["q^-1", "1"], ["1", "q"]]));
}

#[test]
fn check_suite() {
    for file in ["essential_unknot.tng", "trefoil.tng", "sigma1.tng", "borromean.tng"] {
        let out = stdout("check", file, &[]);
        assert!(out.ends_with(" 0 failed\n"), "{out}");
    }
    let (code, out) = run("check", "trefoil.tng", &["--inject-fault"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL weight preservation: resolution 000"));
    let (code, out) = run("check", "trefoil.tng", &["--inject-fault", "--json"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run("homology", "e1_tangle.tng", &[]).0, 2);
    assert_eq!(run("jones", "missing.tng", &[]).0, 2);
    assert_eq!(annkh(&["nonsense"]).status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("annkh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.tng");
    std::fs::write(&bad, "m=1\nclosure=annular\nslice: x+@1\n").unwrap();
    assert_eq!(annkh(&["jones", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn crossing_guardrail() {
    let dir = std::env::temp_dir().join(format!("annkh-guard-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let big = dir.join("big.tng");
    let mut text = String::from("m=2\nclosure=annular\n");
    for _ in 0..25 {
        text.push_str("slice: x+@1\n");
    }
    std::fs::write(&big, text).unwrap();
    let path = big.to_str().unwrap();
    let out = annkh(&["jones", path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
    assert_eq!(annkh(&["parse", path]).status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    for cmd in ["homology", "annular", "sj", "ss", "rt", "check"] {
        let base = stdout(cmd, "mixed3.tng", &[]);
        for threads in ["1", "3"] {
            assert_eq!(stdout(cmd, "mixed3.tng", &["--threads", threads]), base, "{cmd}");
        }
    }
}

#[test]
fn json_and_text_agree() {
    let text = table(&stdout("annular", "mixed3.tng", &[]));
    let v = json("annular", "mixed3.tng", &[]);
    let from_json: Vec<Vec<i64>> = v["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| ["i", "j", "k", "dim"].iter().map(|f| r[*f].as_i64().unwrap()).collect())
        .collect();
    assert_eq!(text, from_json);

    let sj_text = stdout("sj", "sigma1.tng", &[]);
    assert_eq!(json("sj", "sigma1.tng", &[])["text"], sj_text.lines().next().unwrap());

    let check_text = stdout("check", "sigma1.tng", &[]);
    let check_json = json("check", "sigma1.tng", &[]);
    let names: Vec<String> = check_json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            format!(
                "PASS {}: {}",
                c["name"].as_str().unwrap(),
                c["detail"].as_str().unwrap()
            )
        })
        .collect();
    let lines: Vec<&str> = check_text.lines().filter(|l| l.starts_with("PASS")).collect();
    assert_eq!(lines, names);
}

#[test]
fn parse_round_trip() {
    let text = stdout("parse", "trefoil.tng", &[]);
    let as_json = stdout("parse", "trefoil.tng", &["--json"]);
    let dir = std::env::temp_dir().join(format!("annkh-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.tng");
    let b = dir.join("b.json");
    std::fs::write(&a, &text).unwrap();
    std::fs::write(&b, &as_json).unwrap();
    assert_eq!(stdout("parse", a.to_str().unwrap(), &[]), text);
    assert_eq!(stdout("parse", b.to_str().unwrap(), &[]), text);
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(stdout("parse", "sigma1_tangle.json", &[]).contains("closure=none"));
}
