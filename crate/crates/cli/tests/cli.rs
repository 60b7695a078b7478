use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn frackw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frackw"))
        .args(args)
        .env_remove("FRACKW_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn shipped(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../graphs")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn solve_below_zero_has_one_solution() {
    let o = frackw(&[
        "solve",
        "--graph",
        "builtin:1",
        "--s",
        "0.5",
        "--lambda",
        "-0.1",
        "--c",
        "-1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("solutions: 1 "), "{text}");
    assert!(text.contains("degree estimate: 1"), "{text}");
}

#[test]
fn solve_json_from_file() {
    let o = frackw(&[
        "solve",
        "--graph",
        &shipped("type3.json"),
        "--s",
        "0.7",
        "--lambda",
        "0",
        "--c",
        "-2",
        "--starts",
        "32",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree_estimate"], 1);
    assert_eq!(v["starts_used"], 32);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 1);
    assert_eq!(v["solutions"][0]["jacobian_sign"], 1);
}

#[test]
fn spectral_text_and_json() {
    let o = frackw(&["spectral", "--graph", "builtin:1", "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for section in ["eigenvalues:", "L_s:", "W_s:"] {
        assert!(text.contains(section), "{text}");
    }
    assert!(text.contains("6.000000000000"));

    let o = frackw(&["spectral", "--graph", "builtin:1", "--s", "0.5", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ev = v["eigenvalues"].as_array().unwrap();
    assert_eq!(ev[0].as_f64().unwrap(), 0.0);
    assert!((ev[1].as_f64().unwrap() - 6.0).abs() < 1e-12);
    let ls = v["Ls"].as_array().unwrap();
    assert!((ls[0][0].as_f64().unwrap() - 2.0 / 6f64.sqrt()).abs() < 1e-10);
    assert!((v["Ws"][0][1].as_f64().unwrap() - 6f64.sqrt() / 3.0).abs() < 1e-10);
    assert_eq!(v["phi"].as_array().unwrap().len(), 2);
}

#[test]
fn critical_reports_bracket() {
    let o = frackw(&[
        "critical",
        "--graph",
        "builtin:1",
        "--s",
        "0.5",
        "--c",
        "-1",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let l = v["lambda_star"].as_f64().unwrap();
    let (lo, hi) = (
        v["bracket"][0].as_f64().unwrap(),
        v["bracket"][1].as_f64().unwrap(),
    );
    assert!(0.0 < l && l < 0.5);
    assert!(lo <= l && l <= hi && hi - lo <= 1e-4);
    assert_eq!(v["status"], "ok");

    let o = frackw(&[
        "critical",
        "--graph",
        "builtin:1",
        "--s",
        "0.5",
        "--c",
        "-1",
        "--tol",
        "1e-3",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("lambda_star = "), "{text}");
    assert!(text.contains("status = ok"));
}

#[test]
fn sweep_writes_csv_and_svg_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(format!("{name}.csv"));
        let svg = dir.path().join(format!("{name}.svg"));
        let o = frackw(&[
            "sweep",
            "--graph",
            "builtin:1",
            "--s-list",
            "0.3,0.7",
            "--c-min",
            "-1",
            "--c-max",
            "-0.5",
            "--c-step",
            "0.25",
            "--out",
            csv.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        (fs::read(csv).unwrap(), fs::read_to_string(svg).unwrap())
    };
    let (csv_a, svg_a) = run("a");
    let (csv_b, svg_b) = run("b");
    assert_eq!(csv_a, csv_b);
    assert_eq!(svg_a, svg_b);

    let text = String::from_utf8(csv_a).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c,s,lambda_star,bracket_width,status");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1].starts_with("-1,0.3,"));
    assert!(lines[4].starts_with("-1,0.7,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
    assert_eq!(svg_a.matches("<polyline").count(), 2);
}

#[test]
fn sweep_respects_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_frackw"))
        .args([
            "sweep",
            "--graph",
            "builtin:2",
            "--s-list",
            "0.5",
            "--c-min",
            "-1",
            "--c-max",
            "-1",
            "--c-step",
            "0.5",
            "--out",
            csv.to_str().unwrap(),
        ])
        .env("FRACKW_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 2);

    let bad = Command::new(env!("CARGO_BIN_EXE_frackw"))
        .args([
            "sweep",
            "--graph",
            "builtin:2",
            "--s-list",
            "0.5",
            "--c-min",
            "-1",
            "--c-max",
            "-1",
            "--c-step",
            "0.5",
        ])
        .args(["--out", csv.to_str().unwrap()])
        .env("FRACKW_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).starts_with("E-VALID"));
}

#[test]
fn validation_errors_exit_one() {
    let cases: [&[&str]; 5] = [
        &["spectral", "--graph", "builtin:1", "--s", "1.5"],
        &[
            "critical",
            "--graph",
            "builtin:1",
            "--s",
            "0.5",
            "--c",
            "0.5",
        ],
        &[
            "critical",
            "--graph",
            "builtin:1",
            "--s",
            "0.5",
            "--c",
            "-1",
            "--tol",
            "0",
        ],
        &[
            "solve",
            "--graph",
            "builtin:9",
            "--s",
            "0.5",
            "--lambda",
            "0",
            "--c",
            "-1",
        ],
        &[
            "spectral",
            "--graph",
            "/nonexistent/graph.json",
            "--s",
            "0.5",
        ],
    ];
    for args in cases {
        let o = frackw(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(
            stderr(&o).starts_with("E-VALID: "),
            "{args:?}: {}",
            stderr(&o)
        );
    }
    let o = frackw(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_file_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"edges\": [[0, 1, 2]], \"h\": [0, -0.5]}").unwrap();
    let o = frackw(&["spectral", "--graph", path.to_str().unwrap(), "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("E-PARSE: "), "{}", stderr(&o));

    fs::write(
        &path,
        r#"{"measure": [1, 1], "edges": [[0, 1, 2], [1, 0, 3]], "h": [0, -1]}"#,
    )
    .unwrap();
    let o = frackw(&["spectral", "--graph", path.to_str().unwrap(), "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("inconsistent"), "{}", stderr(&o));
}

#[test]
fn quick_selftest_passes() {
    let o = frackw(&["selftest", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.matches("[PASS]").count(), 9);
    assert!(text.contains("all 9 checks passed"));
}
