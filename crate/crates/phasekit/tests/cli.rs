use std::process::Command;

fn phasekit() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_phasekit"));
    c.env_remove("PHASEKIT_THREADS");
    c
}

fn point_args() -> [&'static str; 12] {
    [
        "--j-min",
        "0",
        "--j-max",
        "0",
        "--j-steps",
        "1",
        "--g-min",
        "0",
        "--g-max",
        "0",
        "--g-steps",
        "1",
    ]
}

#[test]
fn single_point_scan_to_stdout() {
    let out = phasekit().arg("scan").args(point_args()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("0,0,-0.5,"));
    assert!(text.contains("PM-N"));
}

#[test]
fn repeated_scans_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let st = phasekit()
            .args([
                "scan",
                "--j-steps",
                "21",
                "--g-steps",
                "21",
                "--threads",
                threads,
                "--out",
            ])
            .arg(&path)
            .status()
            .unwrap();
        assert_eq!(st.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "1");
    let c = run("c.csv", "3");
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 21 * 21 + 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# single row\nj-min = -0.5\nj_max = -0.5\nj-steps = 1\ng-steps = 3\n",
    )
    .unwrap();
    let out = phasekit()
        .args(["scan", "--g-steps", "2", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.starts_with("-0.5,")));
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["scan", "--nonsense"],
        vec!["scan", "--g-steps", "1"],
        vec!["scan", "--method", "quantum"],
        vec!["scan", "--config", "/nonexistent/phasekit.cfg"],
        vec!["frobnicate"],
    ] {
        let st = phasekit().args(&args).output().unwrap().status;
        assert_eq!(st.code(), Some(1), "{args:?}");
    }
}

#[test]
fn point_failures_exit_with_two_and_still_write() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ff.csv");
    let st = phasekit()
        .args([
            "scan",
            "--method",
            "effective",
            "--backend",
            "free-fermion",
            "--j-min",
            "-0.2",
            "--j-max",
            "0",
            "--j-steps",
            "2",
            "--g-min",
            "0.1",
            "--g-max",
            "0.7",
            "--g-steps",
            "3",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(2));
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert_eq!(text.matches("error: ").count(), 3);
}

#[test]
fn thread_count_from_environment() {
    let out = phasekit()
        .env("PHASEKIT_THREADS", "2")
        .arg("scan")
        .args(point_args())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = phasekit()
        .env("PHASEKIT_THREADS", "lots")
        .arg("scan")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn ed_point_json() {
    let out = phasekit()
        .args(["ed-point", "--g", "0.2", "--n-sites", "4", "--n-max", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["label"], "PM-N");
    assert!(v["result"]["nmax_converged"].as_bool().unwrap());

    let shifted = phasekit()
        .args(["ed-point", "--g", "0.9", "--n-sites", "4", "--displaced"])
        .output()
        .unwrap();
    assert_eq!(shifted.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&shifted.stdout).unwrap();
    assert!(v["result"]["displaced_frame"].as_f64().unwrap() < 0.0);
    assert!(v["result"]["parity"].is_null());
    assert_eq!(v["label"], "PM-S");
}

#[test]
fn multicritical_bracket_failure_is_structured() {
    let out = phasekit()
        .args([
            "multicritical",
            "--n-sites",
            "8",
            "--j-min",
            "0.05",
            "--j-max",
            "0.2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failure"]["order"], "second");
    assert!(v.get("result").is_none());
}

#[test]
fn selfcheck_passes() {
    let out = phasekit().arg("selfcheck").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}
