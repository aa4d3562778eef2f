use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn gslice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gslice"))
        .args(args)
        .env_remove("GSL_MAX_DEGREE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gslice-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn dims(report: &str) -> Vec<usize> {
    report
        .lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().strip_prefix("dim=").unwrap().parse().unwrap())
        .collect()
}

#[test]
fn kontsevich_rational_dimensions() {
    let o = gslice(&["invariants", "--model", "kontsevich", "--field", "Q", "--max-degree", "4", "--sliced"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(dims(&text), [1, 0, 3, 0, 6]);
    assert!(text.starts_with("d=0 dim=1 basis=[1]\nd=1 dim=0 basis=[]\nd=2 dim=3 basis=[Delta1, Gamma, Delta2]\n"));
}

#[test]
fn kontsevich_char_two_dimensions() {
    let o = gslice(&["invariants", "--model", "kontsevich", "--field", "F2", "--max-degree", "4", "--sliced"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(dims(&text), [1, 2, 3, 4, 6]);
    assert!(text.contains("d=1 dim=2 basis=[B1, B2]"));
    assert!(text.contains("Lambda"));
}

#[test]
fn degree_zero_is_just_the_constants() {
    let o = gslice(&["invariants", "--model", "kontsevich", "--max-degree", "0"]);
    assert_eq!(stdout(&o), "d=0 dim=1 basis=[1]\n");
}

#[test]
fn unsliced_integers_match_sliced_dimensions() {
    let o = gslice(&["invariants", "--model", "kontsevich", "--field", "Z", "--max-degree", "2", "--unsliced"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(dims(&stdout(&o)), [1, 0, 3]);
}

#[test]
fn json_report_has_the_degree_table() {
    let o = gslice(&["invariants", "--model", "kontsevich", "--field", "F2", "--max-degree", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["field"], "F2");
    assert_eq!(v["mode"], "sliced");
    let got: Vec<u64> = v["degrees"].as_array().unwrap().iter().map(|d| d["dim"].as_u64().unwrap()).collect();
    assert_eq!(got, [1, 2, 3]);
}

#[test]
fn ordered_points_degree_one() {
    let o = gslice(&["invariants", "--model", "ordered-points:4", "--max-degree", "1", "--unsliced"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(dims(&stdout(&o)), [1, 2]);
}

#[test]
fn over_the_cap_and_bad_models_exit_two() {
    let o = gslice(&["invariants", "--model", "kontsevich", "--max-degree", "9", "--sliced"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
    let o = gslice(&["invariants", "--model", "kontsevich", "--max-degree", "7", "--unsliced"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(gslice(&["invariants", "--model", "cubics"]).status.code(), Some(2));
    assert_eq!(gslice(&["invariants", "--model", "kontsevich", "--field", "Fp:4"]).status.code(), Some(2));
}

#[test]
fn environment_overrides_the_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_gslice"))
        .args(["invariants", "--model", "kontsevich", "--max-degree", "3", "--sliced"])
        .env("GSL_MAX_DEGREE", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_checks_pass() {
    for check in ["relations", "flatness", "theorem-iii"] {
        let o = gslice(&["verify", "--check", check]);
        assert_eq!(o.status.code(), Some(0), "{check}");
        let text = stdout(&o);
        assert!(!text.is_empty() && text.lines().all(|l| l.starts_with("PASS ")), "{check}: {text}");
    }
    let text = stdout(&gslice(&["verify", "--check", "relations"]));
    assert_eq!(text, "PASS Delta12 = Delta1 + Delta2 + 2*Gamma\nPASS 4*Lambda = Gamma^2 - Delta1*Delta2\n");
    assert_eq!(gslice(&["verify", "--check", "theorem-iv"]).status.code(), Some(2));
}

#[test]
fn classify_examples() {
    let first = |a: &str, b: &str, ch: &str| {
        let o = gslice(&["classify", "--s1", a, "--s2", b, "--char", ch]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    assert!(first("x*y", "x*y", "0").starts_with("strictly-semistable\n"));
    assert!(first("x^2", "x^2", "0").starts_with("unstable\n"));
    let c2 = first("x^2", "y^2", "2");
    assert!(c2.starts_with("properly-stable\n"));
    assert!(c2.contains("Lambda = 1\n"));
    assert_eq!(gslice(&["classify", "--s1", "x^3", "--s2", "y^2", "--char", "0"]).status.code(), Some(2));
    assert_eq!(gslice(&["classify", "--s1", "x*", "--s2", "y^2", "--char", "0"]).status.code(), Some(2));
}

#[test]
fn gale_reports() {
    let path = scratch("m24.txt");
    fs::write(&path, "1 0 1 1\n0 1 1 2\n").unwrap();
    let o = gslice(&["gale", "--matrix", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("dual:\n"));
    assert!(text.contains("pluecker(M): p12=1 p13=1 p14=2 p23=-1 p24=-1 p34=1\n"));
    assert!(text.contains("complementarity: PASS (λ=1)\n"));

    fs::write(&path, "1 0 0 0\n0 1 0 0\n").unwrap();
    let text = stdout(&gslice(&["gale", "--matrix", path.to_str().unwrap()]));
    assert!(text.contains("pluecker(M): p12=1 p13=0 p14=0 p23=0 p24=0 p34=0\n"));
    assert!(text.contains("pluecker(G): p12=0 p13=0 p14=0 p23=0 p24=0 p34=1\n"));

    fs::write(&path, "1 0\n0 1\n").unwrap();
    let o = gslice(&["gale", "--matrix", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be < m"));

    fs::write(&path, "1 2 3\n2 4 6\n").unwrap();
    assert_eq!(gslice(&["gale", "--matrix", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(gslice(&["gale", "--matrix", "/nonexistent/matrix"]).status.code(), Some(2));
}

#[test]
fn out_duplicates_stdout_and_reports_are_deterministic() {
    let path = scratch("report.txt");
    let args = ["invariants", "--model", "kontsevich", "--field", "F2", "--max-degree", "3", "--out", path.to_str().unwrap()];
    let a = gslice(&args);
    let b = gslice(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(&path).unwrap(), a.stdout);
}
