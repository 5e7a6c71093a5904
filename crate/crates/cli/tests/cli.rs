use std::path::PathBuf;
use std::process::{Command, Output};

fn ktile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktile")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_file(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ktile-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn verify_exit_codes() {
    let ok = ktile(&["verify", "d8_lemma3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("coverage.verdict: "));

    let bad = ktile(&["verify", "d8_badshear"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("coverage.witness: "));

    let missing = ktile(&["verify", "no/such/file.inst"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());
}

#[test]
fn validate_reports_location() {
    let tri = scratch_file("tri.inst", "polygon = (0,0) (1,0) (0,1)\nbasis = (1,0) (0,1)\n");
    let out = ktile(&["validate", tri.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("valid: false"));
    assert!(stdout(&out).contains("line 1, column 11"));

    let dec = scratch_file("dec.inst", "polygon = (0,0) (1.5,0)\n");
    let out = ktile(&["validate", dec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 18"));

    assert_eq!(ktile(&["validate", "unit_square"]).status.code(), Some(0));
}

#[test]
fn bound_first_line() {
    let out = ktile(&["bound", "--m", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next(), Some("6 (Lemma 5)"));
    let out = ktile(&["bound", "d10_lemma4"]);
    assert_eq!(stdout(&out).lines().next(), Some("5 (Lemma 4)"));
}

#[test]
fn vertices_pass_on_a_tiling() {
    let out = ktile(&["vertices", "d8prime_grs"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.ends_with(".passed: true")).count() >= 1);
    assert!(!text.contains(".passed: false"));
}

#[test]
fn search_finds_the_integer_lattice() {
    let out = ktile(&["search", "d10_lemma4", "--k", "5", "--grid", "1/2:1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("found: 1"));
    assert!(text.contains("tiling: basis (1,0) (0,1) offsets (0,0)"));

    let bad = ktile(&["search", "d10_lemma4", "--k", "5", "--grid", "0:1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn render_writes_svg() {
    let path = std::env::temp_dir().join(format!("ktile-cli-{}-heat.svg", std::process::id()));
    let out = ktile(&[
        "render",
        "d8_lemma3",
        "--window",
        "-4:4:-4:4",
        "--mode",
        "coverage-heat",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.contains(r#"<g id="cells">"#));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn oracle_is_deterministic() {
    let a = ktile(&["oracle", "d8_badshear", "--samples", "300", "--seed", "9"]);
    let b = ktile(&["oracle", "d8_badshear", "--samples", "300", "--seed", "9", "--threads", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let total: usize = stdout(&a)
        .lines()
        .filter_map(|l| l.strip_prefix("multiplicity "))
        .map(|l| l.split(": ").nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 300);
}

#[test]
fn json_report_parses() {
    let out = ktile(&["verify", "square_twofold", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["instance"]["k"], serde_json::json!(2));
    assert!(v.get("timing_us").map_or(true, |t| t.is_null()));
}
