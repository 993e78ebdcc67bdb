use std::path::Path;
use std::process::{Command, Output};

use adesieve::cases;
use adesieve_core::cuspintegral::builtin_records;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_adesieve"));
    c.env_remove(adesieve::store::CACHE_ENV);
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn shipped_case_file_matches_builtin_records() {
    assert_eq!(cases::shipped(), builtin_records());
}

#[test]
fn verify_case_e6_prints_final_bound() {
    let o = run(&["verify-case", "--case", "E6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("final bound (1/M)·X^42·X^ε"), "{out}");
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn every_shipped_case_passes_and_e7_lists_its_erratum() {
    for case in ["E6", "E7", "E8", "D4", "D5", "D6", "D7"] {
        assert_eq!(run(&["verify-case", "--case", case]).status.code(), Some(0), "{case}");
    }
    assert!(stdout(&run(&["verify-case", "--case", "E7"])).contains("erratum volume.β5: published -15 corrected -17"));
}

#[test]
fn corrupted_case_file_fails_with_field_name() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cases.json");
    let mut recs = builtin_records();
    let e6 = recs.iter_mut().find(|r| r.case == "E6").unwrap();
    e6.volume.exponents[2] += adesieve_core::Q::from_integer(1);
    std::fs::write(&path, serde_json::to_string(&recs).unwrap()).unwrap();
    let o = run(&["verify-case", "--case", "E6", "--cases", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("adesieve: failed: case E6 mismatches at volume.β3"), "{err}");
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn zeta_and_lambda() {
    assert_eq!(stdout(&run(&["zeta", "--r", "1"])), "1.644934\n");
    assert_eq!(stdout(&run(&["zeta", "--r", "3", "--digits", "12"])), "1.082323233711\n");
    let out = stdout(&run(&["lambda", "--case", "D5"]));
    assert!(out.contains("r = (1, 1, 3, 3)"), "{out}");
    assert!(out.contains("prod zeta(r_i + 1) = "), "{out}");
}

#[test]
fn classify_fixture() {
    let o = run(&["classify", "--poly", "5,5", "--degree", "3", "--p", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("STRONG"));
    let weak = run(&["classify", "--poly", "-6,9,45", "--p", "7"]);
    assert_eq!(stdout(&weak).lines().next(), Some("WEAK"));
}

#[test]
fn construct_prints_certificate_and_writes_exact_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("s.json");
    let csv = dir.path().join("s.csv");
    let o = run(&[
        "construct",
        "--poly",
        "0,-3,2",
        "--m",
        "7",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for needle in ["charpoly = f: yes", "entries in (1/4)Z: yes", "superdiagonal (7,7): yes"] {
        assert!(out.contains(needle), "{needle} in {out}");
    }
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["certified"], true);
    assert_eq!(v["matrix"][0][1]["num"], "7");
    assert_eq!(v["matrix"][0][1]["den"], "1");
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "1,7,0\n0,-2,7\n0,0,1\n");
}

#[test]
fn construct_refuses_non_normalizable_input() {
    let o = run(&["construct", "--poly", "0,1,1", "--m", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("adesieve: failed: not weakly divisible"));
}

#[test]
fn disc_routes_agree() {
    let out = stdout(&run(&["disc", "--poly", "0,-3,2"]));
    assert!(out.contains("discriminant (resultant) 0"));
    let out = stdout(&run(&["disc", "--poly", "0,1,1"]));
    assert!(out.contains("discriminant (resultant) -31") && out.contains("discriminant (sylvester) -31"), "{out}");
    let out = stdout(&run(&["disc", "--form", "3", "--trace-zero"]));
    assert!(out.contains("-4*x0^3 - 27*x1^2"), "{out}");
}

#[test]
fn usage_errors_exit_two_with_one_reason_line() {
    for args in [
        vec!["zeta"],
        vec!["classify", "--poly", "1,1", "--p", "4"],
        vec!["roots", "--type", "E9"],
        vec!["compare", "--family", "D4", "--pmax", "5", "--height", "2"],
        vec!["sieve", "--family", "A2", "--height", "0"],
        vec!["local-density", "--family", "A4", "--p", "11"],
        vec!["nonsense"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let last = stderr(&o).lines().last().unwrap_or("").to_string();
        assert!(last.starts_with("adesieve: usage: "), "{args:?}: {last}");
    }
}

#[test]
fn local_density_and_sieve_outputs() {
    let out = stdout(&run(&["local-density", "--family", "A2", "--p", "2"]));
    assert!(out.contains("rho = 1/2"), "{out}");
    let out = stdout(&run(&["local-density", "--family", "A4", "--p", "11", "--samples", "1000"]));
    assert!(out.contains("method MONTECARLO with 1000 samples, seed 42"), "{out}");
    let out = stdout(&run(&["sieve", "--family", "A2", "--height", "2"]));
    assert!(out.contains("squarefree 30 of 105"), "{out}");
}

fn compare_once(dir: &Path, name: &str, threads: &str, cache: Option<&Path>) -> Vec<u8> {
    let out = dir.join(name);
    let mut c = bin();
    if let Some(cache) = cache {
        c.env(adesieve::store::CACHE_ENV, cache);
    }
    let args = ["compare", "--family", "A2", "--pmax", "23", "--height", "5", "--samples", "50000"];
    let o = c.args(args).args(["--threads", threads, "--out", out.to_str().unwrap()]).output().unwrap();
    assert!(o.status.code() == Some(0) || o.status.code() == Some(1), "{}", stderr(&o));
    std::fs::read(out).unwrap()
}

#[test]
fn compare_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let a = compare_once(dir.path(), "a.json", "1", None);
    let b = compare_once(dir.path(), "b.json", "4", None);
    let c = compare_once(dir.path(), "c.json", "3", Some(&cache));
    let d = compare_once(dir.path(), "d.json", "2", Some(&cache));
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a, d);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 9);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["per_prime"][0]["rho"], "1/2");
    assert_eq!(v["per_prime"][8]["method"], "MONTECARLO");
}

fn help_text() -> String {
    let mut all = String::new();
    let subs = [
        "roots",
        "grade",
        "verify-case",
        "lambda",
        "zeta",
        "disc",
        "classify",
        "construct",
        "local-density",
        "sieve",
        "compare",
    ];
    let top = run(&["--help"]);
    assert_eq!(top.status.code(), Some(0));
    all.push_str(&stdout(&top));
    for s in subs {
        let o = run(&[s, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{s}");
        all.push_str(&format!("==== {s}\n"));
        all.push_str(&stdout(&o));
    }
    all
}

#[test]
fn help_snapshot() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots/help.txt");
    let text = help_text();
    if std::env::var_os("UPDATE_SNAPSHOTS").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let want = std::fs::read_to_string(&path).expect("snapshot exists; run with UPDATE_SNAPSHOTS=1");
    assert_eq!(text, want);
}
