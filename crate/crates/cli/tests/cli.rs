use std::io::Write;
use std::process::{Command, Output};

fn piseries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_piseries"))
        .args(args)
        .env_remove("PISERIES_CATALOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn verify_known_identity() {
    let o = piseries(&["verify", "--code", "1.2", "--digits", "50"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("VERIFIED"));
}

#[test]
fn published_rhs_of_corrected_identity_is_refuted() {
    let o = piseries(&["verify", "--code", "4.11", "--published-rhs"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("REFUTED"));
    let o = piseries(&["verify", "--code", "4.11"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn unknown_code_exits_64() {
    let o = piseries(&["verify", "--code", "NOPE"]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NOPE"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&piseries(&["verify"])), 64);
    assert_eq!(code(&piseries(&["verify", "--code", "I1", "--digits", "0"])), 64);
    assert_eq!(code(&piseries(&["frobnicate"])), 64);
    assert_eq!(code(&piseries(&["--help"])), 0);
}

#[test]
fn nonconvergent_series_is_inconclusive() {
    let o = piseries(&["verify", "--code", "1.8"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("INCONCLUSIVE"));
}

#[test]
fn ratio_prints_surd() {
    let o = piseries(&["ratio", "--code", "II1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("II1      (9+√6)/18"), "{}", stdout(&o));
}

#[test]
fn dual_output_is_a_loadable_catalog_entry() {
    let o = piseries(&["dual", "--code", "I1"]);
    assert_eq!(code(&o), 0);
    let entry = stdout(&o);
    assert!(entry.contains("weight = \"48k+11\""));
    assert!(entry.contains("base = \"260\""));
    assert!(entry.contains("rhs = \"39/8*sqrt(65)\""));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "schema_version = 1\n\n{entry}").unwrap();
    let path = f.path().to_str().unwrap();
    let o = piseries(&["--catalog", path, "verify", "--all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("1/1 verified"));
}

#[test]
fn catalog_from_environment() {
    let o = piseries(&["dual", "--code", "I1"]);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "schema_version = 1\n\n{}", stdout(&o)).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_piseries"))
        .arg("list")
        .env("PISERIES_CATALOG", f.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("1 identities\n"));
}

#[test]
fn broken_catalog_exits_65() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "schema_version = 1\n[[identity]]\ncode = \"X\"\n").unwrap();
    let o = piseries(&["--catalog", f.path().to_str().unwrap(), "list"]);
    assert_eq!(code(&o), 65);
}

#[test]
fn binomial_transform_prints_entry() {
    let o = piseries(&["transform-binomial", "--code", "4.22", "--verify", "30"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("weight = \"16854k+985\""));
    assert!(s.contains("VERIFIED"));
}

#[test]
fn conj5_table() {
    let o = piseries(&["congruence", "--conj5", "--pmax", "50"]);
    let s = stdout(&o);
    assert!(s.contains("p=11"));
    assert!(s.contains("p=47"));
    // p = 7 divides 105, so no case of the split applies.
    assert!(s.contains("NO-CASE"));
    assert_eq!(code(&o), 3);
    let o = piseries(&["congruence", "--conj5", "--pmin", "11", "--pmax", "50"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("MISMATCH"));
}

#[test]
fn conj1_and_caps() {
    let o = piseries(&["congruence", "--conj1", "--pmax", "30"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = piseries(&["congruence", "--conj1", "--pmax", "1000"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn structural_commands() {
    let o = piseries(&["qlc", "--nmax", "8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = piseries(&["qlc", "--family", "w_q", "--nmax", "3"]);
    assert_eq!(code(&o), 0);
    let o = piseries(&["asymptote", "--b", "1", "--c", "1", "--n", "1000"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0.9998"));
    let o = piseries(&["suite", "--nmax", "8"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn json_is_deterministic_and_agrees_with_text() {
    let args = ["--format", "json", "--jobs", "3", "verify", "--code", "I1,1.2,4.20,1.8"];
    let a = piseries(&args);
    let b = piseries(&args);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(code(&a), 2);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let verdicts: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, ["VERIFIED", "VERIFIED", "REFUTED", "INCONCLUSIVE"]);

    let t = piseries(&["verify", "--code", "I1,1.2,4.20,1.8"]);
    let text_verdicts: Vec<String> =
        stdout(&t).lines().take(4).map(|l| l.split_whitespace().nth(1).unwrap().to_string()).collect();
    assert_eq!(text_verdicts, verdicts);
    assert_eq!(code(&t), code(&a));
}
