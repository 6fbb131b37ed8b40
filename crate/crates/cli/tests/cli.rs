use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn approx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_approx")).current_dir(dir).args(args).output().unwrap()
}

fn run_cfg(dir: &Path, name: &str, body: &str) -> Output {
    fs::write(dir.join(name), body).unwrap();
    approx(dir, &["run", name])
}

fn summary(dir: &Path) -> Value {
    serde_json::from_slice(&fs::read(dir.join("summary.json")).unwrap()).unwrap()
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn dz59_config_reports_n_squared() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_cfg(tmp.path(), "dz59.cfg", "kind = dz59\nn = 3\nassert = deriv_at_0 == 9\n");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(&tmp.path().join("dz59_out"));
    assert_eq!(s["deriv_at_0"].as_f64(), Some(9.0));
    assert_eq!(s["assertions"][0]["pass"], Value::Bool(true));
}

#[test]
fn classdir_config_writes_ratio_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = "kind = verify\nestimate = CLASSDIR\nf = abspow:2.5\nk = 2\nr = 1\nn = 16,32,64,128,256\nout = classdir\nassert = growth_vs_first <= 3\n";
    let out = run_cfg(tmp.path(), "classdir.cfg", cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("classdir");
    for n in [16, 32, 64, 128, 256] {
        let csv = fs::read_to_string(dir.join(format!("ratios_n{n}.csv"))).unwrap();
        assert!(csv.starts_with("x,num,den,ratio\n"));
        assert_eq!(csv.lines().count(), 64 * n + 2);
    }
    assert_eq!(summary(&dir)["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn zero_multiplicity_is_a_parse_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_cfg(tmp.path(), "bad.cfg", "kind = construct\nf = exp\nY = 0:0\nk = 2\nr = 0\nn = 8\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("zero multiplicity"), "{err}");
    let out = approx(tmp.path(), &["verify", "CLASSDIR", "--f", "exp", "--Y", "0:0", "--k", "1", "--r", "0", "--n", "8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_keys_and_bad_values_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    for body in ["kind = dz59\nn = 3\nk = 1\n", "kind = dz59\nn = three\n", "kind = nope\n", "kind = dz59\nn = 3\nassert = x = 1\n"] {
        let out = run_cfg(tmp.path(), "x.cfg", body);
        assert_eq!(out.status.code(), Some(2), "{body}");
    }
}

#[test]
fn failing_assertion_exits_1_and_still_writes_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_cfg(tmp.path(), "dz.cfg", "kind = dz59\nn = 5,7\nassert = rows.1.deriv_at_0 < 49\nassert = all_exceed == true\n");
    assert_eq!(out.status.code(), Some(1));
    let s = summary(&tmp.path().join("dz_out"));
    assert_eq!(s["assertions"][0]["pass"], Value::Bool(false));
    assert_eq!(s["assertions"][1]["pass"], Value::Bool(true));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfgs = [
        ("dlb.cfg", "kind = dlb\nalpha = 1.5\ns = -1\nnu = 2\nn = 8,16\ntrials = 40\nseed = 7\n"),
        ("ver.cfg", "kind = verify\nestimate = MAINNEW1_78\nf = sin:5\nY = -1:2,1:2\nk = 2\nr = 1\nn = 16,32\n"),
        ("blow.cfg", "kind = blowup\nr = 0\nn = 5\n"),
    ];
    for (name, body) in cfgs {
        assert!(run_cfg(tmp.path(), name, body).status.success(), "{name}");
        let dir = tmp.path().join(format!("{}_out", name.trim_end_matches(".cfg")));
        let first = snapshot(&dir);
        assert!(run_cfg(tmp.path(), name, body).status.success());
        assert_eq!(first, snapshot(&dir), "{name}");
    }
}

#[test]
fn seed_changes_the_ensemble() {
    let tmp = tempfile::tempdir().unwrap();
    let body = |seed: u64| format!("kind = dlb\nalpha = 1\nnu = 1\nn = 8\ntrials = 5\nseed = {seed}\nout = s{seed}\n");
    for seed in [1, 2] {
        assert!(run_cfg(tmp.path(), "d.cfg", &body(seed)).status.success());
    }
    assert_ne!(fs::read(tmp.path().join("s1/dlb.csv")).unwrap(), fs::read(tmp.path().join("s2/dlb.csv")).unwrap());
}

#[test]
fn construct_writes_polynomial_json() {
    let tmp = tempfile::tempdir().unwrap();
    let out = approx(tmp.path(), &["construct", "--f", "sin:5", "--Y", "-1:2,1:2", "--k", "2", "--r", "1", "--n", "32", "--out", "poly.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&fs::read(tmp.path().join("poly.json")).unwrap()).unwrap();
    assert_eq!(v["basis"], "chebyshev");
    assert_eq!(v["meta"]["Y"], "-1:2,1:2");
    assert_eq!(v["coeffs"].as_array().unwrap().len(), v["degree"].as_u64().unwrap() as usize + 1);
    let leftovers = fs::read_dir(tmp.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn counterex_cases_run() {
    let tmp = tempfile::tempdir().unwrap();
    let out = approx(tmp.path(), &["counterex", "i", "--n", "5,10", "--out", "ci"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(&tmp.path().join("ci"));
    assert!(s["min_growth_4_12"].as_f64().unwrap() >= 2.0);
    assert_eq!(s["all_nondecreasing"], Value::Bool(true));
    let out = approx(tmp.path(), &["counterex", "ii", "--k", "2", "--depth", "5", "--out", "cii"]);
    assert!(out.status.success());
    let s = summary(&tmp.path().join("cii"));
    assert_eq!(s["holds"], Value::Bool(true));
    assert!(tmp.path().join("cii/sandwich.csv").exists());
}
