use std::process::{Command, Output};

use serde_json::Value;

fn apery(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apery")).args(args).env_remove("APERY_BITS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn eval_reports_exact_parts_and_agreement() {
    let out = apery(&["eval", "--z", "2", "--k", "1", "--bits", "256", "--method", "both", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["command", "z", "bits", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let row = &v["rows"][0];
    assert_eq!(row["r1"], "3");
    assert_eq!(row["r2"], "4");
    let value = row["value"].as_str().unwrap();
    assert!(value.starts_with("6.14159265358979"));
    // floor(256 * 0.301) significant digits
    assert_eq!(value.replace('.', "").len(), 77);
    assert_eq!(v["verdicts"][0]["passed"], true);
}

#[test]
fn table_rows_match_known_values() {
    let v = json(&apery(&["table", "--z", "2", "--kmax", "2"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let want = [("1", "2", "0.5", "0.28539"), ("3", "4", "0.75", "0.03539"), ("11", "14", "0.785714", "0.000316")];
    for (row, (r1, r2, ratio, res)) in rows.iter().zip(want) {
        assert_eq!(row["r1"], r1);
        assert_eq!(row["r2"], r2);
        assert!(row["ratio"].as_str().unwrap().starts_with(ratio));
        assert!(row["residual"].as_str().unwrap().starts_with(res));
    }
}

#[test]
fn csv_has_header_and_exact_strings() {
    let out = apery(&["table", "--z", "1", "--kmax", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,r1,r2,ratio,residual"));
    assert!(lines.nth(1).unwrap().starts_with("1,2/3,4/3,"));
}

#[test]
fn negative_k_uses_series_only() {
    let v = json(&apery(&["eval", "--z", "1", "--k", "-2", "--bits", "128"]));
    let row = &v["rows"][0];
    assert!(row.get("r1").is_none());
    // pi^2/18
    assert!(row["series"].as_str().unwrap().starts_with("0.548311355616075478824138"));
    let out = apery(&["eval", "--z", "1", "--k", "-2", "--method", "closed"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_and_domain_errors_exit_2_with_one_line() {
    for args in [
        vec!["eval", "--z", "2", "--k", "1", "--nope"],
        vec!["eval", "--z", "two", "--k", "1"],
        vec!["eval", "--z", "9/2", "--k", "1"],
        vec!["table", "--z", "2", "--kmin", "4", "--kmax", "1"],
        vec!["eval", "--z", "2", "--k", "1", "--bits", "32"],
        vec!["verify", "--suite", "nonsense"],
        vec!["rate", "--kmin", "1"],
    ] {
        let out = apery(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert_eq!(stderr(&out).trim_end().lines().count(), 1, "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn bits_flag_beats_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_apery"));
        c.args(args);
        match env {
            Some(b) => c.env("APERY_BITS", b),
            None => c.env_remove("APERY_BITS"),
        };
        json(&c.output().unwrap())["bits"].as_u64().unwrap()
    };
    assert_eq!(run(None, &["limit", "--z", "2"]), 256);
    assert_eq!(run(Some("96"), &["limit", "--z", "2"]), 96);
    assert_eq!(run(Some("96"), &["limit", "--z", "2", "--bits", "128"]), 128);
    assert_eq!(run(None, &["rate", "--kmax", "12"]), 512);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["genfunc", "--z", "1", "--kmax", "4"];
    let direct = apery(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = apery(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct);
}

#[test]
fn job_count_does_not_change_output() {
    let a = apery(&["table", "--z", "3", "--kmax", "12", "--jobs", "1"]).stdout;
    let b = apery(&["table", "--z", "3", "--kmax", "12", "--jobs", "4"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn verify_suite_reports_verdicts() {
    let out = apery(&["verify", "--suite", "negk"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["z"], Value::Null);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert!(verdicts.iter().all(|c| c["passed"] == true));
    assert_eq!(verdicts.iter().filter(|c| c["expected_failure"] == true).count(), 1);
}

#[test]
fn full_verify_exits_1_on_failing_checks() {
    // the large-k estimate for R2 does not hold, so the full run reports failures
    let out = apery(&["verify", "--suite", "asym"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["summary"]["failed"].as_u64().unwrap() > 0);
}
