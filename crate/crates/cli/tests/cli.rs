use std::path::PathBuf;
use std::process::{Command, Output};

fn wdparity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wdparity"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value_line<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| {
        let (k, v) = l.trim().split_once(" = ")?;
        (k.trim() == key).then_some(v.trim())
    })
}

#[test]
fn global_split_multiplicative_reports_minus_one() {
    let out = wdparity(&["global", "examples/split_mult.datum"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(value_line(&text, "eps"), Some("-1"), "{text}");
    assert_eq!(value_line(&text, "modified eps"), Some("+1"));
    assert_eq!(value_line(&text, "modified h1_f"), Some("2"));
    assert_eq!(value_line(&text, "eps * (-1)^h1_f"), Some("+1"));
}

#[test]
fn global_signs_of_elliptic_analogues() {
    for (file, eps) in [
        ("good_ordinary.datum", "+1"),
        ("good_ordinary_nonsplit.datum", "-1"),
        ("good_everywhere.datum", "-1"),
        ("nonsplit_mult.datum", "+1"),
    ] {
        let out = wdparity(&["global", &format!("examples/{file}")]);
        assert!(out.status.success(), "{file}");
        assert_eq!(value_line(&stdout(&out), "eps"), Some(eps), "{file}");
    }
}

#[test]
fn formulary_of_cyclotomic_numerology() {
    let out = wdparity(&["formulary", "examples/qp1.num"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(value_line(&text, "h1"), Some("2"));
    assert_eq!(value_line(&text, "h1_f"), Some("1"));
    assert_eq!(value_line(&text, "h1_g"), Some("2"));
}

#[test]
fn selfcheck_is_deterministic() {
    let args = ["selfcheck", "--seed", "0", "--cases", "200"];
    let first = wdparity(&args);
    let second = wdparity(&args);
    assert!(first.status.success(), "{}", stdout(&first));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("200/200"));
}

#[test]
fn corrupted_family_fails_with_status_one() {
    let out = wdparity(&["global", "examples/family_corrupted.datum"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL] local signs away from p"));
    let out = wdparity(&["global", "examples/family_consistent.datum"]);
    assert!(out.status.success());
}

#[test]
fn strict_turns_warnings_into_failures() {
    let args = ["eps-local", "examples/twisted_special.datum"];
    assert!(wdparity(&args).status.success());
    let mut strict = vec!["--strict"];
    strict.extend(args);
    assert_eq!(wdparity(&strict).status.code(), Some(1));
}

#[test]
fn record_output_is_json() {
    let out = wdparity(&["--output", "record", "verify", "examples/split_mult.datum"]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record["command"], "verify");
    assert_eq!(record["passed"], true);
    assert!(record["sections"][0]["checks"].as_array().unwrap().len() > 5);
}

#[test]
fn eps_local_reports_both_routes() {
    let out = wdparity(&["eps-local", "examples/nonsplit_mult.datum"]);
    let text = stdout(&out);
    assert_eq!(value_line(&text, "eps (direct)"), Some("+1"));
    assert_eq!(value_line(&text, "eps (Panchishkin)"), Some("+1"));
    assert!(text.contains("[pass] routes agree"));
}

#[test]
fn parse_errors_exit_with_status_two() {
    let dir = std::env::temp_dir().join(format!("wdparity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.datum");
    std::fs::write(&empty, "").unwrap();
    let out = wdparity(&["verify", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));

    let text =
        std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/qp.num"))
            .unwrap()
            .replace("\"h0_t\"", "\"h0_tt\"");
    let unknown = dir.join("unknown.num");
    std::fs::write(&unknown, text).unwrap();
    let out = wdparity(&["formulary", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("h0_tt"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn wrong_input_kind_is_a_usage_error() {
    let out = wdparity(&["global", "examples/qp.num"]);
    assert_eq!(out.status.code(), Some(2));
}
