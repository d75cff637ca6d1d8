mod common;

use netvoi::cli::{run_with_io, EXIT_OK, EXIT_SIZE_CAP, EXIT_USAGE, EXIT_VALIDATION};
use netvoi::scenario::parse_scenario;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("netvoi").chain(args.iter().copied());
    let code = run_with_io(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fixture(name: &str) -> String {
    common::fixture_path(name).to_string_lossy().into_owned()
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn reliability_prints_system_failure_probability() {
    let (code, out, _) = run(&["reliability", &fixture("two_interval.json"), "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let p = v["summary"]["p_fail_system"].as_f64().unwrap();
    assert!((p - 0.0109).abs() < 5e-4, "{p}");
}

#[test]
fn local_rank_puts_c2_first() {
    let (code, out, _) = run(&["rank", "--metric", "local", &fixture("fig9.json")]);
    assert_eq!(code, EXIT_OK);
    let rows = csv_rows(&out);
    assert_eq!(&rows[0][1], "c2");
    assert_eq!(rows.len(), 6);
}

#[test]
fn birnbaum_rank_puts_c2_first() {
    let (code, out, _) = run(&["rank", "--metric", "bm", &fixture("fig9.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(&csv_rows(&out)[0][1], "c2");
}

#[test]
fn actions_follow_the_exact_policy() {
    let (code, out, _) = run(&["actions", &fixture("fig9_mod.json")]);
    assert_eq!(code, EXIT_OK);
    let plans: Vec<(String, String, String)> = csv_rows(&out)
        .iter()
        .map(|r| (r[0].to_string(), r[1].to_string(), r[2].to_string()))
        .collect();
    let expected = [
        ("c1", "{c4}", "{c3, c4}"),
        ("c2", "{}", "{c3, c4}"),
        ("c3", "{c4}", "{c3, c4}"),
        ("c4", "{}", "{c4}"),
        ("c5", "{c6}", "{c4}"),
        ("c6", "{}", "{c6}"),
    ];
    for (c, silence, alarm) in expected {
        assert!(plans.contains(&(c.into(), "silence".into(), silence.into())), "{c} silence: {plans:?}");
        assert!(plans.contains(&(c.into(), "alarm".into(), alarm.into())), "{c} alarm: {plans:?}");
    }
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let path = fixture("fig9.json");
    let (_, csv_out, _) = run(&["intervals", &path]);
    let (_, json_out, _) = run(&["intervals", &path, "--format", "json"]);
    let v: Value = serde_json::from_str(&json_out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let records = csv_rows(&csv_out);
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(&records) {
        assert_eq!(row["component"].as_str().unwrap(), &rec[0]);
        for (k, field) in ["p_silence", "p_alarm", "width", "alarm_prob"].iter().enumerate() {
            let a = row[field].as_f64().unwrap();
            let b: f64 = rec[k + 1].parse().unwrap();
            assert_eq!(a, b, "{field}");
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["rank", "--metric", "local", "--mc-samples", "2000", "--seed", "7", "--format", "json"];
    let path = fixture("fig9.json");
    let mut a = args.to_vec();
    a.push(&path);
    let first = run(&a);
    let second = run(&a);
    assert_eq!(first.0, EXIT_OK);
    assert_eq!(first.1, second.1);
}

#[test]
fn sensor_overrides_change_the_ranking() {
    let (code, out, _) = run(&[
        "rank", "--metric", "local", "--eps-fa", "0.01", "--eps-fs", "0.4", &fixture("fig9.json"),
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(&csv_rows(&out)[0][1], "c1");
}

#[test]
fn invalid_scenarios_exit_with_validation_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"schema_version": "1", "components": [{"id": "a", "p_fail": 1.5}],
            "structure": {"formula": "series(a, b)"}, "dependence": {"type": "independent"}}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["reliability", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("p_fail"), "{err}");

    let (code, _, _) = run(&["reliability", "/nonexistent/scenario.json"]);
    assert_eq!(code, EXIT_VALIDATION);

    let (code, _, err) = run(&["actions", &fixture("two_interval.json")]);
    assert_eq!(code, EXIT_VALIDATION, "{err}");
}

#[test]
fn oversized_networks_exit_with_size_cap_status() {
    let (code, _, _) = run(&["reliability", "--cap", "10", &fixture("fig13.json")]);
    assert_eq!(code, EXIT_SIZE_CAP);
}

#[test]
fn usage_errors_exit_64_and_help_exits_0() {
    assert_eq!(run(&["rank", &fixture("fig9.json")]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["rank", "--metric", "nope", &fixture("fig9.json")]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn plot_writes_svg_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scores.svg");
    let (code, out, _) = run(&[
        "plot",
        &fixture("fig9.json"),
        "--metric",
        "local",
        "--metric",
        "bm",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.contains("c6"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn scenario_documents_round_trip() {
    for name in ["two_interval.json", "fig9.json", "fig13.json", "substation.json"] {
        let text = std::fs::read_to_string(common::fixture_path(name)).unwrap();
        let doc = parse_scenario(&text).unwrap();
        let again = parse_scenario(&doc.to_json()).unwrap();
        assert_eq!(doc, again, "{name}");
    }
}
