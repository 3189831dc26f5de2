use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dxm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dxm"))
        .args(args)
        .env_remove("DXM_SEED")
        .output()
        .expect("run dxm")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/v1")
}

/// Parses stdout and checks it against `schemas/v1/<name>.json`.
fn json_report(out: &Output, schema: &str) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)));
    validate(&v, schema);
    v
}

fn validate(v: &Value, schema: &str) {
    let text = std::fs::read_to_string(schema_dir().join(format!("{schema}.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(v)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

const MOBIUS: &str = "(z - 1/2)/(1 - z/2)";
const UNRESOLVED: &str = "(z + ((1+i)*z - 1)/(z + (i - 1)))/2";

#[test]
fn repro_reproduces_every_reference_verdict() {
    let out = dxm(&["repro", "--json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json_report(&out, "repro");
    assert_eq!(v["passed"], 7);
    assert_eq!(v["total"], 7);
    let unresolved = v["fixtures"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["name"] == "unresolved")
        .unwrap();
    assert!(unresolved["detail"]
        .as_str()
        .unwrap()
        .contains("thm3 construction verified to n = 12"));
}

#[test]
fn repro_single_fixture() {
    let out = dxm(&["repro", "--only", "1-z^3-over-2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("NotEndomorphism"), "{text}");
    assert!(text.contains("N1 = 2"), "{text}");
    assert!(text.contains("1/1 expected verdicts"), "{text}");

    assert_eq!(code(&dxm(&["repro", "--only", "no-such-map"])), 1);
}

#[test]
fn builtin_fixtures_match_their_schema() {
    let text =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/reference_maps.json")).unwrap();
    validate(&serde_json::from_str(&text).unwrap(), "fixtures");
}

#[test]
fn corrupted_fixture_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"schema_version": "1", "fixtures": [{"name": "x", "map": "z/2"#,
    )
    .unwrap();
    let out = dxm(&["repro", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));

    std::fs::write(&path, r#"{"schema_version": "1", "fixtures": [{"name": "x", "map": "z/2", "expect": {"result": "Endomorphism"}, "extra": 1}]}"#).unwrap();
    assert_eq!(code(&dxm(&["repro", "--fixtures", path.to_str().unwrap()])), 1);
}

#[test]
fn fixture_mismatch_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wrong.json");
    std::fs::write(
        &path,
        r#"{"schema_version": "1", "fixtures": [{"name": "half", "map": "z/2", "expect": {"result": "NotEndomorphism"}}]}"#,
    )
    .unwrap();
    let out = dxm(&["repro", "--fixtures", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn weights_check_json_has_exactly_the_report_fields() {
    let out = dxm(&[
        "weights",
        "check",
        "--kind",
        "factorial-power",
        "--alpha",
        "2",
        "--upto",
        "30",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_report(&out, "weight_report");
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "algebra_ok",
            "max_checked",
            "nonanalytic_trace",
            "quasi_partial_sums",
            "thm1b"
        ]
    );
    assert_eq!(v["thm1b"]["holds"], true);
    assert_eq!(v["thm1b"]["B"], 1.0);

    let out = dxm(&["weights", "check", "--weight", "n!^1.5", "--upto", "30", "--json"]);
    assert_eq!(json_report(&out, "weight_report")["thm1b"]["holds"], false);
}

#[test]
fn weights_check_csv_and_failing_table() {
    let out = dxm(&["weights", "check", "--weight", "n!log^n", "--upto", "5", "--csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,log_m,nonanalytic_r,quasi_partial_sum");
    assert_eq!(lines.len(), 6);

    // M_2 = 1 < C(2, 1) M_1 M_1 breaks the algebra condition.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, r#"{"name": "flat", "log_m": [0, 0, 0, 0]}"#).unwrap();
    let out = dxm(&["weights", "check", "--weight-file", path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json_report(&out, "weight_report")["algebra_ok"], false);

    assert_eq!(code(&dxm(&["weights", "check", "--weight", "n!^0.5"])), 1);
}

#[test]
fn endo_check_exit_codes_follow_the_verdict() {
    let out = dxm(&[
        "endo", "check", "--map", "z/2", "--weight", "n!^2", "--domain", "disc", "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_report(&out, "verdict");
    assert_eq!(v["result"], "Endomorphism");
    assert_eq!(v["certificate"]["q"], 0.5);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["sampling"]["boundary_samples"], 2048);

    let out = dxm(&["endo", "check", "--map", MOBIUS, "--json"]);
    assert_eq!(code(&out), 0);
    let v = json_report(&out, "verdict");
    assert_eq!(v["result"], "NotEndomorphism");
    assert!((v["certificate"]["abs_derivative"].as_f64().unwrap() - 3.0).abs() < 1e-9);

    let out = dxm(&["endo", "check", "--map", UNRESOLVED, "--json"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json_report(&out, "verdict")["label"], "unresolved-case");
}

#[test]
fn coefficient_lists_and_expressions_agree() {
    let a = dxm(&["endo", "check", "--num", "1/2,0,0,-1/2", "--den", "1", "--json"]);
    let b = dxm(&["endo", "check", "--map", "(1 - z^3)/2", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let v = json_report(&a, "verdict");
    assert_eq!(v["map"], "((1/2) + (-1/2)*z^3)/((1))");
    assert_eq!(v["family"]["n1"], 2);
}

#[test]
fn input_errors_exit_with_usage_code() {
    let out = dxm(&["endo", "check", "--map", "z/(z"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("offset 4"), "{}", stderr(&out));

    let out = dxm(&["endo", "check", "--map", "2*z"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not a self-map"), "{}", stderr(&out));

    assert_eq!(code(&dxm(&["endo", "check", "--map", "z", "--num", "1"])), 1);
    assert_eq!(code(&dxm(&["endo", "check"])), 1);
    assert_eq!(code(&dxm(&["frobnicate"])), 1);
    assert_eq!(code(&dxm(&["--help"])), 0);
    assert_eq!(code(&dxm(&["--version"])), 0);
}

#[test]
fn witness_table_grows_with_r() {
    let out = dxm(&["endo", "witness", "--map", MOBIUS, "--b", "1", "--R", "1,2,4"]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["R", "normF", "normFphi", "ratio"]);
    let ratios: Vec<f64> = rdr.records().map(|r| r.unwrap()[3].parse().unwrap()).collect();
    assert_eq!(ratios.len(), 3);
    assert!(
        ratios[0] < ratios[1] && ratios[1] < ratios[2] && ratios[1] >= 10.0,
        "{ratios:?}"
    );

    let out = dxm(&["endo", "witness", "--map", MOBIUS, "--R", "1,2", "--json"]);
    assert_eq!(code(&out), 0);
    json_report(&out, "witness_growth");

    // z/2 never reaches the circle, so there is no expanding point to use.
    assert_eq!(code(&dxm(&["endo", "witness", "--map", "z/2"])), 1);
}

#[test]
fn forged_weights_feed_back_into_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weights.json");
    let file = path.to_str().unwrap();
    let out = dxm(&["forge", "thm5", "--map", MOBIUS, "--nmax", "8", "--out", file, "--json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json_report(&out, "construction");
    assert_eq!(v["verification"]["ok"], true);
    assert_eq!(v["construction"]["kind"], "refutation");

    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    validate(&written, "weights_file");
    assert_eq!(written["log_m"].as_array().unwrap().len(), 9);

    let out = dxm(&["weights", "check", "--weight-file", file, "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_report(&out, "weight_report")["max_checked"], 8);

    let out = dxm(&["endo", "check", "--map", "z/2", "--weight-file", file, "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_report(&out, "verdict")["weight"], "constructed-refutation");
}

#[test]
fn forge_thm3_on_unresolved_map() {
    let out = dxm(&["forge", "thm3", "--map", UNRESOLVED, "--nmax", "8"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("0 failed"));

    let out = dxm(&["forge", "thm3", "--map", "z^2", "--nmax", "4"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("hypothesis"), "{}", stderr(&out));

    let out = dxm(&["forge", "thm3", "--map", "z/2", "--domain", "interval", "--nmax", "4"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn classify_parabolic_map() {
    let out = dxm(&["classify", "--num", "1/4,1/2,1/4", "--nmax", "8", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json_report(&out, "classification");
    assert_eq!(v["case"], "case3a_ii");
    assert!((v["denjoy_wolff"][0].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn supnorm_on_both_domains() {
    let out = dxm(&[
        "domain",
        "supnorm",
        "--map",
        "(1 - z^3)/2",
        "--derivative",
        "1",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_report(&out, "supnorm");
    assert!((v["supnorm"]["value"].as_f64().unwrap() - 1.5).abs() < 1e-9);

    let out = dxm(&[
        "domain",
        "supnorm",
        "--map",
        "z^2/2 + 1/4",
        "--domain",
        "interval",
        "--samples",
        "512",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_report(&out, "supnorm");
    assert_eq!(v["sampling"]["kind"], "interval01");
    assert_eq!(v["sampling"]["boundary_samples"], 512);
    assert!((v["supnorm"]["value"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn seed_fixes_the_sampling_offset() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_dxm"))
            .args([
                "domain",
                "supnorm",
                "--map",
                "(2*z - 1)/(z - 2)",
                "--derivative",
                "1",
                "--json",
            ])
            .env("DXM_SEED", seed)
            .output()
            .unwrap()
    };
    let (a, b, c) = (run("11"), run("11"), run("12"));
    assert_eq!(a.stdout, b.stdout);
    let va = json_report(&a, "supnorm");
    let vc = json_report(&c, "supnorm");
    assert_eq!(va["seed"], 11);
    assert_ne!(va["sampling"]["sample_offset"], vc["sampling"]["sample_offset"]);
    assert_eq!(code(&run("not-a-number")), 1);
}
