use std::process::{Command, Output};

use serde_json::Value;

use padic_hc::padic::{format_rational, parse_rational, PAdicNumber};

fn padic_hc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-hc")).args(args).env_remove("PADIC_PRECISION").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = padic_hc(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn assert_schema(def: &str, instance: &Value) {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schemas/reports.schema.json")).unwrap();
    let mut schema: Value = serde_json::from_str(&text).unwrap();
    schema["$ref"] = Value::String(format!("#/$defs/{def}"));
    let validator = jsonschema::validator_for(&schema).unwrap();
    if let Err(e) = validator.validate(instance) {
        panic!("{def} does not match the schema: {e}\n{instance:#}");
    }
}

fn activity_file(entries: &[&str]) -> tempfile::NamedTempFile {
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), serde_json::json!({ "entries": entries }).to_string()).unwrap();
    file
}

#[test]
fn periodic_theta_one_fifth() {
    let v = json(&["classify", "periodic2", "--p", "5", "--theta", "1/5"]);
    assert_eq!(v["table_count"], 2);
    assert_eq!(v["oracle_count"], 2);
    assert_eq!(v["consistent"], true);
    assert_schema("PointReport", &v);
}

#[test]
fn fixed_theta_four_has_z_one() {
    let v = json(&["classify", "fixed", "--p", "7", "--theta", "4"]);
    assert_schema("PointReport", &v);
    let roots: Vec<PAdicNumber> = serde_json::from_value(v["roots"].clone()).unwrap();
    assert!(roots.iter().any(|z| z.to_rational() == parse_rational("1").unwrap()));
    assert!(roots.iter().all(|z| z.precision() == 30));
}

#[test]
fn tp2_validation_lists_theta_five() {
    let v = json(&["validate", "--p", "2", "--table", "Tp2", "--samples", "500", "--seed", "42"]);
    assert_schema("ValidationReport", &v);
    let records = v["discrepancies"].as_array().unwrap();
    assert!(records.iter().any(|r| r["theta"] == "5" && r["table_count"] == 2 && r["oracle_count"] == 0));
    assert!(records.iter().any(|r| r["theta"] == "2"));
}

#[test]
fn corrected_tables_validate_cleanly() {
    for p in ["5", "7", "11", "13"] {
        let v = json(&["validate", "--p", p, "--table", "Nsol", "--samples", "150", "--seed", "11"]);
        assert_eq!(v["discrepancies"], serde_json::json!([]), "Nsol at p = {p}");
    }
    for p in ["3", "5", "7", "11"] {
        let v = json(&["validate", "--p", p, "--table", "NPer2", "--samples", "150", "--seed", "11"]);
        assert_eq!(v["discrepancies"], serde_json::json!([]), "NPer2 at p = {p}");
    }
}

#[test]
fn printed_d0_reproduces_the_misclassification() {
    let v = json(&["validate", "--p", "5", "--table", "Nsol", "--samples", "0", "--verbatim-tables"]);
    assert_eq!(v["d0_mode"], "printed");
    let records = v["discrepancies"].as_array().unwrap();
    assert!(records.iter().any(|r| r["a"] == "-1/3" && r["b"] == "29/27"));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["validate", "--p", "3", "--table", "p3", "--samples", "60", "--seed", "7", "--json"][..],
        &["classify", "fixed", "--p", "3", "--theta", "-603/121", "--json"][..],
        &["roots", "--p", "2", "--poly", "1,0,-17", "--json"][..],
    ] {
        assert_eq!(padic_hc(args).stdout, padic_hc(args).stdout);
    }
}

#[test]
fn every_report_matches_the_schema() {
    let lambda = activity_file(&["1/10", "1/10"]);
    let path = lambda.path().to_str().unwrap();
    assert_schema("CubicReport", &json(&["solve", "cubic", "--p", "5", "--a", "-1/3", "--b", "29/27"]));
    assert_schema("CubicReport", &json(&["solve", "cubic", "--p", "2", "--a", "1", "--b", "1"]));
    assert_schema("RootsReport", &json(&["roots", "--p", "7", "--poly", "1,-6,11,-6"]));
    assert_schema("LegendreReport", &json(&["legendre", "--a", "-1", "--p", "13"]));
    assert_schema("PointReport", &json(&["ggm", "count", "--p", "5", "--lambda", path]));
    assert_schema("PointReport", &json(&["ggm", "count", "--p", "5", "--lambda", path, "--kind", "periodic2"]));
    let v = json(&["gibbs", "check", "--p", "5", "--depth", "2", "--lambda", path, "--precision", "12"]);
    assert_schema("GibbsCheckReport", &v);
    assert!(v["laws"].as_array().unwrap().iter().any(|l| l["kind"] == "periodic2"));
    assert_schema("Activity", &serde_json::from_str(&std::fs::read_to_string(lambda.path()).unwrap()).unwrap());
}

#[test]
fn roots_and_rules_in_text_mode() {
    let out = padic_hc(&["roots", "--p", "7", "--poly", "1,-6,11,-6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("3 roots in Q_7"));
    let out = padic_hc(&["solve", "cubic", "--p", "7", "--a", "-1/3", "--b", "56/27"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("table: 1 (Nsol#"), "{text}");
    assert!(text.contains("oracle: 1"));
}

#[test]
fn gibbs_check_residuals() {
    let lambda = activity_file(&["1", "2", "1"]);
    let v = json(&[
        "gibbs",
        "check",
        "--p",
        "7",
        "--depth",
        "2",
        "--lambda",
        lambda.path().to_str().unwrap(),
        "--precision",
        "10",
    ]);
    let ti = &v["laws"][0];
    assert_eq!(ti["kind"], "ti");
    assert!(ti["compatibility"]["equation"]["exponent"].as_i64().is_none_or(|e| e >= 7));
    assert!(ti["compatibility"]["marginal"]["exponent"].as_i64().is_none_or(|e| e >= 7));
    assert!(ti["normalization"]["exponent"].as_i64().is_none_or(|e| e >= 7));
    assert_eq!(ti["witness"], 4);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| padic_hc(args).status.code().unwrap();
    assert_eq!(code(&["classify", "fixed", "--p", "7", "--theta", "4"]), 0);
    assert_eq!(code(&["classify", "fixed", "--p", "9", "--theta", "4"]), 2);
    assert_eq!(code(&["classify", "fixed", "--p", "7", "--theta", "1/0"]), 2);
    assert_eq!(code(&["classify", "fixed", "--p", "7", "--theta", "4", "--precision", "201"]), 2);
    assert_eq!(code(&["classify", "periodic2", "--p", "7", "--theta", "0"]), 2);
    assert_eq!(code(&["validate", "--p", "3", "--table", "Tp2"]), 2);
    assert_eq!(code(&["ggm", "count", "--p", "5", "--lambda", "/nonexistent/lambda.json"]), 2);
    assert_eq!(
        code(&[
            "gibbs",
            "check",
            "--p",
            "5",
            "--k",
            "3",
            "--depth",
            "1",
            "--lambda",
            activity_file(&["1"]).path().to_str().unwrap()
        ]),
        2
    );
    assert_eq!(code(&["classify", "periodic2", "--p", "2", "--theta", "5", "--strict"]), 3);
    assert_eq!(code(&["classify", "fixed", "--p", "3", "--theta", "1", "--strict"]), 3);
    assert_eq!(code(&["validate", "--p", "2", "--table", "Tp2", "--samples", "0", "--strict"]), 3);
    assert_eq!(code(&["validate", "--p", "7", "--table", "NPer2", "--samples", "20", "--strict"]), 0);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn precision_from_environment() {
    let run = |env: &str| {
        Command::new(env!("CARGO_BIN_EXE_padic-hc"))
            .args(["classify", "fixed", "--p", "7", "--theta", "2", "--json"])
            .env("PADIC_PRECISION", env)
            .output()
            .unwrap()
    };
    let out = run("8");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["roots"][0]["precision"], 8);
    assert_eq!(run("2").status.code(), Some(2));
}

#[test]
fn serializations_round_trip() {
    for text in ["0", "-7", "3/4", "-1/3", "123456789012345678901234567890/11"] {
        assert_eq!(format_rational(&parse_rational(text).unwrap()), text);
    }
    let v = json(&["classify", "periodic2", "--p", "3", "--theta", "1/9"]);
    for root in v["roots"].as_array().unwrap() {
        let z: PAdicNumber = serde_json::from_value(root.clone()).unwrap();
        assert_eq!(&serde_json::to_value(&z).unwrap(), root);
    }
}
