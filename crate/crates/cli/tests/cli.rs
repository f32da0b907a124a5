use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn commvar(args: &[&str], stdin: Option<&str>, env_seed: Option<&str>) -> (i32, Value, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_commvar"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("COMMVAR_SEED");
    if let Some(s) = env_seed {
        cmd.env("COMMVAR_SEED", s);
    }
    let mut child = cmd.spawn().unwrap();
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let json: Value = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), json, text)
}

const SL2_PAIR: &str = r#"{"family":"SL","n":2,"rank":2,"torsion":[],"images":[
  {"n":2,"entries":[[2.0,0.0],[1.0,0.0],[0.0,0.0],[0.5,0.0]]},
  {"n":2,"entries":[[0.5,0.0],[-1.0,0.0],[0.0,0.0],[2.0,0.0]]}]}"#;

#[test]
fn components_example() {
    let (code, v, _) = commvar(&["components", "--gamma", r#"{"rank":1,"torsion":[4]}"#, "--torus-dim", "1"], None, None);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"], 4);
}

#[test]
fn retract_at_zero_is_identity_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("rep.json");
    let out = dir.path().join("rep_t.json");
    std::fs::write(&input, SL2_PAIR).unwrap();
    let (code, v, _) = commvar(
        &["retract", "--t", "0", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()],
        None,
        None,
    );
    assert_eq!(code, 0);
    let original: Value = serde_json::from_str(SL2_PAIR).unwrap();
    assert_eq!(v["payload"], original);
    // the written file is accepted by the reader unchanged
    let written = std::fs::read_to_string(&out).unwrap();
    let (code, v2, _) = commvar(&["retract", "--t", "0", "--in", out.to_str().unwrap()], None, None);
    assert_eq!(code, 0);
    assert_eq!(v2["payload"], serde_json::from_str::<Value>(&written).unwrap());
}

#[test]
fn retract_at_one_reads_stdin() {
    let (code, v, _) = commvar(&["retract", "--t", "1"], Some(SL2_PAIR), None);
    assert_eq!(code, 0);
    let first = &v["payload"]["images"][0]["entries"];
    // diag(2, 1/2) with an upper entry retracts to the identity
    assert!((first[0][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(first[1][0].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn retract_rejects_unipotent_with_violation() {
    let unip = r#"{"family":"GL","n":2,"rank":1,"images":[{"n":2,"entries":[[1,0],[1,0],[0,0],[1,0]]}]}"#;
    let (code, v, _) = commvar(&["retract", "--t", "0.5"], Some(unip), None);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "violation");
    assert_eq!(v["payload"]["error"]["kind"], "not_semisimple");
    assert_eq!(v["payload"]["inputs"][0]["family"], "GL");
}

#[test]
fn fixture_reports_limit() {
    for name in ["limit-to-commuting-pair"] {
        let (code, v, _) = commvar(&["fixtures", name], None, None);
        assert_eq!(code, 0);
        let p = &v["payload"];
        assert_eq!(p["pair_commutes"], false);
        assert_eq!(p["limit_commutes"], true);
        assert_eq!(p["limit_is_expected"], true);
        assert_eq!(p["limit"]["images"][1]["entries"][1], serde_json::json!([0.0, 0.0]));
    }
}

#[test]
fn limit_without_limit_is_a_violation() {
    let lower = r#"{"family":"SL","n":2,"rank":1,"images":[{"n":2,"entries":[[1,0],[0,0],[1,0],[1,0]]}]}"#;
    let (code, v, _) = commvar(&["limit", "--weights", "1,-1"], Some(lower), None);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["error"]["kind"], "no_limit");
    assert_eq!(v["payload"]["weights"], serde_json::json!([1, -1]));
}

#[test]
fn validate_reports_non_commuting_pair() {
    let (code, v, _) = commvar(&["validate"], Some(SL2_PAIR), None);
    assert_eq!(code, 0, "{v}");
    let pair = r#"{"family":"SL","n":2,"rank":2,"images":[
      {"n":2,"entries":[[2,0],[0,0],[0,0],[0.5,0]]},
      {"n":2,"entries":[[3,0],[1,0],[0,0],[0.3333333333333333,0]]}]}"#;
    let (code, v, _) = commvar(&["validate"], Some(pair), None);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["violations"][0]["kind"], "non_commuting");
    assert!(v["payload"]["violations"][0]["residual"].as_f64().unwrap() > 1.0);
}

#[test]
fn polystable_canonical_and_equiv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, r#"{"family":"SL","n":2,"rank":1,"images":[{"n":2,"entries":[[2,0],[0,0],[0,0],[0.5,0]]}]}"#).unwrap();
    std::fs::write(&b, r#"{"family":"SL","n":2,"rank":1,"images":[{"n":2,"entries":[[0.5,0],[0,0],[0,0],[2,0]]}]}"#).unwrap();
    let (code, v, _) = commvar(&["polystable", "--in", a.to_str().unwrap()], None, None);
    assert_eq!((code, v["payload"]["polystable"].clone()), (0, Value::Bool(true)));
    let (code, v, _) = commvar(&["canonical", "--in", a.to_str().unwrap()], None, None);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["canonical"]["columns"], serde_json::json!([[[0.5, 0.0]], [[2.0, 0.0]]]));
    let (code, v, _) = commvar(&["equiv", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()], None, None);
    assert_eq!((code, v["payload"]["equivalent"].clone()), (0, Value::Bool(true)));
    let (code, v, _) = commvar(&["canonical"], Some(r#"{"family":"Sp","n":1,"rows":[[[0.5,0.0]]]}"#), None);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["canonical"]["columns"], serde_json::json!([[[2.0, 0.0]]]));
}

#[test]
fn classify_and_crn() {
    let (code, v, _) = commvar(
        &["classify", "--group", r#"{"d":0,"factors":[{"family":"SL","n":3}]}"#, "--gamma", r#"{"rank":3,"torsion":[]}"#],
        None,
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["irreducible"]["verdict"], "yes");
    assert_eq!(v["payload"]["connected"]["verdict"], "yes");
    assert_eq!(v["payload"]["simply_connected"]["verdict"], "yes");
    assert!(v["citations"].as_array().unwrap().iter().any(|c| c == "rank_three_classical"));
    let (_, v, _) = commvar(&["crn", "--r", "3", "--n", "10"], None, None);
    assert_eq!(v["payload"]["status"]["verdict"], "unknown");
    let (_, v, _) = commvar(&["crn", "--r", "4", "--n", "4"], None, None);
    assert_eq!(v["payload"]["status"]["verdict"], "no");
}

#[test]
fn poincare_with_oracle() {
    let (code, v, _) = commvar(&["poincare", "--n", "2", "--r", "2", "--oracle"], None, None);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["coeffs"], serde_json::json!([1, 2, 2, 2, 1]));
    assert_eq!(v["payload"]["agree"], true);
    let (code, v, _) = commvar(&["poincare", "--n", "9", "--r", "9"], None, None);
    assert_eq!(code, 2);
    assert_eq!(v["payload"]["error"]["kind"], "size_limit");
}

#[test]
fn malformed_inputs_exit_2() {
    let (code, v, _) = commvar(&["validate"], Some("{\n  \"family\": \"SL\",\n  \"n\": 2,,\n}"), None);
    assert_eq!(code, 2);
    assert_eq!(v["payload"]["error"]["kind"], "parse_error");
    assert_eq!(v["payload"]["error"]["line"], 3);
    assert_eq!(v["payload"]["error"]["column"], 10);

    let (code, v, _) = commvar(&["validate"], Some(r#"{"family":"SL","n":2,"rank":1}"#), None);
    assert_eq!(code, 2);
    assert_eq!(v["payload"]["error"]["kind"], "schema_error");
    assert_eq!(v["payload"]["error"]["field"], "images");

    let (code, v, _) = commvar(&["crn", "--r", "3", "--n", "4", "--bogus"], None, None);
    assert_eq!(code, 2);
    assert_eq!(v["payload"]["error"]["kind"], "usage_error");

    let (code, _, _) = commvar(&["retract", "--t", "2"], Some(SL2_PAIR), None);
    assert_eq!(code, 2);
    let (code, _, _) = commvar(&["crn", "--r", "3", "--n", "4", "--tol", "-1"], None, None);
    assert_eq!(code, 2);
    let (code, _, _) = commvar(&["fixtures", "nope"], None, None);
    assert_eq!(code, 2);
    let (code, _, _) = commvar(&["suite", "nope"], None, None);
    assert_eq!(code, 2);
}

#[test]
fn suites_are_deterministic_and_seeded_from_env() {
    let (code, a, ta) = commvar(&["suite", "polystable-oracle", "--seed", "5", "--count", "20"], None, None);
    assert_eq!(code, 0);
    let (_, _, tb) = commvar(&["suite", "polystable-oracle", "--count", "20"], None, Some("5"));
    assert_eq!(ta, tb);
    assert_eq!(a["payload"]["seed"], 5);
    assert_eq!(a["payload"]["rng"], "ChaCha8Rng::seed_from_u64");
    let (code, v, _) = commvar(&["suite", "classify-table"], None, None);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["laws"][0]["checks"], 48);
    let (code, _, _) = commvar(&["suite", "cohomology-oracle"], None, None);
    assert_eq!(code, 0);
    let (code, _, _) = commvar(&["suite", "canonical-weyl", "--count", "50"], None, Some("x"));
    assert_eq!(code, 2);
}
