use std::process::{Command, Output};

fn pnh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnh")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fvector_table_has_enumeration_and_formula() {
    let o = pnh(&["fvector", "--type", "A3", "--building", "minimal"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for row in ["0             120             120", "1             192             192", "2              74              74"] {
        assert!(text.contains(row), "{text}");
    }
}

#[test]
fn fvector_json_with_faces() {
    let o = pnh(&["fvector", "--type", "B2", "--format", "json", "--faces"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["enumeration"], serde_json::json!(["16", "16", "1"]));
    assert_eq!(v["faces"], serde_json::json!([16, 16, 1]));
    assert!(v["formula"].is_null());
}

#[test]
fn verify_passes_on_a2() {
    let o = pnh(&["verify", "--type", "A2", "--a", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"), "{text}");
    assert!(text.contains("PASS face order"));
}

#[test]
fn verify_fails_on_planted_list() {
    let o = pnh(&["verify", "--type", "A2", "--epsilons", "1/3,1"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL suitable list"), "{text}");
    assert!(text.contains("FAIL epsilon inequalities"), "{text}");
}

#[test]
fn verify_json_report() {
    let o = pnh(&["verify", "--type", "A1^3", "--building", "interval", "--level", "fast", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["fvector", "--type", "E6"],
        vec!["fvector", "--type", "A3", "--building", "sideways"],
        vec!["build", "--type", "A2", "--a", "x"],
        vec!["build", "--type", "A2", "--epsilons", "1"],
        vec!["build", "--type", "A2", "--building", "interval"],
        vec!["export", "--type", "A2", "--format", "off"],
        vec!["frobnicate"],
        vec!["build"],
    ] {
        assert_eq!(pnh(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn build_rejects_unsuitable_list() {
    let o = pnh(&["build", "--type", "A2", "--epsilons", "1/3,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn build_json_is_exact() {
    let o = pnh(&["build", "--type", "A2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["epsilons"], serde_json::json!(["1/5", "1"]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 12);
    assert_eq!(v["halfspaces"].as_array().unwrap().len(), 12);
    assert_eq!(v["vertices"][0]["point"], serde_json::json!(["7/15", "8/15"]));
}

#[test]
fn export_off_for_rank_three() {
    let o = pnh(&["export", "--type", "A3", "--building", "maximal"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("OFF"));
    assert_eq!(lines.next(), Some("144 74 216"));
    assert!(text.contains("lossy"));
}

#[test]
fn poset_json_has_edges_in_low_rank() {
    let o = pnh(&["poset", "--type", "A2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 25);
    assert_eq!(v["edges"].as_array().unwrap().len(), 36);
    let o = pnh(&["poset", "--type", "A2", "--edges", "false"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["edges"].is_null());
}

#[test]
fn building_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("pnh-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a2.json");
    std::fs::write(&path, r#"{"roots": [[1, 0], [0, 1], [1, 1]], "flats": [[0], [1], [2], [0, 1, 2]]}"#).unwrap();
    let arg = format!("file:{}", path.display());
    let o = pnh(&["fvector", "--type", "A2", "--building", &arg, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["enumeration"], serde_json::json!(["12", "12", "1"]));
    std::fs::write(&path, r#"{"roots": [[1, 0], [0, 1], [1, 1]], "flats": [[0], [1], [2]]}"#).unwrap();
    assert_eq!(pnh(&["fvector", "--type", "A2", "--building", &arg]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["verify", "--type", "B2", "--level", "full", "--seed", "7", "--format", "json"];
    assert_eq!(pnh(&args).stdout, pnh(&args).stdout);
}
