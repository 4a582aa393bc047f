use std::path::PathBuf;
use std::process::{Command, Output};

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poset-duality")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn inspect_reports_hierarchy() {
    let l3 = json(&["inspect", "--instance", &instance("l3.json")]);
    assert_eq!(l3["hierarchical"], false);
    assert_eq!(l3["ideals"], 6);
    assert_eq!(l3["levels"], serde_json::json!([["a", "b"], ["c"]]));
    let c3 = json(&["inspect", "--instance", &instance("c3.json")]);
    assert_eq!(c3["hierarchical"], true);
    assert_eq!(c3["report_agrees"], true);
}

#[test]
fn malformed_and_missing_instances_exit_two() {
    let dir = std::env::temp_dir().join(format!("poset-duality-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"ground\": [").unwrap();
    assert_eq!(run(&["inspect", "--instance", bad.to_str().unwrap()]).status.code(), Some(2));
    let cyclic = dir.join("cyclic.json");
    std::fs::write(&cyclic, r#"{"ground":["a","b"],"relations":[["a","b"],["b","a"]],"groups":{"a":[2],"b":[2]}}"#).unwrap();
    assert_eq!(run(&["inspect", "--instance", cyclic.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["inspect"]).status.code(), Some(2));
    assert_eq!(run(&["inspect", "--instance", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn partitions_examples() {
    let c2 = json(&["partitions", "--instance", &instance("c2.json")]);
    assert_eq!(c2["reflexive"], true);
    assert_eq!(c2["dual_partition"].as_array().unwrap().len(), 3);
    assert_eq!(c2["dual_partition_via_f_agrees"], true);
    let l3 = json(&["partitions", "--instance", &instance("l3.json")]);
    assert_eq!(l3["reflexive"], false);
    assert_eq!(l3["classification"]["dual_is_dual_weight"], false);
    let v3 = json(&["partitions", "--instance", &instance("v3.json")]);
    assert_eq!(v3["reflexive"], true);
}

#[test]
fn partitions_respect_enumeration_cap() {
    let o = run(&["partitions", "--instance", &instance("n4.json"), "--cap-enum", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn macwilliams_examples() {
    let one = run(&["macwilliams", "--instance", &instance("z2sq.json"), "--gen", "11"]);
    assert_eq!(one.status.code(), Some(0));
    let text = stdout(&one);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().ends_with(",true"));
    let all = run(&["macwilliams", "--instance", &instance("z2sq.json"), "--all-subgroups"]);
    assert_eq!(all.status.code(), Some(0));
    assert_eq!(stdout(&all).lines().count(), 6);
    assert_eq!(run(&["macwilliams", "--instance", &instance("z2sq.json"), "--gen", "13"]).status.code(), Some(2));
    assert_eq!(run(&["macwilliams", "--instance", &instance("z2sq.json")]).status.code(), Some(2));
    let as_json = json(&["macwilliams", "--instance", &instance("mixed.json"), "--all-subgroups", "--format", "json"]);
    assert!(as_json.as_array().unwrap().iter().all(|r| r["holds"] == true));
}

#[test]
fn pi_examples() {
    let v = json(&["pi", "--instance", &instance("c2.json"), "--ring", "symbolic", "--d", "b", "--check", "inclusion-exclusion"]);
    assert_eq!(v["coefficients"], serde_json::json!(["1", "e_a", "-t_a"]));
    assert_eq!(v["checks"]["inclusion-exclusion"]["holds"], true);
    let o = run(&["pi", "--instance", &instance("c2.json"), "--y", "a", "--d", "b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a subset"));
    let all = json(&["pi", "--instance", &instance("v3.json"), "--ring", "rational", "--d", "c", "--check", "all"]);
    for (name, value) in all["checks"].as_object().unwrap() {
        assert_eq!(value["holds"], true, "{name}: {value}");
    }
    let modp = json(&["pi", "--instance", &instance("l3.json"), "--ring", "modp:7", "--d", "c", "--check", "descent"]);
    assert!(modp["checks"]["descent"]["skipped"].is_string());
    assert_eq!(run(&["pi", "--instance", &instance("c2.json"), "--ring", "modp:8"]).status.code(), Some(2));
    assert_eq!(run(&["pi", "--instance", &instance("c2.json"), "--tau", "generic"]).status.code(), Some(2));
}

#[test]
fn pi_parameters_from_file_and_seed() {
    let v = json(&["pi", "--instance", &instance("mixed.json"), "--d", "b"]);
    assert_eq!(v["ring"], "rational");
    assert_eq!(v["tau"], serde_json::json!(["3/2", "2"]));
    assert_eq!(v["eta"], serde_json::json!(["1/2", "1"]));
    let args = ["pi", "--instance", &instance("l3.json"), "--ring", "rational", "--tau", "random", "--eta", "random", "--seed", "9"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn survey_row_counts_and_refusal() {
    let three = run(&["survey", "--max-n", "3", "--sizes", "2"]);
    assert_eq!(three.status.code(), Some(0));
    let text = stdout(&three);
    assert_eq!(text.lines().count(), 1 + 19);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    assert_eq!(stdout(&run(&["survey", "--max-n", "2"])).lines().count(), 1 + 3);
    assert_eq!(run(&["survey", "--max-n", "10"]).status.code(), Some(2));
    let range = json(&["survey", "--min-n", "1", "--max-n", "3", "--sizes", "2,3", "--format", "json"]);
    assert_eq!(range.as_array().unwrap().len(), 2 + 3 * 4 + 19 * 8);
}

#[test]
fn reports_are_deterministic_and_written_to_out() {
    let args = ["survey", "--max-n", "3", "--sizes", "2,3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let path = std::env::temp_dir().join(format!("poset-duality-out-{}.json", std::process::id()));
    let o = run(&["partitions", "--instance", &instance("l3.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, run(&["partitions", "--instance", &instance("l3.json")]).stdout);
    std::fs::remove_file(path).unwrap();
}
