use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bredon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bredon")).args(args).output().expect("binary runs")
}

fn envelope(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn scratch(name: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("bredon-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_file(&p);
    p
}

#[test]
fn counts_and_enumeration() {
    let out = bredon(&["circuits", "--rank", "3", "--count-only"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(envelope(&out)["payload"]["total"], "14");

    let out = bredon(&["circuits", "--rank", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"members\":[1,2,3]}\n");

    let out = bredon(&["circuits", "--rank", "3", "--format", "csv", "--max-size", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 7);
    assert_eq!(text.lines().nth(1), Some("3,1 2 3"));

    let out = bredon(&["count", "--rank", "4", "--enumerate"]);
    let v = envelope(&out);
    assert_eq!((v["payload"]["total"].as_str(), v["payload"]["match"].as_bool()), (Some("308"), Some(true)));
    assert_eq!(envelope(&bredon(&["count", "--rank", "7"]))["payload"]["total"], "4610816280");
}

#[test]
fn caps_and_usage_errors_exit_2() {
    assert_eq!(bredon(&["circuits", "--rank", "13"]).status.code(), Some(2));
    assert_eq!(bredon(&["circuits", "--rank", "17", "--count-only"]).status.code(), Some(2));
    assert_eq!(bredon(&["circuits", "--rank", "16", "--count-only"]).status.code(), Some(0));
    assert_eq!(bredon(&["dim", "--rank", "2", "--m", "1", "--rep", "1,0"]).status.code(), Some(2));
    assert_eq!(bredon(&["dim", "--rank", "2", "--m", "1", "--rep", "4"]).status.code(), Some(2));
    assert_eq!(bredon(&["dim", "--rank", "2", "--m", "1", "--rep", "1^11"]).status.code(), Some(2));
    assert_eq!(bredon(&["verify", "--suite", "nope", "--rank", "2"]).status.code(), Some(2));
}

#[test]
fn dim_reports_both_methods() {
    let out = bredon(&["dim", "--rank", "2", "--m", "2", "--rep", "1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = envelope(&out);
    assert_eq!(v["payload"]["dim"], 2);
    assert_eq!(v["payload"]["match"], true);
    assert_eq!(
        v["payload"]["linear"].to_string(),
        r#"{"m":2,"rep":[[1,1],[2,1],[3,1]],"monomials":3,"relation_rank":1,"dim":2,"method":"linear-algebra"}"#
    );
    assert_eq!(envelope(&bredon(&["dim", "--rank", "2", "--m", "0", "--rep", "1^5"]))["payload"]["dim"], 1);
    assert_eq!(envelope(&bredon(&["dim", "--rank", "2", "--m", "4", "--rep", "1,2,3"]))["payload"]["dim"], 0);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["table", "--rank", "2", "--max-total", "4"];
    let a = bredon(&args).stdout;
    assert_eq!(a, bredon(&args).stdout);
    // The command echo differs, the payload must not.
    let mut threaded = vec!["--threads", "3"];
    threaded.extend(args);
    assert_eq!(envelope(&bredon(&threaded))["payload"], serde_json::from_slice::<Value>(&a).unwrap()["payload"]);
    let v = envelope(&bredon(&["verify", "--suite", "domain", "--rank", "2", "--seed", "9"]));
    let w = envelope(&bredon(&["verify", "--suite", "domain", "--rank", "2", "--seed", "9"]));
    assert_eq!(v, w);
    assert_eq!(v["seed"], 9);
}

#[test]
fn csv_numbers_match_json() {
    let json = envelope(&bredon(&["table", "--rank", "2", "--max-total", "3"]));
    let csv =
        String::from_utf8(bredon(&["table", "--rank", "2", "--max-total", "3", "--format", "csv"]).stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("rank,m,rep,monomials,relation_rank,dim_linear,dim_oracle,match"));
    let rows = json["payload"]["rows"].as_array().unwrap();
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), rows.len());
    for (line, row) in body.iter().zip(rows) {
        // The quoted rep column is the only field containing commas.
        let (head, tail) = line.split_once(",\"").unwrap();
        let (_, rest) = tail.split_once("\",").unwrap();
        let fields: Vec<&str> = head.split(',').chain(rest.split(',')).collect();
        let keys = ["rank", "m", "monomials", "relation_rank", "dim_linear", "dim_oracle", "match"];
        for (f, k) in fields.iter().zip(keys) {
            assert_eq!(*f, row[k].to_string(), "{k}");
        }
    }
}

#[test]
fn verify_suites_and_budget() {
    let v = envelope(&bredon(&["verify", "--suite", "minimality", "--rank", "3"]));
    assert_eq!((v["payload"]["checks"].as_u64(), v["payload"]["failed"].as_u64()), (Some(14), Some(0)));
    let out = bredon(&["verify", "--suite", "identities", "--rank", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(envelope(&out)["payload"]["checks"], 2310);
    let out = bredon(&["verify", "--suite", "presentation", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = bredon(&["verify", "--suite", "presentation", "--rank", "3", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(envelope(&out)["payload"]["complete"], false);
}

#[test]
fn localization_commands() {
    let v = envelope(&bredon(&["localize", "--rank", "2", "--subgroup", "1"]));
    assert_eq!(
        v["payload"].to_string(),
        r#"{"rank":2,"B":[1],"x":[1,3],"e":[2],"relations":[{"family":"xxe","triple":[1,3,2]}]}"#
    );
    let out = bredon(&["localize", "--rank", "3", "--subgroup", "1,2", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(envelope(&out)["payload"]["verification"]["relations"], 7);
    assert_eq!(
        envelope(&bredon(&["localize", "--rank", "3", "--subgroup", "trivial", "--degree", "-2"]))["payload"]["dim"],
        6
    );
    assert_eq!(
        envelope(&bredon(&["localize", "--rank", "2", "--subgroup", "whole", "--degree", "2"]))["payload"]["dim"],
        5
    );
    assert_eq!(bredon(&["localize", "--rank", "2", "--subgroup", "1", "--degree", "1"]).status.code(), Some(2));

    let v = envelope(&bredon(&["gfp", "--rank", "2", "--degree", "2", "--stabilize", "--n", "3"]));
    assert_eq!(v["payload"]["dim"], 5);
    assert_eq!(v["payload"]["stabilization"]["status"], "stable");
}

#[test]
fn cache_round_trip_and_verification() {
    let path = scratch("cache.jsonl");
    let p = path.to_str().unwrap();
    let out = bredon(&["dim", "--rank", "2", "--m", "2", "--rep", "1,2,3", "--cache", p]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains(r#"{"r":2,"m":2,"W":[[1,1],[2,1],[3,1]],"dim":2}"#), "{text}");

    let v = envelope(&bredon(&["cache", "--cache", p, "--verify-cache"]));
    assert_eq!(v["payload"]["mismatches"].as_array().unwrap().len(), 0);

    // A corrupted entry is trusted without verification, caught with it.
    std::fs::write(&path, text.replace(r#""dim":2}"#, r#""dim":5}"#)).unwrap();
    let out = bredon(&["dim", "--rank", "2", "--m", "2", "--rep", "1,2,3", "--cache", p]);
    assert_eq!(out.status.code(), Some(1));
    let out = bredon(&["dim", "--rank", "2", "--m", "2", "--rep", "1,2,3", "--cache", p, "--verify-cache"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bredon(&["cache", "--cache", p, "--verify-cache"]);
    assert_eq!(out.status.code(), Some(1));

    let fresh = scratch("fill.jsonl");
    let out = bredon(&["cache", "--cache", fresh.to_str().unwrap(), "--rank", "2", "--max-total", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(envelope(&out)["payload"]["appended"].as_u64().unwrap() > 0);
    let _ = std::fs::remove_file(&path);
    let _ = std::fs::remove_file(&fresh);
}
