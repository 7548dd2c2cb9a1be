use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cjt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cjt")).args(args).env_remove("CJT_JOBS").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn zoo_file(name: &str, params: &str) -> PathBuf {
    let out = cjt(&["zoo", "--name", name, "--params", params]);
    assert_eq!(out.status.code(), Some(0));
    let path = std::env::temp_dir().join(format!("cjt-cli-{}-{}-{}.json", std::process::id(), name, params.replace(',', "_")));
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn w_module_is_constant_at_p5_and_not_at_p7() {
    let w5 = zoo_file("W", "p=5");
    let out = cjt(&["check", "--module", w5.to_str().unwrap(), "--exact-rank2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "CONSTANT_EXACT");

    let w7 = zoo_file("W", "p=7");
    let out = cjt(&["check", "--module", w7.to_str().unwrap(), "--exact-rank2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "NOT_CONSTANT");
}

#[test]
fn errors_are_reported_as_json_with_exit_1() {
    let out = cjt(&["check", "--module", "/nonexistent/module.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "MALFORMED");

    let out = cjt(&["omega", "--p", "4", "--rank", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "NOT_PRIME");

    let out = cjt(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "USAGE");
}

#[test]
fn omega_dimension_matches_closed_form() {
    for n in ["-2", "-1", "1", "2"] {
        let out = cjt(&["omega", "--p", "3", "--rank", "2", "--n", n]);
        assert_eq!(out.status.code(), Some(0));
        let dim = json(&out)["dim"].as_u64().unwrap() as usize;
        assert_eq!(dim, cjt::syzygy::omega_dim(3, 2, n.parse().unwrap()));
    }
}

#[test]
fn output_does_not_depend_on_job_count() {
    let m = zoo_file("RANDOM", "p=5,r=2,dim=7,seed=1");
    let m = m.to_str().unwrap();
    for args in [
        vec!["check", "--module", m, "--max-ext", "2"],
        vec!["gamma", "--module", m, "--ext", "2"],
        vec!["endotrivial", "--module", m],
    ] {
        let mut one = args.clone();
        one.extend(["--jobs", "1"]);
        let mut many = args.clone();
        many.extend(["--jobs", "4"]);
        let a = cjt(&one);
        let b = cjt(&many);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn jordan_reports_type_and_stable_type() {
    let w5 = zoo_file("W", "p=5");
    let out = cjt(&["jordan", "--module", w5.to_str().unwrap(), "--point", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["type"], "3[3] + 2[2]");
    assert_eq!(v["counts"], serde_json::json!([0, 2, 3, 0, 0]));
}
