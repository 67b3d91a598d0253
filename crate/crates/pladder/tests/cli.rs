use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pladder"))
        .args(args)
        .env_remove("LADDER_PRIME")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn hom_between_images_of_regular() {
    let out = run(&["hom", "--lambda", "k", "--n", "2", "--source", "T1(regular)", "--target", "T2(regular)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["schema"], "ladder-report/1");
    assert_eq!(v["dim"], 1);
}

#[test]
fn hom_of_projectives_matches_path_count() {
    // T1 is fully faithful, and Hom(P1, P1) + Hom(P2, P1) is the dimension of P1.
    let out = run(&["hom", "--n", "2", "--source", "T1(regular)", "--target", "T1(regular)"]);
    assert_eq!(json_of(&out)["dim"], 1);
    let p1 = json_of(&run(&["hom", "--n", "2", "--source", "P1", "--target", "P1"]))["dim"].clone();
    let p2 = json_of(&run(&["hom", "--n", "2", "--source", "P2", "--target", "P1"]))["dim"].clone();
    assert_eq!(p1.as_u64().unwrap() + p2.as_u64().unwrap(), 2);
}

#[test]
fn derive_preprojective_is_periodic() {
    let out = run(&["derive", "--facts", "builtin:preprojective", "--explain", "adjoint(p,p¹)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["ladder"]["height_down"]["kind"], "infinite");
    assert_eq!(v["ladder"]["height_down"]["period"], 4);
    assert_eq!(v["ladder"]["height_up"]["period"], 4);
    assert!(!v["explain"][0]["steps"].as_array().unwrap().is_empty());
}

#[test]
fn derive_compact_i_is_finite() {
    let v = json_of(&run(&["derive", "--facts", "builtin:compact-i"]));
    assert_eq!(v["ladder"]["height_down"]["kind"], "finite");
    assert_eq!(v["ladder"]["height_down"]["value"], 2);
}

#[test]
fn derive_output_is_deterministic() {
    let a = run(&["derive", "--facts", "builtin:preprojective"]);
    let b = run(&["derive", "--facts", "builtin:preprojective"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn derive_reads_fact_files_written_by_itself() {
    let dir = std::env::temp_dir().join(format!("pladder-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let v = json_of(&run(&["derive", "--facts", "builtin:preprojective"]));
    let path = dir.join("closure.json");
    std::fs::write(&path, serde_json::to_string(&v["closure"]).unwrap()).unwrap();
    let w = json_of(&run(&["derive", "--facts", path.to_str().unwrap()]));
    assert_eq!(w["ladder"]["height_down"], v["ladder"]["height_down"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_ladder_passes() {
    let out = run(&["verify", "ladder", "--n", "2", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_recollement_is_deterministic() {
    let a = run(&["verify", "recollement", "--lambda", "dual", "--samples", "4", "--seed", "9"]);
    let b = run(&["verify", "recollement", "--lambda", "dual", "--samples", "4", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn nakayama_gate_fails_on_non_selfinjective_base() {
    let out = run(&["verify", "nakayama", "--lambda", "pathA2", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["passed"], false);
}

#[test]
fn ext_through_t1_agrees() {
    let out = run(&["ext", "--lambda", "pathA2", "--source", "regular", "--target", "regular", "--through", "T1", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["equal"], true);
}

#[test]
fn build_outputs_load_back() {
    let dir = std::env::temp_dir().join(format!("pladder-build-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("m.json");
    let out = run(&["build", "--type", "module", "--lambda", "dual", "--seed", "3", "--out", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let h = run(&["hom", "--lambda", "dual", "--source", m.to_str().unwrap(), "--target", m.to_str().unwrap()]);
    assert_eq!(h.status.code(), Some(0));
    assert!(json_of(&h)["dim"].as_u64().unwrap() >= 1);
    let a = dir.join("a.json");
    run(&["build", "--type", "preprojective", "--n", "3", "--out", a.to_str().unwrap()]);
    let v = run(&["verify", "recollement", "--lambda", a.to_str().unwrap(), "--samples", "2"]);
    assert_eq!(v.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn preprojective_dimensions() {
    for (n, d) in [(1, 1), (2, 4), (3, 10), (4, 20)] {
        let v = json_of(&run(&["build", "--type", "preprojective", "--n", &n.to_string()]));
        assert_eq!(v["basis"].as_array().unwrap().len(), d, "n = {n}");
    }
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["build", "--type", "preprojective", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--prime", "4", "hom", "--source", "regular", "--target", "regular"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["hom", "--source", "regular", "--target", "P1"]).status.code(), Some(2));
    assert_eq!(run(&["derive", "--facts", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(run(&["derive", "--facts", "builtin:bare", "--explain", "adjoint(x,y)"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn prime_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_pladder"))
        .args(["hom", "--source", "regular", "--target", "regular"])
        .env("LADDER_PRIME", "32003")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["config"]["prime"], 32003);
    let bad = Command::new(env!("CARGO_BIN_EXE_pladder"))
        .args(["hom", "--source", "regular", "--target", "regular"])
        .env("LADDER_PRIME", "12")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn ext_degree_zero_is_hom() {
    for (s, t) in [("regular", "regular"), ("T1(regular)", "T2(regular)"), ("P1", "P2")] {
        let e = json_of(&run(&["ext", "--lambda", "dual", "--source", s, "--target", t, "--max-degree", "1"]));
        let h = json_of(&run(&["hom", "--lambda", "dual", "--source", s, "--target", t]));
        assert_eq!(e["dims"][0], h["dim"], "{s} -> {t}");
    }
}

#[test]
fn ext_through_t1_over_dual_numbers() {
    let dir = std::env::temp_dir().join(format!("pladder-ext-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let simple = dir.join("s.json");
    std::fs::write(
        &simple,
        r#"{"schema":"lambda-module/1","field":101,"lambda":"dual","dim":1,
            "action":[{"rows":1,"cols":1,"data":[1]},{"rows":1,"cols":1,"data":[0]}]}"#,
    )
    .unwrap();
    let s = simple.to_str().unwrap();
    let out = run(&["ext", "--lambda", "dual", "--source", s, "--target", s, "--through", "T1", "--max-degree", "4"]);
    let v = json_of(&out);
    assert_eq!(out.status.code(), Some(0), "{v}");
    assert_eq!(v["equal"], true);
    assert_eq!(v["dims"], serde_json::json!([1, 1, 1, 1, 1]));
    std::fs::remove_dir_all(&dir).ok();
}
