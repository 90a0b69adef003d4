use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "specs", name].iter().collect();
    p.display().to_string()
}

fn thr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thr")).arg("--quiet").args(args).output().expect("thr runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = thr(&all);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().expect("exit code"), v)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn integers_give_the_constant_functor() {
    let (code, v) = json(&["pi0thr", &spec("z.toml")]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    let m = &v["report"]["mackey"];
    assert_eq!(m["e_level"]["free_rank"], 1);
    assert_eq!(m["g_level"]["free_rank"], 1);
    assert_eq!(m["res"], serde_json::json!([[1]]));
    assert_eq!(m["tran"], serde_json::json!([[2]]));
    assert_eq!(v["report"]["alpha"]["alpha_iso"], true);
}

#[test]
fn dual_numbers_have_four_torsion_summands() {
    let (code, v) = json(&["pi0thr", &spec("f2t.toml")]);
    assert_eq!(code, 0);
    let g = &v["report"]["mackey"]["g_level"];
    assert_eq!(g["free_rank"], 0);
    assert_eq!(g["torsion"], serde_json::json!([2, 2, 2, 2]));
    assert_eq!(v["report"]["alpha"]["alpha_iso"], false);
    assert_eq!(v["report"]["ses"]["exact"], true);
}

#[test]
fn table_output_is_readable() {
    let out = thr(&["pi0thr", &spec("f2t.toml")]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("g-level       Z/2 + Z/2 + Z/2 + Z/2"), "{s}");
    assert!(s.contains("alpha iso     no"), "{s}");
}

#[test]
fn malformed_table_exits_2() {
    let out = thr(&["pi0thr", &spec("bad_table.toml")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ring axiom"));
    let (code, v) = json(&["pi0thr", &spec("bad_table.toml")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ring_axiom");
}

#[test]
fn missing_file_exits_2() {
    assert_eq!(thr(&["pi0thr", "does/not/exist.toml"]).status.code(), Some(2));
}

#[test]
fn base_change_verdicts() {
    let (code, v) = json(&["basechange", &spec("f2.toml"), &spec("f4.toml"), "--hom", &spec("f2_to_f4.toml")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["comparison"]["iso"], true);

    let (code, v) = json(&["basechange", &spec("f2.toml"), &spec("f2t.toml"), "--hom", &spec("f2_to_f2t.toml")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["comparison"]["iso"], false);
    let obstruction = v["report"]["comparison"]["obstruction"].as_str().unwrap();
    assert!(obstruction.contains("Z/2 + Z/2 vs Z/2 + Z/2 + Z/2 + Z/2"), "{obstruction}");

    let (code, v) = json(&["basechange", &spec("f4.toml"), &spec("f4.toml"), "--hom", &spec("f4_identity.toml")]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["comparison"]["iso"], true);
}

#[test]
fn ill_defined_hom_exits_2() {
    let out = thr(&["basechange", &spec("f4.toml"), &spec("f4.toml"), "--hom", &spec("f4_bad.toml")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nerve_of_naturals() {
    let (code, v) = json(&["nerve", &spec("nat.toml"), "--weight", "2", "--homology", "--fixed-pi0", "--validate"]);
    assert_eq!(code, 0);
    let r = &v["report"];
    let h: Vec<i64> = r["homology"].as_array().unwrap().iter().map(|e| e["group"]["free_rank"].as_i64().unwrap()).collect();
    assert_eq!(&h[..2], &[1, 1]);
    assert!(h[2..].iter().all(|&x| x == 0));
    assert_eq!(r["fixed_pi0"]["count"], 2);
    assert_eq!(r["validation"]["ok"], true);
}

#[test]
fn weight_zero_is_a_point() {
    let (code, v) = json(&["nerve", &spec("nat.toml"), "--weight", "0", "--q-max", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["simplices"], serde_json::json!([1, 1, 1, 1, 1]));
    assert_eq!(v["report"]["nondegenerate"], serde_json::json!([1, 0, 0, 0, 0]));
}

#[test]
fn infinite_fiber_exits_3() {
    let out = thr(&["nerve", &spec("int.toml"), "--weight", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--window"));
    let windowed = thr(&["nerve", &spec("int.toml"), "--weight", "1", "--window", "2"]);
    assert_eq!(windowed.status.code(), Some(0));
    assert!(stdout(&windowed).contains("bounded model"));
}

#[test]
fn involution_closes_the_weight_set() {
    let (code, v) = json(&["nerve", &spec("int_sigma.toml"), "--weight", "1", "--window", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["weights"], serde_json::json!([[-1], [1]]));
    let (code, v) = json(&["nerve", &spec("nat2_swap.toml"), "--weight", "1,0", "--validate"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["weights"], serde_json::json!([[0, 1], [1, 0]]));
    assert_eq!(v["report"]["validation"]["ok"], true);
}

#[test]
fn wrong_weight_rank_exits_2() {
    assert_eq!(thr(&["nerve", &spec("nat.toml"), "--weight", "1,1"]).status.code(), Some(2));
}

#[test]
fn projective_line() {
    let (code, v) = json(&["projective", "1", "--window", "3"]);
    assert_eq!(code, 0);
    let weights = v["report"]["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 7);
    for w in weights {
        let zero = w["weight"] == serde_json::json!([0]);
        assert_eq!(w["acyclic"], !zero);
    }
}

#[test]
fn projective_plane() {
    let (code, v) = json(&["projective", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["zero_detail"]["assembled_h0_rank"], 3);
    assert_eq!(v["report"]["all_nonzero_acyclic"], true);
}

#[test]
fn sigma_square_reports_certificate_failure() {
    let (code, v) = json(&["projective", "sigma"]);
    assert_eq!(code, 4);
    assert_eq!(v["ok"], false);
    assert_eq!(v["report"]["stacked_rank"], 3);
    assert_eq!(v["report"]["q_cartesian"], false);
}

#[test]
fn unknown_space_is_rejected() {
    assert_eq!(thr(&["projective", "5"]).status.code(), Some(2));
}

#[test]
fn structured_output_is_deterministic() {
    for args in [
        vec!["pi0thr".to_string(), spec("f4.toml")],
        vec!["nerve".into(), spec("nat.toml"), "--weight".into(), "3".into(), "--homology".into(), "--fixed-pi0".into()],
        vec!["projective".into(), "3".into()],
        vec!["selftest".into(), "--criterion".into(), "4".into()],
    ] {
        let mut full = vec!["--format".to_string(), "json".into()];
        full.extend(args.iter().cloned());
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let (a, b) = (thr(&refs), thr(&refs));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn progress_goes_to_stderr() {
    let out = Command::new(env!("CARGO_BIN_EXE_thr"))
        .args(["--format", "json", "projective", "2"])
        .output()
        .expect("thr runs");
    assert!(String::from_utf8_lossy(&out.stderr).contains("certifying"));
    serde_json::from_slice::<Value>(&out.stdout).expect("stdout holds only the report");
}

#[test]
fn selftest_single_criterion() {
    let out = thr(&["selftest", "--criterion", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[PASS] criterion  1"));
}
