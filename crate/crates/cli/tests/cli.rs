use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use twistkit::dsl::{print_presentation, Assignment, Document};
use twistkit_core::presentation::builtin_corpus;
use twistkit_core::{Alphabet, GradedPresentation, ParamSpace, TruncatedAlgebraModel};

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Runs the binary inside `data/` and returns (exit code, stdout, stderr).
fn twistkit(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twistkit")).args(args).current_dir(data()).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out, _) = twistkit(&all);
    (code, serde_json::from_str(&out).expect("stdout is JSON"))
}

/// The presentation embedded in a JSON report, built to degree `d`.
fn reported_model(report: &Value, d: usize) -> TruncatedAlgebraModel {
    let doc = Document::from_json(&report["presentation"]).unwrap();
    let p = doc.standalone_presentation(doc.algebra(None).unwrap(), &Assignment::default()).unwrap();
    TruncatedAlgebraModel::build(&p, d).unwrap()
}

fn dims(report: &Value) -> Vec<u64> {
    report["dims"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect()
}

#[test]
fn zhang_reproduces_the_listed_relations() {
    let (code, r) = json(&["zhang", "--in", "k4.alg", "--map", "theta.alg", "-D", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], "twistkit.report.v1");
    assert_eq!(r["status"], "verified");
    assert_eq!(r["relations"], 6);
    assert_eq!(dims(&r), [1, 4, 10, 20]);
    let got = reported_model(&r, 3);
    let want = TruncatedAlgebraModel::build(&builtin_corpus("zhang_running_example(a)").unwrap(), 3).unwrap();
    assert!(got.same_ideal(&want));
}

#[test]
fn zhang_left_and_right_are_isomorphic() {
    let (code, r) = json(&["zhang", "--in", "k4.alg", "--map", "theta.alg", "--side", "left", "--isomorphism", "-D", "3"]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["side"], "left");
}

#[test]
fn ttp_build_matches_the_running_example() {
    let (code, r) = json(&["ttp", "--build", "--a", "kuv.alg", "--b", "kxy.alg", "--twist", "tau.alg", "-D", "4"]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["relations"], 6);
    assert_eq!(dims(&r), [1, 4, 10, 20, 35]);
    let names = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect::<Vec<_>>();
    assert!(names.contains(&"recovery returns the input twisting map"));
    let want = TruncatedAlgebraModel::build(&builtin_corpus("ttp_running_example(a,b,c,d)").unwrap(), 4).unwrap();
    assert!(reported_model(&r, 4).same_ideal(&want));
}

#[test]
fn segre_of_the_running_example() {
    let (code, r) = json(&["segre", "--a", "kuv.alg", "--b", "kxy.alg", "--twist", "tau.alg", "-D", "3"]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["relations"], 7);
    assert_eq!(dims(&r), [1, 4, 9, 16]);
    assert_eq!(r["generated_in_degree_one"], true);
}

#[test]
fn recovery_classifies_twists() {
    let (code, r) = json(&["ttp", "--recover", "--in", "kxy_commutative.alg", "--embed", "kx.alg", "--embed", "ky.alg"]);
    assert_eq!(code, 0);
    assert_eq!(r["kind"], "transposition");
    let (code, r) = json(&["ttp", "--recover", "--in", "qplane.alg", "--embed", "kx.alg", "--embed", "ky.alg"]);
    assert_eq!(code, 0);
    assert_eq!(r["kind"], "bicharacter -q");
}

#[test]
fn bicharacter_build_gives_the_power_law_plane() {
    let (code, r) = json(&["ttp", "--build", "--a", "kx.alg", "--b", "ky.alg", "--twist", "bicharacter.alg", "-D", "5"]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(dims(&r), [1, 2, 3, 4, 5, 6]);
    assert!(r["alg"].as_str().unwrap().contains("y*x - q*x*y"));
}

#[test]
fn triple_of_bicharacters_is_compatible() {
    let (code, r) = json(&["ttp", "--triple", "--a", "kx.alg", "--b", "ky.alg", "--c", "kz.alg", "--twist", "triple.alg", "-D", "3"]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(dims(&r), [1, 3, 6, 10]);
}

#[test]
fn fd_ttp_exit_codes() {
    assert_eq!(twistkit(&["fd-ttp", "--spec", "flip.json"]).0, 0);
    assert_eq!(twistkit(&["fd-ttp", "--spec", "vectors.json"]).0, 0);
    let (code, r) = json(&["fd-ttp", "--spec", "bad_fd.json"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "failed");
    assert!(!r["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn quantum_checks() {
    assert_eq!(twistkit(&["quantum", "--check", "bialgebra"]).0, 0);
    assert_eq!(twistkit(&["quantum", "--n", "3", "--check", "ybe"]).0, 0);
    assert_eq!(twistkit(&["quantum", "--check", "pair", "--alpha", "[[a1,0],[0,a2]]"]).0, 0);
    let (code, r) = json(&["quantum", "--check", "pair", "--alpha", "[[1,1],[0,1]]"]);
    assert_eq!(code, 1);
    assert_eq!(r["predicted_valid"], false);
    assert!(r["witnesses"][0].as_str().unwrap().contains("phi1 preserves the relations"));
    let (code, r) = json(&["quantum", "--check", "cocycle", "--alpha", "[[2,0],[0,3]]"]);
    assert_eq!(code, 0, "{r:#}");
    assert_eq!(r["check"], "cocycle");
}

#[test]
fn failing_twisting_system_names_a_witness() {
    let dir = tempdir();
    let swap = dir.join("swap.alg");
    std::fs::write(&swap, "map swap { x -> y; y -> x; }\n").unwrap();
    let (code, r) = json(&["twisting-system", "--corpus", "quantum_plane(q)", "--map", swap.to_str().unwrap(), "-D", "3"]);
    assert_eq!(code, 1);
    assert!(r["witnesses"][0].as_str().unwrap().starts_with("twisting-system identity"));
    assert_eq!(twistkit(&["twisting-system", "--in", "k4.alg", "--map", "theta.alg", "-D", "3"]).0, 0);
}

#[test]
fn json_output_round_trips() {
    let dir = tempdir();
    let path = dir.join("k4.json");
    let (code, _, _) = twistkit(&["truncate", "--in", "k4.alg", "-D", "3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let (code, second) = json(&["truncate", "--in", path.to_str().unwrap(), "-D", "3"]);
    assert_eq!(code, 0);
    assert_eq!(first["presentation"], second["presentation"]);
    assert_eq!(first["dims"], second["dims"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["zhang", "--in", "k4.alg", "--map", "theta.alg", "-D", "3"];
    assert_eq!(twistkit(&args).1, twistkit(&args).1);
}

#[test]
fn input_errors_exit_with_two() {
    let (code, _, err) = twistkit(&["hilbert", "--in", "missing.alg"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: missing.alg"));
    let dir = tempdir();
    let bad = dir.join("bad.alg");
    std::fs::write(&bad, "algebra a {\n  generators: x, y;\n  relations: x*y - y;\n}\n").unwrap();
    let (code, r) = json(&["hilbert", "--in", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "input-error");
    assert!(r["error"].as_str().unwrap().contains("line 3"), "{r}");
    assert_eq!(twistkit(&["zhang", "--in", "k4.alg", "--map", "theta.alg", "--param", "zz=1"]).0, 2);
    assert_eq!(twistkit(&["hilbert", "--in", "k4.alg", "-D", "1"]).0, 2);
}

#[test]
fn parameters_specialize() {
    let (code, r) = json(&["zhang", "--in", "k4.alg", "--map", "theta.alg", "-D", "2", "--param", "a=2"]);
    assert_eq!(code, 0);
    assert!(r["alg"].as_str().unwrap().contains("x3*x1 - 2*x1*x3"), "{}", r["alg"]);
}

fn tempdir() -> PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static N: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!("twistkit-cli-{}-{}", std::process::id(), N.fetch_add(1, Ordering::Relaxed)));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn quadratic(coeffs: &[i64]) -> String {
    let words = ["x*x", "x*y", "x*z", "y*x", "y*y", "y*z", "z*x", "z*y", "z*z"];
    let terms: String = coeffs.iter().zip(words).filter(|(c, _)| **c != 0).map(|(c, w)| format!(" {} {}*{w}", if *c < 0 { '-' } else { '+' }, c.abs())).collect();
    match terms.strip_prefix(" + ") {
        Some(t) => t.to_string(),
        None if terms.is_empty() => "x*y - y*x".into(),
        None => format!("-{}", &terms[3..]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Printing a presentation and parsing it back gives the same relations
    // and the same text.
    #[test]
    fn print_then_parse_is_identity(rels in prop::collection::vec(prop::collection::vec(-3i64..4, 9), 1..4)) {
        let texts: Vec<String> = rels.iter().map(|c| quadratic(c)).collect();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let p = GradedPresentation::from_text("r", ParamSpace::new(), Alphabet::linear(["x", "y", "z"]).unwrap(), &refs).unwrap();
        let printed = print_presentation(&p);
        let doc = Document::parse(&printed).unwrap();
        let back = doc.standalone_presentation(doc.algebra(None).unwrap(), &Assignment::default()).unwrap();
        prop_assert_eq!(back.relations(), p.relations());
        prop_assert_eq!(print_presentation(&back), printed);
    }
}
