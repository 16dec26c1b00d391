//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness so the lines are always printed. Exits
//! nonzero when a line fails that is not listed in `KNOWN_FAILURES`.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use serde_json::Value;
use twistkit::dsl::{Assignment, Document};
use twistkit_core::morphisms::{
    check_algebra_map, left_right_twist_isomorphism_check, running_example_theta, zhang_twist, GradedGeneratorMap, Side, TwistedAlgebra,
    TwistingSystem, ZhangTwistAlgebra,
};
use twistkit_core::presentation::{builtin_corpus, polynomial_on, quantum_plane};
use twistkit_core::quantum::{
    bialgebra_checks, build_oq_mn, cocycle_vs_zhang_check, qdeterminant, verify_twisting_pair, yang_baxter_check, TwistingPairSpec,
    ZhangEqOptions,
};
use twistkit_core::segre::{assign_bigrading, diagonal_subalgebra};
use twistkit_core::truncated::{check_associativity_upto, presentation_completion, GradedAlgebra};
use twistkit_core::ttp::{
    build_ttp, check_triple_compatibility, extend_twisting_map, fd_build_ttp, fd_check_matrix_criteria, find_incompatible_linear_triple,
    integer_twisting_maps, invertible_vectors_family, verify_twisting_map_axioms, ExtendedTwist, FiniteDimAlgebra, FiniteDimTwistSpec,
    TwistedTensorProduct, TwistingMapSpec,
};
use twistkit_core::{Error, FieldElement, GradedPresentation, Matrix, ParamSpace, TruncatedAlgebraModel, Word};

/// Time limits.
const ZHANG_LIMIT: Duration = Duration::from_secs(5);
const COCYCLE_LIMIT: Duration = Duration::from_secs(60);
/// Sample sizes.
const FD_RANDOM_SPECS: usize = 1000;
const PAIR_SAMPLES: usize = 60;

/// Lines that are expected to fail; see the README for why.
const KNOWN_FAILURES: &[&str] = &["4"];

type Criterion = fn() -> Vec<Line>;

struct Line {
    id: String,
    passed: bool,
    detail: String,
}

fn line(id: &str, passed: bool, detail: impl Into<String>) -> Line {
    Line { id: id.to_string(), passed, detail: detail.into() }
}

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn twistkit_json(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_twistkit")).args(args).args(["--format", "json"]).current_dir(data()).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), serde_json::from_slice(&out.stdout).unwrap_or(Value::Null))
}

fn reported_model(report: &Value, d: usize) -> Option<TruncatedAlgebraModel> {
    let doc = Document::from_json(&report["presentation"]).ok()?;
    let p = doc.standalone_presentation(doc.algebra(None).ok()?, &Assignment::default()).ok()?;
    TruncatedAlgebraModel::build(&p, d).ok()
}

fn dims(report: &Value) -> Vec<u64> {
    report["dims"].as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default()
}

fn check_named(report: &Value, name: &str) -> bool {
    report["checks"].as_array().is_some_and(|cs| cs.iter().any(|c| c["name"] == name && c["passed"] == true))
}

fn poly(names: &[&str], d: usize) -> TruncatedAlgebraModel {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    TruncatedAlgebraModel::build(&polynomial_on("poly", &names).unwrap(), d).unwrap()
}

fn int(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn q_space() -> (ParamSpace, FieldElement) {
    let mut s = ParamSpace::new();
    let q = s.param("q");
    (s, q)
}

fn criterion_1() -> Vec<Line> {
    let start = Instant::now();
    let (code, r) = twistkit_json(&["zhang", "--in", "k4.alg", "--map", "theta.alg", "-D", "3"]);
    let elapsed = start.elapsed();
    let listed = builtin_corpus("zhang_running_example(a)").unwrap();
    let want = TruncatedAlgebraModel::build(&listed, 3).unwrap();
    let Some(got) = reported_model(&r, 3) else {
        return vec![line("1", false, format!("zhang exited {code} without a presentation"))];
    };
    let mut texts = got.presentation().relation_texts();
    let mut expected = listed.relation_texts();
    texts.sort();
    expected.sort();
    let ok = code == 0 && got.same_ideal(&want) && texts == expected && elapsed < ZHANG_LIMIT;
    vec![line("1", ok, format!("6 relations up to scalar: {}, same row space: {}, {:.2?} (limit {ZHANG_LIMIT:?})", texts == expected, got.same_ideal(&want), elapsed))]
}

fn criterion_2() -> Vec<Line> {
    let (code, r) = twistkit_json(&["ttp", "--build", "--a", "kuv.alg", "--b", "kxy.alg", "--twist", "tau.alg", "-D", "4"]);
    let want = TruncatedAlgebraModel::build(&builtin_corpus("ttp_running_example(a,b,c,d)").unwrap(), 4).unwrap();
    let same = reported_model(&r, 4).is_some_and(|m| m.same_ideal(&want));
    let d = dims(&r);
    let recovered = check_named(&r, "recovery returns the input twisting map");
    let ok = code == 0 && same && r["relations"] == 6 && d == [1, 4, 10, 20, 35] && recovered;
    vec![line("2", ok, format!("relations {}, same row space {same}, dims {d:?}, recovery exact {recovered}", r["relations"]))]
}

fn criterion_3() -> Vec<Line> {
    let (code, r) = twistkit_json(&["segre", "--a", "kuv.alg", "--b", "kxy.alg", "--twist", "tau.alg", "-D", "4"]);
    // X = ux, Y = vx, Z = uy, W = vy
    let rels = ["a*X*Y - b*Y*X", "c*X*Z - a*Z*X", "c*X*W - b*W*X", "d*Y*Z - a*Z*Y", "d*Y*W - b*W*Y", "c*Z*W - d*W*Z", "a*X*W - b*Y*Z"]
        .map(|r| r.replace('X', "ux").replace('Y', "vx").replace('Z', "uy").replace('W', "vy"));
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    let alphabet = twistkit_core::Alphabet::linear(["ux", "uy", "vx", "vy"].map(String::from)).unwrap();
    let listed = GradedPresentation::from_text("listed", ParamSpace::with_names(["a", "b", "c", "d"]), alphabet, &rels).unwrap();
    let want = TruncatedAlgebraModel::build(&listed, 4).unwrap();
    let same = reported_model(&r, 4).is_some_and(|m| m.same_ideal(&want));
    let d = dims(&r);
    let generated = r["generated_in_degree_one"] == true;
    let ok = code == 0 && r["relations"] == 7 && same && d == [1, 4, 9, 16, 25] && generated;
    vec![line("3", ok, format!("relations {}, same row space as the listed seven {same}, dims {d:?}, generated in degree 1 {generated}", r["relations"]))]
}

fn bicharacter_build(lambda: FieldElement, params: ParamSpace, d: usize) -> twistkit_core::ttp::TtpBuild {
    let (x, y) = (poly(&["x"], d), poly(&["y"], d));
    let ext = extend_twisting_map(&TwistingMapSpec::bicharacter(lambda, params).unwrap(), &x, &y, d).unwrap();
    build_ttp(&ext, "t").unwrap()
}

fn criterion_4() -> Vec<Line> {
    let d = 5;
    let linear: Vec<usize> = (1..=d + 1).collect();
    let (params, q) = q_space();
    let plus = bicharacter_build(q.clone(), params.clone(), d);
    let target = TruncatedAlgebraModel::build(&quantum_plane("q").unwrap(), d).unwrap();
    let literal = plus.model.same_ideal(&target);
    let plus_texts = plus.presentation.relation_texts();
    let minus = bicharacter_build(-q, params, d);
    let minus_same = minus.model.same_ideal(&target);
    vec![
        line("4", literal && plus.model.hilbert_function() == linear, format!("lambda = q gives {plus_texts:?}, row space of q*x*y + y*x: {literal}")),
        line("4a", plus_texts == ["y*x - q*x*y"] && plus.model.hilbert_function() == linear, format!("lambda = q gives y*x - q*x*y, dims {:?}", plus.model.hilbert_function())),
        line("4b", minus_same && minus.model.hilbert_function() == linear, format!("lambda = -q gives the row space of q*x*y + y*x: {minus_same}")),
    ]
}

fn parity_map(x: &TruncatedAlgebraModel, y: &TruncatedAlgebraModel, d: usize) -> ExtendedTwist {
    ExtendedTwist::from_images(x, y, ParamSpace::new(), d, "parity", |bw, aw| {
        let (i, j) = (bw.len(), aw.len());
        let xs = |k: usize| Word(vec![0; k]);
        let one = FieldElement::one();
        if i % 2 == 0 || j % 2 == 0 {
            vec![(one, xs(j), xs(i))]
        } else {
            vec![(one.clone(), xs(j + 1), xs(i - 1)), (-one.clone(), xs(j), xs(i)), (one, xs(j - 1), xs(i + 1))]
        }
    })
    .unwrap()
}

fn criterion_5() -> Vec<Line> {
    let d = 6;
    let (x, y) = (poly(&["x"], d), poly(&["y"], d));
    let ext = parity_map(&x, &y, d);
    let axioms = verify_twisting_map_axioms(&ext, d).passed();
    let quadratic = match build_ttp(&ext, "t") {
        Err(Error::DimensionMismatch { degree, expected, found }) => format!("quadratic-only dim {found} vs {expected} in degree {degree}"),
        Err(e) => format!("unexpected error {e}"),
        Ok(_) => "quadratic presentation suffices".into(),
    };
    let oracle = TwistedTensorProduct::new(&ext);
    let c = presentation_completion(&oracle, "parity", &oracle.generator_names(), ParamSpace::new(), d).unwrap();
    let ok = axioms && c.new_relations[3] >= 1 && quadratic.starts_with("quadratic-only dim 5 vs 4 in degree 3");
    vec![line("5", ok, format!("axioms to D = {d}: {axioms}, {quadratic}, new relations by degree {:?}", c.new_relations))]
}

fn random_spec() -> impl Strategy<Value = FiniteDimTwistSpec> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop_oneof![6 => Just(0i64), 4 => Just(1i64), 1 => Just(-1i64), 1 => Just(2i64)], m * n * n * m)
            .prop_map(move |l| FiniteDimTwistSpec::new(m, n, l.into_iter().map(int).collect()).unwrap())
    })
}

/// A valid integer map with one coefficient changed.
fn perturbed(spec: &FiniteDimTwistSpec, at: usize, by: i64) -> FiniteDimTwistSpec {
    let mut l = spec.coefficients().to_vec();
    let k = at % l.len();
    l[k] = &l[k] + &int(by);
    FiniteDimTwistSpec::new(spec.m(), spec.n(), l).unwrap()
}

fn criterion_6() -> Vec<Line> {
    let mut specs = Vec::new();
    let mut runner = TestRunner::deterministic();
    let strategy = random_spec();
    for _ in 0..FD_RANDOM_SPECS {
        specs.push(strategy.new_tree(&mut runner).unwrap().current());
    }
    let integer: Vec<FiniteDimTwistSpec> = (1..=3).flat_map(|n| integer_twisting_maps(n, &[-1, 0, 1])).collect();
    for (k, s) in integer.iter().enumerate() {
        specs.push(s.clone());
        specs.push(perturbed(s, 7 * k + 3, if k % 2 == 0 { 1 } else { -1 }));
    }
    for m in 1..=3 {
        for n in 1..=3 {
            specs.push(FiniteDimTwistSpec::flip(m, n));
        }
    }
    let vectors = [
        vec![vec![int(1), int(1)], vec![int(1), int(-1)]],
        vec![vec![int(2), int(3)], vec![int(1), int(2)]],
        vec![vec![int(1), int(1), int(1)], vec![int(1), int(2), int(3)], vec![int(1), int(3), int(6)]],
        vec![vec![int(1), int(2), int(-1)], vec![int(3), int(1), int(1)], vec![int(1), int(1), int(5)]],
    ];
    for v in &vectors {
        specs.push(invertible_vectors_family(v).unwrap());
    }
    let (mut agree, mut valid) = (0, 0);
    let mut first_disagreement = None;
    for s in &specs {
        let criteria = fd_check_matrix_criteria(s).holds();
        let associative = fd_build_ttp(&FiniteDimAlgebra::componentwise(s.n()), &FiniteDimAlgebra::componentwise(s.m()), s).is_ok();
        valid += associative as usize;
        if criteria == associative {
            agree += 1;
        } else if first_disagreement.is_none() {
            first_disagreement = Some(format!("{:?}", s.coefficients().iter().map(|c| c.to_text(&ParamSpace::new())).collect::<Vec<_>>()));
        }
    }
    let ok = agree == specs.len() && specs.len() >= FD_RANDOM_SPECS;
    vec![line("6", ok, format!("{agree}/{} specs agree ({valid} associative){}", specs.len(), first_disagreement.map(|w| format!(", first disagreement {w}")).unwrap_or_default()))]
}

fn alpha_sample() -> impl Strategy<Value = (Vec<i64>, bool, usize)> {
    (prop::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], 3), any::<bool>(), 0usize..2)
}

fn criterion_7() -> Vec<Line> {
    let (params, q) = q_space();
    let alg = build_oq_mn(2, params.clone(), q.clone(), 3).unwrap();
    let b = bialgebra_checks(&alg).unwrap();
    let det = qdeterminant(&alg).unwrap();
    let braid: Vec<bool> = [2, 3].iter().map(|&n| yang_baxter_check(n, &q).unwrap().braid).collect();
    let small = build_oq_mn(2, params, q.clone(), 2).unwrap();
    let mut runner = TestRunner::deterministic();
    let strategy = alpha_sample();
    let (mut matched, mut off_count) = (0, 0);
    for _ in 0..PAIR_SAMPLES {
        let (e, off, pos) = strategy.new_tree(&mut runner).unwrap().current();
        let mut rows = vec![vec![int(e[0]), int(0)], vec![int(0), int(e[1])]];
        if off {
            rows[pos][1 - pos] = int(e[2]);
            off_count += 1;
        }
        let spec = TwistingPairSpec::new(Matrix::from_rows(rows).unwrap()).unwrap();
        let rep = verify_twisting_pair(&small, &spec, 2, 1).unwrap();
        matched += (rep.valid() == !off) as usize;
    }
    vec![
        line("7a", b.passed(), "O_q(M_2) bialgebra checks, symbolic q"),
        line("7b", det.central.holds && det.grouplike.holds, format!("g central {} and grouplike {} at D = 3", det.central.holds, det.grouplike.holds)),
        line("7c", braid.iter().all(|&x| x), format!("braid identity at n = 2, 3: {braid:?}")),
        line("7d", matched == PAIR_SAMPLES, format!("{matched}/{PAIR_SAMPLES} sampled alpha match the classification ({off_count} with an off-diagonal entry)")),
    ]
}

fn criterion_8() -> Vec<Line> {
    let start = Instant::now();
    let mut s = ParamSpace::new();
    let q = s.param("q");
    let (a1, a2) = (s.param("a1"), s.param("a2"));
    let alg = build_oq_mn(2, s, q, 3).unwrap();
    let spec = TwistingPairSpec::diagonal(&[a1, a2]).unwrap();
    let rep = cocycle_vs_zhang_check(&alg, &spec, ZhangEqOptions::new(3, 1)).unwrap();
    let elapsed = start.elapsed();
    vec![line("8", rep.passed() && elapsed < COCYCLE_LIMIT, format!("{} pairs, {} failures, {elapsed:.2?} (limit {COCYCLE_LIMIT:?})", rep.pairs, rep.failure_count))]
}

/// Automorphisms tried on each corpus entry: uniform scaling and a
/// per-generator scaling when it respects the relations.
fn corpus_maps(m: &TruncatedAlgebraModel) -> Vec<GradedGeneratorMap> {
    let n = m.alphabet().len();
    let mut maps = vec![GradedGeneratorMap::diagonal(&vec![int(2); n])];
    let spread = GradedGeneratorMap::diagonal(&(0..n).map(|k| int(k as i64 + 2)).collect::<Vec<_>>());
    if check_algebra_map(&spread, m).unwrap().holds {
        maps.push(spread);
    }
    maps
}

fn criterion_9() -> Vec<Line> {
    let d = 4;
    let corpus = ["polynomial(3)", "quantum_plane(q)", "zhang_running_example(a)", "A_rho(rho)", "ttp_running_example(a,b,c,d)", "oq_m(2,q)"];
    // associativity on constructed models
    let mut assoc_failures = Vec::new();
    let mut triples = 0;
    let mut record = |name: &str, r: twistkit_core::truncated::AssociativityReport| {
        triples += r.triples_checked;
        if !r.passed() {
            assoc_failures.push(name.to_string());
        }
    };
    let mut k4 = builtin_corpus("polynomial(4)").unwrap();
    k4.params = ParamSpace::with_names(["a"]);
    let k4 = TruncatedAlgebraModel::build(&k4, d).unwrap();
    let theta = running_example_theta(0);
    record("zhang twist of k[x1..x4]", check_associativity_upto(&ZhangTwistAlgebra::new(&k4, &theta, Side::Right).unwrap(), d).unwrap());
    let ts = TwistingSystem::from_automorphism(&theta, -(d as i64), d as i64).unwrap();
    record("twisting system on k[x1..x4]", check_associativity_upto(&TwistedAlgebra::new(&k4, ts).unwrap(), d).unwrap());
    let (uv, xy) = (poly(&["u", "v"], d), poly(&["x", "y"], d));
    let params = ParamSpace::with_names(["a", "b", "c", "d"]);
    let spec = TwistingMapSpec::parse_linear(
        uv.alphabet(),
        xy.alphabet(),
        &params,
        &[("x", "u", "a*u (x) x"), ("x", "v", "b*v (x) x"), ("y", "u", "c*u (x) y"), ("y", "v", "d*v (x) y")],
    )
    .unwrap();
    let ext = extend_twisting_map(&spec, &uv, &xy, d).unwrap();
    record("twisted tensor product", check_associativity_upto(&TwistedTensorProduct::new(&ext), d).unwrap());
    let (x, y) = (poly(&["x"], d), poly(&["y"], d));
    let parity = parity_map(&x, &y, d);
    record("parity twisted tensor product", check_associativity_upto(&TwistedTensorProduct::new(&parity), d).unwrap());
    let wide = extend_twisting_map(&spec, &poly(&["u", "v"], 2 * d), &poly(&["x", "y"], 2 * d), 2 * d).unwrap();
    let diag = diagonal_subalgebra(&assign_bigrading(&wide).unwrap());
    record("twisted Segre product", check_associativity_upto(&diag, diag.max_degree()).unwrap());
    for entry in corpus {
        let m = TruncatedAlgebraModel::build(&builtin_corpus(entry).unwrap(), d).unwrap();
        record(entry, check_associativity_upto(&m, d).unwrap());
    }

    // Hilbert invariance and left/right isomorphism over the corpus
    let (mut twists, mut hilbert_bad, mut iso_bad) = (0, Vec::new(), Vec::new());
    for entry in corpus {
        let d = if entry.starts_with("oq_m") { 3 } else { d };
        let m = TruncatedAlgebraModel::build(&builtin_corpus(entry).unwrap(), d).unwrap();
        for phi in corpus_maps(&m) {
            for side in [Side::Left, Side::Right] {
                twists += 1;
                let z = zhang_twist(&m, &phi, side).unwrap();
                let t = TruncatedAlgebraModel::build(&z.presentation, d).unwrap();
                if !z.kernel_agrees || t.hilbert_function() != m.hilbert_function() {
                    hilbert_bad.push(entry);
                }
            }
            if !left_right_twist_isomorphism_check(&m, &phi).unwrap().holds() {
                iso_bad.push(entry);
            }
        }
    }
    for side in [Side::Left, Side::Right] {
        twists += 1;
        let z = zhang_twist(&k4, &theta, side).unwrap();
        if TruncatedAlgebraModel::build(&z.presentation, d).unwrap().hilbert_function() != k4.hilbert_function() {
            hilbert_bad.push("k[x1..x4] with theta");
        }
    }
    if !left_right_twist_isomorphism_check(&k4, &theta).unwrap().holds() {
        iso_bad.push("k[x1..x4] with theta");
    }

    // triple compatibility in both directions
    let td = 4;
    let (lx, ly, lz) = (poly(&["x"], td), poly(&["y"], td), poly(&["z"], td));
    let mut bichar_ok = 0;
    let bichar_sets: Vec<[FieldElement; 3]> = {
        let mut p = ParamSpace::with_names(["p", "r", "s"]);
        let sym = [p.param("p"), p.param("r"), p.param("s")];
        vec![sym, [int(2), int(-1), int(3)], [int(1), int(1), int(1)], [FieldElement::from_ratio(1, 2), int(5), int(-3)]]
    };
    let triple_params = ParamSpace::with_names(["p", "r", "s"]);
    for [p, r, s] in &bichar_sets {
        let t = |l: &FieldElement, a: &TruncatedAlgebraModel, b: &TruncatedAlgebraModel| {
            extend_twisting_map(&TwistingMapSpec::bicharacter(l.clone(), triple_params.clone()).unwrap(), a, b, td).unwrap()
        };
        let rep = check_triple_compatibility(&t(p, &lx, &ly), &t(r, &ly, &lz), &t(s, &lx, &lz), td).unwrap();
        if rep.compatible() && rep.sides_agree() && rep.hilbert == Some(vec![1, 3, 6, 10, 15]) {
            bichar_ok += 1;
        }
    }
    let incompatible = find_incompatible_linear_triple(&[1, 0, -1], 3).unwrap();
    let converse = incompatible.as_ref().is_some_and(|f| !f.report.compatible() && f.report.sides_agree() && f.report.witness().is_some());

    vec![
        line("9a", assoc_failures.is_empty(), format!("associativity on {triples} basis triples (total degree <= {d}), failures {assoc_failures:?}")),
        line("9b", hilbert_bad.is_empty(), format!("Hilbert function preserved by {twists} Zhang twists, failures {hilbert_bad:?}")),
        line("9c", iso_bad.is_empty(), format!("left/right twist isomorphism on the corpus, failures {iso_bad:?}")),
        line(
            "9d",
            bichar_ok == bichar_sets.len() && converse,
            format!("{bichar_ok}/{} bicharacter triples compatible with iterated product; incompatible triple fails on both sides: {converse}", bichar_sets.len()),
        ),
    ]
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("Zhang oracle", criterion_1),
        ("TTP oracle", criterion_2),
        ("Segre oracle", criterion_3),
        ("quantum-plane bicharacter", criterion_4),
        ("non-quadratic TTP", criterion_5),
        ("finite-dimensional criteria", criterion_6),
        ("quantum suite", criterion_7),
        ("cocycle = Zhang", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (name, run) in criteria {
        for l in run() {
            println!("criterion {:<3} {}  {name}: {}", l.id, if l.passed { "PASS" } else { "FAIL" }, l.detail);
            if !l.passed && !KNOWN_FAILURES.contains(&l.id.as_str()) {
                unexpected.push(l.id);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
