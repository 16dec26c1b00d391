use twistkit_core::morphisms::{
    check_algebra_map, left_right_twist_isomorphism_check, running_example_theta, verify_twisting_system, zhang_twist,
    GradedGeneratorMap, Side, TwistedAlgebra, TwistingSystem, ZhangTwistAlgebra,
};
use twistkit_core::presentation::builtin_corpus;
use twistkit_core::truncated::{check_associativity_upto, presentation_completion, GradedAlgebra};
use twistkit_core::{FieldElement, GradedPresentation, ParamSpace, TruncatedAlgebraModel};

fn poly4_with_a() -> GradedPresentation {
    let mut p = builtin_corpus("polynomial(4)").unwrap();
    p.params = ParamSpace::with_names(["a"]);
    p
}

#[test]
fn running_example_relations() {
    let a = TruncatedAlgebraModel::build(&poly4_with_a(), 3).unwrap();
    let z = zhang_twist(&a, &running_example_theta(0), Side::Right).unwrap();
    assert!(z.kernel_agrees);
    let expected = builtin_corpus("zhang_running_example(a)").unwrap();
    let got = TruncatedAlgebraModel::build(&z.presentation, 3).unwrap();
    let want = TruncatedAlgebraModel::build(&expected, 3).unwrap();
    assert!(got.same_ideal(&want));
    // Each transported relation is a scalar multiple of the listed one.
    let mut texts = z.presentation.relation_texts();
    let mut listed = expected.relation_texts();
    texts.sort();
    listed.sort();
    assert_eq!(texts, listed);
    assert_eq!(got.hilbert_function(), a.hilbert_function());
}

#[test]
fn identity_twist_is_trivial() {
    let a = TruncatedAlgebraModel::build(&builtin_corpus("A_rho(r)").unwrap(), 2).unwrap();
    for side in [Side::Left, Side::Right] {
        let z = zhang_twist(&a, &GradedGeneratorMap::identity(4), side).unwrap();
        assert_eq!(z.presentation.relations(), a.presentation().relations());
    }
}

#[test]
fn twist_then_untwist() {
    let a = TruncatedAlgebraModel::build(&builtin_corpus("quantum_plane(q)").unwrap(), 3).unwrap();
    let phi = GradedGeneratorMap::diagonal(&[FieldElement::from_int(3), FieldElement::from_ratio(-1, 2)]);
    let z = zhang_twist(&a, &phi, Side::Right).unwrap();
    assert!(z.kernel_agrees);
    let b = TruncatedAlgebraModel::build(&z.presentation, 3).unwrap();
    assert_eq!(b.hilbert_function(), a.hilbert_function());
    let back = zhang_twist(&b, &phi.inverse().unwrap(), Side::Right).unwrap();
    assert!(TruncatedAlgebraModel::build(&back.presentation, 3).unwrap().same_ideal(&a));
}

#[test]
fn left_twist_transport_agrees_with_kernel() {
    let a = TruncatedAlgebraModel::build(&poly4_with_a(), 2).unwrap();
    let z = zhang_twist(&a, &running_example_theta(0), Side::Left).unwrap();
    assert!(z.kernel_agrees);
}

#[test]
fn left_right_isomorphism() {
    let a = TruncatedAlgebraModel::build(&poly4_with_a(), 3).unwrap();
    assert!(left_right_twist_isomorphism_check(&a, &running_example_theta(0)).unwrap().holds());
    assert!(left_right_twist_isomorphism_check(&a, &GradedGeneratorMap::identity(4)).unwrap().holds());
    let k = TruncatedAlgebraModel::build(&builtin_corpus("polynomial(2)").unwrap(), 4).unwrap();
    let phi = GradedGeneratorMap::diagonal(&[FieldElement::one(), FieldElement::from_int(2)]);
    assert!(left_right_twist_isomorphism_check(&k, &phi).unwrap().holds());
}

#[test]
fn swap_breaks_the_twisting_system_axiom() {
    let m = TruncatedAlgebraModel::build(&builtin_corpus("quantum_plane(q)").unwrap(), 3).unwrap();
    let swap = GradedGeneratorMap::permutation(&[1, 0]);
    assert!(!check_algebra_map(&swap, &m).unwrap().holds);
    let ts = TwistingSystem::from_automorphism(&swap, -3, 3).unwrap();
    let v = verify_twisting_system(&ts, &m).unwrap();
    assert!(!v.holds);
    assert!(v.witness.is_some());
    assert!(verify_twisting_system(&TwistingSystem::identity(2, 0, 3), &m).unwrap().holds);
    let short = TwistingSystem::identity(2, 0, 1);
    assert!(matches!(verify_twisting_system(&short, &m), Err(twistkit_core::Error::WindowTooSmall(2))));
}

#[test]
fn twisted_multiplication_matches_transported_relations() {
    let a = TruncatedAlgebraModel::build(&poly4_with_a(), 3).unwrap();
    let theta = running_example_theta(0);
    let ts = TwistingSystem::from_automorphism(&theta, -3, 3).unwrap();
    let twisted = TwistedAlgebra::new(&a, ts).unwrap();
    assert!(check_associativity_upto(&twisted, 3).unwrap().passed());
    let names: Vec<String> = a.alphabet().names().to_vec();
    let c = presentation_completion(&twisted, "twisted", &names, a.params().clone(), 3).unwrap();
    let z = zhang_twist(&a, &theta, Side::Right).unwrap();
    assert!(c.model.same_ideal(&TruncatedAlgebraModel::build(&z.presentation, 3).unwrap()));
    assert_eq!(c.model.hilbert_function(), [1, 4, 10, 20]);
    // x3 * x1 = a x1 * x3 in the twist.
    let p = a.presentation();
    let lhs = twisted.multiply(1, &p.parse("x3").unwrap(), &p.parse("x1").unwrap()).unwrap();
    let rhs = twisted.multiply(1, &p.parse("x1").unwrap(), &p.parse("x3").unwrap()).unwrap();
    assert_eq!(lhs, rhs.scale(&FieldElement::param(0)));
    // Same product from the Zhang multiplication directly.
    let direct = ZhangTwistAlgebra::new(&a, &theta, Side::Right).unwrap();
    for d1 in 0..=3 {
        for d2 in 0..=3 - d1 {
            for i in 0..a.dim(d1) {
                for j in 0..a.dim(d2) {
                    assert_eq!(direct.mul_basis(d1, i, d2, j), twisted.mul_basis(d1, i, d2, j));
                }
            }
        }
    }
}
