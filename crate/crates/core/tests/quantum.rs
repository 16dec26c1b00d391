use proptest::prelude::*;
use twistkit_core::presentation::{oq_m, oq_m_swapped, polynomial_on};
use twistkit_core::quantum::{
    bialgebra_checks, build_oq_mn, cocycle_eval, cocycle_vs_zhang_check, convolution_inverse, qdeterminant, r_matrix,
    yang_baxter_check, CocycleFunctional, CocycleOrdering, LocalizedElement, QuantumMatrixAlgebra, TwistingPairSpec,
    ZhangEqOptions,
};
use twistkit_core::{FieldElement, Matrix, NcPoly, ParamSpace, TruncatedAlgebraModel, Word};

fn symbolic(names: &[&str]) -> (ParamSpace, Vec<FieldElement>) {
    let mut s = ParamSpace::new();
    let v = names.iter().map(|n| s.param(n)).collect();
    (s, v)
}

fn oq2(d: usize) -> (QuantumMatrixAlgebra, Vec<FieldElement>) {
    let (s, v) = symbolic(&["q", "a1", "a2"]);
    (build_oq_mn(2, s, v[0].clone(), d).unwrap(), v)
}

fn int(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn w(alg: &QuantumMatrixAlgebra, entries: &[(usize, usize)]) -> Word {
    Word(entries.iter().map(|&(i, j)| alg.generator(i - 1, j - 1) as u16).collect())
}

#[test]
fn oq_m2_bialgebra() {
    let (alg, _) = oq2(2);
    assert_eq!(alg.model().presentation().relations().len(), 6);
    assert_eq!(alg.model().hilbert_function(), [1, 4, 10]);
    assert!(bialgebra_checks(&alg).unwrap().passed());
    assert_eq!(alg.delta_generator_text(0, 0), "x11 (x) x11 + x12 (x) x21");
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        assert_eq!(alg.counit_word(&w(&alg, &[(i, j)])).is_one(), i == j);
    }
}

#[test]
fn oq_m3_bialgebra() {
    let (s, v) = symbolic(&["q"]);
    let alg = build_oq_mn(3, s, v[0].clone(), 2).unwrap();
    assert_eq!(alg.model().hilbert_function(), [1, 9, 45]);
    assert!(bialgebra_checks(&alg).unwrap().passed());
    assert!(build_oq_mn(4, ParamSpace::new(), int(2), 2).is_err());
}

#[test]
fn printed_ordering_is_not_a_bialgebra() {
    let (s, v) = symbolic(&["q"]);
    let alg = QuantumMatrixAlgebra::from_presentation(2, v[0].clone(), &oq_m_swapped(2, "q").unwrap(), 3).unwrap();
    assert!(!bialgebra_checks(&alg).unwrap().delta_respects_relations.holds);
    assert!(!qdeterminant(&alg).unwrap().central.holds);
    let m3 = TruncatedAlgebraModel::build(&oq_m_swapped(3, "q").unwrap(), 3).unwrap();
    assert_eq!(m3.hilbert_function(), [1, 9, 45, 153]);
    drop(s);
}

#[test]
fn q_equal_one_is_commutative() {
    let alg = build_oq_mn(2, ParamSpace::new(), int(1), 3).unwrap();
    let names: Vec<String> = ["x11", "x12", "x21", "x22"].map(String::from).to_vec();
    let poly = TruncatedAlgebraModel::build(&polynomial_on("p", &names).unwrap(), 3).unwrap();
    assert!(alg.model().same_ideal(&poly));
    let corpus = TruncatedAlgebraModel::build(&oq_m(2, "q").unwrap(), 3).unwrap();
    assert_eq!(corpus.hilbert_function(), [1, 4, 10, 20]);
}

#[test]
fn qdeterminant_is_central_and_grouplike() {
    let (alg, v) = oq2(3);
    let rep = qdeterminant(&alg).unwrap();
    assert!(rep.passed());
    // g = x11 x22 - q^{-1} x21 x12
    let mut want = NcPoly::word(w(&alg, &[(1, 1), (2, 2)]));
    want.add_term(w(&alg, &[(2, 1), (1, 2)]), -v[0].inv().unwrap());
    assert_eq!(rep.g, want);
    let (s, q) = symbolic(&["q"]);
    let alg3 = build_oq_mn(3, s, q[0].clone(), 4).unwrap();
    assert!(qdeterminant(&alg3).unwrap().passed());
}

#[test]
fn braid_identity() {
    let (_, q) = symbolic(&["q"]);
    for n in [2, 3] {
        let rep = yang_baxter_check(n, &q[0]).unwrap();
        assert!(rep.passed());
        assert!(!rep.braid_unflipped);
    }
    assert!(r_matrix(2, &int(1)).unwrap().is_identity());
    let one = yang_baxter_check(2, &int(1)).unwrap();
    assert!(one.passed() && one.braid_unflipped);
    // an independent oracle: the braided form P R on V ⊗ V for n = 2,
    // written out by hand in the basis v1v1, v1v2, v2v1, v2v2
    let qm = &q[0] - &q[0].inv().unwrap();
    let (o, z) = (int(1), int(0));
    let c = Matrix::from_rows(vec![
        vec![q[0].clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), o.clone(), z.clone()],
        vec![z.clone(), o.clone(), qm, z.clone()],
        vec![z.clone(), z.clone(), z, q[0].clone()],
    ])
    .unwrap();
    let id = Matrix::identity(2);
    let (c12, c23) = (c.kron(&id), id.kron(&c));
    assert_eq!(c12.mul(&c23).unwrap().mul(&c12).unwrap(), c23.mul(&c12).unwrap().mul(&c23).unwrap());
    let mut flip = Matrix::zeros(4, 4);
    for (a, b) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        flip.set(a, b, int(1));
    }
    assert_eq!(flip.mul(&r_matrix(2, &q[0]).unwrap()).unwrap(), c);
}

#[test]
fn localized_equality() {
    let (alg, _) = oq2(3);
    let g = LocalizedElement::new(alg.g().clone(), 0);
    let x = LocalizedElement::new(NcPoly::word(w(&alg, &[(1, 2)])), 0);
    // g · g^{-1} x = x
    let gx = g.mul(&LocalizedElement::new(x.numerator.clone(), 1));
    assert!(gx.same_as(&x, &alg).unwrap());
    assert_eq!(gx.external_degree(&alg), Some(1));
    assert_eq!(LocalizedElement::new(NcPoly::one(), 1).external_degree(&alg), Some(-2));
}

#[test]
fn diagonal_pairs_are_valid() {
    let (alg, v) = oq2(3);
    let spec = TwistingPairSpec::new(Matrix::identity(2)).unwrap();
    assert!(verify_pair(&alg, &spec).valid());
    let spec = TwistingPairSpec::diagonal(&[v[1].clone(), v[2].clone()]).unwrap();
    let rep = verify_pair(&alg, &spec);
    assert!(rep.valid(), "{:?}", rep.violation());
    assert_eq!(rep.phi1_on_g.as_ref(), Some(&rep.expected_phi1_on_g));
    assert_eq!(rep.expected_phi1_on_g, &v[1] * &v[2]);
    assert_eq!(rep.phi2_on_g, Some(rep.expected_phi1_on_g.inv().unwrap()));
}

fn verify_pair(alg: &QuantumMatrixAlgebra, spec: &TwistingPairSpec) -> twistkit_core::quantum::PairReport {
    twistkit_core::quantum::verify_twisting_pair(alg, spec, 3, 2).unwrap()
}

#[test]
fn off_diagonal_entry_is_rejected() {
    let (alg, _) = oq2(3);
    let spec = TwistingPairSpec::new(Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]).unwrap()).unwrap();
    let rep = verify_pair(&alg, &spec);
    assert!(!rep.valid());
    assert!(rep.violation().unwrap().starts_with("phi1 preserves the relations: "));
}

#[test]
fn q_minus_one_permutations() {
    let alg = build_oq_mn(2, ParamSpace::new(), int(-1), 3).unwrap();
    assert!(bialgebra_checks(&alg).unwrap().passed());
    assert!(qdeterminant(&alg).unwrap().passed());
    let swap = TwistingPairSpec::new(Matrix::from_rows(vec![vec![int(0), int(2)], vec![int(3), int(0)]]).unwrap()).unwrap();
    assert!(swap.predicted_valid(&int(-1)));
    assert_eq!(swap.tau_length(&int(-1)), 1);
    let rep = verify_pair(&alg, &swap);
    assert!(rep.valid(), "{:?}", rep.violation());
    // (-1)^{l(τ)} |α| = (-1)(-6)
    assert_eq!(rep.expected_phi1_on_g, int(6));
    assert_eq!(rep.phi1_on_g, Some(int(6)));
    let upper = TwistingPairSpec::new(Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]).unwrap()).unwrap();
    assert!(!verify_pair(&alg, &upper).valid());
    let one = build_oq_mn(2, ParamSpace::new(), int(1), 3).unwrap();
    assert!(verify_pair(&one, &upper).valid());
}

fn alpha_strategy() -> impl Strategy<Value = (Vec<i64>, bool, usize)> {
    (proptest::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], 3), any::<bool>(), 0usize..2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]
    #[test]
    fn sampled_classification((e, off, pos) in alpha_strategy()) {
        let (s, v) = symbolic(&["q"]);
        let alg = build_oq_mn(2, s, v[0].clone(), 2).unwrap();
        let mut rows = vec![vec![int(e[0]), int(0)], vec![int(0), int(e[1])]];
        if off {
            rows[pos][1 - pos] = int(e[2]);
        }
        let spec = TwistingPairSpec::new(Matrix::from_rows(rows).unwrap()).unwrap();
        let rep = twistkit_core::quantum::verify_twisting_pair(&alg, &spec, 2, 1).unwrap();
        prop_assert_eq!(rep.valid(), !off);
        prop_assert_eq!(spec.predicted_valid(&v[0]), !off);
    }
}

#[test]
fn cocycle_closed_formula() {
    let (alg, v) = oq2(3);
    let alpha = Matrix::diagonal(&[v[1].clone(), v[2].clone()]);
    let spec = TwistingPairSpec::new(alpha.clone()).unwrap();
    let cf = CocycleFunctional::new(&spec, alg.q());
    let one = Word::empty();
    assert!(cocycle_eval(&cf, &one, 0, &one, 0).unwrap().is_one());
    let inv = alpha.inverse().unwrap();
    let a2 = alpha.pow(2).unwrap();
    for (i, j) in [(1, 1), (1, 2), (2, 2)] {
        for (u, vv) in [(1, 1), (2, 1), (2, 2)] {
            let (h, l) = (w(&alg, &[(i, j)]), w(&alg, &[(u, vv)]));
            let want = if i == j { inv.get(u - 1, vv - 1).clone() } else { int(0) };
            assert_eq!(cocycle_eval(&cf, &h, 0, &l, 0).unwrap(), want);
            // σ(g^{-1}, x_uv) = (α^n)_uv
            assert_eq!(cocycle_eval(&cf, &one, 1, &l, 0).unwrap(), a2.get(u - 1, vv - 1).clone());
        }
    }
}

/// `ε(φ₂^m(l g^{-t}))` through the automorphism itself.
fn counit_after_phi2(alg: &QuantumMatrixAlgebra, spec: &TwistingPairSpec, m: i64, l: &Word, t: usize) -> FieldElement {
    let phi2 = spec.phi2(alg).unwrap();
    let c = alg.multiple_of_g(&phi2.apply(alg.g())).unwrap().unwrap();
    let image = phi2.pow(m).unwrap().apply(&NcPoly::word(l.clone()));
    &alg.counit(&image) * &c.pow(-m * t as i64).unwrap()
}

#[test]
fn cocycle_matches_its_definition_and_inverse() {
    let (alg, v) = oq2(2);
    let spec = TwistingPairSpec::diagonal(&[v[1].clone(), v[2].clone()]).unwrap();
    let cf = CocycleFunctional::new(&spec, alg.q());
    let inv = convolution_inverse(&alg, &cf, 2, 1).unwrap();
    assert!(inv.check_other_side(&alg, &cf).unwrap().holds);
    for a in 0..=2 {
        for b in 0..=2 - a {
            for h in alg.model().normal_words(a) {
                for l in alg.model().normal_words(b) {
                    for r in 0..=1 {
                        for t in 0..=1 {
                            let m = a as i64 - 2 * r as i64;
                            let eps_h = alg.counit_word(&h);
                            let sigma = &eps_h * &counit_after_phi2(&alg, &spec, m, &l, t);
                            assert_eq!(cf.eval(&h, r, &l, t).unwrap(), sigma);
                            let sigma_inv = &eps_h * &counit_after_phi2(&alg, &spec, -m, &l, t);
                            assert_eq!(inv.eval(&alg, &h, r, &l, t).unwrap(), sigma_inv);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn cocycle_twist_is_the_zhang_twist() {
    let (alg, v) = oq2(3);
    let spec = TwistingPairSpec::diagonal(&[v[1].clone(), v[2].clone()]).unwrap();
    let start = std::time::Instant::now();
    let rep = cocycle_vs_zhang_check(&alg, &spec, ZhangEqOptions::new(3, 1)).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert_eq!(rep.pairs, 4 * (1 + 4 + 4 + 10 + 16 + 10 + 20 + 40 + 40 + 20));
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn reversed_ordering_gives_the_inverse_twist() {
    let (alg, v) = oq2(2);
    let spec = TwistingPairSpec::diagonal(&[v[1].clone(), v[2].clone()]).unwrap();
    let opts = ZhangEqOptions { ordering: CocycleOrdering::InverseFirst, ..ZhangEqOptions::new(2, 1) };
    assert!(cocycle_vs_zhang_check(&alg, &spec, ZhangEqOptions { exponent: -1, ..opts }).unwrap().passed());
    let rep = cocycle_vs_zhang_check(&alg, &spec, opts).unwrap();
    assert!(!rep.passed());
    assert!(!rep.failures.is_empty());
}
