use std::collections::BTreeSet;

use twistkit_core::presentation::{polynomial_on, quantum_plane, GradedPresentation};
use twistkit_core::segre::{
    assign_bigrading, densely_graded_diagnostic, diagonal_subalgebra, hilbert_hadamard_check, segre_presentation,
    BigradedTruncation,
};
use twistkit_core::text::parse_scalar;
use twistkit_core::truncated::unit_vector;
use twistkit_core::ttp::{extend_twisting_map, TwistingMapSpec};
use twistkit_core::{Error, GradedAlgebra, ParamSpace, TruncatedAlgebraModel};

fn poly(names: &[&str], d: usize) -> TruncatedAlgebraModel {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    TruncatedAlgebraModel::build(&polynomial_on("poly", &names).unwrap(), d).unwrap()
}

fn ex_ttp(d: usize) -> BigradedTruncation {
    let (a, b) = (poly(&["u", "v"], d), poly(&["x", "y"], d));
    let params = ParamSpace::with_names(["a", "b", "c", "d"]);
    let spec = TwistingMapSpec::parse_linear(
        a.alphabet(),
        b.alphabet(),
        &params,
        &[("x", "u", "a*u (x) x"), ("x", "v", "b*v (x) x"), ("y", "u", "c*u (x) y"), ("y", "v", "d*v (x) y")],
    )
    .unwrap();
    assign_bigrading(&extend_twisting_map(&spec, &a, &b, d).unwrap()).unwrap()
}

fn transposition(a: &[&str], b: &[&str], d: usize) -> BigradedTruncation {
    let ext = extend_twisting_map(&TwistingMapSpec::transposition(), &poly(a, d), &poly(b, d), d).unwrap();
    assign_bigrading(&ext).unwrap()
}

/// Index of the basis tensor labelled `label` in total degree `n`.
fn find(bg: &BigradedTruncation, n: usize, label: &str) -> usize {
    let tp = twistkit_core::ttp::TwistedTensorProduct::new(bg.twist());
    (0..bg.twist().total_dim(n)).find(|&k| tp.basis_label(n, k) == label).unwrap()
}

#[test]
fn bidegrees_of_running_example() {
    let bg = ex_ttp(4);
    assert!(bg.additivity().holds);
    assert_eq!(bg.bidegree(2, find(&bg, 2, "u (x) x")), (0, 1));
    assert_eq!(bg.bidegree(3, find(&bg, 3, "u^2 (x) x")), (1, 1));
    let t = bg.twist();
    let p = t.multiply(2, &unit_vector(t.total_dim(2), find(&bg, 2, "u (x) x")), 2, &unit_vector(t.total_dim(2), find(&bg, 2, "v (x) y")));
    let support: BTreeSet<_> = (0..p.len()).filter(|&k| !p[k].is_zero()).map(|k| bg.bidegree(4, k)).collect();
    assert_eq!(support, BTreeSet::from([(0, 2)]));
    assert_eq!(bg.component_dim((0, 2)), 9);
    assert_eq!(bg.component((0, 2)).len(), 9);
    assert_eq!(bg.component((-1, 1)).len(), 2);
    assert!(bg.component((0, 3)).is_empty());
}

#[test]
fn running_example_diagonal() {
    let bg = ex_ttp(4);
    let diag = diagonal_subalgebra(&bg);
    assert_eq!(diag.max_degree(), 2);
    let labels: Vec<String> = (0..4).map(|k| diag.basis_label(1, k)).collect();
    assert_eq!(labels, ["u (x) x", "u (x) y", "v (x) x", "v (x) y"]);
    assert!(diag.check_against_ttp().holds);
    // a ux·vx = b vx·ux
    let p = bg.twist().params();
    let (a, b) = (parse_scalar("a", p).unwrap(), parse_scalar("b", p).unwrap());
    let lhs: Vec<_> = diag.mul_basis(1, 0, 1, 2).iter().map(|x| &a * x).collect();
    let rhs: Vec<_> = diag.mul_basis(1, 2, 1, 0).iter().map(|x| &b * x).collect();
    assert_eq!(lhs, rhs);
    assert_eq!(diag.generator_names(), ["ux", "uy", "vx", "vy"]);
}

/// The listed relations with X = ux, Y = vx, Z = uy, W = vy.
fn listed_segre_relations(params: &ParamSpace, d: usize) -> TruncatedAlgebraModel {
    let rels = ["a*X*Y - b*Y*X", "c*X*Z - a*Z*X", "c*X*W - b*W*X", "d*Y*Z - a*Z*Y", "d*Y*W - b*W*Y", "c*Z*W - d*W*Z", "a*X*W - b*Y*Z"]
        .map(|r| r.replace('X', "ux").replace('Y', "vx").replace('Z', "uy").replace('W', "vy"));
    let rels: Vec<&str> = rels.iter().map(|s| s.as_str()).collect();
    let alphabet = twistkit_core::Alphabet::linear(["ux", "uy", "vx", "vy"].map(String::from)).unwrap();
    let p = GradedPresentation::from_text("listed", params.clone(), alphabet, &rels).unwrap();
    TruncatedAlgebraModel::build(&p, d).unwrap()
}

#[test]
fn running_example_segre_presentation() {
    // degree 4 of the diagonal lives in total degree 8
    let bg = ex_ttp(8);
    let diag = diagonal_subalgebra(&bg);
    let seg = segre_presentation(&diag, "segre", 4).unwrap();
    assert_eq!(seg.completion.new_relations, [0, 0, 7, 0, 0]);
    let dims: Vec<usize> = (0..=4).map(|d| (d + 1) * (d + 1)).collect();
    assert_eq!(seg.completion.model.hilbert_function(), dims);
    assert_eq!(seg.hadamard, dims);
    assert!(seg.completion.model.same_ideal(&listed_segre_relations(bg.twist().params(), 4)));
    assert!(hilbert_hadamard_check(&bg, 4).unwrap());
}

#[test]
fn commutative_segre_of_two_planes() {
    let bg = transposition(&["x1", "x2"], &["y1", "y2"], 6);
    let diag = diagonal_subalgebra(&bg);
    let seg = segre_presentation(&diag, "segre", 3).unwrap();
    // Degree-2 products of the 4 generators x_p y_q land on monomials
    // x^α y^β with |α| = |β| = 2; the kernel has dimension 16 − #images.
    let mut images = BTreeSet::new();
    for (p1, q1, p2, q2) in index_quadruples() {
        let mut x = [0; 2];
        let mut y = [0; 2];
        x[p1] += 1;
        x[p2] += 1;
        y[q1] += 1;
        y[q2] += 1;
        images.insert((x, y));
    }
    assert_eq!(seg.completion.new_relations[2], 16 - images.len());
    assert_eq!(seg.completion.new_relations[3], 0);
    let m = &seg.completion.model;
    let det = m.presentation().parse("x1y1*x2y2 - x1y2*x2y1").unwrap();
    assert!(m.in_ideal(&det).unwrap());
    assert_eq!(m.hilbert_function(), [1, 4, 9, 16]);
}

fn index_quadruples() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|k| (k & 1, (k >> 1) & 1, (k >> 2) & 1, (k >> 3) & 1))
}

#[test]
fn segre_of_two_lines_is_a_line() {
    let bg = transposition(&["x"], &["y"], 8);
    let diag = diagonal_subalgebra(&bg);
    let seg = segre_presentation(&diag, "segre", 4).unwrap();
    assert_eq!(seg.completion.presentation().relations().len(), 0);
    assert_eq!(seg.completion.model.hilbert_function(), [1; 5]);
    assert_eq!(diag.generator_names(), ["xy"]);
}

#[test]
fn quantum_plane_with_bicharacter() {
    let d = 6;
    let qp = TruncatedAlgebraModel::build(&quantum_plane("q").unwrap(), d).unwrap();
    let b = poly(&["s", "t"], d);
    let mut params = qp.params().clone();
    let l = params.param("l");
    let ext = extend_twisting_map(&TwistingMapSpec::bicharacter(l, params).unwrap(), &qp, &b, d).unwrap();
    let bg = assign_bigrading(&ext).unwrap();
    assert!(diagonal_subalgebra(&bg).check_against_ttp().holds);
    assert!(hilbert_hadamard_check(&bg, 3).unwrap());
}

#[test]
fn merely_graded_map_is_rejected() {
    let (x, y) = (poly(&["x"], 4), poly(&["y"], 4));
    let params = ParamSpace::with_names(["a", "b"]);
    let spec = TwistingMapSpec::parse_linear(x.alphabet(), y.alphabet(), &params, &[("y", "x", "a*x^2 (x) 1 + b*x (x) y + 1 (x) y^2")]).unwrap();
    let ext = extend_twisting_map(&spec, &x, &y, 4).unwrap();
    assert!(matches!(assign_bigrading(&ext), Err(Error::NotStronglyGraded)));
}

#[test]
fn density_table() {
    let bg = transposition(&["x1", "x2"], &["y1", "y2"], 4);
    let rows = densely_graded_diagnostic(&bg, 0, 4).unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.codim == 0 && r.left == 0 && r.right == 0));
    assert!(matches!(densely_graded_diagnostic(&bg, 5, 4), Err(Error::WindowExceedsTruncation { window: 5, max: 4 })));

    let bg = ex_ttp(4);
    let rows = densely_graded_diagnostic(&bg, 1, 4).unwrap();
    let picked: Vec<_> = rows.iter().filter(|r| r.left == 1 && r.right == -1).collect();
    assert!(!picked.is_empty());
    for r in &picked {
        assert_eq!(r.dim, bg.component_dim((0, r.internal)));
        assert_eq!(r.codim + r.product_rank, r.dim);
    }
    // S_1 · S_{-1} reaches S_{(0,j)} only through A_{j1+1} ⊗ B_{j1} times
    // B_{j-j1}, so the unit component (0, 0) is missed.
    assert_eq!(picked.iter().find(|r| r.internal == 0).unwrap().codim, 1);
}
