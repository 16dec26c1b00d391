//! Generator-level graded maps, Zhang twists and twisting systems.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::freealg::{linear_image, Alphabet, NcPoly};
use crate::linalg::{to_sparse, Echelon, Matrix};
use crate::presentation::GradedPresentation;
use crate::scalars::FieldElement;
use crate::truncated::{GradedAlgebra, TruncatedAlgebraModel};

/// Degree-preserving map determined by a matrix on the generators; column
/// `g` holds the image of generator `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedGeneratorMap {
    matrix: Matrix,
}

impl GradedGeneratorMap {
    /// Rejects matrices that mix generators of different degrees.
    pub fn new(matrix: Matrix, alphabet: &Alphabet) -> Result<Self> {
        let n = alphabet.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Shape(format!("generator map must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if !matrix.get(i, j).is_zero() && alphabet.degree_of(i) != alphabet.degree_of(j) {
                    return Err(Error::Shape(format!("entry ({i}, {j}) mixes generator degrees")));
                }
            }
        }
        Ok(GradedGeneratorMap { matrix })
    }

    pub fn identity(n: usize) -> Self {
        GradedGeneratorMap { matrix: Matrix::identity(n) }
    }

    pub fn diagonal(entries: &[FieldElement]) -> Self {
        GradedGeneratorMap { matrix: Matrix::diagonal(entries) }
    }

    /// Sends generator `g` to generator `perm[g]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Matrix::zeros(perm.len(), perm.len());
        for (g, &t) in perm.iter().enumerate() {
            m.set(t, g, FieldElement::one());
        }
        GradedGeneratorMap { matrix: m }
    }

    /// Map given by generator images, each a linear combination of
    /// generators.
    pub fn from_images(images: &[NcPoly], alphabet: &Alphabet) -> Result<Self> {
        let n = alphabet.len();
        if images.len() != n {
            return Err(Error::Shape(format!("expected {n} generator images, found {}", images.len())));
        }
        let mut m = Matrix::zeros(n, n);
        for (g, img) in images.iter().enumerate() {
            for (w, c) in img.terms() {
                match w.0.as_slice() {
                    [i] => m.set(*i as usize, g, c.clone()),
                    _ => return Err(Error::Shape(format!("image of {} is not linear", alphabet.name(g)))),
                }
            }
        }
        Self::new(m, alphabet)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn image(&self, g: usize) -> NcPoly {
        linear_image(&self.matrix, g)
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(GradedGeneratorMap { matrix: self.matrix.inverse()? })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(GradedGeneratorMap { matrix: self.matrix.pow(e)? })
    }

    pub fn compose(&self, inner: &GradedGeneratorMap) -> Result<Self> {
        Ok(GradedGeneratorMap { matrix: self.matrix.mul(&inner.matrix)? })
    }

    /// The induced endomorphism of the free algebra.
    pub fn apply(&self, p: &NcPoly) -> NcPoly {
        p.apply_linear(&self.matrix)
    }
}

/// Verdict with an optional human-readable counterexample.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { holds: true, witness: None }
    }

    pub fn fail(witness: String) -> Self {
        Verdict { holds: false, witness: Some(witness) }
    }
}

/// Whether the induced free-algebra map preserves the relation ideal; the
/// witness is the first relation whose image is not in the ideal.
pub fn check_algebra_map(map: &GradedGeneratorMap, model: &TruncatedAlgebraModel) -> Result<Verdict> {
    let p = model.presentation();
    for (i, r) in p.relations().iter().enumerate() {
        if !model.in_ideal(&map.apply(r))? {
            return Ok(Verdict::fail(p.relation_texts()[i].clone()));
        }
    }
    Ok(Verdict::pass())
}

/// Checks invertibility and the relation condition.
pub fn check_automorphism(map: &GradedGeneratorMap, model: &TruncatedAlgebraModel) -> Result<()> {
    if map.inverse().is_err() {
        return Err(Error::NotAutomorphism(String::from("matrix is singular")));
    }
    let v = check_algebra_map(map, model)?;
    match v.witness {
        Some(w) if !v.holds => Err(Error::NotAutomorphism(w)),
        _ => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A Zhang twist by relation transport, with the result of the independent
/// kernel computation.
#[derive(Clone, Debug)]
pub struct ZhangTwist {
    pub presentation: GradedPresentation,
    /// Degrees at which the kernel of the twisted multiplication was compared.
    pub degrees_checked: Vec<usize>,
    pub kernel_agrees: bool,
}

/// Factorwise maps carrying a degree-`d` relation of `A` to one of the twist.
fn transport_maps(phi: &GradedGeneratorMap, d: usize, side: Side) -> Result<Vec<Matrix>> {
    (0..d)
        .map(|i| {
            let e = match side {
                Side::Right => i,
                Side::Left => d - 1 - i,
            };
            Ok(phi.pow(-(e as i64))?.matrix)
        })
        .collect()
}

/// Value in `A` of the degree-`d` word `w` multiplied in the twist:
/// `x1 φ(x2) φ²(x3) ⋯` on the right, `⋯ φ(x_{d-1}) x_d` on the left.
fn twisted_word_value(phi: &GradedGeneratorMap, w: &crate::freealg::Word, side: Side, alphabet: &Alphabet) -> Result<NcPoly> {
    let d = w.len();
    let maps: Vec<Matrix> = (0..d)
        .map(|i| {
            let e = match side {
                Side::Right => i,
                Side::Left => d - 1 - i,
            };
            Ok(phi.pow(e as i64)?.matrix)
        })
        .collect::<Result<_>>()?;
    NcPoly::word(w.clone()).apply_tensor_map(&maps, alphabet)
}

/// Relations of the left or right Zhang twist of `p` by `phi`.
///
/// `model` truncates `p` at least to its top relation degree. The transported
/// relations are cross-checked against the kernel of the twisted
/// multiplication map on the free span in every relation degree.
pub fn zhang_twist(model: &TruncatedAlgebraModel, phi: &GradedGeneratorMap, side: Side) -> Result<ZhangTwist> {
    let p = model.presentation();
    p.require_degree_one()?;
    check_automorphism(phi, model)?;
    let mut rels = Vec::new();
    for r in p.relations() {
        let d = p.alphabet.homogeneous_degree(r).unwrap_or(0);
        rels.push(r.apply_tensor_map(&transport_maps(phi, d, side)?, &p.alphabet)?);
    }
    let suffix = match side {
        Side::Right => "right",
        Side::Left => "left",
    };
    let twisted = p.with_relations(&format!("{}^{}", p.name, suffix), rels)?;
    let mut degrees: Vec<usize> = (0..p.relations().len()).map(|i| p.relation_degree(i)).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let top = degrees.last().copied().unwrap_or(0);
    let twisted_model = TruncatedAlgebraModel::build(&twisted, top)?;
    let mut agrees = true;
    for &d in &degrees {
        let kernel = twisted_kernel(model, phi, side, d)?;
        let ideal = twisted_model.ideal_basis(d);
        let mut e = Echelon::new();
        for r in &ideal {
            e.insert(&word_vector(model, r, d));
        }
        agrees &= e.rank() == kernel.rank() && kernel.rows().all(|(_, v)| e.contains(v));
    }
    Ok(ZhangTwist { presentation: twisted, degrees_checked: degrees, kernel_agrees: agrees })
}

fn word_vector(model: &TruncatedAlgebraModel, p: &NcPoly, d: usize) -> crate::linalg::SparseVec {
    let words = model.alphabet().words_of_degree(d);
    let index: BTreeMap<_, _> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    p.terms().map(|(w, c)| (index[w], c.clone())).collect()
}

/// Kernel of the twisted multiplication on the free degree-`d` span, with
/// words indexed in ascending order.
fn twisted_kernel(model: &TruncatedAlgebraModel, phi: &GradedGeneratorMap, side: Side, d: usize) -> Result<Echelon> {
    let words = model.alphabet().words_of_degree(d);
    let mut m = Matrix::zeros(model.dim(d), words.len());
    for (c, w) in words.iter().enumerate() {
        let v = model.coords(d, &twisted_word_value(phi, w, side, model.alphabet())?)?;
        for (r, x) in v.into_iter().enumerate() {
            m.set(r, c, x);
        }
    }
    let mut e = Echelon::new();
    for v in m.kernel() {
        e.insert(&to_sparse(&v));
    }
    Ok(e)
}

/// Multiplication of a Zhang twist realised on the normal basis of `A`.
pub struct ZhangTwistAlgebra<'a> {
    model: &'a TruncatedAlgebraModel,
    powers: Vec<Matrix>,
    side: Side,
}

impl<'a> ZhangTwistAlgebra<'a> {
    pub fn new(model: &'a TruncatedAlgebraModel, phi: &GradedGeneratorMap, side: Side) -> Result<Self> {
        check_automorphism(phi, model)?;
        let powers = (0..=model.max_degree()).map(|e| Ok(phi.pow(e as i64)?.matrix)).collect::<Result<_>>()?;
        Ok(ZhangTwistAlgebra { model, powers, side })
    }
}

impl GradedAlgebra for ZhangTwistAlgebra<'_> {
    fn max_degree(&self) -> usize {
        self.model.max_degree()
    }

    fn dim(&self, d: usize) -> usize {
        self.model.dim(d)
    }

    fn mul_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> Vec<FieldElement> {
        let r = NcPoly::word(self.model.normal_word(d1, i).clone());
        let s = NcPoly::word(self.model.normal_word(d2, j).clone());
        let prod = match self.side {
            Side::Right => r.mul(&s.apply_linear(&self.powers[d1])),
            Side::Left => r.apply_linear(&self.powers[d2]).mul(&s),
        };
        self.model.coords(d1 + d2, &prod).expect("degree within truncation")
    }

    fn basis_label(&self, d: usize, i: usize) -> String {
        self.model.basis_label(d, i)
    }
}

/// Outcome of comparing `A^φ` with `^{φ⁻¹}A`.
#[derive(Clone, Debug)]
pub struct IsomorphismCheck {
    /// `F(a *_φ b) = F(a) ∘ F(b)` for `F(a) = φ^{-|a|}(a)` on all basis pairs.
    pub multiplicative: Verdict,
    /// The generator map `φ⁻¹` carries the relations of the right twist into
    /// the ideal of the left twist by `φ⁻¹`.
    pub presentations_match: bool,
    pub pairs_checked: usize,
}

impl IsomorphismCheck {
    pub fn holds(&self) -> bool {
        self.multiplicative.holds && self.presentations_match
    }
}

/// Verifies the natural isomorphism `A^φ ≅ ^{φ⁻¹}A, a ↦ φ^{-|a|}(a)` up to
/// the truncation degree of `model`.
pub fn left_right_twist_isomorphism_check(model: &TruncatedAlgebraModel, phi: &GradedGeneratorMap) -> Result<IsomorphismCheck> {
    let top = model.max_degree();
    let inv = phi.inverse()?;
    let right = ZhangTwistAlgebra::new(model, phi, Side::Right)?;
    let left = ZhangTwistAlgebra::new(model, &inv, Side::Left)?;
    let f: Vec<Matrix> = (0..=top).map(|d| Ok(phi.pow(-(d as i64))?.matrix)).collect::<Result<_>>()?;
    let apply_f = |d: usize, v: &[FieldElement]| -> Result<Vec<FieldElement>> {
        model.coords(d, &model.from_coords(d, v).apply_linear(&f[d]))
    };
    let mut pairs = 0;
    let mut multiplicative = Verdict::pass();
    'outer: for d1 in 0..=top {
        for d2 in 0..=top - d1 {
            for i in 0..model.dim(d1) {
                for j in 0..model.dim(d2) {
                    pairs += 1;
                    let lhs = apply_f(d1 + d2, &right.mul_basis(d1, i, d2, j))?;
                    let fa = apply_f(d1, &crate::truncated::unit_vector(model.dim(d1), i))?;
                    let fb = apply_f(d2, &crate::truncated::unit_vector(model.dim(d2), j))?;
                    let rhs = left.mul_vectors(d1, &fa, d2, &fb);
                    if lhs != rhs {
                        multiplicative = Verdict::fail(format!("{} * {}", model.basis_label(d1, i), model.basis_label(d2, j)));
                        break 'outer;
                    }
                }
            }
        }
    }
    let right_p = zhang_twist(model, phi, Side::Right)?.presentation;
    let left_p = zhang_twist(model, &inv, Side::Left)?.presentation;
    let left_model = TruncatedAlgebraModel::build(&left_p, left_p.max_relation_degree())?;
    let mut presentations_match = true;
    for r in right_p.relations() {
        presentations_match &= left_model.in_ideal(&inv.apply(r))?;
    }
    Ok(IsomorphismCheck { multiplicative, presentations_match, pairs_checked: pairs })
}

/// Family `n ↦ τ_n` of generator maps on a window of integers.
#[derive(Clone, Debug)]
pub struct TwistingSystem {
    maps: BTreeMap<i64, GradedGeneratorMap>,
}

impl TwistingSystem {
    pub fn new(maps: BTreeMap<i64, GradedGeneratorMap>) -> Self {
        TwistingSystem { maps }
    }

    /// `τ_n = φ^n` for `n` in `lo..=hi`.
    pub fn from_automorphism(phi: &GradedGeneratorMap, lo: i64, hi: i64) -> Result<Self> {
        let maps = (lo..=hi).map(|n| Ok((n, phi.pow(n)?))).collect::<Result<_>>()?;
        Ok(TwistingSystem { maps })
    }

    pub fn identity(gens: usize, lo: i64, hi: i64) -> Self {
        TwistingSystem { maps: (lo..=hi).map(|n| (n, GradedGeneratorMap::identity(gens))).collect() }
    }

    pub fn get(&self, n: i64) -> Option<&GradedGeneratorMap> {
        self.maps.get(&n)
    }

    pub fn window(&self) -> (i64, i64) {
        let lo = self.maps.keys().next().copied().unwrap_or(0);
        let hi = self.maps.keys().next_back().copied().unwrap_or(-1);
        (lo, hi)
    }

    fn covers(&self, lo: i64, hi: i64) -> Result<()> {
        match (lo..=hi).find(|n| !self.maps.contains_key(n)) {
            Some(n) => Err(Error::WindowTooSmall(n)),
            None => Ok(()),
        }
    }

    /// `τ_n` applied to a normal-form element, then reduced.
    fn apply(&self, model: &TruncatedAlgebraModel, n: i64, p: &NcPoly) -> Result<NcPoly> {
        let m = self.maps.get(&n).ok_or(Error::WindowTooSmall(n))?;
        model.reduce(&m.apply(p))
    }
}

/// Checks `τ_n(r τ_m(s)) = τ_n(r) τ_{n+m}(s)` for normal basis elements
/// `r ∈ A_m`, `s ∈ A_l`, `m + l ≤ D`, and every `n` with `n, n+m` in the
/// window. The window must contain `0..=D`.
pub fn verify_twisting_system(ts: &TwistingSystem, model: &TruncatedAlgebraModel) -> Result<Verdict> {
    let top = model.max_degree();
    ts.covers(0, top as i64)?;
    let (lo, hi) = ts.window();
    for n in lo..=hi {
        for m in 0..=top {
            if n + m as i64 > hi {
                continue;
            }
            for l in 0..=top - m {
                for r in model.normal_words(m) {
                    let r = NcPoly::word(r);
                    for s in model.normal_words(l) {
                        let s = NcPoly::word(s);
                        let lhs = ts.apply(model, n, &model.multiply(&r, &ts.apply(model, m as i64, &s)?)?)?;
                        let rhs = model.multiply(&ts.apply(model, n, &r)?, &ts.apply(model, n + m as i64, &s)?)?;
                        if lhs != rhs {
                            let (al, sp) = (model.alphabet(), model.params());
                            return Ok(Verdict::fail(format!("n={n}, r={}, s={}", r.to_text(al, sp), s.to_text(al, sp))));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::pass())
}

/// Multiplication `r ∗ s = r τ_m(s)` on the normal basis of `A`.
pub struct TwistedAlgebra<'a> {
    model: &'a TruncatedAlgebraModel,
    system: TwistingSystem,
}

impl<'a> TwistedAlgebra<'a> {
    /// Verifies the twisting system first.
    pub fn new(model: &'a TruncatedAlgebraModel, system: TwistingSystem) -> Result<Self> {
        let v = verify_twisting_system(&system, model)?;
        if !v.holds {
            return Err(Error::NotAutomorphism(v.witness.unwrap_or_default()));
        }
        Ok(TwistedAlgebra { model, system })
    }

    pub fn model(&self) -> &TruncatedAlgebraModel {
        self.model
    }

    /// Twisted product of normal-form elements of degrees `m` and `l`.
    pub fn multiply(&self, m: usize, r: &NcPoly, s: &NcPoly) -> Result<NcPoly> {
        self.model.multiply(r, &self.system.apply(self.model, m as i64, s)?)
    }
}

impl GradedAlgebra for TwistedAlgebra<'_> {
    fn max_degree(&self) -> usize {
        self.model.max_degree()
    }

    fn dim(&self, d: usize) -> usize {
        self.model.dim(d)
    }

    fn mul_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> Vec<FieldElement> {
        let r = NcPoly::word(self.model.normal_word(d1, i).clone());
        let s = NcPoly::word(self.model.normal_word(d2, j).clone());
        let prod = self.multiply(d1, &r, &s).expect("degree within truncation");
        self.model.coords(d1 + d2, &prod).expect("degree within truncation")
    }

    fn basis_label(&self, d: usize, i: usize) -> String {
        self.model.basis_label(d, i)
    }
}

/// The map `x1 -> a x1, x2 -> a x2, x3 -> x3, x4 -> x4` on `k[x1..x4]`,
/// with `a` the parameter of index `param`.
pub fn running_example_theta(param: usize) -> GradedGeneratorMap {
    let a = FieldElement::param(param);
    GradedGeneratorMap::diagonal(&[a.clone(), a, FieldElement::one(), FieldElement::one()])
}
