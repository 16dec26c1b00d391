//! Iterated twisted tensor products of three algebras.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{build_ttp, extend_twisting_map, unit, verify_twisting_map_axioms, AxiomReport, ExtendedTwist, TtpBuild, TwistingMapSpec};
use crate::error::{Error, Result};
use crate::freealg::{NcPoly, Word};
use crate::linalg::Matrix;
use crate::presentation::polynomial_on;
use crate::scalars::{FieldElement, ParamSpace};
use crate::truncated::TruncatedAlgebraModel;

/// Per degree, the map from `A ⊗ B` coordinates to the normal basis of a
/// built twisted tensor product, and its inverse.
struct Pbw {
    forward: Vec<Matrix>,
    inverse: Vec<Matrix>,
}

impl Pbw {
    fn new(ext: &ExtendedTwist, built: &TtpBuild) -> Result<Self> {
        let na = ext.a().alphabet().len();
        let shift: Vec<NcPoly> = (0..ext.b().alphabet().len()).map(|g| NcPoly::generator(na + g)).collect();
        let mut forward = Vec::new();
        let mut inverse = Vec::new();
        for n in 0..=ext.max_degree() {
            let cols: Vec<Vec<FieldElement>> = ext
                .layout()
                .ab_keys(n)
                .iter()
                .map(|&(i, ia, j, jb)| {
                    let u = NcPoly::word(ext.a().normal_word(i, ia).clone());
                    let v = NcPoly::word(ext.b().normal_word(j, jb).clone()).substitute(&shift);
                    built.model.coords(n, &u.mul(&v))
                })
                .collect::<Result<_>>()?;
            let m = Matrix::from_columns(&cols, built.model.dim(n));
            inverse.push(m.inverse().map_err(|_| Error::FactorizationNotBijective(n))?);
            forward.push(m);
        }
        Ok(Pbw { forward, inverse })
    }
}

fn same_algebra(x: &TruncatedAlgebraModel, y: &TruncatedAlgebraModel) -> bool {
    x.alphabet().names() == y.alphabet().names() && x.same_ideal(y)
}

/// Outcome of the compatibility test for `τ_AB`, `τ_BC`, `τ_AC`.
#[derive(Clone, Debug)]
pub struct TripleReport {
    /// Axioms for `(1⊗τ_BC)(τ_AC⊗1): C ⊗ (A ⊗ B) → (A ⊗ B) ⊗ C`.
    pub left: AxiomReport,
    /// Axioms for `(τ_AB⊗1)(1⊗τ_AC): (B ⊗ C) ⊗ A → A ⊗ (B ⊗ C)`.
    pub right: AxiomReport,
    /// Hilbert function of the iterated product when both sides built.
    pub hilbert: Option<Vec<usize>>,
    /// Whether the two iterated products have the same relations.
    pub products_agree: Option<bool>,
    pub notes: Vec<String>,
}

impl TripleReport {
    pub fn compatible(&self) -> bool {
        self.left.passed() && self.right.passed() && self.products_agree == Some(true)
    }

    /// The two candidate maps pass or fail together.
    pub fn sides_agree(&self) -> bool {
        self.left.passed() == self.right.passed()
    }

    /// A violated tensor from either side.
    pub fn witness(&self) -> Option<&str> {
        self.left.violations.first().or(self.right.violations.first()).map(String::as_str)
    }
}

/// `(1⊗τ_BC)(τ_AC⊗1)` as a twisting map between `P = A ⊗_{τ_AB} B` and `C`.
fn left_composite(ab: &ExtendedTwist, bc: &ExtendedTwist, ac: &ExtendedTwist, p: &TtpBuild, pbw: &Pbw, d: usize) -> Result<ExtendedTwist> {
    let params = p.model.params().merge(bc.params())?.merge(ac.params())?;
    let mut ext = ExtendedTwist::skeleton(&p.model, bc.b(), params, d, "(1 (x) tau_BC)(tau_AC (x) 1)".into())?;
    for n in 2..=d {
        for key in ext.layout().ba_keys(n).to_vec() {
            let (k, kp, l, lc) = key;
            if k == 0 || l == 0 {
                continue;
            }
            let mut out = alloc::vec![FieldElement::zero(); ext.layout().total(n)];
            let coords = pbw.inverse[k].column(kp);
            for (idx, coef) in coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (i, ia, j, jb) = ab.layout().ab_keys(k)[idx];
                let t = ac.image((i, ia, l, lc));
                for (k1, e) in t.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let (i1, a1, l1, c1) = ac.layout().ab_keys(i + l)[k1];
                    let s = bc.image((j, jb, l1, c1));
                    for (k2, f) in s.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        let (j2, b2, l2, c2) = bc.layout().ab_keys(j + l1)[k2];
                        let pv = pbw.forward[i1 + j2].column(ab.layout().ab_index((i1, a1, j2, b2)));
                        let c = &(coef * e) * f;
                        ext.layout().add_tensor(&mut out, &c, i1 + j2, &pv, l2, &unit(ac.b().dim(l2), c2));
                    }
                }
            }
            ext.set_image(key, &out);
        }
    }
    Ok(ext)
}

/// `(τ_AB⊗1)(1⊗τ_AC)` as a twisting map between `A` and `Q = B ⊗_{τ_BC} C`.
fn right_composite(ab: &ExtendedTwist, bc: &ExtendedTwist, ac: &ExtendedTwist, q: &TtpBuild, pbw: &Pbw, d: usize) -> Result<ExtendedTwist> {
    let params = ab.params().merge(q.model.params())?.merge(ac.params())?;
    let mut ext = ExtendedTwist::skeleton(ab.a(), &q.model, params, d, "(tau_AB (x) 1)(1 (x) tau_AC)".into())?;
    for n in 2..=d {
        for key in ext.layout().ba_keys(n).to_vec() {
            let (k, ka, l, lq) = key;
            if k == 0 || l == 0 {
                continue;
            }
            let mut out = alloc::vec![FieldElement::zero(); ext.layout().total(n)];
            let coords = pbw.inverse[l].column(lq);
            for (idx, coef) in coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (j, jb, l0, lc) = bc.layout().ab_keys(l)[idx];
                let t = ac.image((k, ka, l0, lc));
                for (k1, e) in t.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let (i1, a1, l1, c1) = ac.layout().ab_keys(k + l0)[k1];
                    let s = ab.image((i1, a1, j, jb));
                    for (k2, f) in s.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        let (i2, a2, j2, b2) = ab.layout().ab_keys(i1 + j)[k2];
                        let qv = pbw.forward[j2 + l1].column(bc.layout().ab_index((j2, b2, l1, c1)));
                        let c = &(coef * e) * f;
                        ext.layout().add_tensor(&mut out, &c, i2, &unit(ab.a().dim(i2), a2), j2 + l1, &qv);
                    }
                }
            }
            ext.set_image(key, &out);
        }
    }
    Ok(ext)
}

/// Builds both candidate twisting maps for the iterated product, checks the
/// axioms on each, and when both hold compares the two iterated products.
pub fn check_triple_compatibility(ab: &ExtendedTwist, bc: &ExtendedTwist, ac: &ExtendedTwist, max_degree: usize) -> Result<TripleReport> {
    if !same_algebra(ab.a(), ac.a()) || !same_algebra(ab.b(), bc.a()) || !same_algebra(bc.b(), ac.b()) {
        return Err(Error::Shape("twisting maps do not share the algebras A, B, C".into()));
    }
    let d = max_degree.min(ab.max_degree()).min(bc.max_degree()).min(ac.max_degree());
    let p = build_ttp(ab, "AB")?;
    let q = build_ttp(bc, "BC")?;
    let left = left_composite(ab, bc, ac, &p, &Pbw::new(ab, &p)?, d)?;
    let right = right_composite(ab, bc, ac, &q, &Pbw::new(bc, &q)?, d)?;
    let mut report = TripleReport {
        left: verify_twisting_map_axioms(&left, d),
        right: verify_twisting_map_axioms(&right, d),
        hilbert: None,
        products_agree: None,
        notes: Vec::new(),
    };
    if report.left.passed() && report.right.passed() {
        match (build_ttp(&left, "(AB)C"), build_ttp(&right, "A(BC)")) {
            (Ok(x), Ok(y)) => {
                let agree = x.model.hilbert_function() == y.model.hilbert_function() && same_algebra(&x.model, &y.model);
                report.hilbert = Some(x.model.hilbert_function());
                report.products_agree = Some(agree);
            }
            (x, y) => {
                for e in [x.err(), y.err()].into_iter().flatten() {
                    report.notes.push(format!("{e}"));
                }
                report.products_agree = Some(false);
            }
        }
    }
    Ok(report)
}

/// One-variable polynomial ring on `name`.
fn line(name: &str, max_degree: usize) -> Result<TruncatedAlgebraModel> {
    TruncatedAlgebraModel::build(&polynomial_on(name, &[name.into()])?, max_degree)
}

/// `τ(v ⊗ u) = α u²⊗1 + β u⊗v + γ 1⊗v²` on one-generator algebras.
fn linear_spec([alpha, beta, gamma]: [i64; 3]) -> Result<TwistingMapSpec> {
    let terms = alloc::vec![
        (FieldElement::from_int(alpha), Word(alloc::vec![0, 0]), Word::empty()),
        (FieldElement::from_int(beta), Word::letter(0), Word::letter(0)),
        (FieldElement::from_int(gamma), Word::empty(), Word(alloc::vec![0, 0])),
    ]
    .into_iter()
    .filter(|(c, _, _)| !c.is_zero())
    .collect();
    TwistingMapSpec::linear_generator(BTreeMap::from([((0, 0), terms)]), ParamSpace::new())
}

/// An incompatible triple found by search.
#[derive(Clone, Debug)]
pub struct IncompatibleTriple {
    /// Coefficients `(α, β, γ)` of the generator images of `τ_AB`, `τ_BC`, `τ_AC`.
    pub coefficients: [[i64; 3]; 3],
    pub report: TripleReport,
}

/// Searches triples of twisting maps between `k[x]`, `k[y]`, `k[z]` given
/// by generator images `α u²⊗1 + β u⊗v + γ 1⊗v²` with coefficients from
/// `values`, returning the first one whose candidate maps fail the axioms.
/// Triples whose pairwise maps do not extend are skipped.
pub fn find_incompatible_linear_triple(values: &[i64], max_degree: usize) -> Result<Option<IncompatibleTriple>> {
    let (x, y, z) = (line("x", max_degree)?, line("y", max_degree)?, line("z", max_degree)?);
    let mut cache: BTreeMap<(usize, [i64; 3]), Option<ExtendedTwist>> = BTreeMap::new();
    let pairs = [(&x, &y), (&y, &z), (&x, &z)];
    let mut candidates = Vec::new();
    for &a in values {
        for &b in values {
            for &c in values {
                candidates.push([a, b, c]);
            }
        }
    }
    let mut get = |slot: usize, c: [i64; 3]| -> Result<Option<ExtendedTwist>> {
        if let Some(e) = cache.get(&(slot, c)) {
            return Ok(e.clone());
        }
        let (a, b) = pairs[slot];
        let ext = extend_twisting_map(&linear_spec(c)?, a, b, max_degree).ok();
        let ext = ext.filter(|e| verify_twisting_map_axioms(e, max_degree).passed() && build_ttp(e, "pair").is_ok());
        cache.insert((slot, c), ext.clone());
        Ok(ext)
    };
    for c_ab in &candidates {
        let Some(ab) = get(0, *c_ab)? else { continue };
        for c_bc in &candidates {
            let Some(bc) = get(1, *c_bc)? else { continue };
            for c_ac in &candidates {
                let Some(ac) = get(2, *c_ac)? else { continue };
                let report = check_triple_compatibility(&ab, &bc, &ac, max_degree)?;
                if !report.left.passed() || !report.right.passed() {
                    return Ok(Some(IncompatibleTriple { coefficients: [*c_ab, *c_bc, *c_ac], report }));
                }
            }
        }
    }
    Ok(None)
}
