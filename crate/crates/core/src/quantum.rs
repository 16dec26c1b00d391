//! Quantum matrices `O_q(M_n)` with their bialgebra structure, the
//! q-determinant `g`, the localization at `g`, twisting pairs
//! `(φ₁, φ₂)` given by an invertible matrix `α`, and the 2-cocycle
//! `σ(x, y) = ε(x) ε(φ₂^{|x|}(y))` whose cocycle twist is compared with the
//! right Zhang twist by `φ₁φ₂`.
//!
//! Elements of the localization are written `w · g^{-r}`. Since `g` is
//! central and grouplike, `Δ(w g^{-r}) = Δ(w) (g^{-r} ⊗ g^{-r})` and every
//! automorphism that scales `g` is determined on `g^{-1}` by that scalar.
//! The extension of `φ₂` to the Hopf envelope is taken to be this extension
//! to the localization.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::freealg::{NcPoly, Word};
use crate::linalg::Matrix;
use crate::morphisms::{check_algebra_map, GradedGeneratorMap, Verdict};
use crate::presentation::{oq_m_with, GradedPresentation};
use crate::scalars::{FieldElement, ParamSpace};
use crate::truncated::TruncatedAlgebraModel;

type Sparse = Vec<(usize, FieldElement)>;

/// `O_q(M_n)` truncated at a fixed degree, with generators `x_{ij}` at index
/// `i n + j` (0-based).
#[derive(Debug)]
pub struct QuantumMatrixAlgebra {
    n: usize,
    q: FieldElement,
    model: TruncatedAlgebraModel,
    g: NcPoly,
    coords: RefCell<BTreeMap<Word, Sparse>>,
}

/// `O_q(M_n)` for `n ∈ {2, 3}` up to degree `max_degree`.
pub fn build_oq_mn(n: usize, params: ParamSpace, q: FieldElement, max_degree: usize) -> Result<QuantumMatrixAlgebra> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedSize(n));
    }
    QuantumMatrixAlgebra::from_presentation(n, q.clone(), &oq_m_with(n, params, q)?, max_degree)
}

impl QuantumMatrixAlgebra {
    /// Wraps any presentation on the generators `x_{ij}` in row-major order.
    pub fn from_presentation(n: usize, q: FieldElement, presentation: &GradedPresentation, max_degree: usize) -> Result<Self> {
        if presentation.alphabet.len() != n * n {
            return Err(Error::Shape(format!("expected {} generators, found {}", n * n, presentation.alphabet.len())));
        }
        let model = TruncatedAlgebraModel::build(presentation, max_degree)?;
        let g = qdeterminant_poly(n, &q)?;
        Ok(QuantumMatrixAlgebra { n, q, model, g, coords: RefCell::new(BTreeMap::new()) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &FieldElement {
        &self.q
    }

    pub fn model(&self) -> &TruncatedAlgebraModel {
        &self.model
    }

    pub fn max_degree(&self) -> usize {
        self.model.max_degree()
    }

    pub fn dim(&self, d: usize) -> usize {
        self.model.dim(d)
    }

    /// Generator index of `x_{ij}`, 0-based.
    pub fn generator(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// The q-determinant.
    pub fn g(&self) -> &NcPoly {
        &self.g
    }

    fn entry(&self, g: usize) -> (usize, usize) {
        (g / self.n, g % self.n)
    }

    fn word_sparse(&self, w: &Word) -> Sparse {
        if let Some(v) = self.coords.borrow().get(w) {
            return v.clone();
        }
        let v: Sparse = self.model.word_coords(w.len(), w).into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        self.coords.borrow_mut().insert(w.clone(), v.clone());
        v
    }

    fn poly_sparse(&self, d: usize, p: &NcPoly) -> Result<Sparse> {
        Ok(self.model.coords(d, p)?.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
    }

    /// All ways of writing `Δ^{(parts-1)}` of a word: for `x_{ij}` the factors
    /// are `x_{i k_1} ⊗ x_{k_1 k_2} ⊗ ... ⊗ x_{k_{parts-1} j}`.
    pub fn split_word(&self, w: &Word, parts: usize) -> Vec<Vec<Word>> {
        let letters: Vec<(usize, usize)> = w.letters().map(|g| self.entry(g)).collect();
        let inner = (parts - 1) * letters.len();
        let total = self.n.pow(inner as u32);
        let mut out = Vec::with_capacity(total);
        let mut ks = vec![0usize; inner];
        for _ in 0..total {
            let mut factors = vec![Vec::with_capacity(letters.len()); parts];
            for (t, &(i, j)) in letters.iter().enumerate() {
                let path = &ks[t * (parts - 1)..(t + 1) * (parts - 1)];
                let mut from = i;
                for (f, &k) in path.iter().enumerate() {
                    factors[f].push(self.generator(from, k) as u16);
                    from = k;
                }
                factors[parts - 1].push(self.generator(from, j) as u16);
            }
            out.push(factors.into_iter().map(Word).collect());
            for k in ks.iter_mut() {
                *k += 1;
                if *k < self.n {
                    break;
                }
                *k = 0;
            }
        }
        out
    }

    /// `Δ(w)` in `A_d ⊗ A_d`, index `p · dim A_d + p'`.
    pub fn delta_word(&self, w: &Word) -> Vec<FieldElement> {
        let d = w.len();
        let dim = self.dim(d);
        let mut out = vec![FieldElement::zero(); dim * dim];
        for split in self.split_word(w, 2) {
            add_outer(&mut out, dim, &FieldElement::one(), &self.word_sparse(&split[0]), &self.word_sparse(&split[1]));
        }
        out
    }

    /// `Δ(p)` for `p` homogeneous of degree `d`.
    pub fn delta(&self, d: usize, p: &NcPoly) -> Vec<FieldElement> {
        let dim = self.dim(d);
        let mut out = vec![FieldElement::zero(); dim * dim];
        for (w, c) in p.terms() {
            for (k, x) in self.delta_word(w).into_iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                out[k] = &out[k] + &(c * &x);
            }
        }
        out
    }

    /// `ε(x_{ij}) = δ_{ij}`, extended multiplicatively.
    pub fn counit_word(&self, w: &Word) -> FieldElement {
        if w.letters().all(|g| {
            let (i, j) = self.entry(g);
            i == j
        }) {
            FieldElement::one()
        } else {
            FieldElement::zero()
        }
    }

    pub fn counit(&self, p: &NcPoly) -> FieldElement {
        p.terms().fold(FieldElement::zero(), |acc, (w, c)| &acc + &(c * &self.counit_word(w)))
    }

    /// Readable `Δ(x_{ij})`.
    pub fn delta_generator_text(&self, i: usize, j: usize) -> String {
        let names = self.model.alphabet().names();
        let terms: Vec<String> =
            (0..self.n).map(|k| format!("{} (x) {}", names[self.generator(i, k)], names[self.generator(k, j)])).collect();
        crate::text::join(terms, " + ")
    }

    /// Scalar `c` with `p = c · g` in degree `n`, if there is one.
    pub fn multiple_of_g(&self, p: &NcPoly) -> Result<Option<FieldElement>> {
        let (x, y) = (self.model.coords(self.n, p)?, self.model.coords(self.n, &self.g)?);
        let k = y.iter().position(|c| !c.is_zero()).expect("g is nonzero");
        let c = (&x[k] / &y[k])?;
        Ok(x.iter().zip(&y).all(|(a, b)| *a == &c * b).then_some(c))
    }
}

fn add_outer(out: &mut [FieldElement], dim: usize, coef: &FieldElement, left: &Sparse, right: &Sparse) {
    for (p, a) in left {
        let ca = coef * a;
        for (p2, b) in right {
            let k = p * dim + p2;
            out[k] = &out[k] + &(&ca * b);
        }
    }
}

/// Outcome of the bialgebra checks.
#[derive(Clone, Debug, PartialEq)]
pub struct BialgebraReport {
    pub delta_respects_relations: Verdict,
    pub counit_respects_relations: Verdict,
    pub coassociative: Verdict,
    pub counit_laws: Verdict,
}

impl BialgebraReport {
    pub fn passed(&self) -> bool {
        [&self.delta_respects_relations, &self.counit_respects_relations, &self.coassociative, &self.counit_laws]
            .iter()
            .all(|v| v.holds)
    }
}

/// `Δ` and `ε` vanish on every relation (so they are algebra maps), and
/// coassociativity and the counit laws hold on the generators.
pub fn bialgebra_checks(alg: &QuantumMatrixAlgebra) -> Result<BialgebraReport> {
    let p = alg.model.presentation();
    let texts = p.relation_texts();
    let mut delta = Verdict::pass();
    let mut counit = Verdict::pass();
    for (r, text) in p.relations().iter().zip(&texts) {
        let d = alg.model.alphabet().homogeneous_degree(r).unwrap_or(2);
        if delta.holds && alg.delta(d, r).iter().any(|x| !x.is_zero()) {
            delta = Verdict::fail(format!("Δ({text}) is not zero"));
        }
        if counit.holds && !alg.counit(r).is_zero() {
            counit = Verdict::fail(format!("ε({text}) is not zero"));
        }
    }
    let n = alg.n;
    let mut coassociative = Verdict::pass();
    let mut counit_laws = Verdict::pass();
    let names = alg.model.alphabet().names();
    for i in 0..n {
        for j in 0..n {
            // (Δ ⊗ 1)Δ and (1 ⊗ Δ)Δ as multisets of generator triples
            let mut left: BTreeMap<[usize; 3], i64> = BTreeMap::new();
            let mut right: BTreeMap<[usize; 3], i64> = BTreeMap::new();
            for k in 0..n {
                for l in 0..n {
                    *left.entry([alg.generator(i, l), alg.generator(l, k), alg.generator(k, j)]).or_default() += 1;
                    *right.entry([alg.generator(i, k), alg.generator(k, l), alg.generator(l, j)]).or_default() += 1;
                }
            }
            if left != right && coassociative.holds {
                coassociative = Verdict::fail(names[alg.generator(i, j)].clone());
            }
            let g = alg.generator(i, j);
            let mut eps_left = BTreeMap::new();
            let mut eps_right = BTreeMap::new();
            for k in 0..n {
                let (a, b) = (Word::letter(alg.generator(i, k)), Word::letter(alg.generator(k, j)));
                let (ea, eb) = (alg.counit_word(&a), alg.counit_word(&b));
                if !ea.is_zero() {
                    let e = eps_left.entry(alg.generator(k, j)).or_insert_with(FieldElement::zero);
                    *e = &*e + &ea;
                }
                if !eb.is_zero() {
                    let e = eps_right.entry(alg.generator(i, k)).or_insert_with(FieldElement::zero);
                    *e = &*e + &eb;
                }
            }
            let want = BTreeMap::from([(g, FieldElement::one())]);
            if (eps_left != want || eps_right != want) && counit_laws.holds {
                counit_laws = Verdict::fail(names[g].clone());
            }
        }
    }
    Ok(BialgebraReport { delta_respects_relations: delta, counit_respects_relations: counit, coassociative, counit_laws })
}

/// Permutations of `0..n` with their number of inversions.
fn permutations(n: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
        if k == perm.len() {
            out.push((perm.clone(), inversions(perm)));
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, out);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, &mut out);
    out
}

fn inversions(perm: &[usize]) -> usize {
    (0..perm.len()).map(|i| (i + 1..perm.len()).filter(|&j| perm[i] > perm[j]).count()).sum()
}

/// `g = Σ_{σ ∈ S_n} (-q)^{-l(σ)} x_{σ(1)1} ⋯ x_{σ(n)n}`.
fn qdeterminant_poly(n: usize, q: &FieldElement) -> Result<NcPoly> {
    let minus_q = -q;
    let mut g = NcPoly::zero();
    for (perm, len) in permutations(n) {
        let w = Word(perm.iter().enumerate().map(|(col, &row)| (row * n + col) as u16).collect());
        g.add_term(w, minus_q.pow(-(len as i64))?);
    }
    Ok(g)
}

/// Centrality and grouplikeness of the q-determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct QdetReport {
    pub g: NcPoly,
    pub central: Verdict,
    pub grouplike: Verdict,
    pub counit: FieldElement,
}

impl QdetReport {
    pub fn passed(&self) -> bool {
        self.central.holds && self.grouplike.holds && self.counit.is_one()
    }
}

/// Checks that `g x_{ij} - x_{ij} g` reduces to zero for every generator,
/// that `Δ(g) = g ⊗ g` and that `ε(g) = 1`. Needs degree `n + 1`.
pub fn qdeterminant(alg: &QuantumMatrixAlgebra) -> Result<QdetReport> {
    let n = alg.n;
    if alg.max_degree() < n + 1 {
        return Err(Error::DegreeOutOfRange { degree: n + 1, max: alg.max_degree() });
    }
    let g = alg.g.clone();
    let mut central = Verdict::pass();
    for x in 0..n * n {
        let x = NcPoly::generator(x);
        let c = g.mul(&x).sub(&x.mul(&g));
        if !alg.model.in_ideal(&c)? {
            central = Verdict::fail(format!("g*{0} - {0}*g", alg.model.alphabet().name(x.terms().next().unwrap().0 .0[0] as usize)));
            break;
        }
    }
    let dg = alg.delta(n, &g);
    let gc = alg.poly_sparse(n, &g)?;
    let mut gg = vec![FieldElement::zero(); dg.len()];
    add_outer(&mut gg, alg.dim(n), &FieldElement::one(), &gc, &gc);
    let grouplike = if dg == gg { Verdict::pass() } else { Verdict::fail("Δ(g) - g (x) g is not zero".into()) };
    let counit = alg.counit(&g);
    Ok(QdetReport { g, central, grouplike, counit })
}

/// The operator `R_q` on `V ⊗ V` in the basis `v_i ⊗ v_j` (index `i n + j`).
pub fn r_matrix(n: usize, q: &FieldElement) -> Result<Matrix> {
    let mut r = Matrix::zeros(n * n, n * n);
    let q_minus = q - &q.inv()?;
    for i in 0..n {
        for j in 0..n {
            let col = i * n + j;
            if i == j {
                r.set(col, col, q.clone());
            } else {
                r.set(col, col, FieldElement::one());
                if i > j {
                    r.set(j * n + i, col, q_minus.clone());
                }
            }
        }
    }
    Ok(r)
}

/// The flip `v_i ⊗ v_j ↦ v_j ⊗ v_i`.
fn flip(n: usize) -> Matrix {
    let mut p = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            p.set(j * n + i, i * n + j, FieldElement::one());
        }
    }
    p
}

fn braid_holds(c: &Matrix, n: usize) -> Result<bool> {
    let id = Matrix::identity(n);
    let (c12, c23) = (c.kron(&id), id.kron(c));
    Ok(c12.mul(&c23)?.mul(&c12)? == c23.mul(&c12)?.mul(&c23)?)
}

/// Exact checks of `R_q` on `V^{⊗3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct YangBaxterReport {
    /// `R₁₂ R₁₃ R₂₃ = R₂₃ R₁₃ R₁₂`.
    pub quantum_yang_baxter: bool,
    /// The braid identity `c₁₂ c₂₃ c₁₂ = c₂₃ c₁₂ c₂₃` for `c = P ∘ R_q`.
    pub braid: bool,
    /// The braid identity for `R_q` itself, which `R_q` is not expected to
    /// satisfy for `q² ≠ 1`.
    pub braid_unflipped: bool,
}

impl YangBaxterReport {
    pub fn passed(&self) -> bool {
        self.quantum_yang_baxter && self.braid
    }
}

/// Checks `R_q` and its braided form `P ∘ R_q` exactly.
pub fn yang_baxter_check(n: usize, q: &FieldElement) -> Result<YangBaxterReport> {
    let r = r_matrix(n, q)?;
    let p = flip(n);
    let id = Matrix::identity(n);
    let p23 = id.kron(&p);
    let (r12, r23) = (r.kron(&id), id.kron(&r));
    let r13 = p23.mul(&r12)?.mul(&p23)?;
    Ok(YangBaxterReport {
        quantum_yang_baxter: r12.mul(&r13)?.mul(&r23)? == r23.mul(&r13)?.mul(&r12)?,
        braid: braid_holds(&p.mul(&r)?, n)?,
        braid_unflipped: braid_holds(&r, n)?,
    })
}

/// `numerator · g^{-power}` in the localization at `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedElement {
    pub numerator: NcPoly,
    pub power: usize,
}

impl LocalizedElement {
    pub fn new(numerator: NcPoly, power: usize) -> Self {
        LocalizedElement { numerator, power }
    }

    /// `deg(numerator) - n · power`, for homogeneous numerators.
    pub fn external_degree(&self, alg: &QuantumMatrixAlgebra) -> Option<i64> {
        let d = alg.model.alphabet().homogeneous_degree(&self.numerator)?;
        Some(d as i64 - (alg.n * self.power) as i64)
    }

    /// Uses that `g` is central.
    pub fn mul(&self, other: &LocalizedElement) -> LocalizedElement {
        LocalizedElement { numerator: self.numerator.mul(&other.numerator), power: self.power + other.power }
    }

    /// `a g^{-r} = b g^{-t}` iff `a g^{t-r} = b` (for `r ≤ t`), decided in
    /// the truncation.
    pub fn same_as(&self, other: &LocalizedElement, alg: &QuantumMatrixAlgebra) -> Result<bool> {
        let (lo, hi) = if self.power <= other.power { (self, other) } else { (other, self) };
        let lhs = lo.numerator.mul(&alg.g.pow((hi.power - lo.power) as u32));
        alg.model.in_ideal(&lhs.sub(&hi.numerator))
    }
}

/// An invertible `n × n` matrix `α`, defining `φ₁(X) = X α` and
/// `φ₂(X) = α^{-1} X` on the generator matrix `X = (x_{ij})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistingPairSpec {
    alpha: Matrix,
    inverse: Matrix,
    det: FieldElement,
}

impl TwistingPairSpec {
    pub fn new(alpha: Matrix) -> Result<Self> {
        if !alpha.is_square() {
            return Err(Error::Shape("α must be square".into()));
        }
        let inverse = alpha.inverse()?;
        let det = alpha.determinant()?;
        Ok(TwistingPairSpec { alpha, inverse, det })
    }

    pub fn diagonal(entries: &[FieldElement]) -> Result<Self> {
        Self::new(Matrix::diagonal(entries))
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    pub fn det(&self) -> &FieldElement {
        &self.det
    }

    fn n(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn phi1(&self, alg: &QuantumMatrixAlgebra) -> Result<GradedGeneratorMap> {
        let n = self.n();
        let mut m = Matrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    m.set(alg.generator(i, k), alg.generator(i, j), self.alpha.get(k, j).clone());
                }
            }
        }
        GradedGeneratorMap::new(m, alg.model.alphabet())
    }

    pub fn phi2(&self, alg: &QuantumMatrixAlgebra) -> Result<GradedGeneratorMap> {
        let n = self.n();
        let mut m = Matrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    m.set(alg.generator(k, j), alg.generator(i, j), self.inverse.get(i, k).clone());
                }
            }
        }
        GradedGeneratorMap::new(m, alg.model.alphabet())
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.alpha.get(i, j).is_zero()))
    }

    /// Exactly one nonzero entry in every row and column.
    pub fn permutation(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let perm: Vec<usize> = (0..n)
            .map(|j| {
                let rows: Vec<usize> = (0..n).filter(|&i| !self.alpha.get(i, j).is_zero()).collect();
                if rows.len() == 1 {
                    Some(rows[0])
                } else {
                    None
                }
            })
            .collect::<Option<_>>()?;
        let mut seen = vec![false; n];
        for &i in &perm {
            if core::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(perm)
    }

    /// Expected verdict: every `α` for `q = 1`, generalized permutation
    /// matrices for `q = -1`, diagonal matrices otherwise.
    pub fn predicted_valid(&self, q: &FieldElement) -> bool {
        if q.is_one() {
            true
        } else if (-q).is_one() {
            self.permutation().is_some()
        } else {
            self.is_diagonal()
        }
    }

    /// `l(τ)` for the permutation `τ` with `|α| = (-1)^{l(τ)} α_{τ(1)1} ⋯`;
    /// zero unless `q = -1`.
    pub fn tau_length(&self, q: &FieldElement) -> usize {
        match self.permutation() {
            Some(p) if (-q).is_one() => inversions(&p),
            _ => 0,
        }
    }
}

/// Verdicts of the twisting-pair conditions. The conditions are only
/// evaluated when both maps are well defined.
#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    pub phi1_well_defined: Verdict,
    pub phi2_well_defined: Verdict,
    /// `c` with `φ₁(g) = c g`, so `φ₁(g^{-1}) = c^{-1} g^{-1}`.
    pub phi1_on_g: Option<FieldElement>,
    pub phi2_on_g: Option<FieldElement>,
    /// `(-1)^{l(τ)} |α|`.
    pub expected_phi1_on_g: FieldElement,
    pub delta_phi1: Option<Verdict>,
    pub delta_phi2: Option<Verdict>,
    pub counit: Option<Verdict>,
    pub inverse_g_fixed: Option<Verdict>,
    pub monomials_checked: usize,
}

impl PairReport {
    pub fn valid(&self) -> bool {
        self.phi1_well_defined.holds
            && self.phi2_well_defined.holds
            && [&self.delta_phi1, &self.delta_phi2, &self.counit, &self.inverse_g_fixed].iter().all(|v| v.as_ref().is_some_and(|v| v.holds))
    }

    /// First failing condition and its witness.
    pub fn violation(&self) -> Option<String> {
        let named = [
            ("phi1 preserves the relations", Some(&self.phi1_well_defined)),
            ("phi2 preserves the relations", Some(&self.phi2_well_defined)),
            ("Delta phi1 = (1 (x) phi1) Delta", self.delta_phi1.as_ref()),
            ("Delta phi2 = (phi2 (x) 1) Delta", self.delta_phi2.as_ref()),
            ("epsilon phi1 phi2 = epsilon", self.counit.as_ref()),
            ("phi1 phi2 (g^-1) = g^-1", self.inverse_g_fixed.as_ref()),
        ];
        named.iter().find_map(|(name, v)| match v {
            Some(v) if !v.holds => Some(format!("{name}: {}", v.witness.clone().unwrap_or_default())),
            _ => None,
        })
    }
}

/// Checks that `φ₁`, `φ₂` are well defined and that
/// `Δφ₁ = (1 ⊗ φ₁)Δ`, `Δφ₂ = (φ₂ ⊗ 1)Δ` and `εφ₁φ₂ = ε` hold on every
/// `w g^{-r}` with `w` a normal word of degree at most `max_degree` and
/// `r ≤ max_power`.
pub fn verify_twisting_pair(alg: &QuantumMatrixAlgebra, spec: &TwistingPairSpec, max_degree: usize, max_power: usize) -> Result<PairReport> {
    if spec.n() != alg.n {
        return Err(Error::Shape(format!("α is {0}×{0}, algebra has n = {1}", spec.n(), alg.n)));
    }
    if max_degree > alg.max_degree() {
        return Err(Error::DegreeOutOfRange { degree: max_degree, max: alg.max_degree() });
    }
    let (phi1, phi2) = (spec.phi1(alg)?, spec.phi2(alg)?);
    let sign = if spec.tau_length(&alg.q) % 2 == 1 { -FieldElement::one() } else { FieldElement::one() };
    let mut report = PairReport {
        phi1_well_defined: check_algebra_map(&phi1, &alg.model)?,
        phi2_well_defined: check_algebra_map(&phi2, &alg.model)?,
        phi1_on_g: None,
        phi2_on_g: None,
        expected_phi1_on_g: &sign * &spec.det,
        delta_phi1: None,
        delta_phi2: None,
        counit: None,
        inverse_g_fixed: None,
        monomials_checked: 0,
    };
    if !(report.phi1_well_defined.holds && report.phi2_well_defined.holds) {
        return Ok(report);
    }
    let c1 = alg.multiple_of_g(&phi1.apply(&alg.g))?;
    let c2 = alg.multiple_of_g(&phi2.apply(&alg.g))?;
    report.phi1_on_g = c1.clone();
    report.phi2_on_g = c2.clone();
    let (Some(c1), Some(c2)) = (c1, c2) else {
        report.inverse_g_fixed = Some(Verdict::fail("phi1(g) or phi2(g) is not a multiple of g".into()));
        return Ok(report);
    };
    report.inverse_g_fixed =
        Some(if (&c1 * &c2).is_one() { Verdict::pass() } else { Verdict::fail(format!("phi1 phi2 (g) = {} g", (&c1 * &c2).to_text(alg.model.params()))) });
    let (mut d1, mut d2, mut eps) = (Verdict::pass(), Verdict::pass(), Verdict::pass());
    let alphabet = alg.model.alphabet();
    for d in 0..=max_degree {
        let dim = alg.dim(d);
        for w in alg.model.normal_words(d) {
            let splits = alg.split_word(&w, 2);
            let delta_phi = |phi: &GradedGeneratorMap| alg.delta(d, &phi.apply(&NcPoly::word(w.clone())));
            let (lhs1, lhs2) = (delta_phi(&phi1), delta_phi(&phi2));
            let (mut rhs1, mut rhs2) = (vec![FieldElement::zero(); dim * dim], vec![FieldElement::zero(); dim * dim]);
            for s in &splits {
                let (a, b) = (alg.word_sparse(&s[0]), alg.word_sparse(&s[1]));
                let pb = alg.poly_sparse(d, &phi1.apply(&NcPoly::word(s[1].clone())))?;
                let pa = alg.poly_sparse(d, &phi2.apply(&NcPoly::word(s[0].clone())))?;
                add_outer(&mut rhs1, dim, &FieldElement::one(), &a, &pb);
                add_outer(&mut rhs2, dim, &FieldElement::one(), &pa, &b);
            }
            let both = alg.counit(&phi1.apply(&phi2.apply(&NcPoly::word(w.clone()))));
            for r in 0..=max_power {
                report.monomials_checked += 1;
                let label = || format!("{} g^-{r}", alphabet.word_text(&w));
                // Δ(φ(g^{-r})) = c^{-r} g^{-r} ⊗ g^{-r}; (1 ⊗ φ)(g^{-r} ⊗ g^{-r}) = g^{-r} ⊗ c^{-r} g^{-r}
                let (s1, s2) = (c1.pow(-(r as i64))?, c2.pow(-(r as i64))?);
                let scaled = |v: &[FieldElement], s: &FieldElement| v.iter().map(|x| x * s).collect::<Vec<_>>();
                if d1.holds && scaled(&lhs1, &s1) != scaled(&rhs1, &s1) {
                    d1 = Verdict::fail(label());
                }
                if d2.holds && scaled(&lhs2, &s2) != scaled(&rhs2, &s2) {
                    d2 = Verdict::fail(label());
                }
                if eps.holds && &both * &(&c1 * &c2).pow(-(r as i64))? != alg.counit_word(&w) {
                    eps = Verdict::fail(label());
                }
            }
        }
    }
    report.delta_phi1 = Some(d1);
    report.delta_phi2 = Some(d2);
    report.counit = Some(eps);
    Ok(report)
}

/// The closed formula for `σ` attached to a twisting pair:
/// `σ(x_{i₁j₁}⋯ g^{-r}, x_{u₁v₁}⋯ g^{-t}) =
/// (-1)^{m t l(τ)} Π δ_{i j} Π (α^{-m})_{u v} |α|^{m t}` with
/// `m = (number of letters of the first argument) - n r`.
#[derive(Clone, Debug)]
pub struct CocycleFunctional {
    n: usize,
    alpha: Matrix,
    det: FieldElement,
    tau_length: usize,
}

impl CocycleFunctional {
    pub fn new(spec: &TwistingPairSpec, q: &FieldElement) -> Self {
        CocycleFunctional { n: spec.n(), alpha: spec.alpha.clone(), det: spec.det.clone(), tau_length: spec.tau_length(q) }
    }

    pub fn eval(&self, h: &Word, r: usize, l: &Word, t: usize) -> Result<FieldElement> {
        let n = self.n;
        if h.letters().any(|g| g / n != g % n) {
            return Ok(FieldElement::zero());
        }
        let m = h.len() as i64 - (n * r) as i64;
        let a = self.alpha.pow(-m)?;
        let mut v = self.det.pow(m * t as i64)?;
        if (m.unsigned_abs() as usize * t * self.tau_length) % 2 == 1 {
            v = -v;
        }
        for g in l.letters() {
            v = &v * a.get(g / n, g % n);
        }
        Ok(v)
    }
}

pub fn cocycle_eval(cf: &CocycleFunctional, h: &Word, r: usize, l: &Word, t: usize) -> Result<FieldElement> {
    cf.eval(h, r, l, t)
}

/// Values of `σ^{-1}` on pairs `(p g^{-r}, p' g^{-t})` of normal words,
/// found by solving `σ ∗ σ^{-1} = ε ⊗ ε` block by block.
#[derive(Clone, Debug)]
pub struct ConvolutionInverse {
    /// `(deg p, r, deg p', t)` → values at `p · dim + p'`.
    blocks: BTreeMap<(usize, usize, usize, usize), Vec<FieldElement>>,
}

/// `Δ` of every normal word of degree `d` as `(p1, p2, coefficient)`.
fn delta_table(alg: &QuantumMatrixAlgebra, d: usize) -> Vec<Vec<(usize, usize, FieldElement)>> {
    let dim = alg.dim(d);
    alg.model
        .normal_words(d)
        .iter()
        .map(|w| alg.delta_word(w).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k / dim, k % dim, c)).collect())
        .collect()
}

/// Solves for `σ^{-1}` on all pairs with `deg p + deg p' ≤ max_total` and
/// `r, t ≤ max_power`. A singular block means `σ` has no inverse there.
pub fn convolution_inverse(alg: &QuantumMatrixAlgebra, cf: &CocycleFunctional, max_total: usize, max_power: usize) -> Result<ConvolutionInverse> {
    if max_total > alg.max_degree() {
        return Err(Error::DegreeOutOfRange { degree: max_total, max: alg.max_degree() });
    }
    let deltas: Vec<_> = (0..=max_total).map(|d| delta_table(alg, d)).collect();
    let words: Vec<_> = (0..=max_total).map(|d| alg.model.normal_words(d)).collect();
    let mut blocks = BTreeMap::new();
    for a in 0..=max_total {
        for b in 0..=max_total - a {
            for r in 0..=max_power {
                for t in 0..=max_power {
                    let (da, db) = (alg.dim(a), alg.dim(b));
                    let mut sigma = vec![FieldElement::zero(); da * db];
                    for (p, wp) in words[a].iter().enumerate() {
                        for (p2, wq) in words[b].iter().enumerate() {
                            sigma[p * db + p2] = cf.eval(wp, r, wq, t)?;
                        }
                    }
                    let mut m = Matrix::zeros(da * db, da * db);
                    let mut rhs = Matrix::zeros(da * db, 1);
                    for (p, dp) in deltas[a].iter().enumerate() {
                        for (p2, dq) in deltas[b].iter().enumerate() {
                            let row = p * db + p2;
                            for (x1, x2, c) in dp {
                                for (y1, y2, e) in dq {
                                    let s = &sigma[x1 * db + y1];
                                    if !s.is_zero() {
                                        let col = x2 * db + y2;
                                        let v = m.get(row, col) + &(&(c * e) * s);
                                        m.set(row, col, v);
                                    }
                                }
                            }
                            let eps = &alg.counit_word(&words[a][p]) * &alg.counit_word(&words[b][p2]);
                            rhs.set(row, 0, eps);
                        }
                    }
                    let sol = m
                        .solve(&rhs)
                        .map_err(|_| Error::ConvolutionInverseNotFound(format!("degrees ({a}, {b}), g-powers ({r}, {t})")))?;
                    blocks.insert((a, r, b, t), sol.column(0));
                }
            }
        }
    }
    Ok(ConvolutionInverse { blocks })
}

impl ConvolutionInverse {
    /// `σ^{-1}(h g^{-r}, l g^{-t})` for arbitrary words, through their normal
    /// forms.
    pub fn eval(&self, alg: &QuantumMatrixAlgebra, h: &Word, r: usize, l: &Word, t: usize) -> Result<FieldElement> {
        let (a, b) = (h.len(), l.len());
        let block = self
            .blocks
            .get(&(a, r, b, t))
            .ok_or_else(|| Error::ConvolutionInverseNotFound(format!("no block for degrees ({a}, {b}), g-powers ({r}, {t})")))?;
        let db = alg.dim(b);
        let mut v = FieldElement::zero();
        for (p, x) in alg.word_sparse(h) {
            for (p2, y) in alg.word_sparse(l) {
                v = &v + &(&(&x * &y) * &block[p * db + p2]);
            }
        }
        Ok(v)
    }

    /// `σ^{-1} ∗ σ = ε ⊗ ε` on every solved block.
    pub fn check_other_side(&self, alg: &QuantumMatrixAlgebra, cf: &CocycleFunctional) -> Result<Verdict> {
        let mut deltas = BTreeMap::new();
        for &(a, r, b, t) in self.blocks.keys() {
            for d in [a, b] {
                deltas.entry(d).or_insert_with(|| delta_table(alg, d));
            }
            let (wa, wb) = (alg.model.normal_words(a), alg.model.normal_words(b));
            let block = &self.blocks[&(a, r, b, t)];
            let db = alg.dim(b);
            for (p, dp) in deltas[&a].iter().enumerate() {
                for (p2, dq) in deltas[&b].iter().enumerate() {
                    let mut v = FieldElement::zero();
                    for (x1, x2, c) in dp {
                        for (y1, y2, e) in dq {
                            let inv = &block[x1 * db + y1];
                            if !inv.is_zero() {
                                v = &v + &(&(&(c * e) * inv) * &cf.eval(&wa[*x2], r, &wb[*y2], t)?);
                            }
                        }
                    }
                    if v != &alg.counit_word(&wa[p]) * &alg.counit_word(&wb[p2]) {
                        let text = alg.model.alphabet();
                        return Ok(Verdict::fail(format!("({} g^-{r}, {} g^-{t})", text.word_text(&wa[p]), text.word_text(&wb[p2]))));
                    }
                }
            }
        }
        Ok(Verdict::pass())
    }
}

/// Placement of `σ` and `σ^{-1}` in the cocycle-twisted product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleOrdering {
    /// `h ·_σ l = Σ σ(h₁, l₁) h₂ l₂ σ^{-1}(h₃, l₃)`.
    SigmaFirst,
    /// `h ·_σ l = Σ σ^{-1}(h₁, l₁) h₂ l₂ σ(h₃, l₃)`.
    InverseFirst,
}

/// The cocycle-twisted product of `h g^{-r}` and `l g^{-t}`.
pub fn cocycle_product(
    alg: &QuantumMatrixAlgebra,
    cf: &CocycleFunctional,
    inv: &ConvolutionInverse,
    ordering: CocycleOrdering,
    (h, r): (&Word, usize),
    (l, t): (&Word, usize),
) -> Result<LocalizedElement> {
    let mut inv_cache: BTreeMap<(Word, Word), FieldElement> = BTreeMap::new();
    let mut inv_at = |a: &Word, b: &Word| -> Result<FieldElement> {
        if let Some(v) = inv_cache.get(&(a.clone(), b.clone())) {
            return Ok(v.clone());
        }
        let v = inv.eval(alg, a, r, b, t)?;
        inv_cache.insert((a.clone(), b.clone()), v.clone());
        Ok(v)
    };
    let mut out = NcPoly::zero();
    let ls = alg.split_word(l, 3);
    for hs in alg.split_word(h, 3) {
        for lsplit in &ls {
            let coef = match ordering {
                CocycleOrdering::SigmaFirst => {
                    let s = cf.eval(&hs[0], r, &lsplit[0], t)?;
                    if s.is_zero() {
                        continue;
                    }
                    &s * &inv_at(&hs[2], &lsplit[2])?
                }
                CocycleOrdering::InverseFirst => {
                    let s = cf.eval(&hs[2], r, &lsplit[2], t)?;
                    if s.is_zero() {
                        continue;
                    }
                    &inv_at(&hs[0], &lsplit[0])? * &s
                }
            };
            if !coef.is_zero() {
                out.add_term(hs[1].concat(&lsplit[1]), coef);
            }
        }
    }
    Ok(LocalizedElement::new(out, r + t))
}

/// `h ∗ l = h φ^{e |h|}(l)` for `h = w g^{-r}`, `l = w' g^{-t}`, where `φ`
/// scales `g` by `c`.
pub fn zhang_product(
    alg: &QuantumMatrixAlgebra,
    phi: &GradedGeneratorMap,
    c: &FieldElement,
    exponent: i64,
    (h, r): (&Word, usize),
    (l, t): (&Word, usize),
) -> Result<LocalizedElement> {
    let deg = h.len() as i64 - (alg.n * r) as i64;
    let e = exponent * deg;
    let image = phi.pow(e)?.apply(&NcPoly::word(l.clone())).scale(&c.pow(-e * t as i64)?);
    Ok(LocalizedElement::new(NcPoly::word(h.clone()).mul(&image), r + t))
}

/// Parameters of [`cocycle_vs_zhang_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZhangEqOptions {
    /// Bound on `deg w + deg w'` for the pairs `(w g^{-r}, w' g^{-t})`.
    pub max_total: usize,
    pub max_power: usize,
    pub ordering: CocycleOrdering,
    /// Compare with the right Zhang twist by `(φ₁φ₂)^exponent`.
    pub exponent: i64,
}

impl ZhangEqOptions {
    pub fn new(max_total: usize, max_power: usize) -> Self {
        ZhangEqOptions { max_total, max_power, ordering: CocycleOrdering::SigmaFirst, exponent: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZhangEqReport {
    pub pairs: usize,
    /// Up to five failing pairs.
    pub failures: Vec<String>,
    pub failure_count: usize,
    /// `σ^{-1} ∗ σ = ε ⊗ ε` on the solved window.
    pub inverse_other_side: Verdict,
}

impl ZhangEqReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.inverse_other_side.holds
    }
}

/// Compares the cocycle-twisted product with the right Zhang twist by
/// `φ₁φ₂` on all pairs of normal monomials in the window.
pub fn cocycle_vs_zhang_check(alg: &QuantumMatrixAlgebra, spec: &TwistingPairSpec, opts: ZhangEqOptions) -> Result<ZhangEqReport> {
    let (phi1, phi2) = (spec.phi1(alg)?, spec.phi2(alg)?);
    for (name, phi) in [("phi1", &phi1), ("phi2", &phi2)] {
        let v = check_algebra_map(phi, &alg.model)?;
        if !v.holds {
            return Err(Error::NotAutomorphism(format!("{name} does not preserve {}", v.witness.unwrap_or_default())));
        }
    }
    let phi = phi1.compose(&phi2)?;
    let c = alg.multiple_of_g(&phi.apply(&alg.g))?.ok_or_else(|| Error::NotAutomorphism("phi1 phi2 (g) is not a multiple of g".into()))?;
    let cf = CocycleFunctional::new(spec, &alg.q);
    let inv = convolution_inverse(alg, &cf, opts.max_total, opts.max_power)?;
    let inverse_other_side = inv.check_other_side(alg, &cf)?;
    let words: Vec<_> = (0..=opts.max_total).map(|d| alg.model.normal_words(d)).collect();
    let text = alg.model.alphabet();
    let mut report = ZhangEqReport { pairs: 0, failures: Vec::new(), failure_count: 0, inverse_other_side };
    for a in 0..=opts.max_total {
        for b in 0..=opts.max_total - a {
            for h in &words[a] {
                for l in &words[b] {
                    for r in 0..=opts.max_power {
                        for t in 0..=opts.max_power {
                            report.pairs += 1;
                            let twisted = cocycle_product(alg, &cf, &inv, opts.ordering, (h, r), (l, t))?;
                            let zhang = zhang_product(alg, &phi, &c, opts.exponent, (h, r), (l, t))?;
                            if !twisted.same_as(&zhang, alg)? {
                                report.failure_count += 1;
                                if report.failures.len() < 5 {
                                    report.failures.push(format!("h = {} g^-{r}, l = {} g^-{t}", text.word_text(h), text.word_text(l)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
