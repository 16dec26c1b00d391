//! Twisting maps `τ: B ⊗ A → A ⊗ B` between connected graded algebras and
//! the twisted tensor products they define.
//!
//! A twisting map is stored per total degree `N` as a matrix from
//! `⊕_j B_j ⊗ A_{N-j}` to `⊕_i A_i ⊗ B_{N-i}`. On the `A ⊗ B` side the blocks
//! run with the `A`-degree descending, so in degree 1 the generators of `A`
//! come before those of `B`.

mod fd;
mod triple;

pub use fd::*;
pub use triple::*;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, NcPoly, Word};
use crate::linalg::{dense_axpy, Matrix};
use crate::presentation::GradedPresentation;
use crate::scalars::{FieldElement, ParamSpace};
use crate::text::join;
use crate::truncated::{GradedAlgebra, TruncatedAlgebraModel};

/// `(i, ia, j, jb)`: the tensor of basis vector `ia` of `A_i` with basis
/// vector `jb` of `B_j`.
pub type Key = (usize, usize, usize, usize);

/// Basis bookkeeping for `A ⊗ B` and `B ⊗ A` in each total degree.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    a: Vec<usize>,
    b: Vec<usize>,
    ab: Vec<Vec<Key>>,
    ab_off: Vec<BTreeMap<usize, usize>>,
    ba: Vec<Vec<Key>>,
    ba_off: Vec<BTreeMap<usize, usize>>,
}

impl Layout {
    pub(crate) fn new(a: Vec<usize>, b: Vec<usize>) -> Self {
        let d = a.len().min(b.len()) - 1;
        let mut layout = Layout { a, b, ab: Vec::new(), ab_off: Vec::new(), ba: Vec::new(), ba_off: Vec::new() };
        for n in 0..=d {
            let (mut keys, mut off) = (Vec::new(), BTreeMap::new());
            for i in (0..=n).rev() {
                off.insert(i, keys.len());
                for ia in 0..layout.a[i] {
                    for jb in 0..layout.b[n - i] {
                        keys.push((i, ia, n - i, jb));
                    }
                }
            }
            layout.ab.push(keys);
            layout.ab_off.push(off);
            let (mut keys, mut off) = (Vec::new(), BTreeMap::new());
            for j in 0..=n {
                off.insert(j, keys.len());
                for jb in 0..layout.b[j] {
                    for ia in 0..layout.a[n - j] {
                        keys.push((n - j, ia, j, jb));
                    }
                }
            }
            layout.ba.push(keys);
            layout.ba_off.push(off);
        }
        layout
    }

    pub(crate) fn max_degree(&self) -> usize {
        self.ab.len() - 1
    }

    pub(crate) fn total(&self, n: usize) -> usize {
        self.ab[n].len()
    }

    pub(crate) fn ab_keys(&self, n: usize) -> &[Key] {
        &self.ab[n]
    }

    pub(crate) fn ba_keys(&self, n: usize) -> &[Key] {
        &self.ba[n]
    }

    pub(crate) fn ab_index(&self, (i, ia, j, jb): Key) -> usize {
        self.ab_off[i + j][&i] + ia * self.b[j] + jb
    }

    pub(crate) fn ba_index(&self, (i, ia, j, jb): Key) -> usize {
        self.ba_off[i + j][&j] + jb * self.a[i] + ia
    }

    /// `coef · (x ⊗ y)` added into `out`, with `x ∈ A_i`, `y ∈ B_j`.
    pub(crate) fn add_tensor(&self, out: &mut [FieldElement], coef: &FieldElement, i: usize, x: &[FieldElement], j: usize, y: &[FieldElement]) {
        for (ia, u) in x.iter().enumerate().filter(|(_, u)| !u.is_zero()) {
            let cu = coef * u;
            for (jb, v) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let k = self.ab_index((i, ia, j, jb));
                out[k] = &out[k] + &(&cu * v);
            }
        }
    }
}

fn unit(n: usize, i: usize) -> Vec<FieldElement> {
    let mut v = vec![FieldElement::zero(); n];
    v[i] = FieldElement::one();
    v
}

fn nonzero(v: &[FieldElement]) -> impl Iterator<Item = (usize, &FieldElement)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero())
}

/// Position of a normal word in the normal basis of its degree.
fn normal_index(model: &TruncatedAlgebraModel, d: usize, w: &Word) -> usize {
    model.word_coords(d, w).iter().position(FieldElement::is_one).expect("word is normal")
}

fn words_text(alphabet: &Alphabet, w: &Word) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        alphabet.word_text(w)
    }
}

/// The datum a twisting map is extended from.
/// Images `c · u ⊗ v` of `y ⊗ x`, keyed by `(y, x)`.
pub type GeneratorImages = BTreeMap<(usize, usize), Vec<(FieldElement, Word, Word)>>;

#[derive(Clone, Debug, PartialEq)]
pub enum TwistKind {
    /// `τ(b ⊗ a) = a ⊗ b`.
    Transposition,
    /// `τ(b ⊗ a) = λ^{|a||b|} a ⊗ b`.
    Bicharacter(FieldElement),
    /// Images of `y ⊗ x` for generators `y` of `B` and `x` of `A`, keyed by
    /// `(y, x)`, as sums `c · u ⊗ v` with `|u| + |v| = 2`. Missing pairs map
    /// to zero.
    LinearGenerator(GeneratorImages),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistingMapSpec {
    pub kind: TwistKind,
    pub params: ParamSpace,
}

impl TwistingMapSpec {
    pub fn transposition() -> Self {
        TwistingMapSpec { kind: TwistKind::Transposition, params: ParamSpace::new() }
    }

    pub fn bicharacter(lambda: FieldElement, params: ParamSpace) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::NotBijective("bicharacter value 0".into()));
        }
        Ok(TwistingMapSpec { kind: TwistKind::Bicharacter(lambda), params })
    }

    pub fn linear_generator(images: GeneratorImages, params: ParamSpace) -> Result<Self> {
        for terms in images.values() {
            if let Some((_, u, v)) = terms.iter().find(|(_, u, v)| u.len() + v.len() != 2) {
                return Err(Error::InhomogeneousRelation(format!("image term of degrees ({}, {})", u.len(), v.len())));
            }
        }
        Ok(TwistingMapSpec { kind: TwistKind::LinearGenerator(images), params })
    }

    /// Parses images written as `u (x) v` sums, one `(y, x, text)` per
    /// generator pair, for instance `("y", "x", "x^2 (x) 1 - x (x) y")`.
    pub fn parse_linear(a: &Alphabet, b: &Alphabet, params: &ParamSpace, images: &[(&str, &str, &str)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(y, x, text) in images {
            let yi = b.index_of(y).ok_or_else(|| Error::Syntax { offset: 0, message: format!("unknown generator {y}") })?;
            let xi = a.index_of(x).ok_or_else(|| Error::Syntax { offset: 0, message: format!("unknown generator {x}") })?;
            map.insert((yi, xi), parse_tensor(text, a, b, params)?);
        }
        Self::linear_generator(map, params.clone())
    }

    /// Whether every generator image lies in `A_1 ⊗ B_1`.
    pub fn is_strongly_graded(&self) -> bool {
        match &self.kind {
            TwistKind::LinearGenerator(images) => images.values().flatten().all(|(_, u, v)| u.len() == 1 && v.len() == 1),
            _ => true,
        }
    }
}

/// Parses `c * u (x) v + ...` into terms `(c, u, v)`. The two alphabets must
/// use distinct names.
pub fn parse_tensor(text: &str, a: &Alphabet, b: &Alphabet, params: &ParamSpace) -> Result<Vec<(FieldElement, Word, Word)>> {
    const MARK: &str = "__tensor";
    let names = a.names().iter().chain(b.names()).cloned().chain([MARK.to_string()]);
    let joint = Alphabet::linear(names)?;
    let marker = (a.len() + b.len()) as u16;
    let p = crate::text::parse_nc(&text.replace("(x)", &format!("*{MARK}*")), &joint, params)?;
    let mut out = Vec::new();
    for (w, c) in p.terms() {
        let at = w.0.iter().position(|&g| g == marker);
        let bad = || Error::Syntax { offset: 0, message: format!("term without a single tensor sign in {text}") };
        let at = at.ok_or_else(bad)?;
        let (left, right) = (&w.0[..at], &w.0[at + 1..]);
        if left.iter().any(|&g| g as usize >= a.len()) || right.iter().any(|&g| (g as usize) < a.len() || g == marker) {
            return Err(bad());
        }
        let right = right.iter().map(|&g| g - a.len() as u16).collect();
        out.push((c.clone(), Word(left.to_vec()), Word(right)));
    }
    Ok(out)
}

/// A twisting map known on all bidegrees of total degree at most `D`.
#[derive(Clone, Debug)]
pub struct ExtendedTwist {
    a: TruncatedAlgebraModel,
    b: TruncatedAlgebraModel,
    params: ParamSpace,
    layout: Layout,
    /// Per total degree, `A ⊗ B` rows by `B ⊗ A` columns.
    maps: Vec<Matrix>,
    origin: String,
}

impl ExtendedTwist {
    /// Unit columns filled in, everything else zero.
    fn skeleton(a: &TruncatedAlgebraModel, b: &TruncatedAlgebraModel, params: ParamSpace, max_degree: usize, origin: String) -> Result<Self> {
        for m in [a, b] {
            if m.max_degree() < max_degree {
                return Err(Error::DegreeOutOfRange { degree: max_degree, max: m.max_degree() });
            }
            m.presentation().require_degree_one()?;
        }
        let layout = Layout::new((0..=max_degree).map(|d| a.dim(d)).collect(), (0..=max_degree).map(|d| b.dim(d)).collect());
        let maps = (0..=max_degree).map(|n| Matrix::zeros(layout.total(n), layout.total(n))).collect();
        let mut ext = ExtendedTwist { a: a.clone(), b: b.clone(), params, layout, maps, origin };
        for n in 0..=max_degree {
            let units: Vec<Key> = ext.layout.ba_keys(n).iter().copied().filter(|&(i, _, j, _)| i == 0 || j == 0).collect();
            for key in units {
                let col = ext.layout.ba_index(key);
                let row = ext.layout.ab_index(key);
                ext.maps[n].set(row, col, FieldElement::one());
            }
        }
        Ok(ext)
    }

    /// A twisting map given directly on pairs of normal words of positive
    /// degree; `f(b, a)` returns `τ(b ⊗ a)` as terms `(c, u, v)`.
    pub fn from_images(
        a: &TruncatedAlgebraModel,
        b: &TruncatedAlgebraModel,
        params: ParamSpace,
        max_degree: usize,
        origin: &str,
        mut f: impl FnMut(&Word, &Word) -> Vec<(FieldElement, Word, Word)>,
    ) -> Result<Self> {
        let mut ext = Self::skeleton(a, b, params, max_degree, origin.to_string())?;
        for n in 2..=max_degree {
            for key in ext.layout.ba_keys(n).to_vec() {
                let (i, ia, j, jb) = key;
                if i == 0 || j == 0 {
                    continue;
                }
                let image = f(ext.b.normal_word(j, jb), ext.a.normal_word(i, ia));
                let v = ext.terms_vector(n, &image)?;
                ext.set_image(key, &v);
            }
        }
        ext.check_bijective()?;
        Ok(ext)
    }

    pub fn a(&self) -> &TruncatedAlgebraModel {
        &self.a
    }

    pub fn b(&self) -> &TruncatedAlgebraModel {
        &self.b
    }

    pub fn params(&self) -> &ParamSpace {
        &self.params
    }

    pub fn max_degree(&self) -> usize {
        self.layout.max_degree()
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Dimension of `(A ⊗ B)_n`.
    pub fn total_dim(&self, n: usize) -> usize {
        self.layout.total(n)
    }

    /// Matrix of `τ` in total degree `n`.
    pub fn matrix(&self, n: usize) -> &Matrix {
        &self.maps[n]
    }

    /// The restriction `B_j ⊗ A_i → (A ⊗ B)_{i+j}`.
    pub fn block(&self, j: usize, i: usize) -> Matrix {
        let n = i + j;
        let cols: Vec<Vec<FieldElement>> = (0..self.b.dim(j))
            .flat_map(|jb| (0..self.a.dim(i)).map(move |ia| (i, ia, j, jb)))
            .map(|key| self.image(key))
            .collect();
        Matrix::from_columns(&cols, self.layout.total(n))
    }

    /// `τ(b ⊗ a)` for basis vectors `a = (i, ia)`, `b = (j, jb)`.
    pub fn image(&self, key: Key) -> Vec<FieldElement> {
        self.maps[key.0 + key.2].column(self.layout.ba_index(key))
    }

    fn set_image(&mut self, key: Key, v: &[FieldElement]) {
        let col = self.layout.ba_index(key);
        let m = &mut self.maps[key.0 + key.2];
        for (r, x) in v.iter().enumerate() {
            m.set(r, col, x.clone());
        }
    }

    /// Coordinates of `Σ c · u ⊗ v` in `(A ⊗ B)_n`.
    fn terms_vector(&self, n: usize, terms: &[(FieldElement, Word, Word)]) -> Result<Vec<FieldElement>> {
        let mut out = vec![FieldElement::zero(); self.layout.total(n)];
        for (c, u, v) in terms {
            let (i, j) = (self.a.alphabet().word_degree(u), self.b.alphabet().word_degree(v));
            if i + j != n {
                return Err(Error::InhomogeneousRelation(format!("tensor term of degree {} in degree {n}", i + j)));
            }
            for (w, alph) in [(u, self.a.alphabet()), (v, self.b.alphabet())] {
                if let Some(g) = w.letters().find(|&g| g >= alph.len()) {
                    return Err(Error::AlphabetMismatch(g));
                }
            }
            self.layout.add_tensor(&mut out, c, i, &self.a.word_coords(i, u), j, &self.b.word_coords(j, v));
        }
        Ok(out)
    }

    /// Readable form of an element of `(A ⊗ B)_n`.
    pub fn tensor_text(&self, n: usize, v: &[FieldElement]) -> String {
        let terms: Vec<String> = nonzero(v)
            .map(|(k, c)| {
                let (i, ia, j, jb) = self.layout.ab_keys(n)[k];
                let u = words_text(self.a.alphabet(), self.a.normal_word(i, ia));
                let w = words_text(self.b.alphabet(), self.b.normal_word(j, jb));
                let c = c.to_text(&self.params);
                let c = if c.contains(['+', ' ']) || c.starts_with('-') && c[1..].contains(['+', '-']) { format!("({c})") } else { c };
                match c.as_str() {
                    "1" => format!("{u} (x) {w}"),
                    "-1" => format!("-{u} (x) {w}"),
                    _ => format!("{c}*{u} (x) {w}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            join(terms, " + ")
        }
    }

    /// Label of a `B ⊗ A` basis tensor.
    pub fn key_text(&self, (i, ia, j, jb): Key) -> String {
        format!(
            "{} (x) {}",
            words_text(self.b.alphabet(), self.b.normal_word(j, jb)),
            words_text(self.a.alphabet(), self.a.normal_word(i, ia))
        )
    }

    /// Whether `τ(B_j ⊗ A_i) ⊆ A_i ⊗ B_j` in every degree.
    pub fn is_strongly_graded(&self) -> bool {
        (0..=self.max_degree()).all(|n| {
            self.layout.ba_keys(n).iter().all(|&key| {
                let v = self.image(key);
                let ok = nonzero(&v).all(|(k, _)| {
                    let (i, _, j, _) = self.layout.ab_keys(n)[k];
                    i == key.0 && j == key.2
                });
                ok
            })
        })
    }

    /// Product in the twisted tensor product of `x ∈ (A ⊗ B)_{n1}` and
    /// `y ∈ (A ⊗ B)_{n2}`: `(a ⊗ b)(a' ⊗ b') = a τ(b ⊗ a') b'`.
    pub fn multiply(&self, n1: usize, x: &[FieldElement], n2: usize, y: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::zero(); self.layout.total(n1 + n2)];
        for (k1, c1) in nonzero(x) {
            let (i, ia, j, jb) = self.layout.ab_keys(n1)[k1];
            for (k2, c2) in nonzero(y) {
                let (i2, ia2, j2, jb2) = self.layout.ab_keys(n2)[k2];
                let t = self.image((i2, ia2, j, jb));
                let c12 = c1 * c2;
                for (k3, c3) in nonzero(&t) {
                    let (i3, ia3, j3, jb3) = self.layout.ab_keys(j + i2)[k3];
                    let pa = self.a.mul_basis(i, ia, i3, ia3);
                    let pb = self.b.mul_basis(j3, jb3, j2, jb2);
                    self.layout.add_tensor(&mut out, &(&c12 * c3), i + i3, &pa, j3 + j2, &pb);
                }
            }
        }
        out
    }

    /// Value of `τ(y ⊗ x·a'')` through the `∇_A` identity, with `y` a
    /// generator of `B`, `x` a generator of `A` and `a''` basis vector `ra`
    /// of `A_{n-2}`. Terms that need `τ` on `B_2 ⊗ A_{n-2}` are returned as
    /// references when `defer` is set.
    fn via_first_letter(&self, n: usize, y: usize, x: usize, ra: usize, defer: bool) -> (Vec<FieldElement>, Vec<(Key, FieldElement)>) {
        let r = n - 2;
        let mut out = vec![FieldElement::zero(); self.layout.total(n)];
        let mut refs = Vec::new();
        let t = self.image((1, x, 1, y));
        for (k, c) in nonzero(&t) {
            let (i1, a1, j1, b1) = self.layout.ab_keys(2)[k];
            match j1 {
                0 => {
                    let pa = self.a.mul_basis(2, a1, r, ra);
                    self.layout.add_tensor(&mut out, c, n, &pa, 0, &[FieldElement::one()]);
                }
                1 => {
                    let s = self.image((r, ra, 1, b1));
                    for (k3, e) in nonzero(&s) {
                        let (i2, a2, j2, b2) = self.layout.ab_keys(r + 1)[k3];
                        let pa = self.a.mul_basis(i1, a1, i2, a2);
                        self.layout.add_tensor(&mut out, &(c * e), i1 + i2, &pa, j2, &unit(self.b.dim(j2), b2));
                    }
                }
                _ => {
                    let key = (r, ra, 2, b1);
                    if defer {
                        refs.push((key, c.clone()));
                    } else {
                        dense_axpy(&mut out, c, &self.image(key));
                    }
                }
            }
        }
        (out, refs)
    }

    /// Value of `τ(b''·y ⊗ a)` through the `∇_B` identity, with `b''` basis
    /// vector `pb` of `B_{j-1}`, `y` a generator of `B` and `a = (i, ia)`.
    fn via_last_letter(&self, j: usize, pb: usize, y: usize, i: usize, ia: usize, defer: bool) -> (Vec<FieldElement>, Vec<(Key, FieldElement)>) {
        let n = i + j;
        let mut out = vec![FieldElement::zero(); self.layout.total(n)];
        let mut refs = Vec::new();
        let t = self.image((i, ia, 1, y));
        for (k, c) in nonzero(&t) {
            let (i1, a1, l, b1) = self.layout.ab_keys(i + 1)[k];
            if l == 0 {
                let key = (i1, a1, j - 1, pb);
                if defer {
                    refs.push((key, c.clone()));
                } else {
                    dense_axpy(&mut out, c, &self.image(key));
                }
                continue;
            }
            let s = self.image((i1, a1, j - 1, pb));
            for (k3, e) in nonzero(&s) {
                let (i2, a2, j2, b2) = self.layout.ab_keys(n - l)[k3];
                let pbv = self.b.mul_basis(j2, b2, l, b1);
                self.layout.add_tensor(&mut out, &(c * e), i2, &unit(self.a.dim(i2), a2), j2 + l, &pbv);
            }
        }
        (out, refs)
    }

    /// Solves for `τ` on all bidegrees `(j, i)`, `i, j ≥ 1`, of total degree `n`.
    fn extend_degree(&mut self, n: usize) -> Result<()> {
        let unknowns: Vec<Key> = self.layout.ba_keys(n).iter().copied().filter(|&(i, _, j, _)| i > 0 && j > 0).collect();
        let pos: BTreeMap<Key, usize> = unknowns.iter().enumerate().map(|(u, &k)| (k, u)).collect();
        let width = self.layout.total(n);
        let mut known = Vec::with_capacity(unknowns.len());
        let mut coupling = Vec::new();
        for (u, &(i, ia, j, jb)) in unknowns.iter().enumerate() {
            let (v, refs) = if j == 1 {
                let (x, rest) = self.a.normal_word(i, ia).split_first().expect("positive degree");
                let ra = normal_index(&self.a, i - 1, &rest);
                self.via_first_letter(n, jb, x, ra, true)
            } else {
                let (prefix, y) = self.b.normal_word(j, jb).split_last().expect("positive degree");
                let pb = normal_index(&self.b, j - 1, &prefix);
                self.via_last_letter(j, pb, y, i, ia, true)
            };
            known.push(v);
            coupling.extend(refs.into_iter().map(|(key, c)| (u, pos[&key], c)));
        }
        let solution = if coupling.is_empty() {
            known
        } else {
            // (I - C) X = K
            let m = unknowns.len();
            let mut aug = Matrix::zeros(m, m + width);
            for (u, row) in known.iter().enumerate().take(m) {
                aug.set(u, u, FieldElement::one());
                for (c, x) in row.iter().enumerate() {
                    aug.set(u, m + c, x.clone());
                }
            }
            for (u, v, c) in coupling {
                aug.set(u, v, aug.get(u, v) - &c);
            }
            let (r, pivots) = aug.rref();
            if pivots.iter().any(|&p| p >= m) {
                return Err(Error::IllDefinedOverRelations { degree: n, witness: "the multiplication identities admit no solution".into() });
            }
            if pivots.len() < m {
                return Err(Error::ExtensionNotUnique(n));
            }
            (0..m).map(|u| (0..width).map(|c| r.get(u, m + c).clone()).collect()).collect()
        };
        for (key, v) in unknowns.iter().zip(&solution) {
            self.set_image(*key, v);
        }
        self.check_well_defined(n)
    }

    /// The identities used to define degree `n` must also hold on products
    /// that are not normal words; otherwise `τ` does not descend to the
    /// quotients.
    fn check_well_defined(&self, n: usize) -> Result<()> {
        let (na, nb) = (self.a.alphabet().len(), self.b.alphabet().len());
        let r = n - 2;
        for x in 0..na {
            for ra in 0..self.a.dim(r) {
                let w = Word::letter(x).concat(self.a.normal_word(r, ra));
                let coords = self.a.word_coords(r + 1, &w);
                if coords.iter().filter(|c| !c.is_zero()).count() == 1 && coords.iter().any(FieldElement::is_one) {
                    continue;
                }
                for y in 0..nb {
                    let mut lhs = vec![FieldElement::zero(); self.layout.total(n)];
                    for (ia, c) in nonzero(&coords) {
                        dense_axpy(&mut lhs, c, &self.image((r + 1, ia, 1, y)));
                    }
                    if lhs != self.via_first_letter(n, y, x, ra, false).0 {
                        let witness = format!("{} (x) {}", self.b.alphabet().name(y), self.a.alphabet().word_text(&w));
                        return Err(Error::IllDefinedOverRelations { degree: n, witness });
                    }
                }
            }
        }
        for j in 2..n {
            let i = n - j;
            for pb in 0..self.b.dim(j - 1) {
                for y in 0..nb {
                    let w = self.b.normal_word(j - 1, pb).concat(&Word::letter(y));
                    let coords = self.b.word_coords(j, &w);
                    if coords.iter().filter(|c| !c.is_zero()).count() == 1 && coords.iter().any(FieldElement::is_one) {
                        continue;
                    }
                    for ia in 0..self.a.dim(i) {
                        let mut lhs = vec![FieldElement::zero(); self.layout.total(n)];
                        for (jb, c) in nonzero(&coords) {
                            dense_axpy(&mut lhs, c, &self.image((i, ia, j, jb)));
                        }
                        if lhs != self.via_last_letter(j, pb, y, i, ia, false).0 {
                            let witness = format!("{} (x) {}", self.b.alphabet().word_text(&w), words_text(self.a.alphabet(), self.a.normal_word(i, ia)));
                            return Err(Error::IllDefinedOverRelations { degree: n, witness });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_bijective(&self) -> Result<()> {
        for n in 0..=self.max_degree() {
            if self.maps[n].rank() == self.layout.total(n) {
                continue;
            }
            if self.is_strongly_graded() {
                for j in 0..=n {
                    let block = self.block(j, n - j);
                    if block.rank() < self.a.dim(n - j) * self.b.dim(j) {
                        return Err(Error::NotBijective(format!("bidegree ({j}, {})", n - j)));
                    }
                }
            }
            return Err(Error::NotBijective(format!("total degree {n}")));
        }
        Ok(())
    }
}

/// Extends generator-level data to a twisting map on all bidegrees of total
/// degree at most `max_degree`, solving the multiplication identities degree
/// by degree.
pub fn extend_twisting_map(spec: &TwistingMapSpec, a: &TruncatedAlgebraModel, b: &TruncatedAlgebraModel, max_degree: usize) -> Result<ExtendedTwist> {
    let params = a.params().merge(b.params())?.merge(&spec.params)?;
    let origin = match &spec.kind {
        TwistKind::Transposition => "transposition".to_string(),
        TwistKind::Bicharacter(l) => format!("bicharacter {}", l.to_text(&params)),
        TwistKind::LinearGenerator(_) => "generator images".to_string(),
    };
    let mut ext = ExtendedTwist::skeleton(a, b, params, max_degree, origin)?;
    if max_degree < 2 {
        return Ok(ext);
    }
    let (na, nb) = (a.alphabet().len(), b.alphabet().len());
    for y in 0..nb {
        for x in 0..na {
            let key = (1, x, 1, y);
            let terms = match &spec.kind {
                TwistKind::Transposition => vec![(FieldElement::one(), Word::letter(x), Word::letter(y))],
                TwistKind::Bicharacter(l) => vec![(l.clone(), Word::letter(x), Word::letter(y))],
                TwistKind::LinearGenerator(images) => images.get(&(y, x)).cloned().unwrap_or_default(),
            };
            let v = ext.terms_vector(2, &terms)?;
            ext.set_image(key, &v);
        }
    }
    if ext.maps[2].rank() < ext.layout.total(2) {
        return Err(Error::NotBijective("total degree 2".into()));
    }
    for n in 3..=max_degree {
        ext.extend_degree(n)?;
    }
    ext.check_bijective()?;
    Ok(ext)
}

/// Outcome of checking the twisting-map axioms on basis tensors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the unit laws and `τ(bb' ⊗ aa') = (∇_A ⊗ ∇_B)(1⊗τ⊗1)(τ⊗τ)(1⊗τ⊗1)(b ⊗ b' ⊗ a ⊗ a')`
/// on all basis tensors of total degree at most `max_degree`.
pub fn verify_twisting_map_axioms(ext: &ExtendedTwist, max_degree: usize) -> AxiomReport {
    let d = max_degree.min(ext.max_degree());
    let lay = ext.layout();
    let mut report = AxiomReport::default();
    for n in 0..=d {
        for &key in lay.ba_keys(n) {
            let (i, _, j, _) = key;
            if i == 0 || j == 0 {
                report.checked += 1;
                if ext.image(key) != unit(lay.total(n), lay.ab_index(key)) {
                    report.violations.push(format!("unit law at {}", ext.key_text(key)));
                }
            }
        }
    }
    let (a, b) = (ext.a(), ext.b());
    for n in 2..=d {
        for j in 0..=n {
            for j2 in 0..=n - j {
                for i in 0..=n - j - j2 {
                    let i2 = n - j - j2 - i;
                    if j + j2 == 0 || i + i2 == 0 || (j == 0 && i2 == 0) {
                        continue;
                    }
                    for jb in 0..b.dim(j) {
                        for jb2 in 0..b.dim(j2) {
                            let bb = b.mul_basis(j, jb, j2, jb2);
                            for ia in 0..a.dim(i) {
                                // τ(b' ⊗ a), split as Σ a1 ⊗ b1
                                let t1 = ext.image((i, ia, j2, jb2));
                                for ia2 in 0..a.dim(i2) {
                                    report.checked += 1;
                                    let aa = a.mul_basis(i, ia, i2, ia2);
                                    let mut lhs = vec![FieldElement::zero(); lay.total(n)];
                                    for (kb, cb) in nonzero(&bb) {
                                        for (ka, ca) in nonzero(&aa) {
                                            dense_axpy(&mut lhs, &(cb * ca), &ext.image((i + i2, ka, j + j2, kb)));
                                        }
                                    }
                                    let mut rhs = vec![FieldElement::zero(); lay.total(n)];
                                    for (k, c1) in nonzero(&t1) {
                                        let (i1, a1, l1, b1) = lay.ab_keys(i + j2)[k];
                                        let x = ext.image((i1, a1, j, jb));
                                        let y = ext.image((i2, ia2, l1, b1));
                                        dense_axpy(&mut rhs, c1, &ext.multiply(j + i1, &x, l1 + i2, &y));
                                    }
                                    if lhs != rhs {
                                        report.violations.push(format!(
                                            "{} * {} (x) {} * {}",
                                            words_text(b.alphabet(), b.normal_word(j, jb)),
                                            words_text(b.alphabet(), b.normal_word(j2, jb2)),
                                            words_text(a.alphabet(), a.normal_word(i, ia)),
                                            words_text(a.alphabet(), a.normal_word(i2, ia2)),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// The twisted tensor product on the basis `{a ⊗ b}`, as a multiplication
/// oracle.
#[derive(Clone, Copy, Debug)]
pub struct TwistedTensorProduct<'a> {
    twist: &'a ExtendedTwist,
}

impl<'a> TwistedTensorProduct<'a> {
    pub fn new(twist: &'a ExtendedTwist) -> Self {
        TwistedTensorProduct { twist }
    }

    /// Generator names, those of `A` first.
    pub fn generator_names(&self) -> Vec<String> {
        let t = self.twist;
        t.a().alphabet().names().iter().chain(t.b().alphabet().names()).cloned().collect()
    }
}

impl GradedAlgebra for TwistedTensorProduct<'_> {
    fn max_degree(&self) -> usize {
        self.twist.max_degree()
    }

    fn dim(&self, d: usize) -> usize {
        self.twist.total_dim(d)
    }

    fn mul_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> Vec<FieldElement> {
        let t = self.twist;
        t.multiply(d1, &unit(t.total_dim(d1), i), d2, &unit(t.total_dim(d2), j))
    }

    fn basis_label(&self, d: usize, i: usize) -> String {
        let (ia, ka, jb, kb) = self.twist.layout().ab_keys(d)[i];
        let t = self.twist;
        format!("{} (x) {}", words_text(t.a().alphabet(), t.a().normal_word(ia, ka)), words_text(t.b().alphabet(), t.b().normal_word(jb, kb)))
    }
}

/// A presentation of a twisted tensor product together with its truncation.
#[derive(Clone, Debug)]
pub struct TtpBuild {
    pub presentation: GradedPresentation,
    pub model: TruncatedAlgebraModel,
}

/// Expected Hilbert function `Σ_i dim A_i · dim B_{d-i}`.
pub fn convolution_dims(a: &TruncatedAlgebraModel, b: &TruncatedAlgebraModel, max_degree: usize) -> Vec<usize> {
    (0..=max_degree).map(|d| (0..=d).map(|i| a.dim(i) * b.dim(d - i)).sum()).collect()
}

/// Renames the generators of `B` past those of `A`.
fn shifted_b(p: &NcPoly, offset: usize, nb: usize) -> NcPoly {
    let images: Vec<NcPoly> = (0..nb).map(|g| NcPoly::generator(g + offset)).collect();
    p.substitute(&images)
}

/// Presentation on the generators of `A` and `B` with relations
/// `rel(A) ∪ rel(B) ∪ { y·x − τ(y ⊗ x) }`, truncated and checked against the
/// expected dimensions.
pub fn build_ttp(ext: &ExtendedTwist, name: &str) -> Result<TtpBuild> {
    let (a, b) = (ext.a(), ext.b());
    let (na, nb) = (a.alphabet().len(), b.alphabet().len());
    let names = a.alphabet().names().iter().chain(b.alphabet().names()).cloned();
    let alphabet = Alphabet::linear(names)?;
    let mut rels: Vec<NcPoly> = a.presentation().relations().to_vec();
    rels.extend(b.presentation().relations().iter().map(|r| shifted_b(r, na, nb)));
    for y in 0..nb {
        for x in 0..na {
            let mut rel = NcPoly::word(Word(vec![(na + y) as u16, x as u16]));
            let t = ext.image((1, x, 1, y));
            for (k, c) in nonzero(&t) {
                let (i, ia, j, jb) = ext.layout().ab_keys(2)[k];
                let u = a.normal_word(i, ia).clone();
                let v = shifted_b(&NcPoly::word(b.normal_word(j, jb).clone()), na, nb);
                rel = rel.sub(&NcPoly::term(c.clone(), u).mul(&v));
            }
            rels.push(rel);
        }
    }
    let presentation = GradedPresentation::new(name, ext.params().clone(), alphabet, rels)?;
    let model = TruncatedAlgebraModel::build(&presentation, ext.max_degree())?;
    let expected = convolution_dims(a, b, ext.max_degree());
    for (d, (&e, f)) in expected.iter().zip(model.hilbert_function()).enumerate() {
        if e != f {
            return Err(Error::DimensionMismatch { degree: d, expected: e, found: f });
        }
    }
    Ok(TtpBuild { presentation, model })
}

/// A subalgebra map into an ambient algebra, given by generator images.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub model: TruncatedAlgebraModel,
    pub images: Vec<NcPoly>,
}

impl Embedding {
    /// The generators of `model` sent to the ambient generators named alike.
    pub fn by_names(model: &TruncatedAlgebraModel, ambient: &Alphabet) -> Result<Self> {
        let images = model
            .alphabet()
            .names()
            .iter()
            .map(|n| ambient.index_of(n).map(NcPoly::generator).ok_or_else(|| Error::Shape(format!("generator {n} missing from the ambient algebra"))))
            .collect::<Result<_>>()?;
        Ok(Embedding { model: model.clone(), images })
    }

    /// Ambient coordinates of every normal word up to `max_degree`.
    fn basis_images(&self, ambient: &TruncatedAlgebraModel, max_degree: usize) -> Result<Vec<Vec<Vec<FieldElement>>>> {
        if self.images.len() != self.model.alphabet().len() {
            return Err(Error::Shape("one image per generator".into()));
        }
        for (g, p) in self.images.iter().enumerate() {
            ambient.alphabet().check(p)?;
            if ambient.alphabet().homogeneous_degree(p).is_some_and(|d| d != 1) {
                return Err(Error::InhomogeneousRelation(format!("image of generator {g} is not linear")));
            }
        }
        for r in self.model.presentation().relations() {
            let image = r.substitute(&self.images);
            if !ambient.in_ideal(&image)? {
                let witness = r.to_text(self.model.alphabet(), self.model.params());
                return Err(Error::IllDefinedOverRelations { degree: self.model.alphabet().homogeneous_degree(r).unwrap_or(0), witness });
            }
        }
        (0..=max_degree)
            .map(|d| {
                (0..self.model.dim(d))
                    .map(|i| ambient.coords(d, &NcPoly::word(self.model.normal_word(d, i).clone()).substitute(&self.images)))
                    .collect()
            })
            .collect()
    }
}

/// Recovers `τ = (∇(ι_A ⊗ ι_B))^{-1} ∇(ι_B ⊗ ι_A)` degree by degree.
pub fn recover_twisting_map(ambient: &TruncatedAlgebraModel, iota_a: &Embedding, iota_b: &Embedding, max_degree: usize) -> Result<ExtendedTwist> {
    let d = max_degree.min(ambient.max_degree());
    let params = iota_a.model.params().merge(iota_b.model.params())?.merge(ambient.params())?;
    let mut ext = ExtendedTwist::skeleton(&iota_a.model, &iota_b.model, params, d, "recovered".into())?;
    let ia = iota_a.basis_images(ambient, d)?;
    let ib = iota_b.basis_images(ambient, d)?;
    for n in 0..=d {
        let lay = ext.layout().clone();
        if ambient.dim(n) != lay.total(n) {
            return Err(Error::FactorizationNotBijective(n));
        }
        let ab: Vec<Vec<FieldElement>> = lay.ab_keys(n).iter().map(|&(i, a, j, b)| ambient.mul_vectors(i, &ia[i][a], j, &ib[j][b])).collect();
        let ba: Vec<Vec<FieldElement>> = lay.ba_keys(n).iter().map(|&(i, a, j, b)| ambient.mul_vectors(j, &ib[j][b], i, &ia[i][a])).collect();
        let mu_ab = Matrix::from_columns(&ab, lay.total(n));
        let mu_ba = Matrix::from_columns(&ba, lay.total(n));
        ext.maps[n] = mu_ab.solve(&mu_ba).map_err(|_| Error::FactorizationNotBijective(n))?;
    }
    ext.check_bijective()?;
    Ok(ext)
}
