//! Quotients of free algebras realised degree by degree up to a cutoff.
//!
//! In each degree the words are indexed in descending order, so the pivot of
//! an echelon row (its smallest column) is the leading word of the
//! corresponding ideal element. Normal words are the non-pivot columns.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, NcPoly, Word};
use crate::linalg::{axpy, dense_axpy, Echelon, Matrix, SparseVec};
use crate::presentation::GradedPresentation;
use crate::scalars::{FieldElement, ParamSpace};

/// A connected graded algebra known up to a maximal degree through its
/// multiplication on bases of the homogeneous components.
pub trait GradedAlgebra {
    fn max_degree(&self) -> usize;

    fn dim(&self, d: usize) -> usize;

    /// Coordinates of `e_i · e_j` where `e_i ∈ A_{d1}`, `e_j ∈ A_{d2}`.
    fn mul_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> Vec<FieldElement>;

    fn basis_label(&self, d: usize, i: usize) -> String {
        format!("e{d}_{i}")
    }

    fn mul_vectors(&self, d1: usize, a: &[FieldElement], d2: usize, b: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::zero(); self.dim(d1 + d2)];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                dense_axpy(&mut out, &(x * y), &self.mul_basis(d1, i, d2, j));
            }
        }
        out
    }

    fn hilbert_function(&self) -> Vec<usize> {
        (0..=self.max_degree()).map(|d| self.dim(d)).collect()
    }
}

#[derive(Clone, Debug)]
struct Slice {
    /// Words of this degree, descending.
    words: Vec<Word>,
    index: BTreeMap<Word, usize>,
    ideal: Echelon,
    /// Non-pivot columns in ascending word order.
    normal: Vec<usize>,
    normal_pos: BTreeMap<usize, usize>,
}

impl Slice {
    fn new(alphabet: &Alphabet, d: usize) -> Self {
        let mut words = alphabet.words_of_degree(d);
        words.reverse();
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        Slice { words, index, ideal: Echelon::new(), normal: Vec::new(), normal_pos: BTreeMap::new() }
    }

    fn finish(&mut self) {
        self.normal = (0..self.words.len()).rev().filter(|&c| !self.ideal.is_pivot(c)).collect();
        self.normal_pos = self.normal.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    }

    fn vector(&self, p: &NcPoly) -> SparseVec {
        p.terms().map(|(w, c)| (self.index[w], c.clone())).collect()
    }

    /// Normal-basis coordinates of a single word.
    fn reduce_column(&self, c: usize) -> SparseVec {
        match self.ideal.row(c) {
            None => [(self.normal_pos[&c], FieldElement::one())].into_iter().collect(),
            Some(row) => row.iter().filter(|(&k, _)| k != c).map(|(k, x)| (self.normal_pos[k], -x)).collect(),
        }
    }
}

/// Exact model of `k<X>/(R)` in degrees `0..=D`.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebraModel {
    presentation: GradedPresentation,
    slices: Vec<Slice>,
}

/// Cap on the number of words in a single degree.
pub const MAX_WORDS_PER_DEGREE: usize = 200_000;

impl TruncatedAlgebraModel {
    /// Row-reduces every degree `d ≤ max_degree` modulo the ideal slice.
    pub fn build(presentation: &GradedPresentation, max_degree: usize) -> Result<Self> {
        let mut m = Self::empty(presentation.clone())?;
        while m.max_degree() < max_degree {
            m.extend_degree()?;
        }
        Ok(m)
    }

    fn empty(presentation: GradedPresentation) -> Result<Self> {
        let mut s0 = Slice::new(&presentation.alphabet, 0);
        s0.finish();
        Ok(TruncatedAlgebraModel { presentation, slices: vec![s0] })
    }

    /// Adds the next degree.
    fn extend_degree(&mut self) -> Result<()> {
        let d = self.slices.len();
        let alphabet = &self.presentation.alphabet;
        let words = alphabet.count_words(d);
        if words > MAX_WORDS_PER_DEGREE {
            return Err(Error::DegreeTooLarge { degree: d, words });
        }
        let mut slice = Slice::new(alphabet, d);
        for g in 0..alphabet.len() {
            let e = alphabet.degree_of(g) as usize;
            if e > d {
                continue;
            }
            let lower = &self.slices[d - e];
            for (_, row) in lower.ideal.rows() {
                let v: SparseVec = row.iter().map(|(&c, x)| (slice.index[&Word::letter(g).concat(&lower.words[c])], x.clone())).collect();
                slice.ideal.insert(&v);
            }
        }
        for r in self.presentation.relations() {
            let e = alphabet.homogeneous_degree(r).unwrap_or(0);
            if e == 0 || e > d {
                continue;
            }
            for w in &self.slices[d - e].words {
                let v = slice.vector(&r.mul(&NcPoly::word(w.clone())));
                slice.ideal.insert(&v);
            }
        }
        slice.finish();
        self.slices.push(slice);
        Ok(())
    }

    /// Appends relations of exactly the top degree.
    fn add_top_relations(&mut self, rels: Vec<NcPoly>) -> Result<()> {
        let top = self.slices.last_mut().expect("degree zero exists");
        for r in &rels {
            let v = top.vector(r);
            top.ideal.insert(&v);
        }
        top.finish();
        for r in rels {
            self.presentation.push_relation(r)?;
        }
        Ok(())
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.presentation
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.presentation.alphabet
    }

    pub fn params(&self) -> &ParamSpace {
        &self.presentation.params
    }

    pub fn max_degree(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.slices.get(d).map_or(0, |s| s.normal.len())
    }

    pub fn hilbert_function(&self) -> Vec<usize> {
        self.slices.iter().map(|s| s.normal.len()).collect()
    }

    /// Normal words of degree `d`, ascending.
    pub fn normal_words(&self, d: usize) -> Vec<Word> {
        let s = &self.slices[d];
        s.normal.iter().map(|&c| s.words[c].clone()).collect()
    }

    pub fn normal_word(&self, d: usize, i: usize) -> &Word {
        let s = &self.slices[d];
        &s.words[s.normal[i]]
    }

    fn check_degree(&self, d: usize) -> Result<()> {
        if d > self.max_degree() {
            Err(Error::DegreeOutOfRange { degree: d, max: self.max_degree() })
        } else {
            Ok(())
        }
    }

    /// Homogeneous components of `p` by degree.
    fn components(&self, p: &NcPoly) -> Result<BTreeMap<usize, NcPoly>> {
        self.alphabet().check(p)?;
        let mut out: BTreeMap<usize, NcPoly> = BTreeMap::new();
        for (w, c) in p.terms() {
            let d = self.alphabet().word_degree(w);
            self.check_degree(d)?;
            out.entry(d).or_insert_with(NcPoly::zero).add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    /// Coordinates of a homogeneous degree-`d` element in the normal basis.
    pub fn coords(&self, d: usize, p: &NcPoly) -> Result<Vec<FieldElement>> {
        self.check_degree(d)?;
        let s = &self.slices[d];
        let mut acc = SparseVec::new();
        for (w, c) in p.terms() {
            let col = *s.index.get(w).ok_or(Error::DimensionMismatch { degree: d, expected: d, found: self.alphabet().word_degree(w) })?;
            axpy(&mut acc, c, &s.reduce_column(col));
        }
        let mut out = vec![FieldElement::zero(); s.normal.len()];
        for (k, x) in acc {
            out[k] = x;
        }
        Ok(out)
    }

    /// Coordinates of a single word of degree `d`.
    pub fn word_coords(&self, d: usize, w: &Word) -> Vec<FieldElement> {
        let s = &self.slices[d];
        let mut out = vec![FieldElement::zero(); s.normal.len()];
        for (k, x) in s.reduce_column(s.index[w]) {
            out[k] = x;
        }
        out
    }

    pub fn from_coords(&self, d: usize, v: &[FieldElement]) -> NcPoly {
        NcPoly::from_terms(v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (self.normal_word(d, i).clone(), x.clone())))
    }

    /// Normal form: the representative supported on normal words.
    pub fn reduce(&self, p: &NcPoly) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (d, part) in self.components(p)? {
            out = out.add(&self.from_coords(d, &self.coords(d, &part)?));
        }
        Ok(out)
    }

    pub fn in_ideal(&self, p: &NcPoly) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Product of normal-form elements, reduced.
    pub fn multiply(&self, p: &NcPoly, q: &NcPoly) -> Result<NcPoly> {
        self.reduce(&p.mul(q))
    }

    /// Echelon basis of the ideal slice in degree `d`, as polynomials whose
    /// leading words are the pivots.
    pub fn ideal_basis(&self, d: usize) -> Vec<NcPoly> {
        let s = &self.slices[d];
        s.ideal.rows().map(|(_, row)| NcPoly::from_terms(row.iter().map(|(&c, x)| (s.words[c].clone(), x.clone())))).collect()
    }

    /// Whether two presentations on the same alphabet have the same ideal in
    /// every degree of this model.
    pub fn same_ideal(&self, other: &TruncatedAlgebraModel) -> bool {
        self.max_degree() == other.max_degree()
            && self.slices.iter().zip(&other.slices).all(|(a, b)| {
                a.words == b.words && a.ideal.rank() == b.ideal.rank() && a.ideal.rows().all(|(_, r)| b.ideal.contains(r))
            })
    }
}

impl GradedAlgebra for TruncatedAlgebraModel {
    fn max_degree(&self) -> usize {
        TruncatedAlgebraModel::max_degree(self)
    }

    fn dim(&self, d: usize) -> usize {
        TruncatedAlgebraModel::dim(self, d)
    }

    fn mul_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> Vec<FieldElement> {
        let w = self.normal_word(d1, i).concat(self.normal_word(d2, j));
        self.word_coords(d1 + d2, &w)
    }

    fn basis_label(&self, d: usize, i: usize) -> String {
        self.alphabet().word_text(self.normal_word(d, i))
    }
}

/// Graded algebra given by an explicit table of structure constants.
#[derive(Clone, Debug)]
pub struct TableAlgebra {
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    table: BTreeMap<(usize, usize, usize, usize), Vec<FieldElement>>,
}

impl TableAlgebra {
    /// Tabulates every product of basis elements of total degree at most the
    /// maximal degree of `alg`.
    pub fn from_algebra<A: GradedAlgebra + ?Sized>(alg: &A) -> Self {
        let top = alg.max_degree();
        let dims: Vec<usize> = (0..=top).map(|d| alg.dim(d)).collect();
        let labels = (0..=top).map(|d| (0..dims[d]).map(|i| alg.basis_label(d, i)).collect()).collect();
        let mut table = BTreeMap::new();
        for d1 in 0..=top {
            for d2 in 0..=top - d1 {
                for i in 0..dims[d1] {
                    for j in 0..dims[d2] {
                        table.insert((d1, i, d2, j), alg.mul_basis(d1, i, d2, j));
                    }
                }
            }
        }
        TableAlgebra { dims, labels, table }
    }

    pub fn set_product(&mut self, d1: usize, i: usize, d2: usize, j: usize, value: Vec<FieldElement>) {
        self.table.insert((d1, i, d2, j), value);
    }
}

impl GradedAlgebra for TableAlgebra {
    fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    fn mul_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> Vec<FieldElement> {
        self.table[&(d1, i, d2, j)].clone()
    }

    fn basis_label(&self, d: usize, i: usize) -> String {
        self.labels[d][i].clone()
    }
}

/// Outcome of an exhaustive associativity check on basis triples.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AssociativityReport {
    pub triples_checked: usize,
    /// Labels of failing triples `(e_i, e_j, e_k)`.
    pub failures: Vec<[String; 3]>,
}

impl AssociativityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: AssociativityReport) {
        self.triples_checked += other.triples_checked;
        self.failures.extend(other.failures);
    }
}

/// Checks `(e_i e_j) e_k = e_i (e_j e_k)` for all basis triples in degrees
/// `(d1, d2, d3)`.
pub fn check_associativity<A: GradedAlgebra + ?Sized>(alg: &A, d1: usize, d2: usize, d3: usize) -> Result<AssociativityReport> {
    let top = d1 + d2 + d3;
    if top > alg.max_degree() {
        return Err(Error::DegreeOutOfRange { degree: top, max: alg.max_degree() });
    }
    let mut report = AssociativityReport::default();
    for i in 0..alg.dim(d1) {
        for j in 0..alg.dim(d2) {
            let ij = alg.mul_basis(d1, i, d2, j);
            for k in 0..alg.dim(d3) {
                let left = alg.mul_vectors(d1 + d2, &ij, d3, &unit_vector(alg.dim(d3), k));
                let jk = alg.mul_basis(d2, j, d3, k);
                let right = alg.mul_vectors(d1, &unit_vector(alg.dim(d1), i), d2 + d3, &jk);
                report.triples_checked += 1;
                if left != right {
                    report.failures.push([alg.basis_label(d1, i), alg.basis_label(d2, j), alg.basis_label(d3, k)]);
                }
            }
        }
    }
    Ok(report)
}

/// Associativity on every degree triple with positive entries and total
/// degree at most `max_total`.
pub fn check_associativity_upto<A: GradedAlgebra + ?Sized>(alg: &A, max_total: usize) -> Result<AssociativityReport> {
    let mut report = AssociativityReport::default();
    for d1 in 1..=max_total {
        for d2 in 1..=max_total - d1 {
            for d3 in 1..=max_total.saturating_sub(d1 + d2) {
                report.merge(check_associativity(alg, d1, d2, d3)?);
            }
        }
    }
    Ok(report)
}

pub fn unit_vector(n: usize, i: usize) -> Vec<FieldElement> {
    let mut v = vec![FieldElement::zero(); n];
    v[i] = FieldElement::one();
    v
}

/// Result of extracting a presentation from a multiplication oracle.
#[derive(Clone, Debug)]
pub struct Completion {
    pub model: TruncatedAlgebraModel,
    /// Number of new relations found in each degree.
    pub new_relations: Vec<usize>,
}

impl Completion {
    pub fn presentation(&self) -> &GradedPresentation {
        self.model.presentation()
    }
}

/// Finds the relations among degree-one generators of an oracle algebra,
/// degree by degree: in each degree the new relations are the reduced kernel
/// of the evaluation map on words that are normal modulo the relations found
/// so far.
///
/// The basis of the oracle's degree-one component is taken as the
/// generators, named by `names`.
pub fn presentation_completion<A: GradedAlgebra + ?Sized>(
    oracle: &A,
    name: &str,
    names: &[String],
    params: ParamSpace,
    max_degree: usize,
) -> Result<Completion> {
    if max_degree > oracle.max_degree() {
        return Err(Error::DegreeOutOfRange { degree: max_degree, max: oracle.max_degree() });
    }
    if names.len() != oracle.dim(1) {
        return Err(Error::DimensionMismatch { degree: 1, expected: oracle.dim(1), found: names.len() });
    }
    let alphabet = Alphabet::linear(names.iter().cloned())?;
    let free = GradedPresentation::new(name, params, alphabet, Vec::new())?;
    let mut model = TruncatedAlgebraModel::empty(free)?;
    model.extend_degree()?;
    let mut new_relations = vec![0, 0];
    // Oracle values of the normal words of the previous degree.
    let n = names.len();
    let mut prev: BTreeMap<Word, Vec<FieldElement>> = (0..n).map(|g| (Word::letter(g), unit_vector(n, g))).collect();
    if oracle.dim(0) != 1 {
        return Err(Error::DimensionMismatch { degree: 0, expected: 1, found: oracle.dim(0) });
    }
    for d in 2..=max_degree {
        model.extend_degree()?;
        let normal = model.normal_words(d);
        let mut values = BTreeMap::new();
        for w in &normal {
            // Prefixes of normal words are normal.
            let (head, last) = w.split_last().expect("nonempty word");
            values.insert(w.clone(), oracle.mul_vectors(d - 1, &prev[&head], 1, &unit_vector(n, last)));
        }
        // Columns in descending word order so kernel pivots are leading words.
        let cols: Vec<&Word> = normal.iter().rev().collect();
        let dim = oracle.dim(d);
        let mut m = Matrix::zeros(dim, cols.len());
        for (c, w) in cols.iter().enumerate() {
            for (r, x) in values[*w].iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        if m.rank() < dim {
            return Err(Error::NotGeneratedInDegreeOne(d));
        }
        let mut kernel = Echelon::new();
        for v in m.kernel() {
            kernel.insert(&crate::linalg::to_sparse(&v));
        }
        let rels: Vec<NcPoly> = kernel
            .rows()
            .map(|(_, row)| NcPoly::from_terms(row.iter().map(|(&c, x)| (cols[c].clone(), x.clone()))))
            .collect();
        new_relations.push(rels.len());
        model.add_top_relations(rels)?;
        prev = values;
    }
    new_relations.truncate(max_degree + 1);
    Ok(Completion { model, new_relations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::builtin_corpus;

    #[test]
    fn polynomial_dims() {
        let m = TruncatedAlgebraModel::build(&builtin_corpus("polynomial(2)").unwrap(), 3).unwrap();
        assert_eq!(m.hilbert_function(), [1, 2, 3, 4]);
        let yx = m.presentation().parse("y*x").unwrap();
        assert_eq!(m.reduce(&yx).unwrap(), m.presentation().parse("x*y").unwrap());
    }

    #[test]
    fn quantum_plane_reduction() {
        let m = TruncatedAlgebraModel::build(&builtin_corpus("quantum_plane(q)").unwrap(), 4).unwrap();
        assert_eq!(m.hilbert_function(), [1, 2, 3, 4, 5]);
        let p = m.presentation();
        assert_eq!(m.reduce(&p.parse("y*x").unwrap()).unwrap(), p.parse("-q*x*y").unwrap());
        assert!(matches!(m.reduce(&p.parse("x^5").unwrap()), Err(Error::DegreeOutOfRange { degree: 5, max: 4 })));
    }

    #[test]
    fn corrupted_table_fails() {
        let m = TruncatedAlgebraModel::build(&builtin_corpus("polynomial(2)").unwrap(), 3).unwrap();
        let mut t = TableAlgebra::from_algebra(&m);
        assert!(check_associativity(&t, 1, 1, 1).unwrap().passed());
        let mut v = t.mul_basis(1, 0, 1, 1);
        v[0] = &v[0] + &FieldElement::one();
        t.set_product(1, 0, 1, 1, v);
        let r = check_associativity(&t, 1, 1, 1).unwrap();
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f[0] == "x" && f[1] == "y"));
    }

    #[test]
    fn completion_of_polynomial_ring() {
        let m = TruncatedAlgebraModel::build(&builtin_corpus("polynomial(2)").unwrap(), 4).unwrap();
        let c = presentation_completion(&m, "k[x,y]", &["x".into(), "y".into()], ParamSpace::new(), 4).unwrap();
        assert_eq!(c.presentation().relation_texts(), ["y*x - x*y"]);
        assert_eq!(c.new_relations, [0, 0, 1, 0, 0]);
        assert_eq!(c.model.hilbert_function(), m.hilbert_function());
    }
}
