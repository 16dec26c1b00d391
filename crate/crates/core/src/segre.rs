//! Bigrading of a twisted tensor product `A ⊗_τ B` by
//! `(A ⊗_τ B)_{(i,j)} = A_{i+j} ⊗ B_j`, its bidegree-zero part (the twisted
//! Segre product `A ∘_τ B`) and windowed dimension diagnostics.
//!
//! Everything is relative to the truncation: a component `(i, j)` is known
//! only when its total degree `i + 2j` is at most the cutoff.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::morphisms::Verdict;
use crate::scalars::ParamSpace;
use crate::text::is_identifier;
use crate::truncated::{presentation_completion, unit_vector, Completion, GradedAlgebra};
use crate::ttp::{ExtendedTwist, TwistedTensorProduct};
use crate::FieldElement;

/// External and internal degree: `(deg a − deg b, deg b)`.
pub type Bidegree = (i64, usize);

/// A twisted tensor product with the bigrading attached.
#[derive(Clone, Debug)]
pub struct BigradedTruncation {
    twist: ExtendedTwist,
    additivity: Verdict,
}

/// Attaches the bigrading to a strongly graded twisting map between connected
/// algebras generated in degree one. Additivity of bidegrees is checked on
/// all basis pairs whose left factor has degree at most 2.
pub fn assign_bigrading(twist: &ExtendedTwist) -> Result<BigradedTruncation> {
    if !twist.is_strongly_graded() {
        return Err(Error::NotStronglyGraded);
    }
    for m in [twist.a(), twist.b()] {
        m.presentation().require_degree_one()?;
        if m.dim(0) != 1 {
            return Err(Error::DimensionMismatch { degree: 0, expected: 1, found: m.dim(0) });
        }
    }
    let mut bg = BigradedTruncation { twist: twist.clone(), additivity: Verdict::pass() };
    bg.additivity = bg.check_additivity();
    Ok(bg)
}

impl BigradedTruncation {
    pub fn twist(&self) -> &ExtendedTwist {
        &self.twist
    }

    pub fn max_degree(&self) -> usize {
        self.twist.max_degree()
    }

    /// Outcome of the additivity check done by [`assign_bigrading`].
    pub fn additivity(&self) -> &Verdict {
        &self.additivity
    }

    /// Bidegree of basis vector `k` of `(A ⊗ B)_n`.
    pub fn bidegree(&self, n: usize, k: usize) -> Bidegree {
        let (i, _, j, _) = self.twist.layout().ab_keys(n)[k];
        (i as i64 - j as i64, j)
    }

    /// Total degree of the component `(i, j)`, if it lies in the truncation.
    fn total(&self, (i, j): Bidegree) -> Option<usize> {
        let a = i + j as i64;
        let n = a + j as i64;
        (a >= 0 && n as usize <= self.max_degree()).then_some(n as usize)
    }

    /// Indices, within its total degree, of the basis of `A_{i+j} ⊗ B_j`.
    /// Empty outside the truncation.
    pub fn component(&self, bd: Bidegree) -> Vec<usize> {
        match self.total(bd) {
            None => Vec::new(),
            Some(n) => (0..self.twist.total_dim(n)).filter(|&k| self.bidegree(n, k) == bd).collect(),
        }
    }

    pub fn component_dim(&self, (i, j): Bidegree) -> usize {
        match self.total((i, j)) {
            None => 0,
            Some(_) => self.twist.a().dim((i + j as i64) as usize) * self.twist.b().dim(j),
        }
    }

    /// Product of basis vectors as a vector of the target total degree.
    fn product(&self, n1: usize, k1: usize, n2: usize, k2: usize) -> Vec<FieldElement> {
        let t = &self.twist;
        t.multiply(n1, &unit_vector(t.total_dim(n1), k1), n2, &unit_vector(t.total_dim(n2), k2))
    }

    fn check_additivity(&self) -> Verdict {
        let d = self.max_degree();
        for n1 in 1..=d.min(2) {
            for n2 in 1..=d - n1 {
                for k1 in 0..self.twist.total_dim(n1) {
                    for k2 in 0..self.twist.total_dim(n2) {
                        let (b1, b2) = (self.bidegree(n1, k1), self.bidegree(n2, k2));
                        let want = (b1.0 + b2.0, b1.1 + b2.1);
                        let v = self.product(n1, k1, n2, k2);
                        if let Some(k) = (0..v.len()).find(|&k| !v[k].is_zero() && self.bidegree(n1 + n2, k) != want) {
                            let tp = TwistedTensorProduct::new(&self.twist);
                            return Verdict::fail(format!(
                                "({})·({}) has a term {} outside bidegree {want:?}",
                                tp.basis_label(n1, k1),
                                tp.basis_label(n2, k2),
                                tp.basis_label(n1 + n2, k)
                            ));
                        }
                    }
                }
            }
        }
        Verdict::pass()
    }
}

/// The bidegree-zero part `⊕_d A_d ⊗ B_d`, regraded so that `A_d ⊗ B_d` sits
/// in degree `d`. Basis of degree `d`: `a_p ⊗ b_q` at index `p · dim B_d + q`.
#[derive(Clone, Debug)]
pub struct DiagonalSubalgebra {
    bg: BigradedTruncation,
    /// Positions of the degree-`d` basis inside `(A ⊗ B)_{2d}`.
    positions: Vec<Vec<usize>>,
}

/// Oracle for the twisted Segre product, read off the twisted tensor product.
pub fn diagonal_subalgebra(bg: &BigradedTruncation) -> DiagonalSubalgebra {
    let positions = (0..=bg.max_degree() / 2).map(|d| bg.component((0, d))).collect();
    DiagonalSubalgebra { bg: bg.clone(), positions }
}

impl DiagonalSubalgebra {
    pub fn bigraded(&self) -> &BigradedTruncation {
        &self.bg
    }

    fn split(&self, d: usize, k: usize) -> (usize, usize) {
        let nb = self.bg.twist.b().dim(d);
        (k / nb, k % nb)
    }

    /// `(∇_A ⊗ ∇_B)(1 ⊗ τ ⊗ 1)` on basis tensors, computed from `τ` on
    /// `B_{d1} ⊗ A_{d2}` and the multiplications of `A` and `B` alone.
    pub fn segre_product(&self, d1: usize, k1: usize, d2: usize, k2: usize) -> Vec<FieldElement> {
        let t = &self.bg.twist;
        let (a, b) = (t.a(), t.b());
        let ((p1, q1), (p2, q2)) = (self.split(d1, k1), self.split(d2, k2));
        let d = d1 + d2;
        let mut out = vec![FieldElement::zero(); a.dim(d) * b.dim(d)];
        let image = t.image((d2, p2, d1, q1));
        let keys = t.layout().ab_keys(d);
        for (k, c) in image.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (i, ia, j, jb) = keys[k];
            debug_assert!(i == d2 && j == d1);
            let left = a.mul_basis(d1, p1, i, ia);
            let right = b.mul_basis(j, jb, d2, q2);
            for (r, x) in left.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let cx = c * x;
                for (s, y) in right.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    let idx = r * b.dim(d) + s;
                    out[idx] = &out[idx] + &(&cx * y);
                }
            }
        }
        out
    }

    /// Compares the restricted twisted tensor product multiplication with
    /// [`Self::segre_product`] on every basis pair up to the top degree.
    pub fn check_against_ttp(&self) -> Verdict {
        let top = self.max_degree();
        for d1 in 0..=top {
            for d2 in 0..=top - d1 {
                for k1 in 0..self.dim(d1) {
                    for k2 in 0..self.dim(d2) {
                        if self.mul_basis(d1, k1, d2, k2) != self.segre_product(d1, k1, d2, k2) {
                            return Verdict::fail(format!(
                                "({})·({})",
                                self.basis_label(d1, k1),
                                self.basis_label(d2, k2)
                            ));
                        }
                    }
                }
            }
        }
        Verdict::pass()
    }

    /// Names for the degree-one basis: generator names of `A` and `B`
    /// concatenated (`u`, `x` give `ux`), or `s0, s1, ...` when that would
    /// be ambiguous.
    pub fn generator_names(&self) -> Vec<String> {
        let t = &self.bg.twist;
        let (an, bn) = (t.a().alphabet().names(), t.b().alphabet().names());
        let names: Vec<String> = (0..self.dim(1))
            .map(|k| {
                let (p, q) = self.split(1, k);
                format!("{}{}", an[t.a().normal_word(1, p).0[0] as usize], bn[t.b().normal_word(1, q).0[0] as usize])
            })
            .collect();
        let distinct = names.iter().collect::<BTreeSet<_>>().len() == names.len();
        let clash = names.iter().any(|n| !is_identifier(n) || t.params().names().iter().any(|p| p == n));
        if distinct && !clash {
            names
        } else {
            (0..names.len()).map(|k| format!("s{k}")).collect()
        }
    }

    /// `dim A_d · dim B_d` for `d ≤ max_degree`.
    pub fn hadamard_dims(&self, max_degree: usize) -> Vec<usize> {
        let t = &self.bg.twist;
        (0..=max_degree).map(|d| t.a().dim(d) * t.b().dim(d)).collect()
    }
}

impl GradedAlgebra for DiagonalSubalgebra {
    fn max_degree(&self) -> usize {
        self.positions.len() - 1
    }

    fn dim(&self, d: usize) -> usize {
        self.positions[d].len()
    }

    fn mul_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> Vec<FieldElement> {
        let v = self.bg.product(2 * d1, self.positions[d1][i], 2 * d2, self.positions[d2][j]);
        self.positions[d1 + d2].iter().map(|&k| v[k].clone()).collect()
    }

    fn basis_label(&self, d: usize, i: usize) -> String {
        TwistedTensorProduct::new(&self.bg.twist).basis_label(2 * d, self.positions[d][i])
    }
}

/// A completed presentation of the twisted Segre product on the degree-one
/// basis, checked against `dim A_d · dim B_d`.
#[derive(Clone, Debug)]
pub struct SegrePresentation {
    pub completion: Completion,
    pub hadamard: Vec<usize>,
}

/// Extracts generators and relations of the diagonal up to `max_degree`.
/// Fails with `DimensionMismatch` at the first degree where the completed
/// presentation disagrees with the Hadamard product of Hilbert functions.
pub fn segre_presentation(diag: &DiagonalSubalgebra, name: &str, max_degree: usize) -> Result<SegrePresentation> {
    let params: ParamSpace = diag.bg.twist.params().clone();
    let completion = presentation_completion(diag, name, &diag.generator_names(), params, max_degree)?;
    let hadamard = diag.hadamard_dims(max_degree);
    for (d, (&e, f)) in hadamard.iter().zip(completion.model.hilbert_function()).enumerate() {
        if e != f {
            return Err(Error::DimensionMismatch { degree: d, expected: e, found: f });
        }
    }
    Ok(SegrePresentation { completion, hadamard })
}

/// `dim S_d = dim A_d · dim B_d` for `d ≤ max_degree`, both on the diagonal
/// oracle and on its completed presentation.
pub fn hilbert_hadamard_check(bg: &BigradedTruncation, max_degree: usize) -> Result<bool> {
    let diag = diagonal_subalgebra(bg);
    if max_degree > diag.max_degree() {
        return Err(Error::DegreeOutOfRange { degree: max_degree, max: diag.max_degree() });
    }
    let hadamard = diag.hadamard_dims(max_degree);
    if (0..=max_degree).any(|d| diag.dim(d) != hadamard[d]) {
        return Ok(false);
    }
    match segre_presentation(&diag, "segre", max_degree) {
        Ok(_) => Ok(true),
        Err(Error::DimensionMismatch { .. } | Error::NotGeneratedInDegreeOne(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// One entry of the density table: the codimension of `(S_left · S_right)`
/// inside `S_{left+right}` in internal degree `internal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRow {
    pub left: i64,
    pub right: i64,
    pub internal: usize,
    pub dim: usize,
    pub product_rank: usize,
    pub codim: usize,
}

/// Codimensions of `S_i S_j` in `S_{i+j}` for the external grading
/// `S_i = ⊕_j S_{(i,j)}`, for `|i|, |j| ≤ window` and every internal degree
/// whose component lies in the truncation at `max_degree`. The values are
/// relative to the window and the truncation.
pub fn densely_graded_diagnostic(bg: &BigradedTruncation, window: usize, max_degree: usize) -> Result<Vec<DensityRow>> {
    if window > max_degree {
        return Err(Error::WindowExceedsTruncation { window, max: max_degree });
    }
    if max_degree > bg.max_degree() {
        return Err(Error::DegreeOutOfRange { degree: max_degree, max: bg.max_degree() });
    }
    let w = window as i64;
    let mut rows = Vec::new();
    for left in -w..=w {
        for right in -w..=w {
            let target = left + right;
            for internal in 0..=max_degree {
                let n = target + 2 * internal as i64;
                if target + (internal as i64) < 0 || n < 0 || n as usize > max_degree {
                    continue;
                }
                let n = n as usize;
                let tgt = bg.component((target, internal));
                let mut products = Vec::new();
                for j1 in 0..=internal {
                    let (b1, b2) = ((left, j1), (right, internal - j1));
                    let (Some(n1), Some(n2)) = (bg.total(b1), bg.total(b2)) else { continue };
                    for k1 in bg.component(b1) {
                        for k2 in bg.component(b2) {
                            let v = bg.product(n1, k1, n2, k2);
                            debug_assert_eq!(n1 + n2, n);
                            products.push(tgt.iter().map(|&k| v[k].clone()).collect::<Vec<_>>());
                        }
                    }
                }
                let product_rank = if products.is_empty() { 0 } else { Matrix::from_columns(&products, tgt.len()).rank() };
                rows.push(DensityRow { left, right, internal, dim: tgt.len(), product_rank, codim: tgt.len() - product_rank });
            }
        }
    }
    Ok(rows)
}
