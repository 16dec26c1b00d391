//! Twisting maps between finite-dimensional algebras, in particular
//! `k^m ⊗ k^n → k^n ⊗ k^m`, through structure constants.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dense_axpy, Matrix};
use crate::scalars::FieldElement;

/// A unital algebra with basis `e_0 .. e_{n-1}` and `e_i e_j = Σ_k c_{ijk} e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDimAlgebra {
    table: Vec<Vec<Vec<FieldElement>>>,
    unit: Vec<FieldElement>,
}

impl FiniteDimAlgebra {
    /// Checks shape, unit laws and associativity on all basis triples.
    pub fn new(table: Vec<Vec<Vec<FieldElement>>>, unit: Vec<FieldElement>) -> Result<Self> {
        let alg = Self::unchecked(table, unit)?;
        if let Some(w) = alg.unit_failure() {
            return Err(Error::UnitViolation(w));
        }
        if let Some(w) = alg.associativity_failure() {
            return Err(Error::AssociativityFailure(w));
        }
        Ok(alg)
    }

    /// Only the shape is checked.
    pub fn unchecked(table: Vec<Vec<Vec<FieldElement>>>, unit: Vec<FieldElement>) -> Result<Self> {
        let n = unit.len();
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) {
            return Err(Error::Shape(format!("structure constants must be {n}x{n}x{n}")));
        }
        Ok(FiniteDimAlgebra { table, unit })
    }

    /// `k^n` with orthogonal idempotents `e_i`.
    pub fn componentwise(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| if i == j { basis(n, i) } else { zeros(n) }).collect()).collect();
        FiniteDimAlgebra { table, unit: vec![FieldElement::one(); n] }
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn unit(&self) -> &[FieldElement] {
        &self.unit
    }

    pub fn product(&self, i: usize, j: usize) -> &[FieldElement] {
        &self.table[i][j]
    }

    pub fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = zeros(self.dim());
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                dense_axpy(&mut out, &(a * b), &self.table[i][j]);
            }
        }
        out
    }

    /// First basis element on which the unit fails to act trivially.
    pub fn unit_failure(&self) -> Option<String> {
        (0..self.dim()).find_map(|i| {
            let e = basis(self.dim(), i);
            (self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e).then(|| format!("unit on e{i}"))
        })
    }

    /// First basis triple `(e_i e_j) e_k ≠ e_i (e_j e_k)`.
    pub fn associativity_failure(&self) -> Option<String> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = &self.table[i][j];
                for k in 0..n {
                    let left = self.mul(ij, &basis(n, k));
                    let right = self.mul(&basis(n, i), &self.table[j][k]);
                    if left != right {
                        return Some(format!("(e{i}, e{j}, e{k})"));
                    }
                }
            }
        }
        None
    }

    pub fn is_unital_associative(&self) -> bool {
        self.unit_failure().is_none() && self.associativity_failure().is_none()
    }

    /// Dimension of the center.
    pub fn center_dim(&self) -> usize {
        let n = self.dim();
        let mut rows = Vec::new();
        for j in 0..n {
            for t in 0..n {
                rows.push((0..n).map(|k| &self.table[k][j][t] - &self.table[j][k][t]).collect());
            }
        }
        n - Matrix::from_rows(rows).expect("rectangular").rank()
    }

    /// Basis of the Jacobson radical: the kernel of the trace form
    /// `(x, y) ↦ tr L_{xy}`, valid in characteristic zero.
    pub fn radical(&self) -> Vec<Vec<FieldElement>> {
        let n = self.dim();
        let traces: Vec<FieldElement> = (0..n).map(|k| (0..n).fold(FieldElement::zero(), |acc, t| &acc + &self.table[k][t][t])).collect();
        let gram: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.table[i][j].iter().zip(&traces).fold(FieldElement::zero(), |acc, (c, t)| &acc + &(c * t)))
                    .collect()
            })
            .collect();
        Matrix::from_rows(gram).expect("square").kernel()
    }

    /// Whether the product of any two radical elements vanishes.
    pub fn radical_squares_to_zero(&self) -> bool {
        let rad = self.radical();
        rad.iter().all(|x| rad.iter().all(|y| self.mul(x, y).iter().all(FieldElement::is_zero)))
    }
}

fn zeros(n: usize) -> Vec<FieldElement> {
    vec![FieldElement::zero(); n]
}

fn basis(n: usize, i: usize) -> Vec<FieldElement> {
    let mut v = zeros(n);
    v[i] = FieldElement::one();
    v
}

/// `τ(e_i ⊗ f_j) = Σ λ_{ij}^{rs} f_r ⊗ e_s` for bases `e` of an
/// `m`-dimensional `B` and `f` of an `n`-dimensional `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDimTwistSpec {
    m: usize,
    n: usize,
    lambda: Vec<FieldElement>,
}

impl FiniteDimTwistSpec {
    /// `lambda` is flattened in the order `i, j, r, s`.
    pub fn new(m: usize, n: usize, lambda: Vec<FieldElement>) -> Result<Self> {
        if m == 0 || n == 0 || lambda.len() != m * n * n * m {
            return Err(Error::Shape(format!("expected {} coefficients for m = {m}, n = {n}", m * n * n * m)));
        }
        Ok(FiniteDimTwistSpec { m, n, lambda })
    }

    pub fn from_fn(m: usize, n: usize, f: impl Fn(usize, usize, usize, usize) -> FieldElement) -> Self {
        let mut lambda = Vec::with_capacity(m * n * n * m);
        for i in 0..m {
            for j in 0..n {
                for r in 0..n {
                    for s in 0..m {
                        lambda.push(f(i, j, r, s));
                    }
                }
            }
        }
        FiniteDimTwistSpec { m, n, lambda }
    }

    /// `τ(e_i ⊗ f_j) = f_j ⊗ e_i`.
    pub fn flip(m: usize, n: usize) -> Self {
        Self::from_fn(m, n, |i, j, r, s| FieldElement::from_int((r == j && s == i) as i64))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.lambda
    }

    pub fn get(&self, i: usize, j: usize, r: usize, s: usize) -> &FieldElement {
        &self.lambda[((i * self.n + j) * self.n + r) * self.m + s]
    }

    /// `M(i, s)`, the `n × n` matrix with entries `M(i, s)_{rj} = λ_{ij}^{rs}`.
    pub fn m_matrix(&self, i: usize, s: usize) -> Matrix {
        let rows = (0..self.n).map(|r| (0..self.n).map(|j| self.get(i, j, r, s).clone()).collect()).collect();
        Matrix::from_rows(rows).expect("square")
    }

    /// The dual family: the `m × m` matrix with entries `λ_{ij}^{rs}` at `(i, s)`.
    pub fn dual_matrix(&self, r: usize, j: usize) -> Matrix {
        let rows = (0..self.m).map(|i| (0..self.m).map(|s| self.get(i, j, r, s).clone()).collect()).collect();
        Matrix::from_rows(rows).expect("square")
    }

    /// Matrix of `τ` from `k^m ⊗ k^n` (index `i n + j`) to `k^n ⊗ k^m`
    /// (index `r m + s`).
    pub fn matrix(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n * self.m, self.m * self.n);
        for i in 0..self.m {
            for j in 0..self.n {
                for r in 0..self.n {
                    for s in 0..self.m {
                        t.set(r * self.m + s, i * self.n + j, self.get(i, j, r, s).clone());
                    }
                }
            }
        }
        t
    }
}

/// Verdict of the matrix criteria with the failed conditions named.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CriteriaReport {
    pub failures: Vec<String>,
}

impl CriteriaReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that for each `s` the matrices `M(1,s) .. M(m,s)` are orthogonal
/// idempotents summing to the identity, and the same for the dual family
/// indexed by `j` for each `r`. Together these say that `τ` satisfies the
/// unit and multiplication identities for `A = k^n`, `B = k^m`.
pub fn fd_check_matrix_criteria(spec: &FiniteDimTwistSpec) -> CriteriaReport {
    let mut failures = Vec::new();
    let families = [
        ("M", spec.m, spec.n, (0..spec.m).map(|s| (0..spec.m).map(|i| spec.m_matrix(i, s)).collect::<Vec<_>>()).collect::<Vec<_>>()),
        ("dual", spec.n, spec.m, (0..spec.n).map(|r| (0..spec.n).map(|j| spec.dual_matrix(r, j)).collect::<Vec<_>>()).collect()),
    ];
    for (label, _, size, groups) in &families {
        for (outer, mats) in groups.iter().enumerate() {
            for (a, x) in mats.iter().enumerate() {
                for (b, y) in mats.iter().enumerate() {
                    let p = x.mul(y).expect("square");
                    if a == b && p != *x {
                        failures.push(format!("{label} matrix ({a}, {outer}) is not idempotent"));
                    } else if a != b && !p.is_zero() {
                        failures.push(format!("{label} matrices ({a}, {outer}) and ({b}, {outer}) are not orthogonal"));
                    }
                }
            }
            let sum = mats.iter().fold(Matrix::zeros(*size, *size), |acc, x| acc.add(x));
            if !sum.is_identity() {
                failures.push(format!("{label} matrices for index {outer} do not sum to the identity"));
            }
        }
    }
    CriteriaReport { failures }
}

/// Structure constants of `A ⊗_τ B` on the basis `f_r ⊗ e_s` (index
/// `r m + s`), without checking associativity.
pub fn fd_ttp_table(a: &FiniteDimAlgebra, b: &FiniteDimAlgebra, spec: &FiniteDimTwistSpec) -> Result<FiniteDimAlgebra> {
    let (n, m) = (a.dim(), b.dim());
    if spec.n != n || spec.m != m {
        return Err(Error::Shape(format!("twist is for k^{} and k^{}, algebras have dimensions {n} and {m}", spec.n, spec.m)));
    }
    let dim = n * m;
    let mut table = vec![vec![zeros(dim); dim]; dim];
    for p in 0..n {
        for q in 0..m {
            for c in 0..n {
                for d in 0..m {
                    // (f_p ⊗ e_q)(f_c ⊗ e_d) = Σ λ_{qc}^{rs} f_p f_r ⊗ e_s e_d
                    let out = &mut table[p * m + q][c * m + d];
                    for r in 0..n {
                        for s in 0..m {
                            let l = spec.get(q, c, r, s);
                            if l.is_zero() {
                                continue;
                            }
                            let x = a.product(p, r);
                            let y = b.product(s, d);
                            for (u, xu) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                let lx = l * xu;
                                for (v, yv) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                                    out[u * m + v] = &out[u * m + v] + &(&lx * yv);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut unit = zeros(dim);
    for (u, x) in a.unit().iter().enumerate() {
        for (v, y) in b.unit().iter().enumerate() {
            unit[u * m + v] = x * y;
        }
    }
    FiniteDimAlgebra::unchecked(table, unit)
}

/// `A ⊗_τ B` with unital associativity verified exactly.
pub fn fd_build_ttp(a: &FiniteDimAlgebra, b: &FiniteDimAlgebra, spec: &FiniteDimTwistSpec) -> Result<FiniteDimAlgebra> {
    let alg = fd_ttp_table(a, b, spec)?;
    if let Some(w) = alg.unit_failure() {
        return Err(Error::UnitViolation(w));
    }
    if let Some(w) = alg.associativity_failure() {
        return Err(Error::AssociativityFailure(w));
    }
    Ok(alg)
}

/// The twisting map `k^n ⊗ k^n → k^n ⊗ k^n` whose product is the matrix
/// algebra `M_n(k)`, built from vectors `v_1 .. v_n` with no zero entries
/// forming an invertible matrix `P` (columns `v_s`):
/// `λ_{ij}^{rs} = P_{ri} (P^{-1})_{ij} P_{js} / P_{rs}`.
///
/// It comes from realising `f_r = E_rr` and `e_s = P E_ss P^{-1}` inside
/// `M_n(k)` and expanding `e_i f_j` in the basis `f_r e_s`.
pub fn invertible_vectors_family(vectors: &[Vec<FieldElement>]) -> Result<FiniteDimTwistSpec> {
    let n = vectors.len();
    if n == 0 || vectors.iter().any(|v| v.len() != n) {
        return Err(Error::Shape("need n vectors of length n".into()));
    }
    if vectors.iter().flatten().any(FieldElement::is_zero) {
        return Err(Error::Shape("vectors must have no zero entries".into()));
    }
    let p = Matrix::from_columns(vectors, n);
    let inv = p.inverse()?;
    let mut lambda = Vec::with_capacity(n * n * n * n);
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let num = &(p.get(r, i) * inv.get(i, j)) * p.get(j, s);
                    lambda.push((&num / p.get(r, s))?);
                }
            }
        }
    }
    FiniteDimTwistSpec::new(n, n, lambda)
}

/// Criteria over machine integers, for exhaustive searches over small
/// integer coefficients.
fn criteria_hold_i64(m: usize, n: usize, lambda: &[i64]) -> bool {
    let get = |i: usize, j: usize, r: usize, s: usize| lambda[((i * n + j) * n + r) * m + s];
    for s in 0..m {
        for r in 0..n {
            for j in 0..n {
                if (0..m).map(|i| get(i, j, r, s)).sum::<i64>() != (r == j) as i64 {
                    return false;
                }
                for i in 0..m {
                    for k in 0..m {
                        // (M(i,s) M(k,s))_{rj} = Σ_t λ_{it}^{rs} λ_{kj}^{ts}
                        let p: i64 = (0..n).map(|t| get(i, t, r, s) * get(k, j, t, s)).sum();
                        if p != if i == k { get(i, j, r, s) } else { 0 } {
                            return false;
                        }
                    }
                }
            }
        }
    }
    for r in 0..n {
        for i in 0..m {
            for s in 0..m {
                if (0..n).map(|j| get(i, j, r, s)).sum::<i64>() != (i == s) as i64 {
                    return false;
                }
                for j in 0..n {
                    for l in 0..n {
                        let p: i64 = (0..m).map(|t| get(i, j, r, t) * get(t, l, r, s)).sum();
                        if p != if j == l { get(i, j, r, s) } else { 0 } {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Idempotent `n × n` integer matrices with entries from `values`.
fn integer_idempotents(n: usize, values: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut m = vec![0i64; n * n];
    let total = values.len().pow((n * n) as u32);
    for code in 0..total {
        let mut c = code;
        for x in m.iter_mut() {
            *x = values[c % values.len()];
            c /= values.len();
        }
        let idempotent = (0..n).all(|r| (0..n).all(|j| (0..n).map(|t| m[r * n + t] * m[t * n + j]).sum::<i64>() == m[r * n + j]));
        if idempotent {
            out.push(m.clone());
        }
    }
    out
}

/// Twisting maps `k^2 ⊗ k^n → k^n ⊗ k^2` with `M(0, s)` integer idempotents
/// with entries from `values`. Since `M(0, s) + M(1, s) = 1`, these are all
/// such maps whose coefficients lie in `values ∪ (1 - values)`.
pub fn integer_twisting_maps(n: usize, values: &[i64]) -> Vec<FiniteDimTwistSpec> {
    let idem = integer_idempotents(n, values);
    let mut out = Vec::new();
    for m0 in &idem {
        for m1 in &idem {
            let ms = [m0, m1];
            let lambda: Vec<i64> = (0..2)
                .flat_map(|i| {
                    (0..n).flat_map(move |j| {
                        (0..n).flat_map(move |r| {
                            (0..2).map(move |s| {
                                let v = ms[s][r * n + j];
                                if i == 0 { v } else { (r == j) as i64 - v }
                            })
                        })
                    })
                })
                .collect();
            if criteria_hold_i64(2, n, &lambda) {
                out.push(FiniteDimTwistSpec::new(2, n, lambda.into_iter().map(FieldElement::from_int).collect()).expect("shape"));
            }
        }
    }
    out
}

/// A twisting map `k^2 ⊗ k^2 → k^2 ⊗ k^2` whose matrices `M(s, s)` have
/// entries 0 or 1 and whose twisted tensor product is not semisimple; the
/// first one found by enumeration.
pub fn standard_example() -> FiniteDimTwistSpec {
    let k2 = FiniteDimAlgebra::componentwise(2);
    integer_twisting_maps(2, &[-1, 0, 1])
        .into_iter()
        .filter(|spec| (0..2).all(|s| (0..2).all(|r| (0..2).all(|j| spec.get(s, j, r, s).is_zero() || spec.get(s, j, r, s).is_one()))))
        .find(|spec| fd_ttp_table(&k2, &k2, spec).is_ok_and(|alg| !alg.radical().is_empty()))
        .expect("the search space contains non-semisimple products")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_gives_componentwise_product() {
        let spec = FiniteDimTwistSpec::flip(2, 2);
        assert!(fd_check_matrix_criteria(&spec).holds());
        let k2 = FiniteDimAlgebra::componentwise(2);
        let alg = fd_build_ttp(&k2, &k2, &spec).unwrap();
        assert_eq!(alg, FiniteDimAlgebra::componentwise(4));
    }

    #[test]
    fn non_idempotent_is_named() {
        let mut lambda = FiniteDimTwistSpec::flip(2, 2).coefficients().to_vec();
        lambda[0] = FieldElement::from_int(2);
        let report = fd_check_matrix_criteria(&FiniteDimTwistSpec::new(2, 2, lambda).unwrap());
        assert!(report.failures.iter().any(|f| f.contains("not idempotent")));
    }

    #[test]
    fn integer_and_exact_criteria_agree() {
        let found = integer_twisting_maps(2, &[-1, 0, 1]);
        assert_eq!(found.len(), 7);
        for spec in found {
            assert!(fd_check_matrix_criteria(&spec).holds());
        }
    }
}
