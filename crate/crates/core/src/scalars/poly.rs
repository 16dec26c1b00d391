use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector over the session parameters. Trailing zeros are trimmed so
/// that equal monomials have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = exp;
        Monomial::from_exponents(e)
    }

    pub fn from_exponents(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let e = (0..n).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial::from_exponents(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        let e = (0..other.0.len()).map(|i| other.exponent(i) - self.exponent(i)).collect();
        Monomial::from_exponents(e)
    }

    pub fn common(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        Monomial::from_exponents((0..n).map(|i| self.0[i].min(other.0[i])).collect())
    }

    fn without(&self, var: usize) -> Monomial {
        let mut e = self.0.clone();
        if var < e.len() {
            e[var] = 0;
        }
        Monomial::from_exponents(e)
    }
}

impl Ord for Monomial {
    // Degree first, then lexicographic with earlier parameters heavier.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exponent(i).cmp(&other.exponent(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(index: usize) -> Self {
        Poly::term(BigRational::one(), Monomial::var(index, 1))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Highest parameter index that occurs.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.0.len().checked_sub(1)).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = c / &lc;
            rem = &rem - &divisor.mul_monomial(&qm).scale(&qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to `var`, lowest power first.
    pub fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exponent(var) as usize].add_term(m.without(var), c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[Poly], var: usize) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(var, k as u32);
            for (m, v) in &c.terms {
                out.add_term(m.mul(&shift), v.clone());
            }
        }
        out
    }

    /// Substitutes rational values for the parameters that have one.
    pub fn substitute(&self, values: &[Option<BigRational>]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::with_capacity(m.0.len());
            for (i, &e) in m.0.iter().enumerate() {
                match values.get(i).and_then(|v| v.as_ref()) {
                    Some(v) if e > 0 => {
                        coeff *= num_traits::pow(v.clone(), e as usize);
                        rest.push(0);
                    }
                    _ => rest.push(e),
                }
            }
            out.add_term(Monomial::from_exponents(rest), coeff);
        }
        out
    }

    /// Least common multiple of the coefficient denominators.
    pub fn coefficient_denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()))
    }

    /// Greatest common divisor of the coefficient numerators (positive).
    pub fn coefficient_numerator_gcd(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| num_integer::Integer::gcd(&acc, c.numer()))
    }

    pub fn leading_is_negative(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

/// Monic greatest common divisor over the rationals.
///
/// Multivariate inputs are handled by dense interpolation: one shared
/// variable is evaluated away, the images are combined with Newton
/// interpolation and the candidate is confirmed by trial division.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.len() == 1 || b.len() == 1 {
        let (single, other) = if a.len() == 1 { (a, b) } else { (b, a) };
        let mut m = single.leading().unwrap().0.clone();
        for (k, _) in other.terms() {
            m = m.common(k);
            if m.is_one() {
                break;
            }
        }
        return Poly::term(BigRational::one(), m);
    }
    let n = a.max_var().unwrap().max(b.max_var().unwrap()) + 1;
    let mut shared = Vec::new();
    for v in 0..n {
        match (a.degree_in(v) > 0, b.degree_in(v) > 0) {
            (true, false) => return gcd(&content_in(a, v), b),
            (false, true) => return gcd(a, &content_in(b, v)),
            (true, true) => shared.push(v),
            (false, false) => {}
        }
    }
    if shared.len() == 1 {
        return univariate_gcd(a, b, shared[0]);
    }
    let y = *shared.iter().min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v))).unwrap();
    interpolated_gcd(a, b, y)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
fn content_in(p: &Poly, var: usize) -> Poly {
    let mut g = Poly::zero();
    for c in p.to_univariate(var).iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn dense(p: &Poly, x: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.degree_in(x) as usize + 1];
    for (m, c) in p.terms() {
        out[m.exponent(x) as usize] = c.clone();
    }
    out
}

fn univariate_gcd(a: &Poly, b: &Poly, x: usize) -> Poly {
    let mut p = dense(a, x);
    let mut q = dense(b, x);
    if p.len() < q.len() {
        core::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let lq = q.last().unwrap().clone();
        while p.len() >= q.len() {
            let f = p.last().unwrap() / &lq;
            let shift = p.len() - q.len();
            for (k, c) in q.iter().enumerate() {
                let t = &f * c;
                p[k + shift] -= t;
            }
            p.pop();
            while p.last().is_some_and(Zero::is_zero) {
                p.pop();
            }
        }
        core::mem::swap(&mut p, &mut q);
    }
    let coeffs: Vec<Poly> = p.into_iter().map(Poly::constant).collect();
    Poly::from_univariate(&coeffs, x).monic()
}

/// Coefficients of `p` as a polynomial in every variable except `y`; each
/// coefficient is univariate in `y`.
fn split_off(p: &Poly, y: usize) -> BTreeMap<Monomial, Poly> {
    let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        out.entry(m.without(y)).or_insert_with(Poly::zero).add_term(Monomial::var(y, m.exponent(y)), c.clone());
    }
    out
}

fn univariate_content(p: &Poly, y: usize) -> Poly {
    let mut g = Poly::zero();
    for c in split_off(p, y).values() {
        g = if g.is_zero() { c.monic() } else { univariate_gcd(&g, c, y) };
        if g.is_one() {
            break;
        }
    }
    g
}

fn eval_at(p: &Poly, y: usize, c: &BigRational) -> Poly {
    let mut values = vec![None; y + 1];
    values[y] = Some(c.clone());
    p.substitute(&values)
}

fn interpolated_gcd(a: &Poly, b: &Poly, y: usize) -> Poly {
    let ca = univariate_content(a, y);
    let cb = univariate_content(b, y);
    let content = univariate_gcd(&ca, &cb, y);
    let a = a.div_exact(&ca).expect("content divides");
    let b = b.div_exact(&cb).expect("content divides");
    let la = split_off(&a, y).pop_last().unwrap().1;
    let lb = split_off(&b, y).pop_last().unwrap().1;
    let gamma = univariate_gcd(&la, &lb, y);
    let bound = (gamma.degree_in(y) + a.degree_in(y).min(b.degree_in(y))) as usize;
    let yvar = Poly::var(y);

    let mut image_lm: Option<Monomial> = None;
    let mut h = Poly::zero();
    let mut newton = Poly::one();
    let mut points = 0usize;
    let mut t = 0i64;
    loop {
        t += 1;
        let c = BigRational::from_integer(t.into());
        if eval_at(&la, y, &c).is_zero() || eval_at(&lb, y, &c).is_zero() {
            continue;
        }
        let g = gcd(&eval_at(&a, y, &c), &eval_at(&b, y, &c));
        if g.is_constant() {
            return content;
        }
        let lm = g.leading().unwrap().0.clone();
        let g = g.scale(&eval_at(&gamma, y, &c).as_constant().unwrap());
        let stable = match &image_lm {
            Some(cur) if lm > *cur => continue,
            Some(cur) if lm == *cur => {
                let diff = &g - &eval_at(&h, y, &c);
                let stable = diff.is_zero();
                if !stable {
                    let w = eval_at(&newton, y, &c).as_constant().unwrap().recip();
                    h = &h + &(&diff * &newton).scale(&w);
                }
                newton = &newton * &(&yvar - &Poly::constant(c));
                points += 1;
                stable
            }
            _ => {
                image_lm = Some(lm);
                h = g;
                newton = &yvar - &Poly::constant(c);
                points = 1;
                false
            }
        };
        if stable || points > bound {
            let cand = h.div_exact(&univariate_content(&h, y)).expect("content divides");
            if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                return (&cand * &content).monic();
            }
            if points > bound {
                image_lm = None;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, &[u32])]) -> Poly {
        let mut out = Poly::zero();
        for (c, e) in terms {
            out.add_term(Monomial::from_exponents(e.to_vec()), BigRational::from_integer((*c).into()));
        }
        out
    }

    #[test]
    fn deglex_prefers_degree_then_earlier_variable() {
        let a = Monomial::var(0, 1);
        let b = Monomial::var(1, 1);
        assert!(a > b);
        assert!(Monomial::var(1, 2) > a);
    }

    #[test]
    fn gcd_of_products() {
        // (a + b)(a - 2c) and (a + b)(b + 1)
        let x = p(&[(1, &[1]), (1, &[0, 1])]);
        let y = p(&[(1, &[1]), (-2, &[0, 0, 1])]);
        let z = p(&[(1, &[0, 1]), (1, &[])]);
        let g = gcd(&(&x * &y), &(&x * &z));
        assert_eq!(g, x.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let x = p(&[(1, &[2]), (-1, &[])]);
        let y = p(&[(1, &[1]), (-2, &[])]);
        assert!(gcd(&x, &y).is_one());
    }

    #[test]
    fn gcd_univariate_common_root() {
        // q^2 - 1 and q^2 + 2q + 1 share q + 1
        let x = p(&[(1, &[2]), (-1, &[])]);
        let y = p(&[(1, &[2]), (2, &[1]), (1, &[])]);
        assert_eq!(gcd(&x, &y), p(&[(1, &[1]), (1, &[])]));
    }

    #[test]
    fn exact_division_roundtrip() {
        let x = p(&[(3, &[1, 1]), (-1, &[0, 2]), (5, &[])]);
        let y = p(&[(1, &[1]), (7, &[0, 0, 1])]);
        let prod = &x * &y;
        assert_eq!(prod.div_exact(&y), Some(x.clone()));
        assert_eq!(p(&[(1, &[1]), (1, &[])]).div_exact(&y), None);
    }

    fn arb_poly() -> impl proptest::strategy::Strategy<Value = Poly> {
        use proptest::prelude::*;
        proptest::collection::vec((-4i64..5, proptest::collection::vec(0u32..3, 3)), 1..4).prop_map(|ts| {
            let mut out = Poly::zero();
            for (c, e) in ts {
                out.add_term(Monomial::from_exponents(e), BigRational::from_integer(c.into()));
            }
            out
        })
    }

    proptest::proptest! {
        #[test]
        fn gcd_divides_and_contains_common_factor(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            proptest::prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
            let d = gcd(&(&f * &g), &(&f * &h));
            proptest::prop_assert!((&f * &g).div_exact(&d).is_some());
            proptest::prop_assert!((&f * &h).div_exact(&d).is_some());
            proptest::prop_assert!(d.div_exact(&f).is_some());
        }
    }
}
