//! Exact scalars: rational functions in named parameters over the rationals.
//!
//! Parameters are indeterminates, so `q^2 - 1` is a nonzero scalar until an
//! explicit [`FieldElement::substitute`] or [`FieldElement::specialize`] says
//! otherwise. Elements do not carry parameter names; a [`ParamSpace`] shared by
//! a session maps indices to names for parsing and printing.

mod poly;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub use poly::{gcd, Monomial, Poly};

use crate::error::{Error, Result};

/// Ordered parameter names. Declaration order fixes the monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamSpace {
    names: Vec<String>,
}

impl ParamSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_names<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Self {
        let mut space = Self::new();
        for n in names {
            space.declare(&n.into());
        }
        space
    }

    /// Index of `name`, appending it if absent.
    pub fn declare(&mut self, name: &str) -> usize {
        match self.index_of(name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// The parameter as a field element; declares it if needed.
    pub fn param(&mut self, name: &str) -> FieldElement {
        FieldElement::param(self.declare(name))
    }

    /// Combines two spaces when one extends the other.
    pub fn merge(&self, other: &ParamSpace) -> Result<ParamSpace> {
        let (long, short) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        if long.names[..short.len()] == short.names[..] {
            Ok(long.clone())
        } else {
            Err(Error::ParamMismatch(alloc::format!("{:?} vs {:?}", self.names, other.names)))
        }
    }
}

/// A rational function in canonical form: numerator and denominator coprime,
/// denominator monic in its deglex-leading monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    num: Poly,
    den: Poly,
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        FieldElement { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        FieldElement { num: Poly::from_int(n), den: Poly::one() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        FieldElement { num: Poly::constant(r), den: Poly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn param(index: usize) -> Self {
        FieldElement { num: Poly::var(index), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        FieldElement { num: p, den: Poly::one() }
    }

    /// Builds `num / den` and brings it to canonical form.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = c.recip();
            return FieldElement { num: num.scale(&inv), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::rescale(num, den)
    }

    // Assumes coprime; makes the denominator monic.
    fn rescale(num: Poly, den: Poly) -> Self {
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if lc.is_one() {
            FieldElement { num, den }
        } else {
            let inv = lc.recip();
            FieldElement { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value when no parameter occurs.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::rescale(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(FieldElement { num: base.num.pow(k), den: base.den.pow(k) }.recanonical())
    }

    // Powers of a canonical element stay coprime; only the monic scaling may drift.
    fn recanonical(self) -> Self {
        Self::rescale(self.num, self.den)
    }

    /// Idempotent canonicalisation (elements are always canonical; this re-runs it).
    pub fn normalized(&self) -> Self {
        Self::normalize(self.num.clone(), self.den.clone())
    }

    /// Partial substitution of rational values for parameters.
    pub fn substitute(&self, values: &[Option<BigRational>], space: &ParamSpace) -> Result<Self> {
        let den = self.den.substitute(values);
        if den.is_zero() {
            let name = (0..values.len())
                .find(|&i| values[i].is_some() && self.den.degree_in(i) > 0)
                .and_then(|i| space.names().get(i).cloned())
                .unwrap_or_default();
            return Err(Error::ZeroDenominatorAtPoint(name));
        }
        Ok(Self::normalize(self.num.substitute(values), den))
    }

    /// Full evaluation at a point given by parameter name.
    pub fn specialize(&self, assignment: &[(String, BigRational)], space: &ParamSpace) -> Result<BigRational> {
        let mut values: Vec<Option<BigRational>> = alloc::vec![None; space.len()];
        for (name, v) in assignment {
            if let Some(i) = space.index_of(name) {
                values[i] = Some(v.clone());
            }
        }
        for (i, v) in values.iter().enumerate() {
            if v.is_none() && (self.num.degree_in(i) > 0 || self.den.degree_in(i) > 0) {
                return Err(Error::MissingAssignment(space.names()[i].clone()));
            }
        }
        let v = self.substitute(&values, space)?;
        Ok(v.as_rational().expect("all parameters assigned"))
    }

    /// Sign of the deglex-leading numerator coefficient.
    pub fn is_negative(&self) -> bool {
        self.num.leading_is_negative()
    }

    pub fn display<'a>(&'a self, space: &'a ParamSpace) -> Displayed<'a> {
        Displayed { value: self, space }
    }

    /// Printed form using `space` for names.
    pub fn to_text(&self, space: &ParamSpace) -> String {
        self.display(space).to_string()
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return FieldElement { num, den: Poly::one() };
            }
            return FieldElement::normalize(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let (d1, d2) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (self.den.div_exact(&g).unwrap(), rhs.den.div_exact(&g).unwrap())
        };
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        let den = &self.den * &d2;
        if g.is_one() {
            // a/b + c/d with gcd(b, d) = 1 is already reduced.
            if num.is_zero() {
                return FieldElement::zero();
            }
            return FieldElement::rescale(num, den);
        }
        FieldElement::normalize(num, den)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() || rhs.is_zero() {
            return FieldElement::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return FieldElement { num: &self.num * &rhs.num, den: Poly::one() };
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        FieldElement::rescale(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &FieldElement {
    type Output = Result<FieldElement>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self * &rhs.inv()?)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

pub struct Displayed<'a> {
    value: &'a FieldElement,
    space: &'a ParamSpace,
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, space: &ParamSpace) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        match space.names().get(i) {
            Some(n) => f.write_str(n)?,
            None => write!(f, "p{i}")?,
        }
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Writes a polynomial with descending deglex terms: `q^2 - 1`.
pub(crate) fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, space: &ParamSpace) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        if m.is_one() {
            write_rational(f, &abs)?;
        } else {
            if !abs.is_one() {
                write_rational(f, &abs)?;
                f.write_str("*")?;
            }
            write_monomial(f, m, space)?;
        }
    }
    Ok(())
}

struct PolyDisplay<'a>(&'a Poly, &'a ParamSpace);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.0, self.1)
    }
}

impl fmt::Display for Displayed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let FieldElement { num, den } = self.value;
        if den.is_one() {
            return write_poly(f, num, self.space);
        }
        if num.len() > 1 {
            write!(f, "({})", PolyDisplay(num, self.space))?;
        } else {
            write_poly(f, num, self.space)?;
        }
        f.write_str("/")?;
        let bare = den.len() == 1 && {
            let (m, c) = den.leading().unwrap();
            c.is_one() && m.exponents().iter().filter(|&&e| e > 0).count() == 1
        };
        if bare {
            write_poly(f, den, self.space)
        } else {
            write!(f, "({})", PolyDisplay(den, self.space))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_scalar;
    use num_traits::Zero;

    fn space() -> ParamSpace {
        ParamSpace::with_names(["a", "b", "c", "d", "q"])
    }

    #[test]
    fn rational_sum() {
        let x = FieldElement::from_ratio(1, 2) + FieldElement::from_ratio(1, 3);
        assert_eq!(x, FieldElement::from_ratio(5, 6));
    }

    #[test]
    fn q_minus_q_inverse() {
        let mut s = space();
        let q = s.param("q");
        let qi = q.inv().unwrap();
        assert!((&q * &qi).is_one());
        let d = &q - &qi;
        assert_eq!(d.to_text(&s), "(q^2 - 1)/q");
        assert_eq!(parse_scalar("(q^2 - 1)/q", &s).unwrap(), d);
    }

    #[test]
    fn inverse_of_determinant() {
        let s = space();
        let det = parse_scalar("a*d - b*c", &s).unwrap();
        let inv = det.inv().unwrap();
        assert_eq!(inv.to_text(&s), "1/(a*d - b*c)");
        assert!((&det * &inv).is_one());
        assert_eq!(FieldElement::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn specialization() {
        let s = space();
        let x = parse_scalar("q - q^-1", &s).unwrap();
        let at = |v: i64| alloc::vec![("q".to_string(), BigRational::from_integer(v.into()))];
        assert!(x.specialize(&at(1), &s).unwrap().is_zero());
        assert_eq!(x.specialize(&at(2), &s).unwrap(), BigRational::new(3.into(), 2.into()));
        let y = parse_scalar("1/q", &s).unwrap();
        assert_eq!(y.specialize(&at(0), &s), Err(Error::ZeroDenominatorAtPoint("q".into())));
        assert_eq!(y.specialize(&[], &s), Err(Error::MissingAssignment("q".into())));
    }

    #[test]
    fn cancellation_is_canonical() {
        let s = space();
        let x = parse_scalar("(a^2 - b^2)/(2*a + 2*b)", &s).unwrap();
        assert_eq!(x, parse_scalar("1/2*a - 1/2*b", &s).unwrap());
        assert_eq!(x.normalized(), x);
    }
}
