//! Words and noncommutative polynomials over [`FieldElement`] scalars.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{gcd, FieldElement, ParamSpace, Poly};

/// Sequence of generator indices; the empty word is the unit.
///
/// Ordered by length, then lexicographically by generator index (deglex for
/// generators of degree 1).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize) -> Self {
        Word(alloc::vec![g as u16])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&g| g as usize)
    }

    /// First letter and the remaining suffix.
    pub fn split_first(&self) -> Option<(usize, Word)> {
        let (&g, rest) = self.0.split_first()?;
        Some((g as usize, Word(rest.to_vec())))
    }

    /// Prefix and last letter.
    pub fn split_last(&self) -> Option<(Word, usize)> {
        let (&g, rest) = self.0.split_last()?;
        Some((Word(rest.to_vec()), g as usize))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Named generators with positive degrees.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Alphabet {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(generators: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let mut a = Alphabet::default();
        for (name, deg) in generators {
            a.push(name.into(), deg)?;
        }
        Ok(a)
    }

    /// All generators in degree 1.
    pub fn linear<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(names.into_iter().map(|n| (n, 1)))
    }

    pub fn push(&mut self, name: String, degree: u32) -> Result<usize> {
        if self.names.contains(&name) {
            return Err(Error::DuplicateGenerator(name));
        }
        if degree == 0 {
            return Err(Error::ZeroDegreeGenerator(name));
        }
        self.names.push(name);
        self.degrees.push(degree);
        Ok(self.names.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn degree_of(&self, g: usize) -> u32 {
        self.degrees[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all_linear(&self) -> bool {
        self.degrees.iter().all(|&d| d == 1)
    }

    pub fn word_degree(&self, w: &Word) -> usize {
        w.letters().map(|g| self.degrees[g] as usize).sum()
    }

    pub fn check(&self, p: &NcPoly) -> Result<()> {
        match p.terms.keys().flat_map(|w| w.letters()).find(|&g| g >= self.len()) {
            Some(g) => Err(Error::AlphabetMismatch(g)),
            None => Ok(()),
        }
    }

    /// Product with both factors checked against this alphabet.
    pub fn multiply(&self, p: &NcPoly, q: &NcPoly) -> Result<NcPoly> {
        self.check(p)?;
        self.check(q)?;
        Ok(p.mul(q))
    }

    /// Degree of a homogeneous polynomial, `None` otherwise (or when zero).
    pub fn homogeneous_degree(&self, p: &NcPoly) -> Option<usize> {
        let mut it = p.terms.keys().map(|w| self.word_degree(w));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// All words of the given degree, ascending.
    pub fn words_of_degree(&self, degree: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.fill_words(degree, &mut cur, &mut out);
        out.sort();
        out
    }

    fn fill_words(&self, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Word>) {
        if left == 0 {
            out.push(Word(cur.clone()));
            return;
        }
        for g in 0..self.len() {
            let d = self.degrees[g] as usize;
            if d <= left {
                cur.push(g as u16);
                self.fill_words(left - d, cur, out);
                cur.pop();
            }
        }
    }

    /// Number of words of the given degree.
    pub fn count_words(&self, degree: usize) -> usize {
        let mut counts = alloc::vec![0usize; degree + 1];
        counts[0] = 1;
        for d in 1..=degree {
            counts[d] = self.degrees.iter().filter(|&&g| g as usize <= d).map(|&g| counts[d - g as usize]).sum();
        }
        counts[degree]
    }

    pub fn word_text(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut out = String::new();
        let mut i = 0;
        let letters = &w.0;
        while i < letters.len() {
            let g = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == g {
                run += 1;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&self.names[g as usize]);
            if run > 1 {
                out.push('^');
                out.push_str(&run.to_string());
            }
            i += run;
        }
        out
    }
}

/// Finite linear combination of words, zero coefficients absent.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, FieldElement>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(FieldElement::one())
    }

    pub fn scalar(c: FieldElement) -> Self {
        Self::term(c, Word::empty())
    }

    pub fn generator(g: usize) -> Self {
        Self::term(FieldElement::one(), Word::letter(g))
    }

    pub fn word(w: Word) -> Self {
        Self::term(FieldElement::one(), w)
    }

    pub fn term(c: FieldElement, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, FieldElement)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> FieldElement {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &FieldElement)> {
        self.terms.iter().next_back()
    }

    /// Scalar value when only the empty word occurs.
    pub fn as_scalar(&self) -> Option<FieldElement> {
        match self.terms.len() {
            0 => Some(FieldElement::zero()),
            1 => {
                let (w, c) = self.terms.iter().next().unwrap();
                w.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &FieldElement) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    /// Concatenation product, extended bilinearly.
    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> NcPoly {
        (0..e).fold(NcPoly::one(), |acc, _| acc.mul(self))
    }

    /// Scaled so the leading word has coefficient 1.
    pub fn monic(&self) -> NcPoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// Scalar multiple with polynomial coefficients of coprime content and a
    /// positive leading coefficient on the leading word.
    pub fn primitive(&self) -> NcPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = Poly::one();
        for c in self.terms.values() {
            let d = c.denominator();
            let g = gcd(&den, d);
            den = &den * &d.div_exact(&g).unwrap();
        }
        let scaled: Vec<(Word, Poly)> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let p = (c * &FieldElement::from_poly(den.clone())).numerator().clone();
                (w.clone(), p)
            })
            .collect();
        let mut g = Poly::zero();
        for (_, p) in &scaled {
            g = gcd(&g, p);
        }
        let mut polys: Vec<(Word, Poly)> =
            scaled.into_iter().map(|(w, p)| (w, p.div_exact(&g).unwrap())).collect();
        let lcm = polys
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, (_, p)| num_integer::Integer::lcm(&acc, &p.coefficient_denominator_lcm()));
        let lcm = num_rational::BigRational::from_integer(lcm);
        for (_, p) in polys.iter_mut() {
            *p = p.scale(&lcm);
        }
        let content = polys
            .iter()
            .fold(num_bigint::BigInt::from(0), |acc, (_, p)| num_integer::Integer::gcd(&acc, &p.coefficient_numerator_gcd()));
        let mut factor = num_rational::BigRational::from_integer(content).recip();
        if polys.last().unwrap().1.leading_is_negative() {
            factor = -factor;
        }
        NcPoly::from_terms(polys.into_iter().map(|(w, p)| (w, FieldElement::from_poly(p.scale(&factor)))))
    }

    /// Applies the `i`-th matrix to the `i`-th tensor factor of every word.
    ///
    /// Column `j` of a matrix holds the image of generator `j`.
    pub fn apply_tensor_map(&self, maps: &[Matrix], alphabet: &Alphabet) -> Result<NcPoly> {
        if !alphabet.all_linear() {
            return Err(Error::NonLinearGenerators);
        }
        alphabet.check(self)?;
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            if w.len() != maps.len() {
                return Err(Error::LengthMismatch { expected: maps.len(), found: w.len() });
            }
            let mut acc = NcPoly::scalar(c.clone());
            for (g, m) in w.letters().zip(maps) {
                acc = acc.mul(&linear_image(m, g));
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Image under the algebra map sending generator `g` to `images[g]`.
    pub fn substitute(&self, images: &[NcPoly]) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NcPoly::scalar(c.clone());
            for g in w.letters() {
                acc = acc.mul(&images[g]);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Image under the algebra map given by a generator matrix.
    pub fn apply_linear(&self, m: &Matrix) -> NcPoly {
        let images: Vec<NcPoly> = (0..m.ncols()).map(|g| linear_image(m, g)).collect();
        self.substitute(&images)
    }

    pub fn map_coefficients(&self, f: impl Fn(&FieldElement) -> FieldElement) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet, space: &'a ParamSpace) -> DisplayNc<'a> {
        DisplayNc { poly: self, alphabet, space }
    }

    pub fn to_text(&self, alphabet: &Alphabet, space: &ParamSpace) -> String {
        self.display(alphabet, space).to_string()
    }
}

/// Generator `g` mapped by the matrix: `sum_i m[i][g] x_i`.
pub fn linear_image(m: &Matrix, g: usize) -> NcPoly {
    NcPoly::from_terms((0..m.nrows()).map(|i| (Word::letter(i), m.get(i, g).clone())))
}

pub struct DisplayNc<'a> {
    poly: &'a NcPoly,
    alphabet: &'a Alphabet,
    space: &'a ParamSpace,
}

impl fmt::Display for DisplayNc<'_> {
    // Terms in descending word order: `x3*x1 - a*x1*x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let coeff = abs.to_text(self.space);
            let compound = abs.denominator().is_one() && abs.numerator().len() > 1;
            if w.is_empty() {
                if compound {
                    write!(f, "({coeff})")?;
                } else {
                    f.write_str(&coeff)?;
                }
                continue;
            }
            if !abs.is_one() {
                if compound {
                    write!(f, "({coeff})*")?;
                } else {
                    write!(f, "{coeff}*")?;
                }
            }
            f.write_str(&self.alphabet.word_text(w))?;
        }
        Ok(())
    }
}
