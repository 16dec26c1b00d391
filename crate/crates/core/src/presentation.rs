//! Graded presentations `k<generators>/(relations)` and the builtin corpus.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::freealg::{Alphabet, NcPoly, Word};
use crate::scalars::{FieldElement, ParamSpace};
use crate::text::parse_nc;

/// Generators with positive degrees and homogeneous relations of degree at
/// least two. Relations are stored monic in their leading word.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedPresentation {
    pub name: String,
    pub params: ParamSpace,
    pub alphabet: Alphabet,
    relations: Vec<NcPoly>,
}

impl GradedPresentation {
    pub fn new(name: &str, params: ParamSpace, alphabet: Alphabet, relations: Vec<NcPoly>) -> Result<Self> {
        let mut p = GradedPresentation { name: name.to_string(), params, alphabet, relations: Vec::new() };
        for r in relations {
            p.push_relation(r)?;
        }
        Ok(p)
    }

    /// Parses each relation with the polynomial grammar.
    pub fn from_text(name: &str, params: ParamSpace, alphabet: Alphabet, relations: &[&str]) -> Result<Self> {
        let rels = relations.iter().map(|r| parse_nc(r, &alphabet, &params)).collect::<Result<Vec<_>>>()?;
        Self::new(name, params, alphabet, rels)
    }

    pub fn push_relation(&mut self, r: NcPoly) -> Result<()> {
        self.alphabet.check(&r)?;
        if r.is_zero() {
            return Ok(());
        }
        let text = r.primitive().to_text(&self.alphabet, &self.params);
        match self.alphabet.homogeneous_degree(&r) {
            None => Err(Error::InhomogeneousRelation(text)),
            Some(d) if d < 2 => Err(Error::LowDegreeRelation(text)),
            Some(_) => {
                self.relations.push(r.monic());
                Ok(())
            }
        }
    }

    pub fn relations(&self) -> &[NcPoly] {
        self.relations.as_slice()
    }

    pub fn relation_degree(&self, i: usize) -> usize {
        self.alphabet.homogeneous_degree(&self.relations[i]).unwrap_or(0)
    }

    pub fn max_relation_degree(&self) -> usize {
        (0..self.relations.len()).map(|i| self.relation_degree(i)).max().unwrap_or(0)
    }

    pub fn generated_in_degree_one(&self) -> bool {
        self.alphabet.all_linear()
    }

    pub fn require_degree_one(&self) -> Result<()> {
        if self.generated_in_degree_one() {
            Ok(())
        } else {
            Err(Error::NonLinearGenerators)
        }
    }

    /// Relations with denominators cleared, as printed text.
    pub fn relation_texts(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.primitive().to_text(&self.alphabet, &self.params)).collect()
    }

    pub fn parse(&self, text: &str) -> Result<NcPoly> {
        parse_nc(text, &self.alphabet, &self.params)
    }

    /// Same generators and parameters, other relations.
    pub fn with_relations(&self, name: &str, relations: Vec<NcPoly>) -> Result<Self> {
        Self::new(name, self.params.clone(), self.alphabet.clone(), relations)
    }
}

/// `k[x_1, ..., x_n]`; names x, y, z for n ≤ 3.
pub fn polynomial(n: usize) -> Result<GradedPresentation> {
    let names: Vec<String> = if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    };
    polynomial_on(&format!("polynomial({n})"), &names)
}

/// Commutative polynomial ring on the given degree-1 generator names.
pub fn polynomial_on(name: &str, names: &[String]) -> Result<GradedPresentation> {
    let alphabet = Alphabet::linear(names.iter().cloned())?;
    let mut rels = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            rels.push(commutator(i, j, &FieldElement::one()));
        }
    }
    GradedPresentation::new(name, ParamSpace::new(), alphabet, rels)
}

/// `c·x_i x_j − x_j x_i`.
fn commutator(i: usize, j: usize, c: &FieldElement) -> NcPoly {
    NcPoly::from_terms([(Word(alloc::vec![i as u16, j as u16]), c.clone()), (Word(alloc::vec![j as u16, i as u16]), -FieldElement::one())])
}

/// `k<x,y>/(q·xy + yx)`.
pub fn quantum_plane(q: &str) -> Result<GradedPresentation> {
    let params = ParamSpace::with_names([q]);
    GradedPresentation::from_text("quantum_plane", params, Alphabet::linear(["x", "y"])?, &[&format!("{q}*x*y + y*x")])
}

/// The Zhang twist of `k[x1..x4]` by `x1 -> a x1, x2 -> a x2`.
pub fn zhang_running_example(a: &str) -> Result<GradedPresentation> {
    let params = ParamSpace::with_names([a]);
    let rels = [
        "x1*x2 - x2*x1".to_string(),
        format!("{a}*x1*x3 - x3*x1"),
        format!("{a}*x1*x4 - x4*x1"),
        format!("{a}*x2*x3 - x3*x2"),
        format!("{a}*x2*x4 - x4*x2"),
        "x3*x4 - x4*x3".to_string(),
    ];
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    GradedPresentation::from_text("zhang_running_example", params, Alphabet::linear(["x1", "x2", "x3", "x4"])?, &rels)
}

/// The quadratic family `A(rho)` on four generators.
pub fn a_rho(rho: &str) -> Result<GradedPresentation> {
    let params = ParamSpace::with_names([rho]);
    let r = rho;
    let rels = [
        format!("{r}^2*x1*x2 + x2*x1"),
        format!("{r}*x1*x3 - x3*x1"),
        format!("{r}*x1*x4 + x4*x1"),
        format!("x2*x3 - {r}*x3*x2"),
        format!("x2*x4 + {r}*x4*x2"),
        "x3*x4 + x4*x3 + x1*x2".to_string(),
    ];
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    GradedPresentation::from_text("A_rho", params, Alphabet::linear(["x1", "x2", "x3", "x4"])?, &rels)
}

/// `k[u,v] ⊗ k[x,y]` twisted by the diagonal scalars a, b, c, d.
pub fn ttp_running_example(names: [&str; 4]) -> Result<GradedPresentation> {
    let [a, b, c, d] = names;
    let params = ParamSpace::with_names(names);
    let rels = [
        "u*v - v*u".to_string(),
        format!("{a}*u*x - x*u"),
        format!("{c}*u*y - y*u"),
        format!("{b}*v*x - x*v"),
        format!("{d}*v*y - y*v"),
        "x*y - y*x".to_string(),
    ];
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    GradedPresentation::from_text("ttp_running_example", params, Alphabet::linear(["u", "v", "x", "y"])?, &rels)
}

/// Generator index of `x_{ij}` (1-based) in the row-major alphabet of `O_q(M_n)`.
pub fn oq_index(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n + (j - 1)
}

/// `O_q(M_n)`: generators `x11 .. xnn` in row-major order and the four
/// families of quadratic relations, the last one in the form
/// `x_kv x_us = x_us x_kv + (q - q^-1) x_ks x_uv` for `s < v`, `u < k`.
pub fn oq_m(n: usize, q: &str) -> Result<GradedPresentation> {
    let mut params = ParamSpace::new();
    let qe = params.param(q);
    oq_m_with(n, params, qe)
}

/// [`oq_m`] with `q` any nonzero scalar over `params`.
pub fn oq_m_with(n: usize, params: ParamSpace, q: FieldElement) -> Result<GradedPresentation> {
    oq_relations(n, params, q, false)
}

/// The variant with `x_us x_kv = x_kv x_us + (q - q^-1) x_ks x_uv` for
/// `s < v`, `u < k`. Its comultiplication is not an algebra map and it is
/// not of PBW type for `n = 3`; kept to document that.
pub fn oq_m_swapped(n: usize, q: &str) -> Result<GradedPresentation> {
    let mut params = ParamSpace::new();
    let qe = params.param(q);
    oq_relations(n, params, qe, true)
}

fn oq_relations(n: usize, params: ParamSpace, qe: FieldElement, swapped: bool) -> Result<GradedPresentation> {
    if !(2..=9).contains(&n) {
        return Err(Error::UnsupportedSize(n));
    }
    if qe.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let names = (1..=n).flat_map(|i| (1..=n).map(move |j| format!("x{i}{j}")));
    let alphabet = Alphabet::linear(names)?;
    let x = |i: usize, j: usize| oq_index(n, i, j) as u16;
    let w = |a: u16, b: u16| Word(alloc::vec![a, b]);
    let one = FieldElement::one();
    let mut rels = Vec::new();
    // q x_ks x_us = x_us x_ks for k < u
    for s in 1..=n {
        for k in 1..=n {
            for u in k + 1..=n {
                rels.push(NcPoly::from_terms([(w(x(k, s), x(u, s)), qe.clone()), (w(x(u, s), x(k, s)), -&one)]));
            }
        }
    }
    // q x_ks x_kv = x_kv x_ks for s < v
    for k in 1..=n {
        for s in 1..=n {
            for v in s + 1..=n {
                rels.push(NcPoly::from_terms([(w(x(k, s), x(k, v)), qe.clone()), (w(x(k, v), x(k, s)), -&one)]));
            }
        }
    }
    let q_minus = &qe - &qe.inv()?;
    for s in 1..=n {
        for v in s + 1..=n {
            for k in 1..=n {
                for u in 1..=n {
                    if k < u {
                        // x_us x_kv = x_kv x_us
                        rels.push(NcPoly::from_terms([(w(x(u, s), x(k, v)), one.clone()), (w(x(k, v), x(u, s)), -&one)]));
                    } else if u < k {
                        let (lhs, rhs) = if swapped { (w(x(u, s), x(k, v)), w(x(k, v), x(u, s))) } else { (w(x(k, v), x(u, s)), w(x(u, s), x(k, v))) };
                        rels.push(NcPoly::from_terms([(lhs, one.clone()), (rhs, -&one), (w(x(k, s), x(u, v)), -&q_minus)]));
                    }
                }
            }
        }
    }
    GradedPresentation::new(&format!("oq_m({n})"), params, alphabet, rels)
}

/// Looks up a corpus entry by call syntax, e.g. `polynomial(3)`,
/// `quantum_plane(q)`, `ttp_running_example(a,b,c,d)`, `oq_m(2,q)`.
/// Identifier arguments rename the parameters; they may be omitted.
pub fn builtin_corpus(spec: &str) -> Result<GradedPresentation> {
    let spec = spec.trim();
    let (name, args) = match spec.find('(') {
        Some(open) => {
            let close = spec.rfind(')').filter(|&c| c > open).ok_or_else(|| Error::UnknownCorpusEntry(spec.to_string()))?;
            let args: Vec<&str> = spec[open + 1..close].split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            (spec[..open].trim(), args)
        }
        None => (spec, Vec::new()),
    };
    let unknown = || Error::UnknownCorpusEntry(spec.to_string());
    let param = |k: usize, default: &'static str| -> &str { args.get(k).copied().unwrap_or(default) };
    let number = |k: usize| -> Result<usize> { args.get(k).and_then(|s| s.parse().ok()).ok_or_else(unknown) };
    match name {
        "polynomial" => polynomial(number(0)?),
        "quantum_plane" => quantum_plane(param(0, "q")),
        "zhang_running_example" => zhang_running_example(param(0, "a")),
        "A_rho" => a_rho(param(0, "rho")),
        "ttp_running_example" => ttp_running_example([param(0, "a"), param(1, "b"), param(2, "c"), param(3, "d")]),
        "oq_m" => oq_m(number(0)?, param(1, "q")),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes() {
        assert_eq!(builtin_corpus("polynomial(2)").unwrap().relations().len(), 1);
        assert_eq!(builtin_corpus("polynomial(4)").unwrap().relations().len(), 6);
        assert_eq!(builtin_corpus("zhang_running_example(a)").unwrap().relations().len(), 6);
        assert_eq!(builtin_corpus("A_rho").unwrap().relations().len(), 6);
        assert_eq!(builtin_corpus("oq_m(2,q)").unwrap().relations().len(), 6);
        assert_eq!(builtin_corpus("oq_m(3)").unwrap().relations().len(), 36);
        assert!(matches!(builtin_corpus("nope(1)"), Err(Error::UnknownCorpusEntry(_))));
    }

    #[test]
    fn printed_relations() {
        let p = builtin_corpus("quantum_plane(q)").unwrap();
        assert_eq!(p.relation_texts(), ["y*x + q*x*y"]);
        let t = builtin_corpus("ttp_running_example(a,b,c,d)").unwrap();
        assert_eq!(t.relation_texts()[1], "x*u - a*u*x");
    }

    #[test]
    fn rejects_bad_relations() {
        let sp = ParamSpace::new();
        let al = Alphabet::linear(["x", "y"]).unwrap();
        let bad = GradedPresentation::from_text("t", sp.clone(), al.clone(), &["x*y - x"]);
        assert!(matches!(bad, Err(Error::InhomogeneousRelation(_))));
        let low = GradedPresentation::from_text("t", sp, al, &["x - y"]);
        assert!(matches!(low, Err(Error::LowDegreeRelation(_))));
    }
}
