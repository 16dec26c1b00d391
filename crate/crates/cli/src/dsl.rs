//! The `.alg` block format.
//!
//! ```text
//! # k[u, v] with a parameter
//! algebra A over Q(a) {
//!   generators: u:1, v:1;
//!   relations: u*v - a*v*u;
//! }
//! map theta { u -> a*u; v -> v; }
//! twist tau { x (x) u -> a * u (x) x; }
//! ```
//!
//! Relations and images use the scalar and polynomial grammar of
//! `twistkit_core::text`. Map and twist blocks may use parameters without
//! declaring them; any identifier that is not a generator is taken as one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};
use twistkit_core::morphisms::GradedGeneratorMap;
use twistkit_core::text::{is_identifier, parse_nc, parse_scalar};
use twistkit_core::ttp::{parse_tensor, ExtendedTwist, TwistingMapSpec};
use twistkit_core::{Alphabet, Error, FieldElement, GradedPresentation, NcPoly, ParamSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslError {
    /// 1-based line and column, when the input came from text.
    pub location: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((line, col)) => write!(f, "line {line}, column {col}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for DslError {}

/// A piece of source text with the byte offset it starts at.
#[derive(Clone, Debug, PartialEq)]
pub struct Spanned {
    pub text: String,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraBlock {
    pub name: String,
    pub params: Vec<String>,
    pub generators: Vec<(String, u32)>,
    pub relations: Vec<Spanned>,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapBlock {
    pub name: String,
    pub params: Vec<String>,
    /// `(generator, image)` pairs.
    pub images: Vec<(Spanned, Spanned)>,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistBlock {
    pub name: String,
    pub params: Vec<String>,
    /// `(b, a, image)` for the line `b (x) a -> image`.
    pub images: Vec<(Spanned, Spanned, Spanned)>,
    pub offset: usize,
}

/// Parsed blocks of one input, in file order per kind.
#[derive(Clone, Debug, Default)]
pub struct Document {
    source: Option<String>,
    pub algebras: Vec<AlgebraBlock>,
    pub maps: Vec<MapBlock>,
    pub twists: Vec<TwistBlock>,
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    doc: &'a Document,
}

impl Scanner<'_> {
    fn err(&self, at: usize, message: impl Into<String>) -> DslError {
        self.doc.error_at(at, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || b"_'".contains(&self.src[self.pos])) {
            self.pos += 1;
        }
        let word = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        if is_identifier(&word) {
            Ok(word)
        } else {
            self.pos = start;
            Err(self.err(start, "expected an identifier"))
        }
    }

    /// Raw text up to (not including) the first byte in `stops`.
    fn raw_until(&mut self, stops: &[u8]) -> Spanned {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && !stops.contains(&self.src[self.pos]) {
            self.pos += 1;
        }
        let text = String::from_utf8_lossy(&self.src[start..self.pos]);
        Spanned { text: text.trim_end().to_string(), offset: start }
    }

    /// `name [over Q[(p, ...)]] {`
    fn header(&mut self) -> Result<(String, Vec<String>), DslError> {
        let name = self.ident()?;
        let mut params = Vec::new();
        if self.peek() == Some(b'o') {
            let at = self.pos;
            if self.ident()? != "over" {
                return Err(self.err(at, "expected 'over' or '{'"));
            }
            let at = self.pos;
            if self.ident()? != "Q" {
                return Err(self.err(at, "only the field Q of rationals is supported"));
            }
            if self.eat(b'(') && !self.eat(b')') {
                loop {
                    params.push(self.ident()?);
                    if self.eat(b')') {
                        break;
                    }
                    self.expect(b',')?;
                }
            }
        }
        self.expect(b'{')?;
        Ok((name, params))
    }

    /// Ends a statement: `;`, or nothing before the closing brace.
    fn end_statement(&mut self) -> Result<(), DslError> {
        if self.eat(b';') || self.peek() == Some(b'}') {
            Ok(())
        } else {
            Err(self.err(self.pos, "expected ';'"))
        }
    }

    fn algebra(&mut self, offset: usize) -> Result<AlgebraBlock, DslError> {
        let (name, params) = self.header()?;
        let mut block = AlgebraBlock { name, params, generators: Vec::new(), relations: Vec::new(), offset };
        let mut seen = BTreeSet::new();
        while !self.eat(b'}') {
            let at = self.pos;
            let key = self.ident()?;
            if !seen.insert(key.clone()) {
                return Err(self.err(at, format!("duplicate '{key}' clause")));
            }
            self.expect(b':')?;
            match key.as_str() {
                "generators" => loop {
                    let g = self.ident()?;
                    let degree = if self.eat(b':') {
                        let d = self.raw_until(b",;}");
                        d.text.parse::<u32>().map_err(|_| self.err(d.offset, "generator degree must be a positive integer"))?
                    } else {
                        1
                    };
                    block.generators.push((g, degree));
                    if !self.eat(b',') {
                        break;
                    }
                },
                "relations" => {
                    while !matches!(self.peek(), Some(b';' | b'}') | None) {
                        let r = self.raw_until(b",;}");
                        if r.text.is_empty() {
                            return Err(self.err(r.offset, "empty relation"));
                        }
                        block.relations.push(r);
                        if !self.eat(b',') {
                            break;
                        }
                    }
                }
                _ => return Err(self.err(at, format!("unknown clause '{key}'"))),
            }
            self.end_statement()?;
        }
        if block.generators.is_empty() {
            return Err(self.err(offset, format!("algebra {} has no generators", block.name)));
        }
        Ok(block)
    }

    fn map(&mut self, offset: usize) -> Result<MapBlock, DslError> {
        let (name, params) = self.header()?;
        let mut images = Vec::new();
        while !self.eat(b'}') {
            self.skip_ws();
            let at = self.pos;
            let g = self.ident()?;
            self.arrow()?;
            let rhs = self.raw_until(b";}");
            images.push((Spanned { text: g, offset: at }, rhs));
            self.end_statement()?;
        }
        Ok(MapBlock { name, params, images, offset })
    }

    fn twist(&mut self, offset: usize) -> Result<TwistBlock, DslError> {
        let (name, params) = self.header()?;
        let mut images = Vec::new();
        while !self.eat(b'}') {
            self.skip_ws();
            let b_at = self.pos;
            let b = self.ident()?;
            self.skip_ws();
            if !self.src[self.pos..].starts_with(b"(x)") {
                return Err(self.err(self.pos, "expected '(x)'"));
            }
            self.pos += 3;
            self.skip_ws();
            let a_at = self.pos;
            let a = self.ident()?;
            self.arrow()?;
            let rhs = self.raw_until(b";}");
            images.push((Spanned { text: b, offset: b_at }, Spanned { text: a, offset: a_at }, rhs));
            self.end_statement()?;
        }
        Ok(TwistBlock { name, params, images, offset })
    }

    fn arrow(&mut self) -> Result<(), DslError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(b"->") {
            self.pos += 2;
            Ok(())
        } else {
            Err(self.err(self.pos, "expected '->'"))
        }
    }
}

/// Identifiers in `text` that are not generator names, in order of first use.
pub fn free_identifiers<'a>(text: &str, generators: impl IntoIterator<Item = &'a String> + Clone) -> Vec<String> {
    let text = text.replace("(x)", " ");
    let mut out: Vec<String> = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i + c.len_utf8();
            while let Some(&(j, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[i..end];
            if !generators.clone().into_iter().any(|g| g == word) && !out.iter().any(|w| w == word) {
                out.push(word.to_string());
            }
        } else if c.is_ascii_digit() {
            // skip the rest of a number so `2a` style typos surface as syntax errors later
            while chars.peek().is_some_and(|&(_, d)| d.is_ascii_digit()) {
                chars.next();
            }
        }
    }
    out
}

/// Values substituted for parameters, from `--param name=value`.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    values: Vec<(String, FieldElement)>,
}

impl Assignment {
    pub fn parse(items: &[String]) -> Result<Self, DslError> {
        let mut values = Vec::new();
        for item in items {
            let plain = |m: String| DslError { location: None, message: m };
            let (name, value) = item.split_once('=').ok_or_else(|| plain(format!("parameter assignment '{item}' is not of the form name=value")))?;
            let (name, value) = (name.trim(), value.trim());
            if !is_identifier(name) {
                return Err(plain(format!("'{name}' is not a parameter name")));
            }
            let v = parse_scalar(value, &ParamSpace::new()).map_err(|e| plain(format!("value of {name}: {e}")))?;
            values.push((name.to_string(), v));
        }
        Ok(Assignment { values })
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.iter().map(|(n, _)| n.as_str())
    }

    pub fn scalar(&self, x: &FieldElement, space: &ParamSpace) -> Result<FieldElement, Error> {
        if self.values.is_empty() {
            return Ok(x.clone());
        }
        let values: Vec<_> =
            space.names().iter().map(|n| self.values.iter().find(|(m, _)| m == n).and_then(|(_, v)| v.as_rational())).collect();
        x.substitute(&values, space)
    }

    pub fn poly(&self, p: &NcPoly, space: &ParamSpace) -> Result<NcPoly, Error> {
        let terms = p.terms().map(|(w, c)| Ok((w.clone(), self.scalar(c, space)?))).collect::<Result<Vec<_>, Error>>()?;
        Ok(NcPoly::from_terms(terms))
    }
}

impl Document {
    pub fn parse(source: &str) -> Result<Self, DslError> {
        // Blank out comments so offsets stay valid.
        let mut cleaned = String::with_capacity(source.len());
        for line in source.split_inclusive('\n') {
            match line.find('#') {
                Some(k) => {
                    cleaned.push_str(&line[..k]);
                    for c in line[k..].chars() {
                        if c == '\n' {
                            cleaned.push('\n');
                        } else {
                            cleaned.extend(std::iter::repeat_n(' ', c.len_utf8()));
                        }
                    }
                }
                None => cleaned.push_str(line),
            }
        }
        let mut doc = Document { source: Some(source.to_string()), ..Default::default() };
        let mut blocks = (Vec::new(), Vec::new(), Vec::new());
        {
            let mut sc = Scanner { src: cleaned.as_bytes(), pos: 0, doc: &doc };
            while sc.peek().is_some() {
                let at = sc.pos;
                match sc.ident()?.as_str() {
                    "algebra" => blocks.0.push(sc.algebra(at)?),
                    "map" => blocks.1.push(sc.map(at)?),
                    "twist" => blocks.2.push(sc.twist(at)?),
                    other => return Err(sc.err(at, format!("expected 'algebra', 'map' or 'twist', found '{other}'"))),
                }
            }
        }
        (doc.algebras, doc.maps, doc.twists) = blocks;
        doc.check_unique_names()?;
        Ok(doc)
    }

    /// Reads presentation objects as emitted in JSON reports: either a
    /// single object with `generators` and `relations`, a report carrying
    /// one under `presentation`, or an array of those.
    pub fn from_json(value: &Value) -> Result<Self, DslError> {
        let plain = |m: &str| DslError { location: None, message: m.to_string() };
        let mut doc = Document::default();
        let items: Vec<&Value> = match value {
            Value::Array(items) => items.iter().collect(),
            v => vec![v],
        };
        for item in items {
            let obj = item.get("presentation").unwrap_or(item);
            let name = obj.get("name").and_then(Value::as_str).unwrap_or("A").to_string();
            let strings = |key: &str| -> Result<Vec<String>, DslError> {
                match obj.get(key) {
                    None => Ok(Vec::new()),
                    Some(Value::Array(xs)) => {
                        xs.iter().map(|x| x.as_str().map(String::from).ok_or_else(|| plain(&format!("'{key}' must hold strings")))).collect()
                    }
                    Some(_) => Err(plain(&format!("'{key}' must be an array"))),
                }
            };
            let params = strings("parameters")?;
            let relations = strings("relations")?.into_iter().map(|text| Spanned { text, offset: 0 }).collect();
            let gens = obj.get("generators").and_then(Value::as_array).ok_or_else(|| plain("presentation needs a 'generators' array"))?;
            let generators = gens
                .iter()
                .map(|g| match g {
                    Value::String(s) => Ok((s.clone(), 1)),
                    _ => {
                        let n = g.get("name").and_then(Value::as_str).ok_or_else(|| plain("generator without a name"))?;
                        let d = g.get("degree").map_or(Some(1), Value::as_u64).ok_or_else(|| plain("generator degree must be a positive integer"))?;
                        Ok((n.to_string(), d as u32))
                    }
                })
                .collect::<Result<_, DslError>>()?;
            doc.algebras.push(AlgebraBlock { name, params, generators, relations, offset: 0 });
        }
        doc.check_unique_names()?;
        Ok(doc)
    }

    /// Parses JSON when the input starts with `{` or `[`, the block format
    /// otherwise.
    pub fn parse_any(source: &str) -> Result<Self, DslError> {
        let t = source.trim_start();
        if t.starts_with('{') || t.starts_with('[') {
            let v: Value = serde_json::from_str(source).map_err(|e| DslError { location: Some((e.line(), e.column())), message: e.to_string() })?;
            Self::from_json(&v)
        } else {
            Self::parse(source)
        }
    }

    fn check_unique_names(&self) -> Result<(), DslError> {
        let kinds: [(&str, Vec<(&str, usize)>); 3] = [
            ("algebra", self.algebras.iter().map(|b| (b.name.as_str(), b.offset)).collect()),
            ("map", self.maps.iter().map(|b| (b.name.as_str(), b.offset)).collect()),
            ("twist", self.twists.iter().map(|b| (b.name.as_str(), b.offset)).collect()),
        ];
        for (kind, names) in kinds {
            let mut seen = BTreeSet::new();
            for (n, at) in names {
                if !seen.insert(n) {
                    return Err(self.error_at(at, format!("duplicate {kind} block {n}")));
                }
            }
        }
        Ok(())
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> DslError {
        let location = self.source.as_ref().map(|s| {
            let before = &s[..offset.min(s.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            (line, col)
        });
        DslError { location, message: message.into() }
    }

    /// Attaches a core error raised while reading `span` to its location.
    fn core_error(&self, span: &Spanned, e: Error) -> DslError {
        match e {
            Error::Syntax { offset, message } => {
                // Offsets inside a single-line expression map directly.
                let off = if span.text.contains('\n') { span.offset } else { span.offset + offset.min(span.text.len()) };
                self.error_at(off, format!("{message} in '{}'", span.text))
            }
            e => self.error_at(span.offset, e.to_string()),
        }
    }

    fn pick<'a, T>(&self, kind: &str, blocks: &'a [T], name_of: impl Fn(&T) -> &str, name: Option<&str>) -> Result<&'a T, DslError> {
        let plain = |m: String| DslError { location: None, message: m };
        match name {
            Some(n) => blocks.iter().find(|b| name_of(b) == n).ok_or_else(|| plain(format!("no {kind} block named {n}"))),
            None => match blocks {
                [one] => Ok(one),
                [] => Err(plain(format!("input has no {kind} block"))),
                _ => {
                    let names: Vec<&str> = blocks.iter().map(&name_of).collect();
                    Err(plain(format!("input has several {kind} blocks ({}); select one with FILE@NAME", names.join(", "))))
                }
            },
        }
    }

    pub fn algebra(&self, name: Option<&str>) -> Result<&AlgebraBlock, DslError> {
        self.pick("algebra", &self.algebras, |b| &b.name, name)
    }

    pub fn map(&self, name: Option<&str>) -> Result<&MapBlock, DslError> {
        self.pick("map", &self.maps, |b| &b.name, name)
    }

    pub fn twist(&self, name: Option<&str>) -> Result<&TwistBlock, DslError> {
        self.pick("twist", &self.twists, |b| &b.name, name)
    }

    /// The presentation of `block` over `space`, which must contain the
    /// block's declared parameters.
    pub fn presentation(&self, block: &AlgebraBlock, space: &ParamSpace, assign: &Assignment) -> Result<GradedPresentation, DslError> {
        let alphabet = Alphabet::new(block.generators.iter().map(|(n, d)| (n.clone(), *d))).map_err(|e| self.error_at(block.offset, e.to_string()))?;
        for p in &block.params {
            if alphabet.index_of(p).is_some() {
                return Err(self.error_at(block.offset, format!("{p} is both a parameter and a generator")));
            }
        }
        let mut pres = GradedPresentation::new(&block.name, space.clone(), alphabet, Vec::new()).map_err(|e| self.error_at(block.offset, e.to_string()))?;
        for r in &block.relations {
            let p = parse_nc(&r.text, &pres.alphabet, space).and_then(|p| assign.poly(&p, space)).map_err(|e| self.core_error(r, e))?;
            pres.push_relation(p).map_err(|e| self.core_error(r, e))?;
        }
        Ok(pres)
    }

    /// A block's presentation over its own declared parameters.
    pub fn standalone_presentation(&self, block: &AlgebraBlock, assign: &Assignment) -> Result<GradedPresentation, DslError> {
        self.presentation(block, &ParamSpace::with_names(block.params.iter().cloned()), assign)
    }

    pub fn generator_map(&self, block: &MapBlock, alphabet: &Alphabet, space: &ParamSpace, assign: &Assignment) -> Result<GradedGeneratorMap, DslError> {
        let mut images: Vec<Option<NcPoly>> = vec![None; alphabet.len()];
        for (g, rhs) in &block.images {
            let i = alphabet.index_of(&g.text).ok_or_else(|| self.error_at(g.offset, format!("{} is not a generator of the algebra", g.text)))?;
            if images[i].is_some() {
                return Err(self.error_at(g.offset, format!("second image for {}", g.text)));
            }
            let p = parse_nc(&rhs.text, alphabet, space).and_then(|p| assign.poly(&p, space)).map_err(|e| self.core_error(rhs, e))?;
            images[i] = Some(p);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| self.error_at(block.offset, format!("map {} gives no image for {}", block.name, alphabet.name(i)))))
            .collect::<Result<Vec<_>, _>>()?;
        GradedGeneratorMap::from_images(&images, alphabet).map_err(|e| self.error_at(block.offset, e.to_string()))
    }

    pub fn twist_spec(&self, block: &TwistBlock, a: &Alphabet, b: &Alphabet, space: &ParamSpace, assign: &Assignment) -> Result<TwistingMapSpec, DslError> {
        if let Some(clash) = a.names().iter().find(|n| b.index_of(n).is_some()) {
            return Err(self.error_at(block.offset, format!("generator {clash} occurs in both factors")));
        }
        let mut map = BTreeMap::new();
        for (y, x, rhs) in &block.images {
            let yi = b.index_of(&y.text).ok_or_else(|| self.error_at(y.offset, format!("{} is not a generator of the right factor B", y.text)))?;
            let xi = a.index_of(&x.text).ok_or_else(|| self.error_at(x.offset, format!("{} is not a generator of the left factor A", x.text)))?;
            let terms = parse_tensor(&rhs.text, a, b, space).map_err(|e| self.core_error(rhs, e))?;
            let terms = terms
                .into_iter()
                .map(|(c, u, v)| Ok((assign.scalar(&c, space)?, u, v)))
                .collect::<Result<Vec<_>, Error>>()
                .map_err(|e| self.core_error(rhs, e))?;
            if map.insert((yi, xi), terms).is_some() {
                return Err(self.error_at(y.offset, format!("second image for {} (x) {}", y.text, x.text)));
            }
        }
        TwistingMapSpec::linear_generator(map, space.clone()).map_err(|e| self.error_at(block.offset, e.to_string()))
    }
}

impl MapBlock {
    /// Declared parameters followed by undeclared names used in images.
    pub fn parameter_names(&self, generators: &[String]) -> Vec<String> {
        let mut out = self.params.clone();
        for (_, rhs) in &self.images {
            out.extend(free_identifiers(&rhs.text, generators));
        }
        dedup(out)
    }
}

impl TwistBlock {
    pub fn parameter_names(&self, generators: &[String]) -> Vec<String> {
        let mut out = self.params.clone();
        for (_, _, rhs) in &self.images {
            out.extend(free_identifiers(&rhs.text, generators));
        }
        dedup(out)
    }
}

fn dedup(names: Vec<String>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    names.into_iter().filter(|n| seen.insert(n.clone())).collect()
}

/// A block name derived from an arbitrary label.
pub fn block_name(label: &str) -> String {
    let mut s: String = label.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    while s.ends_with('_') {
        s.pop();
    }
    if !s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        s.insert(0, 'A');
    }
    s
}

fn over_clause(space: &ParamSpace) -> String {
    if space.is_empty() {
        " over Q".into()
    } else {
        format!(" over Q({})", space.names().join(", "))
    }
}

/// Canonical block text of a presentation; parsing it gives back the same
/// presentation.
pub fn print_presentation(p: &GradedPresentation) -> String {
    let gens: Vec<String> = p.alphabet.names().iter().enumerate().map(|(g, n)| format!("{n}:{}", p.alphabet.degree_of(g))).collect();
    let mut out = format!("algebra {}{} {{\n  generators: {};\n", block_name(&p.name), over_clause(&p.params), gens.join(", "));
    let rels = p.relation_texts();
    if !rels.is_empty() {
        out.push_str("  relations:\n");
        for (k, r) in rels.iter().enumerate() {
            out.push_str(&format!("    {r}{}\n", if k + 1 == rels.len() { ";" } else { "," }));
        }
    }
    out.push_str("}\n");
    out
}

pub fn print_map(name: &str, map: &GradedGeneratorMap, alphabet: &Alphabet, space: &ParamSpace) -> String {
    let mut out = format!("map {}{} {{\n", block_name(name), over_clause(space));
    for g in 0..alphabet.len() {
        out.push_str(&format!("  {} -> {};\n", alphabet.name(g), map.image(g).to_text(alphabet, space)));
    }
    out.push_str("}\n");
    out
}

/// The generator images of an extended twisting map as a twist block.
/// Pairs with zero image are left out.
pub fn print_twist(name: &str, ext: &ExtendedTwist) -> String {
    let (a, b) = (ext.a().alphabet(), ext.b().alphabet());
    let mut out = format!("twist {}{} {{\n", block_name(name), over_clause(ext.params()));
    for y in 0..b.len() {
        for x in 0..a.len() {
            let img = ext.image((1, x, 1, y));
            if img.iter().all(FieldElement::is_zero) {
                continue;
            }
            out.push_str(&format!("  {} (x) {} -> {};\n", b.name(y), a.name(x), ext.tensor_text(2, &img)));
        }
    }
    out.push_str("}\n");
    out
}

/// JSON form of a presentation, readable by [`Document::from_json`].
pub fn presentation_json(p: &GradedPresentation) -> Value {
    let gens: Vec<Value> = p.alphabet.names().iter().enumerate().map(|(g, n)| json!({ "name": n, "degree": p.alphabet.degree_of(g) })).collect();
    json!({
        "name": block_name(&p.name),
        "parameters": p.params.names(),
        "generators": gens,
        "relations": p.relation_texts(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = "# Zhang twist input\nalgebra k4 over Q(a) {\n  generators: x1, x2, x3:1, x4;\n  relations: x1*x2 - x2*x1,\n    x3*x4 - x4*x3;\n}\nmap theta { x1 -> a*x1; x2 -> a*x2; x3 -> x3; x4 -> x4 }\n";

    #[test]
    fn parses_blocks() {
        let doc = Document::parse(RUNNING).unwrap();
        let a = doc.algebra(None).unwrap();
        assert_eq!(a.params, ["a"]);
        assert_eq!(a.generators.len(), 4);
        assert_eq!(a.relations.len(), 2);
        let p = doc.standalone_presentation(a, &Assignment::default()).unwrap();
        assert_eq!(p.relation_texts(), ["x2*x1 - x1*x2", "x4*x3 - x3*x4"]);
        let m = doc.map(Some("theta")).unwrap();
        assert_eq!(m.images.len(), 4);
        let phi = doc.generator_map(m, &p.alphabet, &p.params, &Assignment::default()).unwrap();
        assert_eq!(phi.image(0).to_text(&p.alphabet, &p.params), "a*x1");
    }

    #[test]
    fn errors_have_locations() {
        let e = Document::parse("algebra A {\n  generators: x;\n  relations: x*y;\n}").unwrap();
        let err = e.standalone_presentation(&e.algebras[0], &Assignment::default()).unwrap_err();
        assert_eq!(err.location, Some((3, 16)));
        let e = Document::parse("algebra A {\n generators x; }").unwrap_err();
        assert_eq!(e.location, Some((2, 13)));
        let e = Document::parse("algebra A { generators: x; } # fine\nwidget B {}").unwrap_err();
        assert!(e.message.contains("widget"));
        let d = Document::parse("algebra A { generators: x, y; relations: x*y - x; }").unwrap();
        let err = d.standalone_presentation(&d.algebras[0], &Assignment::default()).unwrap_err();
        assert!(err.message.contains("not homogeneous"));
    }

    #[test]
    fn twist_lines_and_free_parameters() {
        let doc = Document::parse("twist tau { x (x) u -> a * u (x) x; y (x) v -> d*v (x) y }").unwrap();
        let t = doc.twist(None).unwrap();
        let gens: Vec<String> = ["u", "v", "x", "y"].map(String::from).to_vec();
        assert_eq!(t.parameter_names(&gens), ["a", "d"]);
        let (a, b) = (Alphabet::linear(["u", "v"]).unwrap(), Alphabet::linear(["x", "y"]).unwrap());
        let space = ParamSpace::with_names(["a", "d"]);
        let spec = doc.twist_spec(t, &a, &b, &space, &Assignment::default()).unwrap();
        assert!(spec.is_strongly_graded());
        let bad = doc.twist_spec(t, &b, &a, &space, &Assignment::default()).unwrap_err();
        assert!(bad.message.contains("right factor"));
    }

    #[test]
    fn assignment_specializes() {
        let doc = Document::parse(RUNNING).unwrap();
        let assign = Assignment::parse(&["a=-3/2".into()]).unwrap();
        let p = doc.standalone_presentation(&doc.algebras[0], &assign).unwrap();
        let phi = doc.generator_map(&doc.maps[0], &p.alphabet, &p.params, &assign).unwrap();
        assert_eq!(phi.image(1).to_text(&p.alphabet, &p.params), "-3/2*x2");
        assert!(Assignment::parse(&["a:2".into()]).is_err());
    }

    #[test]
    fn print_parse_is_identity_on_canonical_text() {
        let doc = Document::parse(RUNNING).unwrap();
        let p = doc.standalone_presentation(&doc.algebras[0], &Assignment::default()).unwrap();
        let text = print_presentation(&p);
        let again = Document::parse(&text).unwrap();
        let q = again.standalone_presentation(&again.algebras[0], &Assignment::default()).unwrap();
        assert_eq!(print_presentation(&q), text);
        assert!(text.starts_with("algebra k4 over Q(a) {\n  generators: x1:1, x2:1, x3:1, x4:1;\n"));
    }

    #[test]
    fn json_roundtrip() {
        let doc = Document::parse(RUNNING).unwrap();
        let p = doc.standalone_presentation(&doc.algebras[0], &Assignment::default()).unwrap();
        let v = presentation_json(&p);
        let back = Document::parse_any(&v.to_string()).unwrap();
        let q = back.standalone_presentation(&back.algebras[0], &Assignment::default()).unwrap();
        assert_eq!(p, q);
    }
}
