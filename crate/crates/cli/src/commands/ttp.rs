use std::fs;

use clap::{ArgGroup, Args};
use serde_json::{json, Value};
use twistkit_core::segre::{assign_bigrading, densely_graded_diagnostic, diagonal_subalgebra, segre_presentation};
use twistkit_core::text::parse_scalar;
use twistkit_core::truncated::presentation_completion;
use twistkit_core::ttp::{
    build_ttp, check_triple_compatibility, convolution_dims, extend_twisting_map, fd_check_matrix_criteria, fd_ttp_table,
    invertible_vectors_family, recover_twisting_map, standard_example, verify_twisting_map_axioms, Embedding, ExtendedTwist,
    FiniteDimAlgebra, FiniteDimTwistSpec, TwistedTensorProduct, TwistingMapSpec,
};
use twistkit_core::{Error, FieldElement, GradedPresentation, ParamSpace, TruncatedAlgebraModel};

use super::{build_model, load, union_space, CliError, CmdResult, Context, Loaded, DEFAULT_MAX_DEGREE};
use crate::dsl::{presentation_json, print_presentation, print_twist, TwistBlock};
use crate::report::Report;

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["verify", "build", "recover", "triple"])))]
pub struct TtpArgs {
    /// Extend the twist block from generators and check the twisting-map axioms
    #[arg(long)]
    pub verify: bool,
    /// Present the twisted tensor product A ⊗_τ B
    #[arg(long)]
    pub build: bool,
    /// Recover τ from an algebra containing A and B (--in, two --embed)
    #[arg(long)]
    pub recover: bool,
    /// Check compatibility of twist blocks ab, bc, ac over A, B, C
    #[arg(long)]
    pub triple: bool,
    #[arg(long, value_name = "FILE")]
    pub a: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub b: Option<String>,
    #[arg(long, value_name = "FILE")]
    pub c: Option<String>,
    /// Twist blocks `b (x) a -> ...` (FILE@NAME to pick one)
    #[arg(long, value_name = "FILE")]
    pub twist: Option<String>,
    /// Ambient algebra for --recover
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<String>,
    /// Subalgebras of the ambient algebra, matched by generator names (A first)
    #[arg(long, value_name = "FILE")]
    pub embed: Vec<String>,
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Input(format!("missing {flag}")))
}

fn generator_names(l: &Loaded) -> Result<Vec<String>, CliError> {
    Ok(l.algebra()?.generators.iter().map(|(g, _)| g.clone()).collect())
}

/// Algebras and twist blocks resolved over one shared parameter space.
struct Setting {
    algebras: Vec<TruncatedAlgebraModel>,
    space: ParamSpace,
}

fn resolve(ctx: &Context, algebras: &[&Loaded], twists: &[(&Loaded, &TwistBlock)], d: usize) -> Result<Setting, CliError> {
    let mut names: Vec<String> = Vec::new();
    let mut gens: Vec<String> = Vec::new();
    for l in algebras {
        names.extend(l.algebra()?.params.iter().cloned());
        gens.extend(generator_names(l)?);
    }
    for (_, t) in twists {
        names.extend(t.parameter_names(&gens));
    }
    let space = union_space([names.as_slice()]);
    ctx.check_assignment(&space)?;
    let mut models = Vec::new();
    for l in algebras {
        let p = l.doc.presentation(l.algebra()?, &space, &ctx.assign)?;
        models.push(build_model(&p, d)?);
    }
    Ok(Setting { algebras: models, space })
}

fn extend(ctx: &Context, s: &Setting, (doc, block): (&Loaded, &TwistBlock), a: usize, b: usize, d: usize) -> Result<(TwistingMapSpec, ExtendedTwist), CliError> {
    let (ma, mb) = (&s.algebras[a], &s.algebras[b]);
    let spec = doc.doc.twist_spec(block, ma.alphabet(), mb.alphabet(), &s.space, &ctx.assign)?;
    let ext = extend_twisting_map(&spec, ma, mb, d)?;
    Ok((spec, ext))
}

pub fn ttp(ctx: &Context, args: &TtpArgs) -> CmdResult {
    let d = ctx.degree(DEFAULT_MAX_DEGREE)?;
    if args.recover {
        return recover(ctx, args, d);
    }
    let a = load(required(&args.a, "--a")?)?;
    let b = load(required(&args.b, "--b")?)?;
    let t = load(required(&args.twist, "--twist")?)?;
    if args.triple {
        return triple(ctx, args, d, &a, &b, &t);
    }
    let block = t.doc.twist(t.select.as_deref())?;
    let s = resolve(ctx, &[&a, &b], &[(&t, block)], d)?;
    let (spec, ext) = extend(ctx, &s, (&t, block), 0, 1, d)?;
    let axioms = verify_twisting_map_axioms(&ext, d);
    let mut r = Report::new("ttp");
    r.field("mode", if args.build { "build" } else { "verify" })
        .field("max_degree", d)
        .field("strongly_graded", spec.is_strongly_graded())
        .field("axiom_tensors_checked", axioms.checked)
        .check("twisting-map axioms", axioms.passed(), axioms.violations.first().cloned());
    if args.verify {
        r.artifact(print_twist(&block.name, &ext));
        return Ok(r);
    }
    let name = format!("{}_{}", s.algebras[0].presentation().name, s.algebras[1].presentation().name);
    let expected = convolution_dims(&s.algebras[0], &s.algebras[1], d);
    let model = match build_ttp(&ext, &name) {
        Ok(built) => {
            r.field("quadratic_presentation", "complete");
            built.model
        }
        Err(Error::DimensionMismatch { degree, expected: e, found }) => {
            // The generator relations alone leave too large an algebra; present
            // the product from its multiplication instead.
            r.field("quadratic_presentation", format!("incomplete: degree {degree} has dimension {found}, expected {e}"));
            let oracle = TwistedTensorProduct::new(&ext);
            let c = presentation_completion(&oracle, &name, &oracle.generator_names(), s.space.clone(), d)?;
            r.field("new_relations", c.new_relations.clone());
            c.model
        }
        Err(e) => return Err(e.into()),
    };
    let dims = model.hilbert_function();
    r.artifact(print_presentation(model.presentation()))
        .field("presentation", presentation_json(model.presentation()))
        .field("relations", model.presentation().relations().len())
        .field("dims", dims.clone())
        .field("expected_dims", expected.clone())
        .check("PBW dimensions", dims == expected, (dims != expected).then(|| format!("{dims:?} vs {expected:?}")));
    let ia = Embedding::by_names(&s.algebras[0], model.alphabet())?;
    let ib = Embedding::by_names(&s.algebras[1], model.alphabet())?;
    let back = recover_twisting_map(&model, &ia, &ib, d)?;
    let diff = (0..=d).find(|&n| back.matrix(n) != ext.matrix(n));
    r.check("recovery returns the input twisting map", diff.is_none(), diff.map(|n| format!("total degree {n}")));
    Ok(r)
}

/// Names the recovered map: the transposition, a bicharacter, or neither.
fn classify(ext: &ExtendedTwist, d: usize) -> Result<String, CliError> {
    let (a, b) = (ext.a(), ext.b());
    let same = |other: &ExtendedTwist| (0..=d).all(|n| other.matrix(n) == ext.matrix(n));
    let mut lambda: Option<FieldElement> = None;
    let mut uniform = true;
    for y in 0..b.alphabet().len() {
        for x in 0..a.alphabet().len() {
            let img = ext.image((1, x, 1, y));
            let nz: Vec<&FieldElement> = img.iter().filter(|c| !c.is_zero()).collect();
            match (nz.as_slice(), &lambda) {
                ([c], None) => lambda = Some((*c).clone()),
                ([c], Some(l)) if *c == l => {}
                _ => uniform = false,
            }
        }
    }
    if let (true, Some(l)) = (uniform, lambda) {
        if let Ok(bi) = extend_twisting_map(&TwistingMapSpec::bicharacter(l.clone(), ext.params().clone())?, a, b, d) {
            if same(&bi) {
                return Ok(if l.is_one() { "transposition".into() } else { format!("bicharacter {}", l.to_text(ext.params())) });
            }
        }
    }
    Ok(if ext.is_strongly_graded() { "strongly graded".into() } else { "graded".into() })
}

fn recover(ctx: &Context, args: &TtpArgs, d: usize) -> CmdResult {
    let ambient = load(required(&args.input, "--in")?)?;
    let [ea, eb] = args.embed.as_slice() else {
        return Err(CliError::Input("--recover needs exactly two --embed files, A then B".into()));
    };
    let (la, lb) = (load(ea)?, load(eb)?);
    let s = resolve(ctx, &[&la, &lb, &ambient], &[], d)?;
    let (ma, mb, amb) = (&s.algebras[0], &s.algebras[1], &s.algebras[2]);
    let ext = recover_twisting_map(amb, &Embedding::by_names(ma, amb.alphabet())?, &Embedding::by_names(mb, amb.alphabet())?, d)?;
    let axioms = verify_twisting_map_axioms(&ext, d);
    let mut r = Report::new("ttp");
    r.artifact(print_twist("tau", &ext))
        .field("mode", "recover")
        .field("max_degree", d)
        .field("kind", classify(&ext, d)?)
        .field("strongly_graded", ext.is_strongly_graded())
        .check("twisting-map axioms", axioms.passed(), axioms.violations.first().cloned());
    Ok(r)
}

fn triple(ctx: &Context, args: &TtpArgs, d: usize, a: &Loaded, b: &Loaded, t: &Loaded) -> CmdResult {
    let c = load(required(&args.c, "--c")?)?;
    let blocks = ["ab", "bc", "ac"].map(|n| t.doc.twist(Some(n)));
    let [ab, bc, ac] = blocks;
    let (ab, bc, ac) = (ab?, bc?, ac?);
    let s = resolve(ctx, &[a, b, &c], &[(t, ab), (t, bc), (t, ac)], d)?;
    let (_, tab) = extend(ctx, &s, (t, ab), 0, 1, d)?;
    let (_, tbc) = extend(ctx, &s, (t, bc), 1, 2, d)?;
    let (_, tac) = extend(ctx, &s, (t, ac), 0, 2, d)?;
    let rep = check_triple_compatibility(&tab, &tbc, &tac, d)?;
    let mut r = Report::new("ttp");
    r.field("mode", "triple").field("max_degree", d).field("notes", rep.notes.clone());
    if let Some(h) = &rep.hilbert {
        r.field("dims", h.clone());
    }
    r.check("left iterated map is a twisting map", rep.left.passed(), rep.left.violations.first().cloned())
        .check("right iterated map is a twisting map", rep.right.passed(), rep.right.violations.first().cloned())
        .check("both iterated products agree", rep.products_agree == Some(true), None)
        .check("both sides pass or fail together", rep.sides_agree(), rep.witness().map(String::from));
    Ok(r)
}

#[derive(Args, Debug)]
pub struct FdArgs {
    /// JSON spec: {"m", "n", "lambda"} with λ indexed i, j, r, s (flat or
    /// nested), {"vectors": [[..], ..]}, or {"family": "flip" | "standard"}
    #[arg(long, value_name = "FILE")]
    pub spec: String,
}

fn json_scalar(v: &Value, space: &ParamSpace) -> Result<FieldElement, CliError> {
    match v {
        Value::Number(n) => n.as_i64().map(FieldElement::from_int).ok_or_else(|| CliError::Input(format!("{n} is not an integer; write fractions as strings"))),
        Value::String(s) => Ok(parse_scalar(s, space)?),
        v => Err(CliError::Input(format!("{v} is not a scalar"))),
    }
}

fn flatten<'a>(v: &'a Value, out: &mut Vec<&'a Value>) {
    match v {
        Value::Array(xs) => xs.iter().for_each(|x| flatten(x, out)),
        x => out.push(x),
    }
}

pub fn fd_spec_from_json(v: &Value) -> Result<FiniteDimTwistSpec, CliError> {
    let space = match v.get("parameters") {
        Some(Value::Array(ps)) => ParamSpace::with_names(ps.iter().filter_map(Value::as_str)),
        _ => ParamSpace::new(),
    };
    let size = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize);
    if let Some(family) = v.get("family").and_then(Value::as_str) {
        return match family {
            "flip" => Ok(FiniteDimTwistSpec::flip(size("m").unwrap_or(2), size("n").unwrap_or(2))),
            "standard" => Ok(standard_example()),
            f => Err(CliError::Input(format!("unknown family {f}"))),
        };
    }
    if let Some(Value::Array(vs)) = v.get("vectors") {
        let vectors = vs
            .iter()
            .map(|row| row.as_array().ok_or_else(|| CliError::Input("vectors must be arrays".into()))?.iter().map(|x| json_scalar(x, &space)).collect())
            .collect::<Result<Vec<Vec<FieldElement>>, CliError>>()?;
        return Ok(invertible_vectors_family(&vectors)?);
    }
    let (m, n) = (size("m").ok_or_else(|| CliError::Input("spec needs \"m\"".into()))?, size("n").ok_or_else(|| CliError::Input("spec needs \"n\"".into()))?);
    let mut flat = Vec::new();
    flatten(v.get("lambda").ok_or_else(|| CliError::Input("spec needs \"lambda\"".into()))?, &mut flat);
    let lambda = flat.into_iter().map(|x| json_scalar(x, &space)).collect::<Result<_, _>>()?;
    Ok(FiniteDimTwistSpec::new(m, n, lambda)?)
}

pub fn fd_ttp(_ctx: &Context, args: &FdArgs) -> CmdResult {
    let text = fs::read_to_string(&args.spec).map_err(|e| CliError::Input(format!("{}: {e}", args.spec)))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", args.spec)))?;
    let spec = fd_spec_from_json(&v)?;
    let criteria = fd_check_matrix_criteria(&spec);
    let alg = fd_ttp_table(&FiniteDimAlgebra::componentwise(spec.n()), &FiniteDimAlgebra::componentwise(spec.m()), &spec)?;
    let assoc_witness = alg.unit_failure().or_else(|| alg.associativity_failure());
    let associative = assoc_witness.is_none();
    let mut r = Report::new("fd-ttp");
    r.field("m", spec.m())
        .field("n", spec.n())
        .field("criteria_hold", criteria.holds())
        .field("unital_associative", associative)
        .check("matrix criteria", criteria.holds(), criteria.failures.first().cloned())
        .check("criteria agree with associativity of the product", criteria.holds() == associative, None);
    if let Some(w) = &assoc_witness {
        r.field("associativity_witness", w.clone());
    }
    if associative {
        r.field("dim", alg.dim()).field("center_dim", alg.center_dim()).field("radical_dim", alg.radical().len());
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct SegreArgs {
    #[arg(long, value_name = "FILE")]
    pub a: String,
    #[arg(long, value_name = "FILE")]
    pub b: String,
    /// Strongly graded twist block `b (x) a -> ...`
    #[arg(long, value_name = "FILE")]
    pub twist: String,
    /// Also tabulate dim S_{i+j} / S_i S_j for external degrees within this window
    #[arg(long, value_name = "W")]
    pub density: Option<usize>,
}

/// Segre degree used when `-D` is not given; the twisted tensor product is
/// truncated at twice this.
pub const SEGRE_DEFAULT_DEGREE: usize = 4;

pub fn segre(ctx: &Context, args: &SegreArgs) -> CmdResult {
    let d = ctx.degree(SEGRE_DEFAULT_DEGREE)?;
    let (a, b, t) = (load(&args.a)?, load(&args.b)?, load(&args.twist)?);
    let block = t.doc.twist(t.select.as_deref())?;
    let s = resolve(ctx, &[&a, &b], &[(&t, block)], 2 * d)?;
    for m in &s.algebras {
        m.presentation().require_degree_one()?;
    }
    let (_, ext) = extend(ctx, &s, (&t, block), 0, 1, 2 * d)?;
    let bg = assign_bigrading(&ext)?;
    let diag = diagonal_subalgebra(&bg);
    let name = format!("{}_o_{}", s.algebras[0].presentation().name, s.algebras[1].presentation().name);
    let mut r = Report::new("segre");
    r.field("max_degree", d).verdict("bidegrees add under multiplication", bg.additivity());
    match segre_presentation(&diag, &name, d) {
        Ok(seg) => {
            let p: &GradedPresentation = seg.completion.presentation();
            r.artifact(print_presentation(p))
                .field("presentation", presentation_json(p))
                .field("generator_names", diag.generator_names())
                .field("relations", p.relations().len())
                .field("new_relations", seg.completion.new_relations.clone())
                .field("dims", seg.completion.model.hilbert_function())
                .field("hadamard_dims", seg.hadamard.clone())
                .field("generated_in_degree_one", true)
                .check("generated in degree one with Hadamard dimensions", true, None);
        }
        Err(e @ (Error::DimensionMismatch { .. } | Error::NotGeneratedInDegreeOne(_))) => {
            r.field("generated_in_degree_one", false).check("generated in degree one with Hadamard dimensions", false, Some(e.to_string()));
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(w) = args.density {
        let rows = densely_graded_diagnostic(&bg, w, 2 * d)?;
        let table: Vec<Value> = rows
            .iter()
            .map(|row| json!({ "left": row.left, "right": row.right, "internal": row.internal, "dim": row.dim, "product_rank": row.product_rank, "codim": row.codim }))
            .collect();
        r.field("density", table);
    }
    Ok(r)
}
