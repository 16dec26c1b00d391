use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use twistkit_core::morphisms::{left_right_twist_isomorphism_check, verify_twisting_system, zhang_twist, Side, TwistedAlgebra, TwistingSystem};
use twistkit_core::truncated::{check_associativity_upto, presentation_completion};

use super::{build_model, load, load_algebra, single_presentation, union_space, AlgebraInput, CliError, CmdResult, Context, DEFAULT_MAX_DEGREE};
use crate::dsl::{presentation_json, print_presentation};
use crate::report::Report;

pub fn truncate(ctx: &Context, input: &AlgebraInput) -> CmdResult {
    let d = ctx.degree(DEFAULT_MAX_DEGREE)?;
    let p = single_presentation(ctx, input)?;
    let m = build_model(&p, d)?;
    let mut r = Report::new("truncate");
    let words: Vec<Vec<String>> = (0..=d).map(|k| m.normal_words(k).iter().map(|w| word_text(&m, w)).collect()).collect();
    r.artifact(print_presentation(&p))
        .field("presentation", presentation_json(&p))
        .field("max_degree", d)
        .field("dims", m.hilbert_function())
        .field("normal_words", words);
    Ok(r)
}

fn word_text(m: &twistkit_core::TruncatedAlgebraModel, w: &twistkit_core::Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        m.alphabet().word_text(w)
    }
}

pub fn hilbert(ctx: &Context, input: &AlgebraInput) -> CmdResult {
    let d = ctx.degree(DEFAULT_MAX_DEGREE)?;
    let p = single_presentation(ctx, input)?;
    let m = build_model(&p, d)?;
    let mut r = Report::new("hilbert");
    r.field("algebra", p.name.clone()).field("max_degree", d).field("dims", m.hilbert_function());
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Args, Debug)]
pub struct ZhangArgs {
    #[command(flatten)]
    pub algebra: AlgebraInput,
    /// File with the `map` block of a graded automorphism (FILE@NAME to pick one)
    #[arg(long, value_name = "FILE")]
    pub map: String,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    pub side: SideArg,
    /// Also check that the left and right twists are isomorphic
    #[arg(long)]
    pub isomorphism: bool,
}

pub fn zhang(ctx: &Context, args: &ZhangArgs) -> CmdResult {
    let d = ctx.degree(DEFAULT_MAX_DEGREE)?;
    let loaded = load_algebra(&args.algebra)?;
    let block = loaded.algebra()?;
    let maps = load(&args.map)?;
    let mblock = maps.doc.map(maps.select.as_deref())?;
    let gens: Vec<String> = block.generators.iter().map(|(g, _)| g.clone()).collect();
    let space = union_space([block.params.as_slice(), mblock.parameter_names(&gens).as_slice()]);
    ctx.check_assignment(&space)?;
    let p = loaded.doc.presentation(block, &space, &ctx.assign)?;
    let phi = maps.doc.generator_map(mblock, &p.alphabet, &space, &ctx.assign)?;
    let model = build_model(&p, d.max(p.max_relation_degree()))?;
    let side = match args.side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let z = zhang_twist(&model, &phi, side)?;
    let twisted = build_model(&z.presentation, d)?;
    let (before, after) = (model.hilbert_function()[..=d].to_vec(), twisted.hilbert_function());
    let mut r = Report::new("zhang");
    r.artifact(print_presentation(&z.presentation))
        .field("presentation", presentation_json(&z.presentation))
        .field("side", if side == Side::Left { "left" } else { "right" })
        .field("map", mblock.name.clone())
        .field("relations", z.presentation.relations().len())
        .field("max_degree", d)
        .field("kernel_degrees_checked", z.degrees_checked.clone())
        .field("dims", after.clone())
        .check("transported relations span the kernel of the twisted multiplication", z.kernel_agrees, None);
    let witness = before.iter().zip(&after).position(|(a, b)| a != b).map(|k| format!("degree {k}: {} vs {}", before[k], after[k]));
    r.check("Hilbert function preserved", witness.is_none(), witness);
    if args.isomorphism {
        let iso = left_right_twist_isomorphism_check(&model, &phi)?;
        r.field("isomorphism_pairs_checked", iso.pairs_checked)
            .verdict("left twist isomorphic to right twist", &iso.multiplicative)
            .check("left and right presentations correspond", iso.presentations_match, None);
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct TwistingSystemArgs {
    #[command(flatten)]
    pub algebra: AlgebraInput,
    /// Map blocks: a single automorphism phi (the system phi^n), or blocks
    /// named NAME_n giving tau_n for each n in the window
    #[arg(long, value_name = "FILE")]
    pub map: String,
    /// Window lo..hi of indices n (default -D..D)
    #[arg(long, value_name = "LO..HI", allow_hyphen_values = true)]
    pub window: Option<String>,
}

/// Index `n` of a block named like `tau_3` or `tau_-1`.
fn block_index(name: &str) -> Option<i64> {
    name.rsplit_once('_').and_then(|(_, n)| n.parse().ok())
}

pub fn twisting_system(ctx: &Context, args: &TwistingSystemArgs) -> CmdResult {
    let d = ctx.degree(DEFAULT_MAX_DEGREE)?;
    let loaded = load_algebra(&args.algebra)?;
    let block = loaded.algebra()?;
    let maps = load(&args.map)?;
    let gens: Vec<String> = block.generators.iter().map(|(g, _)| g.clone()).collect();
    let mut names: Vec<String> = block.params.clone();
    for m in &maps.doc.maps {
        names.extend(m.parameter_names(&gens));
    }
    let space = union_space([names.as_slice()]);
    ctx.check_assignment(&space)?;
    let p = loaded.doc.presentation(block, &space, &ctx.assign)?;
    let model = build_model(&p, d.max(p.max_relation_degree()))?;
    let window = match &args.window {
        Some(w) => {
            let (lo, hi) = w.split_once("..").ok_or_else(|| CliError::Input(format!("window '{w}' is not of the form lo..hi")))?;
            let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| CliError::Input(format!("window bound '{s}' is not an integer")));
            (parse(lo)?, parse(hi)?)
        }
        None => (-(model.max_degree() as i64), model.max_degree() as i64),
    };
    let indexed = maps.doc.maps.len() > 1 && maps.doc.maps.iter().all(|m| block_index(&m.name).is_some());
    let ts = if indexed {
        let mut members = BTreeMap::new();
        for m in &maps.doc.maps {
            members.insert(block_index(&m.name).expect("checked"), maps.doc.generator_map(m, &p.alphabet, &space, &ctx.assign)?);
        }
        TwistingSystem::new(members)
    } else {
        let m = maps.doc.map(maps.select.as_deref())?;
        let phi = maps.doc.generator_map(m, &p.alphabet, &space, &ctx.assign)?;
        TwistingSystem::from_automorphism(&phi, window.0, window.1)?
    };
    let verdict = verify_twisting_system(&ts, &model)?;
    let mut r = Report::new("twisting-system");
    r.field("window", vec![ts.window().0, ts.window().1]).field("max_degree", model.max_degree()).verdict("twisting-system identity", &verdict);
    if verdict.holds {
        let twisted = TwistedAlgebra::new(&model, ts)?;
        let assoc = check_associativity_upto(&twisted, d)?;
        let witness = assoc.failures.first().map(|[a, b, c]| format!("({a}, {b}, {c})"));
        r.field("associativity_triples_checked", assoc.triples_checked).check("twisted multiplication associative", assoc.passed(), witness);
        let c = presentation_completion(&twisted, &format!("{}_twisted", p.name), &gens, space.clone(), d)?;
        let dims = c.model.hilbert_function();
        r.artifact(print_presentation(c.presentation()))
            .field("presentation", presentation_json(c.presentation()))
            .field("new_relations", c.new_relations.clone())
            .field("dims", dims.clone());
        let same = dims == model.hilbert_function()[..=d];
        r.check("Hilbert function preserved", same, (!same).then(|| format!("{:?} vs {:?}", dims, &model.hilbert_function()[..=d])));
    }
    Ok(r)
}
