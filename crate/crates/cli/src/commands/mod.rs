//! Subcommands and their shared plumbing.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twistkit_core::presentation::builtin_corpus;
use twistkit_core::{Error, GradedPresentation, ParamSpace, TruncatedAlgebraModel};

use crate::dsl::{print_presentation, AlgebraBlock, Assignment, Document, DslError};
use crate::report::{input_error, Format, Report};

mod algebra;
mod quantum;
mod ttp;

/// Degree cutoff used when `-D` is not given.
pub const DEFAULT_MAX_DEGREE: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "twistkit", version, about = "Exact truncated computations with twisted graded algebras")]
pub struct Cli {
    /// Degree cutoff D (at least 2)
    #[arg(short = 'D', long = "max-degree", global = true)]
    pub max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Substitute a rational value for a parameter, e.g. --param a=2
    #[arg(long = "param", value_name = "NAME=VALUE", global = true)]
    pub params: Vec<String>,
    /// Write the report to this file instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

/// An algebra from a file (`FILE` or `FILE@NAME`) or the builtin corpus.
#[derive(Args, Debug, Clone)]
pub struct AlgebraInput {
    /// `.alg` or JSON presentation; FILE@NAME picks one algebra block
    #[arg(long = "in", value_name = "FILE", conflicts_with = "corpus")]
    pub input: Option<String>,
    /// Builtin presentation, e.g. polynomial(3), quantum_plane(q), oq_m(2,q)
    #[arg(long, value_name = "ENTRY")]
    pub corpus: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal words and dimensions of A up to degree D
    Truncate(AlgebraInput),
    /// Hilbert function of A up to degree D
    Hilbert(AlgebraInput),
    /// Relations of the Zhang twist of A by a graded automorphism
    Zhang(algebra::ZhangArgs),
    /// Verify a twisting system and present the twisted algebra
    TwistingSystem(algebra::TwistingSystemArgs),
    /// Twisting maps and twisted tensor products
    Ttp(ttp::TtpArgs),
    /// Twisting maps between finite-dimensional commutative semisimple algebras
    FdTtp(ttp::FdArgs),
    /// Twisted Segre product of A and B along a strongly graded twisting map
    Segre(ttp::SegreArgs),
    /// Quantum matrices, twisting pairs and cocycle twists
    Quantum(quantum::QuantumArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Truncate(_) => "truncate",
            Command::Hilbert(_) => "hilbert",
            Command::Zhang(_) => "zhang",
            Command::TwistingSystem(_) => "twisting-system",
            Command::Ttp(_) => "ttp",
            Command::FdTtp(_) => "fd-ttp",
            Command::Segre(_) => "segre",
            Command::Quantum(_) => "quantum",
        }
    }
}

/// Why a subcommand stopped without a report of its own.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable or malformed input (exit code 2).
    Input(String),
    /// A mathematical condition failed before a report could be assembled
    /// (exit code 1); the message is the witness.
    Failed(String),
}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        use Error::*;
        match e {
            Syntax { .. }
            | UnknownCorpusEntry(_)
            | InhomogeneousRelation(_)
            | LowDegreeRelation(_)
            | DuplicateGenerator(_)
            | ZeroDegreeGenerator(_)
            | ParamMismatch(_)
            | MissingAssignment(_)
            | ZeroDenominatorAtPoint(_)
            | AlphabetMismatch(_)
            | LengthMismatch { .. }
            | NonLinearGenerators
            | Shape(_)
            | UnsupportedSize(_)
            | DegreeTooLarge { .. }
            | DegreeOutOfRange { .. }
            | WindowExceedsTruncation { .. }
            | WindowTooSmall(_) => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

pub type CmdResult = Result<Report, CliError>;

/// Settings shared by every subcommand.
pub struct Context {
    max_degree: Option<usize>,
    pub assign: Assignment,
}

impl Context {
    pub fn new(max_degree: Option<usize>, params: &[String]) -> Result<Self, CliError> {
        Ok(Context { max_degree, assign: Assignment::parse(params)? })
    }

    /// The `-D` value, or `default`; at least 2.
    pub fn degree(&self, default: usize) -> Result<usize, CliError> {
        let d = self.max_degree.unwrap_or(default);
        if d < 2 {
            return Err(CliError::Input(format!("max degree must be at least 2, got {d}")));
        }
        Ok(d)
    }

    /// Rejects assignments to names that no input uses.
    pub fn check_assignment(&self, space: &ParamSpace) -> Result<(), CliError> {
        match self.assign.names().find(|n| space.index_of(n).is_none()) {
            Some(n) => Err(CliError::Input(format!("--param {n}: no such parameter in the inputs"))),
            None => Ok(()),
        }
    }
}

/// A parsed input file together with the block selected by `FILE@NAME`.
pub struct Loaded {
    pub doc: Document,
    pub select: Option<String>,
}

pub fn load(spec: &str) -> Result<Loaded, CliError> {
    let (path, select) = match spec.rsplit_once('@') {
        Some((p, n)) if !n.is_empty() && !n.contains('/') => (p, Some(n.to_string())),
        _ => (spec, None),
    };
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let doc = Document::parse_any(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    Ok(Loaded { doc, select })
}

impl Loaded {
    pub fn algebra(&self) -> Result<&AlgebraBlock, CliError> {
        Ok(self.doc.algebra(self.select.as_deref())?)
    }
}

pub fn load_algebra(input: &AlgebraInput) -> Result<Loaded, CliError> {
    match (&input.input, &input.corpus) {
        (Some(path), _) => load(path),
        (None, Some(entry)) => {
            let p = builtin_corpus(entry)?;
            Ok(Loaded { doc: Document::parse(&print_presentation(&p))?, select: None })
        }
        (None, None) => Err(CliError::Input("give an algebra with --in FILE or --corpus ENTRY".into())),
    }
}

/// Parameter space declaring `groups` in order, each name once.
pub fn union_space<'a>(groups: impl IntoIterator<Item = &'a [String]>) -> ParamSpace {
    let mut space = ParamSpace::new();
    for g in groups {
        for n in g {
            space.declare(n);
        }
    }
    space
}

/// One algebra on its own: presentation over its declared parameters.
pub fn single_presentation(ctx: &Context, input: &AlgebraInput) -> Result<GradedPresentation, CliError> {
    let loaded = load_algebra(input)?;
    let block = loaded.algebra()?;
    let space = union_space([block.params.as_slice()]);
    ctx.check_assignment(&space)?;
    Ok(loaded.doc.presentation(block, &space, &ctx.assign)?)
}

pub fn build_model(p: &GradedPresentation, d: usize) -> Result<TruncatedAlgebraModel, CliError> {
    Ok(TruncatedAlgebraModel::build(p, d)?)
}

pub fn dispatch(ctx: &Context, command: &Command) -> CmdResult {
    match command {
        Command::Truncate(input) => algebra::truncate(ctx, input),
        Command::Hilbert(input) => algebra::hilbert(ctx, input),
        Command::Zhang(args) => algebra::zhang(ctx, args),
        Command::TwistingSystem(args) => algebra::twisting_system(ctx, args),
        Command::Ttp(args) => ttp::ttp(ctx, args),
        Command::FdTtp(args) => ttp::fd_ttp(ctx, args),
        Command::Segre(args) => ttp::segre(ctx, args),
        Command::Quantum(args) => quantum::quantum(ctx, args),
    }
}

/// Runs a parsed command line and returns the exit code: 0 when every
/// check passed, 1 on a failed check, 2 on unusable input.
pub fn run(cli: &Cli) -> i32 {
    let format: Format = cli.format.into();
    let name = cli.command.name();
    let outcome = Context::new(cli.max_degree, &cli.params).and_then(|ctx| dispatch(&ctx, &cli.command));
    let (text, code) = match outcome {
        Ok(report) => {
            let code = if report.passed() { 0 } else { 1 };
            (report.render(format), code)
        }
        Err(CliError::Failed(witness)) => {
            let mut report = Report::new(name);
            report.check("construction", false, Some(witness));
            (report.render(format), 1)
        }
        Err(CliError::Input(message)) => {
            if format == Format::Text {
                eprint!("{}", input_error(name, &message, format));
                return 2;
            }
            (input_error(name, &message, format), 2)
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_atomically(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    code
}

fn write_atomically(path: &std::path::Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}
