use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the assignment (parameter {0})")]
    ZeroDenominatorAtPoint(String),
    #[error("no value assigned to parameter {0}")]
    MissingAssignment(String),
    #[error("parameter spaces are incompatible: {0}")]
    ParamMismatch(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("generator index {0} outside the alphabet")]
    AlphabetMismatch(usize),
    #[error("expected {expected} tensor factors, found a word of length {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("operation needs all generators in degree 1")]
    NonLinearGenerators,
    #[error("relation is not homogeneous: {0}")]
    InhomogeneousRelation(String),
    #[error("relation has degree below 2: {0}")]
    LowDegreeRelation(String),
    #[error("duplicate generator name {0}")]
    DuplicateGenerator(String),
    #[error("generator {0} must have positive degree")]
    ZeroDegreeGenerator(String),
    #[error("unknown corpus entry {0}")]
    UnknownCorpusEntry(String),
    #[error("degree {degree} outside the truncation (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("degree {degree} needs {words} words, above the configured cap")]
    DegreeTooLarge { degree: usize, words: usize },
    #[error("degree-1 generators do not span degree {0}")]
    NotGeneratedInDegreeOne(usize),
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("twisting-system window does not cover degree {0}")]
    WindowTooSmall(i64),
    #[error("twisting map is ill-defined over relations in degree {degree}: {witness}")]
    IllDefinedOverRelations { degree: usize, witness: String },
    #[error("twisting map is not bijective in {0}")]
    NotBijective(String),
    #[error("generator values do not determine the twisting map in total degree {0}")]
    ExtensionNotUnique(usize),
    #[error("unit condition violated: {0}")]
    UnitViolation(String),
    #[error("dimension mismatch in degree {degree}: expected {expected}, found {found}")]
    DimensionMismatch { degree: usize, expected: usize, found: usize },
    #[error("multiplication map is not bijective in degree {0}")]
    FactorizationNotBijective(usize),
    #[error("associativity fails on {0}")]
    AssociativityFailure(String),
    #[error("twisting map is not strongly graded")]
    NotStronglyGraded,
    #[error("window {window} exceeds truncation degree {max}")]
    WindowExceedsTruncation { window: usize, max: usize },
    #[error("unsupported size {0}")]
    UnsupportedSize(usize),
    #[error("convolution inverse not found: {0}")]
    ConvolutionInverseNotFound(String),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension error: {0}")]
    Shape(String),
}
