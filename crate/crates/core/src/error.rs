use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different polynomial rings")]
    VariableMismatch,
    #[error("operands live in different quotient rings")]
    IdealMismatch,
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("the ideal contains 1, the variety is empty")]
    EmptyVariety,
    #[error("rank certification failed: {0}")]
    RankCertification(String),
    #[error("unsupported constructor: {0}")]
    UnsupportedConstructor(String),
    #[error("point is not on the variety: generator {0} does not vanish")]
    PointNotOnVariety(String),
    #[error("the chart minor vanishes at the point")]
    SingularChart,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
    #[error("localization error: {0}")]
    Localization(String),
    #[error("not a vector field: row {row} of J·f is {value}")]
    NotAVectorField { row: usize, value: String },
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("gauge field axiom ({axiom}) fails: {witness}")]
    GaugeAxiom { axiom: &'static str, witness: String },
    #[error("index {index} leaves the window [-{window}, {window}]")]
    WindowOverflow { index: i64, window: i64 },
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("truncation unstable: result changes between orders {0} and {1}")]
    TruncationUnstable(u32, u32),
    #[error("Rudakov reductions of the two words differ")]
    ReductionMismatch,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    Input(String),
}
