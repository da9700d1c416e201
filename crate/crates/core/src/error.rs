use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid field: {0}")]
    Field(String),
    #[error("generator index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{0}")]
    Domain(String),
    #[error("column is not a Fox derivative: Y*a = {0}")]
    NotADerivative(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("inadmissible context: {0}")]
    InadmissibleContext(String),
    #[error("cubic obstruction: {0}")]
    CubicObstruction(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("exponent overflow")]
    Overflow,
}

impl Error {
    /// Certification failures mean the engine produced something wrong,
    /// as opposed to rejecting bad input.
    pub fn is_certification(&self) -> bool {
        matches!(self, Error::Certification(_))
    }

    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Field(_) => "field",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::Domain(_) => "domain",
            Error::NotADerivative(_) => "not_a_derivative",
            Error::NotAutomorphism(_) => "not_automorphism",
            Error::Hypothesis(_) => "hypothesis",
            Error::InadmissibleContext(_) => "inadmissible_context",
            Error::CubicObstruction(_) => "cubic_obstruction",
            Error::Certification(_) => "certification",
            Error::Parse { .. } => "parse",
            Error::Overflow => "overflow",
        }
    }
}
