use thiserror::Error;

/// Errors raised by graph construction, group arithmetic and the analysis engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("window overflow: {0}")]
    WindowOverflow(String),
    #[error("cutoff exceeded: {0}")]
    CutoffExceeded(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("malformed group: {0}")]
    MalformedGroup(String),
    #[error("non-bijective identification: {0}")]
    NonBijective(String),
    #[error("alphabet collision on letter `{0}`")]
    AlphabetCollision(String),
    #[error("unstable far field: {0}")]
    UnstableFarField(String),
    #[error("mismatched groups: {0}")]
    MismatchedGroups(String),
    #[error("quotient undefined: {0}")]
    UndefinedQuotient(String),
    #[error("asymmetric measure: {0}")]
    AsymmetricMeasure(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported construction: {0}")]
    Unsupported(String),
    #[error("insufficient points: {0}")]
    InsufficientPoints(String),
    #[error("lemma check failed: {0}")]
    LemmaViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache integrity: {0}")]
    CacheIntegrity(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by a finite window, cutoff or search budget being too small.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::WindowOverflow(_) | Error::CutoffExceeded(_) | Error::BudgetExceeded(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
