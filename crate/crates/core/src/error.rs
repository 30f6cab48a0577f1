use thiserror::Error;

/// Errors raised across the crate.
///
/// [`Error::kind`] gives the stable variant name that the command-line
/// front end prints as `error: <kind>: <detail>`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("the list of minimal path sets is empty (or contains an empty set)")]
    EmptyPathSets,
    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("component {0} belongs to no minimal path set")]
    IrrelevantComponent(usize),
    #[error("{0} minimal path sets exceed the inclusion-exclusion cap of 25")]
    TooManyPathSets(usize),
    #[error("{0} components exceed the supported maximum of 64")]
    TooManyComponents(usize),
    #[error("invalid k={k} for n={n}; need 1 <= k <= n")]
    InvalidK { k: usize, n: usize },
    #[error("unknown structure kind `{0}`")]
    UnknownStructure(String),

    #[error("{family}: parameter `{param}` = {value} is outside the admissible range")]
    ParamOutOfRange {
        family: &'static str,
        param: &'static str,
        value: f64,
    },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("{0}")]
    DomainError(String),

    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("components are not identically distributed")]
    NotIdenticallyDistributed,
    #[error("invalid marginal: {0}")]
    InvalidMarginal(String),
    #[error("empty component set")]
    EmptySet,
    #[error("expected {expected} aging functions, got {got}")]
    AgingLengthMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite value at t = {0}")]
    NonFiniteValue(f64),
    #[error("only {remaining} grid points survive clipping (need at least 16)")]
    DomainCollapsed { remaining: usize },
    #[error("density vanishes at interior point t = {0}")]
    ZeroDensity(f64),
    #[error("{proposition}: {detail}")]
    WrongInputShape {
        proposition: &'static str,
        detail: String,
    },

    #[error("survival at t = {0} is below the clip floor; conditioning is ill-posed")]
    SurvivalUnderflowAt(f64),

    #[error("no frailty sampler for family `{0}`")]
    UnsupportedFrailty(String),
    #[error("inverse aging root finding failed at y = {0}")]
    RootFindFailure(f64),
    #[error("sample batch has {got} components, structure expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("only {survivors} samples satisfy the conditioning event (need {required})")]
    InsufficientConditioning { survivors: usize, required: usize },

    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyPathSets => "EmptyPathSets",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::IrrelevantComponent(_) => "IrrelevantComponent",
            Error::TooManyPathSets(_) => "TooManyPathSets",
            Error::TooManyComponents(_) => "TooManyComponents",
            Error::InvalidK { .. } => "InvalidK",
            Error::UnknownStructure(_) => "UnknownStructure",
            Error::ParamOutOfRange { .. } => "ParamOutOfRange",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::DomainError(_) => "DomainError",
            Error::NegativeTime(_) => "NegativeTime",
            Error::NotIdenticallyDistributed => "NotIdenticallyDistributed",
            Error::InvalidMarginal(_) => "InvalidMarginal",
            Error::EmptySet => "EmptySet",
            Error::AgingLengthMismatch { .. } => "AgingLengthMismatch",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::NonFiniteValue(_) => "NonFiniteValue",
            Error::DomainCollapsed { .. } => "DomainCollapsed",
            Error::ZeroDensity(_) => "ZeroDensity",
            Error::WrongInputShape { .. } => "WrongInputShape",
            Error::SurvivalUnderflowAt(_) => "SurvivalUnderflowAt",
            Error::UnsupportedFrailty(_) => "UnsupportedFrailty",
            Error::RootFindFailure(_) => "RootFindFailure",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InsufficientConditioning { .. } => "InsufficientConditioning",
            Error::Spec(_) => "SpecError",
            Error::Io(_) => "Io",
            Error::Json(_) => "SpecError",
            Error::Csv(_) => "Io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
