use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("combinatorial R invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("tableau enumeration would exceed {limit} elements")]
    CapacityExceeded { limit: usize },
    #[error("no fixed-point carrier for T[{r},{l}] on {path}")]
    NoCarrier { r: usize, l: usize, path: String },
    #[error("T[{r},{l}] on {path} is not unique: carriers {carriers:?} disagree")]
    NonUniqueEvolution { r: usize, l: usize, path: String, carriers: Vec<String> },
    #[error("negative multiplicity in soliton content of {0}")]
    NegativeMultiplicity(String),
    #[error("path {0} is not in B_1 (letter 1 is not the most frequent)")]
    NotInB1(String),
    #[error("path {0} is not highest")]
    NotHighest(String),
    #[error("invalid rigged configuration: {0}")]
    InvalidRiggedConfiguration(String),
    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("velocity vector is zero")]
    ZeroVelocity,
    #[error("no highest path in the orbit of {0}")]
    NoHighestPathInOrbit(String),
    #[error("scattering routes disagree: theta gives {theta}, kkr gives {kkr} ({detail})")]
    RoutesDisagree { theta: String, kkr: String, detail: String },
    #[error("theta digit x[{k},{color}] = {value} is not binary")]
    NonBinaryDigit { k: usize, color: usize, value: String },
    #[error("carrier occupancy y[{k},{color}] = {value} is negative")]
    NegativeOccupancy { k: usize, color: usize, value: String },
    #[error("string centers collide in block ({color},{block})")]
    CollisionDetected { color: usize, block: usize },
    #[error("evolution T[{r},{l}] is inadmissible for this soliton content")]
    Inadmissible { r: usize, l: usize },
    #[error("{0}")]
    Mismatch(String),
}

impl Error {
    /// Variant name, used as a stable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "Parse",
            Error::InvalidTableau(_) => "InvalidTableau",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
            Error::CapacityExceeded { .. } => "CapacityExceeded",
            Error::NoCarrier { .. } => "NoCarrier",
            Error::NonUniqueEvolution { .. } => "NonUniqueEvolution",
            Error::NegativeMultiplicity(_) => "NegativeMultiplicity",
            Error::NotInB1(_) => "NotInB1",
            Error::NotHighest(_) => "NotHighest",
            Error::InvalidRiggedConfiguration(_) => "InvalidRiggedConfiguration",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::SingularMatrix => "SingularMatrix",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::ZeroVelocity => "ZeroVelocity",
            Error::NoHighestPathInOrbit(_) => "NoHighestPathInOrbit",
            Error::RoutesDisagree { .. } => "RoutesDisagree",
            Error::NonBinaryDigit { .. } => "NonBinaryDigit",
            Error::NegativeOccupancy { .. } => "NegativeOccupancy",
            Error::CollisionDetected { .. } => "CollisionDetected",
            Error::Inadmissible { .. } => "Inadmissible",
            Error::Mismatch(_) => "Mismatch",
        }
    }
}
