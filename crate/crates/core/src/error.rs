use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("values and marks differ in length ({values} vs {marks})")]
    LengthMismatch { values: usize, marks: usize },
    #[error("a ribbon needs at least two nodes")]
    TooFewNodes,
    #[error("odd number of nodes ({0})")]
    OddLength(usize),
    #[error("values are not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("node {0} is not a local extremum")]
    NotZigZag(usize),
    #[error("mark {0} is neither +1 nor -1")]
    BadMark(i64),
    #[error("two nodes share a level")]
    DuplicateLevel,
    #[error("nodes {0} and {1} cannot be cancelled")]
    NotCancellable(usize, usize),
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("level collision while gluing; perturb the levels and retry")]
    LevelCollision,
    #[error("not a canonical ladder")]
    NotCanonicalLadder,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{what} is limited to n <= {max}, got n = {n}")]
    LimitExceeded { what: &'static str, max: usize, n: usize },
    #[error("no ribbon with {n} nodes has signature {sigma}")]
    InfeasibleSigma { n: usize, sigma: i64 },
    #[error("no splitting candidate for {0}")]
    InternalNoCandidate(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TooFewNodes => "TooFewNodes",
            Error::OddLength(_) => "OddLength",
            Error::NotPermutation(_) => "NotPermutation",
            Error::NotZigZag(_) => "NotZigZag",
            Error::BadMark(_) => "BadMark",
            Error::DuplicateLevel => "DuplicateLevel",
            Error::NotCancellable(..) => "NotCancellable",
            Error::MoveNotApplicable(_) => "MoveNotApplicable",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::LevelCollision => "LevelCollision",
            Error::NotCanonicalLadder => "NotCanonicalLadder",
            Error::Parse { .. } => "Parse",
            Error::LimitExceeded { .. } => "TooLarge",
            Error::InfeasibleSigma { .. } => "InfeasibleSigma",
            Error::InternalNoCandidate(_) => "InternalNoCandidate",
            Error::UnknownSuite(_) => "UnknownSuite",
        }
    }
}
