use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "a primitive poset needs at least one branch and every branch length must be positive"
    )]
    EmptyOrNonPositiveBranch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the star graph with arms {0:?} is not a Dynkin diagram")]
    NotDynkin(Vec<usize>),
    #[error("poset {0:?} is not of finite representation type")]
    FiniteTypeRequired(Vec<usize>),
    #[error("transform produced an invalid dimension vector: {0}")]
    NegativeEntry(String),
    #[error("weight entry is not positive: {0}")]
    NonPositiveWeight(String),
    #[error("star weight is not strictly decreasing along branch {0}")]
    NotStrictlyDecreasing(usize),
    #[error("{0} is not an indecomposable dimension vector of this poset")]
    NotInEnumeration(String),
    #[error("Coxeter orbit left the admissible region after {steps} steps at {dim}")]
    OrbitEscape { steps: usize, dim: String },
    #[error("no reference table for poset {0:?}")]
    CorpusMissing(Vec<usize>),
    #[error("basis for element ({branch},{index}) does not have full column rank")]
    RankDeficient { branch: usize, index: usize },
    #[error("subspace ({branch},{index}) is not contained in its successor")]
    ContainmentViolation { branch: usize, index: usize },
    #[error("representations belong to different posets")]
    PosetMismatch,
    #[error("arrow {0} of the quiver representation is not injective")]
    NonMonomorphicArrow(usize),
    #[error("forbidden parameter value: {0}")]
    ForbiddenParameter(String),
    #[error("trace condition fails: sum of alpha*d is {lhs} but gamma*d0 is {rhs}")]
    TraceObstruction { lhs: String, rhs: String },
    #[error("no convergence; best residual {best_residual:e}")]
    NoConvergence { best_residual: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
