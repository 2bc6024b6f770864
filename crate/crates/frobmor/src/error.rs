use crate::linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrobError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("not a module map: {0}")]
    NotLinear(String),
    #[error("not injective: {0}")]
    NotMonic(String),
    #[error("not surjective: {0}")]
    NotEpic(String),
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("index out of range: {0}")]
    Bounds(String),
    #[error("not in subcategory {tag}: offending indices {indices:?}")]
    NotInSubcategory { tag: String, indices: Vec<usize> },
    #[error("no stable isomorphism found: {0}")]
    NoIso(String),
    #[error("fill-in not unique: {0}")]
    NotUnique(String),
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, FrobError>;
