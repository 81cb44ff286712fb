use crate::mask::SubsetMask;
use thiserror::Error;

pub type Result<T, E = MatroidError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("ground set of {0} elements exceeds the 16-element limit")]
    GroundSetTooLarge(usize),
    #[error("rank {rank} is out of range for a ground set of {n} elements")]
    RankOutOfRange { rank: usize, n: usize },
    #[error("basis list is empty")]
    EmptyBasisList,
    #[error("mask {mask} lies outside the ground set of {n} elements")]
    MaskOutOfRange { mask: SubsetMask, n: usize },
    #[error("mask {mask} has {found} elements but the rank is {rank}")]
    NotEquicardinal {
        mask: SubsetMask,
        rank: usize,
        found: usize,
    },
    #[error("basis exchange fails: removing {element} from {first} admits no replacement from {second}")]
    ExchangeFails {
        first: SubsetMask,
        second: SubsetMask,
        element: usize,
    },
    #[error("combined ground set of {0} elements exceeds the 16-element limit")]
    GroundSetOverflow(usize),
    #[error("{inner} is not contained in {outer}")]
    NotNested {
        inner: SubsetMask,
        outer: SubsetMask,
    },
    #[error("operation is undefined on the empty matroid")]
    EmptyMatroid,
    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
    #[error("presentation has {sets} nonempty sets but the matroid has rank {rank}")]
    PresentationRankMismatch { sets: usize, rank: usize },
    #[error("family of flats is not a modular cut: {0}")]
    InvalidCut(String),
    #[error("{0} is not a free separator")]
    NotAFreeSeparator(SubsetMask),
    #[error("chain is not a flag from the empty set to the full ground set: {0}")]
    InvalidFlag(String),
    #[error("ground sets differ in size ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("zero diagonal entry in the coefficient matrix at {0}")]
    SingularDiagonal(String),
    #[error("catalog is incomplete: {0}")]
    IncompleteCatalog(String),
    #[error("size {size} exceeds the limit {limit} for this operation")]
    SizeTooLarge { size: usize, limit: usize },
    #[error("malformed iso key `{0}`")]
    BadKey(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
