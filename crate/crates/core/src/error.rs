use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid size {0}: {1}")]
    InvalidSize(usize, &'static str),

    #[error("matrix is numerically singular")]
    Singular,

    #[error("matrix is not in sl(n,H): |Re tr| = {0:e}")]
    NotInAlgebra(f64),

    #[error("matrix is not in Sl(n,H): |det| = {0}")]
    NotInGroup(f64),

    #[error("matrix is not diagonal")]
    NotDiagonal,

    #[error("diagonal entries are not complex (j,k parts present)")]
    NotComplexDiagonal,

    #[error("bracket closure did not stabilize within {depth} generations (rank {rank})")]
    ClosureUnstable { depth: usize, rank: usize },

    #[error("eigenvalue classes are near-degenerate (relative gap {0:e})")]
    NearDegenerate(f64),

    #[error("matrix is not semisimple (defective eigenvalue)")]
    Defective,

    #[error("weyl chamber ordering violated: {0}")]
    OrderingViolated(String),

    #[error("series flow residual {0:e} above tolerance")]
    FlowResidual(f64),

    #[error("invalid control signal: {0}")]
    InvalidSignal(String),

    #[error("grassmann frame collapsed under the action (residual {0:e})")]
    RankCollapse(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear program failed: {0}")]
    LinearProgram(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
