use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, &'static str),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {0} out of range 1..={1}")]
    OutOfRange(usize, usize),
    #[error("order {n} not valid for {family}: {reason}")]
    BadOrder {
        family: &'static str,
        n: usize,
        reason: &'static str,
    },
    #[error("bad block sequence: {0}")]
    BadBlocks(String),
    #[error("partition is not equitable: {0}")]
    NotEquitable(String),
    #[error("quotient is not self-adjoint in the weighted space at ({0}, {1})")]
    NotSelfAdjoint(usize, usize),
    #[error("spectrum split failed: {0}")]
    MatchFailure(String),
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("hermitian embedding produced unpaired eigenvalue {0}")]
    OddMultiplicity(f64),
    #[error("tridiagonal off-diagonal entry {0} is zero")]
    ZeroOffDiagonal(usize),
    #[error("need at least {0} eigenvalues")]
    TooSmall(usize),
    #[error("lambda = {0} is excluded from the closed form")]
    ExcludedLambda(f64),
    #[error("closed form overflowed at index {0}")]
    NumericOverflow(usize),
    #[error("boundary components vanish (m = {0})")]
    DegenerateSequence(usize),
    #[error("{0} is not an exceptional value for this family")]
    UnsupportedValue(f64),
    #[error("audit failed: {0}")]
    AuditFailure(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("no data series to plot")]
    EmptySeries,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("solver failed: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
