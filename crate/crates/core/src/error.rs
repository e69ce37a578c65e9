use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("arity k = {0} must be odd and at least 3")]
    EvenArity(usize),
    #[error("dimension {dim} out of range for a {m}-dimensional toroid")]
    DimensionOutOfRange { dim: usize, m: usize },
    #[error("index {index} out of range 0..{limit}")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("process {0:?} is not a node of this toroid")]
    BadProcess(Vec<usize>),
    #[error("operands live on different toroids")]
    TopologyMismatch,
    #[error("pair cycle does not cancel: minuend and subtrahend multisets differ")]
    NonCancellingCycle,
    #[error("linear program is {0}")]
    Solver(&'static str),
    #[error("simulation exceeded the cap of {0} events")]
    EventCap(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
