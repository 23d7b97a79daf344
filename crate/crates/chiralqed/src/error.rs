use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("both drive ports are nonzero; normalized statistics are undefined")]
    AmbiguousDrive,
    #[error("operation requires a two-atom system, got N={0}")]
    WrongSystemSize(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a density matrix: {0}")]
    InvalidState(String),
    #[error("steady state is not unique and time evolution did not converge")]
    NonUniqueSteadyState,
    #[error("bordered linear solve failed")]
    SolverSingular,
    #[error("integration step too large: {0}")]
    StepTooLarge(String),
    #[error("correlation undefined: output power is zero")]
    UndefinedCorrelation,
    #[error("classical response matrix is singular")]
    SingularResponse,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
