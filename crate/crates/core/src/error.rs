use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on structure (Hermiticity, diagonality, completeness) failed.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A value is out of its admissible range.
    #[error("invalid input: {0}")]
    Input(String),
    /// Shapes or dimensions do not fit together.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// |C| is numerically 1: the channel is unitary and needs no correction observable.
    #[error("degenerate channel (|C| = {0}): treat it as the identity, no correction needed")]
    DegenerateChannel(f64),
    /// Mixture weight w is 0 or 1; the mixed-environment study does not apply.
    #[error("environment is pure (w = {0}): use the pure-environment pipeline")]
    PureEnvironment(f64),
    /// A result broke a theorem-level invariant; indicates a construction bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
