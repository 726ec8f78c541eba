use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two fields (or a field and a background) live on different grids.
    GridMismatch,
    /// A grid parameter violates its constraints (N >= 3, h > 0).
    InvalidGrid(&'static str),
    /// Field data does not match the grid (wrong length, or nonzero values
    /// at clamped Dirichlet boundary nodes).
    InvalidField(&'static str),
    /// A model parameter violates its constraints.
    InvalidModel(&'static str),
    /// Nonlinearity evaluated at a negative argument.
    NegativeArgument,
    /// Splitting/recombination got a vector of the wrong length.
    BadSplitLength { expected: usize, got: usize },
    /// The functional is only defined on periodic grids.
    PeriodicOnly(&'static str),
    /// An integrator parameter violates its constraints.
    InvalidConfig(&'static str),
    /// `evolve` was asked to run a method it does not dispatch.
    UnsupportedMethod(&'static str),
    /// The linear solve inside the relaxation scheme failed.
    LinearSolveFailure,
    /// A proximity/lifespan bound was requested outside its window of
    /// validity.
    BoundInapplicable(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GridMismatch => write!(f, "fields live on incompatible grids"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::InvalidField(msg) => write!(f, "invalid field: {msg}"),
            Error::InvalidModel(msg) => write!(f, "invalid model: {msg}"),
            Error::NegativeArgument => write!(f, "nonlinearity argument must be non-negative"),
            Error::BadSplitLength { expected, got } => {
                write!(f, "split vector length {got}, expected {expected}")
            }
            Error::PeriodicOnly(what) => write!(f, "{what} is defined for periodic grids only"),
            Error::InvalidConfig(msg) => write!(f, "invalid integrator config: {msg}"),
            Error::UnsupportedMethod(msg) => write!(f, "unsupported method: {msg}"),
            Error::LinearSolveFailure => write!(f, "linear solve failed"),
            Error::BoundInapplicable(msg) => write!(f, "bound inapplicable: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
