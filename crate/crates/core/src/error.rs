use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("d must be a positive integer, got {0}")]
    NonPositiveD(i64),
    #[error("d = {d} is not square-free (divisible by {factor}^2)")]
    NotSquareFree { d: i64, factor: i64 },
    #[error("cannot parse ring specification {0:?}; expected \"d=<int>\", \"gaussian\" or \"eisenstein\"")]
    RingSyntax(String),
    #[error("ring element arithmetic overflowed 64-bit coordinates")]
    Overflow,
    #[error("non-finite input {0}")]
    NonFinite(String),
    #[error("modulus norm {0} is not prime")]
    CompositeNorm(u64),
    #[error("no root of the minimal polynomial mod {p} annihilates the modulus")]
    NoMorphismRoot { p: u64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("basis is numerically dependent (condition number {0:.3e})")]
    DependentBasis(f64),
    #[error("delta = {delta} is outside the admissible range ({low}, 1] for this ring")]
    InvalidDelta { delta: f64, low: f64 },
    #[error("zero vector {0}")]
    ZeroVector(&'static str),
    #[error("iteration cap of {0} reached")]
    IterationCap(usize),
    #[error("dimension {n} exceeds the enumeration limit of {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("enumeration budget of {budget} nodes exceeded (best squared radius so far {best_radius_sq})")]
    BudgetExceeded { budget: u64, best_radius_sq: f64 },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("every candidate coefficient matrix is rank-deficient over F_{0}")]
    RankDeficient(u64),
    #[error("io error: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
