use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("operands belong to different prime fields ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("not a square: {0}")]
    NotASquare(String),
    #[error("Hensel condition failed: ord(f(a)) = {r}, ord(f'(a)) = {s}, need r > 2s")]
    HenselConditionFailed { r: i64, s: i64 },
    #[error("outside the series domain: ord(x) = {got}, need >= {need}")]
    OutsideDomain { got: i64, need: i64 },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("points lie on different level sets")]
    LevelMismatch,
    #[error("degenerate level k = 0 has no generic transporter")]
    DegenerateLevel,
    #[error("operation requires p = 1 mod 4, got p = {0}")]
    WrongPrimeClass(u64),
    #[error("chart singularity: z = 0")]
    ChartSingularity,
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("residue window too small: {0}")]
    WindowTooSmall(String),
    #[error("unsupported prime for visualization: {0}")]
    UnsupportedPrime(u64),
    #[error("io failure: {0}")]
    IoFailure(String),
    #[error("parse error: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, PadicError>;
