use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("d = {0} is not one of the nine class-number-one fields")]
    UnknownField(i64),
    #[error("operation not available over Q(sqrt(-{0}))")]
    WrongField(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("the zero ideal has no generator")]
    ZeroIdeal,
    #[error("singular Weierstrass model")]
    SingularModel,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("profile of (a, b) matches no odd-conductor row: {0}")]
    NotOddConductor(String),
    #[error("invalid valuation profile: {0}")]
    InvalidProfile(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("no curve with odd discriminant valuation in the isogeny class of {0}")]
    CorollaryViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
