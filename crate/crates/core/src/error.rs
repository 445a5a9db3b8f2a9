use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid variable set: {0}")]
    InvalidVarSet(String),

    #[error("operands have different variable sets")]
    VarSetMismatch,

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("operation requires at least {needed} variables, got {got}")]
    TooFewVariables { needed: usize, got: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rank deficiency: generic rank {found} is below the requested {requested}")]
    RankDeficient { requested: usize, found: usize },

    #[error("no certified assignment after {attempts} attempts")]
    AttemptsExhausted { attempts: usize },

    #[error("budget exceeded: {needed} evaluations requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}
