use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("jet order {order} exceeds the configured maximum {max}")]
    JetOrderOverflow { order: u32, max: u32 },

    #[error("maximum jet order must be at least 7, got {0}")]
    JetOrderTooSmall(u32),

    #[error("cannot invert non-monomial expression `{0}`")]
    NonInvertible(String),

    #[error("log argument `{0}` is not a Laurent monomial")]
    LogArgument(String),

    #[error("intt argument `{0}` must not depend on x or on jet variables")]
    IntTArgument(String),

    #[error("function `{name}` used with signature ({first}) and ({second})")]
    SignatureConflict { name: String, first: String, second: String },

    #[error("definition of `{name}` depends on `{var}`, which is outside its signature")]
    SignatureMismatch { name: String, var: String },

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("degenerate equivalence parameters: {0}")]
    DegenerateParams(String),

    #[error("u_t has coefficient `{0}` in the equation, expected 1")]
    UtCoefficient(String),

    #[error("cannot solve `{condition}` for `{target}`")]
    Unsolvable { condition: String, target: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("rewriting did not terminate after {0} steps")]
    RewriteLoop(usize),

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("fixture `{name}`: {msg}")]
    Fixture { name: String, msg: String },

    #[error("json: {0}")]
    Json(String),
}
