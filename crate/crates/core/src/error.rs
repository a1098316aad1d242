use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("product {0} * {1} is not defined")]
    UndefinedProduct(String, String),
    #[error("arguments belong to different algebras ({0} vs {1})")]
    MixedAlgebra(String, String),
    #[error("function has a pole at {0}")]
    Pole(String),
    #[error("value has no closed form in the symbolic field: {0}")]
    Unsupported(String),
    #[error("incompatible series: {0}")]
    Incompatible(String),
    #[error("leading coefficient is zero or not a unit")]
    NonUnitLeading,
    #[error("exponent f_{0} has a nonzero constant term")]
    NonzeroConstant(usize),
    #[error("requested order {requested} exceeds available order {available}")]
    OrderTooLarge { requested: String, available: String },
    #[error("Gamma argument hits a pole in term (k, l) = ({k}, {l})")]
    PoleCollision { k: i64, l: i64 },
    #[error("contour pinches a pole: {0}")]
    ContourPinch(String),
    #[error("precision of {0} digits is insufficient")]
    Precision(u32),
    #[error("found {found} critical points, expected {expected}")]
    RootCount { found: usize, expected: usize },
    #[error("Newton iteration did not converge (residual {0:e})")]
    NoConvergence(f64),
    #[error("Hessian is singular at a critical point")]
    SingularHessian,
    #[error("base point lies on the discriminant locus")]
    Discriminant,
    #[error("unknown model {0}")]
    UnknownModel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    Singular,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
