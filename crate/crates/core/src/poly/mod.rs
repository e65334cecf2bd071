//! Exact sparse multivariate polynomials over ℤ (or a prime field) and
//! canonical normal forms modulo a principal relation.

mod context;
mod json;
mod monomial;
mod parse;
mod polynomial;
mod quotient;

pub use context::{CoeffDomain, MonomialOrder, PolyDisplay, RingContext};
pub use json::{MatrixJson, PolyJson, TermJson};
pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use quotient::{normal_form, ring_arith, same_context, ArithOp, QuotientElement};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands belong to different ring contexts")]
    ContextMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("monomial has {found} exponents, context has {expected} variables")]
    ArityMismatch { expected: usize, found: usize },
    #[error("relation must be nonzero")]
    ZeroRelation,
    #[error("relation leading coefficient {0} is not a unit")]
    NonUnitLeadingCoefficient(String),
    #[error("modulus {0} is not a prime field characteristic")]
    InvalidModulus(u64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix dimension {dim} exceeds the cofactor bound {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}
