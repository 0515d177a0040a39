use thiserror::Error;

use crate::weights::{GroupParams, Weight};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: i64, right: i64 },

    #[error("weight {0} is not dominant and polynomial")]
    NotDominantPolynomial(Weight),

    #[error("weight {weight} is not column {e}-regular")]
    NotColumnRegular { weight: Weight, e: i64 },

    #[error("the zero character has no divisibility index")]
    ZeroCharacter,

    #[error("character has a negative multiplicity at {0}")]
    NegativeMultiplicity(Weight),

    #[error("character has a non-polynomial exponent {0}")]
    NonPolynomialExponent(Weight),

    /// Peeling hit a negative coefficient or a remainder without a dominant
    /// exponent: the input is not a nonnegative combination of the basis.
    #[error("not expressible in this basis: {0}")]
    NotExpressible(String),

    #[error("I({lam}) is not infinitesimally injective at {params}")]
    NotInfinitesimallyInjective { lam: Weight, params: GroupParams },

    #[error("no composition-factor oracle available for rank {0}")]
    NoOracle(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("multiplicity does not fit in a machine integer")]
    Overflow,

    /// Two independent routes to the same quantity disagreed. Always a bug.
    #[error("{what} disagreement at lambda={lam}, {params}: {left} vs {right}")]
    Disagreement { what: &'static str, lam: Weight, params: GroupParams, left: String, right: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
