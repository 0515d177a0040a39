//! Exact character computations for polynomial injective modules of the
//! general linear group and its quantisation at a root of unity.

pub mod charring;
pub mod error;
pub mod exec;
pub mod gl2;
pub mod injectivity;
pub mod schur;
pub mod selfcheck;
pub mod table;
pub mod weights;

pub use charring::{peel_into_basis, Character};
pub use error::{Error, Result};
pub use exec::Execution;
pub use gl2::{Classification, FactorizationDescriptor, Gl2Engine};
pub use weights::{
    digit_expansion, dominance_leq, eadic_split, is_column_regular, DigitExpansion, GroupParams, Weight,
};
