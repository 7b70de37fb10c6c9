//! Exact decision procedures and explicit witness constructions for
//! polynomial curves on trinomial affine hypersurfaces of Types 1 and 2.
//!
//! The crate decides rationality, existence of horizontal curves and of
//! Schwartz-Halphen curves, constructs witness curves with exact algebraic
//! coefficients over towers of extensions of Q, and re-verifies every
//! construction symbolically and independently.

pub mod error;
pub mod tower;
pub mod upoly;

pub use error::{Error, Result};
pub use tower::{AlgNum, Rat, Tower};
pub use upoly::UPoly;
