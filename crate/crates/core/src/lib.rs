//! Exact construction and verification of universal recursive formulae for
//! Q-curvatures.
//!
//! Two independent routes produce the coefficients of the recursive formula
//! for `Q_{2N}`: interpolation polynomials `r_I` ([`rpoly`], [`coeffs`]) and
//! residue families built from factorization identities ([`residue`]). The
//! [`sphere`] module checks any formula against closed-form values on round
//! spheres and Einstein metrics.

pub mod coeffs;
pub mod compositions;
pub mod error;
pub mod exact;
pub mod formula;
pub mod golden;
pub mod ops;
pub mod report;
pub mod residue;
pub mod rpoly;
pub mod sphere;
pub mod verify;

pub use compositions::Composition;
pub use error::{Error, Result};
pub use exact::{Rational, UniPoly};
