//! Exact symbolic computation for Lie algebroids.
//!
//! Structure functions, sections and tensors are polynomials with rational
//! coefficients, so every identity is decided by comparing normal forms.
//!
//! - [`poly`]: the coefficient ring.
//! - [`algebroid`]: structure functions, anchors and the section bracket.
//! - [`calculus`]: Schouten bracket, exterior derivative, deformations by an
//!   endomorphism and the Nijenhuis torsion.
//! - [`lifts`]: tensor fields on the total spaces of `E` and `E*`, complete
//!   lifts and relatedness under bundle maps.
//! - [`pn`]: Poisson, Nijenhuis, Poisson-Nijenhuis and bialgebroid checks.

#![allow(clippy::needless_range_loop)]

pub mod algebroid;
pub mod calculus;
pub mod error;
pub mod examples;
pub mod exterior;
pub mod lifts;
pub mod pn;
pub mod poly;

pub use algebroid::{Algebroid, AnchorSide, Bundle, EndoTensor, FiberForm, FiberMultivector, Section};
pub use error::{Error, Result};
pub use poly::{Polynomial, Rational, VarKind, VarSpace, Variable};
