//! Numerical verification kernel for the sub-Riemannian geometry of normal
//! bundles on the space of immersed closed curves.
//!
//! * [`field`], [`curve`], [`curves`]: periodic grid calculus, curve frames,
//!   curvature and tangential/normal splitting, standard test curves.
//! * [`oneform`]: constructive decomposition of one-forms on the circle into
//!   sums of `a db − b da`.
//! * [`calculus`]: covariant derivatives on the immersion space, flow
//!   commutators, the variation of the unit normal, normal-field brackets.
//! * [`hoermander`]: rank verification of `Nor + [Nor, Nor]` and synthesis of
//!   tangential fields from brackets.
//! * [`arc`]: the Arc distribution of plane curves, its projection, flows
//!   and integrability checks.
//!
//! ```
//! use norbrack_core::calculus::{bracket_closed_form, bracket_numeric};
//! use norbrack_core::{curves, PeriodicScalarField};
//!
//! let c = curves::ellipse(256, 2.0, 1.0)?;
//! let a = PeriodicScalarField::from_fn(256, f64::cos)?;
//! let b = PeriodicScalarField::from_fn(256, |t| (2.0 * t).sin())?;
//! let closed = bracket_closed_form(&c, &a, &b)?;
//! let numeric = bracket_numeric(&c, &a, &b, 1e-5)?;
//! assert!(closed.sub(&numeric)?.max_norm() < 1e-3);
//! # Ok::<(), norbrack_core::GeometryError>(())
//! ```

pub mod arc;
pub mod calculus;
pub mod curve;
pub mod curves;
pub mod error;
pub mod field;
pub mod hoermander;
pub mod io;
pub mod oneform;

pub use curve::{Ambient, DiscreteImmersion, ImmersionTangent, Vec3};
pub use error::{GeometryError, Result};
pub use field::PeriodicScalarField;
