//! Exact computation with interval exchange transformations of the circle:
//! group operations, growth of discontinuities, scissors and cocycle
//! invariants, and structural decompositions.
//!
//! Everything is generic over an [`ExactReal`] scalar. Two backends are
//! provided: plain rationals and vectors over a basis of square roots.

pub mod cli;
pub mod growth;
pub mod iet;
pub mod invariants;
pub mod scalar;
pub mod structure;

use num_rational::BigRational;

pub use growth::{classify_growth, growth_series, GrowthConfig, GrowthKind, GrowthVerdict};
pub use iet::{ArcSet, Iet, IetError, PiLambda};
pub use invariants::{cocycle, saf, undistortion_bounds, SafInvariant};
pub use scalar::{Basis, ExactReal, Scalar};
pub use structure::{bounded_normal_form, centralizer_factor, commutes, components, order, Order};

/// Maps with rational cuts and translations.
pub type RationalIet = Iet<BigRational>;
/// Maps over a basis of square roots.
pub type QuadraticIet = Iet<Scalar>;
pub type RationalArcSet = ArcSet<BigRational>;
pub type QuadraticArcSet = ArcSet<Scalar>;
