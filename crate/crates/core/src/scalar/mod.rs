//! Exact real numbers living in a finitely generated ℚ-vector space.
//!
//! Every length and translation of an interval exchange is a [`ExactReal`].
//! Two implementations are provided: plain [`BigRational`] values, and
//! [`Scalar`], a rational coordinate vector over a declared [`Basis`] of
//! ℚ-linearly independent square roots. Equality is exact in both cases and
//! ordering is decided by refining certified enclosures.

mod basis;
mod quadratic;
mod rational;

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use basis::{Basis, Generator, DEFAULT_MAX_DEPTH};
pub use quadratic::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("scalars belong to different bases")]
    BasisMismatch,
    #[error("sign not resolved after {bits} bits of enclosure refinement")]
    RefinementDepthExceeded { bits: u32 },
    #[error("generator index {index} out of range for a basis of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("coordinate vector has {got} entries, basis has {expected}")]
    CoordinateCount { expected: usize, got: usize },
}

/// The number system interval exchanges are built over.
///
/// Arithmetic is exact. `try_cmp` may fail only when enclosure refinement hits
/// its configured depth, which signals a broken independence declaration.
pub trait ExactReal:
    Clone
    + fmt::Debug
    + fmt::Display
    + Eq
    + Hash
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
{
    fn try_cmp(&self, other: &Self) -> Result<Ordering, ScalarError>;

    /// The rational 1.
    fn unit() -> Self {
        Self::from_rational(BigRational::one())
    }

    fn scale(&self, q: &BigRational) -> Self;

    /// Largest integer not exceeding the value.
    fn floor(&self) -> Result<BigInt, ScalarError>;

    /// Embeds a rational; the result is compatible with every basis.
    fn from_rational(q: BigRational) -> Self;

    /// Coordinates in the declared basis, rational part first.
    fn coords(&self) -> Vec<BigRational>;

    /// Coordinate `i`, zero when `i` lies past the stored coordinates.
    fn coord(&self, i: usize) -> BigRational {
        self.coords().get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    fn as_rational(&self) -> Option<BigRational>;

    fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn try_lt(&self, other: &Self) -> Result<bool, ScalarError> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    fn try_le(&self, other: &Self) -> Result<bool, ScalarError> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    fn signum(&self) -> Result<Ordering, ScalarError> {
        self.try_cmp(&Self::zero())
    }
}

pub fn compare<S: ExactReal>(a: &S, b: &S) -> Result<Ordering, ScalarError> {
    a.try_cmp(b)
}

/// Representative of `a` modulo 1 in `[0, 1)`.
pub fn mod_one<S: ExactReal>(a: &S) -> Result<S, ScalarError> {
    let n = a.floor()?;
    if n.is_zero() {
        return Ok(a.clone());
    }
    Ok(a.sub_ref(&S::from_rational(BigRational::from_integer(n))))
}

/// Reduces `x` assumed to lie in `[0, 2)` into `[0, 1)` with one comparison.
pub(crate) fn wrap_once<S: ExactReal>(x: S) -> Result<S, ScalarError> {
    if x.try_cmp(&S::unit())? == Ordering::Less {
        Ok(x)
    } else {
        Ok(x - S::unit())
    }
}

/// `-t mod 1` for `t` in `[0, 1)`.
pub(crate) fn negate_unit<S: ExactReal>(t: &S) -> S {
    if t.is_zero() {
        S::zero()
    } else {
        S::unit() - t.clone()
    }
}

/// `[i]`-coordinate read-out; the linear projection onto one generator.
pub fn project<S: ExactReal>(a: &S, index: usize, basis_len: usize) -> Result<BigRational, ScalarError> {
    if index >= basis_len {
        return Err(ScalarError::IndexOutOfRange { index, len: basis_len });
    }
    Ok(a.coord(index))
}

/// True when `a = q·b` for some rational `q` (or `b` is zero and `a` is zero).
pub fn rationally_dependent<S: ExactReal>(a: &S, b: &S) -> bool {
    let (ca, cb) = (a.coords(), b.coords());
    let n = ca.len().max(cb.len());
    let get = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
    for i in 0..n {
        for j in (i + 1)..n {
            if get(&ca, i) * get(&cb, j) != get(&ca, j) * get(&cb, i) {
                return false;
            }
        }
    }
    true
}

/// Canonical `p/q` rendering used by every serializer.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p"`, `"p/q"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}
