use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{format_rational, Basis, ExactReal, Generator, ScalarError};

/// A real number `Σ coords[i]·gᵢ` over a declared [`Basis`].
///
/// Scalars without a basis are plain rationals and combine with scalars over
/// any basis.
#[derive(Clone)]
pub struct Scalar {
    basis: Option<Arc<Basis>>,
    coords: Vec<BigRational>,
}

impl Scalar {
    pub(crate) fn from_parts(basis: Option<Arc<Basis>>, coords: Vec<BigRational>) -> Scalar {
        Scalar { basis, coords }
    }

    pub(crate) fn zero_in(basis: &Arc<Basis>) -> Scalar {
        Scalar {
            basis: Some(basis.clone()),
            coords: vec![BigRational::zero(); basis.len()],
        }
    }

    /// A basis-free rational.
    pub fn rational(q: BigRational) -> Scalar {
        Scalar {
            basis: None,
            coords: vec![q],
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Scalar {
        Scalar::rational(BigRational::new(p.into(), q.into()))
    }

    pub fn basis(&self) -> Option<&Arc<Basis>> {
        self.basis.as_ref()
    }

    pub fn coordinates(&self) -> &[BigRational] {
        &self.coords
    }

    /// Re-expresses this scalar over `basis`, padding with zeros.
    pub fn in_basis(&self, basis: &Arc<Basis>) -> Result<Scalar, ScalarError> {
        if let Some(b) = &self.basis {
            if !same_basis(b, basis) {
                return Err(ScalarError::BasisMismatch);
            }
        }
        let mut coords = self.coords.clone();
        if coords.len() > basis.len() {
            return Err(ScalarError::BasisMismatch);
        }
        coords.resize(basis.len(), BigRational::zero());
        Ok(Scalar {
            basis: Some(basis.clone()),
            coords,
        })
    }

    fn merged_basis(&self, other: &Scalar) -> Result<Option<Arc<Basis>>, ScalarError> {
        match (&self.basis, &other.basis) {
            (Some(a), Some(b)) => {
                if same_basis(a, b) {
                    Ok(Some(a.clone()))
                } else {
                    Err(ScalarError::BasisMismatch)
                }
            }
            (Some(a), None) => Ok(Some(a.clone())),
            (None, b) => Ok(b.clone()),
        }
    }

    fn zip_with(
        &self,
        other: &Scalar,
        op: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Result<Scalar, ScalarError> {
        let basis = self.merged_basis(other)?;
        let n = self.coords.len().max(other.coords.len());
        let zero = BigRational::zero();
        let coords = (0..n)
            .map(|i| {
                op(
                    self.coords.get(i).unwrap_or(&zero),
                    other.coords.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        Ok(Scalar { basis, coords })
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn compare(&self, other: &Scalar) -> Result<Ordering, ScalarError> {
        let diff = self.checked_sub(other)?;
        diff.sign()
    }

    fn has_irrational_part(&self) -> bool {
        self.coords.iter().skip(1).any(|c| !c.is_zero())
    }

    /// Sign of the value, decided by certified enclosure refinement.
    pub fn sign(&self) -> Result<Ordering, ScalarError> {
        if !self.has_irrational_part() {
            return Ok(self.coords[0].cmp(&BigRational::zero()));
        }
        let basis = self
            .basis
            .as_ref()
            .expect("irrational coordinates always carry a basis");
        let (lcm, ints) = self.integer_coords();
        debug_assert!(lcm.is_positive());
        for (level, &bits) in basis.levels().iter().enumerate() {
            let floors = basis.scaled_floors(level);
            let mut lo = &ints[0] << bits as usize;
            let mut hi = lo.clone();
            for (a, m) in ints.iter().zip(floors).skip(1) {
                if a.is_zero() {
                    continue;
                }
                let low = a * m;
                let high = &low + a;
                if a.is_positive() {
                    lo += low;
                    hi += high;
                } else {
                    lo += high;
                    hi += low;
                }
            }
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
        }
        Err(ScalarError::RefinementDepthExceeded {
            bits: basis.max_depth(),
        })
    }

    /// Common denominator and the integer numerators over it.
    fn integer_coords(&self) -> (BigInt, Vec<BigInt>) {
        let lcm = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self.coords.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        (lcm, ints)
    }

    /// Rational enclosure `[lo, hi]` of the value using generator enclosures
    /// of width `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = self.coords[0].clone();
        let mut hi = lo.clone();
        if let Some(basis) = &self.basis {
            for (i, c) in self.coords.iter().enumerate().skip(1) {
                if c.is_zero() {
                    continue;
                }
                let (glo, ghi) = basis.generator_enclosure(i, bits);
                if c.is_positive() {
                    lo += c * glo;
                    hi += c * ghi;
                } else {
                    lo += c * ghi;
                    hi += c * glo;
                }
            }
        }
        (lo, hi)
    }

    fn trimmed(&self) -> &[BigRational] {
        let end = self.coords.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        &self.coords[..end]
    }
}

fn same_basis(a: &Arc<Basis>, b: &Arc<Basis>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if let (Some(a), Some(b)) = (&self.basis, &other.basis) {
            if !same_basis(a, b) {
                return false;
            }
        }
        self.trimmed() == other.trimmed()
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                terms.push(format_rational(c));
                continue;
            }
            let name = match self.basis.as_ref().map(|b| &b.generators()[i]) {
                Some(Generator::ProductOfSqrts(idx)) => {
                    let b = self.basis.as_ref().unwrap();
                    idx.iter()
                        .map(|&j| b.generators()[j].to_string())
                        .collect::<Vec<_>>()
                        .join("*")
                }
                Some(g) => g.to_string(),
                None => format!("g{i}"),
            };
            if c.is_one() {
                terms.push(name);
            } else if (-c).is_one() {
                terms.push(format!("-{name}"));
            } else {
                terms.push(format!("{}*{name}", format_rational(c)));
            }
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        write!(f, "{out}")
    }
}

impl Add for Scalar {
    type Output = Scalar;

    fn add(self, rhs: Scalar) -> Scalar {
        self.checked_add(&rhs).expect("scalar basis mismatch")
    }
}

impl Sub for Scalar {
    type Output = Scalar;

    fn sub(self, rhs: Scalar) -> Scalar {
        self.checked_sub(&rhs).expect("scalar basis mismatch")
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            basis: self.basis,
            coords: self.coords.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::rational(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl ExactReal for Scalar {
    fn try_cmp(&self, other: &Self) -> Result<Ordering, ScalarError> {
        if self.trimmed() == other.trimmed() {
            return Ok(Ordering::Equal);
        }
        self.compare(other)
    }

    fn scale(&self, q: &BigRational) -> Self {
        Scalar {
            basis: self.basis.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    fn floor(&self) -> Result<BigInt, ScalarError> {
        if !self.has_irrational_part() {
            return Ok(self.coords[0].numer().div_floor(self.coords[0].denom()));
        }
        let basis = self.basis.as_ref().expect("irrational scalars carry a basis");
        for &bits in basis.levels() {
            let (lo, hi) = self.enclosure(bits);
            let n_lo = lo.numer().div_floor(lo.denom());
            let n_hi = hi.numer().div_floor(hi.denom());
            if n_lo == n_hi {
                return Ok(n_lo);
            }
            if &n_hi - &n_lo == BigInt::one() {
                let boundary = Scalar::rational(BigRational::from_integer(n_hi.clone()));
                return match self.compare(&boundary)? {
                    Ordering::Less => Ok(n_lo),
                    _ => Ok(n_hi),
                };
            }
        }
        Err(ScalarError::RefinementDepthExceeded {
            bits: basis.max_depth(),
        })
    }

    fn from_rational(q: BigRational) -> Self {
        Scalar::rational(q)
    }

    fn coords(&self) -> Vec<BigRational> {
        self.coords.clone()
    }

    fn coord(&self, i: usize) -> BigRational {
        self.coords.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.has_irrational_part() {
            None
        } else {
            Some(self.coords[0].clone())
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.checked_add(other).expect("scalar basis mismatch")
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("scalar basis mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{mod_one, project};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn b23() -> Arc<Basis> {
        Basis::quadratic(&[2, 3]).unwrap()
    }

    #[test]
    fn add_examples() {
        let b = b23();
        let half = b.rational_scalar(q(1, 2));
        assert_eq!(half.clone() + half, b.one());
        let s2 = b.generator(1).unwrap();
        let one_minus = b.scalar_from_pairs(&[(1, 1), (-1, 1), (0, 1)]).unwrap();
        assert_eq!(s2 + one_minus, b.one());
        let a = b.scalar_from_pairs(&[(1, 3), (2, 1), (0, 1)]).unwrap();
        let c = b.scalar_from_pairs(&[(1, 6), (0, 1), (1, 1)]).unwrap();
        assert_eq!((a + c).coordinates(), &[q(1, 2), q(2, 1), q(1, 1)][..]);
    }

    #[test]
    fn scale_examples() {
        let b = b23();
        let s2 = b.generator(1).unwrap();
        assert!(s2.scale(&q(0, 1)).is_zero());
        let x = b.scalar_from_pairs(&[(1, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(x.scale(&q(2, 1)).coordinates(), &[q(2, 1), q(2, 1), q(0, 1)][..]);
        let y = b.scalar_from_pairs(&[(1, 3), (0, 1), (-1, 1)]).unwrap();
        assert_eq!(y.scale(&q(-3, 1)).coordinates(), &[q(-1, 1), q(0, 1), q(3, 1)][..]);
    }

    #[test]
    fn compare_examples() {
        let b = b23();
        let half = b.rational_scalar(q(1, 2));
        assert_eq!(half.try_cmp(&half.clone()).unwrap(), Ordering::Equal);
        let s2 = b.generator(1).unwrap();
        assert_eq!(s2.try_cmp(&b.one()).unwrap(), Ordering::Greater);
        // 3/2 - sqrt(2) is about 0.0858
        let x = b.scalar_from_pairs(&[(3, 2), (-1, 1), (0, 1)]).unwrap();
        assert_eq!(x.try_cmp(&Scalar::from_ratio(1, 10)).unwrap(), Ordering::Less);
        assert_eq!(x.try_cmp(&Scalar::from_ratio(1, 12)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn mod_one_examples() {
        let b = b23();
        assert_eq!(mod_one(&b.rational_scalar(q(3, 2))).unwrap(), Scalar::from_ratio(1, 2));
        let s2 = b.generator(1).unwrap();
        let expected = b.scalar_from_pairs(&[(-1, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(mod_one(&s2).unwrap(), expected);
        assert_eq!(mod_one(&Scalar::from_ratio(-1, 4)).unwrap(), Scalar::from_ratio(3, 4));
        let neg = b.scalar_from_pairs(&[(0, 1), (-3, 1), (0, 1)]).unwrap();
        // -3*sqrt(2) is about -4.24
        assert_eq!(neg.floor().unwrap(), BigInt::from(-5));
    }

    #[test]
    fn project_examples() {
        let b = b23();
        let x = b.scalar_from_pairs(&[(1, 2), (3, 1), (0, 1)]).unwrap();
        assert_eq!(project(&x, 1, b.len()).unwrap(), q(3, 1));
        assert_eq!(project(&b.generator(1).unwrap(), 0, b.len()).unwrap(), q(0, 1));
        assert_eq!(project(&b.rational_scalar(q(5, 7)), 0, b.len()).unwrap(), q(5, 7));
        assert!(matches!(
            project(&x, 3, b.len()),
            Err(ScalarError::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn mismatched_bases() {
        let a = Basis::quadratic(&[2]).unwrap().generator(1).unwrap();
        let c = Basis::quadratic(&[3]).unwrap().generator(1).unwrap();
        assert_eq!(a.checked_add(&c), Err(ScalarError::BasisMismatch));
        assert_ne!(a, c);
    }

    #[test]
    fn depth_exceeded_is_reported() {
        let b = Basis::with_max_depth(vec![Generator::Unit, Generator::Sqrt(q(2, 1))], 8).unwrap();
        // 99/70 exceeds sqrt(2) by about 7e-5
        let x = b.scalar_from_pairs(&[(-99, 70), (1, 1)]).unwrap();
        assert!(matches!(
            x.sign(),
            Err(ScalarError::RefinementDepthExceeded { bits: 8 })
        ));
        let b = Basis::quadratic(&[2]).unwrap();
        let x = b.scalar_from_pairs(&[(-99, 70), (1, 1)]).unwrap();
        assert_eq!(x.sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn display() {
        let b = b23();
        let x = b.scalar_from_pairs(&[(1, 2), (-1, 1), (2, 3)]).unwrap();
        assert_eq!(x.to_string(), "1/2 - sqrt(2) + 2/3*sqrt(3)");
        assert_eq!(b.zero().to_string(), "0");
    }
}
