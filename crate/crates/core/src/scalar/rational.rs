use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{ExactReal, ScalarError};

impl ExactReal for BigRational {
    fn try_cmp(&self, other: &Self) -> Result<Ordering, ScalarError> {
        Ok(self.cmp(other))
    }

    fn scale(&self, q: &BigRational) -> Self {
        self * q
    }

    fn floor(&self) -> Result<BigInt, ScalarError> {
        Ok(num_integer::Integer::div_floor(self.numer(), self.denom()))
    }

    fn from_rational(q: BigRational) -> Self {
        q
    }

    fn coords(&self) -> Vec<BigRational> {
        vec![self.clone()]
    }

    fn coord(&self, i: usize) -> BigRational {
        if i == 0 {
            self.clone()
        } else {
            BigRational::from_integer(0.into())
        }
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
}
