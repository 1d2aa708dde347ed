use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{format_rational, parse_rational, Scalar, ScalarError};

/// Default maximum enclosure precision, in bits.
pub const DEFAULT_MAX_DEPTH: u32 = 256;

const FIRST_LEVEL_BITS: u32 = 32;
const MAX_CERTIFIABLE_RADICAND: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    /// The rational unit 1; always generator 0.
    Unit,
    /// `√q` for a positive rational `q` that is not a square.
    Sqrt(BigRational),
    /// Product of the square roots at the given (earlier) generator indices.
    ProductOfSqrts(Vec<usize>),
}

impl Generator {
    /// Parses `1`, `sqrt(q)` or `sqrt(a)*sqrt(b)*…`.
    ///
    /// Products are resolved against `earlier`, which must already contain
    /// each factor as a `Sqrt` generator.
    pub fn parse(s: &str, earlier: &[Generator]) -> Result<Generator, ScalarError> {
        let s = s.trim();
        if s == "1" {
            return Ok(Generator::Unit);
        }
        let factors: Vec<&str> = s.split('*').map(str::trim).collect();
        let mut radicands = Vec::with_capacity(factors.len());
        for factor in &factors {
            let inner = factor
                .strip_prefix("sqrt(")
                .and_then(|rest| rest.strip_suffix(')'))
                .ok_or_else(|| ScalarError::InvalidBasis(format!("cannot parse generator {s:?}")))?;
            let q = parse_rational(inner).ok_or_else(|| ScalarError::InvalidBasis(format!("bad radicand in {s:?}")))?;
            radicands.push(q);
        }
        if radicands.len() == 1 {
            return Ok(Generator::Sqrt(radicands.pop().unwrap()));
        }
        let indices = radicands
            .iter()
            .map(|q| {
                earlier
                    .iter()
                    .position(|g| matches!(g, Generator::Sqrt(r) if r == q))
                    .ok_or_else(|| {
                        ScalarError::InvalidBasis(format!(
                            "product factor sqrt({}) is not an earlier generator",
                            format_rational(q)
                        ))
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Generator::ProductOfSqrts(indices))
    }
}

/// An ordered family `{1, g₁, …, g_m}` of ℚ-linearly independent reals.
///
/// Every generator is the square root of a positive rational. Independence
/// is checked at construction: square roots of rationals are independent
/// over ℚ exactly when their squarefree kernels are pairwise distinct and
/// different from 1.
pub struct Basis {
    generators: Vec<Generator>,
    radicands: Vec<BigRational>,
    max_bits: u32,
    levels: Vec<u32>,
    cache: Vec<OnceLock<Vec<BigInt>>>,
}

impl Basis {
    pub fn new(generators: Vec<Generator>) -> Result<Arc<Basis>, ScalarError> {
        Self::with_max_depth(generators, DEFAULT_MAX_DEPTH)
    }

    pub fn with_max_depth(generators: Vec<Generator>, max_bits: u32) -> Result<Arc<Basis>, ScalarError> {
        if generators.first() != Some(&Generator::Unit) {
            return Err(ScalarError::InvalidBasis("generator 0 must be 1".into()));
        }
        if max_bits == 0 {
            return Err(ScalarError::InvalidBasis("refinement depth must be positive".into()));
        }
        let mut radicands = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            let r = match g {
                Generator::Unit if i == 0 => BigRational::one(),
                Generator::Unit => return Err(ScalarError::InvalidBasis(format!("generator {i} repeats the unit"))),
                Generator::Sqrt(q) => {
                    if !q.is_positive() {
                        return Err(ScalarError::InvalidBasis(format!(
                            "radicand {} is not positive",
                            format_rational(q)
                        )));
                    }
                    q.clone()
                }
                Generator::ProductOfSqrts(idx) => {
                    if idx.len() < 2 {
                        return Err(ScalarError::InvalidBasis("a product needs two factors".into()));
                    }
                    let mut prod = BigRational::one();
                    for &j in idx {
                        match generators.get(j) {
                            Some(Generator::Sqrt(q)) if j < i => prod *= q,
                            _ => {
                                return Err(ScalarError::InvalidBasis(format!(
                                    "product factor {j} is not an earlier square root"
                                )))
                            }
                        }
                    }
                    prod
                }
            };
            radicands.push(r);
        }
        let mut kernels = Vec::with_capacity(radicands.len());
        for r in &radicands[1..] {
            let k = squarefree_kernel(r)?;
            if k == 1 {
                return Err(ScalarError::InvalidBasis(format!(
                    "sqrt({}) is rational",
                    format_rational(r)
                )));
            }
            if kernels.contains(&k) {
                return Err(ScalarError::InvalidBasis(format!(
                    "sqrt({}) is a rational multiple of an earlier generator",
                    format_rational(r)
                )));
            }
            kernels.push(k);
        }
        let mut levels = Vec::new();
        let mut bits = FIRST_LEVEL_BITS.min(max_bits);
        loop {
            levels.push(bits);
            if bits >= max_bits {
                break;
            }
            bits = (bits * 2).min(max_bits);
        }
        let cache = levels.iter().map(|_| OnceLock::new()).collect();
        Ok(Arc::new(Basis {
            generators,
            radicands,
            max_bits,
            levels,
            cache,
        }))
    }

    /// `{1, √d₁, √d₂, …}` for the given integers.
    pub fn quadratic(radicands: &[i64]) -> Result<Arc<Basis>, ScalarError> {
        let mut gens = vec![Generator::Unit];
        gens.extend(
            radicands
                .iter()
                .map(|&d| Generator::Sqrt(BigRational::from_integer(d.into()))),
        );
        Basis::new(gens)
    }

    /// The basis `{1}`.
    pub fn rational() -> Arc<Basis> {
        Basis::new(vec![Generator::Unit]).expect("unit basis is valid")
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn max_depth(&self) -> u32 {
        self.max_bits
    }

    /// The square of generator `i`.
    pub fn radicand(&self, i: usize) -> &BigRational {
        &self.radicands[i]
    }

    /// Position of the generator `√q`, if declared.
    pub fn index_of_sqrt(&self, q: &BigRational) -> Option<usize> {
        self.radicands
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, r)| *r == q)
            .map(|(i, _)| i)
    }

    pub(crate) fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// `floor(gᵢ · 2^bits)` for every generator at refinement level `level`.
    pub(crate) fn scaled_floors(&self, level: usize) -> &[BigInt] {
        let bits = self.levels[level];
        self.cache[level].get_or_init(|| {
            self.radicands
                .iter()
                .map(|r| {
                    let scaled = (r.numer() << (2 * bits as usize)) / r.denom();
                    scaled.sqrt()
                })
                .collect()
        })
    }

    /// Rational enclosure `[lo, hi]` of generator `i` of width at most `2^-bits`.
    pub fn generator_enclosure(&self, i: usize, bits: u32) -> (BigRational, BigRational) {
        let r = &self.radicands[i];
        let scaled = (r.numer() << (2 * bits as usize)) / r.denom();
        let m = scaled.sqrt();
        let den = BigInt::one() << bits as usize;
        if i == 0 {
            let one = BigRational::one();
            return (one.clone(), one);
        }
        (BigRational::new(m.clone(), den.clone()), BigRational::new(m + 1, den))
    }

    pub fn zero(self: &Arc<Self>) -> Scalar {
        Scalar::zero_in(self)
    }

    pub fn one(self: &Arc<Self>) -> Scalar {
        self.rational_scalar(BigRational::one())
    }

    pub fn rational_scalar(self: &Arc<Self>, q: BigRational) -> Scalar {
        let mut coords = vec![BigRational::zero(); self.len()];
        coords[0] = q;
        Scalar::from_parts(Some(self.clone()), coords)
    }

    /// The scalar equal to generator `i`.
    pub fn generator(self: &Arc<Self>, i: usize) -> Result<Scalar, ScalarError> {
        if i >= self.len() {
            return Err(ScalarError::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        let mut coords = vec![BigRational::zero(); self.len()];
        coords[i] = BigRational::one();
        Ok(Scalar::from_parts(Some(self.clone()), coords))
    }

    pub fn scalar(self: &Arc<Self>, coords: Vec<BigRational>) -> Result<Scalar, ScalarError> {
        if coords.len() != self.len() {
            return Err(ScalarError::CoordinateCount {
                expected: self.len(),
                got: coords.len(),
            });
        }
        Ok(Scalar::from_parts(Some(self.clone()), coords))
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn scalar_from_pairs(self: &Arc<Self>, pairs: &[(i64, i64)]) -> Result<Scalar, ScalarError> {
        self.scalar(
            pairs
                .iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for Basis {}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.generators.iter().map(|g| g.to_string()))
            .finish()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Unit => write!(f, "1"),
            Generator::Sqrt(q) => write!(f, "sqrt({})", format_rational(q)),
            Generator::ProductOfSqrts(idx) => {
                let parts: Vec<String> = idx.iter().map(|i| format!("g{i}")).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

/// Squarefree kernel of `num·den` for a positive rational `num/den`.
fn squarefree_kernel(r: &BigRational) -> Result<u64, ScalarError> {
    let prod: BigUint = (r.numer() * r.denom())
        .to_biguint()
        .ok_or_else(|| ScalarError::InvalidBasis("negative radicand".into()))?;
    let mut n = prod
        .to_u64()
        .filter(|&n| n <= MAX_CERTIFIABLE_RADICAND)
        .ok_or_else(|| {
            ScalarError::InvalidBasis(format!(
                "radicand {} too large to certify independence",
                format_rational(r)
            ))
        })?;
    let mut kernel = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            kernel *= p;
        }
        p += 1;
    }
    Ok(kernel * n)
}
