//! The scissors invariant, projection cocycles and word-length lower bounds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::growth::growth_series;
use crate::iet::{Iet, IetError, Result};
use crate::scalar::{format_rational, ExactReal};

/// An element of `ℝ ∧_ℚ ℝ` restricted to the span of a declared basis,
/// stored as the coefficients of `gᵢ ∧ gⱼ` for `i < j`.
///
/// The normalization identifies `a ∧ b` with `a⊗b − b⊗a`, so the rotation
/// by `α` has invariant `1 ∧ α`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SafInvariant {
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl SafInvariant {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `c · (gᵢ ∧ gⱼ)`.
    pub fn add_term(&mut self, i: usize, j: usize, c: &BigRational) {
        if i == j || c.is_zero() {
            return;
        }
        let (key, c) = if i < j { ((i, j), c.clone()) } else { ((j, i), -c) };
        let slot = self.entries.entry(key).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => BigRational::zero(),
            std::cmp::Ordering::Less => self.entries.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero),
            std::cmp::Ordering::Greater => -self.get(j, i),
        }
    }

    /// Nonzero coefficients `(i, j, c)` with `i < j`, in index order.
    pub fn sparse(&self) -> Vec<(usize, usize, BigRational)> {
        self.entries.iter().map(|(&(i, j), c)| (i, j, c.clone())).collect()
    }

    /// Dense antisymmetric matrix of size `dim`.
    pub fn matrix(&self, dim: usize) -> Vec<Vec<BigRational>> {
        (0..dim).map(|i| (0..dim).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.entries {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn negated(&self) -> Self {
        SafInvariant {
            entries: self.entries.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl std::ops::Add for SafInvariant {
    type Output = SafInvariant;

    fn add(self, other: Self) -> Self {
        self.plus(&other)
    }
}

impl std::ops::Neg for SafInvariant {
    type Output = SafInvariant;

    fn neg(self) -> Self {
        self.negated()
    }
}

impl fmt::Display for SafInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, ((i, j), c)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*g{}^g{}", format_rational(c), i, j)?;
        }
        Ok(())
    }
}

/// Sum over arcs of `length ⊗ displacement`, with the displacement taken
/// as the real amount moved (no reduction mod 1).
pub fn saf<S: ExactReal>(f: &Iet<S>) -> Result<SafInvariant> {
    let mut out = SafInvariant::zero();
    for (a, b, omega) in f.interval_pieces()? {
        let v = b.sub_ref(&a).coords();
        let w = omega.coords();
        for (i, vi) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, wj) in w.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                // v⊗w is antisymmetric after summing; keep only its i<j half.
                if i < j {
                    out.add_term(i, j, &(vi * wj));
                } else if j < i {
                    out.add_term(j, i, &(-(vi * wj)));
                }
            }
        }
    }
    // Each wedge was counted from both of its tensor halves.
    let halved = SafInvariant {
        entries: out
            .entries
            .into_iter()
            .map(|(k, c)| (k, c / BigRational::from_integer(2.into())))
            .collect(),
    };
    Ok(halved)
}

/// `saf(f ∘ g) = saf(f) + saf(g)`.
pub fn saf_is_homomorphic_check<S: ExactReal>(f: &Iet<S>, g: &Iet<S>) -> Result<bool> {
    Ok(saf(&f.compose(g)?)? == saf(f)? + saf(g)?)
}

/// Coordinate `index` of the translation applied at `p`.
///
/// Exact for irrational generators. The rational coordinate depends on the
/// stored representative mod 1 and only satisfies the cocycle rule mod 1.
pub fn cocycle<S: ExactReal>(f: &Iet<S>, index: usize, p: &S) -> Result<BigRational> {
    f.evaluate_right(p)?;
    Ok(f.translations()[f.arc_index(p)?].coord(index))
}

/// Cocycle of `fⁿ` at 0 for `n = 1..=n_max`, summed along the orbit.
pub fn cocycle_series<S: ExactReal>(f: &Iet<S>, index: usize, n_max: usize) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(n_max);
    let mut x = S::zero();
    let mut acc = BigRational::zero();
    for _ in 0..n_max {
        acc += cocycle(f, index, &x)?;
        x = f.right(&x)?;
        out.push(acc.clone());
    }
    Ok(out)
}

/// Least-squares slope of `values[k]` against `k + 1`.
pub fn linear_trend(values: &[BigRational]) -> Option<BigRational> {
    let n = values.len();
    if n < 2 {
        return None;
    }
    let count = BigRational::from_integer(BigInt::from(n));
    let xs: Vec<BigRational> = (1..=n).map(|k| BigRational::from_integer(BigInt::from(k))).collect();
    let mean_x = xs.iter().fold(BigRational::zero(), |a, x| a + x) / &count;
    let mean_y = values.iter().fold(BigRational::zero(), |a, y| a + y) / &count;
    let mut num = BigRational::zero();
    let mut den = BigRational::zero();
    for (x, y) in xs.iter().zip(values) {
        let dx = x - &mean_x;
        num += &dx * (y - &mean_y);
        den += &dx * &dx;
    }
    Some(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSource {
    Discontinuities,
    Cocycle,
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundEntry {
    pub n: usize,
    pub bound: BigInt,
    pub discontinuities: usize,
    pub cocycle: Option<BigRational>,
    pub source: BoundSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordBound<S> {
    pub generators: Vec<Iet<S>>,
    pub m_disc: usize,
    pub m_coc: Option<BigRational>,
    /// Coordinate actually used for the cocycle bound.
    pub index: Option<usize>,
    /// True when the requested coordinate was flat and another was chosen.
    pub index_fallback: bool,
    pub cocycle_trend: Option<BigRational>,
    pub bounds: Vec<BoundEntry>,
}

fn ceil_div(a: &BigRational, b: &BigRational) -> BigInt {
    let q = a / b;
    q.numer().div_ceil(q.denom())
}

fn coordinate_count<S: ExactReal>(maps: &[&Iet<S>]) -> usize {
    maps.iter()
        .flat_map(|f| f.cuts().iter().chain(f.translations()))
        .map(|x| x.coords().len())
        .max()
        .unwrap_or(1)
}

/// Lower bounds on the word length of `fⁿ` over `generators`, for
/// `n = 1..=n_max`.
pub fn undistortion_bounds<S: ExactReal>(
    generators: &[Iet<S>],
    f: &Iet<S>,
    n_max: usize,
    index: Option<usize>,
) -> Result<WordBound<S>> {
    if index == Some(0) {
        return Err(IetError::Precondition(
            "the rational coordinate is not additive along orbits; pick an irrational generator".into(),
        ));
    }
    let m_disc = generators.iter().map(Iet::d).max().unwrap_or(0);
    let coc_bound = |i: usize| {
        generators
            .iter()
            .flat_map(|g| g.translations().iter().map(move |t| t.coord(i).abs()))
            .max()
            .filter(|m| !m.is_zero())
    };
    let series = growth_series(f, n_max)?;

    let mut used = None;
    let mut fallback = false;
    let mut cocycles = None;
    if let Some(i) = index {
        let values = cocycle_series(f, i, n_max)?;
        if values.iter().all(Zero::is_zero) {
            fallback = true;
            let mut all: Vec<&Iet<S>> = generators.iter().collect();
            all.push(f);
            let mut best: Option<(BigRational, usize, Vec<BigRational>)> = None;
            for j in 1..coordinate_count(&all) {
                let values = cocycle_series(f, j, n_max)?;
                if let Some(slope) = linear_trend(&values).map(|s| s.abs()) {
                    if !slope.is_zero() && best.as_ref().is_none_or(|b| slope > b.0) {
                        best = Some((slope, j, values));
                    }
                }
            }
            if let Some((_, j, values)) = best {
                used = Some(j);
                cocycles = Some(values);
            }
        } else {
            used = Some(i);
            cocycles = Some(values);
        }
    }
    let m_coc = used.and_then(coc_bound);
    if m_disc == 0 && m_coc.is_none() {
        return Err(IetError::Precondition(
            "no bound available: generators are continuous and no usable cocycle coordinate".into(),
        ));
    }
    let cocycle_trend = cocycles.as_deref().and_then(linear_trend);

    let mut bounds = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let d = series[n - 1];
        let from_d = (m_disc > 0).then(|| BigInt::from(d).div_ceil(&BigInt::from(m_disc)));
        let c = cocycles.as_ref().map(|v| v[n - 1].clone());
        let from_c = match (&c, &m_coc) {
            (Some(c), Some(m)) => Some(ceil_div(&c.abs(), m)),
            _ => None,
        };
        let (bound, source) = match (from_d, from_c) {
            (Some(a), Some(b)) if a == b => (a, BoundSource::Both),
            (Some(a), Some(b)) if a > b => (a, BoundSource::Discontinuities),
            (Some(_), Some(b)) => (b, BoundSource::Cocycle),
            (Some(a), None) => (a, BoundSource::Discontinuities),
            (None, Some(b)) => (b, BoundSource::Cocycle),
            (None, None) => (BigInt::zero(), BoundSource::Neither),
        };
        bounds.push(BoundEntry {
            n,
            bound,
            discontinuities: d,
            cocycle: c,
            source,
        });
    }
    Ok(WordBound {
        generators: generators.to_vec(),
        m_disc,
        m_coc,
        index: used,
        index_fallback: fallback,
        cocycle_trend,
        bounds,
    })
}
