//! Interval exchanges of the circle in canonical cut/translation form.

mod arcs;

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;

use crate::scalar::{mod_one, negate_unit, wrap_once, ExactReal, Scalar, ScalarError};

pub use arcs::ArcSet;
pub(crate) use arcs::{sorted_unique, try_sort_by_key};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IetError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("{0:?} is not a permutation of 1..n")]
    InvalidPermutation(Vec<usize>),
    #[error("permutation has {pi} entries but there are {lambda} lengths")]
    LengthMismatch { pi: usize, lambda: usize },
    #[error("length {0} is not positive")]
    NonPositiveLength(usize),
    #[error("lambda must sum to 1, got {0}")]
    LengthSum(String),
    #[error("cuts must start at 0 and increase strictly inside [0, 1)")]
    InvalidCuts,
    #[error("expected {expected} translations, got {got}")]
    TranslationCount { expected: usize, got: usize },
    #[error("translated arcs do not tile the circle")]
    NotBijective,
    #[error("point {0} lies outside [0, 1)")]
    OutOfRange(String),
    #[error("artificial_zero flag is {flag} but the map is {actual} at 0")]
    ArtificialFlag { flag: bool, actual: &'static str },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = IetError> = std::result::Result<T, E>;

/// Combinatorial presentation: `pi[j]` is the position (1-based) of the
/// `j`-th interval after the exchange, `lambda[j]` its length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiLambda<S = Scalar> {
    pub pi: Vec<usize>,
    pub lambda: Vec<S>,
}

impl<S: ExactReal> PiLambda<S> {
    pub fn new(pi: Vec<usize>, lambda: Vec<S>) -> Result<Self> {
        let data = PiLambda { pi, lambda };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.pi.len();
        if n != self.lambda.len() {
            return Err(IetError::LengthMismatch {
                pi: n,
                lambda: self.lambda.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &self.pi {
            if p == 0 || p > n || seen[p - 1] {
                return Err(IetError::InvalidPermutation(self.pi.clone()));
            }
            seen[p - 1] = true;
        }
        if n == 0 {
            return Err(IetError::InvalidPermutation(Vec::new()));
        }
        let mut total = S::zero();
        for (j, l) in self.lambda.iter().enumerate() {
            if !l.signum()?.is_gt() {
                return Err(IetError::NonPositiveLength(j));
            }
            total = total + l.clone();
        }
        if total != S::unit() {
            return Err(IetError::LengthSum(total.to_string()));
        }
        Ok(())
    }
}

/// One maximal arc of continuity `[start, end)` moved by `trans` (mod 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece<S> {
    pub start: S,
    pub end: S,
    pub trans: S,
}

/// A right-continuous bijection of `[0, 1)` that translates finitely many
/// arcs, stored with merged arcs so the cut list is canonical.
///
/// `cuts[0]` is always 0. Every other cut is a genuine discontinuity; 0 is
/// one exactly when the first and last arcs move by different amounts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Iet<S = Scalar> {
    cuts: Vec<S>,
    trans: Vec<S>,
}

impl<S: ExactReal> Iet<S> {
    pub fn identity() -> Self {
        Iet {
            cuts: vec![S::zero()],
            trans: vec![S::zero()],
        }
    }

    /// `x ↦ x + gamma mod 1`.
    pub fn rotation(gamma: &S) -> Result<Self> {
        Ok(Iet {
            cuts: vec![S::zero()],
            trans: vec![mod_one(gamma)?],
        })
    }

    /// Rotation by `alpha` of the arc `[0, beta)`, identity elsewhere.
    pub fn restricted_rotation(alpha: &S, beta: &S) -> Result<Self> {
        let zero = S::zero();
        if !(zero.try_lt(alpha)? && alpha.try_lt(beta)? && beta.try_le(&S::unit())?) {
            return Err(IetError::Precondition(format!(
                "restricted rotation needs 0 < {alpha} < {beta} <= 1"
            )));
        }
        let mut pieces = vec![
            (zero, alpha.clone()),
            (beta.sub_ref(alpha), alpha.sub_ref(beta) + S::unit()),
        ];
        if *beta != S::unit() {
            pieces.push((beta.clone(), S::zero()));
        }
        Self::from_pieces(pieces)
    }

    pub fn from_pi_lambda(data: &PiLambda<S>) -> Result<Self> {
        data.validate()?;
        let n = data.pi.len();
        let mut pieces = Vec::with_capacity(n);
        let mut start = S::zero();
        for j in 0..n {
            let mut omega = S::zero();
            for i in 0..n {
                if i < j {
                    omega = omega - data.lambda[i].clone();
                }
                if data.pi[i] < data.pi[j] {
                    omega = omega + data.lambda[i].clone();
                }
            }
            if omega.signum()?.is_lt() {
                omega = omega + S::unit();
            }
            pieces.push((start.clone(), omega));
            start = start + data.lambda[j].clone();
        }
        Self::from_pieces(pieces)
    }

    /// Builds from explicit cuts and per-arc translations (taken mod 1),
    /// validating bijectivity and merging redundant cuts.
    pub fn from_cuts(cuts: Vec<S>, trans: Vec<S>) -> Result<Self> {
        if cuts.len() != trans.len() {
            return Err(IetError::TranslationCount {
                expected: cuts.len(),
                got: trans.len(),
            });
        }
        if cuts.first().is_none_or(|c| !c.is_zero()) {
            return Err(IetError::InvalidCuts);
        }
        for w in cuts.windows(2) {
            if !w[0].try_lt(&w[1])? {
                return Err(IetError::InvalidCuts);
            }
        }
        if !cuts.last().unwrap().try_lt(&S::unit())? {
            return Err(IetError::InvalidCuts);
        }
        let mut pieces = Vec::with_capacity(cuts.len());
        for (c, t) in cuts.into_iter().zip(trans) {
            pieces.push((c, mod_one(&t)?));
        }
        let f = Self::merge(pieces);
        f.check_bijective()?;
        Ok(f)
    }

    /// Pieces given as sorted `(start, trans)` pairs with trans in `[0, 1)`
    /// and the bijection property already known.
    pub(crate) fn from_pieces(pieces: Vec<(S, S)>) -> Result<Self> {
        let f = Self::merge(pieces);
        debug_assert!(f.check_bijective().is_ok());
        Ok(f)
    }

    fn merge(pieces: Vec<(S, S)>) -> Self {
        let mut cuts: Vec<S> = Vec::with_capacity(pieces.len());
        let mut trans: Vec<S> = Vec::with_capacity(pieces.len());
        for (c, t) in pieces {
            if trans.last() == Some(&t) {
                continue;
            }
            cuts.push(c);
            trans.push(t);
        }
        Iet { cuts, trans }
    }

    fn check_bijective(&self) -> Result<()> {
        let mut images = Vec::with_capacity(self.cuts.len());
        for p in self.pieces() {
            let len = p.end.sub_ref(&p.start);
            images.push((wrap_once(p.start + p.trans)?, len));
        }
        try_sort_by_key(&mut images, |im| &im.0)?;
        for k in 0..images.len() {
            let end = images[k].0.add_ref(&images[k].1);
            let next = match images.get(k + 1) {
                Some(im) => im.0.clone(),
                None => images[0].0.add_ref(&S::unit()),
            };
            if end != next {
                return Err(IetError::NotBijective);
            }
        }
        Ok(())
    }

    pub fn cuts(&self) -> &[S] {
        &self.cuts
    }

    pub fn translations(&self) -> &[S] {
        &self.trans
    }

    pub fn arc_count(&self) -> usize {
        self.cuts.len()
    }

    pub fn arc_end(&self, i: usize) -> S {
        self.cuts.get(i + 1).cloned().unwrap_or_else(S::unit)
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece<S>> + '_ {
        (0..self.cuts.len()).map(move |i| Piece {
            start: self.cuts[i].clone(),
            end: self.arc_end(i),
            trans: self.trans[i].clone(),
        })
    }

    /// True when 0 is a cut only because the representation requires it.
    pub fn artificial_zero(&self) -> bool {
        self.trans.first() == self.trans.last()
    }

    /// Number of discontinuity points on the circle.
    pub fn d(&self) -> usize {
        if self.artificial_zero() {
            self.cuts.len() - 1
        } else {
            self.cuts.len()
        }
    }

    /// The discontinuity points, increasing.
    pub fn discontinuities(&self) -> &[S] {
        if self.artificial_zero() {
            &self.cuts[1..]
        } else {
            &self.cuts
        }
    }

    /// Number of intervals in the smallest `(π, λ)` presentation based at 0.
    pub fn delta(&self) -> Result<usize> {
        let pre = self.preimage(&S::zero())?;
        let disc = self.discontinuities();
        let mut count = self.d();
        if self.artificial_zero() {
            count += 1;
        }
        if !pre.is_zero() && !disc.contains(&pre) {
            count += 1;
        }
        Ok(count)
    }

    /// Position of `x` in [`Self::discontinuities`], if it is one.
    pub fn discontinuity_index(&self, x: &S) -> Result<Option<usize>, ScalarError> {
        let i = self.arc_index(x)?;
        if self.cuts[i] != *x {
            return Ok(None);
        }
        Ok(match (self.artificial_zero(), i) {
            (true, 0) => None,
            (true, i) => Some(i - 1),
            (false, i) => Some(i),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.cuts.len() == 1 && self.trans[0].is_zero()
    }

    pub fn is_rotation(&self) -> bool {
        self.cuts.len() == 1
    }

    /// The rotation angle when `self` is a rotation.
    pub fn rotation_angle(&self) -> Option<&S> {
        self.is_rotation().then(|| &self.trans[0])
    }

    /// True when every cut and translation is rational.
    pub fn is_rational(&self) -> bool {
        self.cuts.iter().chain(&self.trans).all(ExactReal::is_rational)
    }

    /// Index of the arc containing `x ∈ [0, 1)`.
    pub fn arc_index(&self, x: &S) -> Result<usize, ScalarError> {
        let (mut lo, mut hi) = (0usize, self.cuts.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cuts[mid].try_le(x)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    fn check_unit(x: &S) -> Result<()> {
        if x.signum()?.is_lt() || !x.try_lt(&S::unit())? {
            return Err(IetError::OutOfRange(x.to_string()));
        }
        Ok(())
    }

    pub fn evaluate_right(&self, x: &S) -> Result<S> {
        Self::check_unit(x)?;
        Ok(self.right(x)?)
    }

    pub fn evaluate_left(&self, x: &S) -> Result<S> {
        Self::check_unit(x)?;
        Ok(self.left(x)?)
    }

    pub(crate) fn right(&self, x: &S) -> Result<S, ScalarError> {
        let i = self.arc_index(x)?;
        wrap_once(x.add_ref(&self.trans[i]))
    }

    pub(crate) fn left(&self, x: &S) -> Result<S, ScalarError> {
        let mut i = self.arc_index(x)?;
        if self.cuts[i] == *x {
            i = if i == 0 { self.cuts.len() - 1 } else { i - 1 };
        }
        wrap_once(x.add_ref(&self.trans[i]))
    }

    /// The unique `x` with `f₊(x) = y`.
    pub fn preimage(&self, y: &S) -> Result<S> {
        for p in self.pieces() {
            let x = wrap_once(y.add_ref(&negate_unit(&p.trans)))?;
            if p.start.try_le(&x)? && x.try_lt(&p.end)? {
                return Ok(x);
            }
        }
        Err(IetError::NotBijective)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let n = self.cuts.len();
        let mut pieces = Vec::with_capacity(n + g.cuts.len());
        for p in g.pieces() {
            let image = wrap_once(p.start.add_ref(&p.trans))?;
            let image_end = image.add_ref(&p.end.sub_ref(&p.start));
            let mut j = self.arc_index(&image)?;
            let mut lap = S::zero();
            let mut u = image.clone();
            loop {
                let x = p.start.add_ref(&u.sub_ref(&image));
                pieces.push((x, wrap_once(p.trans.add_ref(&self.trans[j]))?));
                let (next_j, next_lap) = if j + 1 < n {
                    (j + 1, lap.clone())
                } else {
                    (0, lap.add_ref(&S::unit()))
                };
                let boundary = self.cuts[next_j].add_ref(&next_lap);
                if boundary.try_cmp(&image_end)?.is_ge() {
                    break;
                }
                u = boundary;
                j = next_j;
                lap = next_lap;
            }
        }
        Self::from_pieces(pieces)
    }

    pub fn inverse(&self) -> Result<Self> {
        let mut pieces = Vec::with_capacity(self.cuts.len() + 1);
        for p in self.pieces() {
            let back = negate_unit(&p.trans);
            let image = wrap_once(p.start.add_ref(&p.trans))?;
            let image_end = image.add_ref(&p.end.sub_ref(&p.start));
            if image_end.try_cmp(&S::unit())?.is_gt() {
                pieces.push((image, back.clone()));
                pieces.push((S::zero(), back));
            } else {
                pieces.push((image, back));
            }
        }
        try_sort_by_key(&mut pieces, |pc| &pc.0)?;
        Self::from_pieces(pieces)
    }

    /// `n`-fold composition; negative powers iterate the inverse.
    pub fn power(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate(&self, g: &Self) -> Result<Self> {
        g.compose(&self.compose(&g.inverse()?)?)
    }

    /// Conjugation by `x ↦ -x`, made right-continuous again.
    pub fn psi_t(&self) -> Result<Self> {
        let mut pieces = Vec::with_capacity(self.cuts.len());
        for p in self.pieces() {
            let start = if p.end == S::unit() {
                S::zero()
            } else {
                S::unit() - p.end
            };
            pieces.push((start, negate_unit(&p.trans)));
        }
        pieces.reverse();
        Self::from_pieces(pieces)
    }

    /// `{x : f(x) ≠ x}`.
    pub fn support(&self) -> Result<ArcSet<S>> {
        let arcs = self
            .pieces()
            .filter(|p| !p.trans.is_zero())
            .map(|p| (p.start, p.end))
            .collect();
        Ok(ArcSet::from_intervals(arcs)?)
    }

    /// `{x : f(x) = x}`; always a finite union of arcs.
    pub fn fix_set(&self) -> Result<ArcSet<S>> {
        Ok(self.support()?.complement())
    }

    /// Arcs `[a, b)` with real displacement `ω` so that `f(x) = x + ω` with no
    /// reduction mod 1, split where the image wraps past 1.
    pub fn interval_pieces(&self) -> Result<Vec<(S, S, S)>> {
        let mut out = Vec::with_capacity(self.cuts.len() + 1);
        for p in self.pieces() {
            if p.trans.is_zero() {
                out.push((p.start, p.end, p.trans));
                continue;
            }
            let turn = S::unit() - p.trans.clone();
            let back = p.trans.sub_ref(&S::unit());
            if turn.try_le(&p.start)? {
                out.push((p.start, p.end, back));
            } else if p.end.try_le(&turn)? {
                out.push((p.start, p.end, p.trans));
            } else {
                out.push((p.start, turn.clone(), p.trans));
                out.push((turn, p.end, back));
            }
        }
        Ok(out)
    }

    /// The image of a finite union of arcs.
    pub fn image_of(&self, set: &ArcSet<S>) -> Result<ArcSet<S>> {
        let mut out = Vec::new();
        for (a, b) in set.intervals() {
            let mut x = a.clone();
            while x.try_lt(b)? {
                let i = self.arc_index(&x)?;
                let end = self.arc_end(i);
                let y = if end.try_lt(b)? { end } else { b.clone() };
                let s = wrap_once(x.add_ref(&self.trans[i]))?;
                let e = s.add_ref(&y.sub_ref(&x));
                if e.try_cmp(&S::unit())?.is_gt() {
                    out.push((s, S::unit()));
                    out.push((S::zero(), e - S::unit()));
                } else {
                    out.push((s, e));
                }
                x = y;
            }
        }
        Ok(ArcSet::from_intervals(out)?)
    }

    /// The map equal to `self` on `set` and to the identity elsewhere.
    /// Fails unless `set` is invariant.
    pub fn restrict(&self, set: &ArcSet<S>) -> Result<Self> {
        let mut pts = self.cuts.clone();
        pts.extend(set.boundaries());
        let pts = sorted_unique(pts)?;
        let mut pieces = Vec::with_capacity(pts.len());
        for x in pts {
            let t = if set.contains(&x)? {
                self.trans[self.arc_index(&x)?].clone()
            } else {
                S::zero()
            };
            pieces.push((x, t));
        }
        let f = Self::merge(pieces);
        f.check_bijective()?;
        Ok(f)
    }

    /// Exact order when every cut has a finite orbit, which always holds for
    /// rational maps. `max_steps` bounds each orbit search; `None` means
    /// unbounded and is only safe for rational maps.
    pub fn finite_order(&self, max_steps: Option<usize>) -> Result<Option<u64>> {
        let mut points: Vec<S> = Vec::new();
        for c in &self.cuts {
            let mut x = self.right(c)?;
            let mut steps = 1usize;
            points.push(c.clone());
            while x != *c {
                if max_steps.is_some_and(|m| steps >= m) {
                    return Ok(None);
                }
                points.push(x.clone());
                x = self.right(&x)?;
                steps += 1;
            }
        }
        let points = sorted_unique(points)?;
        let index: HashMap<&S, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut perm = Vec::with_capacity(points.len());
        for p in &points {
            let image = self.right(p)?;
            perm.push(index[&image]);
        }
        let mut seen = vec![false; perm.len()];
        let mut order = 1u64;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = perm[k];
                len += 1;
            }
            order = order.lcm(&len);
        }
        Ok(Some(order))
    }

    /// Rewrites the rational coordinate of every cut and translation; used to
    /// move a map between equal bases.
    pub fn map_scalars<T: ExactReal>(&self, f: impl Fn(&S) -> T) -> Iet<T> {
        Iet {
            cuts: self.cuts.iter().map(&f).collect(),
            trans: self.trans.iter().map(&f).collect(),
        }
    }
}

impl Iet<Scalar> {
    /// Converts a rational map into the scalar field.
    pub fn from_rational_map(f: &Iet<BigRational>) -> Self {
        f.map_scalars(|q| Scalar::rational(q.clone()))
    }
}

impl<S: ExactReal> fmt::Display for Iet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[{}, {}) +{}", p.start, p.end, p.trans)?;
        }
        Ok(())
    }
}

impl<S: ExactReal> Default for Iet<S> {
    fn default() -> Self {
        Self::identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Basis;
    use num_traits::Zero;
    use std::sync::Arc;

    type Q = BigRational;

    fn r(p: i64, q: i64) -> Q {
        Q::new(p.into(), q.into())
    }

    fn rot(p: i64, q: i64) -> Iet<Q> {
        Iet::rotation(&r(p, q)).unwrap()
    }

    fn sqrt2() -> (Arc<Basis>, Scalar, Scalar) {
        let b = Basis::quadratic(&[2]).unwrap();
        let alpha = b.scalar_from_pairs(&[(-1, 1), (1, 1)]).unwrap();
        let beta = b.scalar_from_pairs(&[(0, 1), (1, 2)]).unwrap();
        (b, alpha, beta)
    }

    #[test]
    fn pi_lambda_rotation() {
        let f = Iet::from_pi_lambda(&PiLambda::new(vec![2, 1], vec![r(2, 3), r(1, 3)]).unwrap()).unwrap();
        assert_eq!(f, rot(1, 3));
        assert_eq!(f.d(), 0);
    }

    #[test]
    fn pi_lambda_identity() {
        let f = Iet::from_pi_lambda(&PiLambda::new(vec![1, 2, 3], vec![r(1, 5), r(2, 5), r(2, 5)]).unwrap()).unwrap();
        assert!(f.is_identity());
        assert!(f.artificial_zero());
        assert_eq!(f.d(), 0);
        assert_eq!(f.delta().unwrap(), 1);
    }

    #[test]
    fn pi_lambda_restricted_rotation() {
        let (_, alpha, beta) = sqrt2();
        let lambda = vec![
            beta.clone() - alpha.clone(),
            alpha.clone(),
            Scalar::from_ratio(1, 1) - beta.clone(),
        ];
        let f = Iet::from_pi_lambda(&PiLambda::new(vec![2, 1, 3], lambda).unwrap()).unwrap();
        assert_eq!(f, Iet::restricted_rotation(&alpha, &beta).unwrap());
        assert_eq!(f.d(), 3);
        let zero = Scalar::zero();
        assert_eq!(f.evaluate_right(&zero).unwrap(), alpha);
        assert_eq!(f.evaluate_left(&zero).unwrap(), zero);
        assert_eq!(f.support().unwrap().intervals(), &[(Scalar::zero(), beta)]);
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            PiLambda::new(vec![1, 1], vec![r(1, 2), r(1, 2)]),
            Err(IetError::InvalidPermutation(_))
        ));
        assert!(matches!(
            PiLambda::new(vec![2, 1], vec![r(1, 2), r(1, 3)]),
            Err(IetError::LengthSum(_))
        ));
        assert!(matches!(
            PiLambda::new(vec![2, 1], vec![r(3, 2), r(-1, 2)]),
            Err(IetError::NonPositiveLength(1))
        ));
        assert!(matches!(
            Iet::from_cuts(vec![r(0, 1), r(1, 2)], vec![r(1, 4), r(0, 1)]),
            Err(IetError::NotBijective)
        ));
        assert!(matches!(
            Iet::from_cuts(vec![r(1, 2)], vec![r(0, 1)]),
            Err(IetError::InvalidCuts)
        ));
        assert!(rot(1, 4).evaluate_right(&r(1, 1)).is_err());
    }

    #[test]
    fn rotation_wraps() {
        let f = rot(1, 4);
        assert_eq!(f.evaluate_right(&r(7, 8)).unwrap(), r(1, 8));
        assert_eq!(f.evaluate_left(&r(7, 8)).unwrap(), r(1, 8));
        assert_eq!(f.preimage(&r(1, 8)).unwrap(), r(7, 8));
    }

    #[test]
    fn rotation_algebra() {
        assert_eq!(rot(1, 3).compose(&rot(1, 3)).unwrap(), rot(2, 3));
        assert_eq!(rot(1, 3).inverse().unwrap(), rot(2, 3));
        assert!(rot(1, 3).power(3).unwrap().is_identity());
        assert_eq!(rot(1, 5).power(-2).unwrap(), rot(3, 5));
        assert_eq!(rot(1, 5).psi_t().unwrap(), rot(4, 5));
        assert_eq!(rot(1, 5).conjugate(&rot(2, 7)).unwrap(), rot(1, 5));
        assert!(Iet::<Q>::identity().inverse().unwrap().is_identity());
    }

    #[test]
    fn irrational_rotation_counts() {
        let (_, alpha, _) = sqrt2();
        let f = Iet::rotation(&alpha).unwrap();
        assert_eq!((f.d(), f.delta().unwrap()), (0, 2));
        assert_eq!(f.finite_order(Some(50)).unwrap(), None);
    }

    #[test]
    fn reversal_counts() {
        let (b, _, _) = sqrt2();
        let l1 = b.scalar_from_pairs(&[(0, 1), (1, 4)]).unwrap();
        let l2 = b.scalar_from_pairs(&[(1, 3), (0, 1)]).unwrap();
        let l3 = b.one() - l1.clone() - l2.clone();
        let f = Iet::from_pi_lambda(&PiLambda::new(vec![3, 2, 1], vec![l1, l2, l3]).unwrap()).unwrap();
        assert_eq!((f.d(), f.delta().unwrap()), (3, 3));
    }

    #[test]
    fn compose_with_inverse() {
        let f = Iet::from_cuts(vec![r(0, 1), r(1, 3), r(1, 2)], vec![r(2, 3), r(1, 6), r(1, 2)]).unwrap();
        assert!(f.compose(&f.inverse().unwrap()).unwrap().is_identity());
        assert!(f.inverse().unwrap().compose(&f).unwrap().is_identity());
        assert_eq!(f.psi_t().unwrap().psi_t().unwrap(), f);
    }

    #[test]
    fn disjoint_restricted_rotations_support() {
        let a = Iet::from_cuts(
            vec![r(0, 1), r(1, 8), r(1, 4), r(1, 2), r(5, 8), r(3, 4)],
            vec![r(1, 8), r(7, 8), r(0, 1), r(1, 8), r(7, 8), r(0, 1)],
        )
        .unwrap();
        assert_eq!(
            a.support().unwrap().intervals(),
            &[(r(0, 1), r(1, 4)), (r(1, 2), r(3, 4))]
        );
        assert_eq!(
            a.fix_set().unwrap().intervals(),
            &[(r(1, 4), r(1, 2)), (r(3, 4), r(1, 1))]
        );
        assert_eq!(a.finite_order(None).unwrap(), Some(2));
    }

    #[test]
    fn rational_orders() {
        assert_eq!(rot(2, 5).finite_order(None).unwrap(), Some(5));
        assert_eq!(Iet::<Q>::identity().finite_order(None).unwrap(), Some(1));
        let f = Iet::from_cuts(vec![r(0, 1), r(1, 2)], vec![r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(f, rot(1, 2));
    }

    #[test]
    fn interval_pieces_split_at_wrap() {
        let pieces = rot(1, 4).interval_pieces().unwrap();
        assert_eq!(pieces, vec![(r(0, 1), r(3, 4), r(1, 4)), (r(3, 4), r(1, 1), r(-3, 4))]);
    }

    #[test]
    fn restriction_and_images() {
        let f = Iet::from_cuts(
            vec![r(0, 1), r(1, 8), r(1, 4), r(1, 2), r(5, 8), r(3, 4)],
            vec![r(1, 8), r(7, 8), r(0, 1), r(1, 8), r(7, 8), r(0, 1)],
        )
        .unwrap();
        let left = ArcSet::from_intervals(vec![(r(0, 1), r(1, 4))]).unwrap();
        let g = f.restrict(&left).unwrap();
        assert_eq!(g.support().unwrap(), left);
        assert_eq!(f.image_of(&left).unwrap(), left);
        let bad = ArcSet::from_intervals(vec![(r(0, 1), r(1, 8))]).unwrap();
        assert!(f.restrict(&bad).is_err());
        assert_eq!(
            rot(1, 4)
                .image_of(&ArcSet::from_intervals(vec![(r(1, 2), r(1, 1))]).unwrap())
                .unwrap()
                .intervals(),
            &[(r(0, 1), r(1, 4)), (r(3, 4), r(1, 1))]
        );
    }
}
