//! Orders, invariant decompositions, restricted rotations and centralizers.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::growth::{classify_growth, Certainty, GrowthConfig, GrowthKind};
use crate::iet::{sorted_unique, ArcSet, Iet, IetError, Result};
use crate::invariants::saf;
use crate::scalar::{rationally_dependent, wrap_once, ExactReal};

/// `f ∘ g = g ∘ f`.
pub fn commutes<S: ExactReal>(f: &Iet<S>, g: &Iet<S>) -> Result<bool> {
    Ok(f.compose(g)? == g.compose(f)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite(Certainty),
}

/// Exact for rational maps and whenever every cut returns within `horizon`
/// steps; a nonzero scissors invariant certifies infinite order.
pub fn order<S: ExactReal>(f: &Iet<S>, horizon: usize) -> Result<Order> {
    let finite = if f.is_rational() {
        f.finite_order(None)?
    } else {
        f.finite_order(Some(horizon))?
    };
    if let Some(n) = finite {
        return Ok(Order::Finite(n));
    }
    if !saf(f)?.is_zero() {
        return Ok(Order::Infinite(Certainty::Exact));
    }
    Ok(Order::Infinite(Certainty::HorizonStable { window: horizon }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPart<S> {
    pub set: ArcSet<S>,
    pub period: usize,
}

/// An invariant union of arcs expected to carry one minimal component.
/// `f` maps `cycle[i]` exactly onto `cycle[(i + 1) % cycle.len()]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalCandidate<S> {
    pub set: ArcSet<S>,
    pub cycle: Vec<ArcSet<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition<S> {
    pub periodic_parts: Vec<PeriodicPart<S>>,
    pub minimal_candidates: Vec<MinimalCandidate<S>>,
    /// Image index of each block, blocks listed candidate by candidate.
    pub permutation: Vec<usize>,
    /// Refinement depth of the final partition.
    pub depth: usize,
    /// True when two consecutive depths gave the same decomposition.
    pub stabilized: bool,
}

impl<S: ExactReal> ComponentDecomposition<S> {
    pub fn blocks(&self) -> impl Iterator<Item = &ArcSet<S>> {
        self.minimal_candidates.iter().flat_map(|c| &c.cycle)
    }

    /// Order of the permutation of blocks.
    pub fn permutation_order(&self) -> usize {
        self.minimal_candidates.iter().fold(1, |acc, c| acc.lcm(&c.cycle.len()))
    }
}

type Parts<S> = (Vec<PeriodicPart<S>>, Vec<MinimalCandidate<S>>);

struct Refinement<S> {
    pts: Vec<S>,
}

impl<S: ExactReal> Refinement<S> {
    fn end(&self, k: usize) -> S {
        self.pts.get(k + 1).cloned().unwrap_or_else(S::unit)
    }

    fn len(&self, k: usize) -> S {
        self.end(k).sub_ref(&self.pts[k])
    }

    fn locate(&self, x: &S) -> Result<usize> {
        let (mut lo, mut hi) = (0usize, self.pts.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.pts[mid].try_le(x)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    fn union(&self, arcs: &[usize]) -> Result<ArcSet<S>> {
        Ok(ArcSet::from_intervals(
            arcs.iter().map(|&k| (self.pts[k].clone(), self.end(k))).collect(),
        )?)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn decompose_at<S: ExactReal>(f: &Iet<S>, inverse: &Iet<S>, depth: usize) -> Result<Parts<S>> {
    let mut pts = Vec::with_capacity(f.arc_count() * (depth + 1));
    for c in f.cuts() {
        let mut y = c.clone();
        pts.push(y.clone());
        for _ in 0..depth {
            y = inverse.right(&y)?;
            pts.push(y.clone());
        }
    }
    let part = Refinement {
        pts: sorted_unique(pts)?,
    };
    let m = part.pts.len();
    let index: HashMap<&S, usize> = part.pts.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut images = Vec::with_capacity(m);
    let mut next = vec![None; m];
    for (k, slot) in next.iter_mut().enumerate() {
        let s = f.right(&part.pts[k])?;
        let len = part.len(k);
        if let Some(&j) = index.get(&s) {
            if part.len(j) == len {
                *slot = Some(j);
            }
        }
        images.push((s, len));
    }

    // Cycles of the exact-successor map are the periodic arcs.
    let mut period: Vec<Option<usize>> = vec![None; m];
    let mut state = vec![0u8; m];
    let mut position = vec![0usize; m];
    for k in 0..m {
        if state[k] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = Some(k);
        while let Some(c) = cur {
            match state[c] {
                1 => {
                    let len = path.len() - position[c];
                    for &x in &path[position[c]..] {
                        period[x] = Some(len);
                    }
                    break;
                }
                2 => break,
                _ => {
                    state[c] = 1;
                    position[c] = path.len();
                    path.push(c);
                    cur = next[c];
                }
            }
        }
        for x in path {
            state[x] = 2;
        }
    }

    let mut by_period: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, p) in period.iter().enumerate() {
        if let Some(p) = p {
            by_period.entry(*p).or_default().push(k);
        }
    }
    let mut periods: Vec<usize> = by_period.keys().copied().collect();
    periods.sort_unstable();
    let mut periodic_parts = Vec::with_capacity(periods.len());
    for p in periods {
        periodic_parts.push(PeriodicPart {
            set: part.union(&by_period[&p])?,
            period: p,
        });
    }

    // Overlap graph on the remaining arcs.
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut parent: Vec<usize> = (0..m).collect();
    for k in (0..m).filter(|&k| period[k].is_none()) {
        let (s, len) = &images[k];
        let stop = s.add_ref(len);
        let mut j = part.locate(s)?;
        let mut lap = S::zero();
        loop {
            if period[j].is_none() {
                edges[k].push(j);
                let (a, b) = (find(&mut parent, k), find(&mut parent, j));
                parent[a] = b;
            }
            let (nj, nlap) = if j + 1 < m {
                (j + 1, lap.clone())
            } else {
                (0, lap.add_ref(&S::unit()))
            };
            if part.pts[nj].add_ref(&nlap).try_cmp(&stop)?.is_ge() {
                break;
            }
            j = nj;
            lap = nlap;
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of: HashMap<usize, usize> = HashMap::new();
    for k in (0..m).filter(|&k| period[k].is_none()) {
        let root = find(&mut parent, k);
        let g = *group_of.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(k);
    }

    let mut candidates = Vec::with_capacity(groups.len());
    for group in groups {
        let mut level: HashMap<usize, i64> = HashMap::new();
        level.insert(group[0], 0);
        let mut queue = VecDeque::from([group[0]]);
        let mut cyc = 0i64;
        while let Some(u) = queue.pop_front() {
            let lu = level[&u];
            for &v in &edges[u] {
                match level.get(&v) {
                    Some(&lv) => cyc = cyc.gcd(&(lu + 1 - lv)),
                    None => {
                        level.insert(v, lu + 1);
                        queue.push_back(v);
                    }
                }
            }
        }
        let p = if cyc == 0 || level.len() != group.len() {
            1
        } else {
            cyc as usize
        };
        let mut classes = vec![Vec::new(); p];
        for &k in &group {
            classes[(level.get(&k).copied().unwrap_or(0) as usize) % p].push(k);
        }
        let set = part.union(&group)?;
        let mut cycle = Vec::with_capacity(p);
        for class in &classes {
            cycle.push(part.union(class)?);
        }
        candidates.push(MinimalCandidate { set, cycle });
    }
    Ok((periodic_parts, candidates))
}

/// Checks every claimed block map exactly, coarsening whatever fails.
fn verify_parts<S: ExactReal>(f: &Iet<S>, parts: Parts<S>) -> Result<Parts<S>> {
    let (periodic, candidates) = parts;
    let mut verified = Vec::with_capacity(candidates.len());
    let mut all_ok = true;
    for mut c in candidates {
        let mut ok = true;
        for i in 0..c.cycle.len() {
            let image = f.image_of(&c.cycle[i])?;
            if image != c.cycle[(i + 1) % c.cycle.len()] {
                ok = false;
                break;
            }
        }
        if !ok {
            c.cycle = vec![c.set.clone()];
            ok = f.image_of(&c.set)? == c.set;
        }
        all_ok &= ok;
        verified.push(c);
    }
    if !all_ok {
        let mut rest = ArcSet::empty();
        for c in &verified {
            rest = rest.union(&c.set)?;
        }
        verified = vec![MinimalCandidate {
            cycle: vec![rest.clone()],
            set: rest,
        }];
    }
    Ok((periodic, verified))
}

/// Splits the circle into exact periodic parts and invariant candidates for
/// the minimal components, refining by backward orbits of the cuts.
pub fn components<S: ExactReal>(f: &Iet<S>, horizon: usize) -> Result<ComponentDecomposition<S>> {
    let inverse = f.inverse()?;
    let horizon = horizon.max(1);
    let mut depth = 4usize;
    for c in f.cuts() {
        let mut y = f.right(c)?;
        for step in 1..=horizon {
            if y == *c {
                depth = depth.max(step);
                break;
            }
            y = f.right(&y)?;
        }
    }
    depth = depth.min(horizon);
    let mut previous: Option<Parts<S>> = None;
    loop {
        let parts = verify_parts(f, decompose_at(f, &inverse, depth)?)?;
        let stabilized = previous.as_ref() == Some(&parts);
        if stabilized || depth >= horizon {
            let (periodic_parts, minimal_candidates) = parts;
            let mut permutation = Vec::new();
            for c in &minimal_candidates {
                let base = permutation.len();
                let len = c.cycle.len();
                permutation.extend((0..len).map(|i| base + (i + 1) % len));
            }
            return Ok(ComponentDecomposition {
                periodic_parts,
                minimal_candidates,
                permutation,
                depth,
                stabilized,
            });
        }
        previous = Some(parts);
        depth = (depth * 2).min(horizon);
    }
}

/// `f = r_γ ∘ r_{α,β} ∘ r_γ⁻¹`, rotating the arc `[γ, γ + β)` by `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedRotationForm<S> {
    pub rotor: ArcSet<S>,
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
}

impl<S: ExactReal> RestrictedRotationForm<S> {
    pub fn to_iet(&self) -> Result<Iet<S>> {
        let base = if self.beta == S::unit() {
            Iet::rotation(&self.alpha)?
        } else {
            Iet::restricted_rotation(&self.alpha, &self.beta)?
        };
        base.conjugate(&Iet::rotation(&self.gamma)?)
    }

    /// True when the rotor has infinite order.
    pub fn is_irrational(&self) -> bool {
        !rationally_dependent(&self.alpha, &self.beta)
    }
}

/// Recognizes a restricted rotation up to conjugation by a rotation.
pub fn detect_restricted_rotation<S: ExactReal>(f: &Iet<S>) -> Result<Option<RestrictedRotationForm<S>>> {
    let support = f.support()?;
    if support.is_empty() {
        return Ok(None);
    }
    if support.is_full() {
        return Ok(f.rotation_angle().map(|alpha| RestrictedRotationForm {
            rotor: support.clone(),
            alpha: alpha.clone(),
            beta: S::unit(),
            gamma: S::zero(),
        }));
    }
    let Some((start, beta)) = support.as_circular_arc() else {
        return Ok(None);
    };
    let back = Iet::rotation(&(S::zero() - start.clone()))?;
    let based = f.conjugate(&back)?;
    let alpha = based.right(&S::zero())?;
    let zero = S::zero();
    if !(zero.try_lt(&alpha)? && alpha.try_lt(&beta)?) {
        return Ok(None);
    }
    if based != Iet::restricted_rotation(&alpha, &beta)? {
        return Ok(None);
    }
    Ok(Some(RestrictedRotationForm {
        rotor: support,
        alpha,
        beta,
        gamma: start,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalForm<S> {
    Found {
        k: usize,
        rotors: Vec<RestrictedRotationForm<S>>,
    },
    Undetermined {
        k: usize,
        reason: String,
    },
}

/// Writes a power of a bounded infinite-order map as a product of
/// infinite-order restricted rotations with disjoint supports.
pub fn bounded_normal_form<S: ExactReal>(f: &Iet<S>, config: &GrowthConfig) -> Result<NormalForm<S>> {
    let verdict = classify_growth(f, config)?;
    if verdict.kind != GrowthKind::Bounded {
        return Err(IetError::Precondition(format!(
            "normal form needs bounded growth, verdict was {:?}",
            verdict.kind
        )));
    }
    if let Order::Finite(n) = order(f, config.horizon)? {
        return Err(IetError::Precondition(format!(
            "normal form needs infinite order, order is {n}"
        )));
    }
    let parts = components(f, config.horizon)?;
    let k = parts
        .periodic_parts
        .iter()
        .fold(parts.permutation_order(), |acc, p| acc.lcm(&p.period));
    let power = f.power(k as i64)?;
    let mut rotors = Vec::new();
    for block in parts.blocks() {
        let piece = power.restrict(block)?;
        match detect_restricted_rotation(&piece)? {
            Some(form) if form.is_irrational() && form.rotor == *block => rotors.push(form),
            _ => {
                return Ok(NormalForm::Undetermined {
                    k,
                    reason: "a block of the power is not a rotation-conjugate restricted rotation".into(),
                })
            }
        }
    }
    let mut product = Iet::identity();
    for r in &rotors {
        product = product.compose(&r.to_iet()?)?;
    }
    if product != power {
        return Ok(NormalForm::Undetermined {
            k,
            reason: "rotor product differs from the power".into(),
        });
    }
    Ok(NormalForm::Found { k, rotors })
}

/// A map `x ↦ x + σ(x mod 1/n)/n` with `σ` a right-continuous step function on
/// `[0, 1/n)` valued in `ℤ/nℤ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PnElement<S> {
    n: usize,
    breakpoints: Vec<S>,
    values: Vec<usize>,
}

impl<S: ExactReal> PnElement<S> {
    pub fn new(n: usize, breakpoints: Vec<S>, values: Vec<usize>) -> Result<Self> {
        if n == 0 || breakpoints.len() != values.len() || breakpoints.is_empty() {
            return Err(IetError::Precondition(
                "step function needs n ≥ 1 and one value per breakpoint".into(),
            ));
        }
        let width = S::from_rational(BigRational::new(1.into(), BigInt::from(n)));
        if !breakpoints[0].is_zero() || !breakpoints.last().unwrap().try_lt(&width)? {
            return Err(IetError::InvalidCuts);
        }
        for w in breakpoints.windows(2) {
            if !w[0].try_lt(&w[1])? {
                return Err(IetError::InvalidCuts);
            }
        }
        let mut bps = Vec::with_capacity(values.len());
        let mut vals: Vec<usize> = Vec::with_capacity(values.len());
        for (b, v) in breakpoints.into_iter().zip(values) {
            let v = v % n;
            if vals.last() != Some(&v) {
                bps.push(b);
                vals.push(v);
            }
        }
        Ok(PnElement {
            n,
            breakpoints: bps,
            values: vals,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::shift(n, 0)
    }

    /// The rotation by `s/n`.
    pub fn shift(n: usize, s: usize) -> Self {
        PnElement {
            n,
            breakpoints: vec![S::zero()],
            values: vec![s % n.max(1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values == [0]
    }

    fn value_at(&self, u: &S) -> Result<usize> {
        let mut v = self.values[0];
        for (b, val) in self.breakpoints.iter().zip(&self.values) {
            if b.try_le(u)? {
                v = *val;
            } else {
                break;
            }
        }
        Ok(v)
    }

    pub fn inverse(&self) -> Self {
        PnElement {
            n: self.n,
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| (self.n - v) % self.n).collect(),
        }
    }

    /// `self ∘ other`; step functions add because both fix `x mod 1/n`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(IetError::Precondition("step functions for different n".into()));
        }
        let bps = sorted_unique(self.breakpoints.iter().chain(&other.breakpoints).cloned().collect())?;
        let mut vals = Vec::with_capacity(bps.len());
        for b in &bps {
            vals.push((self.value_at(b)? + other.value_at(b)?) % self.n);
        }
        Self::new(self.n, bps, vals)
    }

    pub fn to_iet(&self) -> Result<Iet<S>> {
        let n = BigInt::from(self.n);
        let mut pieces = Vec::with_capacity(self.n * self.breakpoints.len());
        for j in 0..self.n {
            let offset = S::from_rational(BigRational::new(BigInt::from(j), n.clone()));
            for (b, v) in self.breakpoints.iter().zip(&self.values) {
                let t = S::from_rational(BigRational::new(BigInt::from(*v), n.clone()));
                pieces.push((offset.add_ref(b), t));
            }
        }
        Iet::from_pieces(pieces)
    }
}

/// Factors `g` commuting with `r_{1/n}` as `p ∘ e` with `p` in `P_n` and `e`
/// acting identically on every arc `[j/n, (j+1)/n)`.
pub fn centralizer_factor<S: ExactReal>(g: &Iet<S>, n: usize) -> Result<(PnElement<S>, Iet<S>)> {
    if n == 0 {
        return Err(IetError::Precondition("n must be positive".into()));
    }
    let nq = BigRational::from_integer(BigInt::from(n));
    let width = S::from_rational(BigRational::new(1.into(), BigInt::from(n)));
    let shift = Iet::rotation(&width)?;
    if !commutes(g, &shift)? {
        return Err(IetError::Precondition(format!(
            "map does not commute with the rotation by 1/{n}"
        )));
    }
    // σ(u) = index of the arc holding g⁻¹(u), for u in [0, 1/n).
    let inverse = g.inverse()?;
    let mut bps = Vec::new();
    let mut vals = Vec::new();
    for p in inverse.pieces() {
        if !p.start.try_lt(&width)? {
            break;
        }
        let u1 = if p.end.try_lt(&width)? {
            p.end.clone()
        } else {
            width.clone()
        };
        let w0 = wrap_once(p.start.add_ref(&p.trans))?;
        let idx = w0
            .scale(&nq)
            .floor()?
            .to_usize()
            .ok_or_else(|| IetError::Precondition("arc index overflow".into()))?;
        let boundary = S::from_rational(BigRational::new(BigInt::from(idx + 1), BigInt::from(n)));
        bps.push(p.start.clone());
        vals.push(idx);
        let reach = w0.add_ref(&u1.sub_ref(&p.start));
        if reach.try_cmp(&boundary)?.is_gt() {
            bps.push(p.start.add_ref(&boundary.sub_ref(&w0)));
            vals.push((idx + 1) % n);
        }
    }
    let h = PnElement::new(n, bps, vals)?;
    let p = h.inverse();
    let e = h.to_iet()?.compose(g)?;
    for j in 0..n {
        let arc = ArcSet::from_intervals(vec![(
            S::from_rational(BigRational::new(BigInt::from(j), BigInt::from(n))),
            S::from_rational(BigRational::new(BigInt::from(j + 1), BigInt::from(n))),
        )])?;
        if e.image_of(&arc)? != arc {
            return Err(IetError::Precondition(format!("diagonal factor moves arc {j}")));
        }
    }
    if !commutes(&e, &shift)? || p.to_iet()?.compose(&e)? != *g {
        return Err(IetError::Precondition("factorization check failed".into()));
    }
    Ok((p, e))
}

/// For an irrational rotation `f`: `g` commutes with `f` exactly when `g` is
/// a rotation.
pub fn rotation_centralizer_check<S: ExactReal>(f: &Iet<S>, g: &Iet<S>) -> Result<bool> {
    match f.rotation_angle() {
        Some(a) if !a.is_rational() => {}
        _ => {
            return Err(IetError::Precondition(
                "first map must be a rotation by an irrational angle".into(),
            ))
        }
    }
    Ok(commutes(f, g)? == g.is_rotation())
}
