//! Orbits of discontinuities and the growth of `d(fⁿ)`.
//!
//! Every discontinuity of `fⁿ` is a backward iterate of some discontinuity
//! `x` of `f` whose left and right orbits are apart after the remaining
//! steps. Tracking one left/right orbit pair per discontinuity and the length
//! of its clean backward chain gives the whole series in `O(|D|·N)` steps.

use crate::iet::{Iet, IetError, Result};
use crate::scalar::ExactReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthConfig {
    pub horizon: usize,
    pub window: usize,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            horizon: 2000,
            window: 200,
        }
    }
}

impl GrowthConfig {
    pub fn new(horizon: usize, window: usize) -> Result<Self> {
        let config = GrowthConfig { horizon, window };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 || self.window == 0 || self.window >= self.horizon {
            return Err(IetError::Precondition(format!(
                "need 0 < window < horizon, got window {} and horizon {}",
                self.window, self.horizon
            )));
        }
        Ok(())
    }
}

/// A step at which the right and/or left orbit landed on a discontinuity.
/// Cut indices refer to [`Iet::discontinuities`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub step: usize,
    pub right: Option<usize>,
    pub left: Option<usize>,
}

/// The right and left orbits of one point, advanced in lockstep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPair<S> {
    pub origin: S,
    pub step: usize,
    pub right: S,
    pub left: S,
    pub hit_log: Vec<Hit>,
}

impl<S: ExactReal> OrbitPair<S> {
    pub fn new(origin: S) -> Self {
        OrbitPair {
            right: origin.clone(),
            left: origin.clone(),
            origin,
            step: 0,
            hit_log: Vec::new(),
        }
    }

    pub fn is_split(&self) -> bool {
        self.right != self.left
    }

    pub fn last_hit(&self) -> usize {
        self.hit_log.last().map_or(0, |h| h.step)
    }

    pub fn advance(&mut self, f: &Iet<S>) -> Result<()> {
        self.right = f.right(&self.right)?;
        self.left = f.left(&self.left)?;
        self.step += 1;
        let right = f.discontinuity_index(&self.right)?;
        let left = f.discontinuity_index(&self.left)?;
        if right.is_some() || left.is_some() {
            self.hit_log.push(Hit {
                step: self.step,
                right,
                left,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    /// The right orbit returns after exactly `period` steps.
    Periodic { period: usize },
    /// No return within the horizon.
    NonperiodicAtHorizon,
}

/// Length of the backward chain `f⁻¹(x), …, f⁻ᶜ(x)` avoiding discontinuities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainLength {
    Exact(usize),
    AtLeast(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FundamentalStatus {
    No,
    /// No backward iterate within the horizon is a discontinuity.
    AtHorizon,
    /// As `AtHorizon`, and every other discontinuity is periodic or on the
    /// forward orbit of this one, so no backward hit can ever happen unless
    /// the point itself is periodic.
    Certified,
}

impl FundamentalStatus {
    pub fn is_fundamental(self) -> bool {
        self != FundamentalStatus::No
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    /// Left and right orbits agree from step `at` on.
    Resolving { at: usize },
    /// Left and right orbits differ from step `since` on.
    Nonresolving { since: usize },
    /// Orbits still met discontinuities inside the final window.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscontinuityStatus<S> {
    pub point: S,
    pub periodicity: Periodicity,
    pub chain: ChainLength,
    pub fundamental: FundamentalStatus,
    pub resolution: Resolution,
    /// Last step (0 if none) at which either orbit hit a discontinuity.
    pub last_hit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscontinuityReport<S> {
    pub horizon: usize,
    pub window: usize,
    pub points: Vec<DiscontinuityStatus<S>>,
}

impl<S: ExactReal> DiscontinuityReport<S> {
    pub fn discontinuities(&self) -> impl Iterator<Item = &S> {
        self.points.iter().map(|p| &p.point)
    }

    pub fn nonperiodic(&self) -> impl Iterator<Item = &DiscontinuityStatus<S>> {
        self.points
            .iter()
            .filter(|p| p.periodicity == Periodicity::NonperiodicAtHorizon)
    }

    pub fn fundamental(&self) -> impl Iterator<Item = &DiscontinuityStatus<S>> {
        self.points.iter().filter(|p| p.fundamental.is_fundamental())
    }

    /// Fundamental discontinuities whose orbits end up apart.
    pub fn nonresolving_fundamental(&self) -> usize {
        self.fundamental()
            .filter(|p| matches!(p.resolution, Resolution::Nonresolving { .. }))
            .count()
    }

    /// `1 +` the last hit over all fundamental pairs, or `None` when a hit
    /// falls inside the final window.
    pub fn stabilization_time(&self) -> Option<usize> {
        let mut last = 0;
        for p in self.fundamental() {
            if p.resolution == Resolution::Unknown {
                return None;
            }
            last = last.max(p.last_hit);
        }
        Some(last + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthKind {
    Bounded,
    Linear(usize),
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    /// Finite order was established exactly.
    Exact,
    /// Orbits were stable over the last `window` steps of the horizon.
    HorizonStable { window: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthVerdict<S> {
    pub kind: GrowthKind,
    pub n0: Option<usize>,
    pub certainty: Certainty,
    pub series_checked_to: usize,
    pub order: Option<u64>,
    pub report: DiscontinuityReport<S>,
}

/// Everything simulated about one discontinuity over `len` steps.
struct Trace {
    /// `splits[m]` for `m` in `0..=len`.
    splits: Vec<bool>,
    hits: Vec<Hit>,
    period: Option<usize>,
    chain: Option<usize>,
    /// Discontinuities met by the right orbit before it returns.
    right_visits: Vec<bool>,
}

struct Analysis<S> {
    points: Vec<S>,
    traces: Vec<Trace>,
    len: usize,
}

impl<S: ExactReal> Analysis<S> {
    fn run(f: &Iet<S>, len: usize) -> Result<Self> {
        let points = f.discontinuities().to_vec();
        let inverse = f.inverse()?;
        let rational = f.is_rational();
        let mut traces = Vec::with_capacity(points.len());
        for x in &points {
            let mut pair = OrbitPair::new(x.clone());
            let mut splits = Vec::with_capacity(len + 1);
            splits.push(false);
            let mut period = None;
            let mut right_visits = vec![false; points.len()];
            for m in 1..=len {
                pair.advance(f)?;
                splits.push(pair.is_split());
                if period.is_none() {
                    if pair.right == *x {
                        period = Some(m);
                    } else if let Some(Hit {
                        right: Some(j), step, ..
                    }) = pair.hit_log.last()
                    {
                        if *step == m {
                            right_visits[*j] = true;
                        }
                    }
                }
            }
            if period.is_none() && rational {
                // Rational maps have finite order, so the orbit must return.
                let mut y = pair.right.clone();
                let mut m = len;
                while period.is_none() {
                    y = f.right(&y)?;
                    m += 1;
                    if y == *x {
                        period = Some(m);
                    }
                }
            }
            let mut chain = None;
            let mut y = x.clone();
            for i in 1..=len {
                y = inverse.right(&y)?;
                if f.discontinuity_index(&y)?.is_some() {
                    chain = Some(i - 1);
                    break;
                }
            }
            traces.push(Trace {
                splits,
                hits: pair.hit_log,
                period,
                chain,
                right_visits,
            });
        }
        Ok(Analysis { points, traces, len })
    }

    /// Contribution of each discontinuity to `d(fⁿ)` for `n` in `1..=n_max`.
    fn contributions(&self, trace: &Trace, n_max: usize) -> Vec<usize> {
        let mut prefix = Vec::with_capacity(n_max + 1);
        prefix.push(0usize);
        for m in 1..=n_max {
            prefix.push(prefix[m - 1] + usize::from(trace.splits[m]));
        }
        let reach = trace.chain.unwrap_or(self.len);
        (1..=n_max)
            .map(|n| {
                let lo = n.saturating_sub(reach).max(1);
                prefix[n] - prefix[lo - 1]
            })
            .collect()
    }

    fn series(&self, n_max: usize, only_nonperiodic: bool) -> Vec<usize> {
        let mut total = vec![0usize; n_max];
        for trace in &self.traces {
            if only_nonperiodic && trace.period.is_some() {
                continue;
            }
            for (acc, c) in total.iter_mut().zip(self.contributions(trace, n_max)) {
                *acc += c;
            }
        }
        total
    }

    fn report(&self, window: usize) -> DiscontinuityReport<S> {
        let periodic: Vec<bool> = self.traces.iter().map(|t| t.period.is_some()).collect();
        let mut points = Vec::with_capacity(self.points.len());
        for (i, (x, trace)) in self.points.iter().zip(&self.traces).enumerate() {
            let periodicity = match trace.period {
                Some(period) => Periodicity::Periodic { period },
                None => Periodicity::NonperiodicAtHorizon,
            };
            let chain = match trace.chain {
                Some(c) => ChainLength::Exact(c),
                None => ChainLength::AtLeast(self.len),
            };
            let fundamental = if trace.period.is_some() || trace.chain.is_some() {
                FundamentalStatus::No
            } else if (0..self.points.len()).all(|j| j == i || periodic[j] || trace.right_visits[j]) {
                FundamentalStatus::Certified
            } else {
                FundamentalStatus::AtHorizon
            };
            let last_hit = trace.hits.last().map_or(0, |h| h.step);
            let settled_from = settled_hit_step(&trace.hits);
            let final_state = trace.splits[self.len];
            let mut from = self.len;
            while from > 1 && trace.splits[from - 1] == final_state {
                from -= 1;
            }
            let resolution = if settled_from + window > self.len || from + window > self.len {
                Resolution::Unknown
            } else if final_state {
                Resolution::Nonresolving { since: from }
            } else {
                Resolution::Resolving { at: from }
            };
            points.push(DiscontinuityStatus {
                point: x.clone(),
                periodicity,
                chain,
                fundamental,
                resolution,
                last_hit,
            });
        }
        DiscontinuityReport {
            horizon: self.len,
            window,
            points,
        }
    }
}

/// Last step whose hit can still change the pair.
///
/// A side that meets the same discontinuity twice is periodic from the first
/// of those visits on, so its later hits repeat forever and carry no news.
fn settled_hit_step(hits: &[Hit]) -> usize {
    let cycle_start = |side: fn(&Hit) -> Option<usize>| {
        let mut first_seen = std::collections::HashMap::new();
        for h in hits {
            if let Some(j) = side(h) {
                if let Some(&m) = first_seen.get(&j) {
                    return m;
                }
                first_seen.insert(j, h.step);
            }
        }
        usize::MAX
    };
    let right_cycle = cycle_start(|h| h.right);
    let left_cycle = cycle_start(|h| h.left);
    hits.iter()
        .filter(|h| (h.right.is_some() && h.step < right_cycle) || (h.left.is_some() && h.step < left_cycle))
        .map(|h| h.step)
        .max()
        .unwrap_or(0)
}

/// `d(fⁿ)` for `n = 1..=n_max`, exactly.
pub fn growth_series<S: ExactReal>(f: &Iet<S>, n_max: usize) -> Result<Vec<usize>> {
    if n_max == 0 {
        return Ok(Vec::new());
    }
    Ok(Analysis::run(f, n_max)?.series(n_max, false))
}

pub fn discontinuity_report<S: ExactReal>(f: &Iet<S>, config: &GrowthConfig) -> Result<DiscontinuityReport<S>> {
    config.validate()?;
    Ok(Analysis::run(f, config.horizon)?.report(config.window))
}

pub fn stabilization_time<S: ExactReal>(f: &Iet<S>, config: &GrowthConfig) -> Result<Option<usize>> {
    Ok(discontinuity_report(f, config)?.stabilization_time())
}

/// Decides between bounded and linear growth of `d(fⁿ)`.
pub fn classify_growth<S: ExactReal>(f: &Iet<S>, config: &GrowthConfig) -> Result<GrowthVerdict<S>> {
    config.validate()?;
    let (horizon, window) = (config.horizon, config.window);
    let order = if f.is_rational() {
        f.finite_order(None)?
    } else {
        f.finite_order(Some(horizon))?
    };
    let analysis = Analysis::run(f, horizon)?;
    let report = analysis.report(window);
    let n0 = report.stabilization_time();
    if order.is_some() {
        return Ok(GrowthVerdict {
            kind: GrowthKind::Bounded,
            n0,
            certainty: Certainty::Exact,
            series_checked_to: horizon,
            order,
            report,
        });
    }
    let certainty = Certainty::HorizonStable { window };
    let unsettled = report.nonperiodic().any(|p| p.resolution == Resolution::Unknown);
    let kind = if unsettled {
        GrowthKind::Undetermined
    } else {
        let k = report.nonresolving_fundamental();
        let series = analysis.series(horizon, true);
        let offset = |n: usize| series[n - 1] as i64 - (k * n) as i64;
        let settled = (horizon - window + 1..=horizon).all(|n| offset(n) == offset(horizon));
        match (settled, k) {
            (false, _) => GrowthKind::Undetermined,
            (true, 0) => GrowthKind::Bounded,
            (true, k) => GrowthKind::Linear(k),
        }
    };
    Ok(GrowthVerdict {
        kind,
        n0,
        certainty,
        series_checked_to: horizon,
        order,
        report,
    })
}
