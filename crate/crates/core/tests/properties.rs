//! Property tests for the laws every module is expected to satisfy.

mod common;

use std::cmp::Ordering;
use std::sync::Arc;

use common::{brute_series, q};
use iet_core::growth::{
    classify_growth, discontinuity_report, growth_series, Certainty, GrowthConfig, GrowthKind, OrbitPair,
};
use iet_core::invariants::{cocycle, saf, undistortion_bounds};
use iet_core::scalar::{mod_one, project};
use iet_core::structure::{
    bounded_normal_form, centralizer_factor, components, detect_restricted_rotation, order, NormalForm, Order,
    PnElement,
};
use iet_core::{Basis, ExactReal, Iet, PiLambda, Scalar};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn basis() -> Arc<Basis> {
    Basis::quadratic(&[2, 3]).unwrap()
}

fn ratio() -> impl Strategy<Value = BigRational> {
    (-18i64..=18, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(ratio(), 3).prop_map(|c| basis().scalar(c).unwrap())
}

fn point() -> impl Strategy<Value = Scalar> {
    scalar().prop_map(|s| mod_one(&s).unwrap())
}

fn sorted_distinct(mut pts: Vec<Scalar>) -> Option<Vec<Scalar>> {
    pts.sort_by(|a, b| a.try_cmp(b).unwrap());
    let ok = pts.windows(2).all(|w| w[0].try_cmp(&w[1]).unwrap() == Ordering::Less) && pts.iter().all(|p| !p.is_zero());
    ok.then_some(pts)
}

fn lengths(cuts: &[Scalar]) -> Vec<Scalar> {
    let b = basis();
    let mut prev = b.zero();
    let mut out = Vec::new();
    for c in cuts {
        out.push(c.clone() - prev);
        prev = c.clone();
    }
    out.push(b.one() - prev);
    out
}

fn exchange() -> impl Strategy<Value = Iet> {
    (2usize..=4)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(point(), n - 1),
                Just((1..=n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_filter_map("cuts must be distinct", |(pts, pi)| {
            let cuts = sorted_distinct(pts)?;
            Some(Iet::from_pi_lambda(&PiLambda::new(pi, lengths(&cuts)).unwrap()).unwrap())
        })
}

fn circle_map() -> impl Strategy<Value = Iet> {
    (exchange(), point()).prop_map(|(f, r)| Iet::rotation(&r).unwrap().compose(&f).unwrap())
}

fn rational_map() -> impl Strategy<Value = Iet<BigRational>> {
    (2i64..=10)
        .prop_flat_map(|den| {
            (
                Just(den),
                prop::collection::btree_set(1..den, 0..(den as usize).min(3)),
                0..den,
            )
        })
        .prop_flat_map(|(den, cuts, shift)| {
            let n = cuts.len() + 1;
            (
                Just((den, cuts, shift)),
                Just((1..=n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|((den, cuts, shift), pi)| {
            let mut lambda = Vec::new();
            let mut prev = 0;
            for c in cuts.into_iter().chain(std::iter::once(den)) {
                lambda.push(q(c - prev, den));
                prev = c;
            }
            let f = Iet::from_pi_lambda(&PiLambda::new(pi, lambda).unwrap()).unwrap();
            Iet::rotation(&q(shift, den)).unwrap().compose(&f).unwrap()
        })
}

fn restricted() -> impl Strategy<Value = Iet> {
    prop::collection::vec(point(), 2).prop_filter_map("need 0 < alpha < beta", |pts| {
        let pts = sorted_distinct(pts)?;
        Some(Iet::restricted_rotation(&pts[0], &pts[1]).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar(), k in ratio()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() + b.clone()).scale(&k), a.scale(&k) + b.scale(&k));
    }

    #[test]
    fn comparison_agrees_with_floats(a in scalar(), b in scalar()) {
        let approx = |s: &Scalar| {
            s.coords().iter().zip([1.0, 2f64.sqrt(), 3f64.sqrt()]).map(|(c, g)| c.to_f64().unwrap() * g).sum::<f64>()
        };
        let gap = approx(&a) - approx(&b);
        let ord = a.try_cmp(&b).unwrap();
        prop_assert_eq!(ord.reverse(), b.try_cmp(&a).unwrap());
        if gap.abs() > 1e-9 {
            prop_assert_eq!(ord, gap.partial_cmp(&0.0).unwrap());
        }
    }

    #[test]
    fn reduction_mod_one(a in scalar()) {
        let r = mod_one(&a).unwrap();
        prop_assert!(!r.signum().unwrap().is_lt());
        prop_assert!(r.try_lt(&Scalar::from_ratio(1, 1)).unwrap());
        let diff = a.clone() - r;
        prop_assert!(diff.is_rational());
        prop_assert!(diff.as_rational().unwrap().is_integer());
    }

    #[test]
    fn projection_reconstructs(a in scalar()) {
        let b = basis();
        let mut sum = b.zero();
        for i in 0..b.len() {
            sum = sum + b.generator(i).unwrap().scale(&project(&a, i, b.len()).unwrap());
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn group_axioms(f in circle_map(), g in circle_map(), h in circle_map()) {
        prop_assert_eq!(f.compose(&g).unwrap().compose(&h).unwrap(), f.compose(&g.compose(&h).unwrap()).unwrap());
        prop_assert_eq!(f.compose(&Iet::identity()).unwrap(), f.clone());
        prop_assert!(f.compose(&f.inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn composition_is_pointwise(f in circle_map(), g in circle_map(), xs in prop::collection::vec(point(), 10)) {
        let fg = f.compose(&g).unwrap();
        for x in &xs {
            prop_assert_eq!(fg.evaluate_right(x).unwrap(), f.evaluate_right(&g.evaluate_right(x).unwrap()).unwrap());
            prop_assert_eq!(fg.evaluate_left(x).unwrap(), f.evaluate_left(&g.evaluate_left(x).unwrap()).unwrap());
        }
    }

    #[test]
    fn one_sided_powers(f in circle_map(), n in 1i64..6) {
        let power = f.power(n).unwrap();
        for x in f.cuts().iter().chain(f.translations()) {
            let x = mod_one(x).unwrap();
            let (mut right, mut left) = (x.clone(), x.clone());
            for _ in 0..n {
                right = f.evaluate_right(&right).unwrap();
                left = f.evaluate_left(&left).unwrap();
            }
            prop_assert_eq!(power.evaluate_right(&x).unwrap(), right);
            prop_assert_eq!(power.evaluate_left(&x).unwrap(), left);
        }
    }

    #[test]
    fn discontinuities_grow_at_most_linearly(f in circle_map(), n in 1usize..8) {
        prop_assert!(f.power(n as i64).unwrap().d() <= n * f.d());
    }

    #[test]
    fn rational_maps_have_finite_order(f in rational_map()) {
        let m = f.finite_order(None).unwrap().expect("rational maps have finite order");
        prop_assert!(f.power(m as i64).unwrap().is_identity());
        let den = f.cuts().iter().chain(f.translations()).fold(num_bigint::BigInt::one(), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        });
        let cells = den.to_u64().unwrap();
        let bound: u64 = (1..=cells).fold(1u64, |acc, k| num_integer::Integer::lcm(&acc, &k));
        prop_assert_eq!(bound % m, 0);
    }

    #[test]
    fn series_matches_composition(f in circle_map()) {
        prop_assert_eq!(growth_series(&f, 12).unwrap(), brute_series(&f, 12));
    }

    #[test]
    fn inverse_powers_have_same_count(f in circle_map()) {
        prop_assert_eq!(growth_series(&f.inverse().unwrap(), 12).unwrap(), growth_series(&f, 12).unwrap());
    }

    #[test]
    fn split_pairs_stay_split(f in circle_map(), x in point()) {
        let mut pair = OrbitPair::new(x);
        let mut prev = (pair.is_split(), pair.hit_log.len());
        for _ in 0..40 {
            pair.advance(&f).unwrap();
            let now = (pair.is_split(), pair.hit_log.len());
            if now.1 == prev.1 {
                prop_assert_eq!(now.0, prev.0);
            }
            prev = now;
        }
    }

    #[test]
    fn nonperiodic_discontinuities_come_from_fundamental_ones(f in exchange()) {
        let config = GrowthConfig::new(150, 30).unwrap();
        let report = discontinuity_report(&f, &config).unwrap();
        let mut reached = Vec::new();
        for s in report.fundamental() {
            let mut y = s.point.clone();
            for _ in 0..=config.horizon {
                reached.push(y.clone());
                y = f.evaluate_right(&y).unwrap();
            }
        }
        for s in report.nonperiodic() {
            prop_assert!(reached.contains(&s.point), "{} is not reached", s.point);
        }
    }

    #[test]
    fn scissors_invariant_laws(f in circle_map(), g in circle_map()) {
        prop_assert!(saf(&Iet::<Scalar>::identity()).unwrap().is_zero());
        prop_assert_eq!(saf(&f.compose(&g).unwrap()).unwrap(), saf(&f).unwrap() + saf(&g).unwrap());
        prop_assert_eq!(saf(&f.conjugate(&g).unwrap()).unwrap(), saf(&f).unwrap());
        prop_assert_eq!(saf(&f.psi_t().unwrap()).unwrap(), -saf(&f).unwrap());
    }

    #[test]
    fn cocycle_relation(f in circle_map(), g in circle_map(), p in point(), i in 1usize..3) {
        let lhs = cocycle(&f.compose(&g).unwrap(), i, &p).unwrap();
        let rhs = cocycle(&g, i, &p).unwrap() + cocycle(&f, i, &g.evaluate_right(&p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn short_words_respect_bounds(f in circle_map(), g in circle_map(), word in prop::collection::vec(0usize..4, 1..=6)) {
        let bound = undistortion_bounds(&[f.clone(), g.clone()], &f, 1, Some(1)).unwrap();
        let letters = [f.clone(), f.inverse().unwrap(), g.clone(), g.inverse().unwrap()];
        let mut w = Iet::identity();
        for &l in &word {
            w = w.compose(&letters[l]).unwrap();
        }
        let len = word.len();
        prop_assert!(w.d() <= len * bound.m_disc);
        if let Some(m) = bound.m_coc {
            let limit = m * BigRational::from_integer(len.into());
            prop_assert!(cocycle(&w, bound.index.unwrap(), &basis().zero()).unwrap().abs() <= limit);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn components_partition_the_circle(f in circle_map()) {
        let parts = components(&f, 200).unwrap();
        let mut total = basis().zero();
        let mut union = iet_core::ArcSet::empty();
        for block in parts.blocks() {
            prop_assert_eq!(f.image_of(block).unwrap(), block.clone());
            total = total + block.measure();
            union = union.union(block).unwrap();
        }
        prop_assert!(union.is_full());
        prop_assert_eq!(total, basis().one());
    }

    #[test]
    fn restricted_rotations_are_detected_up_to_rotation(f in restricted(), gamma in point()) {
        let base = detect_restricted_rotation(&f).unwrap().expect("restricted rotation");
        prop_assert!(base.gamma.is_zero());
        let shift = Iet::rotation(&gamma).unwrap();
        let moved = detect_restricted_rotation(&f.conjugate(&shift).unwrap()).unwrap().expect("conjugate");
        prop_assert_eq!(&moved.alpha, &base.alpha);
        prop_assert_eq!(&moved.beta, &base.beta);
        prop_assert_eq!(moved.gamma, gamma);
    }

    #[test]
    fn factorization_is_unique(n in 2usize..=4, bps in prop::collection::vec(point(), 0..3), values in prop::collection::vec(0usize..4, 3)) {
        let (p, e) = centralizer_factor(&Iet::<Scalar>::identity(), n).unwrap();
        prop_assert!(p.is_identity() && e.is_identity());
        let width = q(1, n as i64);
        let mut breakpoints = vec![basis().zero()];
        if let Some(pts) = sorted_distinct(bps) {
            breakpoints.extend(pts.into_iter().map(|x| x.scale(&width)));
        }
        let vals = (0..breakpoints.len()).map(|i| values[i % values.len()]).collect();
        let step = PnElement::new(n, breakpoints, vals).unwrap();
        let g = step.to_iet().unwrap();
        let (p, e) = centralizer_factor(&g, n).unwrap();
        prop_assert_eq!(p, step);
        prop_assert!(e.is_identity());
    }

    #[test]
    fn order_is_consistent_with_growth(f in prop_oneof![circle_map(), rational_map().prop_map(|f| Iet::from_rational_map(&f))]) {
        let config = GrowthConfig::new(300, 50).unwrap();
        match order(&f, config.horizon).unwrap() {
            Order::Finite(_) => {
                let verdict = classify_growth(&f, &config).unwrap();
                prop_assert_eq!((verdict.kind, verdict.certainty), (GrowthKind::Bounded, Certainty::Exact));
            }
            Order::Infinite(_) => {}
        }
        if !saf(&f).unwrap().is_zero() {
            prop_assert_eq!(order(&f, config.horizon).unwrap(), Order::Infinite(Certainty::Exact));
        }
    }

    #[test]
    fn normal_form_rotors_rebuild_the_power(a in point(), b in point(), split in 1i64..4) {
        prop_assume!(!a.is_rational() && !b.is_rational());
        let cut = Scalar::from_ratio(split, 4);
        let rest = Scalar::from_ratio(1, 1) - cut.clone();
        let left = Iet::restricted_rotation(&a.scale(&q(split, 4)), &cut).unwrap();
        let right = Iet::restricted_rotation(&b.scale(&q(4 - split, 4)), &rest)
            .unwrap()
            .conjugate(&Iet::rotation(&cut).unwrap())
            .unwrap();
        let f = left.compose(&right).unwrap();
        match bounded_normal_form(&f, &GrowthConfig::new(300, 50).unwrap()).unwrap() {
            NormalForm::Found { k, rotors } => {
                let mut product = Iet::identity();
                let mut covered = basis().zero();
                let mut union = iet_core::ArcSet::empty();
                for r in &rotors {
                    product = product.compose(&r.to_iet().unwrap()).unwrap();
                    covered = covered + r.rotor.measure();
                    union = union.union(&r.rotor).unwrap();
                }
                prop_assert_eq!(union.measure(), covered);
                prop_assert_eq!(product, f.power(k as i64).unwrap());
            }
            NormalForm::Undetermined { reason, .. } => prop_assert!(false, "undetermined: {}", reason),
        }
    }
}
