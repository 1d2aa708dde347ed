#![allow(dead_code)]

use std::cmp::Ordering;
use std::path::PathBuf;
use std::sync::Arc;

use iet_core::cli::Document;
use iet_core::{Basis, ExactReal, Iet, PiLambda, Scalar};
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus.json")
}

pub fn corpus() -> Document {
    Document::load(&corpus_path(), 256).expect("corpus loads")
}

pub fn corpus_map(name: &str) -> Iet {
    corpus().get(name).expect("known map").clone().expect("valid map")
}

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// `d(fⁿ)` for `n = 1..=n_max` by repeated composition.
pub fn brute_series<S: ExactReal>(f: &Iet<S>, n_max: usize) -> Vec<usize> {
    let mut g = f.clone();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            g = g.compose(f).unwrap();
        }
        out.push(g.d());
    }
    out
}

pub fn bases() -> Vec<Arc<Basis>> {
    vec![
        Basis::rational(),
        Basis::quadratic(&[2]).unwrap(),
        Basis::quadratic(&[2, 3]).unwrap(),
    ]
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn small_rational(&mut self, span: i64, max_den: i64) -> BigRational {
        let den = self.rng.gen_range(1..=max_den);
        q(self.rng.gen_range(-span * den..=span * den), den)
    }

    /// A point of `[0, 1)` with random coordinates in `basis`.
    pub fn unit_point(&mut self, basis: &Arc<Basis>) -> Scalar {
        let mut coords = vec![self.small_rational(1, 60)];
        for _ in 1..basis.len() {
            coords.push(self.small_rational(2, 9));
        }
        iet_core::scalar::mod_one(&basis.scalar(coords).unwrap()).unwrap()
    }

    /// `k` distinct sorted points of `(0, 1)`.
    pub fn interior_points(&mut self, basis: &Arc<Basis>, k: usize) -> Vec<Scalar> {
        loop {
            let mut pts: Vec<Scalar> = (0..k).map(|_| self.unit_point(basis)).collect();
            pts.sort_by(|a, b| a.try_cmp(b).unwrap());
            let distinct = pts.windows(2).all(|w| w[0].try_cmp(&w[1]).unwrap() == Ordering::Less);
            if distinct && pts.iter().all(|p| !p.is_zero()) {
                return pts;
            }
        }
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut pi: Vec<usize> = (1..=n).collect();
        pi.shuffle(&mut self.rng);
        pi
    }

    /// An exchange of `n` intervals with random combinatorics.
    pub fn exchange(&mut self, basis: &Arc<Basis>, n: usize) -> Iet {
        let pts = self.interior_points(basis, n - 1);
        let mut lambda = Vec::with_capacity(n);
        let mut prev = basis.zero();
        for p in pts {
            lambda.push(p.clone() - prev);
            prev = p;
        }
        lambda.push(basis.one() - prev);
        let pi = self.permutation(n);
        Iet::from_pi_lambda(&PiLambda::new(pi, lambda).unwrap()).unwrap()
    }

    pub fn rotation(&mut self, basis: &Arc<Basis>) -> Iet {
        Iet::rotation(&self.unit_point(basis)).unwrap()
    }

    /// A general circle exchange: an interval exchange followed by a rotation.
    pub fn circle_map(&mut self, basis: &Arc<Basis>) -> Iet {
        let n = self.rng.gen_range(2..=5);
        let f = self.exchange(basis, n);
        self.rotation(basis).compose(&f).unwrap()
    }

    /// Restricted rotation with `0 < alpha < beta < 1`.
    pub fn restricted_rotation(&mut self, basis: &Arc<Basis>) -> Iet {
        let pts = self.interior_points(basis, 2);
        Iet::restricted_rotation(&pts[0], &pts[1]).unwrap()
    }

    pub fn rational_map(&mut self) -> Iet<BigRational> {
        let den = self.rng.gen_range(2..=12i64);
        let n = self.rng.gen_range(2..=4usize).min(den as usize);
        let mut cuts: Vec<i64> = (1..den).collect();
        cuts.shuffle(&mut self.rng);
        let mut cuts: Vec<i64> = cuts[..n - 1].to_vec();
        cuts.sort_unstable();
        let mut lambda = Vec::with_capacity(n);
        let mut prev = 0;
        for c in cuts.into_iter().chain(std::iter::once(den)) {
            lambda.push(q(c - prev, den));
            prev = c;
        }
        let pi = self.permutation(n);
        let f = Iet::from_pi_lambda(&PiLambda::new(pi, lambda).unwrap()).unwrap();
        let shift = q(self.rng.gen_range(0..6), 6);
        Iet::rotation(&shift).unwrap().compose(&f).unwrap()
    }
}
