#![allow(dead_code)]

//! Seeded random corpora and an exact polynomial toolkit shared by the
//! integration suites.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use profpush::{
    profile_from_series, q, FiberConfiguration, FiberPoint, MorphismProfile, MultiRadius, Pwm,
    Rational, SeriesValuations,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n/d` with `d ≤ 12` and value at most `max`.
pub fn rational(rng: &mut ChaCha8Rng, max: i64) -> Rational {
    let d = rng.gen_range(1..=12);
    q(rng.gen_range(0..=max * d), d)
}

pub fn positive_rational(rng: &mut ChaCha8Rng, max: i64) -> Rational {
    let d = rng.gen_range(1..=12);
    q(rng.gen_range(1..=max * d), d)
}

pub fn multiradius(rng: &mut ChaCha8Rng, rank: usize) -> MultiRadius {
    let vs = (0..rank)
        .map(|_| {
            if rng.gen_bool(0.25) {
                q(0, 1)
            } else {
                rational(rng, 4)
            }
        })
        .collect();
    MultiRadius::from_multiset(vs).unwrap()
}

/// Series with at most 6 terms, indices in `1..=8`, always containing `T`.
pub fn series(rng: &mut ChaCha8Rng) -> SeriesValuations {
    let mut indices: Vec<u32> = (2..=8).collect();
    indices.shuffle(rng);
    let extra = rng.gen_range(0..=5);
    let mut idx: Vec<u32> = indices[..extra].to_vec();
    idx.push(1);
    let mut terms: Vec<(u32, Rational)> = idx
        .iter()
        .map(|i| (*i, positive_rational(rng, 3)))
        .collect();
    let zero_at = rng.gen_range(0..terms.len());
    terms[zero_at].1 = q(0, 1);
    SeriesValuations::new(terms).unwrap()
}

/// An étale profile of degree ≤ 8 read off a random series.
pub fn etale_profile(rng: &mut ChaCha8Rng) -> MorphismProfile {
    loop {
        let pwm = profile_from_series(&series(rng));
        if let Ok(mp) = MorphismProfile::new(pwm, true) {
            if mp.degree() <= 8 {
                return mp;
            }
        }
    }
}

pub fn fiber(rng: &mut ChaCha8Rng) -> FiberConfiguration {
    let rank = rng.gen_range(1..=4);
    let n_points = rng.gen_range(1..=3);
    let points = (0..n_points)
        .map(|k| {
            FiberPoint::new(
                format!("y{k}"),
                etale_profile(rng),
                rng.gen_range(1..=3),
                multiradius(rng, rank),
            )
            .unwrap()
        })
        .collect();
    FiberConfiguration::new(rank, points).unwrap()
}

pub fn single(profile: MorphismProfile, sep: u64, mr: MultiRadius) -> FiberConfiguration {
    FiberConfiguration::new(
        mr.rank(),
        vec![FiberPoint::new("y", profile, sep, mr).unwrap()],
    )
    .unwrap()
}

/// PWM with positive slopes, for composition and inversion laws.
pub fn invertible_pwm(rng: &mut ChaCha8Rng) -> Pwm {
    let n = rng.gen_range(0..=4);
    let mut breaks: Vec<Rational> = (0..n).map(|_| positive_rational(rng, 5)).collect();
    breaks.sort();
    breaks.dedup();
    let slopes = (0..=breaks.len())
        .map(|_| positive_rational(rng, 4))
        .collect();
    Pwm::new(breaks, slopes).unwrap()
}

/// PWM with nonnegative slopes, for the product laws.
pub fn nonnegative_pwm(rng: &mut ChaCha8Rng) -> Pwm {
    let n = rng.gen_range(0..=4);
    let mut breaks: Vec<Rational> = (0..n).map(|_| positive_rational(rng, 5)).collect();
    breaks.sort();
    breaks.dedup();
    let slopes = (0..=breaks.len()).map(|_| rational(rng, 3)).collect();
    Pwm::new(breaks, slopes).unwrap()
}

/// Polynomial over Q; `coeffs[i]` is the coefficient of `T^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<Rational>,
}

impl Poly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly {
            coeffs: coeffs.iter().map(|c| q(*c, 1)).collect(),
        }
        .trim()
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                a + b
            })
            .collect();
        Poly { coeffs }.trim()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly { coeffs: vec![] };
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }.trim()
    }

    /// `self ∘ inner`, by Horner's rule.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly { coeffs: vec![] };
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly {
                coeffs: vec![c.clone()],
            });
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * q(i as i64, 1))
            .collect();
        Poly { coeffs }.trim()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// Valuations of the nonzero coefficients of a polynomial with no constant term.
    pub fn series(&self, p: u64) -> SeriesValuations {
        assert!(self.coeffs.first().is_none_or(Zero::is_zero));
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, q(valuation(c, p), 1)))
            .collect();
        SeriesValuations::new(terms).unwrap()
    }
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while (n.clone() % &pb).is_zero() {
        n /= &pb;
        k += 1;
    }
    k
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &Rational, p: u64) -> i64 {
    assert!(!x.is_zero());
    int_valuation(x.numer(), p) - int_valuation(x.denom(), p)
}

pub fn p_power(p: u64, k: i64) -> Rational {
    let pb = Rational::from_integer(BigInt::from(p));
    let mut out = Rational::one();
    for _ in 0..k.abs() {
        out = if k > 0 { out * &pb } else { out / &pb };
    }
    out
}
