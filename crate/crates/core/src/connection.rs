//! Differential-equation-side data: multiradii, convergence polygons,
//! equation profiles, direction models and profile families.

use std::fmt;

use crate::error::{Error, Result};
use crate::morphism::{AnnulusDirection, MorphismProfile};
use crate::pwm::PiecewiseMonomial;
use crate::scalar::{Germ, Scalar};

/// Log-values `v_1 ≥ … ≥ v_r ≥ 0` of the radii `R_1 ≤ … ≤ R_r ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiRadius<T> {
    logvalues: Vec<T>,
}

impl<T: Scalar> MultiRadius<T> {
    pub fn new(logvalues: Vec<T>) -> Result<Self> {
        if logvalues.is_empty() {
            return Err(Error::InvalidMultiRadius("rank must be positive".into()));
        }
        if let Some(v) = logvalues.iter().find(|v| **v < T::zero()) {
            return Err(Error::InvalidMultiRadius(format!(
                "log-value {v} is negative (radius above 1)"
            )));
        }
        if let Some(w) = logvalues.windows(2).find(|w| w[0] < w[1]) {
            return Err(Error::InvalidMultiRadius(format!(
                "log-values must be nonincreasing, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(MultiRadius { logvalues })
    }

    /// Sorts an arbitrary multiset of log-values.
    pub fn from_multiset(mut logvalues: Vec<T>) -> Result<Self> {
        logvalues.sort_by(|a, b| b.cmp(a));
        Self::new(logvalues)
    }

    /// `r` copies of radius 1.
    pub fn trivial(rank: usize) -> Result<Self> {
        Self::new(vec![T::zero(); rank])
    }

    pub fn logvalues(&self) -> &[T] {
        &self.logvalues
    }

    pub fn rank(&self) -> usize {
        self.logvalues.len()
    }

    /// `Σ v_i`, in log_p units.
    pub fn height(&self) -> T {
        self.logvalues
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// `#{i : v_i ≤ w}`, i.e. the number of radii at least the radius of `w`.
    pub fn count_at_least(&self, w: &T) -> usize {
        self.logvalues.iter().filter(|v| *v <= w).count()
    }

    pub fn into_logvalues(self) -> Vec<T> {
        self.logvalues
    }
}

impl<T: Scalar> fmt::Display for MultiRadius<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.logvalues.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Concatenation of families, re-sorted.
pub fn star<T: Scalar>(families: &[MultiRadius<T>]) -> Result<MultiRadius<T>> {
    let all: Vec<T> = families
        .iter()
        .flat_map(|mr| mr.logvalues.iter().cloned())
        .collect();
    MultiRadius::from_multiset(all)
}

/// A profile whose radius-side left degree at `s` counts the radii `≥ s`.
///
/// Log-side slopes are nonnegative integers increasing in `v`; the last one
/// is the rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquationProfile<T> {
    pwm: PiecewiseMonomial<T>,
    rank: usize,
}

impl<T: Scalar> EquationProfile<T> {
    pub fn new(pwm: PiecewiseMonomial<T>) -> Result<Self> {
        let mut counts = Vec::with_capacity(pwm.slopes().len());
        for s in pwm.slopes() {
            match s.to_int() {
                Some(n) if n >= 0 => counts.push(n),
                _ => {
                    return Err(Error::InvalidEquationProfile(format!(
                        "slope {s} is not a nonnegative integer"
                    )))
                }
            }
        }
        if let Some(w) = counts.windows(2).find(|w| w[0] > w[1]) {
            return Err(Error::InvalidEquationProfile(format!(
                "slopes must increase towards radius 0, found {} then {}",
                w[0], w[1]
            )));
        }
        let rank = *counts.last().expect("at least one segment") as usize;
        if rank == 0 {
            return Err(Error::InvalidEquationProfile(
                "rank must be positive".into(),
            ));
        }
        Ok(EquationProfile { pwm, rank })
    }

    pub fn pwm(&self) -> &PiecewiseMonomial<T> {
        &self.pwm
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn into_pwm(self) -> PiecewiseMonomial<T> {
        self.pwm
    }
}

impl<T: Scalar> fmt::Display for EquationProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.pwm.fmt(f)
    }
}

pub fn equation_profile<T: Scalar>(mr: &MultiRadius<T>) -> EquationProfile<T> {
    let mut distinct: Vec<T> = mr.logvalues.iter().rev().cloned().collect();
    distinct.dedup();
    let breaks: Vec<T> = distinct.into_iter().filter(|v| *v > T::zero()).collect();
    let mut slopes = vec![T::from_int(mr.count_at_least(&T::zero()) as i64)];
    slopes.extend(
        breaks
            .iter()
            .map(|b| T::from_int(mr.count_at_least(b) as i64)),
    );
    let pwm = PiecewiseMonomial::new(breaks, slopes).expect("breaks are distinct and positive");
    EquationProfile::new(pwm).expect("slopes count radii")
}

pub fn multiradius_from_profile<T: Scalar>(ep: &EquationProfile<T>) -> MultiRadius<T> {
    let pwm = ep.pwm();
    let count = |s: &T| s.to_int().expect("validated") as usize;
    let slopes = pwm.slopes();
    let mut logvalues = Vec::with_capacity(ep.rank());
    for (k, b) in pwm.breaks().iter().enumerate().rev() {
        let jump = count(&slopes[k + 1]) - count(&slopes[k]);
        logvalues.extend(std::iter::repeat_n(b.clone(), jump));
    }
    logvalues.extend(std::iter::repeat_n(T::zero(), count(&slopes[0])));
    MultiRadius::new(logvalues).expect("nonincreasing by construction")
}

/// Vertices `(i, h_i)` with `h_i = Σ_{j≤i} v_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergencePolygon<T> {
    vertices: Vec<(usize, T)>,
}

impl<T: Scalar> ConvergencePolygon<T> {
    pub fn vertices(&self) -> &[(usize, T)] {
        &self.vertices
    }

    pub fn height(&self) -> &T {
        &self.vertices.last().expect("origin is always present").1
    }

    pub fn is_concave(&self) -> bool {
        let incs: Vec<T> = self
            .vertices
            .windows(2)
            .map(|w| w[1].1.clone() - w[0].1.clone())
            .collect();
        incs.windows(2).all(|w| w[0] >= w[1])
    }
}

pub fn polygon<T: Scalar>(mr: &MultiRadius<T>) -> ConvergencePolygon<T> {
    let mut vertices = vec![(0, T::zero())];
    let mut h = T::zero();
    for (i, v) in mr.logvalues.iter().enumerate() {
        h = h + v.clone();
        vertices.push((i + 1, h.clone()));
    }
    ConvergencePolygon { vertices }
}

/// Germ of the radii along a branch: `v_i(u) = coeff_i + m_i·u` for small
/// `u = -log_p ρ > 0`.
///
/// Slopes are integers for a connection on the curve itself; after a
/// pushforward, reparametrized by `u' = d·u`, single slopes may be
/// fractional while their sum stays integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionModel<T> {
    components: Vec<(T, T)>,
}

impl<T: Scalar> DirectionModel<T> {
    pub fn new(components: Vec<(T, T)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDirection(
                "direction model has no radii".into(),
            ));
        }
        if let Some((c, m)) = components
            .iter()
            .find(|(c, m)| *c < T::zero() || (c.is_zero() && *m < T::zero()))
        {
            return Err(Error::InvalidDirection(format!(
                "component ({c}, {m}) leaves the unit disc near the point"
            )));
        }
        Ok(DirectionModel { components })
    }

    /// Integer slopes.
    pub fn from_ints(components: Vec<(T, i64)>) -> Result<Self> {
        Self::new(
            components
                .into_iter()
                .map(|(c, m)| (c, T::from_int(m)))
                .collect(),
        )
    }

    pub fn components(&self) -> &[(T, T)] {
        &self.components
    }

    /// Radii at a concrete parameter `u`.
    pub fn multiradius_at(&self, u: &T) -> Result<MultiRadius<T>> {
        MultiRadius::from_multiset(
            self.components
                .iter()
                .map(|(c, m)| c.clone() + m.clone() * u.clone())
                .collect(),
        )
    }

    /// The radii as germs at `u = 0⁺`.
    pub fn germ(&self) -> MultiRadius<Germ<T>> {
        MultiRadius::from_multiset(
            self.components
                .iter()
                .map(|(c, m)| Germ::new(c.clone(), m.clone()))
                .collect(),
        )
        .expect("validated on construction")
    }
}

/// `Σ m_i`: the slope of the height in the branch parameter.
pub fn irregularity<T: Scalar>(dm: &DirectionModel<T>) -> T {
    dm.components
        .iter()
        .fold(T::zero(), |acc, (_, m)| acc + m.clone())
}

pub fn laplacian(irrs: &[i64]) -> i64 {
    irrs.iter().sum()
}

/// Profiles whose breaks move affinely, `b_j(u) = β_j + e_j·u`, with fixed
/// slopes, over `lo ≤ u ≤ hi` (`hi = None` for unbounded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileFamily<T> {
    lo: T,
    hi: Option<T>,
    breaks: Vec<(T, T)>,
    slopes: Vec<T>,
    etale: bool,
}

impl<T: Scalar> ProfileFamily<T> {
    pub fn new(
        lo: T,
        hi: Option<T>,
        breaks: Vec<(T, T)>,
        slopes: Vec<T>,
        etale: bool,
    ) -> Result<Self> {
        if lo < T::zero() || hi.as_ref().is_some_and(|h| *h < lo) {
            return Err(Error::InvalidArgument(format!(
                "bad parameter interval [{lo}, {}]",
                hi.as_ref().map_or("inf".to_string(), ToString::to_string)
            )));
        }
        if breaks.len() + 1 != slopes.len() {
            return Err(Error::InvalidArgument(format!(
                "{} breaks need {} slopes, got {}",
                breaks.len(),
                breaks.len() + 1,
                slopes.len()
            )));
        }
        Ok(ProfileFamily {
            lo,
            hi,
            breaks,
            slopes,
            etale,
        })
    }

    pub fn interval(&self) -> (&T, Option<&T>) {
        (&self.lo, self.hi.as_ref())
    }

    pub fn breaks(&self) -> &[(T, T)] {
        &self.breaks
    }

    pub fn slopes(&self) -> &[T] {
        &self.slopes
    }

    pub fn is_etale(&self) -> bool {
        self.etale
    }

    fn contains(&self, u: &T) -> bool {
        *u >= self.lo && self.hi.as_ref().is_none_or(|h| u <= h)
    }

    fn build<S: Scalar>(&self, u: &S, lift: impl Fn(&T) -> S) -> Result<MorphismProfile<S>> {
        let breaks = self
            .breaks
            .iter()
            .map(|(b, e)| lift(b) + lift(e) * u.clone())
            .collect();
        let slopes = self.slopes.iter().map(&lift).collect();
        let out = |e: Error| Error::OutOfRegime(format!("at u = {u}: {e}"));
        let pwm = PiecewiseMonomial::new(breaks, slopes).map_err(out)?;
        MorphismProfile::new(pwm, self.etale).map_err(out)
    }

    /// The germ of the family at `u = lo⁺`.
    pub fn germ(&self) -> Result<MorphismProfile<Germ<T>>> {
        if self.hi.as_ref() == Some(&self.lo) {
            return Err(Error::OutOfRegime(
                "family interval is a single point".into(),
            ));
        }
        let u = Germ::constant(self.lo.clone()) + Germ::epsilon();
        self.build(&u, |x| Germ::constant(x.clone()))
    }
}

pub fn instantiate_family<T: Scalar>(pf: &ProfileFamily<T>, u: &T) -> Result<MorphismProfile<T>> {
    if !pf.contains(u) {
        return Err(Error::OutOfRegime(format!(
            "u = {u} outside [{}, {}]",
            pf.lo,
            pf.hi
                .as_ref()
                .map_or("inf".to_string(), ToString::to_string)
        )));
    }
    pf.build(u, T::clone)
}

/// Frobenius at Gauss points `η_ρ`: the profile does not depend on `ρ`.
pub fn constant_frobenius_family<T: Scalar>(p: u64) -> Result<ProfileFamily<T>> {
    let mp = crate::morphism::frobenius_profile::<T>(p)?;
    let pwm = mp.pwm();
    ProfileFamily::new(
        T::zero(),
        None,
        pwm.breaks()
            .iter()
            .map(|b| (b.clone(), T::zero()))
            .collect(),
        pwm.slopes().to_vec(),
        true,
    )
}

/// `(x + a)^p - a^p` for `|a||p|^{1/(p-1)} < ρ ≤ |a|`, i.e.
/// `val_a ≤ u ≤ val_a + 1/(p-1)`; the right endpoint itself is out of regime.
pub fn off_centered_frobenius_family<T: Scalar>(p: u64, val_a: T) -> Result<ProfileFamily<T>> {
    crate::morphism::frobenius_profile::<T>(p)?;
    let pt = T::from_int(p as i64);
    let width = T::one() / (pt.clone() - T::one());
    ProfileFamily::new(
        val_a.clone(),
        Some(val_a.clone() + width.clone()),
        vec![(width + val_a, -T::one())],
        vec![pt, T::one()],
        true,
    )
}

/// Degree `p` residually inseparable morphism along a branch with different
/// valuation `val_a + ν·u`.
pub fn inseparable_family<T: Scalar>(
    p: u64,
    dir: &AnnulusDirection<T>,
) -> Result<ProfileFamily<T>> {
    crate::morphism::frobenius_profile::<T>(p)?;
    let pt = T::from_int(p as i64);
    let pm1 = pt.clone() - T::one();
    ProfileFamily::new(
        T::zero(),
        None,
        vec![(
            dir.val_a().clone() / pm1.clone(),
            T::from_int(dir.nu()) / pm1,
        )],
        vec![pt, T::one()],
        true,
    )
}
