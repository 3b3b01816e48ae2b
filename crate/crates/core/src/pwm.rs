//! Log-values and the algebra of piecewise monomial maps of the unit interval.
//!
//! A radius `r ∈ (0, 1]` is stored as `v = -log_p r ≥ 0`, with `r = 0` as
//! [`LogValue::Infinite`]. In these coordinates a piecewise `|k*|`-monomial map
//! `[0,1] → [0,1]` fixing 1 becomes a continuous nondecreasing piecewise affine
//! map `g: [0,∞) → [0,∞)` with `g(0) = 0`, which is what
//! [`PiecewiseMonomial`] represents. Radius-side degrees are log-side slopes.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `-log_p` of a radius in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogValue<T> {
    Finite(T),
    /// Radius zero.
    Infinite,
}

impl<T: Scalar> LogValue<T> {
    pub fn finite(v: T) -> Result<Self> {
        if v < T::zero() {
            return Err(Error::InvalidArgument(format!("negative log-value {v}")));
        }
        Ok(LogValue::Finite(v))
    }

    /// Radius 1.
    pub fn one_radius() -> Self {
        LogValue::Finite(T::zero())
    }

    pub fn as_finite(&self) -> Option<&T> {
        match self {
            LogValue::Finite(v) => Some(v),
            LogValue::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LogValue::Infinite)
    }
}

impl<T: fmt::Display> fmt::Display for LogValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValue::Finite(v) => write!(f, "{v}"),
            LogValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Which one-sided degree to read at a radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `deg⁻`: the degree on `(s - ε, s)`, i.e. towards larger log-values.
    Left,
    /// `deg⁺`: the degree on `(s, s + ε)`, i.e. towards smaller log-values.
    Right,
}

/// Continuous nondecreasing piecewise affine `g: [0,∞) → [0,∞)` with `g(0) = 0`.
///
/// `slopes[0]` applies on `[0, breaks[0]]`, `slopes[k]` on
/// `[breaks[k-1], breaks[k]]` and the last slope on `[breaks[m-1], ∞)`.
/// Values are always canonical: breaks are strictly increasing and positive,
/// and adjacent slopes differ, so derived equality is pointwise equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseMonomial<T> {
    breaks: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Scalar> PiecewiseMonomial<T> {
    pub fn new(breaks: Vec<T>, slopes: Vec<T>) -> Result<Self> {
        if slopes.len() != breaks.len() + 1 {
            return Err(Error::InvalidPwm(format!(
                "{} breaks need {} slopes, got {}",
                breaks.len(),
                breaks.len() + 1,
                slopes.len()
            )));
        }
        if let Some(b) = breaks.first() {
            if *b <= T::zero() {
                return Err(Error::InvalidPwm(format!("break {b} is not positive")));
            }
        }
        if let Some(w) = breaks.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPwm(format!(
                "breaks not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        if let Some(s) = slopes.iter().find(|s| **s < T::zero()) {
            return Err(Error::InvalidPwm(format!("negative slope {s}")));
        }
        Ok(Self::canonical(breaks, slopes))
    }

    /// Drops breaks between equal slopes. Inputs must already be valid.
    fn canonical(breaks: Vec<T>, slopes: Vec<T>) -> Self {
        let mut out_breaks = Vec::with_capacity(breaks.len());
        let mut out_slopes = Vec::with_capacity(slopes.len());
        let mut slopes = slopes.into_iter();
        out_slopes.push(slopes.next().expect("at least one slope"));
        for (b, s) in breaks.into_iter().zip(slopes) {
            if out_slopes.last() != Some(&s) {
                out_breaks.push(b);
                out_slopes.push(s);
            }
        }
        PiecewiseMonomial {
            breaks: out_breaks,
            slopes: out_slopes,
        }
    }

    /// `v ↦ slope·v` (radius side `s ↦ s^slope`).
    pub fn monomial(slope: T) -> Result<Self> {
        Self::new(Vec::new(), vec![slope])
    }

    pub fn identity() -> Self {
        PiecewiseMonomial {
            breaks: Vec::new(),
            slopes: vec![T::one()],
        }
    }

    /// The constant map to radius 1; unit for [`mul`](Self::mul).
    pub fn zero() -> Self {
        PiecewiseMonomial {
            breaks: Vec::new(),
            slopes: vec![T::zero()],
        }
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn slopes(&self) -> &[T] {
        &self.slopes
    }

    pub fn first_slope(&self) -> &T {
        &self.slopes[0]
    }

    pub fn last_slope(&self) -> &T {
        self.slopes.last().expect("at least one slope")
    }

    pub fn is_identity(&self) -> bool {
        self.breaks.is_empty() && self.slopes[0].is_one()
    }

    /// Index of the segment containing `v` from the right: the number of
    /// breaks `≤ v`.
    fn segment_right(&self, v: &T) -> usize {
        self.breaks.partition_point(|b| b <= v)
    }

    /// The number of breaks `< v`.
    fn segment_left(&self, v: &T) -> usize {
        self.breaks.partition_point(|b| b < v)
    }

    /// `g(b_k)` for every break, in order.
    pub fn break_values(&self) -> Vec<T> {
        let mut acc = T::zero();
        let mut prev = T::zero();
        self.breaks
            .iter()
            .zip(&self.slopes)
            .map(|(b, s)| {
                acc = acc.clone() + s.clone() * (b.clone() - prev.clone());
                prev = b.clone();
                acc.clone()
            })
            .collect()
    }

    /// `g(v)` for a finite `v ≥ 0`.
    pub fn eval_finite(&self, v: &T) -> T {
        let k = self.segment_left(v);
        let (start, base) = if k == 0 {
            (T::zero(), T::zero())
        } else {
            let values = self.break_values();
            (self.breaks[k - 1].clone(), values[k - 1].clone())
        };
        base + self.slopes[k].clone() * (v.clone() - start)
    }

    /// `g(v)`; at radius zero this is the limit, infinite unless the last
    /// segment is flat.
    pub fn eval(&self, v: &LogValue<T>) -> LogValue<T> {
        match v {
            LogValue::Finite(x) => LogValue::Finite(self.eval_finite(x)),
            LogValue::Infinite if self.last_slope().is_zero() => {
                LogValue::Finite(self.break_values().pop().unwrap_or_else(T::zero))
            }
            LogValue::Infinite => LogValue::Infinite,
        }
    }

    /// Slope of `g` on `(v, v + ε)`.
    pub fn slope_after(&self, v: &T) -> &T {
        &self.slopes[self.segment_right(v)]
    }

    /// Slope of `g` on `(v - ε, v)`; the first slope at `v = 0`.
    pub fn slope_before(&self, v: &T) -> &T {
        &self.slopes[self.segment_left(v)]
    }

    /// Radius-side one-sided degree at the radius with log-value `v`.
    ///
    /// Increasing radius means decreasing log-value, so the radius-side left
    /// degree is the log-side slope just above `v` and vice versa. At radius 1
    /// the right degree falls back to the first slope.
    pub fn degree_at(&self, v: &T, side: Side) -> T {
        match side {
            Side::Left => self.slope_after(v).clone(),
            Side::Right => self.slope_before(v).clone(),
        }
    }

    /// `min { x ≥ 0 : g(x) ≥ y }`, if `g` reaches `y`.
    pub fn preimage_start(&self, y: &T) -> Option<T> {
        if *y <= T::zero() {
            return Some(T::zero());
        }
        let mut start = T::zero();
        let mut value = T::zero();
        for (k, slope) in self.slopes.iter().enumerate() {
            let end = self.breaks.get(k);
            if !slope.is_zero() {
                let x = start.clone() + (y.clone() - value.clone()) / slope.clone();
                match end {
                    Some(e) if x > *e => {}
                    _ => return Some(x),
                }
            }
            if let Some(e) = end {
                value = value + slope.clone() * (e.clone() - start);
                start = e.clone();
            }
        }
        None
    }

    /// Builds the canonical map with breaks among `points` whose slope on each
    /// open segment is `slope_at(sample)` for an interior sample point.
    fn from_segments<F>(points: BTreeSet<T>, slope_at: F) -> Self
    where
        F: Fn(&T) -> T,
    {
        let points: Vec<T> = points.into_iter().filter(|p| *p > T::zero()).collect();
        let two = T::from_int(2);
        let mut samples = Vec::with_capacity(points.len() + 1);
        let mut prev = T::zero();
        for p in &points {
            samples.push((prev.clone() + p.clone()) / two.clone());
            prev = p.clone();
        }
        samples.push(prev + T::one());
        let slopes = samples.iter().map(slope_at).collect();
        Self::canonical(points, slopes)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut points: BTreeSet<T> = inner.breaks.iter().cloned().collect();
        points.extend(self.breaks.iter().filter_map(|b| inner.preimage_start(b)));
        Self::from_segments(points, |x| {
            self.slope_after(&inner.eval_finite(x)).clone() * inner.slope_after(x).clone()
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        if let Some(k) = self.slopes.iter().position(|s| s.is_zero()) {
            return Err(Error::NotInvertible(k));
        }
        let slopes = self.slopes.iter().map(|s| T::one() / s.clone()).collect();
        Ok(Self::canonical(self.break_values(), slopes))
    }

    /// Pointwise product on the radius side, i.e. pointwise sum of `g`.
    pub fn mul(&self, other: &Self) -> Self {
        let points: BTreeSet<T> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        Self::from_segments(points, |x| {
            self.slope_after(x).clone() + other.slope_after(x).clone()
        })
    }

    /// `n`-th power on the radius side; `pow(0)` is [`zero`](Self::zero).
    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let n = T::from_int(i64::from(n));
        let slopes = self.slopes.iter().map(|s| s.clone() * n.clone()).collect();
        Self::canonical(self.breaks.clone(), slopes)
    }
}

impl<T: fmt::Display> fmt::Display for PiecewiseMonomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{breaks:[")?;
        write_list(f, &self.breaks)?;
        f.write_str("]; slopes:[")?;
        write_list(f, &self.slopes)?;
        f.write_str("]}")
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Valuations of the coefficients of a disc morphism `T ↦ Σ_{i≥1} a_i T^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesValuations<T> {
    terms: Vec<(u32, T)>,
}

impl<T: Scalar> SeriesValuations<T> {
    /// Terms are `(index, -log_p |a_index|)`; zero coefficients are omitted.
    pub fn new(mut terms: Vec<(u32, T)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSeries("no terms".into()));
        }
        terms.sort_by_key(|(i, _)| *i);
        if terms[0].0 == 0 {
            return Err(Error::InvalidSeries("index 0 term present".into()));
        }
        if let Some(w) = terms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidSeries(format!("duplicate index {}", w[0].0)));
        }
        if let Some((i, v)) = terms.iter().find(|(_, v)| *v < T::zero()) {
            return Err(Error::InvalidSeries(format!(
                "term {i} has negative valuation {v}"
            )));
        }
        let min = terms.iter().map(|(_, v)| v).min().expect("nonempty");
        if !min.is_zero() {
            return Err(Error::InvalidSeries(format!(
                "minimal valuation is {min}, so the image is not the unit disc"
            )));
        }
        Ok(SeriesValuations { terms })
    }

    pub fn terms(&self) -> &[(u32, T)] {
        &self.terms
    }
}

/// Valuation polygon of a disc morphism: `g(v) = min_i (i·v + val(a_i))`.
///
/// Walks the lower envelope of the lines from `v = 0` to the right, at each
/// step jumping to the line of smaller index that crosses the active one
/// first (ties go to the smallest index).
pub fn profile_from_series<T: Scalar>(series: &SeriesValuations<T>) -> PiecewiseMonomial<T> {
    let lines: Vec<(T, T)> = series
        .terms
        .iter()
        .map(|(i, val)| (T::from_int(i64::from(*i)), val.clone()))
        .collect();
    // at v = 0 the active line has valuation 0 and, among those, the least index
    let mut active = lines
        .iter()
        .filter(|(_, val)| val.is_zero())
        .min_by(|a, b| a.0.cmp(&b.0))
        .cloned()
        .expect("some term has valuation zero");
    let mut breaks = Vec::new();
    let mut slopes = vec![active.0.clone()];
    loop {
        let next = lines
            .iter()
            .filter(|(i, _)| *i < active.0)
            .map(|(i, val)| {
                let cross = (val.clone() - active.1.clone()) / (active.0.clone() - i.clone());
                (cross, i.clone(), val.clone())
            })
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let Some((cross, i, val)) = next else { break };
        breaks.push(cross);
        slopes.push(i.clone());
        active = (i, val);
    }
    PiecewiseMonomial::canonical(breaks, slopes)
}
