//! Exact ordered fields used as the coordinate type of log-values.
//!
//! Every engine in this crate is generic over [`Scalar`]. The crate root fixes
//! the default to [`num_rational::BigRational`]; [`Ratio<i64>`] is available for
//! small inputs, and [`Germ`] adjoins a positive infinitesimal so that germs of
//! affine families at a branch endpoint can be pushed through the same code.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

/// An exact, totally ordered field.
pub trait Scalar:
    Clone
    + Ord
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_int(n: i64) -> Self;

    /// The value as an integer, if it is one.
    fn to_int(&self) -> Option<i64>;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_int(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

impl Scalar for Ratio<i64> {
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn to_int(&self) -> Option<i64> {
        self.is_integer().then(|| *self.numer())
    }
}

/// `value + rate·ε` for a positive infinitesimal `ε`, truncated at first order.
///
/// Ordering is lexicographic, so comparisons decide what happens for all
/// sufficiently small positive parameters. Products and quotients drop the
/// `ε²` term; they are exact whenever one factor (the divisor, for quotients)
/// is a standard number, which is the only way the engines use them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Germ<T> {
    pub value: T,
    pub rate: T,
}

impl<T: Scalar> Germ<T> {
    pub fn new(value: T, rate: T) -> Self {
        Germ { value, rate }
    }

    pub fn constant(value: T) -> Self {
        Germ {
            value,
            rate: T::zero(),
        }
    }

    /// The infinitesimal itself.
    pub fn epsilon() -> Self {
        Germ {
            value: T::zero(),
            rate: T::one(),
        }
    }
}

impl<T: Ord> PartialOrd for Germ<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord> Ord for Germ<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| self.rate.cmp(&other.rate))
    }
}

impl<T: Scalar> Display for Germ<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rate.is_zero() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{}{}u", self.value, DisplaySigned(&self.rate))
        }
    }
}

struct DisplaySigned<'a, T>(&'a T);

impl<T: Scalar> Display for DisplaySigned<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0 < T::zero() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "+{}", self.0)
        }
    }
}

impl<T: Scalar> Add for Germ<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Germ::new(self.value + rhs.value, self.rate + rhs.rate)
    }
}

impl<T: Scalar> Sub for Germ<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Germ::new(self.value - rhs.value, self.rate - rhs.rate)
    }
}

impl<T: Scalar> Neg for Germ<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Germ::new(-self.value, -self.rate)
    }
}

impl<T: Scalar> Mul for Germ<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let rate = self.value.clone() * rhs.rate + self.rate * rhs.value.clone();
        Germ::new(self.value * rhs.value, rate)
    }
}

impl<T: Scalar> Div for Germ<T> {
    type Output = Self;
    /// Panics if the divisor is infinitesimal.
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.value.is_zero(), "division by an infinitesimal germ");
        let den = rhs.value.clone() * rhs.value.clone();
        let rate = (self.rate * rhs.value.clone() - self.value.clone() * rhs.rate) / den;
        Germ::new(self.value / rhs.value, rate)
    }
}

impl<T: Scalar> Zero for Germ<T> {
    fn zero() -> Self {
        Germ::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.rate.is_zero()
    }
}

impl<T: Scalar> One for Germ<T> {
    fn one() -> Self {
        Germ::constant(T::one())
    }
}

impl<T: Scalar> Scalar for Germ<T> {
    fn from_int(n: i64) -> Self {
        Germ::constant(T::from_int(n))
    }

    fn to_int(&self) -> Option<i64> {
        if self.rate.is_zero() {
            self.value.to_int()
        } else {
            None
        }
    }
}
