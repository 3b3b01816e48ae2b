//! Exact profile functions and pushforwards of radii of convergence of
//! p-adic differential equations along finite étale morphisms of curves.
//!
//! Radii `r ∈ (0, 1]` are stored as log-values `v = -log_p r ≥ 0`; all
//! arithmetic is exact. Engines are generic over [`Scalar`]; the aliases
//! below fix the default scalar to arbitrary-precision rationals.

pub mod connection;
pub mod error;
pub mod json;
pub mod morphism;
pub mod pushforward;
pub mod pwm;
pub mod scalar;

pub use connection::{
    constant_frobenius_family, equation_profile, inseparable_family, instantiate_family,
    irregularity, laplacian, multiradius_from_profile, off_centered_frobenius_family, polygon,
    star,
};
pub use error::{Error, Result};
pub use morphism::{
    frobenius_profile, herbrand_jumps, inseparable_p_profile, n_function,
    off_centered_frobenius_profile, riemann_hurwitz_check, tame_profile,
};
pub use pushforward::{
    constant_pushforward, constant_pushforward_profile, f_family, herbrand_multiradius,
    laplacian_bound_check, laplacian_pushforward_check, phi_table, pushforward_direction,
    pushforward_height, pushforward_irregularity, pushforward_profile, pushforward_radii,
    pushforward_radii_bruteforce, pushforward_radii_disc, special_frobenius, special_inseparable_p,
    special_tame, BoundReport,
};
pub use pwm::{profile_from_series, Side};
pub use scalar::{Germ, Scalar};

pub use num_rational::BigRational as Rational;

pub type LogValue = pwm::LogValue<Rational>;
pub type Pwm = pwm::PiecewiseMonomial<Rational>;
pub type SeriesValuations = pwm::SeriesValuations<Rational>;
pub type MorphismProfile = morphism::MorphismProfile<Rational>;
pub type NData = morphism::NData<Rational>;
pub type FiberPoint = morphism::FiberPoint<Rational>;
pub type FiberConfiguration = morphism::FiberConfiguration<Rational>;
pub type AnnulusDirection = morphism::AnnulusDirection<Rational>;
pub type RamificationData = morphism::RamificationData<Rational>;
pub type MultiRadius = connection::MultiRadius<Rational>;
pub type EquationProfile = connection::EquationProfile<Rational>;
pub type ConvergencePolygon = connection::ConvergencePolygon<Rational>;
pub type DirectionModel = connection::DirectionModel<Rational>;
pub type ProfileFamily = connection::ProfileFamily<Rational>;
pub type PhiTable = pushforward::PhiTable<Rational>;

/// `n/d` as a [`Rational`]. Panics if `d = 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if num_traits::Zero::is_zero(&d) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}
