//! Morphism-side data: profiles of radial disc morphisms, their component
//! counting function, fibers, branch data and ramification jumps.

use std::fmt;

use crate::connection::MultiRadius;
use crate::error::{Error, Result};
use crate::pwm::PiecewiseMonomial;
use crate::scalar::Scalar;

/// Profile function of a radial morphism of open discs.
///
/// Log-side slopes are the radius-side degrees: positive integers, strictly
/// decreasing in the log-value, each dividing the top degree (the first
/// slope). An étale profile ends with degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismProfile<T> {
    pwm: PiecewiseMonomial<T>,
    degree: u64,
    etale: bool,
}

impl<T: Scalar> MorphismProfile<T> {
    pub fn new(pwm: PiecewiseMonomial<T>, etale: bool) -> Result<Self> {
        let degrees = integral_slopes(&pwm)?;
        let degree = degrees[0];
        if let Some(w) = degrees.windows(2).find(|w| w[0] < w[1]) {
            return Err(Error::InvalidProfile(format!(
                "degrees must decrease towards radius 0, found {} then {}",
                w[0], w[1]
            )));
        }
        if let Some(d) = degrees.iter().find(|d| degree % **d != 0) {
            return Err(Error::InvalidProfile(format!(
                "degree {d} does not divide the top degree {degree}"
            )));
        }
        if etale && degrees.last() != Some(&1) {
            return Err(Error::InvalidProfile(format!(
                "étale profile must end with degree 1, found {}",
                pwm.last_slope()
            )));
        }
        Ok(MorphismProfile { pwm, degree, etale })
    }

    pub fn pwm(&self) -> &PiecewiseMonomial<T> {
        &self.pwm
    }

    /// Degree of the radial disc morphism, the slope near radius 1.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_etale(&self) -> bool {
        self.etale
    }

    pub fn require_etale(&self) -> Result<()> {
        if self.etale {
            Ok(())
        } else {
            Err(Error::NotEtale)
        }
    }

    /// Slopes as integers, segment by segment.
    pub fn degrees(&self) -> Vec<u64> {
        integral_slopes(&self.pwm).expect("validated on construction")
    }
}

impl<T: Scalar> fmt::Display for MorphismProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.pwm.fmt(f)
    }
}

fn integral_slopes<T: Scalar>(pwm: &PiecewiseMonomial<T>) -> Result<Vec<u64>> {
    pwm.slopes()
        .iter()
        .map(|s| match s.to_int() {
            Some(n) if n >= 1 => Ok(n as u64),
            _ => Err(Error::InvalidProfile(format!(
                "slope {s} is not a positive integer"
            ))),
        })
        .collect()
}

/// Step function counting the components of the preimage of `D(z, s⁻)`.
///
/// `steps` lists `(s_j, n_j)` from the smallest break radius up to
/// `s_n = 1`; log-values strictly decrease to 0 and counts strictly decrease
/// to 1. `N(s) = n_j` for `s ∈ (s_{j-1}, s_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NData<T> {
    steps: Vec<(T, u64)>,
}

impl<T: Scalar> NData<T> {
    pub fn steps(&self) -> &[(T, u64)] {
        &self.steps
    }

    /// `N` at the radius with log-value `w`.
    pub fn count_at(&self, w: &T) -> u64 {
        self.steps
            .iter()
            .find(|(s, _)| s <= w)
            .map(|(_, n)| *n)
            .expect("last step is at log-value 0")
    }
}

/// `N(s) = d / deg⁻_f(f⁻¹(s))`, jumping at the images of the profile breaks.
pub fn n_function<T: Scalar>(mp: &MorphismProfile<T>) -> NData<T> {
    let degrees = mp.degrees();
    let d = mp.degree();
    let values = mp.pwm().break_values();
    let mut steps: Vec<(T, u64)> = values
        .into_iter()
        .enumerate()
        .rev()
        .map(|(k, s)| (s, d / degrees[k + 1]))
        .collect();
    steps.push((T::zero(), d / degrees[0]));
    NData { steps }
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    let prime = p >= 2
        && (2..)
            .take_while(|k| k * k <= p)
            .all(|k| !p.is_multiple_of(k));
    if prime {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

/// Identity profile of a residually separable point.
pub fn tame_profile<T: Scalar>() -> MorphismProfile<T> {
    MorphismProfile::new(PiecewiseMonomial::identity(), true).expect("identity is a profile")
}

/// Residually purely inseparable degree `p` with different `δ`, `val_delta = -log_p δ`.
///
/// Radius side: `δ·s` below `δ^{1/(p-1)}`, `s^p` above. `val_delta = 0`
/// gives the degenerate non-étale profile `s^p`.
pub fn inseparable_p_profile<T: Scalar>(p: u64, val_delta: T) -> Result<MorphismProfile<T>> {
    check_prime(p)?;
    let pt = T::from_int(p as i64);
    if val_delta < T::zero() {
        return Err(Error::InvalidArgument(format!(
            "different valuation {val_delta} is negative"
        )));
    }
    if val_delta.is_zero() {
        return MorphismProfile::new(PiecewiseMonomial::monomial(pt)?, false);
    }
    let brk = val_delta / (pt.clone() - T::one());
    MorphismProfile::new(PiecewiseMonomial::new(vec![brk], vec![pt, T::one()])?, true)
}

/// Profile of `x ↦ x^p` at any Gauss point: `|p|·s` below `|p|^{1/(p-1)}`, `s^p` above.
pub fn frobenius_profile<T: Scalar>(p: u64) -> Result<MorphismProfile<T>> {
    inseparable_p_profile(p, T::one())
}

/// Profile of `x ↦ (x + a)^p - a^p` at `η_ρ`, with `val_a = -log_p |a|` and
/// `u = -log_p ρ`.
///
/// For `ρ ≥ |a|` this is the centered profile; for
/// `ρ ∈ (|a||p|^{1/(p-1)}, |a|)` the break moves to `|p|^{1/(p-1)}|a|/ρ`.
/// Smaller `ρ` is out of regime.
pub fn off_centered_frobenius_profile<T: Scalar>(
    p: u64,
    val_a: T,
    u: T,
) -> Result<MorphismProfile<T>> {
    check_prime(p)?;
    if val_a < T::zero() || u < T::zero() {
        return Err(Error::InvalidArgument(format!(
            "val_a = {val_a} and u = {u} must be nonnegative"
        )));
    }
    if u <= val_a {
        return frobenius_profile(p);
    }
    let pt = T::from_int(p as i64);
    let brk = T::one() / (pt.clone() - T::one()) + val_a.clone() - u.clone();
    if brk <= T::zero() {
        return Err(Error::OutOfRegime(format!(
            "u = {u} is at least val_a + 1/(p-1) = {}",
            val_a + T::one() / (pt - T::one())
        )));
    }
    MorphismProfile::new(PiecewiseMonomial::new(vec![brk], vec![pt, T::one()])?, true)
}

/// A preimage point of a fiber, with the connection's multiradius there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPoint<T> {
    pub label: String,
    /// Of degree equal to the residual inseparable degree.
    pub profile: MorphismProfile<T>,
    pub sep_degree: u64,
    pub radii: MultiRadius<T>,
}

impl<T: Scalar> FiberPoint<T> {
    pub fn new(
        label: impl Into<String>,
        profile: MorphismProfile<T>,
        sep_degree: u64,
        radii: MultiRadius<T>,
    ) -> Result<Self> {
        if sep_degree == 0 {
            return Err(Error::InvalidFiber(
                "separable degree must be positive".into(),
            ));
        }
        Ok(FiberPoint {
            label: label.into(),
            profile,
            sep_degree,
            radii,
        })
    }

    pub fn insep_degree(&self) -> u64 {
        self.profile.degree()
    }

    /// `n_y = 𝔰·𝔦`.
    pub fn multiplicity(&self) -> u64 {
        self.sep_degree * self.insep_degree()
    }
}

/// The fiber `φ⁻¹(x)` of a finite morphism, together with a rank `r`
/// connection's multiradii at each preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberConfiguration<T> {
    rank: usize,
    points: Vec<FiberPoint<T>>,
}

impl<T: Scalar> FiberConfiguration<T> {
    pub fn new(rank: usize, points: Vec<FiberPoint<T>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidFiber("rank must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidFiber("fiber has no points".into()));
        }
        if let Some(pt) = points.iter().find(|pt| pt.radii.rank() != rank) {
            return Err(Error::InvalidFiber(format!(
                "point {} has {} radii, expected rank {rank}",
                pt.label,
                pt.radii.rank()
            )));
        }
        Ok(FiberConfiguration { rank, points })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> &[FiberPoint<T>] {
        &self.points
    }

    /// `d = Σ_y 𝔰_y·𝔦_y`.
    pub fn degree(&self) -> u64 {
        self.points.iter().map(FiberPoint::multiplicity).sum()
    }

    pub fn require_etale(&self) -> Result<()> {
        self.points
            .iter()
            .try_for_each(|pt| pt.profile.require_etale())
    }
}

/// Data of `φ` along a branch: `S = T^d(1 + …)`, `φ'(T) = a·T^σ(1 + …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusDirection<T> {
    d: u64,
    sigma: i64,
    val_a: T,
    nu: i64,
}

impl<T: Scalar> AnnulusDirection<T> {
    pub fn new(d: u64, sigma: i64, val_a: T) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDirection("degree must be positive".into()));
        }
        if val_a < T::zero() {
            return Err(Error::InvalidDirection(format!(
                "val_a = {val_a} would give |a| > 1"
            )));
        }
        let nu = sigma - d as i64 + 1;
        Ok(AnnulusDirection {
            d,
            sigma,
            val_a,
            nu,
        })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn val_a(&self) -> &T {
        &self.val_a
    }

    /// `ν = σ - d + 1`.
    pub fn nu(&self) -> i64 {
        self.nu
    }

    /// `-log_p |a_1| = val_a + ν·u` for the linear coefficient of `φ` on a
    /// maximal disc at `|α| = ρ`; this is also the log-different at `η_ρ`.
    pub fn disc_coefficient_valuation(&self, u: &T) -> T {
        self.val_a.clone() + T::from_int(self.nu) * u.clone()
    }
}

/// Upper ramification jumps `1 > v_0 > … > v_n > 0` with the indices
/// `(G : G^{v_j})`, plus the extension degree `(G : G^0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationData<T> {
    degree: u64,
    jumps: Vec<(T, u64)>,
}

impl<T: Scalar> RamificationData<T> {
    /// `jumps` are `(log-value, index)` ordered by decreasing radius.
    pub fn new(degree: u64, jumps: Vec<(T, u64)>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidRamification(m));
        if degree == 0 {
            return bad("degree must be positive".into());
        }
        if jumps.is_empty() && degree != 1 {
            return bad(format!("degree {degree} extension needs at least one jump"));
        }
        if let Some((_, first)) = jumps.first() {
            if *first != 1 {
                return bad(format!("index above the first jump must be 1, got {first}"));
            }
        }
        if let Some((v, _)) = jumps.iter().find(|(v, _)| *v <= T::zero()) {
            return bad(format!("jump log-value {v} is not positive"));
        }
        if let Some(w) = jumps
            .windows(2)
            .find(|w| w[0].0 >= w[1].0 || w[0].1 >= w[1].1)
        {
            return bad(format!(
                "jumps must strictly decrease in radius with strictly increasing indices, \
                 got ({}, {}) then ({}, {})",
                w[0].0, w[0].1, w[1].0, w[1].1
            ));
        }
        if let Some((_, i)) = jumps
            .iter()
            .find(|(_, i)| *i >= degree || !degree.is_multiple_of(*i))
        {
            return bad(format!("index {i} is not a proper divisor of {degree}"));
        }
        Ok(RamificationData { degree, jumps })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn jumps(&self) -> &[(T, u64)] {
        &self.jumps
    }
}

/// Reads the upper ramification jumps off the component counting function:
/// the jumps are the breaks `s_j < 1` of `N`, and the index attached to `s_j`
/// is `n_{j+1} = (G : G^{s_j})`, the count just above the jump.
pub fn herbrand_jumps<T: Scalar>(mp: &MorphismProfile<T>) -> Result<RamificationData<T>> {
    mp.require_etale()?;
    let nd = n_function(mp);
    let steps = nd.steps();
    let jumps = steps
        .windows(2)
        .rev()
        .map(|w| (w[0].0.clone(), w[1].1))
        .collect();
    RamificationData::new(mp.degree(), jumps)
}

/// Local Riemann–Hurwitz: `2g_y - 2 = d(2g_x - 2) + Σ (ν_t + d_t - 1)`.
///
/// `branches` are `(ν_t, d_t)` and must include every branch where
/// `ν_t + d_t - 1 ≠ 0`.
pub fn riemann_hurwitz_check(g_y: i64, g_x: i64, d: i64, branches: &[(i64, i64)]) -> bool {
    let correction: i64 = branches.iter().map(|(nu, dt)| nu + dt - 1).sum();
    2 * g_y - 2 == d * (2 * g_x - 2) + correction
}
