//! Radii of convergence of the pushforward of a connection along a finite
//! étale morphism, with independent routes used as cross-checks.

use crate::connection::{
    equation_profile, DirectionModel, EquationProfile, MultiRadius, ProfileFamily,
};
use crate::error::{Error, Result};
use crate::morphism::{
    check_prime, n_function, AnnulusDirection, FiberConfiguration, FiberPoint, MorphismProfile,
    NData, RamificationData,
};
use crate::pwm::PiecewiseMonomial;
use crate::scalar::{Germ, Scalar};

fn push_family<T: Scalar>(nd: &NData<T>, w: T, times: u64, out: &mut Vec<T>) {
    let steps = nd.steps();
    // m = #{j : s_j < f(R)}; ties go to the lower bucket
    let m = steps.iter().take_while(|(s, _)| *s > w).count();
    for _ in 0..times {
        for j in 0..m {
            let mult = steps[j].1 - steps[j + 1].1;
            out.extend(std::iter::repeat_n(steps[j].0.clone(), mult as usize));
        }
        out.extend(std::iter::repeat_n(w.clone(), steps[m].1 as usize));
    }
}

/// The family of radii at `x` contributed by one radius `R` (log-value `v`)
/// at a preimage point; it has `𝔦` members.
pub fn f_family<T: Scalar>(fp: &FiberPoint<T>, v: &T) -> Result<MultiRadius<T>> {
    if *v < T::zero() {
        return Err(Error::InvalidMultiRadius(format!(
            "log-value {v} is negative"
        )));
    }
    let mut out = Vec::new();
    push_family(
        &n_function(&fp.profile),
        fp.profile.pwm().eval_finite(v),
        1,
        &mut out,
    );
    MultiRadius::from_multiset(out)
}

/// Pushforward along a radial morphism of discs.
pub fn pushforward_radii_disc<T: Scalar>(
    mp: &MorphismProfile<T>,
    mr: &MultiRadius<T>,
) -> Result<MultiRadius<T>> {
    mp.require_etale()?;
    let nd = n_function(mp);
    let mut out = Vec::new();
    for v in mr.logvalues() {
        push_family(&nd, mp.pwm().eval_finite(v), 1, &mut out);
    }
    MultiRadius::from_multiset(out)
}

/// Multiradius of `φ_*E` at `x`: the star over `y ∈ φ⁻¹(x)` and `i` of the
/// families of `R_i(y)`, each taken `𝔰_y` times.
pub fn pushforward_radii<T: Scalar>(fc: &FiberConfiguration<T>) -> Result<MultiRadius<T>> {
    fc.require_etale()?;
    let mut out = Vec::new();
    for pt in fc.points() {
        let nd = n_function(&pt.profile);
        for v in pt.radii.logvalues() {
            push_family(
                &nd,
                pt.profile.pwm().eval_finite(v),
                pt.sep_degree,
                &mut out,
            );
        }
    }
    MultiRadius::from_multiset(out)
}

/// One sample of `Φ_x`: its value at `s` and just above `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiRow<T> {
    pub s: T,
    pub phi: u64,
    pub phi_plus: u64,
}

/// `Φ_x` sampled at every candidate break, ordered by decreasing radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTable<T> {
    pub rows: Vec<PhiRow<T>>,
}

/// `Φ_x(s) = Σ_y 𝔰·N^y(s)·#{i : R_i ≥ (f^y)⁻¹(s)}` at log-value `w`, with
/// `N^y(s)` read directly off the profile degree at `(f^y)⁻¹(s)`.
fn phi_at<T: Scalar>(fc: &FiberConfiguration<T>, inverses: &[PiecewiseMonomial<T>], w: &T) -> u64 {
    fc.points()
        .iter()
        .zip(inverses)
        .map(|(pt, inv)| {
            let x = inv.eval_finite(w);
            let deg = pt
                .profile
                .pwm()
                .slope_after(&x)
                .to_int()
                .expect("integral degree") as u64;
            pt.sep_degree * (pt.insep_degree() / deg) * pt.radii.count_at_least(&x) as u64
        })
        .sum()
}

pub fn phi_table<T: Scalar>(fc: &FiberConfiguration<T>) -> Result<PhiTable<T>> {
    fc.require_etale()?;
    let inverses = fc
        .points()
        .iter()
        .map(|pt| pt.profile.pwm().inverse())
        .collect::<Result<Vec<_>>>()?;
    let mut candidates = vec![T::zero()];
    for pt in fc.points() {
        let g = pt.profile.pwm();
        candidates.extend(g.break_values());
        candidates.extend(pt.radii.logvalues().iter().map(|v| g.eval_finite(v)));
    }
    candidates.sort();
    candidates.dedup();
    let two = T::from_int(2);
    let rows = candidates
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let phi_plus = if k == 0 {
                0
            } else {
                let mid = (candidates[k - 1].clone() + s.clone()) / two.clone();
                phi_at(fc, &inverses, &mid)
            };
            PhiRow {
                s: s.clone(),
                phi: phi_at(fc, &inverses, s),
                phi_plus,
            }
        })
        .collect();
    Ok(PhiTable { rows })
}

/// Reads the pushforward multiradius off the jumps of `Φ_x`.
pub fn pushforward_radii_bruteforce<T: Scalar>(
    fc: &FiberConfiguration<T>,
) -> Result<MultiRadius<T>> {
    let table = phi_table(fc)?;
    let mut out = Vec::new();
    for row in &table.rows {
        let mult = row.phi.checked_sub(row.phi_plus).ok_or_else(|| {
            Error::InvalidFiber(format!("Φ increases across log-value {}", row.s))
        })?;
        out.extend(std::iter::repeat_n(row.s.clone(), mult as usize));
    }
    MultiRadius::from_multiset(out)
}

/// Radii of `φ_*(O, d)`: each break `s_j < 1` of `N` with multiplicity
/// `n_j - n_{j+1}`, then radius 1, everything `sep` times.
pub fn constant_pushforward<T: Scalar>(
    mp: &MorphismProfile<T>,
    sep: u64,
) -> Result<MultiRadius<T>> {
    mp.require_etale()?;
    if sep == 0 {
        return Err(Error::InvalidArgument(
            "separable degree must be positive".into(),
        ));
    }
    let nd = n_function(mp);
    let mut once = Vec::new();
    for w in nd.steps().windows(2) {
        once.extend(std::iter::repeat_n(
            w[0].0.clone(),
            (w[0].1 - w[1].1) as usize,
        ));
    }
    once.push(T::zero());
    let out = (0..sep).flat_map(|_| once.iter().cloned()).collect();
    MultiRadius::from_multiset(out)
}

/// `(f^y)⁻¹` raised to the local multiplicity.
pub fn constant_pushforward_profile<T: Scalar>(fp: &FiberPoint<T>) -> Result<EquationProfile<T>> {
    fp.profile.require_etale()?;
    let inv = fp.profile.pwm().inverse()?;
    EquationProfile::new(inv.pow(fp.multiplicity() as u32))
}

/// `Π_y (𝕗^y ∘ (f^y)⁻¹)^{𝔰_y 𝔦_y}`.
pub fn pushforward_profile<T: Scalar>(fc: &FiberConfiguration<T>) -> Result<EquationProfile<T>> {
    fc.require_etale()?;
    let mut acc = PiecewiseMonomial::zero();
    for pt in fc.points() {
        let ey = equation_profile(&pt.radii);
        let local = ey.pwm().compose(&pt.profile.pwm().inverse()?);
        acc = acc.mul(&local.pow(pt.multiplicity() as u32));
    }
    EquationProfile::new(acc)
}

/// Residually separable fiber point: each radius repeated `d` times.
pub fn special_tame<T: Scalar>(mr: &MultiRadius<T>, d: u64) -> Result<MultiRadius<T>> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    let out = mr
        .logvalues()
        .iter()
        .flat_map(|v| std::iter::repeat_n(v.clone(), d as usize))
        .collect();
    MultiRadius::new(out)
}

/// Closed form for a residually purely inseparable point of degree `p`
/// with different `δ` (`val_delta = -log_p δ`).
///
/// With `i_0 = #{i : R_i ≤ δ^{1/(p-1)}}`: `δR_i` with `p` copies for
/// `i ≤ i_0`, `δ^{p/(p-1)}` with `(p-1)(r - i_0)` copies, `R_i^p` for
/// `i > i_0`.
pub fn special_inseparable_p<T: Scalar>(
    mr: &MultiRadius<T>,
    p: u64,
    val_delta: &T,
) -> Result<MultiRadius<T>> {
    check_prime(p)?;
    if *val_delta <= T::zero() {
        return Err(Error::InvalidArgument(format!(
            "different valuation {val_delta} must be positive"
        )));
    }
    let pt = T::from_int(p as i64);
    let pm1 = pt.clone() - T::one();
    let threshold = val_delta.clone() / pm1.clone();
    let top = pt.clone() * threshold.clone();
    let vs = mr.logvalues();
    let i0 = vs.iter().take_while(|v| **v >= threshold).count();
    let mut out = Vec::with_capacity(vs.len() * p as usize);
    for v in &vs[..i0] {
        out.extend(std::iter::repeat_n(
            v.clone() + val_delta.clone(),
            p as usize,
        ));
    }
    out.extend(std::iter::repeat_n(top, (p as usize - 1) * (vs.len() - i0)));
    out.extend(vs[i0..].iter().map(|v| pt.clone() * v.clone()));
    MultiRadius::from_multiset(out)
}

/// Frobenius at a Gauss point: the inseparable closed form with `δ = |p|`.
pub fn special_frobenius<T: Scalar>(mr: &MultiRadius<T>, p: u64) -> Result<MultiRadius<T>> {
    special_inseparable_p(mr, p, &T::one())
}

/// Height of `φ_*E` at `η_{ρ^d}` in log_p units:
/// `d·h_E + r·ν·(d·u) + r·d·val_a`.
pub fn pushforward_height<T: Scalar>(dir: &AnnulusDirection<T>, r: u64, h_e: &T, u: &T) -> T {
    let d = T::from_int(dir.d() as i64);
    let r = T::from_int(r as i64);
    let nu = T::from_int(dir.nu());
    d.clone() * h_e.clone() + r.clone() * nu * d.clone() * u.clone() + r * d * dir.val_a().clone()
}

pub fn pushforward_irregularity(irr_e: i64, r: u64, nu: i64) -> i64 {
    irr_e + r as i64 * nu
}

/// `Δ_y = Δ_x + r·Σ ν`.
pub fn laplacian_pushforward_check(delta_y: i64, delta_x: i64, r: u64, nus: &[i64]) -> bool {
    delta_y == delta_x + r as i64 * nus.iter().sum::<i64>()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    /// `(2g - 2 + #Γ)·i`.
    pub bound: i64,
    pub satisfied: bool,
    pub equality: bool,
    pub equality_expected: bool,
    /// Satisfied, and equal whenever equality was expected.
    pub consistent: bool,
    pub note: &'static str,
}

pub const BOUND_NOTE: &str = "assumes the supplied directions contain every direction \
     where some partial height is not locally constant; this is not checked";

pub fn laplacian_bound_check(
    g: u64,
    gamma_size: u64,
    i: u64,
    delta_i: i64,
    equality_expected: bool,
) -> Result<BoundReport> {
    if gamma_size < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 directions, got {gamma_size}"
        )));
    }
    if i == 0 {
        return Err(Error::InvalidArgument(
            "partial height index must be positive".into(),
        ));
    }
    let bound = (2 * g as i64 - 2 + gamma_size as i64) * i as i64;
    let satisfied = delta_i <= bound;
    let equality = delta_i == bound;
    Ok(BoundReport {
        bound,
        satisfied,
        equality,
        equality_expected,
        consistent: satisfied && (equality || !equality_expected),
        note: BOUND_NOTE,
    })
}

/// Radii of the constant connection pushed along a Galois cover, read off
/// the upper ramification jumps: `v_j` with multiplicity
/// `(G : G^{v_{j+1}}) - (G : G^{v_j})`, then radius 1.
pub fn herbrand_multiradius<T: Scalar>(rd: &RamificationData<T>) -> MultiRadius<T> {
    let jumps = rd.jumps();
    let mut out = Vec::with_capacity(rd.degree() as usize);
    for (j, (v, idx)) in jumps.iter().enumerate() {
        let next = jumps.get(j + 1).map_or(rd.degree(), |(_, n)| *n);
        out.extend(std::iter::repeat_n(v.clone(), (next - idx) as usize));
    }
    out.push(T::zero());
    MultiRadius::from_multiset(out).expect("jumps are positive")
}

/// Direction model of `φ_*E` along the image branch, from the germ of the
/// profile family at the point and the direction model of `E`.
///
/// The family parameter and the model of `E` both use `u = -log_p ρ`; the
/// result is expressed in the target parameter `u' = d·u`.
pub fn pushforward_direction<T: Scalar>(
    family: &ProfileFamily<T>,
    sep: u64,
    dm: &DirectionModel<T>,
) -> Result<DirectionModel<T>> {
    if !family.interval().0.is_zero() {
        return Err(Error::InvalidArgument(
            "family must start at the branch endpoint u = 0".into(),
        ));
    }
    let profile = family.germ()?;
    let radii = dm.germ();
    let rank = radii.rank();
    let fc = FiberConfiguration::new(rank, vec![FiberPoint::new("y", profile, sep, radii)?])?;
    let d = T::from_int(fc.degree() as i64);
    let pushed = pushforward_radii(&fc)?;
    let components = pushed
        .into_logvalues()
        .into_iter()
        .map(|Germ { value, rate }| (value, rate / d.clone()))
        .collect();
    DirectionModel::new(components)
}
