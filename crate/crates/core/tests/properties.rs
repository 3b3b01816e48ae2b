mod common;

use common::Poly;
use profpush::pwm::Side;
use profpush::{
    constant_frobenius_family, constant_pushforward, constant_pushforward_profile,
    equation_profile, frobenius_profile, herbrand_jumps, inseparable_family, inseparable_p_profile,
    instantiate_family, irregularity, n_function, phi_table, profile_from_series,
    pushforward_direction, pushforward_height, pushforward_irregularity, pushforward_profile,
    pushforward_radii, pushforward_radii_bruteforce, q, special_inseparable_p, AnnulusDirection,
    DirectionModel, FiberPoint, MultiRadius, ProfileFamily, Rational, Scalar,
};
use proptest::prelude::*;
use rand::Rng;

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn closed_form_matches_phi_and_profile_routes(seed in seeds()) {
        let fc = common::fiber(&mut common::rng(seed));
        let radii = pushforward_radii(&fc).unwrap();
        prop_assert_eq!(&radii, &pushforward_radii_bruteforce(&fc).unwrap());
        prop_assert_eq!(equation_profile(&radii), pushforward_profile(&fc).unwrap());
        prop_assert_eq!(radii.rank() as u64, fc.rank() as u64 * fc.degree());
    }

    #[test]
    fn phi_table_shape(seed in seeds()) {
        let fc = common::fiber(&mut common::rng(seed));
        let table = phi_table(&fc).unwrap();
        prop_assert!(table.rows.windows(2).all(|w| w[0].phi <= w[1].phi));
        prop_assert!(table.rows.iter().all(|r| r.phi >= r.phi_plus));
        let last = table.rows.last().unwrap();
        prop_assert_eq!(last.phi, fc.rank() as u64 * fc.degree());
    }

    #[test]
    fn trivial_connection_is_constant_pushforward(seed in seeds(), sep in 1u64..=3) {
        let mp = common::etale_profile(&mut common::rng(seed));
        let fc = common::single(mp.clone(), sep, MultiRadius::trivial(1).unwrap());
        let closed = constant_pushforward(&mp, sep).unwrap();
        prop_assert_eq!(&pushforward_radii(&fc).unwrap(), &closed);
        let ep = constant_pushforward_profile(&fc.points()[0]).unwrap();
        prop_assert_eq!(ep, equation_profile(&closed));
    }

    #[test]
    fn n_function_counts_components(seed in seeds()) {
        let mut rng = common::rng(seed);
        let mp = common::etale_profile(&mut rng);
        let nd = n_function(&mp);
        let inv = mp.pwm().inverse().unwrap();
        let d = q(mp.degree() as i64, 1);
        for _ in 0..20 {
            let w = common::rational(&mut rng, 12);
            let deg = mp.pwm().degree_at(&inv.eval_finite(&w), Side::Left);
            prop_assert_eq!(q(nd.count_at(&w) as i64, 1), d.clone() / deg);
        }
        prop_assert!(nd.steps().iter().all(|(_, n)| mp.degree().is_multiple_of(*n)));
    }

    #[test]
    fn frobenius_has_one_jump(p in prime()) {
        let rd = herbrand_jumps(&frobenius_profile(p).unwrap()).unwrap();
        let p = p as i64;
        prop_assert_eq!(rd.jumps(), &[(q(p, p - 1), 1)][..]);
        prop_assert_eq!(rd.degree(), p as u64);
    }

    #[test]
    fn monotonicity_transport(seed in seeds()) {
        let mut rng = common::rng(seed);
        let mp = common::etale_profile(&mut rng);
        let rank = rng.gen_range(1..=4);
        let small = common::multiradius(&mut rng, rank);
        // larger radii: shrink each log-value
        let big: Vec<Rational> = small
            .logvalues()
            .iter()
            .map(|v| {
                let cut = common::rational(&mut rng, 2);
                if cut > *v { q(0, 1) } else { v.clone() - cut }
            })
            .collect();
        let big = MultiRadius::from_multiset(big).unwrap();
        let a = pushforward_radii(&common::single(mp.clone(), 1, small)).unwrap();
        let b = pushforward_radii(&common::single(mp, 1, big)).unwrap();
        prop_assert!(a.logvalues().iter().zip(b.logvalues()).all(|(x, y)| x >= y));
    }

    #[test]
    fn polynomial_profiles_compose(
        p in prime(),
        psi in prop::collection::vec(-9i64..=9, 1..5),
        phi in prop::collection::vec(-9i64..=9, 1..5),
        unit_psi in 0usize..4,
        unit_phi in 0usize..4,
    ) {
        let lift = |mut c: Vec<i64>, unit: usize| {
            let k = unit % c.len();
            c[k] = 1;
            c.insert(0, 0);
            Poly::from_ints(&c)
        };
        let (psi, phi) = (lift(psi, unit_psi), lift(phi, unit_phi));
        let composite = profile_from_series(&psi.compose(&phi).series(p));
        let chained = profile_from_series(&psi.series(p))
            .compose(&profile_from_series(&phi.series(p)));
        prop_assert_eq!(composite, chained);
    }

    #[test]
    fn coefficient_valuation_matches_derivative(
        p in prime(),
        coeffs in prop::collection::vec(-30i64..=30, 1..6),
        lead in 1i64..=60,
        shift in 1i64..=4,
    ) {
        let mut c = vec![0];
        c.push(lead);
        c.extend(coeffs);
        let phi = Poly::from_ints(&c);
        let d = phi.order();
        let dphi = phi.derivative();
        let sigma = dphi.order();
        let val_a = common::valuation(&dphi.coeffs[sigma], p);
        let dir = AnnulusDirection::new(d as u64, sigma as i64, q(val_a, 1)).unwrap();
        // a maximal disc around α with |α| = ρ, on which the leading term dominates
        let k = val_a + shift;
        let alpha = common::p_power(p, k);
        let normalized = common::valuation(&dphi.eval(&alpha), p) + (1 - d as i64) * k;
        prop_assert_eq!(q(normalized, 1), dir.disc_coefficient_valuation(&q(k, 1)));
    }

    #[test]
    fn special_inseparable_matches_engine(
        seed in seeds(),
        p in prime(),
        num in 1i64..=36,
        den in 1i64..=12,
    ) {
        let mut rng = common::rng(seed);
        let rank = rng.gen_range(1..=4);
        let m = common::multiradius(&mut rng, rank);
        let vd = q(num, den);
        let mp = inseparable_p_profile(p, vd.clone()).unwrap();
        let engine = pushforward_radii(&common::single(mp, 1, m.clone())).unwrap();
        prop_assert_eq!(special_inseparable_p(&m, p, &vd).unwrap(), engine);
    }

    #[test]
    fn special_inseparable_against_literal_thresholds(
        seed in seeds(),
        p in prime(),
        num in 1i64..=36,
        den in 1i64..=12,
    ) {
        // radii outside (δ^{p/(p-1)}, δ^{1/(p-1)}) are where both threshold
        // readings coincide
        let mut rng = common::rng(seed);
        let vd = q(num, den);
        let pm1 = q(p as i64 - 1, 1);
        let lo = vd.clone() / pm1.clone();
        let hi = q(p as i64, 1) * lo.clone();
        let vs: Vec<Rational> = (0..rng.gen_range(1..=4))
            .map(|_| common::rational(&mut rng, 6))
            .filter(|v| *v <= lo || *v >= hi)
            .collect();
        prop_assume!(!vs.is_empty());
        let m = MultiRadius::from_multiset(vs).unwrap();
        let i0 = m.logvalues().iter().filter(|v| **v >= hi).count();
        let mut literal = Vec::new();
        for v in &m.logvalues()[..i0] {
            literal.extend(std::iter::repeat_n(v.clone() + vd.clone(), p as usize));
        }
        literal.extend(std::iter::repeat_n(hi.clone(), (p as usize - 1) * (m.rank() - i0)));
        literal.extend(m.logvalues()[i0..].iter().map(|v| q(p as i64, 1) * v.clone()));
        let literal = MultiRadius::from_multiset(literal).unwrap();
        prop_assert_eq!(special_inseparable_p(&m, p, &vd).unwrap(), literal);
    }

    #[test]
    fn height_coherence(
        use_frobenius in any::<bool>(),
        val_a in 0i64..=3,
        nu in 0i64..=2,
        comps in prop::collection::vec((0i64..=24, 0i64..=3), 1..=3),
        u_num in 1i64..=40,
        u_den in 1i64..=12,
    ) {
        let (dir, fam) = family(use_frobenius, val_a, nu);
        let u = q(u_num, u_den);
        let dm = DirectionModel::from_ints(comps.iter().map(|(c, m)| (q(*c, 6), *m)).collect()).unwrap();
        let e = dm.multiradius_at(&u).unwrap();
        let mp = instantiate_family(&fam, &u);
        prop_assume!(mp.is_ok());
        let fc = common::single(mp.unwrap(), 1, e.clone());
        let h_f = pushforward_radii(&fc).unwrap().height();
        prop_assert_eq!(h_f, pushforward_height(&dir, e.rank() as u64, &e.height(), &u));
    }

    #[test]
    fn direction_germ_matches_small_parameter(
        use_frobenius in any::<bool>(),
        val_a in 0i64..=3,
        nu in 0i64..=2,
        sep in 1u64..=3,
        comps in prop::collection::vec((0i64..=24, 0i64..=3), 1..=3),
    ) {
        let (dir, fam) = family(use_frobenius, val_a, nu);
        let dm = DirectionModel::from_ints(comps.iter().map(|(c, m)| (q(*c, 6), *m)).collect()).unwrap();
        let pushed = pushforward_direction(&fam, sep, &dm);
        prop_assume!(pushed.is_ok());
        let pushed = pushed.unwrap();
        let irr_e = irregularity(&dm).to_int().unwrap();
        let expect = pushforward_irregularity(irr_e, dm.components().len() as u64, dir.nu());
        prop_assert_eq!(irregularity(&pushed), q(expect, 1));
        let u = q(1, 1_000_000);
        let d = q(sep as i64 * dir.d() as i64, 1);
        let mp = instantiate_family(&fam, &u).unwrap();
        let fp = FiberPoint::new("y", mp, sep, dm.multiradius_at(&u).unwrap()).unwrap();
        let fc = profpush::FiberConfiguration::new(dm.components().len(), vec![fp]).unwrap();
        prop_assert_eq!(pushforward_radii(&fc).unwrap(), pushed.multiradius_at(&(d * u)).unwrap());
    }
}

/// Degree 2 families: Frobenius at Gauss points, or a residually inseparable
/// branch with different valuation `val_a + ν·u`.
fn family(use_frobenius: bool, val_a: i64, nu: i64) -> (AnnulusDirection, ProfileFamily) {
    if use_frobenius {
        (
            AnnulusDirection::new(2, 1, q(1, 1)).unwrap(),
            constant_frobenius_family(2).unwrap(),
        )
    } else {
        let dir = AnnulusDirection::new(2, 1 + nu, q(val_a, 1)).unwrap();
        let fam = inseparable_family(2, &dir).unwrap();
        (dir, fam)
    }
}
