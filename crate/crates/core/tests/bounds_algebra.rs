use mixcens::influence::N_COL;
use mixcens::sensitivity::{delta_region, region_curve, tipping_from_summaries, tipping_tau};
use mixcens::{Col, Family, SensitivityParams};
use proptest::prelude::*;

/// Column means with 0 ≤ E[π_a μ_a] ≤ E[π_a]/τ, the sign conditions the
/// nesting statements rely on.
fn theta(tau: f64) -> impl Strategy<Value = [f64; N_COL]> {
    (
        prop::array::uniform2(0.0..1.0f64),
        prop::array::uniform2(0.0..1.0f64),
        prop::array::uniform2(0.0..1.0f64),
        prop::array::uniform::<_, N_COL>(-1.0..1.0f64),
    )
        .prop_map(move |(pi, frac, mu, rest)| {
            let mut t = rest;
            for a in 0..2u8 {
                let k = a as usize;
                t[Col::phi2(a) as usize] = pi[k];
                t[Col::phi3(a) as usize] = frac[k] * pi[k] / tau;
                t[Col::phi1(a) as usize] = mu[k];
            }
            t
        })
}

fn value(f: Family, p: &SensitivityParams, t: &[f64; N_COL]) -> [f64; 2] {
    let c = f.coefs(p);
    [c[0].dot(t), c.last().unwrap().dot(t)]
}

fn params(tau: f64, du: f64) -> SensitivityParams {
    SensitivityParams::default().with_tau(tau).with_delta_u(du)
}

const TOL: f64 = 1e-12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nesting(tau in 1.0..5.0f64, du in 0.0..=1.0f64, t in (1.0..5.0f64).prop_flat_map(theta)) {
        // theta was drawn for its own τ'; restrict to τ ≤ τ'
        let tau_ok = (0..2u8).all(|a| tau * t[Col::phi3(a) as usize] <= t[Col::phi2(a) as usize] + TOL);
        prop_assume!(tau_ok);
        let p = params(tau, du);
        let general = value(Family::General, &p, &t);
        let pos = value(Family::MonotonePositive, &p, &t);
        let br = value(Family::BoundedRisk, &p, &t);
        prop_assert!(general[0] <= pos[0] + TOL);
        prop_assert!(pos[1] <= general[1] + TOL);
        prop_assert!(general[0] <= br[0] + TOL);
        prop_assert!(br[1] <= general[1] + TOL);
        let point = value(Family::PointAte, &p.with_delta(du, du), &t)[0];
        prop_assert!(br[0] - TOL <= point && point <= br[1] + TOL);
    }

    #[test]
    fn bounded_risk_widens(t in theta(1.0), tau in 1.0..4.0f64, dtau in 0.0..2.0f64, du in 0.0..1.0f64, ddu in 0.0..1.0f64) {
        let du2 = (du + ddu).min(1.0);
        let width = |p: &SensitivityParams| { let v = value(Family::BoundedRisk, p, &t); v[1] - v[0] };
        let w = width(&params(tau, du));
        prop_assert!(w <= width(&params(tau + dtau, du)) + TOL);
        prop_assert!(w <= width(&params(tau, du2)) + TOL);
    }

    #[test]
    fn unit_tau_and_zero_delta_collapse(t in theta(1.0), tau in 0.2..5.0f64, d in 0.0..=1.0f64) {
        let naive = t[Col::Phi1_1 as usize] - t[Col::Phi1_0 as usize];
        let at_one = SensitivityParams::default().with_tau(1.0).with_delta(d, d).with_delta_u(d);
        prop_assert_eq!(value(Family::PointAte, &at_one, &t), [naive; 2]);
        prop_assert_eq!(value(Family::BoundedRisk, &at_one, &t), [naive; 2]);
        let zero = SensitivityParams::default().with_tau(tau.max(1.0)).with_delta(0.0, 0.0).with_delta_u(0.0).with_delta_l(0.0);
        for f in [Family::PointAte, Family::MonotonePositive, Family::MonotoneNegative, Family::BoundedRisk,
                  Family::Psi1, Family::PointPsi1, Family::Psi2Smooth, Family::PointPsi2] {
            prop_assert_eq!(value(f, &zero, &t), [naive; 2], "{}", f.name());
        }
    }

    #[test]
    fn equal_delta_bounds_meet_the_point(t in theta(1.0), d in 0.0..=1.0f64) {
        let p = SensitivityParams::default().with_delta(d, d).with_delta_u(d).with_delta_l(d);
        let b = value(Family::Psi1, &p, &t);
        let v = value(Family::PointPsi1, &p, &t)[0];
        prop_assert!((b[0] - v).abs() < TOL && (b[1] - v).abs() < TOL);
    }

    #[test]
    fn region_is_the_zero_set_of_the_point(naive in 0.01..0.5f64, g0 in 0.01..0.5f64, g1 in 0.01..0.5f64, tau in 1.01..20.0f64, d1 in 0.0..1.0f64) {
        let pt = delta_region(tau, naive, g0, g1, &[d1]).unwrap()[0];
        let mut t = [0.0; N_COL];
        t[Col::Phi1_1 as usize] = naive;
        t[Col::Phi3_0 as usize] = g0;
        t[Col::Phi3_1 as usize] = g1;
        let p = SensitivityParams::default().with_tau(tau).with_delta(pt.delta0_min, d1);
        // the region may need δ0 > 1; evaluate the linear form directly
        let v = Family::PointAte.coefs(&p)[0].dot(&t);
        prop_assert!(v.abs() < 1e-10, "{v}");
    }

    #[test]
    fn scale_consistent(naive in -0.5..0.5f64, g0 in 0.01..0.5f64, g1 in 0.01..0.5f64, tau in 1.01..20.0f64, k in 0.1..10.0f64) {
        let a = tipping_from_summaries(naive, g0, g1, &[tau]).unwrap();
        let b = tipping_from_summaries(k * naive, k * g0, k * g1, &[tau]).unwrap();
        prop_assert!((a.tau_threshold - b.tau_threshold).abs() < 1e-9 * a.tau_threshold.abs().max(1.0));
        let (c, d) = (a.region_curves[0], b.region_curves[0]);
        prop_assert!((c.slope - d.slope).abs() < 1e-9 * c.slope.abs().max(1.0));
        prop_assert!((c.intercept - d.intercept).abs() < 1e-9 * c.intercept.abs().max(1.0));
    }

    #[test]
    fn region_monotone(naive in 0.01..0.5f64, g0 in 0.01..0.5f64, g1 in 0.01..0.5f64, tau in 1.01..20.0f64, d1 in 0.0..0.9f64) {
        let lo = delta_region(tau, naive, g0, g1, &[d1, d1 + 0.1]).unwrap();
        prop_assert!(lo[0].delta0_min < lo[1].delta0_min);
        let steeper = delta_region(tau + 1.0, naive, g0, g1, &[d1]).unwrap();
        prop_assert!(steeper[0].delta0_min < lo[0].delta0_min);
    }
}

#[test]
fn tipping_examples() {
    assert!((tipping_tau(0.14, 0.02, 0.06).unwrap() - 8.0).abs() < 1e-12);
    assert_eq!(tipping_tau(0.0, 0.02, 0.06).unwrap(), 1.0);
    // negative contrast: explained away through the treated arm
    let g1 = 0.1176 / 9.7;
    assert!((tipping_tau(-0.1176, 0.05, g1).unwrap() - 10.7).abs() < 1e-12);
    let just_above = tipping_tau(0.135, 0.0212, 0.0681).unwrap() + 1e-6;
    let pt = delta_region(just_above, 0.135, 0.0212, 0.0681, &[0.0]).unwrap()[0];
    assert!((pt.delta0_min - 1.0).abs() < 1e-4 && pt.feasible);
    let far = region_curve(1e9, 0.135, 0.0212, 0.0681).unwrap();
    assert!(far.intercept < 1e-6);
}
