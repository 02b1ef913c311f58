use std::f64::consts::PI;

use pathgain::diffuse::{diffuse_pathgain, t_eff, DiffuseLink, PenetrationSpec};
use pathgain::oracles::{hotwall_quadrature, HotwallOptions, KappaTreatment, QuadratureControl};
use pathgain::units::to_db;
use proptest::prelude::*;

fn link() -> impl Strategy<Value = DiffuseLink> {
    (
        0.5f64..50.0,
        1.0f64..20.0,
        0.1f64..10.0,
        0.0f64..0.5,
        0.005f64..0.3,
    )
        .prop_map(|(ds, ratio, d, kappa, lam)| DiffuseLink {
            standoff_d_s: ds,
            range_r: ds * ratio,
            depth_d_in: d,
            kappa,
            wavelength: lam,
        })
}

proptest! {
    #[test]
    fn t_eff_monotone(w1 in 0.1f64..50.0, w2 in 0.1f64..50.0, d in 0.1f64..20.0, t2 in 0.01f64..=1.0, s in 1.01f64..3.0) {
        let street = |w1: f64, d: f64| t_eff(&PenetrationSpec::Street { w1_m: w1, t2 }, d).unwrap();
        let ap = |w1: f64, w2: f64, d: f64| t_eff(&PenetrationSpec::Aperture { w1_m: w1, w2_m: w2, t2 }, d).unwrap();
        prop_assert!(street(w1, d * s) <= street(w1, d));
        prop_assert!(street(w1 * s, d) >= street(w1, d));
        prop_assert!(ap(w1, w2, d * s) <= ap(w1, w2, d));
        prop_assert!(ap(w1 * s, w2, d) >= ap(w1, w2, d));
        prop_assert!(ap(w1, w2 * s, d) >= ap(w1, w2, d));
        prop_assert!(ap(w1, w2, d) <= t2 && street(w1, d) <= t2);
    }

    #[test]
    fn quartic_in_range(l in link(), s in 1.0f64..100.0) {
        let spec = PenetrationSpec::Unbounded { t2: 0.3 };
        let a = diffuse_pathgain(&l, &spec).unwrap().value * l.range_r.powi(4);
        let far = DiffuseLink { range_r: l.range_r * s, ..l };
        let b = diffuse_pathgain(&far, &spec).unwrap().value * far.range_r.powi(4);
        prop_assert!((a / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_is_plain_halfspace_law(l in link(), t2 in 0.0f64..=1.0) {
        prop_assert_eq!(t_eff(&PenetrationSpec::Unbounded { t2 }, l.depth_d_in).unwrap(), t2);
        let got = diffuse_pathgain(&l, &PenetrationSpec::Unbounded { t2: 1.0 }).unwrap().value;
        let r2 = l.range_r * l.range_r;
        let expected = l.wavelength * l.wavelength * l.standoff_d_s * l.standoff_d_s / (8.0 * PI * PI * r2 * r2)
            * 1.0
            * (-l.kappa * l.depth_d_in).exp();
        prop_assert_eq!(got, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn aperture_quadrature_within_bound(a in -1.0f64..=2.0, b in -1.0f64..=2.0) {
        let d = 1.0;
        let w1 = 10f64.powf(a) * d;
        let w2 = 10f64.powf(b) * d;
        let l = DiffuseLink { standoff_d_s: 10.0, range_r: 200.0, depth_d_in: d, kappa: 0.0, wavelength: 0.0107 };
        let spec = PenetrationSpec::Aperture { w1_m: w1, w2_m: w2, t2: 1.0 };
        let opts = HotwallOptions { kappa: KappaTreatment::Approximated, ..Default::default() };
        let r = hotwall_quadrature(&l, &spec, &QuadratureControl::with_rel_tol(1e-9), &opts).unwrap();
        let gap = (to_db(r.value) - to_db(r.closed_form)).abs();
        prop_assert!(gap < 0.05, "w1 {w1} w2 {w2}: {gap} dB");
    }
}
