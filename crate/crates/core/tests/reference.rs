use std::f64::consts::{LN_10, PI};

use pathgain::presets::vegetated_macro;
use pathgain::reference::{
    friis_gain, tr38901_eval, uma_nlos_36814, Condition, Family, ThreeGppScenario,
};
use pathgain::units::{to_db, wavelength};
use proptest::prelude::*;

/// Urban-macro NLOS loss written out from natural logs.
fn eq26_oracle(w: f64, zb: f64, zbs: f64, zm: f64, fc: f64, d: f64) -> f64 {
    let lg = |v: f64| v.ln() / LN_10;
    let street = -7.1 * lg(w);
    let building = 7.5 * lg(zb);
    let base = -(24.37 - 3.7 * (zb / zbs) * (zb / zbs)) * lg(zbs);
    let distance = (43.42 - 3.1 * lg(zbs)) * (lg(d) - 3.0);
    let carrier = 20.0 * lg(fc);
    let mobile = -(3.2 * lg(11.75 * zm) * lg(11.75 * zm) - 4.97);
    161.04 + street + building + base + distance + carrier + mobile
}

#[test]
fn eq26_locked_value() {
    let oracle = eq26_oracle(20.0, 10.0, 14.0, 1.5, 28.0, 1000.0);
    let got = uma_nlos_36814(20.0, 10.0, 14.0, 1.5, 28.0, 1000.0).unwrap();
    assert!((oracle - 162.479_235_522).abs() < 1e-6, "{oracle}");
    assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
}

#[test]
fn eq26_near_uma_nlos() {
    let m = vegetated_macro();
    let uma = ThreeGppScenario::new(Family::UMa, Condition::Nlos, 28.0, m.z_bs, m.z_m);
    for i in 0..=80 {
        let d = 200.0 + 10.0 * i as f64;
        let a = uma_nlos_36814(
            m.street_width_w,
            m.z_c,
            m.z_bs,
            m.z_m,
            28.0,
            d.hypot(m.z_bs - m.z_m),
        )
        .unwrap();
        let b = tr38901_eval(&uma, d).unwrap().value;
        assert!((a - b).abs() <= 10.0, "d {d}: {a} vs {b}");
    }
}

fn family() -> impl Strategy<Value = (Family, f64)> {
    prop_oneof![
        Just((Family::UMa, 25.0)),
        Just((Family::UMi, 10.0)),
        Just((Family::InH, 3.0)),
        Just((Family::O2I, 10.0)),
    ]
}

proptest! {
    #[test]
    fn eq26_matches_oracle(
        w in 5.0f64..50.0,
        zb in 3.0f64..40.0,
        zbs in 10.0f64..60.0,
        zm in 1.0f64..3.0,
        fc in 0.5f64..100.0,
        d in 10.0f64..5000.0,
    ) {
        let got = uma_nlos_36814(w, zb, zbs, zm, fc, d).unwrap();
        prop_assert!((got - eq26_oracle(w, zb, zbs, zm, fc, d)).abs() < 1e-9);
    }

    #[test]
    fn friis_matches_free_space(f in 1e8f64..1e11, r in 0.1f64..1e5) {
        let lam = wavelength(f);
        let want = 20.0 * (lam / (4.0 * PI * r)).log10();
        prop_assert!((to_db(friis_gain(lam, r).unwrap()) - want).abs() < 1e-9);
    }

    #[test]
    fn tr38901_loss_grows_with_distance(
        (fam, h_bs) in family(),
        nlos in any::<bool>(),
        fc in prop_oneof![Just(2.0), Just(3.5), Just(28.0)],
        d in 10.0f64..5000.0,
        s in 1.001f64..2.0,
    ) {
        let cond = if nlos { Condition::Nlos } else { Condition::Los };
        let sc = ThreeGppScenario::new(fam, cond, fc, h_bs, 1.5);
        let near = tr38901_eval(&sc, d).unwrap().value;
        let far = tr38901_eval(&sc, d * s).unwrap().value;
        prop_assert!(far >= near, "{fam:?} {cond:?} {fc} GHz d {d}: {near} -> {far}");
    }

    #[test]
    fn tr38901_nlos_not_below_los(
        (fam, h_bs) in family(),
        fc in prop_oneof![Just(2.0), Just(3.5), Just(28.0)],
        h_ut in 1.5f64..2.5,
        d in 10.0f64..5000.0,
    ) {
        let los = ThreeGppScenario::new(fam, Condition::Los, fc, h_bs, h_ut);
        let nlos = ThreeGppScenario { condition: Condition::Nlos, ..los };
        prop_assert!(tr38901_eval(&nlos, d).unwrap().value >= tr38901_eval(&los, d).unwrap().value);
    }
}
