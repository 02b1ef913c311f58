use pathgain::canyon::CanyonGeometry;
use pathgain::data_fit::fit_points;
use pathgain::diffuse::{DiffuseLink, PenetrationSpec};
use pathgain::morphology::{
    canyon_total_gain, canyon_with_trees_gain, outdoor_indoor_canyon_gain,
    outdoor_indoor_canyon_gain_with, overtop_gain_with, overtop_wide_gain, rural_gain_with,
    sidewalk_guided_gain, sidewalk_unguided_gain, suburban_indoor_gain, suburban_street_gain,
    Bounces, FoliageLayer, IndoorClutter, Link, MacroGeometry, StreetScene,
};
use pathgain::oracles::{
    hotwall_quadrature, oi_image_series_power, HotwallOptions, KappaTreatment, QuadratureControl,
    SummationControl,
};
use pathgain::presets::{corridor_room, outdoor_indoor_street, street_wall, suburban_scene};
use pathgain::surface_em::wall_loss_l;
use pathgain::units::{to_db, wavelength, wavenumber};
use proptest::prelude::*;

type Law<'a> = Box<dyn Fn(&Link) -> f64 + 'a>;

const F: f64 = 28e9;

fn slope(pts: &[(f64, f64)]) -> f64 {
    -fit_points(pts).unwrap().model.exponent * 10.0
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn macro_geometry() -> impl Strategy<Value = MacroGeometry> {
    (1.0f64..3.0, 3.0f64..30.0, 1.0f64..40.0, 5.0f64..60.0).prop_map(|(z_m, dc, db, w)| {
        MacroGeometry {
            z_bs: z_m + dc + db,
            z_c: z_m + dc,
            z_m,
            street_width_w: w,
        }
    })
}

fn street(w: f64, z_bs: f64, ds: f64, dv: f64, kappa: f64) -> StreetScene {
    let canyon = CanyonGeometry::centered(w, z_bs, 1.5, street_wall());
    StreetScene::new(canyon, FoliageLayer::new(dv, kappa), ds)
}

fn scene() -> impl Strategy<Value = StreetScene> {
    (
        10.0f64..50.0,
        3.0f64..30.0,
        0.05f64..1.0,
        1.0f64..15.0,
        0.0f64..0.5,
    )
        .prop_map(|(w, z_bs, frac, dv, kappa)| street(w, z_bs, frac * w, dv, kappa))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quartic_laws_slope_minus_40(s in scene(), m in macro_geometry(), g in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let bounces = Bounces::fixed(g, b);
        let mut s = s;
        s.foliage.kappa_v = 0.0;
        s.bounces = bounces;
        let hot = (s.canyon.tx_height_zs - s.canyon.rx_height_z).hypot(s.standoff_d_s);
        let lift = m.z_bs - m.z_c;
        let indoor = IndoorClutter { kappa_in: 0.0, depth_d_in: 1.0 };
        let pen = PenetrationSpec::Unbounded { t2: 0.2 };
        let laws: Vec<(&str, f64, Law)> = vec![
            ("suburban street", hot, Box::new(|l| suburban_street_gain(&s, l).unwrap().value)),
            ("suburban indoor", hot, Box::new(|l| suburban_indoor_gain(&s, &indoor, &pen, l).unwrap().value)),
            ("sidewalk unguided", hot, Box::new(|l| sidewalk_unguided_gain(&s, l).unwrap().value)),
            ("over-top", lift, Box::new(|l| overtop_gain_with(&m, 0.0, l, &bounces).unwrap().value)),
            ("over-top wide", lift, Box::new(|l| overtop_wide_gain(&m, 0.0, l, &bounces).unwrap().value)),
        ];
        for (name, offset, law) in laws {
            let pts: Vec<(f64, f64)> = logspace(100.0, 1000.0, 25)
                .into_iter()
                .map(|r| (r, to_db(law(&Link::new((r * r - offset * offset).sqrt(), F).unwrap()))))
                .collect();
            let k = slope(&pts);
            prop_assert!((k + 40.0).abs() <= 0.1, "{name}: {k}");
        }
    }

    #[test]
    fn guided_laws_slope_minus_25(s in scene(), g in 0.0f64..=1.0, b in 0.0f64..=1.0, same in any::<bool>()) {
        let bounces = Bounces::fixed(g, b);
        let (c, pen, indoor) = outdoor_indoor_street(same);
        let mut s = s;
        s.rho_v = Some(0.0);
        s.bounces = bounces;
        let dz_oi = c.tx_height_zs - c.rx_height_z;
        let dz_s = s.canyon.tx_height_zs - s.canyon.rx_height_z;
        let oi: Vec<(f64, f64)> = logspace(100.0, 1000.0, 25)
            .into_iter()
            .map(|x| {
                let l = Link::new(x, 3.5e9).unwrap();
                (x.hypot(dz_oi), to_db(outdoor_indoor_canyon_gain_with(&c, &pen, &indoor, &l, &bounces).unwrap().value))
            })
            .collect();
        let k = slope(&oi);
        prop_assert!((k + 25.0).abs() <= 0.1, "outdoor-indoor: {k}");
        let guided: Vec<(f64, f64)> = logspace(100.0, 1000.0, 25)
            .into_iter()
            .map(|x| (x.hypot(dz_s), to_db(sidewalk_guided_gain(&s, &Link::new(x, F).unwrap()).unwrap().value)))
            .collect();
        let k = slope(&guided);
        prop_assert!((k + 25.0).abs() <= 0.1, "guided: {k}");
    }

    #[test]
    fn gains_nonincreasing_far_out(s in scene(), m in macro_geometry(), pos in 0.0f64..1.0) {
        let mut s = s;
        s.canyon.tx_height_zs = m.z_bs;
        s.canyon.rx_height_z = m.z_m;
        s.canyon.width_w = m.street_width_w;
        s.standoff_d_s = s.standoff_d_s.min(m.street_width_w);
        let start = 2.0 * m.street_width_w.max(s.standoff_d_s).max(m.z_bs);
        let x = start * 100f64.powf(pos);
        let near = Link::new(x, F).unwrap();
        let far = Link::new(x * 1.05, F).unwrap();
        let indoor = IndoorClutter { kappa_in: 0.1, depth_d_in: 2.0 };
        let pen = PenetrationSpec::Street { w1_m: 5.0, t2: 0.3 };
        let foliage = s.foliage;
        let b = s.bounces;
        let laws: Vec<(&str, Law)> = vec![
            ("suburban street", Box::new(|l| suburban_street_gain(&s, l).unwrap().value)),
            ("suburban indoor", Box::new(|l| suburban_indoor_gain(&s, &indoor, &pen, l).unwrap().value)),
            ("over-top", Box::new(|l| overtop_gain_with(&m, foliage.kappa_v, l, &b).unwrap().value)),
            ("over-top wide", Box::new(|l| overtop_wide_gain(&m, foliage.kappa_v, l, &b).unwrap().value)),
            ("rural", Box::new(|l| rural_gain_with(&m, &foliage, l, &b).unwrap().total)),
            ("outdoor-indoor", Box::new(|l| outdoor_indoor_canyon_gain(&s.canyon, &pen, &indoor, l).unwrap().value)),
            ("sidewalk trees", Box::new(|l| canyon_with_trees_gain(&s, l).unwrap().value)),
            ("canyon total", Box::new(|l| canyon_total_gain(&s, &m, l).unwrap().total)),
        ];
        for (name, law) in laws {
            let (a, b) = (law(&near), law(&far));
            prop_assert!(b <= a, "{name} at x {x}: {a} -> {b}");
        }
    }

    #[test]
    fn canyon_total_is_sum_of_parts(s in scene(), m in macro_geometry(), x in 1.0f64..5000.0) {
        let mut s = s;
        s.canyon.tx_height_zs = m.z_bs;
        s.canyon.rx_height_z = m.z_m;
        let t = canyon_total_gain(&s, &m, &Link::new(x, F).unwrap()).unwrap();
        prop_assert_eq!(t.trees, t.guided.max(t.unguided));
        prop_assert_eq!(t.total, t.trees + t.overtop + t.direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn outdoor_indoor_near_series(set in 0usize..4, ratio in 10.0f64..200.0) {
        let (f, (c, pen, indoor)) = match set {
            0 => (3.5e9, outdoor_indoor_street(true)),
            1 => (3.5e9, outdoor_indoor_street(false)),
            2 => (2e9, corridor_room()),
            _ => (28e9, corridor_room()),
        };
        let lw = wall_loss_l(&c.wall, wavenumber(f)).unwrap() * c.width_w;
        let link = Link::new(ratio * lw, f).unwrap();
        let closed = outdoor_indoor_canyon_gain(&c, &pen, &indoor, &link).unwrap().value;
        let series = oi_image_series_power(&c, &pen, &indoor, &link, &SummationControl::default()).unwrap().value;
        let gap = (to_db(closed) - to_db(series)).abs();
        prop_assert!(gap <= 1.5, "set {set} r/Lw {ratio}: {gap} dB");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn suburban_law_near_hot_wall_quadrature(kappa in 0.0f64..0.5, a in 0.0f64..=1.0) {
        let mut s = suburban_scene(kappa);
        s.bounces = Bounces::fixed(0.0, 0.0);
        let dz = s.canyon.tx_height_zs - s.canyon.rx_height_z;
        let x = 100.0 * 10f64.powf(a);
        let law = suburban_street_gain(&s, &Link::new(x, F).unwrap()).unwrap().value;
        let d = DiffuseLink {
            standoff_d_s: s.standoff_d_s,
            range_r: x.hypot(dz).hypot(s.standoff_d_s),
            depth_d_in: s.foliage.depth_dv,
            kappa,
            wavelength: wavelength(F),
        };
        let q = hotwall_quadrature(
            &d,
            &PenetrationSpec::Unbounded { t2: 1.0 },
            &QuadratureControl::with_rel_tol(1e-9),
            &HotwallOptions { kappa: KappaTreatment::Exact, ..Default::default() },
        )
        .unwrap();
        let gap = (to_db(law) - to_db(q.value)).abs();
        prop_assert!(gap <= 0.5, "kappa {kappa} x {x}: {gap} dB");
    }
}
