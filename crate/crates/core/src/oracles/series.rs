//! One-sided reflection series behind the outdoor-indoor and tree-guided
//! sidewalk laws, summed term by term.

use std::f64::consts::PI;

use crate::canyon::CanyonGeometry;
use crate::diffuse::{t_eff, PenetrationSpec};
use crate::error::{Error, Result};
use crate::morphology::{Bounces, IndoorClutter, Link, StreetScene};
use crate::surface_em::wall_loss_l;

use super::{sum_until_converged, SeriesValue, SummationControl};

/// Standoff of image `m` from the wall facing the terminal, for a source at
/// `d` from that wall in a canyon of width `w`.
pub fn image_standoff(m: usize, w: f64, d: f64) -> f64 {
    let mf = m as f64;
    if m.is_multiple_of(2) {
        mf * w + d
    } else {
        mf * w + w - d
    }
}

fn standoff_in_canyon(d: f64, w: f64) -> Result<f64> {
    if d > 0.0 && d <= w {
        Ok(d)
    } else {
        Err(Error::Geometry(format!(
            "source standoff {d} must lie in (0, {w}]"
        )))
    }
}

/// Outdoor-indoor power from the reflection series with exact standoffs.
///
/// The source sits `w/2 - tx_offset_y` from the wall of the building that
/// holds the terminal. Each image carries `exp(-L m d_m / r)`, the
/// `m`-bounce low-grazing loss at grazing angle `d_m / r`.
pub fn oi_image_series_power(
    canyon: &CanyonGeometry,
    pen: &PenetrationSpec,
    indoor: &IndoorClutter,
    link: &Link,
    ctl: &SummationControl,
) -> Result<SeriesValue> {
    oi_image_series_power_with(canyon, pen, indoor, link, ctl, &Bounces::for_canyon(canyon))
}

pub fn oi_image_series_power_with(
    canyon: &CanyonGeometry,
    pen: &PenetrationSpec,
    indoor: &IndoorClutter,
    link: &Link,
    ctl: &SummationControl,
    bounces: &Bounces,
) -> Result<SeriesValue> {
    canyon.validate()?;
    indoor.validate()?;
    let x = link.horizontal_range_x;
    let w = canyon.width_w;
    let d = standoff_in_canyon(w / 2.0 - canyon.tx_offset_y, w)?;
    let r = x.hypot(canyon.tx_height_zs - canyon.rx_height_z);
    let l = wall_loss_l(&canyon.wall, link.wavenumber())?;
    let t = t_eff(pen, indoor.depth_d_in)?;
    let bounce = bounces.factor(((canyon.tx_height_zs + canyon.rx_height_z) / x).atan())?;
    let lam = link.wavelength();
    let prefactor = lam * lam * (-indoor.kappa_in * indoor.depth_d_in).exp() * t * bounce.value
        / (8.0 * PI * PI * r.powi(4));
    let s = sum_until_converged(ctl, "outdoor-indoor series", |m| {
        let dm = image_standoff(m, w, d);
        dm * dm * (-l * m as f64 * dm / r).exp()
    })?;
    Ok(SeriesValue {
        value: prefactor * s.value,
        orders: s.orders,
    })
}

/// Tree-guided sidewalk power with exact image path lengths
/// `r_m = sqrt(r^2 + d_m^2)` in the absorption term.
///
/// The source standoff is the scene's `standoff_d_s`, measured from the
/// wall on the terminal side; it must not exceed the canyon width.
pub fn guided_trees_series_power(
    scene: &StreetScene,
    link: &Link,
    ctl: &SummationControl,
) -> Result<SeriesValue> {
    scene.validate()?;
    let x = link.horizontal_range_x;
    let w = scene.canyon.width_w;
    let d = standoff_in_canyon(scene.standoff_d_s, w)?;
    let r = scene.range(x);
    let l = wall_loss_l(&scene.canyon.wall, link.wavenumber())?;
    let kr = scene.foliage.kappa_v * scene.rho_v()?.value;
    let bounce = scene.bounces.factor(scene.canyon_ground_angle(x))?;
    let lam = link.wavelength();
    // exp(-kr r) is factored out so heavy absorption does not underflow
    // the individual terms.
    let prefactor = lam * lam * (-kr * (scene.foliage.depth_dv + r)).exp() * bounce.value
        / (8.0 * PI * PI * r.powi(4));
    let s = sum_until_converged(ctl, "guided trees series", |m| {
        let dm = image_standoff(m, w, d);
        let excess = dm * dm / (r.hypot(dm) + r);
        dm * dm * (-l * m as f64 * dm / r - kr * excess).exp()
    })?;
    Ok(SeriesValue {
        value: prefactor * s.value,
        orders: s.orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphology::{outdoor_indoor_canyon_gain_with, FoliageLayer};
    use crate::surface_em::{Dielectric, TelegraphRoughness, WallSurface};
    use crate::units::to_db;

    fn urban_wall() -> WallSurface {
        WallSurface::rough(
            Dielectric::new(2.2).unwrap(),
            TelegraphRoughness::from_widths(0.1, 0.85, 0.15, 0.33, 2.0).unwrap(),
        )
    }

    fn fig11() -> CanyonGeometry {
        let mut c = CanyonGeometry::centered(8.6, 5.0, 7.7, urban_wall());
        c.tx_offset_y = -(8.6 / 2.0 - 0.5);
        c
    }

    #[test]
    fn standoffs() {
        assert_eq!(image_standoff(0, 10.0, 3.0), 3.0);
        assert_eq!(image_standoff(1, 10.0, 3.0), 17.0);
        assert_eq!(image_standoff(2, 10.0, 3.0), 23.0);
        assert_eq!(image_standoff(3, 10.0, 3.0), 37.0);
    }

    #[test]
    fn short_range_keeps_two_images() {
        let c = fig11();
        let indoor = IndoorClutter {
            kappa_in: 0.0,
            depth_d_in: 1.0,
        };
        let link = Link::new(0.05, 3.5e9).unwrap();
        let s = oi_image_series_power_with(
            &c,
            &PenetrationSpec::open(),
            &indoor,
            &link,
            &SummationControl::default(),
            &Bounces::fixed(0.0, 0.0),
        )
        .unwrap();
        let r = 0.05f64.hypot(2.7);
        let l = wall_loss_l(&c.wall, link.wavenumber()).unwrap();
        let (d0, d1) = (8.1, 9.1);
        let sum = d0 * d0 + d1 * d1 * (-l * d1 / r).exp();
        let expect = link.wavelength().powi(2) * sum / (8.0 * PI * PI * r.powi(4));
        assert!(
            (s.value / expect - 1.0).abs() < 1e-12,
            "{}",
            s.value / expect
        );
    }

    #[test]
    fn series_near_closed_form_far_out() {
        let c = fig11();
        let pen = PenetrationSpec::Unbounded { t2: 0.37 };
        let indoor = IndoorClutter {
            kappa_in: 0.1,
            depth_d_in: 1.0,
        };
        let b = Bounces::fixed(1.0, 1.0);
        let l = wall_loss_l(&c.wall, crate::units::wavenumber(3.5e9)).unwrap();
        let link = Link::new(20.0 * l * c.width_w, 3.5e9).unwrap();
        let s =
            oi_image_series_power_with(&c, &pen, &indoor, &link, &SummationControl::default(), &b)
                .unwrap()
                .value;
        let cf = outdoor_indoor_canyon_gain_with(&c, &pen, &indoor, &link, &b)
            .unwrap()
            .value;
        assert!(
            (to_db(s) - to_db(cf)).abs() < 1.5,
            "{}",
            to_db(s) - to_db(cf)
        );
    }

    #[test]
    fn no_trees_guided_equals_outdoor_indoor() {
        let mut canyon = CanyonGeometry::centered(32.0, 20.0, 1.5, urban_wall());
        canyon.tx_offset_y = 6.0;
        let mut scene = StreetScene::new(canyon, FoliageLayer::new(3.0, 0.38), 10.0);
        scene.rho_v = Some(0.0);
        let link = Link::new(300.0, 28e9).unwrap();
        let ctl = SummationControl::default();
        let g = guided_trees_series_power(&scene, &link, &ctl)
            .unwrap()
            .value;
        let indoor = IndoorClutter {
            kappa_in: 0.0,
            depth_d_in: 1.0,
        };
        let oi = oi_image_series_power_with(
            &canyon,
            &PenetrationSpec::open(),
            &indoor,
            &link,
            &ctl,
            &scene.bounces,
        )
        .unwrap()
        .value;
        assert!((g / oi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heavy_absorption_leaves_first_term() {
        let canyon = CanyonGeometry::centered(32.0, 20.0, 1.5, urban_wall());
        let mut scene = StreetScene::new(canyon, FoliageLayer::new(3.0, 5.0), 5.0);
        scene.rho_v = Some(1.0);
        let link = Link::new(30.0, 28e9).unwrap();
        let ctl = SummationControl::default();
        let s = guided_trees_series_power(&scene, &link, &ctl).unwrap();
        let r = scene.range(30.0);
        let lam = link.wavelength();
        let b = scene
            .bounces
            .factor(scene.canyon_ground_angle(30.0))
            .unwrap()
            .value;
        let first = lam * lam * 25.0 * (-5.0 * 3.0f64).exp() * (-5.0 * r.hypot(5.0)).exp() * b
            / (8.0 * PI * PI * r.powi(4));
        assert!((s.value / first - 1.0).abs() < 1e-9, "{}", s.value / first);
    }

    #[test]
    fn standoff_outside_canyon_rejected() {
        let canyon = CanyonGeometry::centered(10.0, 20.0, 1.5, urban_wall());
        let scene = StreetScene::new(canyon, FoliageLayer::new(3.0, 0.38), 12.0);
        let link = Link::new(100.0, 28e9).unwrap();
        assert!(matches!(
            guided_trees_series_power(&scene, &link, &SummationControl::default()),
            Err(Error::Geometry(_))
        ));
    }
}
