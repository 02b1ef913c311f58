//! Brute-force image sum for a canyon or corridor with exact image
//! positions, distances and grazing angles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::canyon::LosLink;
use crate::error::Result;
use crate::surface_em::{
    fresnel_exact, fresnel_lowgraze_approx, specular_roughness_factor, GrazingAngle, Polarization,
};

use super::{sum_until_converged, SeriesValue, SummationControl};

/// Wall reflection coefficient used for each image.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WallReflection {
    /// `-exp(-(L/2) theta)` at the exact grazing angle.
    #[default]
    LowGrazing,
    /// Exact Fresnel coefficient times the roughness specular factor; the
    /// ground uses the exact Fresnel coefficient too.
    ExactFresnel(Polarization),
    /// Constant magnitude with sign -1, e.g. 1 for metallic walls.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImageSumOptions {
    pub include_ground: bool,
    pub coherent: bool,
    pub reflection: WallReflection,
}

/// Average received power from the two-sided image lattice.
pub fn image_sum_power(
    link: &LosLink,
    ctl: &SummationControl,
    include_ground: bool,
    coherent: bool,
) -> Result<SeriesValue> {
    image_sum_power_with(
        link,
        ctl,
        &ImageSumOptions {
            include_ground,
            coherent,
            reflection: WallReflection::LowGrazing,
        },
    )
}

pub fn image_sum_power_with(
    link: &LosLink,
    ctl: &SummationControl,
    opts: &ImageSumOptions,
) -> Result<SeriesValue> {
    let g = &link.geometry;
    let k = link.wavenumber();
    let lam = link.wavelength();
    let l = link.wall_loss()?;
    let x = link.horizontal_range_x;
    let w = g.width_w;
    let dz_direct = g.tx_height_zs - g.rx_height_z;
    let dz_ground = g.tx_height_zs + g.rx_height_z;

    let wall = |theta: f64| -> Result<Complex64> {
        let t = GrazingAngle::clamped(theta);
        Ok(match opts.reflection {
            WallReflection::LowGrazing => Complex64::new(-(-0.5 * l * theta).exp(), 0.0),
            WallReflection::ExactFresnel(pol) => {
                let rough = match &g.wall.roughness {
                    Some(r) => specular_roughness_factor(t, r, k)?.value,
                    None => 1.0,
                };
                fresnel_exact(t, g.wall.dielectric, pol) * rough
            }
            WallReflection::Fixed(mag) => Complex64::new(-mag, 0.0),
        })
    };
    let ground = |theta: f64| -> Result<Complex64> {
        let t = GrazingAngle::clamped(theta);
        Ok(match opts.reflection {
            WallReflection::ExactFresnel(_) => fresnel_exact(t, g.ground, g.ground_polarization),
            _ => Complex64::new(
                fresnel_lowgraze_approx(t, g.ground, g.ground_polarization)?.value,
                0.0,
            ),
        })
    };

    let arrivals: &[(f64, bool)] = if opts.include_ground {
        &[(dz_direct, false), (dz_ground, true)]
    } else {
        &[(dz_direct, false)]
    };
    let transverse = |m: i64| {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        (m as f64 * w + sign * g.tx_offset_y - g.rx_offset_y).abs()
    };

    // Field of image `m`, normalized so |field|^2 is a path gain.
    let image_field = |m: i64| -> Result<Complex64> {
        let dy = transverse(m);
        let bounces = m.unsigned_abs() as i32;
        let mut field = Complex64::new(0.0, 0.0);
        for &(dz, via_ground) in arrivals {
            let r = x.hypot(dz).hypot(dy);
            let mut coeff = wall((dy / r).asin())?.powi(bounces);
            if via_ground {
                coeff *= ground((dz / r).asin())?;
            }
            field += coeff * Complex64::from_polar(lam / (4.0 * PI * r), k * r);
        }
        Ok(field)
    };

    // Direct and ground arrivals of one image add in power.
    let image_power = |m: i64| -> Result<f64> {
        let dy = transverse(m);
        let bounces = m.unsigned_abs() as i32;
        let mut p = 0.0;
        for &(dz, via_ground) in arrivals {
            let r = x.hypot(dz).hypot(dy);
            let mut mag2 = wall((dy / r).asin())?.norm_sqr().powi(bounces);
            if via_ground {
                mag2 *= ground((dz / r).asin())?.norm_sqr();
            }
            p += mag2 * (lam / (4.0 * PI * r)).powi(2);
        }
        Ok(p)
    };

    if opts.coherent {
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = None;
        let mags = sum_until_converged(ctl, "coherent image sum", |j| {
            let j = j as i64;
            let f = if j == 0 {
                image_field(0)
            } else {
                image_field(j).and_then(|a| image_field(-j).map(|b| a + b))
            };
            match f {
                Ok(f) => {
                    total += f;
                    f.norm_sqr()
                }
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        Ok(SeriesValue {
            value: total.norm_sqr(),
            orders: mags.orders,
        })
    } else {
        let mut err = None;
        let s = sum_until_converged(ctl, "image sum", |j| {
            let j = j as i64;
            let v = if j == 0 {
                image_power(0)
            } else {
                image_power(j).and_then(|a| image_power(-j).map(|b| a + b))
            };
            v.unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            })
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(s),
        }
    }
}
