//! Line-of-sight path gain in street canyons and corridors.
//!
//! Wall reflections are summed in power over the image lattice. With the
//! low-grazing wall coefficient the sum collapses to a Gaussian whose
//! rectangular-rule integral gives the `r^{-1.5}` law. The ground bounce is
//! added either coherently (two-ray beating) or in power.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::flags::{Flagged, Regime};
use crate::reference::friis_gain;
use crate::surface_em::{
    fresnel_lowgraze_approx, wall_loss_l, Dielectric, GrazingAngle, Polarization, WallSurface,
};
use crate::units::{require_positive, wavelength, wavenumber};

/// Cross-section of a canyon or corridor and the antenna placement in it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanyonGeometry {
    pub width_w: f64,
    pub tx_height_zs: f64,
    pub rx_height_z: f64,
    pub ground: Dielectric,
    pub ground_polarization: Polarization,
    pub wall: WallSurface,
    /// Transverse offsets from the canyon centre line, m.
    pub tx_offset_y: f64,
    pub rx_offset_y: f64,
}

impl CanyonGeometry {
    /// Centred antennas over a sqrt(5) ground, vertical polarization.
    pub fn centered(width_w: f64, tx_height_zs: f64, rx_height_z: f64, wall: WallSurface) -> Self {
        Self {
            width_w,
            tx_height_zs,
            rx_height_z,
            ground: Dielectric::new(crate::surface_em::GROUND_INDEX_DEFAULT).expect("sqrt(5) > 1"),
            ground_polarization: Polarization::Parallel,
            wall,
            tx_offset_y: 0.0,
            rx_offset_y: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("width_w", self.width_w)?;
        require_positive("tx_height_zs", self.tx_height_zs)?;
        require_positive("rx_height_z", self.rx_height_z)?;
        let half = self.width_w / 2.0;
        for (name, y) in [
            ("tx_offset_y", self.tx_offset_y),
            ("rx_offset_y", self.rx_offset_y),
        ] {
            if !(y.is_finite() && y.abs() < half) {
                return Err(Error::Geometry(format!(
                    "{name} = {y} must satisfy |offset| < width/2 = {half}"
                )));
            }
        }
        Ok(())
    }

    /// True when either antenna sits within one wavelength of a wall.
    pub fn near_wall(&self, wavelength: f64) -> bool {
        let half = self.width_w / 2.0;
        [self.tx_offset_y, self.rx_offset_y]
            .iter()
            .any(|y| half - y.abs() < wavelength)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosLink {
    pub geometry: CanyonGeometry,
    pub horizontal_range_x: f64,
    pub frequency: f64,
}

impl LosLink {
    pub fn new(geometry: CanyonGeometry, horizontal_range_x: f64, frequency: f64) -> Result<Self> {
        geometry.validate()?;
        require_positive("horizontal_range_x", horizontal_range_x)?;
        require_positive("frequency", frequency)?;
        Ok(Self {
            geometry,
            horizontal_range_x,
            frequency,
        })
    }

    /// Direct distance `sqrt(x^2 + (z_s - z)^2)` between centred antennas.
    pub fn range(&self) -> f64 {
        let dz = self.geometry.tx_height_zs - self.geometry.rx_height_z;
        self.horizontal_range_x.hypot(dz)
    }

    pub fn wavelength(&self) -> f64 {
        wavelength(self.frequency)
    }

    pub fn wavenumber(&self) -> f64 {
        wavenumber(self.frequency)
    }

    pub fn wall_loss(&self) -> Result<f64> {
        wall_loss_l(&self.geometry.wall, self.wavenumber())
    }

    /// Two-ray breakpoint range `4 z_s z / lambda`.
    pub fn breakpoint(&self) -> f64 {
        4.0 * self.geometry.tx_height_zs * self.geometry.rx_height_z / self.wavelength()
    }
}

/// `lambda^2 / (16 pi^{1.5} sqrt(w L) r^{1.5})` with no regime handling.
pub fn los_closed_form(wavelength: f64, width_w: f64, wall_loss: f64, range: f64) -> f64 {
    wavelength * wavelength / (16.0 * PI.powf(1.5) * (width_w * wall_loss).sqrt() * range.powf(1.5))
}

/// Average LOS canyon gain without the ground bounce.
///
/// Below one canyon width the free-space term dominates the image sum, so
/// the result is `max(Friis, closed form)` with [`Regime::FREE_SPACE_FLOOR`].
pub fn los_canyon_gain(link: &LosLink) -> Result<Flagged<f64>> {
    let g = &link.geometry;
    let r = link.range();
    let lam = link.wavelength();
    let l = link.wall_loss()?;
    let mut flags = Regime::empty();
    if r < 2.0 * g.width_w {
        flags |= Regime::SHORT_RANGE;
    }
    if l < 10.0 * g.width_w / r {
        flags |= Regime::WEAK_WALL_LOSS;
    }
    if g.near_wall(lam) {
        flags |= Regime::NEAR_WALL;
    }
    let mut value = los_closed_form(lam, g.width_w, l, r);
    if r < g.width_w {
        value = value.max(friis_gain(lam, r)?);
        flags |= Regime::FREE_SPACE_FLOOR;
    }
    Ok(Flagged::new(value, flags))
}

/// Ground-bounce arrival: coefficient, image path length and grazing angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundBounce {
    pub coefficient: Complex64,
    pub path_length: f64,
    pub grazing_angle: f64,
    pub flags: Regime,
}

/// Ground reflection from the source image below the floor.
///
/// `r_g = sqrt(x^2 + (z_s + z)^2)` and `theta_g = asin((z_s + z) / r_g)`;
/// the coefficient is the low-grazing exponential form for the geometry's
/// ground polarization.
pub fn ground_reflection(link: &LosLink) -> Result<GroundBounce> {
    let g = &link.geometry;
    let h = g.tx_height_zs + g.rx_height_z;
    let r_g = link.horizontal_range_x.hypot(h);
    let theta = GrazingAngle::clamped((h / r_g).asin());
    let gamma = fresnel_lowgraze_approx(theta, g.ground, g.ground_polarization)?;
    Ok(GroundBounce {
        coefficient: Complex64::new(gamma.value, 0.0),
        path_length: r_g,
        grazing_angle: theta.radians(),
        flags: gamma.flags,
    })
}

/// Coherent two-ray ground bounce modulating the canyon gain:
/// `P_canyon |e^{ikr} + Gamma_g e^{ik r_g}|^2`.
pub fn los_gain_coherent(link: &LosLink) -> Result<Flagged<f64>> {
    let base = los_canyon_gain(link)?;
    let bounce = ground_reflection(link)?;
    let k = link.wavenumber();
    let direct = Complex64::from_polar(1.0, k * link.range());
    let reflected = bounce.coefficient * Complex64::from_polar(1.0, k * bounce.path_length);
    let mut flags = base.flags | bounce.flags;
    if link.range() < link.breakpoint() {
        flags |= Regime::BEFORE_BREAKPOINT;
    }
    Ok(Flagged::new(
        base.value * (direct + reflected).norm_sqr(),
        flags,
    ))
}

/// Ground bounce added in power: `P_canyon (1 + |Gamma_g|^2)`.
pub fn los_gain_incoherent(link: &LosLink) -> Result<Flagged<f64>> {
    let base = los_canyon_gain(link)?;
    let bounce = ground_reflection(link)?;
    Ok(Flagged::new(
        base.value * (1.0 + bounce.coefficient.norm_sqr()),
        base.flags | bounce.flags,
    ))
}
