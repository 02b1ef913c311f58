//! Reflection from smooth and rough dielectric boundaries.
//!
//! The exact plane-wave Fresnel coefficients are kept alongside the
//! low-grazing exponential forms used by every guided law, so the
//! approximation error is always measurable. Roughness is the 1-D two-state
//! telegraph surface (wall sections alternating with window or door wells).
//! Its scatter loss enters through [`WallSurface::roughness_loss_rate`] and
//! the combined wall-loss parameter [`wall_loss_l`].

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::{Flagged, Regime};
use crate::oracles::quadrature::{integrate, QuadratureControl};
use crate::units::{require_nonnegative, require_positive};

/// Grazing angle above which the low-grazing forms are flagged as extrapolated.
pub const LOW_GRAZE_LIMIT: f64 = 0.3;

/// Typical ground (concrete, dry soil) refraction index, sqrt(5).
pub const GROUND_INDEX_DEFAULT: f64 = 2.236_067_977_499_79;

/// Real relative refraction index of a half-space, strictly above 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Dielectric(f64);

impl Dielectric {
    pub fn new(refraction_index: f64) -> Result<Self> {
        if refraction_index.is_finite() && refraction_index > 1.0 {
            Ok(Self(refraction_index))
        } else {
            Err(Error::invalid(
                "refraction_index",
                format!("must be > 1, got {refraction_index}"),
            ))
        }
    }

    pub fn index(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Dielectric {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Dielectric> for f64 {
    fn from(d: Dielectric) -> f64 {
        d.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    /// Electric field parallel to the boundary (horizontal for the ground).
    Perpendicular,
    /// Electric field in the plane of incidence (vertical for the ground).
    #[default]
    Parallel,
}

/// Angle between a ray and the reflecting surface, in [0, pi/2].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GrazingAngle(f64);

impl GrazingAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if theta.is_finite() && (0.0..=FRAC_PI_2).contains(&theta) {
            Ok(Self(theta))
        } else {
            Err(Error::invalid(
                "grazing angle",
                format!("must lie in [0, pi/2], got {theta}"),
            ))
        }
    }

    /// Clamps tiny negative or slightly-over values produced by trigonometry.
    pub(crate) fn clamped(theta: f64) -> Self {
        Self(theta.clamp(0.0, FRAC_PI_2))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn regime(self) -> Regime {
        if self.0 > LOW_GRAZE_LIMIT {
            Regime::EXTRAPOLATED_ANGLE
        } else {
            Regime::empty()
        }
    }
}

/// Two-state random telegraph surface profile.
///
/// State 1 (probability `p1`, mean length `1/rate1`) is the recessed
/// window/door well, state 2 the wall face. `half_depth` is half the well
/// depth. The profile has mean `A (p1 - p2)` and variance `4 A^2 p1 p2`, with
/// an exponential correlation decaying at `rate1 + rate2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelegraphRoughness {
    half_depth: f64,
    p1: f64,
    p2: f64,
    rate1: f64,
    rate2: f64,
}

impl TelegraphRoughness {
    pub fn new(half_depth: f64, p1: f64, p2: f64, rate1: f64, rate2: f64) -> Result<Self> {
        require_nonnegative("half_depth_A", half_depth)?;
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(p.is_finite() && p > 0.0 && p < 1.0) {
                return Err(Error::invalid(name, format!("must lie in (0, 1), got {p}")));
            }
        }
        if (p1 + p2 - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(
                "p1 + p2",
                format!("state probabilities must sum to 1, got {}", p1 + p2),
            ));
        }
        require_positive("rate_mu1", rate1)?;
        require_positive("rate_mu2", rate2)?;
        Ok(Self {
            half_depth,
            p1,
            p2,
            rate1,
            rate2,
        })
    }

    /// Builds the profile from mean well width `1/mu1` and mean spacing `1/mu2`.
    pub fn from_widths(
        half_depth: f64,
        p1: f64,
        p2: f64,
        mean_width: f64,
        mean_gap: f64,
    ) -> Result<Self> {
        require_positive("mean_width_m", mean_width)?;
        require_positive("mean_gap_m", mean_gap)?;
        Self::new(half_depth, p1, p2, 1.0 / mean_width, 1.0 / mean_gap)
    }

    pub fn half_depth(&self) -> f64 {
        self.half_depth
    }
    pub fn p1(&self) -> f64 {
        self.p1
    }
    pub fn p2(&self) -> f64 {
        self.p2
    }
    pub fn rate1(&self) -> f64 {
        self.rate1
    }
    pub fn rate2(&self) -> f64 {
        self.rate2
    }

    pub fn total_rate(&self) -> f64 {
        self.rate1 + self.rate2
    }

    pub fn mean_height(&self) -> f64 {
        self.half_depth * (self.p1 - self.p2)
    }

    pub fn variance(&self) -> f64 {
        4.0 * self.half_depth * self.half_depth * self.p1 * self.p2
    }

    /// Same profile with a different well half-depth.
    pub fn with_half_depth(&self, half_depth: f64) -> Result<Self> {
        Self::new(half_depth, self.p1, self.p2, self.rate1, self.rate2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallSurface {
    pub dielectric: Dielectric,
    /// `None` is a smooth wall.
    pub roughness: Option<TelegraphRoughness>,
}

impl WallSurface {
    pub fn smooth(dielectric: Dielectric) -> Self {
        Self {
            dielectric,
            roughness: None,
        }
    }

    pub fn rough(dielectric: Dielectric, roughness: TelegraphRoughness) -> Self {
        Self {
            dielectric,
            roughness: Some(roughness),
        }
    }

    /// Field attenuation per radian of grazing angle from roughness scatter:
    /// `16 k^{3/2} A^2 p1 p2 sqrt(mu1 + mu2)`.
    pub fn roughness_loss_rate(&self, k: f64) -> f64 {
        self.roughness.map_or(0.0, |r| roughness_loss_rate(&r, k))
    }
}

fn roughness_loss_rate(r: &TelegraphRoughness, k: f64) -> f64 {
    16.0 * k.powf(1.5) * r.half_depth * r.half_depth * r.p1 * r.p2 * r.total_rate().sqrt()
}

/// Exact plane-wave reflection coefficient of a dielectric half-space.
///
/// Angles are grazing. Both polarizations tend to -1 at grazing incidence.
pub fn fresnel_exact(theta: GrazingAngle, n: Dielectric, polarization: Polarization) -> Complex64 {
    let (s, c) = theta.0.sin_cos();
    let n2 = n.0 * n.0;
    let q = Complex64::new(n2 - c * c, 0.0).sqrt();
    match polarization {
        Polarization::Perpendicular => (s - q) / (s + q),
        Polarization::Parallel => (n2 * s - q) / (n2 * s + q),
    }
}

/// Exponential low-grazing approximation of the Fresnel coefficient.
///
/// Perpendicular: `-exp(-(2/n) theta)`. Parallel:
/// `-exp(-(2 n^2 / sqrt(n^2 - 2)) theta)`, defined only for `n^2 > 2`.
pub fn fresnel_lowgraze_approx(
    theta: GrazingAngle,
    n: Dielectric,
    polarization: Polarization,
) -> Result<Flagged<f64>> {
    let rate = lowgraze_rate(n, polarization)?;
    Ok(Flagged::new(-(-rate * theta.0).exp(), theta.regime()))
}

/// Field attenuation per radian in the low-grazing form.
pub fn lowgraze_rate(n: Dielectric, polarization: Polarization) -> Result<f64> {
    let n = n.0;
    match polarization {
        Polarization::Perpendicular => Ok(2.0 / n),
        Polarization::Parallel => {
            let d = n * n - 2.0;
            if d <= 0.0 {
                return Err(Error::Domain(format!(
                    "parallel low-grazing form needs n^2 > 2, got n = {n}"
                )));
            }
            Ok(2.0 * n * n / d.sqrt())
        }
    }
}

/// Continuous part of the telegraph-surface spectral density, m^3.
///
/// `4 A^2 p1 p2 (1/2pi) 2 mu / (mu^2 + chi^2)` with `mu = mu1 + mu2`. The
/// `eta^2 delta(chi)` mean-height term is omitted; it shifts the specular
/// plane and does not scatter.
pub fn roughness_spectrum(roughness: &TelegraphRoughness, chi_x: f64) -> f64 {
    let mu = roughness.total_rate();
    roughness.variance() / (2.0 * PI) * 2.0 * mu / (mu * mu + chi_x * chi_x)
}

/// Specular amplitude reduction `|V_c|` from large-scale roughness, in (0, 1].
pub fn specular_roughness_factor(
    theta: GrazingAngle,
    roughness: &TelegraphRoughness,
    k: f64,
) -> Result<Flagged<f64>> {
    require_positive("wavenumber", k)?;
    Ok(Flagged::new(
        (-roughness_loss_rate(roughness, k) * theta.0).exp(),
        theta.regime(),
    ))
}

/// Wall-loss parameter `L = 4/n_eff + 32 k^{3/2} A^2 p1 p2 sqrt(mu1 + mu2)`.
pub fn wall_loss_l(surface: &WallSurface, k: f64) -> Result<f64> {
    require_positive("wavenumber", k)?;
    Ok(4.0 / surface.dielectric.0 + 2.0 * surface.roughness_loss_rate(k))
}

/// Magnitude of the rough-wall reflection coefficient at low grazing angle:
/// smooth-dielectric loss times roughness scatter, `exp(-(L/2) theta)`.
pub fn reflection_total(
    theta: GrazingAngle,
    surface: &WallSurface,
    k: f64,
) -> Result<Flagged<f64>> {
    require_positive("wavenumber", k)?;
    let smooth = (-(2.0 / surface.dielectric.0) * theta.0).exp();
    let rough = (-surface.roughness_loss_rate(k) * theta.0).exp();
    Ok(Flagged::new(smooth * rough, theta.regime()))
}

/// `|Gamma|^2` of the exact Fresnel coefficient averaged uniformly over
/// grazing angles in [0, pi/2].
pub fn angle_averaged_power_reflectance(n: Dielectric, polarization: Polarization) -> Result<f64> {
    let ctl = QuadratureControl::with_rel_tol(1e-10);
    let r = integrate(
        |t| fresnel_exact(GrazingAngle::clamped(t), n, polarization).norm_sqr(),
        0.0,
        FRAC_PI_2,
        &ctl,
    )?;
    Ok(r.value / FRAC_PI_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::wavenumber;

    fn sqrt5() -> Dielectric {
        Dielectric::new(5f64.sqrt()).unwrap()
    }

    fn corridor() -> WallSurface {
        WallSurface::rough(
            Dielectric::new(1.7).unwrap(),
            TelegraphRoughness::from_widths(0.035, 0.25, 0.75, 1.0, 3.0).unwrap(),
        )
    }

    fn urban() -> WallSurface {
        WallSurface::rough(
            Dielectric::new(2.2).unwrap(),
            TelegraphRoughness::from_widths(0.1, 0.85, 0.15, 0.33, 2.0).unwrap(),
        )
    }

    #[test]
    fn normal_incidence_closed_form() {
        let g = fresnel_exact(
            GrazingAngle::new(FRAC_PI_2).unwrap(),
            sqrt5(),
            Polarization::Perpendicular,
        );
        let s5 = 5f64.sqrt();
        assert!((g.re - (1.0 - s5) / (1.0 + s5)).abs() < 1e-12);
        assert!(g.im.abs() < 1e-15);
        assert!((g.re + 0.381_966).abs() < 1e-6);
    }

    #[test]
    fn grazing_limit_is_minus_one() {
        for n in [1.01, 1.5, 5f64.sqrt(), 9.0] {
            for pol in [Polarization::Perpendicular, Polarization::Parallel] {
                let g = fresnel_exact(
                    GrazingAngle::new(0.0).unwrap(),
                    Dielectric::new(n).unwrap(),
                    pol,
                );
                assert!((g.re + 1.0).abs() < 1e-15 && g.im.abs() < 1e-15);
                if pol == Polarization::Perpendicular || n * n > 2.0 {
                    let a = fresnel_lowgraze_approx(
                        GrazingAngle::new(0.0).unwrap(),
                        Dielectric::new(n).unwrap(),
                        pol,
                    )
                    .unwrap();
                    assert_eq!(a.value, -1.0);
                }
            }
        }
    }

    #[test]
    fn lowgraze_examples() {
        let th = GrazingAngle::new(0.05).unwrap();
        let perp = fresnel_lowgraze_approx(th, sqrt5(), Polarization::Perpendicular).unwrap();
        assert!((perp.value + (-2.0 * 0.05 / 5f64.sqrt()).exp()).abs() < 1e-15);
        let exact = fresnel_exact(th, sqrt5(), Polarization::Perpendicular);
        assert!((perp.value - exact.re).abs() < 0.01);
        let par = fresnel_lowgraze_approx(th, sqrt5(), Polarization::Parallel).unwrap();
        assert!((par.value + (-(2.0 * 5.0 / 3f64.sqrt()) * 0.05).exp()).abs() < 1e-15);
        assert!(par.flags.is_empty());
    }

    #[test]
    fn parallel_lowgraze_domain_error() {
        let th = GrazingAngle::new(0.01).unwrap();
        let n = Dielectric::new(1.4).unwrap();
        assert!(matches!(
            fresnel_lowgraze_approx(th, n, Polarization::Parallel),
            Err(Error::Domain(_))
        ));
        assert!(fresnel_lowgraze_approx(th, n, Polarization::Perpendicular).is_ok());
    }

    #[test]
    fn extrapolated_flag_above_threshold() {
        let th = GrazingAngle::new(0.31).unwrap();
        let r = fresnel_lowgraze_approx(th, sqrt5(), Polarization::Perpendicular).unwrap();
        assert!(r.flags.contains(Regime::EXTRAPOLATED_ANGLE));
        assert!(GrazingAngle::new(-0.1).is_err());
        assert!(GrazingAngle::new(1.6).is_err());
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(Dielectric::new(1.0).is_err());
        assert!(TelegraphRoughness::new(0.1, 0.3, 0.6, 1.0, 1.0).is_err());
        assert!(TelegraphRoughness::new(-0.1, 0.5, 0.5, 1.0, 1.0).is_err());
        assert!(TelegraphRoughness::new(0.1, 0.5, 0.5, 0.0, 1.0).is_err());
        assert!(TelegraphRoughness::new(0.1, 1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn spectrum_at_zero_and_symmetry() {
        let r = TelegraphRoughness::new(0.035, 0.25, 0.75, 1.0, 1.0 / 3.0).unwrap();
        let expect = 4.0 * 0.035 * 0.035 * 0.25 * 0.75 / PI / (4.0 / 3.0);
        assert!((roughness_spectrum(&r, 0.0) / expect - 1.0).abs() < 1e-14);
        for chi in [0.1, 2.0, 77.0] {
            assert_eq!(roughness_spectrum(&r, chi), roughness_spectrum(&r, -chi));
        }
    }

    #[test]
    fn spectrum_integrates_to_variance() {
        let r = TelegraphRoughness::new(0.035, 0.25, 0.75, 1.0, 1.0 / 3.0).unwrap();
        let x = 1e4 * r.total_rate();
        let ctl = QuadratureControl::with_rel_tol(1e-12);
        let v = integrate(|c| roughness_spectrum(&r, c), -x, x, &ctl)
            .unwrap()
            .value;
        assert!((v / r.variance() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn smooth_wall_l() {
        let s = WallSurface::smooth(Dielectric::new(2.0).unwrap());
        assert_eq!(wall_loss_l(&s, 100.0).unwrap(), 2.0);
    }

    #[test]
    fn corridor_wall_l_at_2ghz() {
        let k = wavenumber(2e9);
        let l = wall_loss_l(&corridor(), k).unwrap();
        let expect =
            4.0 / 1.7 + 32.0 * k.powf(1.5) * 0.035f64.powi(2) * 0.1875 * (4.0f64 / 3.0).sqrt();
        assert!((l - expect).abs() < 1e-12);
        // Regression value, frozen after first evaluation.
        assert!((l - 4.656_188).abs() < 1e-6, "{l}");
    }

    #[test]
    fn urban_roughness_exceeds_corridor_at_equal_k() {
        let k = wavenumber(3.5e9);
        assert!(wall_loss_l(&urban(), k).unwrap() > 0.0);
        assert!(urban().roughness_loss_rate(k) > corridor().roughness_loss_rate(k));
    }

    #[test]
    fn reflection_total_matches_wall_loss() {
        let k = wavenumber(2e9);
        let l = wall_loss_l(&corridor(), k).unwrap();
        let g = reflection_total(GrazingAngle::new(0.02).unwrap(), &corridor(), k).unwrap();
        assert!((g.value - (-l * 0.02 / 2.0).exp()).abs() < 1e-15);
        assert_eq!(
            reflection_total(GrazingAngle::new(0.0).unwrap(), &corridor(), k)
                .unwrap()
                .value,
            1.0
        );
    }

    #[test]
    fn roughness_factor_limits() {
        let r = TelegraphRoughness::new(0.0, 0.25, 0.75, 1.0, 1.0).unwrap();
        let th = GrazingAngle::new(0.2).unwrap();
        assert_eq!(specular_roughness_factor(th, &r, 500.0).unwrap().value, 1.0);
        let r = r.with_half_depth(0.05).unwrap();
        assert_eq!(
            specular_roughness_factor(GrazingAngle::new(0.0).unwrap(), &r, 500.0)
                .unwrap()
                .value,
            1.0
        );
    }

    #[test]
    fn averaged_reflectance_in_unit_interval() {
        let v = angle_averaged_power_reflectance(sqrt5(), Polarization::Perpendicular).unwrap();
        assert!(v > 0.14 && v < 1.0, "{v}");
        let p = angle_averaged_power_reflectance(sqrt5(), Polarization::Parallel).unwrap();
        assert!(p < v);
    }
}
