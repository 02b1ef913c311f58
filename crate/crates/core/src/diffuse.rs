//! Average power from a free-space source into a diffusely scattering
//! half-space (foliage, building interiors, street clutter).
//!
//! The boundary facing the source acts as a "hot" secondary source. Its
//! effective transmission folds the material power transmission together
//! with the solid angle the illuminated aperture subtends at the terminal.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::{Flagged, Regime};
use crate::units::{require_fraction, require_nonnegative, require_positive};

/// Boundary between open space and the diffuse region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum PenetrationSpec {
    /// Unlimited boundary with power transmission `t2`.
    Unbounded { t2: f64 },
    /// Open strip of width `w1_m` (a street seen from above).
    Street { w1_m: f64, t2: f64 },
    /// Rectangular opening `w1_m x w2_m` in an otherwise opaque wall.
    Aperture { w1_m: f64, w2_m: f64, t2: f64 },
    /// Facade mixing windows and wall by area fraction.
    FacadeMixture {
        p_window: f64,
        t_window: f64,
        t_wall: f64,
    },
}

impl PenetrationSpec {
    pub fn open() -> Self {
        PenetrationSpec::Unbounded { t2: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PenetrationSpec::Unbounded { t2 } => {
                require_fraction("t2", t2)?;
            }
            PenetrationSpec::Street { w1_m, t2 } => {
                require_positive("w1_m", w1_m)?;
                require_fraction("t2", t2)?;
            }
            PenetrationSpec::Aperture { w1_m, w2_m, t2 } => {
                require_positive("w1_m", w1_m)?;
                require_positive("w2_m", w2_m)?;
                require_fraction("t2", t2)?;
            }
            PenetrationSpec::FacadeMixture {
                p_window,
                t_window,
                t_wall,
            } => {
                require_fraction("p_window", p_window)?;
                require_fraction("t_window", t_window)?;
                require_fraction("t_wall", t_wall)?;
            }
        }
        Ok(())
    }
}

/// Effective power transmission of the boundary for a terminal at depth
/// `depth_d_in` behind it, in [0, 1].
pub fn t_eff(spec: &PenetrationSpec, depth_d_in: f64) -> Result<f64> {
    spec.validate()?;
    let bounded = matches!(
        spec,
        PenetrationSpec::Street { .. } | PenetrationSpec::Aperture { .. }
    );
    if bounded {
        require_positive("depth_d_in", depth_d_in)?;
    }
    let d = depth_d_in;
    Ok(match *spec {
        PenetrationSpec::Unbounded { t2 } => t2,
        PenetrationSpec::Street { w1_m, t2 } => t2 * (2.0 / PI) * (w1_m / (2.0 * d)).atan(),
        PenetrationSpec::Aperture { w1_m, w2_m, t2 } => {
            let arg = w1_m * w2_m / (2.0 * d * (4.0 * d * d + w1_m * w1_m + w2_m * w2_m).sqrt());
            t2 * (2.0 / PI) * arg.atan()
        }
        PenetrationSpec::FacadeMixture {
            p_window,
            t_window,
            t_wall,
        } => p_window * t_window + (1.0 - p_window) * t_wall,
    })
}

/// Geometry of a free-space source illuminating a terminal inside clutter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffuseLink {
    /// Source distance from the boundary plane, m.
    pub standoff_d_s: f64,
    /// Source distance to the centre of the hot region, m.
    pub range_r: f64,
    /// Terminal depth behind the boundary, m.
    pub depth_d_in: f64,
    /// Absorption of the diffuse region, Nep/m.
    pub kappa: f64,
    pub wavelength: f64,
}

impl DiffuseLink {
    pub fn validate(&self) -> Result<()> {
        require_positive("standoff_d_s", self.standoff_d_s)?;
        require_positive("range_r", self.range_r)?;
        require_positive("depth_d_in", self.depth_d_in)?;
        require_nonnegative("kappa", self.kappa)?;
        require_positive("wavelength", self.wavelength)?;
        if self.range_r < self.standoff_d_s {
            return Err(Error::Geometry(format!(
                "range_r ({}) must be >= standoff_d_s ({})",
                self.range_r, self.standoff_d_s
            )));
        }
        Ok(())
    }
}

/// `lambda^2 d_s^2 T_eff exp(-kappa d_in) / (8 pi^2 r^4)`.
///
/// Flags [`Regime::HIGH_ABSORPTION`] for bounded apertures when
/// `kappa * d_in` is not small, where the aperture form assumes constant
/// absorption across the opening.
pub fn diffuse_pathgain(link: &DiffuseLink, spec: &PenetrationSpec) -> Result<Flagged<f64>> {
    link.validate()?;
    let t = t_eff(spec, link.depth_d_in)?;
    let mut flags = Regime::empty();
    if matches!(spec, PenetrationSpec::Aperture { .. }) && link.kappa * link.depth_d_in > 0.1 {
        flags |= Regime::HIGH_ABSORPTION;
    }
    Ok(Flagged::new(
        quartic_gain(link.wavelength, link.standoff_d_s, link.range_r)
            * t
            * (-link.kappa * link.depth_d_in).exp(),
        flags,
    ))
}

/// Lossless quartic core `lambda^2 d_s^2 / (8 pi^2 r^4)` shared by every
/// side-penetration and over-top law.
pub(crate) fn quartic_gain(wavelength: f64, standoff: f64, range: f64) -> f64 {
    let r2 = range * range;
    wavelength * wavelength * standoff * standoff / (8.0 * PI * PI * r2 * r2)
}

/// Power enhancement `(1 + |Gamma_g|^2)(1 + |Gamma_w|^2)` from ground and
/// back-wall bounces.
pub fn enhancement_factors(gamma_g2: f64, gamma_w2: f64) -> Result<f64> {
    require_fraction("gamma_g2", gamma_g2)?;
    require_fraction("gamma_w2", gamma_w2)?;
    Ok((1.0 + gamma_g2) * (1.0 + gamma_w2))
}
