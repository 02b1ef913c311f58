//! Direct quadrature of the hot-wall area integral for a free-space source
//! illuminating a terminal at depth `d_in` behind a boundary.
//!
//! Boundary coordinates `(x', y')` are centred on the foot of the terminal;
//! `r' = sqrt(d_in^2 + x'^2 + y'^2)`. Unbounded directions use the map
//! `x' = d_in s / (1 - s^2)` on `s in (-1, 1)`.

use std::f64::consts::PI;

use crate::diffuse::{diffuse_pathgain, t_eff, DiffuseLink, PenetrationSpec};
use crate::error::Result;
use crate::flags::Regime;

use super::quadrature::{integrate_2d, integrate_to_infinity, QuadratureControl};

/// How absorption inside the diffuse region enters the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KappaTreatment {
    /// `exp(-kappa r') (kappa / r' + 1 / r'^2)`, the exact radial derivative.
    #[default]
    Exact,
    /// `exp(-kappa d_in) / r'^2`, constant absorption across the opening.
    Approximated,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HotwallOptions {
    pub kappa: KappaTreatment,
    /// Use `|r_s - r'|^4` with the source at range `r` and standoff `d_s`
    /// instead of the far-source `r^4`.
    pub exact_source_distance: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HotwallResult {
    /// Path gain from 2-D quadrature.
    pub value: f64,
    pub error_estimate: f64,
    /// Path gain from the 1-D radial reduction, unbounded boundaries only.
    pub radial_check: Option<f64>,
    /// Closed-form path gain for the same boundary.
    pub closed_form: f64,
    pub flags: Regime,
}

// Maps s in (-1, 1) onto the real line; returns (x, dx/ds).
fn unbounded_map(scale: f64, s: f64) -> (f64, f64) {
    let q = 1.0 - s * s;
    (scale * s / q, scale * (1.0 + s * s) / (q * q))
}

pub fn hotwall_quadrature(
    link: &DiffuseLink,
    spec: &PenetrationSpec,
    ctl: &QuadratureControl,
    opts: &HotwallOptions,
) -> Result<HotwallResult> {
    link.validate()?;
    spec.validate()?;
    ctl.validate()?;
    let closed = diffuse_pathgain(link, spec)?;
    let d = link.depth_d_in;
    let kappa = link.kappa;
    let r = link.range_r;
    let ds = link.standoff_d_s;
    // In-plane offset of the source from the terminal's foot.
    let xs = (r * r - ds * ds).max(0.0).sqrt();

    // Bounded specs carry their own geometry; the rest integrate the whole
    // plane and scale by the mixture transmission.
    let (t2, half_x, half_y) = match *spec {
        PenetrationSpec::Street { w1_m, t2 } => (t2, Some(w1_m / 2.0), None),
        PenetrationSpec::Aperture { w1_m, w2_m, t2 } => (t2, Some(w1_m / 2.0), Some(w2_m / 2.0)),
        PenetrationSpec::Unbounded { .. } | PenetrationSpec::FacadeMixture { .. } => {
            (t_eff(spec, d)?, None, None)
        }
    };

    let radial_derivative = |rp: f64| match opts.kappa {
        KappaTreatment::Exact => (-kappa * rp).exp() * (kappa / rp + 1.0 / (rp * rp)),
        KappaTreatment::Approximated => (-kappa * d).exp() / (rp * rp),
    };
    let integrand = |x: f64, y: f64| {
        let rp = (d * d + x * x + y * y).sqrt();
        let source = if opts.exact_source_distance {
            let q = (x - xs).powi(2) + y * y + ds * ds;
            r.powi(4) / (q * q)
        } else {
            1.0
        };
        radial_derivative(rp) * d / rp * source
    };
    // Either a finite half-width on [-1, 1] rescaled, or the unbounded map.
    let axis = |half: Option<f64>, s: f64| match half {
        Some(h) => (h * s, h),
        None => unbounded_map(d, s),
    };
    let q = integrate_2d(
        |sx, sy| {
            let (x, jx) = axis(half_x, sx);
            let (y, jy) = axis(half_y, sy);
            let v = integrand(x, y) * jx * jy;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        (-1.0, 1.0),
        (-1.0, 1.0),
        ctl,
    )?;

    // lambda^2 * 4 d_s^2 |T|^2 / (4 pi r^4) * 1/(16 pi^2)
    let lam = link.wavelength;
    let prefactor = lam * lam * ds * ds * t2 / (16.0 * PI.powi(3) * r.powi(4));

    let radial_check = if half_x.is_none() && half_y.is_none() && !opts.exact_source_distance {
        let radial = integrate_to_infinity(|rp| rp * (d / rp) * radial_derivative(rp), d, ctl)?;
        Some(prefactor * 2.0 * PI * radial.value)
    } else {
        None
    };

    Ok(HotwallResult {
        value: prefactor * q.value,
        error_estimate: prefactor * q.error_estimate,
        radial_check,
        closed_form: closed.value,
        flags: closed.flags,
    })
}
