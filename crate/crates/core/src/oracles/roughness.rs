//! Numerical evaluation of the specular loss from a corrugated telegraph
//! surface, both with the large-scale bracket `sqrt(2|chi|/k)` and with the
//! full bracket `[sin^2 t + 2(|chi|/k) cos t - (chi/k)^2]^{1/2}`.

use crate::error::Result;
use crate::flags::Regime;
use crate::surface_em::{roughness_spectrum, GrazingAngle, TelegraphRoughness};
use crate::units::require_positive;

use super::quadrature::{integrate, integrate_to_infinity, QuadratureControl};

/// The large-scale bracket is trusted only when `k >= LARGE_SCALE_RATIO * mu`.
pub const LARGE_SCALE_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoughnessIntegral {
    /// `2 k^2 theta sqrt(2/k) * int G(chi) sqrt|chi| dchi`, by quadrature.
    pub simplified_loss: f64,
    /// `2 k^2 sin(theta) * int G(chi) [bracket]^{1/2} dchi`, by quadrature.
    pub general_loss: f64,
    /// `16 k^{3/2} A^2 p1 p2 sqrt(mu) theta`.
    pub closed_form_loss: f64,
    /// `simplified_loss / closed_form_loss`; 1 when both vanish.
    pub ratio: f64,
    pub flags: Regime,
}

impl RoughnessIntegral {
    /// Specular amplitude factor `1 - simplified_loss`.
    pub fn factor(&self) -> f64 {
        1.0 - self.simplified_loss
    }
}

// Splits [0, b] at decades of `mu` so the Lorentzian peak is resolved.
fn integrate_over_decades<F: FnMut(f64) -> f64>(
    mut f: F,
    mu: f64,
    b: f64,
    ctl: &QuadratureControl,
) -> Result<f64> {
    let mut edges = vec![0.0];
    let mut e = mu;
    while e < b {
        edges.push(e);
        e *= 10.0;
    }
    edges.push(b);
    let mut total = 0.0;
    for pair in edges.windows(2) {
        total += integrate(&mut f, pair[0], pair[1], ctl)?.value;
    }
    Ok(total)
}

pub fn roughness_integral(
    theta: GrazingAngle,
    roughness: &TelegraphRoughness,
    k: f64,
    ctl: &QuadratureControl,
) -> Result<RoughnessIntegral> {
    require_positive("wavenumber", k)?;
    ctl.validate()?;
    let t = theta.radians();
    let mu = roughness.total_rate();
    let mut flags = theta.regime();
    if k < LARGE_SCALE_RATIO * mu {
        flags |= Regime::OUTSIDE_APPLICABILITY;
    }
    let closed_form_loss = 16.0
        * k.powf(1.5)
        * roughness.half_depth().powi(2)
        * roughness.p1()
        * roughness.p2()
        * mu.sqrt()
        * t;
    if roughness.variance() == 0.0 {
        return Ok(RoughnessIntegral {
            simplified_loss: 0.0,
            general_loss: 0.0,
            closed_form_loss,
            ratio: 1.0,
            flags,
        });
    }

    // Both integrands are even in chi; integrate the positive half twice.
    let g = |chi: f64| roughness_spectrum(roughness, chi);
    let near = integrate(|c| g(c) * c.sqrt(), 0.0, mu, ctl)?.value;
    let far = integrate_to_infinity(|c| g(c) * c.sqrt(), mu, ctl)?.value;
    let simplified_loss = 2.0 * k * k * t * (2.0 / k).sqrt() * 2.0 * (near + far);

    let (s, c) = t.sin_cos();
    let upper = k * (1.0 + c);
    let bracket = |chi: f64| {
        let q = chi / k;
        (s * s + 2.0 * q * c - q * q).max(0.0).sqrt()
    };
    let general = integrate_over_decades(|chi| g(chi) * bracket(chi), mu, upper, ctl)?;
    let general_loss = 2.0 * k * k * s * 2.0 * general;

    Ok(RoughnessIntegral {
        simplified_loss,
        general_loss,
        closed_form_loss,
        ratio: simplified_loss / closed_form_loss,
        flags,
    })
}
