//! Physical constants and the few unit conversions used at the boundaries.
//!
//! Internally every length is in meters, frequency in hertz, absorption in
//! Nepers per meter and gain a linear power ratio. Decibels appear only when
//! values are printed, fitted or compared.

use std::f64::consts::{LN_10, PI};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Decibels per Neper for power quantities (10 / ln 10).
pub const DB_PER_NEPER: f64 = 10.0 / LN_10;

/// Converts a linear power ratio to dB.
#[inline]
pub fn to_db(power_ratio: f64) -> f64 {
    10.0 * power_ratio.log10()
}

/// Converts dB to a linear power ratio.
#[inline]
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Power attenuation in dB of `exp(-kappa * length)`.
#[inline]
pub fn nepers_to_db(nepers: f64) -> f64 {
    nepers * DB_PER_NEPER
}

#[inline]
pub fn wavelength(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / frequency_hz
}

#[inline]
pub fn wavenumber(frequency_hz: f64) -> f64 {
    2.0 * PI * frequency_hz / SPEED_OF_LIGHT
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

pub(crate) fn require_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and >= 0, got {value}"),
        ))
    }
}

pub(crate) fn require_fraction(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::invalid(
            name,
            format!("must lie in [0, 1], got {value}"),
        ))
    }
}
