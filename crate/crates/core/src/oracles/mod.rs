//! First-principles numerical verifiers for the closed forms: exact image
//! sums, the outdoor-indoor and tree-guided reflection series, quadrature of
//! the hot-wall integral and of the roughness spectrum.
//!
//! Oracles never reuse the approximation they check: image distances and
//! grazing angles are exact, and quadratures integrate the unexpanded
//! integrands.

use std::time::Instant;

use crate::error::{Error, Result};

pub mod hotwall;
pub mod image_sum;
pub mod quadrature;
pub mod roughness;
pub mod series;
pub mod verify;

pub use hotwall::{hotwall_quadrature, HotwallOptions, HotwallResult, KappaTreatment};
pub use image_sum::{image_sum_power, image_sum_power_with, ImageSumOptions, WallReflection};
pub use quadrature::{QuadratureControl, QuadratureResult};
pub use roughness::{roughness_integral, RoughnessIntegral};
pub use series::{guided_trees_series_power, oi_image_series_power, oi_image_series_power_with};
pub use verify::{
    run_all, run_suite, Metric, OracleReport, Suite, ToleranceProfile, VerifyOptions,
};

/// Truncation control for the infinite reflection sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationControl {
    pub max_order: usize,
    /// Stop once a term falls below this fraction of the accumulated sum.
    pub relative_tail_tol: f64,
    pub deadline: Option<Instant>,
}

impl Default for SummationControl {
    fn default() -> Self {
        Self {
            max_order: 1_000_000,
            relative_tail_tol: 1e-10,
            deadline: None,
        }
    }
}

impl SummationControl {
    pub fn validate(&self) -> Result<()> {
        if self.max_order < 1 {
            return Err(Error::invalid("max_order", "must be >= 1"));
        }
        if !(self.relative_tail_tol.is_finite() && self.relative_tail_tol > 0.0) {
            return Err(Error::invalid(
                "relative_tail_tol",
                format!("must be finite and > 0, got {}", self.relative_tail_tol),
            ));
        }
        Ok(())
    }

    pub(crate) fn check_deadline(&self, what: &'static str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Cancelled(what)),
            _ => Ok(()),
        }
    }
}

/// A truncated series value and the number of orders summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub orders: usize,
}

/// Sums `term(m)` for `m = 0, 1, ...` until a term drops below the tail
/// tolerance relative to the running total.
pub(crate) fn sum_until_converged(
    ctl: &SummationControl,
    what: &'static str,
    mut term: impl FnMut(usize) -> f64,
) -> Result<SeriesValue> {
    ctl.validate()?;
    let mut acc = 0.0;
    for m in 0..=ctl.max_order {
        if m % 4096 == 0 {
            ctl.check_deadline(what)?;
        }
        let t = term(m);
        acc += t;
        if m > 0 && t.abs() <= ctl.relative_tail_tol * acc.abs() {
            return Ok(SeriesValue {
                value: acc,
                orders: m + 1,
            });
        }
    }
    Err(Error::NonConvergence {
        what,
        limit: ctl.max_order,
    })
}
