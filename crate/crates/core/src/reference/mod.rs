//! Comparison baselines: free space, the slope-intercept form, the 36.814
//! urban-macro NLOS formula, and the 38.901 UMa/UMi/InH/O2I curves.
//!
//! 3GPP formulas return path *loss* in dB with `f_c` in GHz, as the
//! standards define them; [`tr38901_gain_db`] negates for comparisons.

pub mod tr38901;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::{Flagged, Regime};
use crate::units::{require_nonnegative, require_positive, SPEED_OF_LIGHT};

use self::tr38901::{Applicability, LosCoefficients, NlosCoefficients};

/// Free-space gain `(lambda / 4 pi r)^2`.
pub fn friis_gain(lambda: f64, r: f64) -> Result<f64> {
    require_positive("wavelength", lambda)?;
    require_positive("range", r)?;
    Ok((lambda / (4.0 * PI * r)).powi(2))
}

/// `P_dB = P1_dB - 10 n log10(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeIntercept {
    /// Gain at 1 m, dB.
    pub intercept_db: f64,
    pub exponent: f64,
}

impl SlopeIntercept {
    pub fn eval_db(&self, r: f64) -> f64 {
        self.intercept_db - 10.0 * self.exponent * r.log10()
    }
}

pub fn slope_intercept_eval(model: &SlopeIntercept, r: f64) -> Result<f64> {
    require_positive("range", r)?;
    Ok(model.eval_db(r))
}

/// 3GPP 36.814 urban-macro NLOS path loss in dB.
///
/// Street width `w`, building height `z_b`, base and mobile heights in
/// meters, `f_c` in GHz, `d_3d` in meters.
pub fn uma_nlos_36814(
    w: f64,
    z_b: f64,
    z_bs: f64,
    z_m: f64,
    fc_ghz: f64,
    d_3d: f64,
) -> Result<f64> {
    for (name, v) in [
        ("street_width_w", w),
        ("building_height_zb", z_b),
        ("z_bs", z_bs),
        ("z_m", z_m),
        ("f_c", fc_ghz),
        ("d_3d", d_3d),
    ] {
        require_positive(name, v)?;
    }
    let lg = f64::log10;
    Ok(
        161.04 - 7.1 * lg(w) + 7.5 * lg(z_b) - (24.37 - 3.7 * (z_b / z_bs).powi(2)) * lg(z_bs)
            + (43.42 - 3.1 * lg(z_bs)) * (lg(d_3d) - 3.0)
            + 20.0 * lg(fc_ghz)
            - (3.2 * lg(11.75 * z_m).powi(2) - 4.97),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "UMa")]
    UMa,
    #[serde(rename = "UMi")]
    UMi,
    #[serde(rename = "InH")]
    InH,
    /// UMi street canyon outdoor path with low-loss building penetration.
    #[serde(rename = "O2I")]
    O2I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "LOS")]
    Los,
    #[serde(rename = "NLOS")]
    Nlos,
}

/// A 38.901 evaluation scenario. For `O2I` the condition selects the
/// outdoor UMi curve used as the basic path loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeGppScenario {
    pub family: Family,
    pub condition: Condition,
    pub fc_ghz: f64,
    pub h_bs: f64,
    pub h_ut: f64,
    /// Indoor 2-D distance for O2I, meters.
    #[serde(default)]
    pub indoor_depth_m: f64,
}

impl ThreeGppScenario {
    pub fn new(family: Family, condition: Condition, fc_ghz: f64, h_bs: f64, h_ut: f64) -> Self {
        Self {
            family,
            condition,
            fc_ghz,
            h_bs,
            h_ut,
            indoor_depth_m: 0.0,
        }
    }
}

fn applicability_flags(range: &Applicability, d: f64, h_ut: f64, fc: f64) -> Regime {
    let (f_lo, f_hi) = tr38901::FREQUENCY_RANGE_GHZ;
    let ok = d >= range.min_distance
        && d <= range.max_distance
        && h_ut >= range.min_ut_height
        && h_ut <= range.max_ut_height
        && (f_lo..=f_hi).contains(&fc);
    if ok {
        Regime::empty()
    } else {
        Regime::OUTSIDE_APPLICABILITY
    }
}

fn los_loss(c: &LosCoefficients, d_2d: f64, h_bs: f64, h_ut: f64, fc: f64) -> f64 {
    let d_3d = d_2d.hypot(h_bs - h_ut);
    let pl1 = c.intercept + c.distance_slope_pl1 * d_3d.log10() + c.frequency_slope * fc.log10();
    if c.breakpoint_slope == 0.0 {
        return pl1;
    }
    let h_e = tr38901::ENVIRONMENT_HEIGHT;
    let d_bp = 4.0 * (h_bs - h_e) * (h_ut - h_e) * fc * 1e9 / SPEED_OF_LIGHT;
    if d_2d <= d_bp {
        pl1
    } else {
        c.intercept + c.distance_slope_pl2 * d_3d.log10() + c.frequency_slope * fc.log10()
            - c.breakpoint_slope * (d_bp * d_bp + (h_bs - h_ut).powi(2)).log10()
    }
}

fn nlos_loss(c: &NlosCoefficients, d_2d: f64, h_bs: f64, h_ut: f64, fc: f64) -> f64 {
    let d_3d = d_2d.hypot(h_bs - h_ut);
    c.intercept + c.distance_slope * d_3d.log10() + c.frequency_slope * fc.log10()
        - c.ut_height_slope * (h_ut - 1.5)
}

/// 38.901 path loss in dB at horizontal distance `d_2d` (meters).
///
/// NLOS curves return `max(LOS, NLOS')`. O2I adds the low-loss wall
/// penetration and 0.5 dB/m indoor loss to the UMi outdoor loss evaluated
/// at the total distance.
pub fn tr38901_eval(s: &ThreeGppScenario, d_2d: f64) -> Result<Flagged<f64>> {
    require_positive("distance", d_2d)?;
    require_positive("f_c", s.fc_ghz)?;
    require_positive("h_bs", s.h_bs)?;
    require_positive("h_ut", s.h_ut)?;
    require_nonnegative("indoor_depth_m", s.indoor_depth_m)?;
    let fc = s.fc_ghz;
    let (los, nlos, range) = match s.family {
        Family::UMa => (&tr38901::UMA_LOS, &tr38901::UMA_NLOS, &tr38901::UMA_RANGE),
        Family::UMi | Family::O2I => (&tr38901::UMI_LOS, &tr38901::UMI_NLOS, &tr38901::UMI_RANGE),
        Family::InH => (&tr38901::INH_LOS, &tr38901::INH_NLOS, &tr38901::INH_RANGE),
    };
    if los.breakpoint_slope > 0.0
        && (s.h_bs <= tr38901::ENVIRONMENT_HEIGHT || s.h_ut <= tr38901::ENVIRONMENT_HEIGHT)
    {
        return Err(Error::Unsupported(format!(
            "{:?} breakpoint needs h_BS and h_UT above {} m",
            s.family,
            tr38901::ENVIRONMENT_HEIGHT
        )));
    }
    let d_total = d_2d + s.indoor_depth_m;
    let d_check = match s.family {
        Family::InH => d_total.hypot(s.h_bs - s.h_ut),
        _ => d_total,
    };
    let flags = applicability_flags(range, d_check, s.h_ut, fc);
    let los_pl = los_loss(los, d_total, s.h_bs, s.h_ut, fc);
    let outdoor = match s.condition {
        Condition::Los => los_pl,
        Condition::Nlos => los_pl.max(nlos_loss(nlos, d_total, s.h_bs, s.h_ut, fc)),
    };
    let pl = match s.family {
        Family::O2I => {
            outdoor + o2i_low_loss_penetration(fc) + tr38901::INDOOR_LOSS_PER_M * s.indoor_depth_m
        }
        _ => outdoor,
    };
    Ok(Flagged::new(pl, flags))
}

/// Low-loss O2I wall penetration `5 - 10 log10(0.3 10^{-Lg/10} + 0.7 10^{-Lc/10})` dB.
pub fn o2i_low_loss_penetration(fc_ghz: f64) -> f64 {
    let glass = tr38901::GLASS_LOSS.0 + tr38901::GLASS_LOSS.1 * fc_ghz;
    let concrete = tr38901::CONCRETE_LOSS.0 + tr38901::CONCRETE_LOSS.1 * fc_ghz;
    let p = tr38901::LOW_LOSS_GLASS_FRACTION;
    tr38901::LOW_LOSS_CONSTANT
        - 10.0 * (p * 10f64.powf(-glass / 10.0) + (1.0 - p) * 10f64.powf(-concrete / 10.0)).log10()
}

/// Path gain in dB (negated path loss).
pub fn tr38901_gain_db(s: &ThreeGppScenario, d_2d: f64) -> Result<Flagged<f64>> {
    Ok(tr38901_eval(s, d_2d)?.map(|pl| -pl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{to_db, wavelength};

    #[test]
    fn friis_against_fspl_formula() {
        let f = 28e9;
        let g = to_db(friis_gain(wavelength(f), 100.0).unwrap());
        let fspl = 32.45 + 20.0 * (f / 1e6).log10() + 20.0 * (0.1f64).log10();
        assert!((g + fspl).abs() < 0.01, "{g} {fspl}");
        assert!((g + 101.4).abs() < 0.05);
    }

    #[test]
    fn friis_unity_and_doubling() {
        let lam = 0.1;
        assert!((friis_gain(lam, lam / (4.0 * PI)).unwrap() - 1.0).abs() < 1e-14);
        let d = to_db(friis_gain(lam, 20.0).unwrap()) - to_db(friis_gain(lam, 10.0).unwrap());
        assert!((d + 6.020_599_913).abs() < 1e-8);
        assert!(friis_gain(lam, 0.0).is_err());
    }

    #[test]
    fn slope_intercept_basics() {
        let lam = wavelength(28e9);
        let m = SlopeIntercept {
            intercept_db: to_db(friis_gain(lam, 1.0).unwrap()),
            exponent: 2.0,
        };
        assert_eq!(slope_intercept_eval(&m, 1.0).unwrap(), m.intercept_db);
        for r in [3.0, 70.0, 1234.0] {
            let f = to_db(friis_gain(lam, r).unwrap());
            assert!((slope_intercept_eval(&m, r).unwrap() - f).abs() < 1e-10);
        }
    }

    #[test]
    fn eq26_regression() {
        // Hand evaluation term by term (see tests/reference.rs for the oracle).
        let v = uma_nlos_36814(20.0, 10.0, 14.0, 1.5, 28.0, 1000.0).unwrap();
        assert!((v - 162.479_235_522).abs() < 1e-6, "{v}");
        let a = uma_nlos_36814(20.0, 10.0, 14.0, 1.5, 28.0, 100.0).unwrap();
        assert!((v - a - (43.42 - 3.1 * 14f64.log10())).abs() < 1e-10);
        assert!(uma_nlos_36814(0.0, 10.0, 14.0, 1.5, 28.0, 100.0).is_err());
    }

    #[test]
    fn uma_los_first_segment() {
        let s = ThreeGppScenario::new(Family::UMa, Condition::Los, 28.0, 25.0, 1.5);
        let d3 = 100f64.hypot(23.5);
        let v = tr38901_eval(&s, 100.0).unwrap();
        assert!((v.value - (28.0 + 22.0 * d3.log10() + 20.0 * 28f64.log10())).abs() < 1e-10);
        assert!(v.flags.is_empty());
    }

    #[test]
    fn nlos_never_below_los() {
        for fam in [Family::UMa, Family::UMi, Family::InH, Family::O2I] {
            let (hb, hu) = if fam == Family::InH {
                (3.0, 1.0)
            } else {
                (25.0, 1.5)
            };
            let mut los = ThreeGppScenario::new(fam, Condition::Los, 28.0, hb, hu);
            los.h_ut = hu.max(1.5);
            let nlos = ThreeGppScenario {
                condition: Condition::Nlos,
                ..los
            };
            for d in [2.0, 10.0, 50.0, 140.0, 900.0, 4000.0] {
                let a = tr38901_eval(&los, d).unwrap().value;
                let b = tr38901_eval(&nlos, d).unwrap().value;
                assert!(b >= a, "{fam:?} {d}");
            }
        }
    }

    #[test]
    fn inh_nlos_excess_over_free_space() {
        let s = ThreeGppScenario::new(Family::InH, Condition::Nlos, 28.0, 3.0, 1.0);
        let d3 = 70f64.hypot(2.0);
        let pl = tr38901_eval(&s, 70.0).unwrap().value;
        let fs = -to_db(friis_gain(wavelength(28e9), d3).unwrap());
        assert!(pl - fs > 14.0, "{}", pl - fs);
    }

    #[test]
    fn applicability_flag() {
        let s = ThreeGppScenario::new(Family::UMa, Condition::Los, 28.0, 25.0, 1.5);
        assert!(tr38901_eval(&s, 5.0)
            .unwrap()
            .flags
            .contains(Regime::OUTSIDE_APPLICABILITY));
        assert!(tr38901_eval(&s, 6000.0)
            .unwrap()
            .flags
            .contains(Regime::OUTSIDE_APPLICABILITY));
    }

    #[test]
    fn o2i_adds_penetration_and_indoor_loss() {
        let base = ThreeGppScenario::new(Family::UMi, Condition::Los, 3.5, 10.0, 1.5);
        let o2i = ThreeGppScenario {
            family: Family::O2I,
            indoor_depth_m: 4.0,
            ..base
        };
        let a = tr38901_eval(&base, 54.0).unwrap().value;
        let b = tr38901_eval(&o2i, 50.0).unwrap().value;
        assert!((b - a - o2i_low_loss_penetration(3.5) - 2.0).abs() < 1e-10);
        assert!(o2i_low_loss_penetration(28.0) > 5.0);
    }
}
