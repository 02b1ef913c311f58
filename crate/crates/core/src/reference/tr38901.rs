//! Path-loss constants transcribed from 3GPP TR 38.901 V16.1.0 (2019-12),
//! Table 7.4.1-1 and clause 7.4.3. Frequencies in GHz, distances in meters.
//!
//! Each line-of-sight entry is
//! `PL = a + b log10(d_3D) + c log10(f_c) [- e log10(d'_BP^2 + (h_BS - h_UT)^2)]`
//! with the bracketed term only beyond the breakpoint. Each NLOS entry is
//! `PL' = a + b log10(d_3D) + c log10(f_c) - h (h_UT - 1.5)` and the model
//! returns `max(PL_LOS, PL')`.

/// Table 7.4.1-1 revision the constants below were taken from.
pub const TABLE_VERSION: &str = "3GPP TR 38.901 V16.1.0 Table 7.4.1-1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosCoefficients {
    pub intercept: f64,
    pub distance_slope_pl1: f64,
    pub distance_slope_pl2: f64,
    pub frequency_slope: f64,
    /// Coefficient of the breakpoint correction in PL2; 0 when there is no PL2.
    pub breakpoint_slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlosCoefficients {
    pub intercept: f64,
    pub distance_slope: f64,
    pub frequency_slope: f64,
    pub ut_height_slope: f64,
}

/// Applicability range stated next to each formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Applicability {
    pub min_distance: f64,
    pub max_distance: f64,
    pub min_ut_height: f64,
    pub max_ut_height: f64,
}

/// Effective environment height h_E used for the breakpoint (UMi, and UMa for h_UT < 13 m).
pub const ENVIRONMENT_HEIGHT: f64 = 1.0;

/// Carrier frequency range of the model, GHz (clause 7.1).
pub const FREQUENCY_RANGE_GHZ: (f64, f64) = (0.5, 100.0);

// UMa (7.4.1, Table 7.4.1-1 rows "UMa LOS"/"UMa NLOS").
pub const UMA_LOS: LosCoefficients = LosCoefficients {
    intercept: 28.0,
    distance_slope_pl1: 22.0,
    distance_slope_pl2: 40.0,
    frequency_slope: 20.0,
    breakpoint_slope: 9.0,
};
pub const UMA_NLOS: NlosCoefficients = NlosCoefficients {
    intercept: 13.54,
    distance_slope: 39.08,
    frequency_slope: 20.0,
    ut_height_slope: 0.6,
};
pub const UMA_RANGE: Applicability = Applicability {
    min_distance: 10.0,
    max_distance: 5000.0,
    min_ut_height: 1.5,
    max_ut_height: 22.5,
};

// UMi - Street Canyon.
pub const UMI_LOS: LosCoefficients = LosCoefficients {
    intercept: 32.4,
    distance_slope_pl1: 21.0,
    distance_slope_pl2: 40.0,
    frequency_slope: 20.0,
    breakpoint_slope: 9.5,
};
pub const UMI_NLOS: NlosCoefficients = NlosCoefficients {
    intercept: 22.4,
    distance_slope: 35.3,
    frequency_slope: 21.3,
    ut_height_slope: 0.3,
};
pub const UMI_RANGE: Applicability = Applicability {
    min_distance: 10.0,
    max_distance: 5000.0,
    min_ut_height: 1.5,
    max_ut_height: 22.5,
};

// InH - Office (no breakpoint; applicability on d_3D).
pub const INH_LOS: LosCoefficients = LosCoefficients {
    intercept: 32.4,
    distance_slope_pl1: 17.3,
    distance_slope_pl2: 17.3,
    frequency_slope: 20.0,
    breakpoint_slope: 0.0,
};
pub const INH_NLOS: NlosCoefficients = NlosCoefficients {
    intercept: 17.3,
    distance_slope: 38.3,
    frequency_slope: 24.9,
    ut_height_slope: 0.0,
};
pub const INH_RANGE: Applicability = Applicability {
    min_distance: 1.0,
    max_distance: 150.0,
    min_ut_height: 0.0,
    max_ut_height: f64::INFINITY,
};

// O2I building penetration, low-loss model (7.4.3.1, Table 7.4.3-1/-2).
/// `L_glass = 2 + 0.2 f_c` dB.
pub const GLASS_LOSS: (f64, f64) = (2.0, 0.2);
/// `L_concrete = 5 + 4 f_c` dB.
pub const CONCRETE_LOSS: (f64, f64) = (5.0, 4.0);
/// Low-loss mixture: 30 % glass, 70 % concrete, plus 5 dB.
pub const LOW_LOSS_GLASS_FRACTION: f64 = 0.3;
pub const LOW_LOSS_CONSTANT: f64 = 5.0;
/// Indoor loss per meter of indoor distance.
pub const INDOOR_LOSS_PER_M: f64 = 0.5;
