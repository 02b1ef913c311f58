//! Closed-form average path gain laws for street canyons, corridors,
//! foliage, building penetration and over-rooftop macro links, together with
//! first-principles numerical oracles and measurement fitting.
//!
//! Gains are linear power ratios unless a name ends in `_db`.

pub mod canyon;
pub mod config;
pub mod data_fit;
pub mod diffuse;
pub mod error;
pub mod flags;
pub mod morphology;
pub mod oracles;
pub mod presets;
pub mod reference;
pub mod surface_em;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use flags::{Flagged, Regime};
