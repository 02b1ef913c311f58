//! Regime flags attached to results evaluated outside the asymptotic
//! assumptions of a closed form. Flags never turn a result into an error.

use std::fmt;

use bitflags::bitflags;

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct Regime: u32 {
        /// Grazing angle above the low-grazing validity threshold.
        const EXTRAPOLATED_ANGLE = 1 << 0;
        /// Range shorter than twice the canyon width.
        const SHORT_RANGE = 1 << 1;
        /// Range shorter than the canyon width; free-space floor applied.
        const FREE_SPACE_FLOOR = 1 << 2;
        /// Wall loss L not large compared with w/r.
        const WEAK_WALL_LOSS = 1 << 3;
        /// Outdoor-indoor or guided law used with r < L*w.
        const SHORT_GUIDED_RANGE = 1 << 4;
        /// Antenna within one wavelength of a wall.
        const NEAR_WALL = 1 << 5;
        /// Frequency outside the interpolation anchors of the foliage absorption.
        const FREQUENCY_EXTRAPOLATED = 1 << 6;
        /// Scenario parameters outside the reference model's stated range.
        const OUTSIDE_APPLICABILITY = 1 << 7;
        /// Tree fill fraction clamped to [0, 1].
        const DENSITY_CLAMPED = 1 << 8;
        /// Range before the two-ray ground breakpoint 4 z_s z / lambda.
        const BEFORE_BREAKPOINT = 1 << 9;
        /// Absorption along the aperture not small compared with 1/d_in.
        const HIGH_ABSORPTION = 1 << 10;
    }
}

const NAMES: &[(Regime, &str)] = &[
    (Regime::EXTRAPOLATED_ANGLE, "extrapolated_angle"),
    (Regime::SHORT_RANGE, "short_range"),
    (Regime::FREE_SPACE_FLOOR, "free_space_floor"),
    (Regime::WEAK_WALL_LOSS, "weak_wall_loss"),
    (Regime::SHORT_GUIDED_RANGE, "short_guided_range"),
    (Regime::NEAR_WALL, "near_wall"),
    (Regime::FREQUENCY_EXTRAPOLATED, "frequency_extrapolated"),
    (Regime::OUTSIDE_APPLICABILITY, "outside_applicability"),
    (Regime::DENSITY_CLAMPED, "density_clamped"),
    (Regime::BEFORE_BREAKPOINT, "before_breakpoint"),
    (Regime::HIGH_ABSORPTION, "high_absorption"),
];

impl Regime {
    /// Flag names joined by `|`, empty when no flag is set.
    pub fn names(self) -> String {
        NAMES
            .iter()
            .filter(|(flag, _)| self.contains(*flag))
            .map(|(_, name)| *name)
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names())
    }
}

/// A value together with the regime flags raised while computing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub flags: Regime,
}

impl<T> Flagged<T> {
    pub fn new(value: T, flags: Regime) -> Self {
        Self { value, flags }
    }

    pub fn clean(value: T) -> Self {
        Self {
            value,
            flags: Regime::empty(),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Flagged<U> {
        Flagged {
            value: f(self.value),
            flags: self.flags,
        }
    }

    pub fn with(mut self, flags: Regime) -> Self {
        self.flags |= flags;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_stable() {
        assert_eq!(Regime::empty().names(), "");
        let f = Regime::SHORT_RANGE | Regime::NEAR_WALL;
        assert_eq!(f.names(), "short_range|near_wall");
        assert_eq!(NAMES.len(), Regime::all().iter().count());
    }
}
