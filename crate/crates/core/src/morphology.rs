//! Composite environment laws: suburban foliage, over-rooftop macro, rural,
//! outdoor-to-indoor canyon and the urban sidewalk with trees.
//!
//! Every law is a product of a diffuse half-space core, bounce factors and
//! exponential absorption terms; see [`crate::diffuse`] for the core.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::canyon::CanyonGeometry;
use crate::diffuse::{enhancement_factors, quartic_gain, t_eff, PenetrationSpec};
use crate::error::{Error, Result};
use crate::flags::{Flagged, Regime};
use crate::reference::friis_gain;
use crate::surface_em::{
    angle_averaged_power_reflectance, fresnel_lowgraze_approx, wall_loss_l, Dielectric,
    GrazingAngle, Polarization, GROUND_INDEX_DEFAULT,
};
use crate::units::{
    require_fraction, require_nonnegative, require_positive, wavelength, wavenumber,
};

/// Foliage absorption at 28 GHz used by default, Nep/m.
pub const KAPPA_V_28GHZ: f64 = 0.38;
/// Sidewalk pedestrian absorption, Nep/m.
pub const KAPPA_PEDESTRIAN: f64 = 0.02;
/// Scaffolding absorption, Nep/m.
pub const KAPPA_SCAFFOLDING: f64 = 0.1;
/// Interpolation anchors `(Hz, Nep/m)` for foliage absorption.
pub const KAPPA_V_ANCHORS: [(f64, f64); 2] = [(2e9, 0.07), (35e9, 0.4)];

/// Horizontal range and carrier frequency of a link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub horizontal_range_x: f64,
    pub frequency: f64,
}

impl Link {
    pub fn new(horizontal_range_x: f64, frequency: f64) -> Result<Self> {
        require_positive("horizontal_range_x", horizontal_range_x)?;
        require_positive("frequency", frequency)?;
        Ok(Self {
            horizontal_range_x,
            frequency,
        })
    }

    pub fn wavelength(&self) -> f64 {
        wavelength(self.frequency)
    }

    pub fn wavenumber(&self) -> f64 {
        wavenumber(self.frequency)
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.horizontal_range_x, self.frequency).map(|_| ())
    }
}

/// Street tree density entering the fill fraction estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeDensity {
    /// Fraction of street length occupied by tree crowns.
    pub n_tree: f64,
    pub w_tree: f64,
    pub z_tree: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoliageLayer {
    pub depth_dv: f64,
    pub kappa_v: f64,
    #[serde(default)]
    pub density: Option<TreeDensity>,
}

impl FoliageLayer {
    pub fn new(depth_dv: f64, kappa_v: f64) -> Self {
        Self {
            depth_dv,
            kappa_v,
            density: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_nonnegative("depth_dv", self.depth_dv)?;
        require_nonnegative("kappa_v", self.kappa_v)?;
        if let Some(d) = &self.density {
            require_nonnegative("n_tree", d.n_tree)?;
            require_nonnegative("w_tree", d.w_tree)?;
            require_nonnegative("z_tree", d.z_tree)?;
        }
        Ok(())
    }
}

/// Rooftop macro geometry. The horizontal range travels in [`Link`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroGeometry {
    pub z_bs: f64,
    /// Clutter (rooftop or treetop) height, also the building height of the
    /// 36.814 formula.
    pub z_c: f64,
    pub z_m: f64,
    pub street_width_w: f64,
}

impl MacroGeometry {
    pub fn validate(&self) -> Result<()> {
        require_positive("z_bs", self.z_bs)?;
        require_nonnegative("z_m", self.z_m)?;
        require_positive("street_width_w", self.street_width_w)?;
        if !(self.z_bs > self.z_c && self.z_c > self.z_m) {
            return Err(Error::Geometry(format!(
                "over-top laws need z_bs > z_c > z_m, got {} / {} / {}",
                self.z_bs, self.z_c, self.z_m
            )));
        }
        Ok(())
    }

    /// Over-top range `sqrt(x^2 + (z_bs - z_c)^2)` from the clutter top above
    /// the terminal.
    pub fn overtop_range(&self, x: f64) -> f64 {
        x.hypot(self.z_bs - self.z_c)
    }

    /// Direct base-to-terminal distance.
    pub fn direct_range(&self, x: f64) -> f64 {
        x.hypot(self.z_bs - self.z_m)
    }

    /// Part of the direct path below clutter height,
    /// `r (z_c - z_m) / (z_bs - z_m)`.
    pub fn vegetation_path(&self, r: f64) -> f64 {
        r * (self.z_c - self.z_m) / (self.z_bs - self.z_m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndoorClutter {
    pub kappa_in: f64,
    pub depth_d_in: f64,
}

impl IndoorClutter {
    pub fn validate(&self) -> Result<()> {
        require_nonnegative("kappa_in", self.kappa_in)?;
        require_nonnegative("depth_d_in", self.depth_d_in)?;
        Ok(())
    }

    fn absorption(&self) -> f64 {
        (-self.kappa_in * self.depth_d_in).exp()
    }
}

/// Ground power reflectance model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroundModel {
    /// Low-grazing exponential form at the geometry's grazing angle.
    LowGrazing {
        index: Dielectric,
        polarization: Polarization,
    },
    Fixed {
        gamma2: f64,
    },
}

impl Default for GroundModel {
    fn default() -> Self {
        GroundModel::LowGrazing {
            index: Dielectric::new(GROUND_INDEX_DEFAULT).expect("sqrt(5) > 1"),
            polarization: Polarization::Parallel,
        }
    }
}

impl GroundModel {
    /// Power reflectance at grazing angle `theta`.
    pub fn power(&self, theta: f64) -> Result<Flagged<f64>> {
        match *self {
            GroundModel::LowGrazing {
                index,
                polarization,
            } => {
                let g = fresnel_lowgraze_approx(GrazingAngle::clamped(theta), index, polarization)?;
                Ok(g.map(|v| v * v))
            }
            GroundModel::Fixed { gamma2 } => {
                Ok(Flagged::clean(require_fraction("gamma2", gamma2)?))
            }
        }
    }
}

/// Power reflectance of the wall behind the terminal.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum BackWall {
    #[default]
    Unity,
    /// Exact Fresnel power reflectance averaged over grazing angle.
    AngleAveraged {
        index: Dielectric,
    },
    Fixed {
        gamma2: f64,
    },
}

impl BackWall {
    pub fn power(&self) -> Result<f64> {
        match *self {
            BackWall::Unity => Ok(1.0),
            BackWall::AngleAveraged { index } => {
                angle_averaged_power_reflectance(index, Polarization::Parallel)
            }
            BackWall::Fixed { gamma2 } => require_fraction("gamma2", gamma2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bounces {
    #[serde(default)]
    pub ground: GroundModel,
    #[serde(default)]
    pub back_wall: BackWall,
}

impl Bounces {
    /// Low-grazing ground from the canyon's own ground index, unity back wall.
    pub fn for_canyon(canyon: &CanyonGeometry) -> Self {
        Self {
            ground: GroundModel::LowGrazing {
                index: canyon.ground,
                polarization: canyon.ground_polarization,
            },
            back_wall: BackWall::Unity,
        }
    }

    /// Fixed reflectances, for exponent checks free of angle dependence.
    pub fn fixed(ground: f64, back_wall: f64) -> Self {
        Self {
            ground: GroundModel::Fixed { gamma2: ground },
            back_wall: BackWall::Fixed { gamma2: back_wall },
        }
    }

    pub(crate) fn factor(&self, ground_angle: f64) -> Result<Flagged<f64>> {
        let g = self.ground.power(ground_angle)?;
        Ok(Flagged::new(
            enhancement_factors(g.value, self.back_wall.power()?)?,
            g.flags,
        ))
    }

    fn ground_only(&self, ground_angle: f64) -> Result<Flagged<f64>> {
        Ok(self.ground.power(ground_angle)?.map(|g| 1.0 + g))
    }
}

/// Street description shared by the suburban and sidewalk laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreetScene {
    /// Base height is `tx_height_zs`, terminal height `rx_height_z`.
    pub canyon: CanyonGeometry,
    pub foliage: FoliageLayer,
    pub standoff_d_s: f64,
    /// Supplied fill fraction; computed from the foliage density when absent.
    pub rho_v: Option<f64>,
    /// Pedestrian or scaffolding absorption added along the direct path.
    pub kappa_extra: f64,
    /// Supplied vegetated length of the direct path.
    pub direct_veg_path_rv: Option<f64>,
    /// Leading stretch of street free of vegetation.
    pub vegetation_free_m: f64,
    pub bounces: Bounces,
}

impl StreetScene {
    pub fn new(canyon: CanyonGeometry, foliage: FoliageLayer, standoff_d_s: f64) -> Self {
        Self {
            canyon,
            foliage,
            standoff_d_s,
            rho_v: None,
            kappa_extra: 0.0,
            direct_veg_path_rv: None,
            vegetation_free_m: 0.0,
            bounces: Bounces::for_canyon(&canyon),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.canyon.validate()?;
        self.foliage.validate()?;
        require_positive("standoff_d_s", self.standoff_d_s)?;
        require_nonnegative("kappa_extra", self.kappa_extra)?;
        require_nonnegative("vegetation_free_m", self.vegetation_free_m)?;
        if let Some(r) = self.rho_v {
            require_fraction("rho_v", r)?;
        }
        if let Some(rv) = self.direct_veg_path_rv {
            require_nonnegative("direct_veg_path_rv", rv)?;
        }
        Ok(())
    }

    /// Base-terminal range `sqrt(x^2 + (z_s - z)^2)`.
    pub(crate) fn range(&self, x: f64) -> f64 {
        x.hypot(self.canyon.tx_height_zs - self.canyon.rx_height_z)
    }

    /// Range to the hot region, `sqrt(x^2 + (z_s - z)^2 + d_s^2)`.
    fn hot_range(&self, x: f64) -> f64 {
        self.range(x).hypot(self.standoff_d_s)
    }

    /// Ground grazing angle over the standoff-extended path.
    fn side_ground_angle(&self, x: f64) -> f64 {
        let h = self.canyon.tx_height_zs + self.canyon.rx_height_z;
        (h / x.hypot(self.standoff_d_s)).atan()
    }

    pub(crate) fn canyon_ground_angle(&self, x: f64) -> f64 {
        ((self.canyon.tx_height_zs + self.canyon.rx_height_z) / x).atan()
    }

    /// Supplied or estimated tree fill fraction.
    pub fn rho_v(&self) -> Result<Flagged<f64>> {
        if let Some(r) = self.rho_v {
            return Ok(Flagged::clean(require_fraction("rho_v", r)?));
        }
        match self.foliage.density {
            Some(d) => rho_v(
                d.n_tree,
                d.z_tree,
                self.canyon.rx_height_z,
                self.canyon.tx_height_zs,
                d.w_tree,
                self.canyon.width_w,
            ),
            None => Ok(Flagged::clean(0.0)),
        }
    }
}

/// Fraction of the canyon cross-section filled by tree crowns on both
/// sidewalks, `n_tree (z_tree - z_m) 2 w_tree / ((z_bs - z_m) w)`, clamped
/// to [0, 1].
pub fn rho_v(
    n_tree: f64,
    z_tree: f64,
    z_m: f64,
    z_bs: f64,
    w_tree: f64,
    w: f64,
) -> Result<Flagged<f64>> {
    require_nonnegative("n_tree", n_tree)?;
    require_nonnegative("w_tree", w_tree)?;
    require_positive("street_width_w", w)?;
    if z_bs <= z_m {
        return Err(Error::Geometry(format!(
            "z_bs ({z_bs}) must exceed z_m ({z_m})"
        )));
    }
    let raw = n_tree * (z_tree - z_m).max(0.0) * 2.0 * w_tree / ((z_bs - z_m) * w);
    if raw > 1.0 {
        Ok(Flagged::new(1.0, Regime::DENSITY_CLAMPED))
    } else {
        Ok(Flagged::clean(raw))
    }
}

/// Foliage absorption linearly interpolated between 0.07 Nep/m at 2 GHz and
/// 0.4 Nep/m at 35 GHz; flagged outside the anchors.
pub fn kappa_v_at_frequency(frequency: f64) -> Result<Flagged<f64>> {
    require_positive("frequency", frequency)?;
    let [(f0, k0), (f1, k1)] = KAPPA_V_ANCHORS;
    let k = (k0 + (k1 - k0) * (frequency - f0) / (f1 - f0)).max(0.0);
    let flags = if (f0..=f1).contains(&frequency) {
        Regime::empty()
    } else {
        Regime::FREQUENCY_EXTRAPOLATED
    };
    Ok(Flagged::new(k, flags))
}

/// Lamppost base to a terminal behind foliage on a house exterior.
pub fn suburban_street_gain(scene: &StreetScene, link: &Link) -> Result<Flagged<f64>> {
    scene.validate()?;
    link.validate()?;
    let x = link.horizontal_range_x;
    let bounce = scene.bounces.factor(scene.side_ground_angle(x))?;
    let core = quartic_gain(link.wavelength(), scene.standoff_d_s, scene.hot_range(x));
    let veg = (-scene.foliage.kappa_v * scene.foliage.depth_dv).exp();
    Ok(Flagged::new(core * veg * bounce.value, bounce.flags))
}

/// As [`suburban_street_gain`], with the terminal indoors behind a wall.
pub fn suburban_indoor_gain(
    scene: &StreetScene,
    indoor: &IndoorClutter,
    pen: &PenetrationSpec,
    link: &Link,
) -> Result<Flagged<f64>> {
    indoor.validate()?;
    let outside = suburban_street_gain(scene, link)?;
    let t = t_eff(pen, indoor.depth_d_in)?;
    Ok(outside.map(|p| p * t * indoor.absorption()))
}

/// Rooftop base to a terminal below clutter in a street of finite width.
pub fn overtop_gain(m: &MacroGeometry, foliage_kappa: f64, link: &Link) -> Result<Flagged<f64>> {
    overtop_gain_with(m, foliage_kappa, link, &Bounces::default())
}

pub fn overtop_gain_with(
    m: &MacroGeometry,
    foliage_kappa: f64,
    link: &Link,
    bounces: &Bounces,
) -> Result<Flagged<f64>> {
    m.validate()?;
    let spec = PenetrationSpec::Street {
        w1_m: m.street_width_w,
        t2: 1.0,
    };
    let t = t_eff(&spec, m.z_c - m.z_m)?;
    overtop_core(m, foliage_kappa, link, bounces).map(|p| p.map(|v| v * t))
}

/// Wide-street limit of [`overtop_gain`].
pub fn overtop_wide_gain(
    m: &MacroGeometry,
    foliage_kappa: f64,
    link: &Link,
    bounces: &Bounces,
) -> Result<Flagged<f64>> {
    m.validate()?;
    overtop_core(m, foliage_kappa, link, bounces)
}

fn overtop_core(
    m: &MacroGeometry,
    foliage_kappa: f64,
    link: &Link,
    bounces: &Bounces,
) -> Result<Flagged<f64>> {
    link.validate()?;
    require_nonnegative("foliage_kappa", foliage_kappa)?;
    let x = link.horizontal_range_x;
    let ground = bounces.ground_only(((m.z_bs + m.z_m) / x).atan())?;
    let core = quartic_gain(link.wavelength(), m.z_bs - m.z_c, m.overtop_range(x));
    let veg = (-foliage_kappa * (m.z_c - m.z_m).abs()).exp();
    Ok(Flagged::new(core * veg * ground.value, ground.flags))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuralGain {
    pub direct: f64,
    pub overtop: f64,
    pub total: f64,
    pub vegetation_path_rv: f64,
    pub flags: Regime,
}

/// Attenuated direct path through vegetation plus the wide over-top term.
pub fn rural_gain(m: &MacroGeometry, foliage: &FoliageLayer, link: &Link) -> Result<RuralGain> {
    rural_gain_with(m, foliage, link, &Bounces::default())
}

pub fn rural_gain_with(
    m: &MacroGeometry,
    foliage: &FoliageLayer,
    link: &Link,
    bounces: &Bounces,
) -> Result<RuralGain> {
    foliage.validate()?;
    let overtop = overtop_wide_gain(m, foliage.kappa_v, link, bounces)?;
    let r = m.direct_range(link.horizontal_range_x);
    let rv = m.vegetation_path(r);
    let direct = friis_gain(link.wavelength(), r)? * (-foliage.kappa_v * rv).exp();
    Ok(RuralGain {
        direct,
        overtop: overtop.value,
        total: direct + overtop.value,
        vegetation_path_rv: rv,
        flags: overtop.flags,
    })
}

/// Terminal inside a building, illuminated by the canyon's reflected fields.
pub fn outdoor_indoor_canyon_gain(
    canyon: &CanyonGeometry,
    pen: &PenetrationSpec,
    indoor: &IndoorClutter,
    link: &Link,
) -> Result<Flagged<f64>> {
    outdoor_indoor_canyon_gain_with(canyon, pen, indoor, link, &Bounces::for_canyon(canyon))
}

pub fn outdoor_indoor_canyon_gain_with(
    canyon: &CanyonGeometry,
    pen: &PenetrationSpec,
    indoor: &IndoorClutter,
    link: &Link,
    bounces: &Bounces,
) -> Result<Flagged<f64>> {
    canyon.validate()?;
    indoor.validate()?;
    link.validate()?;
    let x = link.horizontal_range_x;
    let r = x.hypot(canyon.tx_height_zs - canyon.rx_height_z);
    let l = wall_loss_l(&canyon.wall, link.wavenumber())?;
    let t = t_eff(pen, indoor.depth_d_in)?;
    let bounce = bounces.factor(((canyon.tx_height_zs + canyon.rx_height_z) / x).atan())?;
    let mut flags = bounce.flags;
    if r < l * canyon.width_w {
        flags |= Regime::SHORT_GUIDED_RANGE;
    }
    let p = guided_core(link.wavelength(), canyon.width_w, l, r)
        * t
        * bounce.value
        * indoor.absorption();
    Ok(Flagged::new(p, flags))
}

/// `lambda^2 sqrt(w) / (32 pi^{1.5} L^{1.5} r^{2.5})`.
pub fn guided_core(wavelength: f64, w: f64, l: f64, r: f64) -> f64 {
    wavelength * wavelength * w.sqrt() / (32.0 * PI.powf(1.5) * l.powf(1.5) * r.powf(2.5))
}

/// Reflection-guided sidewalk term with tree absorption along the street.
pub fn sidewalk_guided_gain(scene: &StreetScene, link: &Link) -> Result<Flagged<f64>> {
    scene.validate()?;
    link.validate()?;
    let x = link.horizontal_range_x;
    let rho = scene.rho_v()?;
    let kr = scene.foliage.kappa_v * rho.value;
    let w = scene.canyon.width_w;
    let l1 = wall_loss_l(&scene.canyon.wall, link.wavenumber())? + kr * w / 2.0;
    let r = scene.range(x);
    let bounce = scene.bounces.factor(scene.canyon_ground_angle(x))?;
    let mut flags = rho.flags | bounce.flags;
    if r < l1 * w {
        flags |= Regime::SHORT_GUIDED_RANGE;
    }
    let veg = (-kr * scene.foliage.depth_dv).exp() * (-kr * r).exp();
    Ok(Flagged::new(
        guided_core(link.wavelength(), w, l1, r) * veg * bounce.value,
        flags,
    ))
}

/// Side penetration into the sidewalk clutter, range-independent absorption.
pub fn sidewalk_unguided_gain(scene: &StreetScene, link: &Link) -> Result<Flagged<f64>> {
    scene.validate()?;
    link.validate()?;
    let x = link.horizontal_range_x;
    let rho = scene.rho_v()?;
    let bounce = scene.bounces.factor(scene.side_ground_angle(x))?;
    let core = quartic_gain(link.wavelength(), scene.standoff_d_s, scene.hot_range(x));
    let veg = (-scene.foliage.kappa_v * rho.value * scene.foliage.depth_dv).exp();
    Ok(Flagged::new(
        core * veg * bounce.value,
        rho.flags | bounce.flags,
    ))
}

/// Pointwise maximum of the guided and unguided sidewalk terms.
pub fn canyon_with_trees_gain(scene: &StreetScene, link: &Link) -> Result<Flagged<f64>> {
    let g = sidewalk_guided_gain(scene, link)?;
    let u = sidewalk_unguided_gain(scene, link)?;
    Ok(Flagged::new(g.value.max(u.value), g.flags | u.flags))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanyonTotal {
    pub guided: f64,
    pub unguided: f64,
    /// `max(guided, unguided)`.
    pub trees: f64,
    pub overtop: f64,
    pub direct: f64,
    /// `trees + overtop + direct`.
    pub total: f64,
    pub rho_v: f64,
    pub vegetation_path_rv: f64,
    pub flags: Regime,
}

impl CanyonTotal {
    /// `(name, value)` pairs in output column order.
    pub fn components(&self) -> [(&'static str, f64); 5] {
        [
            ("guided", self.guided),
            ("unguided", self.unguided),
            ("trees", self.trees),
            ("overtop", self.overtop),
            ("direct", self.direct),
        ]
    }
}

/// Full urban sidewalk model: side penetration, wide over-top and the
/// attenuated direct path.
///
/// The scene's base and terminal heights must match `m.z_bs` and `m.z_m`.
/// Without a supplied `r_v`, the vegetated direct-path length is the
/// sub-clutter part of the path beyond the vegetation-free stretch, scaled by
/// the tree fill fraction `n_tree`.
pub fn canyon_total_gain(
    scene: &StreetScene,
    m: &MacroGeometry,
    link: &Link,
) -> Result<CanyonTotal> {
    m.validate()?;
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(1.0);
    if !same(scene.canyon.tx_height_zs, m.z_bs) || !same(scene.canyon.rx_height_z, m.z_m) {
        return Err(Error::Geometry(format!(
            "scene heights ({}, {}) disagree with macro geometry ({}, {})",
            scene.canyon.tx_height_zs, scene.canyon.rx_height_z, m.z_bs, m.z_m
        )));
    }
    let guided = sidewalk_guided_gain(scene, link)?;
    let unguided = sidewalk_unguided_gain(scene, link)?;
    let overtop = overtop_wide_gain(m, scene.foliage.kappa_v, link, &scene.bounces)?;
    let rho = scene.rho_v()?;

    let r = m.direct_range(link.horizontal_range_x);
    let free_fraction = if r > 0.0 {
        ((r - scene.vegetation_free_m).max(0.0)) / r
    } else {
        0.0
    };
    let clutter_path = m.vegetation_path(r) * free_fraction;
    let fill = scene.foliage.density.map_or(1.0, |d| d.n_tree.min(1.0));
    let rv = scene.direct_veg_path_rv.unwrap_or(clutter_path * fill);
    let direct = friis_gain(link.wavelength(), r)?
        * (-scene.foliage.kappa_v * rv - scene.kappa_extra * clutter_path).exp();

    let trees = guided.value.max(unguided.value);
    Ok(CanyonTotal {
        guided: guided.value,
        unguided: unguided.value,
        trees,
        overtop: overtop.value,
        direct,
        total: trees + overtop.value + direct,
        rho_v: rho.value,
        vegetation_path_rv: rv,
        flags: guided.flags | unguided.flags | overtop.flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffuse::{diffuse_pathgain, DiffuseLink};
    use crate::surface_em::{TelegraphRoughness, WallSurface};
    use crate::units::{nepers_to_db, to_db};

    fn table1_wall() -> WallSurface {
        WallSurface::rough(
            Dielectric::new(2.2).unwrap(),
            TelegraphRoughness::from_widths(0.01, 0.85, 0.15, 0.33, 2.0).unwrap(),
        )
    }

    fn suburban() -> StreetScene {
        let canyon = CanyonGeometry::centered(30.0, 3.0, 1.0, table1_wall());
        StreetScene::new(canyon, FoliageLayer::new(10.0, 0.38), 20.0)
    }

    fn third_ave() -> (StreetScene, MacroGeometry) {
        let canyon = CanyonGeometry::centered(32.0, 56.0, 1.5, table1_wall());
        let mut foliage = FoliageLayer::new(3.0, KAPPA_V_28GHZ);
        foliage.density = Some(TreeDensity {
            n_tree: 0.05,
            w_tree: 4.0,
            z_tree: 10.0,
        });
        let m = MacroGeometry {
            z_bs: 56.0,
            z_c: 10.0,
            z_m: 1.5,
            street_width_w: 32.0,
        };
        (StreetScene::new(canyon, foliage, 32.0), m)
    }

    #[test]
    fn suburban_reduces_to_diffuse_core() {
        let mut s = suburban();
        s.foliage.kappa_v = 0.0;
        s.bounces = Bounces::fixed(0.0, 0.0);
        let link = Link::new(100.0, 28e9).unwrap();
        let p = suburban_street_gain(&s, &link).unwrap().value;
        let r = (100.0f64 * 100.0 + 4.0 + 400.0).sqrt();
        let d = DiffuseLink {
            standoff_d_s: 20.0,
            range_r: r,
            depth_d_in: 10.0,
            kappa: 0.0,
            wavelength: link.wavelength(),
        };
        let q = diffuse_pathgain(&d, &PenetrationSpec::open())
            .unwrap()
            .value;
        assert!((p / q - 1.0).abs() < 1e-14);
    }

    #[test]
    fn suburban_indoor_offsets() {
        let s = suburban();
        let link = Link::new(80.0, 28e9).unwrap();
        let out = suburban_street_gain(&s, &link).unwrap().value;
        let indoor = IndoorClutter {
            kappa_in: 0.18,
            depth_d_in: 1.0,
        };
        let pen = PenetrationSpec::FacadeMixture {
            p_window: 0.1,
            t_window: 1.0,
            t_wall: 0.0,
        };
        let inside = suburban_indoor_gain(&s, &indoor, &pen, &link)
            .unwrap()
            .value;
        let drop = to_db(out) - to_db(inside);
        assert!((drop - 10.0 - nepers_to_db(0.18)).abs() < 1e-9, "{drop}");
        let none = IndoorClutter {
            kappa_in: 0.18,
            depth_d_in: 0.0,
        };
        let same = suburban_indoor_gain(&s, &none, &PenetrationSpec::open(), &link).unwrap();
        assert_eq!(same.value, out);
    }

    #[test]
    fn overtop_wide_limit_and_height_gap() {
        let mut m = MacroGeometry {
            z_bs: 14.0,
            z_c: 10.0,
            z_m: 1.5,
            street_width_w: 1e9,
        };
        let link = Link::new(500.0, 28e9).unwrap();
        let b = Bounces::default();
        let finite = overtop_gain_with(&m, 0.38, &link, &b).unwrap().value;
        let wide = overtop_wide_gain(&m, 0.38, &link, &b).unwrap().value;
        assert!((finite / wide - 1.0).abs() < 1e-7);
        m.street_width_w = 20.0;
        let far = Link::new(1e5, 28e9).unwrap();
        let p1 = overtop_gain_with(&m, 0.0, &far, &b).unwrap().value;
        m.z_bs = 18.0;
        let p2 = overtop_gain_with(&m, 0.0, &far, &b).unwrap().value;
        assert!((to_db(p2) - to_db(p1) - 6.0206).abs() < 0.01);
        m.z_bs = 9.0;
        assert!(matches!(
            overtop_gain(&m, 0.38, &far),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn rural_components() {
        let m = MacroGeometry {
            z_bs: 14.0,
            z_c: 1.5,
            z_m: 1.5 - 1e-12,
            street_width_w: 10.0,
        };
        let f = FoliageLayer::new(0.0, 0.38);
        let link = Link::new(50.0, 28e9).unwrap();
        let g = rural_gain(&m, &f, &link).unwrap();
        assert!(g.vegetation_path_rv < 1e-9);
        let friis = friis_gain(link.wavelength(), m.direct_range(50.0)).unwrap();
        assert!((g.direct / friis - 1.0).abs() < 1e-9);
        assert_eq!(g.total, g.direct + g.overtop);
    }

    #[test]
    fn rho_v_third_avenue() {
        let r = rho_v(0.05, 10.0, 1.5, 56.0, 4.0, 32.0).unwrap();
        assert!((r.value - 0.05 * 8.5 * 8.0 / (54.5 * 32.0)).abs() < 1e-15);
        assert!((r.value - 0.001_950).abs() < 1e-6);
        let c = rho_v(5.0, 10.0, 1.5, 12.0, 10.0, 10.0).unwrap();
        assert_eq!(c.value, 1.0);
        assert!(c.flags.contains(Regime::DENSITY_CLAMPED));
    }

    #[test]
    fn kappa_anchors() {
        assert!((kappa_v_at_frequency(2e9).unwrap().value - 0.07).abs() < 1e-15);
        assert!((kappa_v_at_frequency(35e9).unwrap().value - 0.4).abs() < 1e-15);
        let k28 = kappa_v_at_frequency(28e9).unwrap();
        assert!((k28.value - (0.07 + 0.33 * 26.0 / 33.0)).abs() < 1e-12);
        assert!(k28.flags.is_empty());
        assert!(kappa_v_at_frequency(60e9)
            .unwrap()
            .flags
            .contains(Regime::FREQUENCY_EXTRAPOLATED));
        assert!(kappa_v_at_frequency(0.0).is_err());
    }

    #[test]
    fn unguided_vegetation_loss() {
        let mut s = suburban();
        s.rho_v = Some(1.0);
        s.foliage = FoliageLayer::new(5.0, 0.38);
        let link = Link::new(200.0, 28e9).unwrap();
        let with = sidewalk_unguided_gain(&s, &link).unwrap().value;
        s.foliage.kappa_v = 0.0;
        let without = sidewalk_unguided_gain(&s, &link).unwrap().value;
        assert!((to_db(without) - to_db(with) - 8.2516).abs() < 1e-3);
    }

    #[test]
    fn guided_no_trees_matches_outdoor_indoor_shape() {
        let (mut s, _) = third_ave();
        s.rho_v = Some(0.0);
        let link = Link::new(300.0, 28e9).unwrap();
        let g = sidewalk_guided_gain(&s, &link).unwrap().value;
        let indoor = IndoorClutter {
            kappa_in: 0.0,
            depth_d_in: 1.0,
        };
        let oi = outdoor_indoor_canyon_gain_with(
            &s.canyon,
            &PenetrationSpec::open(),
            &indoor,
            &link,
            &s.bounces,
        )
        .unwrap()
        .value;
        assert!((g / oi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_is_sum_of_components() {
        let (s, m) = third_ave();
        for x in [30.0, 200.0, 450.0, 900.0] {
            let t = canyon_total_gain(&s, &m, &Link::new(x, 28e9).unwrap()).unwrap();
            assert_eq!(t.total, t.trees + t.overtop + t.direct);
            assert_eq!(t.trees, t.guided.max(t.unguided));
            assert!(t.total >= t.trees && t.total >= t.overtop && t.total >= t.direct);
        }
    }

    #[test]
    fn total_rejects_mismatched_heights() {
        let (s, mut m) = third_ave();
        m.z_bs = 50.0;
        let link = Link::new(100.0, 28e9).unwrap();
        assert!(matches!(
            canyon_total_gain(&s, &m, &link),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn vegetation_free_stretch_gives_friis() {
        let (mut s, m) = third_ave();
        s.vegetation_free_m = 200.0;
        s.kappa_extra = KAPPA_PEDESTRIAN;
        let link = Link::new(150.0, 28e9).unwrap();
        let t = canyon_total_gain(&s, &m, &link).unwrap();
        let friis = friis_gain(link.wavelength(), m.direct_range(150.0)).unwrap();
        assert_eq!(t.vegetation_path_rv, 0.0);
        assert!((t.direct / friis - 1.0).abs() < 1e-14);
    }

    #[test]
    fn outdoor_indoor_slope_and_l_power() {
        let canyon = CanyonGeometry::centered(8.6, 5.0, 7.7, table1_wall());
        let pen = PenetrationSpec::Unbounded { t2: 0.37 };
        let indoor = IndoorClutter {
            kappa_in: 0.0,
            depth_d_in: 2.0,
        };
        let b = Bounces::fixed(1.0, 1.0);
        let a = outdoor_indoor_canyon_gain_with(
            &canyon,
            &pen,
            &indoor,
            &Link::new(100.0, 3.5e9).unwrap(),
            &b,
        )
        .unwrap()
        .value;
        let c = outdoor_indoor_canyon_gain_with(
            &canyon,
            &pen,
            &indoor,
            &Link::new(1000.0, 3.5e9).unwrap(),
            &b,
        )
        .unwrap()
        .value;
        let (ra, rc) = (100f64.hypot(2.7), 1000f64.hypot(2.7));
        let slope = (to_db(c) - to_db(a)) / (rc / ra).log10();
        assert!((slope + 25.0).abs() < 1e-9);
        let l1 = guided_core(0.1, 8.0, 3.0, 100.0);
        let l2 = guided_core(0.1, 8.0, 6.0, 100.0);
        assert!((to_db(l2) - to_db(l1) + 4.5154).abs() < 1e-3);
    }
}
