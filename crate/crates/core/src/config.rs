//! TOML environment description and the morphology registry that turns it
//! into a path gain law.
//!
//! Units are part of every key name. Unknown keys are rejected.

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::canyon::{
    los_canyon_gain, los_gain_coherent, los_gain_incoherent, CanyonGeometry, LosLink,
};
use crate::diffuse::PenetrationSpec;
use crate::error::{Error, Result};
use crate::flags::Regime;
use crate::morphology::{
    canyon_total_gain, kappa_v_at_frequency, outdoor_indoor_canyon_gain_with, overtop_gain_with,
    overtop_wide_gain, rural_gain_with, sidewalk_guided_gain, sidewalk_unguided_gain,
    suburban_indoor_gain, suburban_street_gain, Bounces, FoliageLayer, IndoorClutter, Link,
    MacroGeometry, StreetScene, TreeDensity,
};
use crate::reference::{
    friis_gain, tr38901_gain_db, uma_nlos_36814, Condition, Family, ThreeGppScenario,
};
use crate::surface_em::{
    Dielectric, Polarization, TelegraphRoughness, WallSurface, GROUND_INDEX_DEFAULT,
};
use crate::units::require_positive;
use crate::units::{from_db, to_db, wavelength};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub link: Option<LinkBlock>,
    pub wall: Option<WallBlock>,
    pub canyon: Option<CanyonBlock>,
    pub foliage: Option<FoliageBlock>,
    pub penetration: Option<PenetrationSpec>,
    pub indoor: Option<IndoorBlock>,
    #[serde(rename = "macro")]
    pub macro_: Option<MacroBlock>,
    pub street: Option<StreetBlock>,
    pub bounces: Option<Bounces>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBlock {
    pub frequency_hz: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallBlock {
    pub n_eff: Option<f64>,
    #[serde(rename = "A_m")]
    pub a_m: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub mean_width_m: Option<f64>,
    pub mean_gap_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanyonBlock {
    pub width_m: Option<f64>,
    pub tx_height_m: Option<f64>,
    pub rx_height_m: Option<f64>,
    pub ground_index: Option<f64>,
    pub ground_polarization: Option<Polarization>,
    /// Transverse offsets from the centre line; the terminal's building is
    /// on the positive side.
    pub tx_offset_m: Option<f64>,
    pub rx_offset_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum KappaSetting {
    Value(f64),
    Keyword(KappaKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaKeyword {
    /// Interpolated from the link frequency.
    Auto,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliageBlock {
    pub depth_m: Option<f64>,
    pub kappa_np_per_m: Option<KappaSetting>,
    /// Fraction of the street length covered by crowns.
    pub n_tree_per_m: Option<f64>,
    pub tree_width_m: Option<f64>,
    pub tree_height_m: Option<f64>,
    /// Overrides the fill fraction estimated from the tree density.
    pub rho_v: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndoorBlock {
    pub kappa_np_per_m: Option<f64>,
    pub depth_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacroBlock {
    pub z_bs_m: Option<f64>,
    pub z_c_m: Option<f64>,
    pub z_m_m: Option<f64>,
    pub street_width_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreetBlock {
    /// Source standoff from the clutter boundary; defaults to the canyon
    /// width.
    pub standoff_m: Option<f64>,
    pub kappa_extra_np_per_m: Option<f64>,
    pub direct_veg_path_m: Option<f64>,
    pub vegetation_free_m: Option<f64>,
}

impl EnvironmentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn frequency_hz(&self) -> Option<f64> {
        self.link.as_ref().and_then(|l| l.frequency_hz)
    }
}

/// Named path gain laws a config can drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Morphology {
    /// Canyon or corridor LOS with incoherent ground bounce.
    LosCorridor,
    /// As [`Morphology::LosCorridor`] with the coherent two-ray bounce.
    LosCoherent,
    SuburbanStreet,
    SuburbanIndoor,
    Overtop,
    OvertopWide,
    Rural,
    OutdoorIndoor,
    SidewalkTrees,
    CanyonTotal,
}

impl Morphology {
    pub const ALL: [Morphology; 10] = [
        Morphology::LosCorridor,
        Morphology::LosCoherent,
        Morphology::SuburbanStreet,
        Morphology::SuburbanIndoor,
        Morphology::Overtop,
        Morphology::OvertopWide,
        Morphology::Rural,
        Morphology::OutdoorIndoor,
        Morphology::SidewalkTrees,
        Morphology::CanyonTotal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Morphology::LosCorridor => "los_corridor",
            Morphology::LosCoherent => "los_coherent",
            Morphology::SuburbanStreet => "suburban_street",
            Morphology::SuburbanIndoor => "suburban_indoor",
            Morphology::Overtop => "overtop",
            Morphology::OvertopWide => "overtop_wide",
            Morphology::Rural => "rural",
            Morphology::OutdoorIndoor => "outdoor_indoor",
            Morphology::SidewalkTrees => "sidewalk_trees",
            Morphology::CanyonTotal => "canyon_total",
        }
    }

    /// Output component names, in column order.
    pub fn components(self) -> &'static [&'static str] {
        match self {
            Morphology::LosCorridor | Morphology::LosCoherent => &["walls"],
            Morphology::Rural => &["direct", "overtop"],
            Morphology::SidewalkTrees => &["guided", "unguided"],
            Morphology::CanyonTotal => &["guided", "unguided", "trees", "overtop", "direct"],
            _ => &[],
        }
    }
}

impl FromStr for Morphology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = if s == "los_canyon" { "los_corridor" } else { s };
        Morphology::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Morphology::ALL.iter().map(|m| m.name()).collect();
                Error::invalid(
                    "morphology",
                    format!("unknown `{s}`; expected one of {}", names.join(", ")),
                )
            })
    }
}

/// Collects absent keys so a config error lists all of them at once.
struct Need<'a> {
    missing: Vec<String>,
    cfg: &'a EnvironmentConfig,
}

impl<'a> Need<'a> {
    fn field(&mut self, name: &str, v: Option<f64>) -> f64 {
        v.unwrap_or_else(|| {
            self.missing.push(name.to_owned());
            f64::NAN
        })
    }

    fn frequency(&mut self) -> f64 {
        let v = self.cfg.frequency_hz();
        self.field("link.frequency_hz", v)
    }

    fn wall(&mut self) {
        let w = self.cfg.wall.clone().unwrap_or_default();
        self.field("wall.n_eff", w.n_eff);
        self.field("wall.A_m", w.a_m);
        self.field("wall.p1", w.p1);
        self.field("wall.p2", w.p2);
        self.field("wall.mean_width_m", w.mean_width_m);
        self.field("wall.mean_gap_m", w.mean_gap_m);
    }

    fn finish(self, m: Morphology) -> Result<()> {
        if self.missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingFields {
                morphology: m.name().to_owned(),
                missing: self.missing,
            })
        }
    }
}

fn wall_from(block: &WallBlock) -> Result<WallSurface> {
    let get = |v: Option<f64>| v.expect("presence checked");
    let n = Dielectric::new(get(block.n_eff))?;
    let r = TelegraphRoughness::from_widths(
        get(block.a_m),
        get(block.p1),
        get(block.p2),
        get(block.mean_width_m),
        get(block.mean_gap_m),
    )?;
    Ok(WallSurface::rough(n, r))
}

/// A config resolved for one morphology: every law input is present and
/// validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub morphology: Morphology,
    pub frequency_hz: f64,
    pub canyon: Option<CanyonGeometry>,
    pub scene: Option<StreetScene>,
    pub macro_geometry: Option<MacroGeometry>,
    pub foliage: Option<FoliageLayer>,
    pub penetration: Option<PenetrationSpec>,
    pub indoor: Option<IndoorClutter>,
    pub bounces: Bounces,
    /// Flags raised while resolving, e.g. an extrapolated foliage absorption.
    pub flags: Regime,
}

/// One evaluated point of a morphology.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub total: f64,
    pub components: Vec<f64>,
    pub flags: Regime,
}

impl Resolved {
    pub fn new(cfg: &EnvironmentConfig, morphology: Morphology) -> Result<Self> {
        use Morphology as M;
        let mut need = Need {
            missing: Vec::new(),
            cfg,
        };
        let f = need.frequency();
        let uses_wall = matches!(
            morphology,
            M::LosCorridor | M::LosCoherent | M::OutdoorIndoor | M::SidewalkTrees | M::CanyonTotal
        );
        if uses_wall {
            need.wall();
        }
        let canyon = cfg.canyon.clone().unwrap_or_default();
        let macro_ = cfg.macro_.clone().unwrap_or_default();
        let foliage = cfg.foliage.clone().unwrap_or_default();
        let indoor = cfg.indoor.clone().unwrap_or_default();
        // Sidewalk trees may take the street from the macro block instead.
        let sidewalk_from_macro = morphology == M::SidewalkTrees
            && cfg.macro_.is_some()
            && canyon.width_m.is_none()
            && canyon.tx_height_m.is_none()
            && canyon.rx_height_m.is_none();
        let street_from_macro = morphology == M::CanyonTotal || sidewalk_from_macro;
        let uses_canyon_block =
            !street_from_macro && !matches!(morphology, M::Overtop | M::OvertopWide | M::Rural);
        if uses_canyon_block {
            need.field("canyon.width_m", canyon.width_m);
            need.field("canyon.tx_height_m", canyon.tx_height_m);
            need.field("canyon.rx_height_m", canyon.rx_height_m);
        }
        let uses_macro =
            street_from_macro || matches!(morphology, M::Overtop | M::OvertopWide | M::Rural);
        if uses_macro {
            need.field("macro.z_bs_m", macro_.z_bs_m);
            need.field("macro.z_c_m", macro_.z_c_m);
            need.field("macro.z_m_m", macro_.z_m_m);
            need.field("macro.street_width_m", macro_.street_width_m);
        }
        let uses_foliage = !matches!(
            morphology,
            M::LosCorridor | M::LosCoherent | M::OutdoorIndoor
        );
        if uses_foliage {
            if !matches!(morphology, M::Overtop | M::OvertopWide) {
                need.field("foliage.depth_m", foliage.depth_m);
            }
            if foliage.kappa_np_per_m.is_none() {
                need.missing.push("foliage.kappa_np_per_m".into());
            }
        }
        if matches!(morphology, M::SuburbanIndoor | M::OutdoorIndoor) {
            if cfg.penetration.is_none() {
                need.missing.push("penetration.variant".into());
            }
            need.field("indoor.depth_m", indoor.depth_m);
        }
        need.finish(morphology)?;

        let mut flags = Regime::empty();
        let bounces_default = cfg.bounces;
        let ground = Dielectric::new(canyon.ground_index.unwrap_or(GROUND_INDEX_DEFAULT))?;
        let polarization = canyon.ground_polarization.unwrap_or_default();
        let wall = match (&cfg.wall, uses_wall) {
            (Some(w), true) => wall_from(w)?,
            _ => WallSurface::smooth(Dielectric::new(2.0)?),
        };

        let kappa_v = match foliage.kappa_np_per_m {
            Some(KappaSetting::Value(k)) => k,
            Some(KappaSetting::Keyword(KappaKeyword::Auto)) => {
                let k = kappa_v_at_frequency(f)?;
                flags |= k.flags;
                k.value
            }
            None => 0.0,
        };
        let density =
            match (
                foliage.n_tree_per_m,
                foliage.tree_width_m,
                foliage.tree_height_m,
            ) {
                (Some(n_tree), Some(w_tree), Some(z_tree)) => Some(TreeDensity {
                    n_tree,
                    w_tree,
                    z_tree,
                }),
                (None, None, None) => None,
                _ => return Err(Error::Config(
                    "foliage.n_tree_per_m, tree_width_m and tree_height_m must be given together"
                        .into(),
                )),
            };
        let foliage_layer = FoliageLayer {
            depth_dv: foliage.depth_m.unwrap_or(0.0),
            kappa_v,
            density,
        };
        foliage_layer.validate()?;

        let macro_geometry = if uses_macro {
            let m = MacroGeometry {
                z_bs: macro_.z_bs_m.expect("checked"),
                z_c: macro_.z_c_m.expect("checked"),
                z_m: macro_.z_m_m.expect("checked"),
                street_width_w: macro_.street_width_m.expect("checked"),
            };
            m.validate()?;
            Some(m)
        } else {
            None
        };

        let canyon_geom = if uses_canyon_block {
            Some(CanyonGeometry {
                width_w: canyon.width_m.expect("checked"),
                tx_height_zs: canyon.tx_height_m.expect("checked"),
                rx_height_z: canyon.rx_height_m.expect("checked"),
                ground,
                ground_polarization: polarization,
                wall,
                tx_offset_y: canyon.tx_offset_m.unwrap_or(0.0),
                rx_offset_y: canyon.rx_offset_m.unwrap_or(0.0),
            })
        } else if street_from_macro {
            // The sidewalk scene shares the macro heights and street width.
            let m = macro_geometry.expect("street from macro");
            if let (Some(w), Some(zs), Some(z)) =
                (canyon.width_m, canyon.tx_height_m, canyon.rx_height_m)
            {
                if (w, zs, z) != (m.street_width_w, m.z_bs, m.z_m) {
                    return Err(Error::Config(
                        "canyon block disagrees with macro block; canyon_total takes width and heights from macro".into(),
                    ));
                }
            }
            Some(CanyonGeometry {
                width_w: m.street_width_w,
                tx_height_zs: m.z_bs,
                rx_height_z: m.z_m,
                ground,
                ground_polarization: polarization,
                wall,
                tx_offset_y: 0.0,
                rx_offset_y: 0.0,
            })
        } else {
            None
        };
        if let Some(c) = &canyon_geom {
            c.validate()?;
        }
        let bounces = bounces_default.unwrap_or_else(|| match &canyon_geom {
            Some(c) => Bounces::for_canyon(c),
            None => Bounces {
                ground: crate::morphology::GroundModel::LowGrazing {
                    index: ground,
                    polarization,
                },
                ..Bounces::default()
            },
        });

        let scene = match (&canyon_geom, uses_foliage) {
            (Some(c), true) => {
                let street = cfg.street.clone().unwrap_or_default();
                let mut s =
                    StreetScene::new(*c, foliage_layer, street.standoff_m.unwrap_or(c.width_w));
                s.rho_v = foliage.rho_v;
                s.kappa_extra = street.kappa_extra_np_per_m.unwrap_or(0.0);
                s.direct_veg_path_rv = street.direct_veg_path_m;
                s.vegetation_free_m = street.vegetation_free_m.unwrap_or(0.0);
                s.bounces = bounces;
                s.validate()?;
                flags |= s.rho_v()?.flags;
                Some(s)
            }
            _ => None,
        };
        let indoor_clutter = if matches!(morphology, M::SuburbanIndoor | M::OutdoorIndoor) {
            let c = IndoorClutter {
                kappa_in: indoor.kappa_np_per_m.unwrap_or(0.0),
                depth_d_in: indoor.depth_m.expect("checked"),
            };
            c.validate()?;
            Some(c)
        } else {
            None
        };
        if let Some(p) = &cfg.penetration {
            p.validate()?;
        }
        require_positive("link.frequency_hz", f)?;

        Ok(Resolved {
            morphology,
            frequency_hz: f,
            canyon: canyon_geom,
            scene,
            macro_geometry,
            foliage: Some(foliage_layer),
            penetration: cfg.penetration,
            indoor: indoor_clutter,
            bounces,
            flags,
        })
    }

    /// Evaluates the morphology at horizontal distance `x` (m).
    pub fn predict(&self, x: f64) -> Result<Prediction> {
        use Morphology as M;
        let link = Link::new(x, self.frequency_hz)?;
        let kappa = self.foliage.map_or(0.0, |f| f.kappa_v);
        let (total, components, flags) = match self.morphology {
            M::LosCorridor | M::LosCoherent => {
                let l = LosLink::new(self.canyon.expect("resolved"), x, self.frequency_hz)?;
                let walls = los_canyon_gain(&l)?;
                let t = if self.morphology == M::LosCorridor {
                    los_gain_incoherent(&l)?
                } else {
                    los_gain_coherent(&l)?
                };
                (t.value, vec![walls.value], t.flags)
            }
            M::SuburbanStreet => {
                let p = suburban_street_gain(self.scene.as_ref().expect("resolved"), &link)?;
                (p.value, vec![], p.flags)
            }
            M::SuburbanIndoor => {
                let p = suburban_indoor_gain(
                    self.scene.as_ref().expect("resolved"),
                    self.indoor.as_ref().expect("resolved"),
                    self.penetration.as_ref().expect("resolved"),
                    &link,
                )?;
                (p.value, vec![], p.flags)
            }
            M::Overtop => {
                let p = overtop_gain_with(
                    self.macro_geometry.as_ref().expect("resolved"),
                    kappa,
                    &link,
                    &self.bounces,
                )?;
                (p.value, vec![], p.flags)
            }
            M::OvertopWide => {
                let p = overtop_wide_gain(
                    self.macro_geometry.as_ref().expect("resolved"),
                    kappa,
                    &link,
                    &self.bounces,
                )?;
                (p.value, vec![], p.flags)
            }
            M::Rural => {
                let g = rural_gain_with(
                    self.macro_geometry.as_ref().expect("resolved"),
                    self.foliage.as_ref().expect("resolved"),
                    &link,
                    &self.bounces,
                )?;
                (g.total, vec![g.direct, g.overtop], g.flags)
            }
            M::OutdoorIndoor => {
                let p = outdoor_indoor_canyon_gain_with(
                    self.canyon.as_ref().expect("resolved"),
                    self.penetration.as_ref().expect("resolved"),
                    self.indoor.as_ref().expect("resolved"),
                    &link,
                    &self.bounces,
                )?;
                (p.value, vec![], p.flags)
            }
            M::SidewalkTrees => {
                let s = self.scene.as_ref().expect("resolved");
                let g = sidewalk_guided_gain(s, &link)?;
                let u = sidewalk_unguided_gain(s, &link)?;
                (
                    g.value.max(u.value),
                    vec![g.value, u.value],
                    g.flags | u.flags,
                )
            }
            M::CanyonTotal => {
                let t = canyon_total_gain(
                    self.scene.as_ref().expect("resolved"),
                    self.macro_geometry.as_ref().expect("resolved"),
                    &link,
                )?;
                (
                    t.total,
                    t.components().iter().map(|c| c.1).collect(),
                    t.flags,
                )
            }
        };
        Ok(Prediction {
            total,
            components,
            flags: flags | self.flags,
        })
    }
}

/// Comparison models evaluable against a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceModel {
    Friis,
    UmaLos,
    UmaNlos,
    UmiLos,
    UmiNlos,
    InhLos,
    InhNlos,
    O2i,
    Uma36814,
}

impl ReferenceModel {
    pub const ALL: [ReferenceModel; 9] = [
        ReferenceModel::Friis,
        ReferenceModel::UmaLos,
        ReferenceModel::UmaNlos,
        ReferenceModel::UmiLos,
        ReferenceModel::UmiNlos,
        ReferenceModel::InhLos,
        ReferenceModel::InhNlos,
        ReferenceModel::O2i,
        ReferenceModel::Uma36814,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReferenceModel::Friis => "friis",
            ReferenceModel::UmaLos => "uma_los",
            ReferenceModel::UmaNlos => "uma_nlos",
            ReferenceModel::UmiLos => "umi_los",
            ReferenceModel::UmiNlos => "umi_nlos",
            ReferenceModel::InhLos => "inh_los",
            ReferenceModel::InhNlos => "inh_nlos",
            ReferenceModel::O2i => "o2i",
            ReferenceModel::Uma36814 => "uma_36814",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        ReferenceModel::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// Base and terminal heights from the macro block, else the canyon block.
fn heights(cfg: &EnvironmentConfig) -> Option<(f64, f64)> {
    let m = cfg.macro_.as_ref();
    let c = cfg.canyon.as_ref();
    let bs = m
        .and_then(|m| m.z_bs_m)
        .or_else(|| c.and_then(|c| c.tx_height_m));
    let ut = m
        .and_then(|m| m.z_m_m)
        .or_else(|| c.and_then(|c| c.rx_height_m));
    bs.zip(ut)
}

/// Path gain in dB of a reference model at horizontal distance `x`.
pub fn reference_gain_db(model: ReferenceModel, cfg: &EnvironmentConfig, x: f64) -> Result<f64> {
    let missing = |fields: &[&str]| Error::MissingFields {
        morphology: model.name().to_owned(),
        missing: fields.iter().map(|s| s.to_string()).collect(),
    };
    let f = cfg
        .frequency_hz()
        .ok_or_else(|| missing(&["link.frequency_hz"]))?;
    if model == ReferenceModel::Friis {
        let (bs, ut) = heights(cfg).unwrap_or((0.0, 0.0));
        return Ok(to_db(friis_gain(wavelength(f), x.hypot(bs - ut))?));
    }
    let (h_bs, h_ut) = heights(cfg).ok_or_else(|| missing(&["macro.z_bs_m", "macro.z_m_m"]))?;
    if model == ReferenceModel::Uma36814 {
        let m = cfg.macro_.clone().unwrap_or_default();
        let (w, zb) = m
            .street_width_m
            .zip(m.z_c_m)
            .ok_or_else(|| missing(&["macro.street_width_m", "macro.z_c_m"]))?;
        return Ok(-uma_nlos_36814(
            w,
            zb,
            h_bs,
            h_ut,
            f / 1e9,
            x.hypot(h_bs - h_ut),
        )?);
    }
    let (family, condition) = match model {
        ReferenceModel::UmaLos => (Family::UMa, Condition::Los),
        ReferenceModel::UmaNlos => (Family::UMa, Condition::Nlos),
        ReferenceModel::UmiLos => (Family::UMi, Condition::Los),
        ReferenceModel::UmiNlos => (Family::UMi, Condition::Nlos),
        ReferenceModel::InhLos => (Family::InH, Condition::Los),
        ReferenceModel::InhNlos => (Family::InH, Condition::Nlos),
        ReferenceModel::O2i => (Family::O2I, Condition::Los),
        ReferenceModel::Friis | ReferenceModel::Uma36814 => unreachable!("handled above"),
    };
    let mut s = ThreeGppScenario::new(family, condition, f / 1e9, h_bs, h_ut);
    if family == Family::O2I {
        s.indoor_depth_m = cfg.indoor.as_ref().and_then(|i| i.depth_m).unwrap_or(0.0);
    }
    Ok(tr38901_gain_db(&s, x)?.value)
}

/// A configured morphology or a reference curve, addressed by name.
#[derive(Debug, Clone)]
pub enum PathModel {
    Morphology(Box<Resolved>),
    Reference(ReferenceModel, Box<EnvironmentConfig>),
}

impl PathModel {
    /// Reference model names take precedence over morphology names.
    pub fn new(cfg: &EnvironmentConfig, name: &str) -> Result<Self> {
        if let Some(r) = ReferenceModel::parse(name) {
            return Ok(PathModel::Reference(r, Box::new(cfg.clone())));
        }
        let m: Morphology = name.parse()?;
        Ok(PathModel::Morphology(Box::new(Resolved::new(cfg, m)?)))
    }

    pub fn components(&self) -> &'static [&'static str] {
        match self {
            PathModel::Morphology(r) => r.morphology.components(),
            PathModel::Reference(..) => &[],
        }
    }

    /// Linear gain, components and flags at horizontal distance `x`.
    pub fn predict(&self, x: f64) -> Result<Prediction> {
        match self {
            PathModel::Morphology(r) => r.predict(x),
            PathModel::Reference(m, cfg) => Ok(Prediction {
                total: from_db(reference_gain_db(*m, cfg, x)?),
                components: Vec::new(),
                flags: Regime::empty(),
            }),
        }
    }

    pub fn gain_db(&self, x: f64) -> Result<f64> {
        match self {
            PathModel::Reference(m, cfg) => reference_gain_db(*m, cfg, x),
            PathModel::Morphology(r) => Ok(to_db(r.predict(x)?.total)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CORRIDOR: &str = r#"
[link]
frequency_hz = 2e9

[wall]
n_eff = 1.7
A_m = 0.035
p1 = 0.25
p2 = 0.75
mean_width_m = 1.0
mean_gap_m = 3.0

[canyon]
width_m = 1.6
tx_height_m = 2.2
rx_height_m = 1.0
"#;

    #[test]
    fn corridor_resolves_and_predicts() {
        let cfg = EnvironmentConfig::from_toml_str(CORRIDOR).unwrap();
        let r = Resolved::new(&cfg, Morphology::LosCorridor).unwrap();
        let p = r.predict(30.0).unwrap();
        assert!(p.total > p.components[0]);
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{CORRIDOR}\nbogus_m = 3\n");
        assert!(matches!(
            EnvironmentConfig::from_toml_str(&text),
            Err(Error::Config(_))
        ));
        let text = CORRIDOR.replace("n_eff", "n_effective");
        assert!(EnvironmentConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn missing_fields_listed() {
        let cfg = EnvironmentConfig::from_toml_str(CORRIDOR).unwrap();
        match Resolved::new(&cfg, Morphology::CanyonTotal) {
            Err(Error::MissingFields { missing, .. }) => {
                assert!(missing.contains(&"macro.z_bs_m".to_string()));
                assert!(missing.contains(&"foliage.kappa_np_per_m".to_string()));
                assert!(missing.contains(&"foliage.depth_m".to_string()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kappa_auto() {
        let text = r#"
[link]
frequency_hz = 28e9
[macro]
z_bs_m = 14.0
z_c_m = 10.0
z_m_m = 1.5
street_width_m = 20.0
[foliage]
kappa_np_per_m = "auto"
"#;
        let cfg = EnvironmentConfig::from_toml_str(text).unwrap();
        let r = Resolved::new(&cfg, Morphology::Overtop).unwrap();
        let k = r.foliage.unwrap().kappa_v;
        assert!((k - kappa_v_at_frequency(28e9).unwrap().value).abs() < 1e-15);
    }

    #[test]
    fn morphology_names_round_trip() {
        for m in Morphology::ALL {
            assert_eq!(m.name().parse::<Morphology>().unwrap(), m);
        }
        assert_eq!(
            "los_canyon".parse::<Morphology>().unwrap(),
            Morphology::LosCorridor
        );
    }
}
