//! Parameter sets of the measured scenarios: corridor and urban walls,
//! outdoor-indoor links, and the dense and sparse tree-lined streets.

use crate::canyon::CanyonGeometry;
use crate::diffuse::PenetrationSpec;
use crate::morphology::{
    FoliageLayer, IndoorClutter, MacroGeometry, StreetScene, TreeDensity, KAPPA_V_28GHZ,
};
use crate::surface_em::{Dielectric, TelegraphRoughness, WallSurface};

fn wall(n: f64, a: f64, p1: f64, p2: f64, width: f64, gap: f64) -> WallSurface {
    WallSurface::rough(
        Dielectric::new(n).expect("preset index > 1"),
        TelegraphRoughness::from_widths(a, p1, p2, width, gap).expect("preset roughness"),
    )
}

/// Office corridor walls: n_eff 1.7, A 0.035 m, p 0.25/0.75, 1 m / 3 m.
pub fn corridor_wall() -> WallSurface {
    wall(1.7, 0.035, 0.25, 0.75, 1.0, 3.0)
}

/// Urban facades: n_eff 2.2, A 0.1 m, p 0.85/0.15, 0.33 m / 2 m.
pub fn urban_wall() -> WallSurface {
    wall(2.2, 0.1, 0.85, 0.15, 0.33, 2.0)
}

/// Urban facades as used for the tree-lined streets, with shallower
/// window wells (A 0.01 m).
pub fn street_wall() -> WallSurface {
    wall(2.2, 0.01, 0.85, 0.15, 0.33, 2.0)
}

/// 1.6 m corridor, base 2.2 m, terminal 1.0 m.
pub fn corridor_canyon() -> CanyonGeometry {
    CanyonGeometry::centered(1.6, 2.2, 1.0, corridor_wall())
}

/// 8.6 m street, base 5 m, terminal 1.5 m.
pub fn urban_canyon() -> CanyonGeometry {
    CanyonGeometry::centered(8.6, 5.0, 1.5, urban_wall())
}

/// Outdoor-indoor street link: base 0.5 m from a facade at 5 m height,
/// terminal at 7.7 m inside the building on the `+y` side. `same_side`
/// places the base against that building.
pub fn outdoor_indoor_street(same_side: bool) -> (CanyonGeometry, PenetrationSpec, IndoorClutter) {
    let mut c = CanyonGeometry::centered(8.6, 5.0, 7.7, urban_wall());
    let off = 8.6 / 2.0 - 0.5;
    c.tx_offset_y = if same_side { off } else { -off };
    (
        c,
        PenetrationSpec::Unbounded { t2: 0.37 },
        IndoorClutter {
            kappa_in: 0.0,
            depth_d_in: 1.0,
        },
    )
}

/// Corridor base, terminal in an adjacent room.
pub fn corridor_room() -> (CanyonGeometry, PenetrationSpec, IndoorClutter) {
    (
        corridor_canyon(),
        PenetrationSpec::Unbounded { t2: 0.27 },
        IndoorClutter {
            kappa_in: 0.0,
            depth_d_in: 1.0,
        },
    )
}

/// Suburban street: lamppost 3 m, terminal 1 m, d_s 20 m, d_v 10 m.
pub fn suburban_scene(kappa_v: f64) -> StreetScene {
    let canyon = CanyonGeometry::centered(20.0, 3.0, 1.0, street_wall());
    StreetScene::new(canyon, FoliageLayer::new(10.0, kappa_v), 20.0)
}

/// Vegetated macro geometry: base 14 m, clutter 10 m, terminal 1.5 m,
/// 20 m street.
pub fn vegetated_macro() -> MacroGeometry {
    MacroGeometry {
        z_bs: 14.0,
        z_c: 10.0,
        z_m: 1.5,
        street_width_w: 20.0,
    }
}

fn tree_street(w: f64, z_bs: f64, depth_dv: f64, n_tree: f64) -> (StreetScene, MacroGeometry) {
    let z_m = 1.5;
    let z_c = 10.0;
    let canyon = CanyonGeometry::centered(w, z_bs, z_m, street_wall());
    let foliage = FoliageLayer {
        depth_dv,
        kappa_v: KAPPA_V_28GHZ,
        density: Some(TreeDensity {
            n_tree,
            w_tree: 4.0,
            z_tree: z_c,
        }),
    };
    let scene = StreetScene::new(canyon, foliage, 5.0);
    let m = MacroGeometry {
        z_bs,
        z_c,
        z_m,
        street_width_w: w,
    };
    (scene, m)
}

/// Dense trees 15 m apart along a 30 m avenue, base 15 m.
pub fn dense_tree_street() -> (StreetScene, MacroGeometry) {
    tree_street(30.0, 15.0, 5.0, 4.0 / 15.0)
}

/// Sparse trees on a 32 m avenue, rooftop base at 56 m.
pub fn sparse_tree_street() -> (StreetScene, MacroGeometry) {
    tree_street(32.0, 56.0, 3.0, 0.05)
}
