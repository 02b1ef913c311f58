//! Globally adaptive Gauss-Kronrod (7/15) quadrature in one and two
//! dimensions.
//!
//! The 2-D rule is the tensor product of the 1-D pair. Each rectangle carries
//! two directional error estimates (Gauss vs Kronrod along x, and along y);
//! the rectangle with the largest estimate is split across the axis that
//! dominates it. Nodes are interior only, so integrable endpoint
//! singularities and the `[a, inf)` map are handled without special cases.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::error::{Error, Result};

/// Tolerances and limits for the adaptive integrators.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Cooperative cancellation point, checked between subdivisions.
    pub deadline: Option<Instant>,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-9,
            max_subdivisions: 20_000,
            deadline: None,
        }
    }
}

impl QuadratureControl {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t.is_finite() && t >= 0.0;
        if !tol_ok(self.abs_tol) || !tol_ok(self.rel_tol) || self.abs_tol + self.rel_tol <= 0.0 {
            return Err(Error::invalid(
                "quadrature tolerance",
                "abs_tol and rel_tol must be nonnegative and not both zero",
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", "must be >= 1"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Cancelled("quadrature")),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

// Kronrod abscissae (positive half, descending) and weights; the Gauss
// 7-point nodes are the odd-indexed Kronrod nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 nodes on [-1, 1] with Kronrod and Gauss weights (0 for non-Gauss nodes).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], wg);
        out[14 - i] = (XGK[i], WGK[i], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (mut k, mut g) = (0.0, 0.0);
    for (x, wk, wg) in rule() {
        let y = f(c + h * x);
        k += wk * y;
        g += wg * y;
    }
    (k * h, ((k - g) * h).abs())
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    ctl: &QuadratureControl,
) -> Result<QuadratureResult> {
    ctl.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(
            "bounds",
            "finite bounds required; use integrate_to_infinity",
        ));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval {
        a,
        b,
        value: v,
        error: e,
    });
    let (mut total, mut err) = (v, e);
    let mut n = 1;
    while err > ctl.target(total) {
        if n >= ctl.max_subdivisions {
            return Err(Error::NonConvergence {
                what: "1-D quadrature",
                limit: ctl.max_subdivisions,
            });
        }
        ctl.check_deadline()?;
        let worst = heap.pop().expect("heap holds every interval");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        n += 1;
        // Recompute occasionally to shed accumulated cancellation.
        if n % 64 == 0 {
            total = heap.iter().map(|i| i.value).sum();
            err = heap.iter().map(|i| i.error).sum();
        }
    }
    let value = heap.iter().map(|i| i.value).sum();
    let error_estimate = heap.iter().map(|i| i.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate,
        subdivisions: n,
    })
}

/// Integrates `f` over `[a, inf)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    ctl: &QuadratureControl,
) -> Result<QuadratureResult> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let v = f(a + t / s) / (s * s);
            // Far tail underflows to 0/0 or inf/inf; its contribution is nil.
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        ctl,
    )
}

struct Cell {
    x: (f64, f64),
    y: (f64, f64),
    value: f64,
    err_x: f64,
    err_y: f64,
}

impl Cell {
    fn error(&self) -> f64 {
        self.err_x + self.err_y
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.error() == other.error()
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error().total_cmp(&other.error())
    }
}

fn gk15_2d<F: FnMut(f64, f64) -> f64>(f: &mut F, x: (f64, f64), y: (f64, f64)) -> Cell {
    let (cx, hx) = (0.5 * (x.0 + x.1), 0.5 * (x.1 - x.0));
    let (cy, hy) = (0.5 * (y.0 + y.1), 0.5 * (y.1 - y.0));
    let nodes = rule();
    let (mut kk, mut gk, mut kg) = (0.0, 0.0, 0.0);
    for &(xi, wkx, wgx) in &nodes {
        let px = cx + hx * xi;
        let (mut row_k, mut row_g) = (0.0, 0.0);
        for &(yj, wky, wgy) in &nodes {
            let v = f(px, cy + hy * yj);
            row_k += wky * v;
            row_g += wgy * v;
        }
        kk += wkx * row_k;
        gk += wgx * row_k;
        kg += wkx * row_g;
    }
    let area = hx * hy;
    Cell {
        x,
        y,
        value: kk * area,
        err_x: ((kk - gk) * area).abs(),
        err_y: ((kk - kg) * area).abs(),
    }
}

/// Integrates `f(x, y)` over the rectangle `[x0, x1] x [y0, y1]`.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    x: (f64, f64),
    y: (f64, f64),
    ctl: &QuadratureControl,
) -> Result<QuadratureResult> {
    ctl.validate()?;
    if ![x.0, x.1, y.0, y.1].iter().all(|v| v.is_finite()) {
        return Err(Error::invalid("bounds", "finite rectangle required"));
    }
    let first = gk15_2d(&mut f, x, y);
    let (mut total, mut err) = (first.value, first.error());
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut n = 1;
    while err > ctl.target(total) {
        if n >= ctl.max_subdivisions {
            return Err(Error::NonConvergence {
                what: "2-D quadrature",
                limit: ctl.max_subdivisions,
            });
        }
        ctl.check_deadline()?;
        let worst = heap.pop().expect("heap holds every cell");
        let (a, b) = if worst.err_x >= worst.err_y {
            let mid = 0.5 * (worst.x.0 + worst.x.1);
            (
                gk15_2d(&mut f, (worst.x.0, mid), worst.y),
                gk15_2d(&mut f, (mid, worst.x.1), worst.y),
            )
        } else {
            let mid = 0.5 * (worst.y.0 + worst.y.1);
            (
                gk15_2d(&mut f, worst.x, (worst.y.0, mid)),
                gk15_2d(&mut f, worst.x, (mid, worst.y.1)),
            )
        };
        total += a.value + b.value - worst.value;
        err += a.error() + b.error() - worst.error();
        heap.push(a);
        heap.push(b);
        n += 1;
        if n % 64 == 0 {
            total = heap.iter().map(|c| c.value).sum();
            err = heap.iter().map(Cell::error).sum();
        }
    }
    Ok(QuadratureResult {
        value: heap.iter().map(|c| c.value).sum(),
        error_estimate: heap.iter().map(Cell::error).sum(),
        subdivisions: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use std::time::Duration;

    #[test]
    fn weights_sum_to_two() {
        let r = rule();
        let k: f64 = r.iter().map(|n| n.1).sum();
        let g: f64 = r.iter().map(|n| n.2).sum();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomials_exact() {
        let ctl = QuadratureControl::default();
        let r = integrate(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0, &ctl).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-12);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        let ctl = QuadratureControl::with_rel_tol(1e-10);
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &ctl).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn semi_infinite_lorentzian() {
        let ctl = QuadratureControl::with_rel_tol(1e-11);
        let r = integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, &ctl).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-10);
        // int_0^inf sqrt(x)/(1+x^2) dx = pi/sqrt(2)
        let r = integrate_to_infinity(|x| x.sqrt() / (1.0 + x * x), 0.0, &ctl).unwrap();
        // The x^{-1.5} tail maps to an endpoint singularity resolved to ~1e-8.
        assert!((r.value - PI / 2f64.sqrt()).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn peaked_2d() {
        // Solid angle of a square seen from height 1 above its center:
        // int int 1/(1+x^2+y^2)^{3/2} over [-a,a]^2 = 4 atan(a^2 / sqrt(1+2a^2)).
        let ctl = QuadratureControl::with_rel_tol(1e-10);
        for a in [0.05, 1.0, 50.0] {
            let r = integrate_2d(
                |x, y| (1.0 + x * x + y * y).powf(-1.5),
                (-a, a),
                (-a, a),
                &ctl,
            )
            .unwrap();
            let exact = 4.0 * (a * a / (1.0 + 2.0 * a * a).sqrt()).atan();
            assert!((r.value / exact - 1.0).abs() < 1e-9, "a={a} {r:?} {exact}");
        }
    }

    #[test]
    fn subdivision_limit_reported() {
        let ctl = QuadratureControl {
            max_subdivisions: 3,
            rel_tol: 1e-14,
            ..Default::default()
        };
        let err = integrate(|x| x.sin() / x.max(1e-300), 0.0, 1000.0, &ctl).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn expired_deadline_cancels() {
        let ctl = QuadratureControl {
            rel_tol: 1e-14,
            deadline: Some(Instant::now() - Duration::from_secs(1)),
            ..Default::default()
        };
        let err = integrate(|x| (50.0 * x).sin().abs(), 0.0, 10.0, &ctl).unwrap_err();
        assert!(matches!(err, Error::Cancelled(_)));
    }

    #[test]
    fn bad_control_rejected() {
        let ctl = QuadratureControl {
            abs_tol: 0.0,
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate(|x| x, 0.0, 1.0, &ctl).is_err());
    }
}
