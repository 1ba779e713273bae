//! Physical-plane quantities from the similarity solution.
//!
//! In barred variables (`x_bar = nu u_w x`, `y_bar = u_w y`) a point on the
//! streamline `psi` at similarity coordinate `eta` sits at
//! `x_bar = (psi / f(eta))^2`, `y_bar = psi eta / f(eta)`, with streamwise
//! velocity `u / u_w = f'(eta)`. Eliminating `psi` gives `eta = y_bar / sqrt(x_bar)`.

use crate::error::{Error, Result};
use crate::sakiadis::SakiadisSolution;

/// Smallest `eta` admitted on a streamline with `psi != 0`.
pub const DEFAULT_ETA_FLOOR: f64 = 1e-6;
/// Upper end of the envelope bisection.
pub const DEFAULT_ETA_CAP: f64 = 30.0;
/// Edge of the boundary layer used for plotting.
pub const DEFAULT_ENVELOPE_THRESHOLD: f64 = 0.1;

pub type Solution = SakiadisSolution<f64>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample {
    pub x_bar: f64,
    pub y_bar: f64,
    pub u_ratio: f64,
    pub eta: f64,
    pub psi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Streamline {
    pub psi: f64,
    /// `(x_bar, y_bar)` in order of increasing `eta`.
    pub points: Vec<(f64, f64)>,
}

pub fn map_to_physical(sol: &Solution, eta: f64, psi: f64) -> Result<FieldSample> {
    map_to_physical_with_floor(sol, eta, psi, DEFAULT_ETA_FLOOR)
}

pub fn map_to_physical_with_floor(
    sol: &Solution,
    eta: f64,
    psi: f64,
    eta_floor: f64,
) -> Result<FieldSample> {
    if psi != 0.0 && !(eta >= eta_floor) {
        return Err(Error::OriginSingularity {
            eta,
            psi,
            floor: eta_floor,
        });
    }
    let u_ratio = sol.eval_fp(&eta)?;
    if psi == 0.0 {
        // the wall streamline; every eta maps onto the origin
        return Ok(FieldSample {
            x_bar: 0.0,
            y_bar: 0.0,
            u_ratio,
            eta,
            psi,
        });
    }
    let ratio = psi / sol.eval_f(&eta)?;
    Ok(FieldSample {
        x_bar: ratio * ratio,
        y_bar: ratio * eta,
        u_ratio,
        eta,
        psi,
    })
}

/// `eta = y_bar / sqrt(x_bar)`.
pub fn similarity_eta(x_bar: f64, y_bar: f64) -> Result<f64> {
    if !(x_bar > 0.0) {
        return Err(Error::Domain(format!("x_bar must be positive, got {x_bar}")));
    }
    Ok(y_bar / x_bar.sqrt())
}

pub fn velocity_at(sol: &Solution, x_bar: f64, y_bar: f64) -> Result<f64> {
    sol.eval_fp(&similarity_eta(x_bar, y_bar)?)
}

/// `u / u_w` sampled on a `resolution x resolution` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityGrid {
    pub x_bar: Vec<f64>,
    pub y_bar: Vec<f64>,
    /// Row-major: `u_ratio[i * x_bar.len() + j]` is at `(x_bar[j], y_bar[i])`.
    pub u_ratio: Vec<f64>,
}

impl VelocityGrid {
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.u_ratio[row * self.x_bar.len() + col]
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub fn velocity_grid(
    sol: &Solution,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: usize,
) -> Result<VelocityGrid> {
    if !(x_range.0 > 0.0 && x_range.1 > 0.0) {
        return Err(Error::Domain(format!(
            "x_bar range must be positive, got {x_range:?}"
        )));
    }
    if !(y_range.0 >= 0.0) {
        return Err(Error::Domain(format!(
            "y_bar range must be non-negative, got {y_range:?}"
        )));
    }
    let x_bar = linspace(x_range.0, x_range.1, resolution);
    let y_bar = linspace(y_range.0, y_range.1, resolution);
    let mut u_ratio = Vec::with_capacity(resolution * resolution);
    for &y in &y_bar {
        for &x in &x_bar {
            u_ratio.push(velocity_at(sol, x, y)?);
        }
    }
    Ok(VelocityGrid {
        x_bar,
        y_bar,
        u_ratio,
    })
}

/// Polyline of constant `psi` over `n` equally spaced `eta` in `eta_range`.
///
/// With `clip = Some(threshold)` points outside the layer (`u/u_w < threshold`)
/// are dropped.
pub fn streamline(
    sol: &Solution,
    psi: f64,
    eta_range: (f64, f64),
    n: usize,
    clip: Option<f64>,
) -> Result<Streamline> {
    if psi == 0.0 {
        return Err(Error::Domain(
            "psi = 0 is the wall; use wall_streamline".to_string(),
        ));
    }
    let mut points = Vec::with_capacity(n);
    for eta in linspace(eta_range.0, eta_range.1, n) {
        let sample = map_to_physical(sol, eta, psi)?;
        if clip.is_some_and(|threshold| sample.u_ratio < threshold) {
            continue;
        }
        points.push((sample.x_bar, sample.y_bar));
    }
    Ok(Streamline { psi, points })
}

/// The `psi = 0` streamline: the wall `y_bar = 0`.
pub fn wall_streamline(x_range: (f64, f64), n: usize) -> Streamline {
    Streamline {
        psi: 0.0,
        points: linspace(x_range.0, x_range.1, n)
            .into_iter()
            .map(|x| (x, 0.0))
            .collect(),
    }
}

/// Bisection for `target` on a monotone function of `eta` over `[lo, hi]`.
fn bisect(mut lo: f64, mut hi: f64, mut above: impl FnMut(f64) -> Result<bool>) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The `eta` where `f'(eta) = threshold`.
pub fn envelope_eta(sol: &Solution, threshold: f64) -> Result<f64> {
    envelope_eta_capped(sol, threshold, DEFAULT_ETA_CAP)
}

pub fn envelope_eta_capped(sol: &Solution, threshold: f64, eta_cap: f64) -> Result<f64> {
    let at_cap = sol.eval_fp(&eta_cap)?;
    if !(threshold > at_cap && threshold < 1.0) {
        return Err(Error::NotBracketed {
            threshold,
            cap: eta_cap,
            at_cap,
        });
    }
    bisect(0.0, eta_cap, |eta| Ok(sol.eval_fp(&eta)? > threshold))
}

/// The `eta` where `f(eta) = target`, for `0 < target < C`.
pub fn eta_for_stream_value(sol: &Solution, target: f64) -> Result<f64> {
    let at_cap = sol.eval_f(&DEFAULT_ETA_CAP)?;
    if !(target > 0.0 && target < at_cap) {
        return Err(Error::NotBracketed {
            threshold: target,
            cap: DEFAULT_ETA_CAP,
            at_cap,
        });
    }
    bisect(0.0, DEFAULT_ETA_CAP, |eta| Ok(sol.eval_f(&eta)? < target))
}

/// Points `(x_bar, eta_star sqrt(x_bar))` of the layer edge.
pub fn envelope_curve(eta_star: f64, x_range: (f64, f64), n: usize) -> Vec<(f64, f64)> {
    linspace(x_range.0, x_range.1, n)
        .into_iter()
        .map(|x| (x, eta_star * x.max(0.0).sqrt()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sakiadis::solve;

    fn sol() -> Solution {
        solve(37, 17).unwrap().to_f64()
    }

    #[test]
    fn wall_point_moves_with_the_wall() {
        let s = map_to_physical(&sol(), 0.0, 0.0).unwrap();
        assert!((s.u_ratio - 1.0).abs() < 1e-12);
        assert_eq!((s.x_bar, s.y_bar), (0.0, 0.0));
    }

    #[test]
    fn origin_singularity() {
        let sol = sol();
        assert!(matches!(
            map_to_physical(&sol, 0.0, 1.0),
            Err(Error::OriginSingularity { .. })
        ));
        assert!(map_to_physical_with_floor(&sol, 1e-3, 1.0, 1e-2).is_err());
        assert!(map_to_physical(&sol, 1e-3, 1.0).is_ok());
    }

    #[test]
    fn far_field_mapping() {
        let sol = sol();
        let s = map_to_physical(&sol, 30.0, 1.0).unwrap();
        assert!((s.y_bar - 30.0 / sol.c()).abs() < 1e-8);
        assert!((s.x_bar - 1.0 / (sol.c() * sol.c())).abs() < 1e-9);
    }

    #[test]
    fn grid_wall_row_and_layout() {
        let grid = velocity_grid(&sol(), (1.0, 10.0), (0.0, 5.0), 4).unwrap();
        assert_eq!(grid.u_ratio.len(), 16);
        for j in 0..4 {
            assert!((grid.at(0, j) - 1.0).abs() < 1e-12);
        }
        // moving away from the wall slows the fluid
        assert!(grid.at(3, 0) < grid.at(1, 0));
        assert!(velocity_grid(&sol(), (0.0, 1.0), (0.0, 1.0), 3).is_err());
    }

    #[test]
    fn doubling_x_raises_velocity() {
        let sol = sol();
        let u1 = velocity_at(&sol, 4.0, 6.0).unwrap();
        let u2 = velocity_at(&sol, 8.0, 6.0).unwrap();
        assert!(u2 > u1);
        let eta = similarity_eta(8.0, 6.0).unwrap();
        assert!((eta - 3.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn streamline_shape() {
        let sol = sol();
        let s = streamline(&sol, 1.0, (0.5, 10.0), 100, None).unwrap();
        assert_eq!(s.points.len(), 100);
        assert!(s.points.iter().all(|p| p.0.is_finite() && p.1.is_finite()));
        assert!(s.points.windows(2).all(|w| w[1].0 < w[0].0));

        let s2 = streamline(&sol, 2.0, (0.5, 10.0), 100, None).unwrap();
        for (p1, p2) in s.points.iter().zip(&s2.points) {
            assert!((p2.0 - 4.0 * p1.0).abs() <= 1e-14 * p2.0);
            assert!((p2.1 - 2.0 * p1.1).abs() <= 1e-14 * p2.1);
        }
        assert!(streamline(&sol, 0.0, (0.5, 10.0), 10, None).is_err());
        assert!(streamline(&sol, 1.0, (0.0, 10.0), 10, None).is_err());
    }

    #[test]
    fn clipped_streamline_stays_inside_layer() {
        let sol = sol();
        let eta_star = envelope_eta(&sol, 0.1).unwrap();
        let s = streamline(&sol, 1.0, (0.5, 10.0), 200, Some(0.1)).unwrap();
        assert!(!s.points.is_empty() && s.points.len() < 200);
        for &(x, y) in &s.points {
            assert!(y / x.sqrt() <= eta_star + 1e-9);
        }
    }

    #[test]
    fn wall_streamline_is_flat() {
        let w = wall_streamline((0.0, 10.0), 11);
        assert_eq!(w.psi, 0.0);
        assert!(w.points.iter().all(|p| p.1 == 0.0));
        assert_eq!(w.points[10].0, 10.0);
    }

    #[test]
    fn envelope_limits() {
        let sol = sol();
        let near_wall = envelope_eta(&sol, 1.0 - 1e-9).unwrap();
        assert!(near_wall < 1e-6, "{near_wall}");
        assert!(matches!(
            envelope_eta(&sol, 1.0),
            Err(Error::NotBracketed { .. })
        ));
        assert!(envelope_eta(&sol, 0.0).is_err());
        let lo = envelope_eta(&sol, 0.2).unwrap();
        let hi = envelope_eta(&sol, 0.1).unwrap();
        assert!(lo < hi);
    }

    #[test]
    fn stream_value_inverse() {
        let sol = sol();
        let eta = eta_for_stream_value(&sol, 1.0).unwrap();
        assert!((sol.eval_f(&eta).unwrap() - 1.0).abs() < 1e-12);
        assert!(eta_for_stream_value(&sol, 2.0).is_err());
    }

    #[test]
    fn envelope_curve_is_parabolic() {
        let curve = envelope_curve(3.47, (0.0, 4.0), 5);
        assert_eq!(curve[4], (4.0, 6.94));
        assert_eq!(curve[0], (0.0, 0.0));
    }
}
