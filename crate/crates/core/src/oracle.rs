//! Independent double-precision checks of the series solution.
//!
//! Two classical RK4 integrations: the transformed problem in `g`, marched
//! from just below the singular point `g = 0` until `F(g)` crosses zero
//! (giving `gamma`), and the original problem in `eta`, shot from the wall
//! with a bisected `f''(0)` (giving `kappa`).

use crate::error::{Error, Result};

pub const DEFAULT_IVP_STEP: f64 = 1e-4;
pub const DEFAULT_G_MIN: f64 = -1.5;
/// Offset from the singular point `g = 0` where integration starts.
pub const DEFAULT_EPSILON: f64 = 1e-6;

pub const DEFAULT_SHOOTING_STEP: f64 = 1e-3;
pub const DEFAULT_ETA_MAX: f64 = 30.0;
pub const DEFAULT_SHOOTING_TOL: f64 = 1e-10;
pub const SHOOTING_BRACKET: (f64, f64) = (-1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    TransformedRk4,
    Shooting,
}

/// Sampled trajectory `(t, [y, y', y''])` and the quantity it estimates.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub samples: Vec<(f64, [f64; 3])>,
    pub estimate: f64,
    pub method: OracleMethod,
    pub step: f64,
}

type State = [f64; 3];

fn rk4_step(rhs: impl Fn(f64, &State) -> State, t: f64, y: &State, h: f64) -> State {
    let shift = |y: &State, k: &State, s: f64| [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2]];
    let k1 = rhs(t, y);
    let k2 = rhs(t + 0.5 * h, &shift(y, &k1, 0.5 * h));
    let k3 = rhs(t + 0.5 * h, &shift(y, &k2, 0.5 * h));
    let k4 = rhs(t + h, &shift(y, &k3, h));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Transformed equation with the state shifted to `u = F - 1`:
/// `g^2 F''' = F'(F - 1) + g F'' (F - 3)`.
///
/// Both right-hand terms are `O(g)` near the singular point and cancel to
/// `O(g^2)`; writing them through `u` instead of `F` keeps that cancellation
/// free of the `O(1)` rounding error in `F`.
fn transformed_rhs(g: f64, y: &State) -> State {
    let [u, fp, fpp] = *y;
    let numerator = fp * u + g * fpp * (u - 2.0);
    [fp, fpp, numerator / (g * g)]
}

/// `(F - 1, F', F'')` from `F = 1 + g + g^2/4 + 5 g^3/72`.
fn series_seed(g: f64) -> State {
    [
        g + g * g / 4.0 + 5.0 * g * g * g / 72.0,
        1.0 + g / 2.0 + 15.0 * g * g / 72.0,
        0.5 + 30.0 * g / 72.0,
    ]
}

/// RK4 solution of the transformed problem from `g = -epsilon` down to `g_min`.
///
/// Samples hold `(g, [F, F', F''])` with strictly decreasing `g`; the final
/// step is shortened to land on `g_min`. The estimate is the zero of `F`.
pub fn integrate_transformed_ivp(step: f64, g_min: f64) -> Result<OracleResult> {
    integrate_transformed_ivp_from(step, g_min, DEFAULT_EPSILON)
}

pub fn integrate_transformed_ivp_from(step: f64, g_min: f64, epsilon: f64) -> Result<OracleResult> {
    if !(step > 0.0) || !(epsilon > 0.0) || !(g_min < -epsilon) {
        return Err(Error::Domain(format!(
            "need step > 0 and g_min < -epsilon < 0, got step {step}, g_min {g_min}, epsilon {epsilon}"
        )));
    }
    let start = -epsilon;
    let mut g = start;
    let mut y = series_seed(g);
    let mut states = vec![(g, y)];
    let mut crossing = None;
    while g > g_min {
        let last = g - g_min <= step;
        let h = if last { g_min - g } else { -step };
        let next = rk4_step(transformed_rhs, g, &y, h);
        let jump = (next[0] - y[0]).abs();
        if !next.iter().all(|v| v.is_finite()) || jump > 0.1 * (1.0 + y[0]).abs().max(1.0) {
            return Err(Error::StepTooLarge { step, jump, at: g });
        }
        if crossing.is_none() && (1.0 + y[0]) * (1.0 + next[0]) <= 0.0 {
            crossing = Some((g, y, h));
        }
        g = if last { g_min } else { g + h };
        y = next;
        states.push((g, y));
    }
    let (g0, y0, h) = crossing.ok_or(Error::NoCrossing {
        g_min,
        g_start: start,
    })?;
    let estimate = bisect_crossing(g0, &y0, h);
    let samples = states
        .into_iter()
        .map(|(g, [u, fp, fpp])| (g, [1.0 + u, fp, fpp]))
        .collect();
    Ok(OracleResult {
        samples,
        estimate,
        method: OracleMethod::TransformedRk4,
        step,
    })
}

/// Zero of `F` inside one step, bisecting on partial RK4 steps from the left sample.
fn bisect_crossing(g0: f64, y0: &State, h: f64) -> f64 {
    let value = |s: f64| 1.0 + rk4_step(transformed_rhs, g0, y0, s)[0];
    let (mut lo, mut hi) = (0.0, h);
    let sign_lo = (1.0 + y0[0]).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if value(mid).signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    g0 + 0.5 * (lo + hi)
}

/// Sign changes of `F` along the sampled trajectory.
pub fn count_sign_changes(result: &OracleResult) -> usize {
    result
        .samples
        .windows(2)
        .filter(|w| w[0].1[0] * w[1].1[0] < 0.0 || (w[1].1[0] == 0.0 && w[0].1[0] != 0.0))
        .count()
}

fn blasius_rhs(_: f64, y: &State) -> State {
    [y[1], y[2], -0.5 * y[0] * y[2]]
}

/// Wall-to-edge profile `(eta, [f, f', f''])` of `2 f''' + f f'' = 0`.
///
/// With `f''(0) < 0`, `f''` keeps its sign, so once `f'` drops well below
/// zero it cannot recover; integration stops there.
pub fn integrate_wall_profile(kappa: f64, eta_max: f64, step: f64) -> Vec<(f64, State)> {
    let steps = (eta_max / step).round().max(1.0) as usize;
    let h = eta_max / steps as f64;
    let mut y = [0.0, 1.0, kappa];
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((0.0, y));
    for i in 0..steps {
        y = rk4_step(blasius_rhs, i as f64 * h, &y, h);
        samples.push(((i + 1) as f64 * h, y));
        if !y.iter().all(|v| v.is_finite()) || y[1] < -1.0 {
            break;
        }
    }
    samples
}

fn far_slope(kappa: f64, eta_max: f64, step: f64) -> f64 {
    let profile = integrate_wall_profile(kappa, eta_max, step);
    let &(eta, y) = profile.last().expect("profile starts at the wall");
    if eta < eta_max || !y[1].is_finite() {
        -1.0
    } else {
        y[1]
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ShootingConfig {
    pub eta_max: f64,
    pub tol: f64,
    pub step: f64,
    pub max_iterations: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            eta_max: DEFAULT_ETA_MAX,
            tol: DEFAULT_SHOOTING_TOL,
            step: DEFAULT_SHOOTING_STEP,
            max_iterations: 200,
        }
    }
}

/// Bisects `f''(0)` in [`SHOOTING_BRACKET`] until `|f'(eta_max)| < tol`.
pub fn shoot_original_bvp(eta_max: f64, tol: f64) -> Result<OracleResult> {
    shoot_original_bvp_with(&ShootingConfig {
        eta_max,
        tol,
        ..ShootingConfig::default()
    })
}

pub fn shoot_original_bvp_with(config: &ShootingConfig) -> Result<OracleResult> {
    let ShootingConfig {
        eta_max,
        tol,
        step,
        max_iterations,
    } = *config;
    if !(eta_max >= 15.0) || !(tol > 0.0) || !(step > 0.0) {
        return Err(Error::Domain(format!(
            "need eta_max >= 15, tol > 0, step > 0; got {eta_max}, {tol}, {step}"
        )));
    }
    let (mut lo, mut hi) = SHOOTING_BRACKET;
    let (r_lo, r_hi) = (far_slope(lo, eta_max, step), far_slope(hi, eta_max, step));
    if r_lo * r_hi > 0.0 {
        return Err(Error::BracketFailure { lo, hi });
    }
    let mut residual = f64::INFINITY;
    for _ in 0..max_iterations {
        let mid = 0.5 * (lo + hi);
        residual = far_slope(mid, eta_max, step);
        if residual.abs() < tol {
            return Ok(OracleResult {
                samples: integrate_wall_profile(mid, eta_max, step),
                estimate: mid,
                method: OracleMethod::Shooting,
                step,
            });
        }
        if (residual > 0.0) == (r_hi > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
        if lo == mid && hi == mid {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        residual,
    })
}
