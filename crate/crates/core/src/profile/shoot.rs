//! Dormand-Prince 5(4) shooting for `α'' = -D α' + G_factor sin α cos α`.

use crate::error::{Error, Result};
use crate::geometry::{EllipsoidParams, Interval};
use crate::morphism::WindingNumbers;
use crate::profile::coeffs::{ode_coefficients, sin_cos_reduced};
use crate::profile::interp::quintic_hermite;
use crate::profile::Profile;

const MAX_STEPS: usize = 2_000_000;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth order weights minus embedded fourth order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Accepted steps of one shooting run, in integration order.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub s: Vec<f64>,
    pub alpha: Vec<f64>,
    pub alpha_prime: Vec<f64>,
    pub alpha_second: Vec<f64>,
    /// Why integration ended early, if it did.
    pub stopped: Option<Error>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn last(&self) -> Option<(f64, f64, f64)> {
        let n = self.len().checked_sub(1)?;
        Some((self.s[n], self.alpha[n], self.alpha_prime[n]))
    }

    fn push(&mut self, s: f64, y: [f64; 2], f: [f64; 2]) {
        self.s.push(s);
        self.alpha.push(y[0]);
        self.alpha_prime.push(y[1]);
        self.alpha_second.push(f[1]);
    }
}

struct Rhs<'a> {
    params: &'a EllipsoidParams,
    k: &'a WindingNumbers,
}

impl Rhs<'_> {
    fn eval(&self, s: f64, y: [f64; 2]) -> Result<[f64; 2]> {
        let c = ode_coefficients(self.params, self.k, s)?;
        let (sin_a, cos_a) = sin_cos_reduced(y[0]);
        Ok([y[1], -c.d * y[1] + c.g_factor * sin_a * cos_a])
    }
}

fn error_norm(err: [f64; 2], y0: [f64; 2], y1: [f64; 2], tol: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..2 {
        let scale = tol + tol * y0[i].abs().max(y1[i].abs());
        sum += (err[i] / scale).powi(2);
    }
    (0.5 * sum).sqrt()
}

/// Integrates from `s0` toward `target_s`, which is clamped to stay
/// `EPS_LOC` inside the branch of `s0`. Failures during integration end the
/// trajectory and are recorded in `stopped`.
pub fn shoot_trajectory(
    params: &EllipsoidParams,
    k: &WindingNumbers,
    s0: f64,
    alpha0: f64,
    alpha_prime0: f64,
    target_s: f64,
    step_tol: f64,
) -> Result<Trajectory> {
    let branch = Interval::containing(s0)?;
    if !(step_tol > 0.0 && step_tol.is_finite()) {
        return Err(Error::InvalidParams(format!("step tolerance must be positive, got {step_tol}")));
    }
    if !(alpha0.is_finite() && alpha_prime0.is_finite() && target_s.is_finite()) {
        return Err(Error::InvalidParams("initial data must be finite".into()));
    }
    let (lo, hi) = branch.interior();
    let target = target_s.clamp(lo, hi);
    let rhs = Rhs { params, k };
    let mut traj = Trajectory::default();
    let mut s = s0;
    let mut y = [alpha0, alpha_prime0];
    let mut f = rhs.eval(s, y)?;
    traj.push(s, y, f);
    if target == s0 {
        return Ok(traj);
    }
    let direction = (target - s0).signum();
    let span = (target - s0).abs();
    let mut h = direction * (1e-3 * span).min(1e-3);
    let mut steps = 0usize;

    while (target - s) * direction > 0.0 {
        steps += 1;
        if steps > MAX_STEPS || h.abs() < 16.0 * f64::EPSILON * s.abs() {
            traj.stopped = Some(Error::StepUnderflow { s, step: h.abs() });
            return Ok(traj);
        }
        let last = (target - (s + h)) * direction <= 0.0;
        if last {
            h = target - s;
        }
        let mut k_stages = [[0.0; 2]; 7];
        k_stages[0] = f;
        let mut failed = None;
        for stage in 1..7 {
            let mut ys = y;
            for (j, kj) in k_stages.iter().enumerate().take(stage) {
                ys[0] += h * A[stage][j] * kj[0];
                ys[1] += h * A[stage][j] * kj[1];
            }
            match rhs.eval(s + C[stage] * h, ys) {
                Ok(v) => k_stages[stage] = v,
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        if let Some(e) = failed {
            traj.stopped = Some(e);
            return Ok(traj);
        }
        // stage 6 is evaluated at the fifth order solution (FSAL)
        let mut y_new = y;
        let mut err = [0.0; 2];
        for j in 0..7 {
            for i in 0..2 {
                if j < 6 {
                    y_new[i] += h * A[6][j] * k_stages[j][i];
                }
                err[i] += h * E[j] * k_stages[j][i];
            }
        }
        let norm = error_norm(err, y, y_new, step_tol);
        if !norm.is_finite() || !y_new.iter().all(|v| v.is_finite()) {
            h *= 0.2;
            continue;
        }
        if norm > 1.0 {
            h *= (0.9 * norm.powf(-0.2)).clamp(0.2, 1.0);
            continue;
        }
        let s_new = if last { target } else { s + h };
        let f_new = if last {
            match rhs.eval(s_new, y_new) {
                Ok(v) => v,
                Err(e) => {
                    traj.stopped = Some(e);
                    return Ok(traj);
                }
            }
        } else {
            k_stages[6]
        };
        // the stored nodes are joined by quintic Hermite pieces; check that
        // the piece still solves the ODE at its midpoint
        let width = s_new - s;
        let [a_mid, d_mid, dd_mid] =
            quintic_hermite(width, [y[0], y[1], f[1]], [y_new[0], y_new[1], f_new[1]], 0.5);
        // rounding in the interpolant's second derivative grows like 1/width²
        let round_off = 64.0
            * f64::EPSILON
            * (a_mid.abs() / (width * width) + d_mid.abs() / width.abs() + dd_mid.abs());
        let mid_norm = match rhs.eval(s + 0.5 * width, [a_mid, d_mid]) {
            Ok(v) => (dd_mid - v[1]).abs() / (step_tol * (1.0 + v[1].abs()) + round_off),
            Err(_) => f64::INFINITY,
        };
        if mid_norm.is_nan() || mid_norm > 1.0 {
            let shrink = if mid_norm.is_finite() { 0.9 * mid_norm.powf(-0.25) } else { 0.2 };
            h *= shrink.clamp(0.2, 0.9);
            continue;
        }
        s = s_new;
        y = y_new;
        f = f_new;
        traj.push(s, y, f);
        let grow = 0.9 * norm.max(1e-10).powf(-0.2);
        let grow_mid = 0.9 * mid_norm.max(1e-10).powf(-0.25);
        h *= grow.min(grow_mid).clamp(0.2, 5.0);
    }
    Ok(traj)
}

fn into_profile(branch: Interval, s: Vec<f64>, a: Vec<f64>, d1: Vec<f64>, d2: Vec<f64>) -> Result<Profile> {
    Profile::grid(branch, s, a, Some(d1), Some(d2))
}

/// Shoots from `s0` to `target_s` and returns the solution as a grid profile.
pub fn shoot(
    params: &EllipsoidParams,
    k: &WindingNumbers,
    s0: f64,
    alpha0: f64,
    alpha_prime0: f64,
    target_s: f64,
    step_tol: f64,
) -> Result<Profile> {
    let branch = Interval::containing(s0)?;
    let mut t = shoot_trajectory(params, k, s0, alpha0, alpha_prime0, target_s, step_tol)?;
    if let Some(e) = t.stopped.take() {
        return Err(e);
    }
    if t.s.len() < 2 {
        return Err(Error::InvalidParams("target coincides with the start point".into()));
    }
    if t.s[0] > t.s[t.s.len() - 1] {
        t.s.reverse();
        t.alpha.reverse();
        t.alpha_prime.reverse();
        t.alpha_second.reverse();
    }
    into_profile(branch, t.s, t.alpha, t.alpha_prime, t.alpha_second)
}

/// Shoots from `s0` down to `lo_target` and up to `hi_target` and joins the
/// two halves into one grid profile.
#[allow(clippy::too_many_arguments)]
pub fn shoot_both(
    params: &EllipsoidParams,
    k: &WindingNumbers,
    s0: f64,
    alpha0: f64,
    alpha_prime0: f64,
    lo_target: f64,
    hi_target: f64,
    step_tol: f64,
) -> Result<Profile> {
    let branch = Interval::containing(s0)?;
    if !(lo_target < s0 && s0 < hi_target) {
        return Err(Error::InvalidParams(format!(
            "need lo_target < s0 < hi_target, got {lo_target}, {s0}, {hi_target}"
        )));
    }
    let mut down = shoot_trajectory(params, k, s0, alpha0, alpha_prime0, lo_target, step_tol)?;
    let mut up = shoot_trajectory(params, k, s0, alpha0, alpha_prime0, hi_target, step_tol)?;
    if let Some(e) = down.stopped.take().or(up.stopped.take()) {
        return Err(e);
    }
    let join = |mut a: Vec<f64>, b: Vec<f64>| {
        a.reverse();
        a.extend_from_slice(&b[1..]);
        a
    };
    into_profile(
        branch,
        join(down.s, up.s),
        join(down.alpha, up.alpha),
        join(down.alpha_prime, up.alpha_prime),
        join(down.alpha_second, up.alpha_second),
    )
}
