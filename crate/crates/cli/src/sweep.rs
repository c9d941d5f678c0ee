//! `sweep`: shooting from each branch base point over a lattice of initial
//! slopes, for arbitrary axes and weights.
//!
//! Cell `i` of `n` starts at `α(base)` of the closed form with slope
//! `2i/(n-1)` times the prime integral slope `4h sin α / sin 4s`, so odd `n`
//! contains the prime integral slope itself. A cell is called conformal when
//! the prime integral residual stays below `tol-prime` on the middle half of
//! the branch, where neither side of the relation is dominated by the loci.

use std::f64::consts::{FRAC_PI_8, PI};

use hopfjoin::morphism::is_morphism_regime;
use hopfjoin::profile::{prime_integral_residual_at, shoot_trajectory, Trajectory};
use hopfjoin::{Interval, Profile};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{at, CliResult};
use crate::output::{max_abs, Num};
use crate::verify::tables;

/// Sup-norm distance to the closed form below which a cell reproduces it.
pub const CLOSED_FORM_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Leg {
    pub target_s: f64,
    pub reached_s: f64,
    pub alpha_end: f64,
    pub alpha_prime_end: f64,
    pub steps: usize,
    /// `round(alpha_end / π)`.
    pub nearest_limit: i64,
    pub stopped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub branch: Interval,
    pub c: f64,
    pub factor: f64,
    pub alpha0: Num,
    pub slope: Num,
    pub lower: Leg,
    pub upper: Leg,
    /// Both legs completed and end nearest the branch's own limits.
    pub approaches_limits: bool,
    pub prime_residual_mid: f64,
    pub conformal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproduces_closed_form: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub config: RunConfig,
    pub morphism_regime: bool,
    pub cells: Vec<SweepCell>,
    pub conformal_cells: usize,
}

fn leg(t: &Trajectory, target_s: f64) -> Leg {
    let (s, a, d) = t.last().unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    Leg {
        target_s,
        reached_s: s,
        alpha_end: a,
        alpha_prime_end: d,
        steps: t.len().saturating_sub(1),
        nearest_limit: if a.is_finite() { (a / PI).round() as i64 } else { i64::MIN },
        stopped: t.stopped.as_ref().map(ToString::to_string),
    }
}

fn failed_leg(target_s: f64, e: hopfjoin::Error) -> (Trajectory, Leg) {
    let t = Trajectory::default();
    let mut l = leg(&t, target_s);
    l.stopped = Some(e.to_string());
    (t, l)
}

fn run_cell(config: &RunConfig, closed: Option<&Profile>, branch: Interval, c: f64, factor: f64) -> CliResult<SweepCell> {
    let params = config.params();
    let k = config.winding();
    let base = branch.base_s();
    let alpha0 = branch.offset() + 2.0 * (branch.sign() * c).atan();
    let slope = factor * 4.0 * params.h(base) * alpha0.sin() / (4.0 * base).sin();
    let (lo, hi) = branch.endpoints();
    let eps = config.eps_interior;
    let tol = config.tolerances.ode;
    let shoot = |target: f64| match shoot_trajectory(&params, &k, base, alpha0, slope, target, tol) {
        Ok(t) => {
            let l = leg(&t, target);
            (t, l)
        }
        Err(e) => failed_leg(target, e),
    };
    let (down, lower) = shoot(lo + eps);
    let (up, upper) = shoot(hi - eps);

    let nodes = || {
        down.s
            .iter()
            .zip(&down.alpha)
            .zip(&down.alpha_prime)
            .chain(up.s.iter().zip(&up.alpha).zip(&up.alpha_prime))
            .map(|((&s, &a), &d)| (s, a, d))
    };
    let prime_residual_mid = max_abs(
        nodes()
            .filter(|(s, _, _)| (s - base).abs() <= FRAC_PI_8 / 2.0)
            .map(|(s, a, d)| prime_integral_residual_at(&params, s, a, d).unwrap_or(f64::NAN)),
    );
    let closed_form_deviation = match closed {
        Some(p) => {
            let mut worst = 0.0f64;
            for (s, a, _) in nodes() {
                worst = max_abs([worst, a - p.alpha(s).map_err(at(branch, s))?]);
            }
            Some(worst)
        }
        None => None,
    };
    let (l0, l1) = branch.limits();
    let ends_at = |l: &Leg, limit: f64| l.stopped.is_none() && l.nearest_limit as f64 * PI == limit;
    Ok(SweepCell {
        branch,
        c,
        factor,
        alpha0: alpha0.into(),
        slope: slope.into(),
        approaches_limits: ends_at(&lower, l0) && ends_at(&upper, l1),
        lower,
        upper,
        prime_residual_mid,
        conformal: prime_residual_mid < config.tolerances.prime,
        closed_form_deviation,
        reproduces_closed_form: closed_form_deviation.map(|d| d < CLOSED_FORM_AGREEMENT),
    })
}

pub fn cmd_sweep(config: &RunConfig) -> CliResult<SweepReport> {
    let lattice = config.sweep.as_ref().map_or(9, |s| s.lattice);
    let regime = is_morphism_regime(&config.params(), &config.winding());
    let tables = if regime { tables(config)? } else { Default::default() };
    let mut work = Vec::new();
    for (branch, c) in config.items() {
        for i in 0..lattice {
            work.push((branch, c, 2.0 * i as f64 / (lattice - 1) as f64));
        }
    }
    let cells = work
        .into_par_iter()
        .map(|(branch, c, factor)| {
            let closed = match tables.get(&branch) {
                Some(t) => Some(Profile::from_table(t.clone(), c).map_err(crate::error::on_branch(branch))?),
                None => None,
            };
            run_cell(config, closed.as_ref(), branch, c, factor)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SweepReport {
        config: config.clone(),
        morphism_regime: regime,
        conformal_cells: cells.iter().filter(|c| c.conformal).count(),
        cells,
    })
}
