//! `fibers`: point samples of the fiber over `(γ, t)`.
//!
//! The fiber sits at the single `s` with `α(s) = t` and is the 3-torus
//! `Σ k_i θ_i ≡ γ (mod 2π)` of angles. With `p` the first index of a nonzero
//! weight, the other three angles run over `n` equispaced values each and
//! `θ_p` takes its `|k_p|` solutions, giving `n³ |k_p|` points.

use std::f64::consts::TAU;

use hopfjoin::{Interval, JoinCoordinate, MapSpec, Profile};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{at, on_branch, CliError, CliResult};
use crate::output::{max_abs, write_csv, Num};
use crate::verify::tables;

/// Map-back tolerance on `γ` and `t`.
pub const MAP_BACK_TOL: f64 = 1e-9;

pub const CSV_HEADER: [&str; 8] = ["re_z1", "im_z1", "re_z2", "im_z2", "re_z3", "im_z3", "re_z4", "im_z4"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberVerdicts {
    pub variety: bool,
    pub maps_back: bool,
    /// Every `|z_i|` is positive and constant over the samples.
    pub torus: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberReport {
    pub branch: Interval,
    pub c: f64,
    pub s: Num,
    pub pivot: usize,
    pub points: usize,
    pub csv: String,
    pub max_variety: f64,
    pub max_gamma_error: f64,
    pub max_t_error: f64,
    pub moduli: [f64; 4],
    pub moduli_spread: f64,
    pub verdicts: FiberVerdicts,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FibersReport {
    pub config: RunConfig,
    pub fibers: Vec<FiberReport>,
    /// Requested branches whose range does not contain `t`.
    pub skipped: Vec<Interval>,
    pub passed: bool,
}

fn angle_gap(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Angles of the fiber torus, `n³ |k_p|` of them.
pub fn torus_samples(k: [i64; 4], gamma: f64, n: usize) -> (usize, Vec<[f64; 4]>) {
    let pivot = k.iter().position(|&x| x != 0).expect("weights are not all zero");
    let free: Vec<usize> = (0..4).filter(|&i| i != pivot).collect();
    let kp = k[pivot];
    let mut out = Vec::with_capacity(n * n * n * kp.unsigned_abs() as usize);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let mut theta = [0.0; 4];
                for (slot, idx) in free.iter().zip([i, j, l]) {
                    theta[*slot] = TAU * idx as f64 / n as f64;
                }
                let rest: f64 = free.iter().map(|&f| k[f] as f64 * theta[f]).sum();
                for m in 0..kp.unsigned_abs() {
                    let mut t = theta;
                    t[pivot] = (gamma - rest + TAU * m as f64) / kp as f64;
                    out.push(t);
                }
            }
        }
    }
    (pivot, out)
}

fn sample_fiber(config: &RunConfig, profile: Profile, c: f64) -> CliResult<FiberReport> {
    let opts = config.fibers.as_ref().expect("fiber options present in fibers mode");
    let params = config.params();
    let branch = profile.interval();
    let s = profile.inverse(opts.t).map_err(on_branch(branch))?;
    let spec = MapSpec::new(params, config.winding(), profile);
    let (pivot, angles) = torus_samples(config.k, opts.gamma, opts.samples);
    let scale = params.axes().iter().map(|a| a * a).sum::<f64>().max(1.0);
    let mut rows = Vec::with_capacity(angles.len());
    let (mut variety, mut gamma_err, mut t_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut lo = [f64::INFINITY; 4];
    let mut hi = [0.0f64; 4];
    for theta in angles {
        let w = JoinCoordinate::new(theta, s).map_err(at(branch, s))?;
        let p = params.embed(&w);
        let [r1, r2, r3] = params.variety_residuals(&p);
        variety = max_abs([variety, r1 / scale, r2 / scale, r3 / scale, params.ellipsoid_residual(&p) / scale]);
        let image = spec.evaluate(&w).map_err(at(branch, s))?;
        gamma_err = max_abs([gamma_err, angle_gap(image.gamma(), opts.gamma)]);
        t_err = max_abs([t_err, image.t() - opts.t]);
        for i in 0..4 {
            let m = p.modulus_squared(i).sqrt();
            lo[i] = lo[i].min(m);
            hi[i] = hi[i].max(m);
        }
        rows.push(p.0.to_vec());
    }
    let spread = max_abs((0..4).map(|i| hi[i] - lo[i]));
    let csv = config
        .out
        .clone()
        .unwrap_or_else(|| ".".into())
        .join(format!("fiber_{}_c{c:?}.csv", branch.label()));
    write_csv(&csv, &CSV_HEADER, &rows)?;
    let tol = config.tolerances.identity;
    Ok(FiberReport {
        branch,
        c,
        s: s.into(),
        pivot,
        points: rows.len(),
        csv: csv.display().to_string(),
        max_variety: variety,
        max_gamma_error: gamma_err,
        max_t_error: t_err,
        moduli: hi,
        moduli_spread: spread,
        verdicts: FiberVerdicts {
            variety: variety < tol,
            maps_back: gamma_err <= MAP_BACK_TOL && t_err <= MAP_BACK_TOL,
            torus: lo.iter().all(|&m| m > 0.0) && spread <= tol * scale.sqrt(),
        },
    })
}

pub fn cmd_fibers(config: &RunConfig) -> CliResult<FibersReport> {
    let opts = config.fibers.as_ref().ok_or_else(|| CliError::Config("fiber options missing".into()))?;
    let tables = tables(config)?;
    let mut wanted = Vec::new();
    let mut skipped = Vec::new();
    for (branch, c) in config.items() {
        let profile = Profile::from_table(tables[&branch].clone(), c).map_err(on_branch(branch))?;
        let (lo, hi) = profile.range();
        if opts.t > lo && opts.t < hi {
            wanted.push((profile, c));
        } else if !skipped.contains(&branch) {
            skipped.push(branch);
        }
    }
    if wanted.is_empty() && !config.items().is_empty() {
        let ranges: Vec<String> = config
            .branches
            .iter()
            .map(|b| {
                let (lo, hi) = b.limits();
                format!("{} ({lo}, {hi})", b.label())
            })
            .collect();
        return Err(CliError::Numeric(format!(
            "no preimage: t = {} is outside every requested profile range: {}",
            opts.t,
            ranges.join(", ")
        )));
    }
    let fibers = wanted
        .into_par_iter()
        .map(|(profile, c)| sample_fiber(config, profile, c))
        .collect::<CliResult<Vec<_>>>()?;
    let passed = fibers
        .iter()
        .all(|f| f.verdicts.variety && f.verdicts.maps_back && f.verdicts.torus);
    Ok(FibersReport {
        config: config.clone(),
        fibers,
        skipped,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_samples_satisfy_the_phase_relation() {
        let k = [0, -2, 3, 1];
        let (pivot, samples) = torus_samples(k, 0.7, 3);
        assert_eq!(pivot, 1);
        assert_eq!(samples.len(), 27 * 2);
        for t in samples {
            let phase: f64 = k.iter().zip(t).map(|(&k, t)| k as f64 * t).sum();
            assert!(angle_gap(phase, 0.7) < 1e-12);
        }
    }

    #[test]
    fn angle_gap_wraps() {
        assert!((angle_gap(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert_eq!(angle_gap(1.0, 1.0), 0.0);
    }
}
