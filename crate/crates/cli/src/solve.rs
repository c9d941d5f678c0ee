//! `solve`: profile JSON and `s, alpha, alpha_prime` CSV for every
//! `(branch, c)`.

use std::path::{Path, PathBuf};

use hopfjoin::{Interval, Profile};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{at, on_branch, CliError, CliResult};
use crate::output::{to_json, write_csv, write_text};
use crate::verify::tables;

#[derive(Debug, Clone, PartialEq)]
pub struct SolvedProfile {
    pub branch: Interval,
    pub c: f64,
    pub json: PathBuf,
    pub csv: PathBuf,
    /// `α' > 0` at every written node.
    pub monotone: bool,
}

pub fn file_stem(branch: Interval, c: f64) -> String {
    format!("profile_{}_c{c:?}", branch.label())
}

/// The grid with its node nearest `base` moved onto `base`, or `base` added
/// when no node is within a few ulps, so that `α(base)` is always tabulated.
pub fn with_base(mut grid: Vec<f64>, base: f64) -> Vec<f64> {
    let nearest = grid
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - base).abs().total_cmp(&(b.1 - base).abs()))
        .map(|(i, _)| i);
    match nearest {
        Some(i) if (grid[i] - base).abs() <= 4.0 * f64::EPSILON * base => grid[i] = base,
        _ => {
            let at = grid.partition_point(|&x| x < base);
            grid.insert(at, base);
        }
    }
    grid
}

pub fn cmd_solve(config: &RunConfig) -> CliResult<Vec<SolvedProfile>> {
    let params = config.params();
    if config.analytic && !params.has_constant_h() {
        return Err(CliError::Config(format!(
            "--analytic needs a1 = a3 and a2 = a4 (got a = {:?})",
            config.a
        )));
    }
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let tables = if config.analytic { Default::default() } else { tables(config)? };
    config
        .items()
        .into_par_iter()
        .map(|(branch, c)| {
            let profile = if config.analytic {
                Profile::constant_h(&params, branch, c)
            } else {
                Profile::from_table(tables[&branch].clone(), c)
            }
            .map_err(on_branch(branch))?;
            write_profile(config, &dir, &profile, c)
        })
        .collect()
}

fn write_profile(config: &RunConfig, dir: &Path, profile: &Profile, c: f64) -> CliResult<SolvedProfile> {
    let branch = profile.interval();
    let mut rows = Vec::with_capacity(config.grid_n + 1);
    for s in with_base(config.branch_grid(branch), branch.base_s()) {
        let jet = profile.jet(s).map_err(at(branch, s))?;
        rows.push(vec![s, jet.alpha, jet.d1]);
    }
    let stem = file_stem(branch, c);
    let json = dir.join(format!("{stem}.json"));
    let csv = dir.join(format!("{stem}.csv"));
    write_text(&json, &to_json(&profile.to_file()))?;
    write_csv(&csv, &["s", "alpha", "alpha_prime"], &rows)?;
    Ok(SolvedProfile {
        branch,
        c,
        json,
        csv,
        monotone: rows.iter().all(|r| r[2] > 0.0),
    })
}
