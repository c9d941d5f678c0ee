//! Run configuration assembled from defaults, an optional `key=value` file
//! and command line flags, in increasing priority.
//!
//! File keys are the long flag names without dashes in front (`tol-quad=1e-12`,
//! `branches=q5,b3`); `_` and `-` are interchangeable. `#` starts a comment.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hopfjoin::{EllipsoidParams, Interval, WindingNumbers};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const KEYS: [&str; 21] = [
    "a", "k", "c", "c-mode", "branches", "grid", "eps", "tol-quad", "tol-ode", "tol-id",
    "tol-harm", "tol-prime", "out", "analytic", "lattice", "ab", "kl", "profile", "gamma", "t",
    "samples",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Verify,
    Solve,
    Sweep,
    Q3,
    Fibers,
}

/// How the `c` list is matched with the branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CMode {
    /// Every branch runs every `c`.
    Shared,
    /// The i-th `c` belongs to the i-th branch.
    PerBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Quadrature tables behind the closed form.
    pub quad: f64,
    /// Step control of the shooter.
    pub ode: f64,
    /// Identity sweeps and variety membership.
    pub identity: f64,
    /// Harmonicity residual verdicts.
    pub harmonicity: f64,
    /// Prime integral verdicts and analytic agreement.
    pub prime: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad: 1e-12,
            ode: 1e-12,
            identity: 1e-12,
            harmonicity: 1e-7,
            prime: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOptions {
    /// Number of slope factors, spread evenly over `[0, 2]`.
    pub lattice: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Q3Options {
    pub ab: [f64; 2],
    pub kl: [i64; 2],
    pub profile: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberOptions {
    pub gamma: f64,
    pub t: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub a: [f64; 4],
    pub k: [i64; 4],
    pub c: Vec<f64>,
    pub c_mode: CMode,
    pub branches: Vec<Interval>,
    pub grid_n: usize,
    pub eps_interior: f64,
    pub tolerances: Tolerances,
    pub analytic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepOptions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q3: Option<Q3Options>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fibers: Option<FiberOptions>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn bad(key: &str, what: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {what}"))
}

fn parse_one<T: FromStr>(key: &str, text: &str) -> CliResult<T> {
    let text = text.trim();
    text.parse().map_err(|_| bad(key, format!("cannot parse '{text}'")))
}

fn parse_list<T: FromStr>(key: &str, text: &str) -> CliResult<Vec<T>> {
    text.split(',').map(|p| parse_one(key, p)).collect()
}

fn parse_array<T: FromStr, const N: usize>(key: &str, text: &str) -> CliResult<[T; N]> {
    let v: Vec<T> = parse_list(key, text)?;
    let n = v.len();
    v.try_into().map_err(|_| bad(key, format!("expected {N} comma separated values, got {n}")))
}

fn parse_bool(key: &str, text: &str) -> CliResult<bool> {
    match text.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(bad(key, format!("expected true or false, got '{other}'"))),
    }
}

fn parse_branches(text: &str) -> CliResult<Vec<Interval>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let b = Interval::ALL
            .into_iter()
            .find(|b| b.label().eq_ignore_ascii_case(part))
            .ok_or_else(|| bad("branches", format!("unknown branch '{part}' (use q5, b2, b3, b4)")))?;
        if out.contains(&b) {
            return Err(bad("branches", format!("'{part}' listed twice")));
        }
        out.push(b);
    }
    out.sort();
    Ok(out)
}

fn positive(key: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(bad(key, format!("must be positive and finite, got {x}")))
    }
}

/// Parses the text of a config file into normalized `key -> value` pairs.
pub fn parse_file_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim().to_ascii_lowercase().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("config line {}: unknown key '{key}'", i + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

/// Defaults, then the file at `file`, then `flags`.
pub fn load(mode: Mode, file: Option<&Path>, flags: Vec<(&'static str, String)>) -> CliResult<RunConfig> {
    let mut settings = match file {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_file_text(&text)?
        }
        None => BTreeMap::new(),
    };
    for (k, v) in flags {
        settings.insert(k.to_string(), v);
    }
    RunConfig::from_settings(mode, &settings)
}

impl RunConfig {
    pub fn from_settings(mode: Mode, settings: &BTreeMap<String, String>) -> CliResult<Self> {
        let get = |key: &str| settings.get(key).map(String::as_str);
        let a: [f64; 4] = get("a").map(|t| parse_array("a", t)).transpose()?.unwrap_or([1.0; 4]);
        EllipsoidParams::new(a).map_err(|e| bad("a", e))?;
        let k: [i64; 4] = get("k").map(|t| parse_array("k", t)).transpose()?.unwrap_or([1; 4]);
        WindingNumbers::new(k).map_err(|e| bad("k", e))?;

        let c: Vec<f64> = get("c").map(|t| parse_list("c", t)).transpose()?.unwrap_or(vec![1.0]);
        for &x in &c {
            positive("c", x)?;
        }
        let c_mode = match get("c-mode") {
            None | Some("shared") => CMode::Shared,
            Some("per-branch") => CMode::PerBranch,
            Some(other) => return Err(bad("c-mode", format!("expected shared or per-branch, got '{other}'"))),
        };
        let branches = get("branches").map(parse_branches).transpose()?.unwrap_or(Interval::ALL.to_vec());
        match c_mode {
            CMode::Shared => {
                let mut sorted = c.clone();
                sorted.sort_by(f64::total_cmp);
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(bad("c", "values must be distinct"));
                }
            }
            CMode::PerBranch if c.len() != branches.len() => {
                return Err(bad(
                    "c",
                    format!("per-branch c needs one value per branch ({} branches, {} values)", branches.len(), c.len()),
                ));
            }
            CMode::PerBranch => {}
        }

        let grid_n: usize = get("grid").map(|t| parse_one("grid", t)).transpose()?.unwrap_or(2048);
        if grid_n < 16 {
            return Err(bad("grid", format!("needs at least 16 points, got {grid_n}")));
        }
        let eps_interior: f64 = get("eps").map(|t| parse_one("eps", t)).transpose()?.unwrap_or(1e-3);
        if !(eps_interior > 0.0 && eps_interior < PI / 16.0) {
            return Err(bad("eps", format!("must lie in (0, pi/16), got {eps_interior}")));
        }

        let mut tolerances = Tolerances::default();
        for (key, slot) in [
            ("tol-quad", &mut tolerances.quad),
            ("tol-ode", &mut tolerances.ode),
            ("tol-id", &mut tolerances.identity),
            ("tol-harm", &mut tolerances.harmonicity),
            ("tol-prime", &mut tolerances.prime),
        ] {
            if let Some(t) = get(key) {
                *slot = positive(key, parse_one(key, t)?)?;
            }
        }
        let analytic = get("analytic").map(|t| parse_bool("analytic", t)).transpose()?.unwrap_or(false);

        let sweep = if mode == Mode::Sweep {
            let lattice: usize = get("lattice").map(|t| parse_one("lattice", t)).transpose()?.unwrap_or(9);
            if lattice < 2 {
                return Err(bad("lattice", format!("needs at least 2 cells, got {lattice}")));
            }
            Some(SweepOptions { lattice })
        } else {
            None
        };

        let q3 = if mode == Mode::Q3 {
            let ab: [f64; 2] = get("ab").map(|t| parse_array("ab", t)).transpose()?.unwrap_or([1.0, 1.0]);
            for x in ab {
                positive("ab", x)?;
            }
            let kl: [i64; 2] = get("kl").map(|t| parse_array("kl", t)).transpose()?.unwrap_or([1, 1]);
            let profile = get("profile").ok_or_else(|| bad("profile", "q3 needs a profile CSV"))?;
            Some(Q3Options { ab, kl, profile: PathBuf::from(profile) })
        } else {
            None
        };

        let fibers = if mode == Mode::Fibers {
            let gamma: f64 = get("gamma").map(|t| parse_one("gamma", t)).transpose()?.unwrap_or(0.0);
            let t: f64 = get("t").map(|x| parse_one("t", x)).transpose()?.unwrap_or(PI / 2.0);
            if !gamma.is_finite() || !t.is_finite() {
                return Err(bad("gamma/t", "target point must be finite"));
            }
            let samples: usize = get("samples").map(|x| parse_one("samples", x)).transpose()?.unwrap_or(8);
            if samples == 0 {
                return Err(bad("samples", "needs at least one sample per circle"));
            }
            Some(FiberOptions { gamma, t, samples })
        } else {
            None
        };

        Ok(RunConfig {
            mode,
            a,
            k,
            c,
            c_mode,
            branches,
            grid_n,
            eps_interior,
            tolerances,
            analytic,
            sweep,
            q3,
            fibers,
            out: get("out").map(PathBuf::from),
        })
    }

    pub fn params(&self) -> EllipsoidParams {
        EllipsoidParams::new(self.a).expect("axes validated on load")
    }

    pub fn winding(&self) -> WindingNumbers {
        WindingNumbers::new(self.k).expect("weights validated on load")
    }

    /// `(branch, c)` work items in report order.
    pub fn items(&self) -> Vec<(Interval, f64)> {
        match self.c_mode {
            CMode::Shared => self
                .branches
                .iter()
                .flat_map(|&b| self.c.iter().map(move |&c| (b, c)))
                .collect(),
            CMode::PerBranch => self.branches.iter().copied().zip(self.c.iter().copied()).collect(),
        }
    }

    /// The `grid_n` report abscissae on `branch`, `eps_interior` from each end.
    pub fn branch_grid(&self, branch: Interval) -> Vec<f64> {
        let (lo, hi) = branch.endpoints();
        crate::output::grid(lo + self.eps_interior, hi - self.eps_interior, self.grid_n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::from_settings(Mode::Verify, &BTreeMap::new()).unwrap();
        assert_eq!(cfg.a, [1.0; 4]);
        assert_eq!(cfg.branches, Interval::ALL.to_vec());
        assert_eq!(cfg.grid_n, 2048);
        assert_eq!(cfg.items().len(), 4);
        assert!(cfg.sweep.is_none() && cfg.q3.is_none() && cfg.fibers.is_none());
    }

    #[test]
    fn invariants_are_enforced() {
        for pairs in [
            vec![("grid", "15")],
            vec![("eps", "0")],
            vec![("eps", "0.2")],
            vec![("tol-ode", "-1")],
            vec![("a", "1,1,1")],
            vec![("a", "1,1,0,1")],
            vec![("k", "0,0,0,0")],
            vec![("c", "0.5,-1")],
            vec![("c", "1,1")],
            vec![("branches", "q5,q6")],
            vec![("c-mode", "per-branch"), ("c", "1,2")],
            vec![("analytic", "maybe")],
        ] {
            let r = RunConfig::from_settings(Mode::Solve, &settings(&pairs));
            assert!(matches!(r, Err(CliError::Config(_))), "{pairs:?}");
        }
    }

    #[test]
    fn per_branch_pairs_in_order() {
        let cfg = RunConfig::from_settings(
            Mode::Solve,
            &settings(&[("c-mode", "per-branch"), ("branches", "b3,q5"), ("c", "0.5,2")]),
        )
        .unwrap();
        assert_eq!(cfg.items(), vec![(Interval::Q5, 0.5), (Interval::B3, 2.0)]);
    }

    #[test]
    fn empty_branch_list() {
        let cfg = RunConfig::from_settings(Mode::Sweep, &settings(&[("branches", "")])).unwrap();
        assert!(cfg.items().is_empty());
    }

    #[test]
    fn file_text() {
        let map = parse_file_text("# run\na = 1,2,1,2\ntol_quad=1e-10  # tighter\n\nbranches=Q5\n").unwrap();
        assert_eq!(map["a"], "1,2,1,2");
        assert_eq!(map["tol-quad"], "1e-10");
        let cfg = RunConfig::from_settings(Mode::Verify, &map).unwrap();
        assert_eq!(cfg.branches, vec![Interval::Q5]);
        assert!(parse_file_text("colour=red").is_err());
        assert!(parse_file_text("a 1,1,1,1").is_err());
    }

    #[test]
    fn mode_sections() {
        let cfg = RunConfig::from_settings(Mode::Q3, &settings(&[("profile", "p.csv"), ("kl", "-1,2")])).unwrap();
        assert_eq!(cfg.q3.unwrap().kl, [-1, 2]);
        assert!(RunConfig::from_settings(Mode::Q3, &BTreeMap::new()).is_err());
        let cfg = RunConfig::from_settings(Mode::Fibers, &BTreeMap::new()).unwrap();
        assert_eq!(cfg.fibers.unwrap().t, PI / 2.0);
        assert!(RunConfig::from_settings(Mode::Sweep, &settings(&[("lattice", "1")])).is_err());
    }
}
