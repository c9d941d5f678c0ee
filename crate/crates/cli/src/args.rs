use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::Mode;

#[derive(Debug, Parser)]
#[command(
    name = "hopfjoin",
    version,
    about = "Numerical verification of equivariant harmonic morphisms from ellipsoidal joins to the 2-sphere"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check closed-form profiles against every residual, identity and boundary suite
    Verify(CommonArgs),
    /// Write profile JSON and CSV files for each branch and c
    Solve(CommonArgs),
    /// Shoot over a lattice of initial slopes at each branch base point
    Sweep(SweepArgs),
    /// Evaluate the Q^3 harmonicity residual along a profile CSV
    Q3(Q3Args),
    /// Sample the fiber over a target point of the sphere
    Fibers(FiberArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// key=value file; flags override its entries
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Semi-axes a1..a4
    #[arg(long = "a", value_name = "r,r,r,r")]
    pub a: Option<String>,
    /// Winding numbers k1..k4
    #[arg(long = "k", value_name = "i,i,i,i", allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Integration constants of the closed form
    #[arg(long = "c", value_name = "r[,r...]")]
    pub c: Option<String>,
    /// Subset of q5,b2,b3,b4 (an empty string selects none)
    #[arg(long, value_name = "LIST")]
    pub branches: Option<String>,
    /// Points per branch grid (at least 16)
    #[arg(long, value_name = "N")]
    pub grid: Option<String>,
    /// Distance of the grids from the singular loci
    #[arg(long, value_name = "E")]
    pub eps: Option<String>,
    /// Quadrature tolerance of the closed form
    #[arg(long = "tol-quad", value_name = "TOL")]
    pub tol_quad: Option<String>,
    /// Step tolerance of the shooting integrator
    #[arg(long = "tol-ode", value_name = "TOL")]
    pub tol_ode: Option<String>,
    /// Threshold for identity, variety and fiber verdicts
    #[arg(long = "tol-id", value_name = "TOL")]
    pub tol_id: Option<String>,
    /// Threshold for harmonicity residual verdicts
    #[arg(long = "tol-harm", value_name = "TOL")]
    pub tol_harm: Option<String>,
    /// Threshold for prime integral verdicts
    #[arg(long = "tol-prime", value_name = "TOL")]
    pub tol_prime: Option<String>,
    /// Report file (verify, sweep, q3) or output directory (solve, fibers)
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
    /// Use the explicit constant-h solution instead of quadrature
    #[arg(long)]
    pub analytic: bool,
    /// Every branch runs every c (default)
    #[arg(long, conflicts_with = "per_branch_c")]
    pub shared_c: bool,
    /// The i-th c belongs to the i-th listed branch
    #[arg(long)]
    pub per_branch_c: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of slope factors spread over [0, 2] times the prime integral slope
    #[arg(long, value_name = "N")]
    pub lattice: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Q3Args {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Semi-axes a, b of Q^3
    #[arg(long, value_name = "r,r")]
    pub ab: Option<String>,
    /// Winding numbers k, l
    #[arg(long, value_name = "i,i", allow_hyphen_values = true)]
    pub kl: Option<String>,
    /// CSV with columns s, alpha, alpha_prime and optionally alpha_second
    #[arg(long, value_name = "PATH")]
    pub profile: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct FiberArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Longitude of the target point
    #[arg(long, value_name = "ANGLE", allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Colatitude of the target point, unreduced (outer branches reach 4 pi)
    #[arg(long, value_name = "ANGLE", allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Samples per free torus circle
    #[arg(long, value_name = "N")]
    pub samples: Option<String>,
}

impl CommonArgs {
    pub fn settings(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let pairs = [
            ("a", &self.a),
            ("k", &self.k),
            ("c", &self.c),
            ("branches", &self.branches),
            ("grid", &self.grid),
            ("eps", &self.eps),
            ("tol-quad", &self.tol_quad),
            ("tol-ode", &self.tol_ode),
            ("tol-id", &self.tol_id),
            ("tol-harm", &self.tol_harm),
            ("tol-prime", &self.tol_prime),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                out.push((key, v.clone()));
            }
        }
        if self.analytic {
            out.push(("analytic", "true".into()));
        }
        if self.shared_c {
            out.push(("c-mode", "shared".into()));
        }
        if self.per_branch_c {
            out.push(("c-mode", "per-branch".into()));
        }
        out
    }
}

fn push(out: &mut Vec<(&'static str, String)>, key: &'static str, value: &Option<String>) {
    if let Some(v) = value {
        out.push((key, v.clone()));
    }
}

impl Command {
    /// Mode, config file and flag overrides of the invocation.
    pub fn parts(&self) -> (Mode, Option<PathBuf>, Vec<(&'static str, String)>) {
        match self {
            Command::Verify(c) => (Mode::Verify, c.config.clone(), c.settings()),
            Command::Solve(c) => (Mode::Solve, c.config.clone(), c.settings()),
            Command::Sweep(a) => {
                let mut s = a.common.settings();
                push(&mut s, "lattice", &a.lattice);
                (Mode::Sweep, a.common.config.clone(), s)
            }
            Command::Q3(a) => {
                let mut s = a.common.settings();
                push(&mut s, "ab", &a.ab);
                push(&mut s, "kl", &a.kl);
                push(&mut s, "profile", &a.profile);
                (Mode::Q3, a.common.config.clone(), s)
            }
            Command::Fibers(a) => {
                let mut s = a.common.settings();
                push(&mut s, "gamma", &a.gamma);
                push(&mut s, "t", &a.t);
                push(&mut s, "samples", &a.samples);
                (Mode::Fibers, a.common.config.clone(), s)
            }
        }
    }
}
