//! `verify`: closed-form profiles in the morphism regime checked against the
//! residual, identity and boundary suites.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use hopfjoin::morphism::is_morphism_regime;
use hopfjoin::profile::{coeff_g_general, coeff_g_simplified, prime_integral_residual, DEFAULT_PROBES};
use hopfjoin::{
    boundary_certificate, coeff_d_general, coeff_d_simplified, harmonicity_residual,
    BoundaryCertificate, Interval, JoinCoordinate, MapFamily, Profile, QuadratureTable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{at, on_branch, CliError, CliResult};
use crate::output::{max_abs, Num, Series};

pub const SEED: u64 = 0x6a6f_696e;
pub const IDENTITY_SAMPLES: usize = 10_000;
pub const VARIETY_SAMPLES: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityMaxima {
    pub seed: u64,
    pub samples: usize,
    pub variety_samples: usize,
    /// `|D_general - D_simplified|`
    pub d_pair: Num,
    /// `|G_general - G_simplified|`
    pub g_pair: Num,
    /// `|‖y‖² sin²(4s) / 16 - 1|`
    pub horizontal_norm: Num,
    /// Variety and ellipsoid residuals over `max(1, Σ a_i²)`.
    pub variety: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantHCheck {
    pub amplitude: Num,
    pub alpha: Series,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub branch: Interval,
    pub c: Num,
    pub limits: [f64; 2],
    pub s: Series,
    pub alpha: Series,
    pub alpha_prime: Series,
    pub harmonicity: Series,
    pub prime_integral: Series,
    pub dilation_squared: Series,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_h: Option<ConstantHCheck>,
    pub certificate: BoundaryCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub d_identity: bool,
    pub g_identity: bool,
    pub horizontal_norm: bool,
    pub variety: bool,
    pub harmonicity: bool,
    pub prime_integral: bool,
    pub boundary: bool,
    pub window: bool,
    pub monotone: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_h: Option<bool>,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.d_identity
            && self.g_identity
            && self.horizontal_norm
            && self.variety
            && self.harmonicity
            && self.prime_integral
            && self.boundary
            && self.window
            && self.monotone
            && self.constant_h.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub identities: IdentityMaxima,
    pub branches: Vec<BranchReport>,
    /// Worst values over all branches, for reading at a glance.
    pub maxima: BTreeMap<&'static str, f64>,
    pub verdicts: Verdicts,
    pub passed: bool,
}

/// Verdicts from the report arrays and the configured tolerances alone.
pub fn verdicts(config: &RunConfig, identities: &IdentityMaxima, branches: &[BranchReport]) -> Verdicts {
    let tol = &config.tolerances;
    let below = |x: f64, t: f64| x < t;
    let constant_h = branches.iter().any(|b| b.constant_h.is_some()).then(|| {
        branches.iter().all(|b| match &b.constant_h {
            Some(ch) => below(max_abs(b.alpha.values.iter().zip(&ch.alpha.values).map(|(x, y)| x - y)), tol.prime),
            None => true,
        })
    });
    Verdicts {
        d_identity: below(identities.d_pair.value, tol.identity),
        g_identity: below(identities.g_pair.value, tol.identity),
        horizontal_norm: below(identities.horizontal_norm.value, tol.identity),
        variety: below(identities.variety.value, tol.identity),
        harmonicity: branches.iter().all(|b| below(b.harmonicity.max_abs(), tol.harmonicity)),
        prime_integral: branches.iter().all(|b| below(b.prime_integral.max_abs(), tol.prime)),
        boundary: branches.iter().all(|b| b.certificate.certified),
        window: branches
            .iter()
            .all(|b| b.alpha.values.iter().all(|&a| a >= b.limits[0] && a <= b.limits[1])),
        monotone: branches.iter().all(|b| b.alpha_prime.values.iter().all(|&d| d > 0.0)),
        constant_h,
    }
}

pub fn identity_maxima(config: &RunConfig) -> CliResult<IdentityMaxima> {
    let params = config.params();
    let k = config.winding();
    let family = MapFamily::new(params, k);
    let eps = config.eps_interior;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut d, mut g, mut y) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..IDENTITY_SAMPLES {
        let branch = Interval::ALL[rng.random_range(0..4)];
        let (lo, hi) = branch.endpoints();
        let s = rng.random_range(lo + eps..hi - eps);
        let alpha = rng.random_range(0.0..4.0 * PI);
        let err = at(branch, s);
        let dd = coeff_d_general(&params, s).and_then(|x| Ok(x - coeff_d_simplified(&params, s)?));
        let gg = coeff_g_general(&params, &k, s, alpha)
            .and_then(|x| Ok(x - coeff_g_simplified(&params, &k, s, alpha)?));
        let row = family.angular_row(s);
        let (dd, gg, row) = match (dd, gg, row) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Err(err(e)),
        };
        d = max_abs([d, dd]);
        g = max_abs([g, gg]);
        let sin4 = (4.0 * s).sin();
        let norm2: f64 = row.iter().map(|r| r * r).sum();
        y = max_abs([y, norm2 * sin4 * sin4 / 16.0 - 1.0]);
    }
    let scale = params.axes().iter().map(|a| a * a).sum::<f64>().max(1.0);
    let mut v = 0.0f64;
    for _ in 0..VARIETY_SAMPLES {
        let theta = [0; 4].map(|_| rng.random_range(0.0..2.0 * PI));
        let s = rng.random_range(0.0..=PI);
        let p = params.embed(&JoinCoordinate::new(theta, s).map_err(CliError::from)?);
        let [r1, r2, r3] = params.variety_residuals(&p);
        v = max_abs([v, r1 / scale, r2 / scale, r3 / scale, params.ellipsoid_residual(&p) / scale]);
    }
    Ok(IdentityMaxima {
        seed: SEED,
        samples: IDENTITY_SAMPLES,
        variety_samples: VARIETY_SAMPLES,
        d_pair: d.into(),
        g_pair: g.into(),
        horizontal_norm: y.into(),
        variety: v.into(),
    })
}

fn branch_report(config: &RunConfig, table: Arc<QuadratureTable>, c: f64) -> CliResult<BranchReport> {
    let params = config.params();
    let k = config.winding();
    let family = MapFamily::new(params, k);
    let branch = table.branch();
    let profile = Profile::from_table(table, c).map_err(on_branch(branch))?;
    let s = config.branch_grid(branch);
    let n = s.len();
    let (mut alpha, mut d1, mut harm, mut prime, mut dil) =
        (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for &x in &s {
        let jet = profile.jet(x).map_err(at(branch, x))?;
        alpha.push(jet.alpha);
        d1.push(jet.d1);
        harm.push(harmonicity_residual(&params, &k, &profile, x).map_err(at(branch, x))?);
        prime.push(prime_integral_residual(&params, &profile, x).map_err(at(branch, x))?);
        dil.push(family.dilation_squared(x, jet.alpha).map_err(at(branch, x))?);
    }
    let constant_h = if params.has_constant_h() {
        let analytic = Profile::constant_h(&params, branch, c).map_err(on_branch(branch))?;
        let values = s
            .iter()
            .map(|&x| analytic.alpha(x).map_err(at(branch, x)))
            .collect::<CliResult<Vec<f64>>>()?;
        let [a1, a2, _, _] = params.axes();
        Some(ConstantHCheck {
            amplitude: (a1 * a1 + a2 * a2).sqrt().into(),
            alpha: values.into(),
        })
    } else {
        None
    };
    let (l0, l1) = branch.limits();
    Ok(BranchReport {
        branch,
        c: c.into(),
        limits: [l0, l1],
        s: s.into(),
        alpha: alpha.into(),
        alpha_prime: d1.into(),
        harmonicity: harm.into(),
        prime_integral: prime.into(),
        dilation_squared: dil.into(),
        constant_h,
        certificate: boundary_certificate(&profile, &DEFAULT_PROBES),
    })
}

/// One quadrature table per requested branch, built concurrently.
pub fn tables(config: &RunConfig) -> CliResult<BTreeMap<Interval, Arc<QuadratureTable>>> {
    let params = config.params();
    config
        .branches
        .par_iter()
        .map(|&b| {
            QuadratureTable::new(&params, b, config.tolerances.quad)
                .map(|t| (b, Arc::new(t)))
                .map_err(on_branch(b))
        })
        .collect()
}

pub fn cmd_verify(config: &RunConfig) -> CliResult<VerificationReport> {
    if !is_morphism_regime(&config.params(), &config.winding()) {
        return Err(CliError::Config(format!(
            "verify needs a_i = |k_i| for every i, the hypothesis under which the maps are harmonic morphisms (a = {:?}, k = {:?})",
            config.a, config.k
        )));
    }
    let tables = tables(config)?;
    let (identities, branches) = rayon::join(
        || identity_maxima(config),
        || {
            config
                .items()
                .into_par_iter()
                .map(|(b, c)| branch_report(config, tables[&b].clone(), c))
                .collect::<CliResult<Vec<_>>>()
        },
    );
    let (identities, branches) = (identities?, branches?);
    let verdicts = verdicts(config, &identities, &branches);
    let mut maxima = BTreeMap::new();
    maxima.insert("harmonicity", max_abs(branches.iter().map(|b| b.harmonicity.max_abs())));
    maxima.insert("prime_integral", max_abs(branches.iter().map(|b| b.prime_integral.max_abs())));
    Ok(VerificationReport {
        config: config.clone(),
        identities,
        branches,
        maxima,
        passed: verdicts.all(),
        verdicts,
    })
}
