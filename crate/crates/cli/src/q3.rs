//! `q3`: the harmonicity residual of the three-dimensional construction along
//! a tabulated profile.

use hopfjoin::profile::{q3_bracket, q3_bracket_ratio_form};
use hopfjoin::q3_residual;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{max_abs, read_csv, Num, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Q3Verdicts {
    pub harmonic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_identity: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Q3Report {
    pub config: RunConfig,
    /// `column` when the CSV carries `alpha_second`, else `finite_difference`.
    pub alpha_second_source: &'static str,
    pub s: Series,
    pub residual: Series,
    pub max_residual: Num,
    /// `a/b = |l/k|`, under which the bracket has a one-weight form.
    pub ratio_regime: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_identity_max: Option<Num>,
    pub verdicts: Q3Verdicts,
    pub passed: bool,
}

/// Derivative of tabulated `f` by three-point differences on a non-uniform
/// grid, one-sided at the ends. Second order throughout.
pub fn differentiate(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (j, which) = match i {
            0 => (1, 0),
            _ if i + 1 == n => (n - 2, 2),
            _ => (i, 1),
        };
        let (h1, h2) = (x[j] - x[j - 1], x[j + 1] - x[j]);
        let (f0, f1, f2) = (f[j - 1], f[j], f[j + 1]);
        let d = match which {
            0 => -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f0 + (h1 + h2) / (h1 * h2) * f1 - h1 / (h2 * (h1 + h2)) * f2,
            1 => -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2,
            _ => h2 / (h1 * (h1 + h2)) * f0 - (h1 + h2) / (h1 * h2) * f1 + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * f2,
        };
        out.push(d);
    }
    out
}

pub fn cmd_q3(config: &RunConfig) -> CliResult<Q3Report> {
    let opts = config.q3.as_ref().ok_or_else(|| CliError::Config("q3 options missing".into()))?;
    let table = read_csv(&opts.profile)?;
    let path = opts.profile.display();
    let column = |name: &str| {
        table
            .column(name)
            .ok_or_else(|| CliError::Config(format!("{path}: missing column '{name}'")))
    };
    let s = column("s")?;
    let alpha = column("alpha")?;
    let alpha_prime = column("alpha_prime")?;
    let (second, source) = match table.column("alpha_second") {
        Some(v) => (v, "column"),
        None => {
            if s.len() < 3 {
                return Err(CliError::Config(format!("{path}: need at least 3 rows to difference alpha_prime")));
            }
            if let Some(i) = s.windows(2).position(|w| w[1] <= w[0]) {
                return Err(CliError::Config(format!("{path}: s must increase strictly (row {})", i + 3)));
            }
            (differentiate(&s, &alpha_prime), "finite_difference")
        }
    };
    let [a, b] = opts.ab;
    let [k, l] = opts.kl;
    let mut residual = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        let r = q3_residual(a, b, k, l, alpha[i], alpha_prime[i], second[i], s[i])
            .map_err(|e| CliError::from(e).to_string())
            .map_err(|m| CliError::Numeric(format!("{path}: row {}: {m}", i + 2)))?;
        residual.push(r);
    }

    let ratio_regime = k != 0 && (a * k.unsigned_abs() as f64 - b * l.unsigned_abs() as f64).abs() <= 1e-12 * a.max(b);
    let bracket_identity_max = if ratio_regime {
        let mut worst = 0.0f64;
        for &x in &s {
            let direct = q3_bracket(a, b, k, l, x).map_err(CliError::from)?;
            let ratio = q3_bracket_ratio_form(a, b, k, x).map_err(CliError::from)?;
            worst = max_abs([worst, (direct - ratio) / direct]);
        }
        Some(worst)
    } else {
        None
    };
    let max_residual = max_abs(residual.iter().copied());
    let verdicts = Q3Verdicts {
        harmonic: max_residual < config.tolerances.harmonicity,
        bracket_identity: bracket_identity_max.map(|m| m < config.tolerances.identity),
    };
    Ok(Q3Report {
        config: config.clone(),
        alpha_second_source: source,
        s: s.into(),
        residual: residual.into(),
        max_residual: max_residual.into(),
        ratio_regime,
        bracket_identity_max: bracket_identity_max.map(Num::from),
        passed: verdicts.harmonic && verdicts.bracket_identity.unwrap_or(true),
        verdicts,
    })
}
