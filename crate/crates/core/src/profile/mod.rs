//! Profile functions `α(s)` on the four branches.
//!
//! The conformal first integral `α'/sin α = 4h/sin(4s)` separates, giving on
//! each branch
//!
//! ```text
//! α(s) = offset + 2 atan(σ c exp(I(s))),   I(s) = ∫_{base}^{s} 4h(u)/sin(4u) du
//! ```
//!
//! with `(offset, σ, base)` equal to `(0, +, π/8)`, `(2π, -, 3π/8)`,
//! `(2π, +, 5π/8)` and `(4π, -, 7π/8)`. `σ` matches the sign of `sin 4s`, which
//! makes `α` increase from `iπ` to `(i+1)π` across branch `i`.

mod certificate;
mod coeffs;
mod interp;
mod quadrature;
mod shoot;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EllipsoidParams, Interval};
use crate::hexfloat;

pub use certificate::{boundary_certificate, BoundaryCertificate, Probe, Side, DEFAULT_PROBES};
pub use coeffs::{
    coeff_d_general, coeff_d_simplified, coeff_g_general, coeff_g_simplified, g_factor_general,
    g_factor_simplified, harmonicity_residual, ode_coefficients, prime_integral_residual,
    prime_integral_residual_at, q3_bracket, q3_bracket_ratio_form, q3_residual, sin_cos_reduced,
    OdeCoefficients, POLE_GUARD,
};
pub use interp::{GridCurve, Interpolation};
pub use quadrature::{integrand, integrate, quadrature_i, QuadratureTable, DEFAULT_BUDGET, DEFAULT_TOL};
pub use shoot::{shoot, shoot_both, shoot_trajectory, Trajectory};

/// `exp` arguments beyond this saturate to the exact limits `0` or `∞`.
const EXP_SATURATION: f64 = 700.0;

/// `α` with its first two derivatives, plus `sin α` and `cos α`.
///
/// The closed forms compute `sin α` and `cos α` algebraically from
/// `x = c e^I`, which stays accurate where `α` is close to a multiple of `π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub alpha: f64,
    pub d1: f64,
    pub d2: f64,
    pub sin: f64,
    pub cos: f64,
}

#[derive(Debug, Clone)]
pub enum ProfileForm {
    /// Quadrature based closed form.
    ClosedForm { log_c: f64, table: Arc<QuadratureTable> },
    /// Explicit form `x = c |tan 2s|^A` when `a1 = a3`, `a2 = a4`.
    ConstantH { log_c: f64, amplitude: f64 },
    /// Tabulated values, e.g. from the shooter or a file.
    Grid(Arc<GridCurve>),
}

#[derive(Debug, Clone)]
pub struct Profile {
    interval: Interval,
    form: ProfileForm,
}

fn check_c(c: f64) -> Result<f64> {
    if c.is_finite() && c > 0.0 {
        Ok(c.ln())
    } else {
        Err(Error::InvalidParams(format!("c must be positive and finite, got {c}")))
    }
}

impl Profile {
    pub fn closed_form(params: &EllipsoidParams, interval: Interval, c: f64, tol: f64) -> Result<Self> {
        let table = QuadratureTable::new(params, interval, tol)?;
        Self::from_table(Arc::new(table), c)
    }

    /// Closed form sharing an existing table (one table serves every `c`).
    pub fn from_table(table: Arc<QuadratureTable>, c: f64) -> Result<Self> {
        let log_c = check_c(c)?;
        Ok(Self {
            interval: table.branch(),
            form: ProfileForm::ClosedForm { log_c, table },
        })
    }

    pub fn constant_h(params: &EllipsoidParams, interval: Interval, c: f64) -> Result<Self> {
        if !params.has_constant_h() {
            return Err(Error::InvalidParams(
                "the explicit form needs a1 = a3 and a2 = a4".into(),
            ));
        }
        let log_c = check_c(c)?;
        let [a1, a2, _, _] = params.axes();
        Ok(Self {
            interval,
            form: ProfileForm::ConstantH {
                log_c,
                amplitude: (a1 * a1 + a2 * a2).sqrt(),
            },
        })
    }

    /// Tabulated profile. Values must increase strictly and the nodes must
    /// lie inside `interval`.
    pub fn grid(
        interval: Interval,
        nodes: Vec<f64>,
        values: Vec<f64>,
        slopes: Option<Vec<f64>>,
        second: Option<Vec<f64>>,
    ) -> Result<Self> {
        let curve = GridCurve::new(nodes, values, slopes, second)?;
        let (lo, hi) = curve.domain();
        interval.check(lo)?;
        interval.check(hi)?;
        if let Some(index) = curve.values().windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotone { index: index + 1 });
        }
        Ok(Self {
            interval,
            form: ProfileForm::Grid(Arc::new(curve)),
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn form(&self) -> &ProfileForm {
        &self.form
    }

    pub fn offset(&self) -> f64 {
        self.interval.offset()
    }

    pub fn sign(&self) -> f64 {
        self.interval.sign()
    }

    pub fn c(&self) -> Option<f64> {
        match &self.form {
            ProfileForm::ClosedForm { log_c, .. } | ProfileForm::ConstantH { log_c, .. } => {
                Some(log_c.exp())
            }
            ProfileForm::Grid(_) => None,
        }
    }

    /// `(lo, hi)` of the `s` values where the profile can be evaluated.
    pub fn domain(&self) -> (f64, f64) {
        match &self.form {
            ProfileForm::Grid(g) => g.domain(),
            _ => self.interval.interior(),
        }
    }

    pub fn check(&self, s: f64) -> Result<()> {
        self.interval.check(s)?;
        if let ProfileForm::Grid(g) = &self.form {
            let (lo, hi) = g.domain();
            if !(s >= lo && s <= hi) {
                return Err(Error::OutOfInterval { s, lo, hi });
            }
        }
        Ok(())
    }

    pub fn alpha(&self, s: f64) -> Result<f64> {
        Ok(self.jet(s)?.alpha)
    }

    pub fn jet(&self, s: f64) -> Result<Jet> {
        self.check(s)?;
        match &self.form {
            ProfileForm::Grid(g) => {
                let [alpha, d1, d2] = g.eval(s)?;
                let (sin, cos) = sin_cos_reduced(alpha);
                Ok(Jet { alpha, d1, d2, sin, cos })
            }
            ProfileForm::ClosedForm { log_c, table } => {
                let params = table.params();
                let integral = table.value(s)?;
                let (sin4, cos4) = (4.0 * s).sin_cos();
                let h = params.h(s);
                let p = 4.0 * h / sin4;
                let dp = 4.0 * params.h_prime(s) / sin4 - 16.0 * h * cos4 / (sin4 * sin4);
                Ok(self.separated_jet(log_c + integral, p, dp))
            }
            ProfileForm::ConstantH { log_c, amplitude } => {
                let integral = amplitude * (2.0 * s).tan().abs().ln();
                let (sin4, cos4) = (4.0 * s).sin_cos();
                let p = 4.0 * amplitude / sin4;
                let dp = -16.0 * amplitude * cos4 / (sin4 * sin4);
                Ok(self.separated_jet(log_c + integral, p, dp))
            }
        }
    }

    /// Jet of `offset + 2 atan(σ e^u)` where `u' = p`, `u'' = dp`.
    fn separated_jet(&self, u: f64, p: f64, dp: f64) -> Jet {
        let offset = self.offset();
        let sigma = self.sign();
        if u < -EXP_SATURATION {
            return Jet { alpha: offset, d1: 0.0, d2: 0.0, sin: 0.0, cos: 1.0 };
        }
        if u > EXP_SATURATION {
            return Jet {
                alpha: offset + sigma * std::f64::consts::PI,
                d1: 0.0,
                d2: 0.0,
                sin: 0.0,
                cos: -1.0,
            };
        }
        let x = u.exp();
        let inv = (-u).exp();
        let psi = 2.0 * (sigma * x).atan();
        let sin = 2.0 * sigma / (x + inv);
        let cos = (inv - x) / (inv + x);
        let d1 = sin * p;
        let d2 = cos * d1 * p + sin * dp;
        Jet { alpha: offset + psi, d1, d2, sin, cos }
    }

    /// Limits of `α` at the two ends of its domain.
    pub fn range(&self) -> (f64, f64) {
        match &self.form {
            ProfileForm::Grid(g) => (g.values()[0], g.values()[g.values().len() - 1]),
            _ => self.interval.limits(),
        }
    }

    /// Solves `α(s) = t` by bisection; `α` is increasing.
    pub fn inverse(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        let (a_lo, a_hi) = (self.alpha(lo)?, self.alpha(hi)?);
        let (r_lo, r_hi) = self.range();
        if !(t > a_lo && t < a_hi) {
            return Err(Error::NoPreimage { t, lo: r_lo, hi: r_hi });
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if self.alpha(mid)? < t {
                a = mid;
            } else {
                b = mid;
            }
        }
        let (fa, fb) = (self.alpha(a)? - t, self.alpha(b)? - t);
        Ok(if fa.abs() <= fb.abs() { a } else { b })
    }

    pub fn to_file(&self) -> ProfileFile {
        let base = ProfileFile {
            branch: self.interval,
            form: String::new(),
            c: None,
            log_c_hex: None,
            base_s: None,
            offset: self.offset(),
            sign: self.sign(),
            params: None,
            tol: None,
            amplitude: None,
            nodes: None,
            values: None,
            slopes: None,
            second: None,
        };
        match &self.form {
            ProfileForm::ClosedForm { log_c, table } => ProfileFile {
                form: "closed_form".into(),
                c: Some(log_c.exp()),
                log_c_hex: Some(hexfloat::format(*log_c)),
                base_s: Some(table.base_s()),
                params: Some(*table.params()),
                tol: Some(table.tol()),
                ..base
            },
            ProfileForm::ConstantH { log_c, amplitude } => ProfileFile {
                form: "constant_h".into(),
                c: Some(log_c.exp()),
                log_c_hex: Some(hexfloat::format(*log_c)),
                base_s: Some(self.interval.base_s()),
                amplitude: Some(*amplitude),
                ..base
            },
            ProfileForm::Grid(g) => ProfileFile {
                form: "grid".into(),
                nodes: Some(hexfloat::format_slice(g.nodes())),
                values: Some(hexfloat::format_slice(g.values())),
                slopes: g.slopes().map(hexfloat::format_slice),
                second: g.second().map(hexfloat::format_slice),
                ..base
            },
        }
    }

    pub fn from_file(file: &ProfileFile) -> Result<Self> {
        let log_c = || -> Result<f64> {
            match (&file.log_c_hex, file.c) {
                (Some(hex), _) => hexfloat::parse(hex),
                (None, Some(c)) => check_c(c),
                (None, None) => Err(Error::Parse("profile file lacks c".into())),
            }
        };
        let mut profile = match file.form.as_str() {
            "closed_form" => {
                let params = file
                    .params
                    .ok_or_else(|| Error::Parse("closed form profile lacks params".into()))?;
                let table = QuadratureTable::new(&params, file.branch, file.tol.unwrap_or(DEFAULT_TOL))?;
                Self::from_table(Arc::new(table), 1.0)?
            }
            "constant_h" => {
                let amplitude = file
                    .amplitude
                    .ok_or_else(|| Error::Parse("constant_h profile lacks amplitude".into()))?;
                Self {
                    interval: file.branch,
                    form: ProfileForm::ConstantH { log_c: 0.0, amplitude },
                }
            }
            "grid" => {
                let parse = |v: &Option<Vec<String>>| v.as_ref().map(|x| hexfloat::parse_slice(x)).transpose();
                let nodes = parse(&file.nodes)?.ok_or_else(|| Error::Parse("grid lacks nodes".into()))?;
                let values = parse(&file.values)?.ok_or_else(|| Error::Parse("grid lacks values".into()))?;
                return Self::grid(file.branch, nodes, values, parse(&file.slopes)?, parse(&file.second)?);
            }
            other => return Err(Error::Parse(format!("unknown profile form '{other}'"))),
        };
        let lc = log_c()?;
        match &mut profile.form {
            ProfileForm::ClosedForm { log_c, .. } | ProfileForm::ConstantH { log_c, .. } => *log_c = lc,
            ProfileForm::Grid(_) => {}
        }
        Ok(profile)
    }
}

/// On-disk profile. Grid arrays are hex floats so they round-trip exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub branch: Interval,
    pub form: String,
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_c_hex: Option<String>,
    pub base_s: Option<f64>,
    pub offset: f64,
    pub sign: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<EllipsoidParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slopes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<Vec<String>>,
}

/// `α(s)` of the quadrature closed form on `branch`, by direct integration
/// from the branch base point.
pub fn closed_form_alpha(branch: Interval, c: f64, params: &EllipsoidParams, s: f64) -> Result<f64> {
    let log_c = check_c(c)?;
    let integral = quadrature_i(params, branch, branch.base_s(), s, DEFAULT_TOL)?;
    let u = log_c + integral;
    let sigma = branch.sign();
    let psi = if u < -EXP_SATURATION {
        0.0
    } else if u > EXP_SATURATION {
        sigma * std::f64::consts::PI
    } else {
        2.0 * (sigma * u.exp()).atan()
    };
    Ok(branch.offset() + psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    #[test]
    fn symmetric_solution_hits_equator() {
        let params = EllipsoidParams::new([2.0, 1.0, 0.5, 3.0]).unwrap();
        let p = Profile::closed_form(&params, Interval::Q5, 1.0, 1e-10).unwrap();
        assert_relative_eq!(p.alpha(FRAC_PI_8).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_relative_eq!(
            closed_form_alpha(Interval::Q5, 3.0, &params, FRAC_PI_8).unwrap(),
            2.0 * 3.0f64.atan(),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            closed_form_alpha(Interval::B2, 1.0, &params, 3.0 * FRAC_PI_8).unwrap(),
            1.5 * PI,
            epsilon = 1e-15
        );
    }

    #[test]
    fn closed_form_matches_explicit_constant_h() {
        let params = EllipsoidParams::new([1.0, 2.0, 1.0, 2.0]).unwrap();
        for branch in Interval::ALL {
            let q = Profile::closed_form(&params, branch, 0.7, 1e-10).unwrap();
            let e = Profile::constant_h(&params, branch, 0.7).unwrap();
            let (lo, hi) = branch.endpoints();
            for j in 1..50 {
                let s = lo + (hi - lo) * j as f64 / 50.0;
                assert!((q.alpha(s).unwrap() - e.alpha(s).unwrap()).abs() < 1e-9);
            }
        }
        let amp = 5.0f64.sqrt();
        let e = Profile::constant_h(&params, Interval::Q5, 0.7).unwrap();
        let s = 0.2;
        assert_relative_eq!(
            e.alpha(s).unwrap(),
            2.0 * (0.7 * (2.0 * s).tan().powf(amp)).atan(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn constant_h_needs_restriction() {
        let params = EllipsoidParams::new([1.0, 2.0, 1.5, 2.0]).unwrap();
        assert!(Profile::constant_h(&params, Interval::Q5, 1.0).is_err());
    }

    #[test]
    fn saturates_near_ends() {
        let params = EllipsoidParams::new([1.0; 4]).unwrap();
        let p = Profile::constant_h(&params, Interval::B4, 1.0).unwrap();
        let near = p.jet(PI - 2e-9).unwrap();
        assert!((near.alpha - 4.0 * PI).abs() < 1e-10);
        assert!(near.d1 >= 0.0);
        let far_c = Profile::constant_h(&params, Interval::Q5, 1e-300).unwrap();
        let j = far_c.jet(1e-8).unwrap();
        assert_eq!(j.alpha, 0.0);
        assert_eq!(j.d1, 0.0);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let params = EllipsoidParams::new([2.0, 1.0, 0.5, 3.0]).unwrap();
        for branch in Interval::ALL {
            let p = Profile::closed_form(&params, branch, 1.3, 1e-12).unwrap();
            let s = branch.base_s() + 0.1;
            let step = 1e-4;
            let j = p.jet(s).unwrap();
            let (am, ap) = (p.alpha(s - step).unwrap(), p.alpha(s + step).unwrap());
            assert_relative_eq!(j.d1, (ap - am) / (2.0 * step), max_relative = 1e-6);
            assert_relative_eq!(j.d2, (ap - 2.0 * j.alpha + am) / (step * step), max_relative = 1e-4);
            assert_relative_eq!(j.sin, j.alpha.sin(), epsilon = 1e-14);
            assert_relative_eq!(j.cos, j.alpha.cos(), epsilon = 1e-14);
        }
    }

    #[test]
    fn grid_must_increase_and_stay_inside() {
        assert!(matches!(
            Profile::grid(Interval::Q5, vec![0.1, 0.2, 0.3], vec![0.1, 0.3, 0.2], None, None),
            Err(Error::NonMonotone { index: 2 })
        ));
        assert!(Profile::grid(Interval::Q5, vec![0.1, 0.9], vec![0.1, 0.3], None, None).is_err());
        let g = Profile::grid(Interval::Q5, vec![0.1, 0.2, 0.3], vec![0.1, 0.2, 0.4], None, None).unwrap();
        assert!(matches!(g.alpha(0.35), Err(Error::OutOfInterval { .. })));
    }

    #[test]
    fn inverse_and_no_preimage() {
        let params = EllipsoidParams::new([1.0; 4]).unwrap();
        let p = Profile::closed_form(&params, Interval::Q5, 1.0, 1e-10).unwrap();
        assert_relative_eq!(p.inverse(FRAC_PI_2).unwrap(), FRAC_PI_8, epsilon = 1e-14);
        assert!(matches!(p.inverse(0.0), Err(Error::NoPreimage { .. })));
        assert!(matches!(p.inverse(PI), Err(Error::NoPreimage { .. })));
        let s = p.inverse(2.5).unwrap();
        assert!((p.alpha(s).unwrap() - 2.5).abs() < 1e-12);
        assert!(s < FRAC_PI_4);
    }

    #[test]
    fn file_round_trips() {
        let params = EllipsoidParams::new([2.0, 1.0, 0.5, 3.0]).unwrap();
        let p = Profile::closed_form(&params, Interval::B3, 0.37, 1e-10).unwrap();
        let text = serde_json::to_string(&p.to_file()).unwrap();
        let q = Profile::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(p.alpha(2.0).unwrap().to_bits(), q.alpha(2.0).unwrap().to_bits());

        let g = Profile::grid(
            Interval::Q5,
            vec![0.1, 0.2, 0.3],
            vec![0.1, 1.0 / 3.0, 0.4],
            Some(vec![1.0, 2.0, 0.1]),
            None,
        )
        .unwrap();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        let h = Profile::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(g.to_file(), h.to_file());
    }
}
