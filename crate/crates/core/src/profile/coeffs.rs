//! Coefficients of the reduced harmonicity equation
//! `α'' + D(s) α' - G(s, α) = 0` and the residuals built on it.

use std::f64::consts::FRAC_PI_2;

use crate::ddouble::{self, Dd, FRAC_1_SQRT_2};
use crate::error::{Error, Result};
use crate::geometry::{EllipsoidParams, Interval, EPS_LOC};
use crate::morphism::{is_morphism_regime, WindingNumbers};
use crate::profile::Profile;

/// Guard on `|sin α|` below which the first integral is not evaluated.
pub const POLE_GUARD: f64 = 1e-12;

/// `(sin x, cos x)` after reducing `x` by the nearest multiple of the
/// double `π/2`, so both vanish exactly at those multiples.
pub fn sin_cos_reduced(x: f64) -> (f64, f64) {
    let n = (x / FRAC_PI_2).round();
    let r = (-n).mul_add(FRAC_PI_2, x);
    let (s, c) = r.sin_cos();
    match (n.rem_euclid(4.0)) as u8 {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

/// `D` and the factor of `G` multiplying `sin α cos α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeCoefficients {
    pub d: f64,
    pub g_factor: f64,
}

/// `[sin s, sin(s+π/4), cos s, cos(s+π/4)]` in double-double.
fn radial_dd(s: f64) -> [Dd; 4] {
    let (sin_s, cos_s) = ddouble::sin_cos(s);
    [
        sin_s,
        (sin_s + cos_s) * FRAC_1_SQRT_2,
        cos_s,
        (cos_s - sin_s) * FRAC_1_SQRT_2,
    ]
}

fn h_squared_dd(params: &EllipsoidParams, r: &[Dd; 4]) -> Dd {
    let a = params.axes();
    Dd::square_of(a[0]) * r[2].sqr()
        + Dd::square_of(a[1]) * r[3].sqr()
        + Dd::square_of(a[2]) * r[0].sqr()
        + Dd::square_of(a[3]) * r[1].sqr()
}

/// `h'/h = (h²)' / (2h²)`.
fn log_h_prime_dd(params: &EllipsoidParams, r: &[Dd; 4]) -> Dd {
    let a = params.axes();
    let sin2 = (r[0] * r[2]).scale(2.0);
    let cos2 = r[2].sqr() - r[0].sqr();
    let dh2 = (Dd::square_of(a[2]) - Dd::square_of(a[0])) * sin2
        + (Dd::square_of(a[3]) - Dd::square_of(a[1])) * cos2;
    dh2 / h_squared_dd(params, r).scale(2.0)
}

/// `cot s + cot(s+π/4) - tan s - tan(s+π/4) - h'/h`.
pub fn coeff_d_general(params: &EllipsoidParams, s: f64) -> Result<f64> {
    Interval::containing(s)?;
    let r = radial_dd(s);
    let trig = r[2] / r[0] + r[3] / r[1] - r[0] / r[2] - r[1] / r[3];
    Ok((trig - log_h_prime_dd(params, &r)).to_f64())
}

/// `4 cot(4s) - h'/h`.
pub fn coeff_d_simplified(params: &EllipsoidParams, s: f64) -> Result<f64> {
    Interval::containing(s)?;
    let (sin4, cos4) = ddouble::sin_cos(4.0 * s);
    let r = radial_dd(s);
    Ok(((cos4 / sin4).scale(4.0) - log_h_prime_dd(params, &r)).to_f64())
}

/// `h² Σ k_i² / (a_i² r_i²)`, valid for any axes and weights.
pub fn g_factor_general(params: &EllipsoidParams, k: &WindingNumbers, s: f64) -> Result<f64> {
    Interval::containing(s)?;
    let r = radial_dd(s);
    let a = params.axes();
    let k = k.as_f64();
    let mut bracket = Dd::from_f64(0.0);
    for i in 0..4 {
        bracket = bracket + Dd::square_of(k[i]) / (Dd::square_of(a[i]) * r[i].sqr());
    }
    Ok((h_squared_dd(params, &r) * bracket).to_f64())
}

/// `16 h² / sin²(4s)`, the collapsed factor under `a_i = |k_i|`.
pub fn g_factor_simplified(params: &EllipsoidParams, k: &WindingNumbers, s: f64) -> Result<f64> {
    if !is_morphism_regime(params, k) {
        return Err(Error::NotMorphismRegime);
    }
    Interval::containing(s)?;
    let (sin4, _) = ddouble::sin_cos(4.0 * s);
    let r = radial_dd(s);
    Ok((h_squared_dd(params, &r).scale(16.0) / sin4.sqr()).to_f64())
}

pub fn coeff_g_general(
    params: &EllipsoidParams,
    k: &WindingNumbers,
    s: f64,
    alpha: f64,
) -> Result<f64> {
    let (sin_a, cos_a) = sin_cos_reduced(alpha);
    Ok(g_factor_general(params, k, s)? * sin_a * cos_a)
}

pub fn coeff_g_simplified(
    params: &EllipsoidParams,
    k: &WindingNumbers,
    s: f64,
    alpha: f64,
) -> Result<f64> {
    let (sin_a, cos_a) = sin_cos_reduced(alpha);
    Ok(g_factor_simplified(params, k, s)? * sin_a * cos_a)
}

/// General coefficients, used by the shooter for arbitrary axes and weights.
pub fn ode_coefficients(
    params: &EllipsoidParams,
    k: &WindingNumbers,
    s: f64,
) -> Result<OdeCoefficients> {
    Ok(OdeCoefficients {
        d: coeff_d_simplified(params, s)?,
        g_factor: g_factor_general(params, k, s)?,
    })
}

/// `α'' + D α' - G` along `profile`.
///
/// Uses the collapsed `G` when `a_i = |k_i|` and the general one otherwise.
pub fn harmonicity_residual(
    params: &EllipsoidParams,
    k: &WindingNumbers,
    profile: &Profile,
    s: f64,
) -> Result<f64> {
    let jet = profile.jet(s)?;
    let d = coeff_d_simplified(params, s)?;
    let g_factor = if is_morphism_regime(params, k) {
        g_factor_simplified(params, k, s)?
    } else {
        g_factor_general(params, k, s)?
    };
    Ok(jet.d2 + d * jet.d1 - g_factor * jet.sin * jet.cos)
}

/// `α'/sin α - 4h/sin(4s)` along `profile`.
pub fn prime_integral_residual(params: &EllipsoidParams, profile: &Profile, s: f64) -> Result<f64> {
    let jet = profile.jet(s)?;
    if jet.sin.abs() < POLE_GUARD {
        return Err(Error::PoleValue { s });
    }
    Ok(jet.d1 / jet.sin - 4.0 * params.h(s) / (4.0 * s).sin())
}

/// Pointwise form of [`prime_integral_residual`] for a raw jet.
pub fn prime_integral_residual_at(
    params: &EllipsoidParams,
    s: f64,
    alpha: f64,
    alpha_prime: f64,
) -> Result<f64> {
    Interval::containing(s)?;
    let sin_a = alpha.sin();
    if sin_a.abs() < POLE_GUARD {
        return Err(Error::PoleValue { s });
    }
    Ok(alpha_prime / sin_a - 4.0 * params.h(s) / (4.0 * s).sin())
}

fn check_q3(s: f64) -> Result<()> {
    if !(s > -EPS_LOC && s < FRAC_PI_2 + EPS_LOC) {
        return Err(Error::OutOfInterval {
            s,
            lo: 0.0,
            hi: FRAC_PI_2,
        });
    }
    if s <= EPS_LOC || s >= FRAC_PI_2 - EPS_LOC {
        return Err(Error::SingularLocus { s });
    }
    Ok(())
}

/// `k²/(a² sin²s) + l²/(b² cos²s)` for the three-dimensional ellipsoid.
pub fn q3_bracket(a: f64, b: f64, k: i64, l: i64, s: f64) -> Result<f64> {
    check_q3(s)?;
    let (sin_s, cos_s) = s.sin_cos();
    let (k, l) = (k as f64, l as f64);
    Ok(k * k / (a * a * sin_s * sin_s) + l * l / (b * b * cos_s * cos_s))
}

/// The same bracket rewritten under `a/b = |l/k|`:
/// `(k²/a²) (cos²s + (a/b)⁴ sin²s) / (sin²s cos²s)`.
pub fn q3_bracket_ratio_form(a: f64, b: f64, k: i64, s: f64) -> Result<f64> {
    check_q3(s)?;
    let (sin_s, cos_s) = s.sin_cos();
    let k = k as f64;
    let ratio4 = (a / b).powi(4);
    let (s2, c2) = (sin_s * sin_s, cos_s * cos_s);
    Ok(k * k / (a * a) * (c2 + ratio4 * s2) / (s2 * c2))
}

/// Harmonicity residual of the Hopf construction on `Q^3(a, b)`:
/// `α'' + (cot s - tan s) α' - (h'/h) α' - h² bracket sin α cos α`
/// with `h² = a² cos²s + b² sin²s`.
#[allow(clippy::too_many_arguments)]
pub fn q3_residual(
    a: f64,
    b: f64,
    k: i64,
    l: i64,
    alpha: f64,
    alpha_prime: f64,
    alpha_second: f64,
    s: f64,
) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParams(format!(
            "semi-axes must be positive, got a={a}, b={b}"
        )));
    }
    let bracket = q3_bracket(a, b, k, l, s)?;
    let (sin_s, cos_s) = s.sin_cos();
    let h2 = a * a * cos_s * cos_s + b * b * sin_s * sin_s;
    let h_log_prime = (b * b - a * a) * sin_s * cos_s / h2;
    let (sin_a, cos_a) = sin_cos_reduced(alpha);
    Ok(alpha_second + (cos_s / sin_s - sin_s / cos_s) * alpha_prime
        - h_log_prime * alpha_prime
        - h2 * bracket * sin_a * cos_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_8, PI, SQRT_2};

    fn unit() -> (EllipsoidParams, WindingNumbers) {
        (
            EllipsoidParams::new([1.0; 4]).unwrap(),
            WindingNumbers::new([1; 4]).unwrap(),
        )
    }

    #[test]
    fn d_values() {
        let (p, _) = unit();
        assert!(coeff_d_general(&p, FRAC_PI_8).unwrap().abs() < 1e-14);
        let q = EllipsoidParams::new([2.0, 1.0, 1.0, 1.0]).unwrap();
        let expected = -q.h_prime(FRAC_PI_8) / q.h(FRAC_PI_8);
        assert_relative_eq!(coeff_d_simplified(&q, FRAC_PI_8).unwrap(), expected, epsilon = 1e-15);
        let s = 0.3;
        assert_relative_eq!(
            coeff_d_simplified(&p, s).unwrap(),
            4.0 / (4.0 * s).tan(),
            epsilon = 1e-14
        );
        assert!(coeff_d_general(&p, 1e-6).unwrap() > 1e5);
        assert!(coeff_d_general(&p, 0.0).is_err());
    }

    #[test]
    fn g_values() {
        let (p, k) = unit();
        assert_relative_eq!(coeff_g_general(&p, &k, FRAC_PI_8, PI / 4.0).unwrap(), 16.0, epsilon = 1e-12);
        assert_relative_eq!(coeff_g_simplified(&p, &k, FRAC_PI_8, PI / 4.0).unwrap(), 16.0, epsilon = 1e-12);
        assert_relative_eq!(
            coeff_g_simplified(&p, &k, PI / 16.0, PI / 4.0).unwrap(),
            32.0,
            epsilon = 1e-12
        );
        assert_eq!(coeff_g_general(&p, &k, 0.3, 0.0).unwrap(), 0.0);
        assert!(coeff_g_general(&p, &k, 0.3, PI / 2.0).unwrap().abs() < 1e-13);
        let k2 = WindingNumbers::new([2, 1, 1, 1]).unwrap();
        assert_eq!(coeff_g_simplified(&p, &k2, 0.3, 1.0), Err(Error::NotMorphismRegime));
    }

    #[test]
    fn ad_hoc_linear_profile() {
        // α(s) = s at s = π/8: α'' = 0, D = 0, G = 32 sin(π/8) cos(π/8)
        let (p, k) = unit();
        let s = FRAC_PI_8;
        let d = coeff_d_simplified(&p, s).unwrap();
        let g = coeff_g_simplified(&p, &k, s, s).unwrap();
        assert_relative_eq!(0.0 + d * 1.0 - g, -8.0 * SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn prime_integral_at_equator() {
        let q = EllipsoidParams::new([2.0, 1.0, 0.5, 1.5]).unwrap();
        for s in [0.2, 1.0, 2.0, 3.0] {
            let ap = 4.0 * q.h(s) / (4.0 * s).sin();
            assert!(prime_integral_residual_at(&q, s, PI / 2.0, ap).unwrap().abs() < 1e-12);
        }
        assert!(matches!(
            prime_integral_residual_at(&q, 0.2, 0.0, 1.0),
            Err(Error::PoleValue { .. })
        ));
    }

    #[test]
    fn q3_examples() {
        for s in [0.1, 0.6, 1.2] {
            assert_eq!(q3_residual(1.3, 0.4, 2, 3, PI / 2.0, 0.0, 0.0, s).unwrap(), 0.0);
        }
        let r = q3_residual(1.0, 1.0, 1, 1, PI / 2.0, 2.0, 0.0, PI / 4.0).unwrap();
        assert!(r.abs() < 1e-14);
        assert!(q3_residual(1.0, 1.0, 1, 1, 0.1, 0.0, 0.0, 0.0).is_err());
        assert!(q3_residual(1.0, 1.0, 1, 1, 0.1, 0.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn q3_ratio_form() {
        let (k, l, b) = (3, 2, 0.8);
        let a = b * (l as f64 / k as f64).abs();
        for s in [0.05, 0.4, 1.1, 1.5] {
            assert_relative_eq!(
                q3_bracket(a, b, k, l, s).unwrap(),
                q3_bracket_ratio_form(a, b, k, s).unwrap(),
                max_relative = 1e-12
            );
        }
    }
}
