//! The equivariant maps `φ(w) = [sin α(s) e^{i Σ k_j θ_j}, cos α(s)]`.
//!
//! Pointwise quantities (differential, kernel, horizontal space, dilation,
//! energy density) depend only on the axes, the winding numbers and the
//! jet `(α, α')` at a single `s`, so they live on [`MapFamily`]. A
//! [`MapSpec`] pairs a family with a concrete profile.
//!
//! The differential is written in the orthonormal frame
//! `e_i = ∂θ_i / (a_i |r_i(s)|)`, `e_5 = ∂s / h(s)`, with `r = [sin s,
//! sin(s+π/4), cos s, cos(s+π/4)]`, and in the target coordinate basis
//! `(∂γ, ∂t)` with the round metric `sin²t dγ² + dt²`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, radial_factors, EllipsoidParams, Interval, JoinCoordinate};
use crate::profile::Profile;

/// Integer weights `k1..k4`; not all zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct WindingNumbers([i64; 4]);

impl WindingNumbers {
    pub fn new(k: [i64; 4]) -> Result<Self> {
        if k.iter().all(|&x| x == 0) {
            return Err(Error::InvalidParams(
                "winding numbers must not all vanish".to_string(),
            ));
        }
        Ok(Self(k))
    }

    pub fn get(&self) -> [i64; 4] {
        self.0
    }

    pub fn as_f64(&self) -> [f64; 4] {
        self.0.map(|x| x as f64)
    }

    pub fn phase(&self, theta: [f64; 4]) -> f64 {
        self.0
            .iter()
            .zip(theta)
            .map(|(&k, t)| k as f64 * t)
            .sum()
    }
}

impl TryFrom<[i64; 4]> for WindingNumbers {
    type Error = Error;

    fn try_from(k: [i64; 4]) -> Result<Self> {
        Self::new(k)
    }
}

impl From<WindingNumbers> for [i64; 4] {
    fn from(k: WindingNumbers) -> Self {
        k.0
    }
}

/// `a_i = |k_i|`: exact for integer valued axes, within 1e-12 otherwise.
pub fn is_morphism_regime(params: &EllipsoidParams, k: &WindingNumbers) -> bool {
    params.axes().iter().zip(k.get()).all(|(&a, k)| {
        let target = k.unsigned_abs() as f64;
        if a.fract() == 0.0 {
            a == target
        } else {
            (a - target).abs() <= 1e-12
        }
    })
}

/// A point `[sin t e^{iγ}, cos t]` of the target sphere.
///
/// `t` is kept unreduced (profiles on the outer branches reach `4π`);
/// [`fold`](Self::fold) gives the geometric colatitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    gamma: f64,
    t: f64,
}

impl SpherePoint {
    pub fn new(gamma: f64, t: f64) -> Result<Self> {
        if !gamma.is_finite() || !(-1e-12..=2.0 * TAU + 1e-12).contains(&t) {
            return Err(Error::InvalidParams(format!(
                "sphere point needs finite γ and t in [0, 4π], got γ={gamma}, t={t}"
            )));
        }
        Ok(Self {
            gamma: normalize_angle(gamma),
            t,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Same point with `t` reduced into `[0, π]`; `γ` moves by `π` when
    /// `sin t < 0`.
    pub fn fold(&self) -> SpherePoint {
        let t = self.t.rem_euclid(TAU);
        if t > PI {
            SpherePoint {
                gamma: normalize_angle(self.gamma + PI),
                t: TAU - t,
            }
        } else {
            SpherePoint { gamma: self.gamma, t }
        }
    }

    /// Embedding in `R^2 x R = R^3`.
    pub fn to_cartesian(&self) -> [f64; 3] {
        let (sin_t, cos_t) = self.t.sin_cos();
        let (sin_g, cos_g) = self.gamma.sin_cos();
        [sin_t * cos_g, sin_t * sin_g, cos_t]
    }
}

/// Components with respect to the orthonormal frame `e_1..e_5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector(pub [f64; 5]);

impl TangentVector {
    pub fn e5() -> Self {
        Self([0.0, 0.0, 0.0, 0.0, 1.0])
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, f: f64) -> Self {
        Self(self.0.map(|x| x * f))
    }

    fn sub_scaled(&self, other: &Self, f: f64) -> Self {
        let mut v = self.0;
        for (x, y) in v.iter_mut().zip(&other.0) {
            *x -= f * y;
        }
        Self(v)
    }
}

/// Image of a tangent vector, as `(∂γ, ∂t)` components.
pub type TargetVector = (f64, f64);

/// Round metric `sin²t dγ² + dt²` evaluated at colatitude `t`.
pub fn sphere_inner(t: f64, u: TargetVector, v: TargetVector) -> f64 {
    let sin_t = t.sin();
    sin_t * sin_t * u.0 * v.0 + u.1 * v.1
}

/// The family `φ_{k1..k4}` on `V^5(a1..a4)`, independent of the profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapFamily {
    params: EllipsoidParams,
    k: WindingNumbers,
    morphism_regime: bool,
}

impl MapFamily {
    pub fn new(params: EllipsoidParams, k: WindingNumbers) -> Self {
        Self {
            params,
            k,
            morphism_regime: is_morphism_regime(&params, &k),
        }
    }

    pub fn params(&self) -> &EllipsoidParams {
        &self.params
    }

    pub fn k(&self) -> &WindingNumbers {
        &self.k
    }

    pub fn morphism_regime(&self) -> bool {
        self.morphism_regime
    }

    fn require_regime(&self) -> Result<()> {
        if self.morphism_regime {
            Ok(())
        } else {
            Err(Error::NotMorphismRegime)
        }
    }

    /// `dγ(dφ(e_i)) = k_i / (a_i |r_i(s)|)` for `i = 1..4`.
    pub fn angular_row(&self, s: f64) -> Result<[f64; 4]> {
        Interval::containing(s)?;
        let r = radial_factors(s);
        let a = self.params.axes();
        let k = self.k.as_f64();
        Ok([0, 1, 2, 3].map(|i| k[i] / (a[i] * r[i].abs())))
    }

    /// `dφ(e_i)` for the five frame vectors. `alpha` does not enter the
    /// table itself; it only fixes the target metric.
    pub fn differential_frame(
        &self,
        s: f64,
        _alpha: f64,
        alpha_prime: f64,
    ) -> Result<[TargetVector; 5]> {
        let row = self.angular_row(s)?;
        let h = self.params.h(s);
        Ok([
            (row[0], 0.0),
            (row[1], 0.0),
            (row[2], 0.0),
            (row[3], 0.0),
            (0.0, alpha_prime / h),
        ])
    }

    pub fn apply_differential(
        &self,
        s: f64,
        alpha_prime: f64,
        v: &TangentVector,
    ) -> Result<TargetVector> {
        let table = self.differential_frame(s, 0.0, alpha_prime)?;
        Ok(table
            .iter()
            .zip(&v.0)
            .fold((0.0, 0.0), |acc, (d, vi)| (acc.0 + vi * d.0, acc.1 + vi * d.1)))
    }

    /// Orthonormal basis of `{v : v_5 = 0, Σ row_i v_i = 0}`.
    ///
    /// Built from the exchange vectors `row_p e_j - row_j e_p` against the
    /// largest entry `p`, then Gram-Schmidt.
    pub fn kernel_basis(&self, s: f64) -> Result<[TangentVector; 3]> {
        let row = self.angular_row(s)?;
        let pivot = (0..4)
            .max_by(|&i, &j| row[i].abs().total_cmp(&row[j].abs()))
            .unwrap_or(0);
        let mut basis: Vec<TangentVector> = Vec::with_capacity(3);
        for j in (0..4).filter(|&j| j != pivot) {
            let mut v = [0.0; 5];
            v[j] = row[pivot];
            v[pivot] = -row[j];
            let mut v = TangentVector(v);
            // two passes keep the basis orthonormal to rounding
            for _ in 0..2 {
                for b in &basis {
                    v = v.sub_scaled(b, v.dot(b));
                }
            }
            let n = v.norm();
            basis.push(v.scaled(1.0 / n));
        }
        Ok([basis[0], basis[1], basis[2]])
    }

    /// Orthonormal horizontal basis `(y*, e_5)` with `y = Σ row_i e_i` and
    /// `y* = y |sin 4s| / 4 = y / ‖y‖`.
    pub fn horizontal_basis(&self, s: f64) -> Result<(TangentVector, TangentVector)> {
        self.require_regime()?;
        let row = self.angular_row(s)?;
        let y = TangentVector([row[0], row[1], row[2], row[3], 0.0]);
        let sin4 = (4.0 * s).sin();
        debug_assert!(
            ((y.dot(&y) * sin4 * sin4 - 16.0) / 16.0).abs() < 1e-12,
            "horizontal norm identity violated at s = {s}"
        );
        Ok((y.scaled(1.0 / y.norm()), TangentVector::e5()))
    }

    /// `Λ = 16 sin²α / sin²(4s)`.
    pub fn dilation_squared(&self, s: f64, alpha: f64) -> Result<f64> {
        self.require_regime()?;
        Interval::containing(s)?;
        let ratio = alpha.sin() / (4.0 * s).sin();
        Ok(16.0 * ratio * ratio)
    }

    /// `‖dφ(y*)‖² - ‖dφ(e_5)‖²`; zero exactly where `φ` is horizontally
    /// conformal.
    pub fn conformality_residual(&self, s: f64, alpha: f64, alpha_prime: f64) -> Result<f64> {
        let lambda = self.dilation_squared(s, alpha)?;
        let vertical = alpha_prime / self.params.h(s);
        Ok(lambda - vertical * vertical)
    }

    /// Same difference through the general differential table, without the
    /// `a_i = |k_i|` collapse. Diagnostic only.
    pub fn general_conformality_residual(
        &self,
        s: f64,
        alpha: f64,
        alpha_prime: f64,
    ) -> Result<f64> {
        let row = self.angular_row(s)?;
        let sin_a = alpha.sin();
        let horizontal = sin_a * sin_a * row.iter().map(|x| x * x).sum::<f64>();
        let vertical = alpha_prime / self.params.h(s);
        Ok(horizontal - vertical * vertical)
    }

    /// `|dφ|² = Σ_i ‖dφ(e_i)‖²` in the round metric.
    pub fn energy_density(&self, s: f64, alpha: f64, alpha_prime: f64) -> Result<f64> {
        let table = self.differential_frame(s, alpha, alpha_prime)?;
        Ok(table.iter().map(|&d| sphere_inner(alpha, d, d)).sum())
    }
}

/// A map family together with its profile.
#[derive(Debug, Clone)]
pub struct MapSpec {
    family: MapFamily,
    profile: Profile,
}

impl MapSpec {
    pub fn new(params: EllipsoidParams, k: WindingNumbers, profile: Profile) -> Self {
        Self {
            family: MapFamily::new(params, k),
            profile,
        }
    }

    pub fn family(&self) -> &MapFamily {
        &self.family
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn morphism_regime(&self) -> bool {
        self.family.morphism_regime
    }

    pub fn evaluate(&self, w: &JoinCoordinate) -> Result<SpherePoint> {
        let t = self.profile.alpha(w.s())?;
        SpherePoint::new(self.family.k.phase(w.theta()), t)
    }
}
