//! The join manifolds `Q^5 ⊂ V^5`, their induced metric and ambient embedding.
//!
//! A point is written `(θ1, θ2, θ3, θ4, s)` and embeds into `C^4` as
//!
//! ```text
//! [a1 sin s e^{iθ1}, a2 sin(s+π/4) e^{iθ2}, a3 cos s e^{iθ3}, a4 cos(s+π/4) e^{iθ4}]
//! ```
//!
//! The four moduli factors vanish at `s ∈ {0, π/4, π/2, 3π/4, π}`, where one of
//! the angle circles collapses. Everything that needs a non-degenerate metric
//! rejects those loci.

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance from a singular locus below which `s` is treated as singular.
pub const EPS_LOC: f64 = 1e-9;

/// The four positive semi-axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct EllipsoidParams {
    a: [f64; 4],
}

impl TryFrom<[f64; 4]> for EllipsoidParams {
    type Error = Error;

    fn try_from(a: [f64; 4]) -> Result<Self> {
        Self::new(a)
    }
}

impl From<EllipsoidParams> for [f64; 4] {
    fn from(p: EllipsoidParams) -> Self {
        p.a
    }
}

/// `[sin s, sin(s+π/4), cos s, cos(s+π/4)]`, the moduli of the four
/// coordinates before scaling by the semi-axes.
pub fn radial_factors(s: f64) -> [f64; 4] {
    let (sin_s, cos_s) = s.sin_cos();
    let (sin_q, cos_q) = (s + FRAC_PI_4).sin_cos();
    [sin_s, sin_q, cos_s, cos_q]
}

impl EllipsoidParams {
    pub fn new(a: [f64; 4]) -> Result<Self> {
        if a.iter().all(|&x| x.is_finite() && x > 0.0) {
            Ok(Self { a })
        } else {
            Err(Error::InvalidParams(format!(
                "semi-axes must be finite and strictly positive, got {a:?}"
            )))
        }
    }

    pub fn axes(&self) -> [f64; 4] {
        self.a
    }

    /// `max(1, Σ a_i^2)`, used to make tolerances scale free.
    pub fn scale(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().max(1.0)
    }

    /// True when `a1 = a3` and `a2 = a4`, where `h` is constant.
    pub fn has_constant_h(&self) -> bool {
        self.a[0] == self.a[2] && self.a[1] == self.a[3]
    }

    pub fn embed(&self, w: &JoinCoordinate) -> AmbientPoint {
        let r = radial_factors(w.s);
        let mut xs = [0.0; 8];
        for i in 0..4 {
            let modulus = self.a[i] * r[i];
            let (sin_t, cos_t) = w.theta[i].sin_cos();
            xs[2 * i] = modulus * cos_t;
            xs[2 * i + 1] = modulus * sin_t;
        }
        AmbientPoint(xs)
    }

    /// Speed of the `s` coordinate line; strictly positive for every `s`.
    pub fn h(&self, s: f64) -> f64 {
        self.h_squared(s).sqrt()
    }

    pub fn h_squared(&self, s: f64) -> f64 {
        let [a1, a2, a3, a4] = self.a;
        let [sin_s, sin_q, cos_s, cos_q] = radial_factors(s);
        a1 * a1 * cos_s * cos_s
            + a2 * a2 * cos_q * cos_q
            + a3 * a3 * sin_s * sin_s
            + a4 * a4 * sin_q * sin_q
    }

    /// Analytic derivative of [`h`](Self::h).
    ///
    /// `d(h^2)/ds = (a3^2 - a1^2) sin 2s + (a4^2 - a2^2) cos 2s`.
    pub fn h_prime(&self, s: f64) -> f64 {
        let [a1, a2, a3, a4] = self.a;
        let (sin2, cos2) = (2.0 * s).sin_cos();
        let dh2 = (a3 * a3 - a1 * a1) * sin2 + (a4 * a4 - a2 * a2) * cos2;
        dh2 / (2.0 * self.h(s))
    }

    /// Diagonal of the induced metric in coordinates `(θ1..θ4, s)`.
    pub fn metric_diagonal(&self, s: f64) -> Result<[f64; 5]> {
        Interval::containing(s)?;
        let r = radial_factors(s);
        let mut g = [0.0; 5];
        for i in 0..4 {
            let x = self.a[i] * r[i];
            g[i] = x * x;
        }
        g[4] = self.h_squared(s);
        Ok(g)
    }

    /// Factors turning the coordinate vectors into the orthonormal frame
    /// `e_1..e_5`.
    pub fn frame_scalings(&self, s: f64) -> Result<[f64; 5]> {
        Interval::containing(s)?;
        let r = radial_factors(s);
        let mut f = [0.0; 5];
        for i in 0..4 {
            f[i] = 1.0 / (self.a[i] * r[i]).abs();
        }
        f[4] = 1.0 / self.h(s);
        Ok(f)
    }

    /// Residuals `(i), (ii), (iii)` of the three defining equations of the
    /// algebraic completion `V*^5`.
    pub fn variety_residuals(&self, p: &AmbientPoint) -> [f64; 3] {
        let u = self.normalized_moduli(p);
        let d13 = u[2] - u[0];
        let d24 = u[3] - u[1];
        [
            u[0] + u[2] - 1.0,
            u[1] + u[3] - 1.0,
            d13 * d13 + d24 * d24 - 1.0,
        ]
    }

    /// `Σ |z_i|^2 / a_i^2 - 2`.
    pub fn ellipsoid_residual(&self, p: &AmbientPoint) -> f64 {
        self.normalized_moduli(p).iter().sum::<f64>() - 2.0
    }

    fn normalized_moduli(&self, p: &AmbientPoint) -> [f64; 4] {
        let mut u = [0.0; 4];
        for (i, ui) in u.iter_mut().enumerate() {
            *ui = p.modulus_squared(i) / (self.a[i] * self.a[i]);
        }
        u
    }
}

/// A point `(θ1, θ2, θ3, θ4, s)` of `V^5`; angles are kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 5]", into = "[f64; 5]")]
pub struct JoinCoordinate {
    theta: [f64; 4],
    s: f64,
}

pub(crate) fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl JoinCoordinate {
    pub fn new(theta: [f64; 4], s: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&s) || theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "join coordinate needs finite angles and s in [0, π], got θ={theta:?}, s={s}"
            )));
        }
        Ok(Self {
            theta: theta.map(normalize_angle),
            s,
        })
    }

    pub fn theta(&self) -> [f64; 4] {
        self.theta
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Shift all five coordinates; the angles are renormalized.
    pub fn displaced(&self, delta: [f64; 5]) -> Result<Self> {
        let mut theta = self.theta;
        for (t, d) in theta.iter_mut().zip(&delta) {
            *t += d;
        }
        Self::new(theta, self.s + delta[4])
    }
}

impl TryFrom<[f64; 5]> for JoinCoordinate {
    type Error = Error;

    fn try_from(v: [f64; 5]) -> Result<Self> {
        Self::new([v[0], v[1], v[2], v[3]], v[4])
    }
}

impl From<JoinCoordinate> for [f64; 5] {
    fn from(w: JoinCoordinate) -> Self {
        [w.theta[0], w.theta[1], w.theta[2], w.theta[3], w.s]
    }
}

/// A point of `C^4 = R^8`, stored as `[re z1, im z1, ..., re z4, im z4]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint(pub [f64; 8]);

impl AmbientPoint {
    pub fn origin() -> Self {
        Self([0.0; 8])
    }

    pub fn z(&self, i: usize) -> (f64, f64) {
        (self.0[2 * i], self.0[2 * i + 1])
    }

    pub fn modulus_squared(&self, i: usize) -> f64 {
        let (re, im) = self.z(i);
        re * re + im * im
    }

    pub fn phase(&self, i: usize) -> f64 {
        let (re, im) = self.z(i);
        normalize_angle(im.atan2(re))
    }

    pub fn scale_coordinate(&self, i: usize, factor: f64) -> Self {
        let mut xs = self.0;
        xs[2 * i] *= factor;
        xs[2 * i + 1] *= factor;
        Self(xs)
    }

    pub fn distance_squared(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// The four open pieces of `(0, π)` between consecutive singular loci.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interval {
    /// `(0, π/4)`, the manifold `Q^5` itself.
    Q5,
    /// `(π/4, π/2)`
    B2,
    /// `(π/2, 3π/4)`
    B3,
    /// `(3π/4, π)`
    B4,
}

impl Interval {
    pub const ALL: [Interval; 4] = [Interval::Q5, Interval::B2, Interval::B3, Interval::B4];

    pub fn index(self) -> usize {
        match self {
            Interval::Q5 => 0,
            Interval::B2 => 1,
            Interval::B3 => 2,
            Interval::B4 => 3,
        }
    }

    pub fn endpoints(self) -> (f64, f64) {
        let i = self.index() as f64;
        (i * FRAC_PI_4, (i + 1.0) * FRAC_PI_4)
    }

    /// Midpoint, where `|sin 4s| = 1` and the closed-form integral is based.
    pub fn base_s(self) -> f64 {
        let (lo, hi) = self.endpoints();
        0.5 * (lo + hi)
    }

    /// Multiple of `π` added to `2 atan(..)` in the closed form.
    pub fn offset(self) -> f64 {
        match self {
            Interval::Q5 => 0.0,
            Interval::B2 | Interval::B3 => TAU,
            Interval::B4 => 2.0 * TAU,
        }
    }

    /// Sign multiplying `c` in the closed form; equals the sign of `sin 4s`.
    pub fn sign(self) -> f64 {
        match self {
            Interval::Q5 | Interval::B3 => 1.0,
            Interval::B2 | Interval::B4 => -1.0,
        }
    }

    /// Boundary values of the profile at the lower and upper endpoints.
    pub fn limits(self) -> (f64, f64) {
        let i = self.index() as f64;
        (i * PI, (i + 1.0) * PI)
    }

    pub fn label(self) -> &'static str {
        match self {
            Interval::Q5 => "q5",
            Interval::B2 => "b2",
            Interval::B3 => "b3",
            Interval::B4 => "b4",
        }
    }

    /// True when `s` lies inside and at least `EPS_LOC` from both ends.
    pub fn contains(self, s: f64) -> bool {
        let (lo, hi) = self.endpoints();
        s > lo + EPS_LOC && s < hi - EPS_LOC
    }

    /// Closest points to the ends that still pass [`Interval::check`].
    pub fn interior(self) -> (f64, f64) {
        let (lo, hi) = self.endpoints();
        let mut a = lo + EPS_LOC;
        while !self.contains(a) {
            a = a.next_up();
        }
        let mut b = hi - EPS_LOC;
        while !self.contains(b) {
            b = b.next_down();
        }
        (a, b)
    }

    pub fn check(self, s: f64) -> Result<()> {
        if self.contains(s) {
            return Ok(());
        }
        let (lo, hi) = self.endpoints();
        if s.is_finite() && s > lo - EPS_LOC && s < hi + EPS_LOC {
            Err(Error::SingularLocus { s })
        } else {
            Err(Error::OutOfInterval { s, lo, hi })
        }
    }

    /// The interval containing `s`, rejecting the singular loci.
    pub fn containing(s: f64) -> Result<Interval> {
        if !(s > -EPS_LOC && s < PI + EPS_LOC) {
            return Err(Error::OutOfInterval { s, lo: 0.0, hi: PI });
        }
        let nearest = (s / FRAC_PI_4).round();
        if (s - nearest * FRAC_PI_4).abs() <= EPS_LOC {
            return Err(Error::SingularLocus { s });
        }
        let idx = ((s / FRAC_PI_4).floor() as usize).min(3);
        Ok(Interval::ALL[idx])
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q5" => Ok(Interval::Q5),
            "b2" => Ok(Interval::B2),
            "b3" => Ok(Interval::B3),
            "b4" => Ok(Interval::B4),
            other => Err(Error::Parse(format!("unknown branch '{other}'"))),
        }
    }
}
