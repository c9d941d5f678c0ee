//! Piecewise polynomial interpolation of tabulated profiles.
//!
//! Which interpolant is used depends on what the table carries:
//! values only gives a natural cubic spline, values and slopes give cubic
//! Hermite, and values, slopes and second derivatives (as produced by the
//! shooter) give quintic Hermite.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    NaturalCubic,
    CubicHermite,
    QuinticHermite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCurve {
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Option<Vec<f64>>,
    second: Option<Vec<f64>>,
    /// Natural spline second derivatives when `slopes` is absent.
    spline_m: Vec<f64>,
}

impl GridCurve {
    pub fn new(
        nodes: Vec<f64>,
        values: Vec<f64>,
        slopes: Option<Vec<f64>>,
        second: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = nodes.len();
        if n < 2 {
            return Err(Error::InvalidParams("a grid needs at least two nodes".into()));
        }
        let lengths_ok = values.len() == n
            && slopes.as_ref().is_none_or(|v| v.len() == n)
            && second.as_ref().is_none_or(|v| v.len() == n);
        if !lengths_ok {
            return Err(Error::InvalidParams("grid arrays differ in length".into()));
        }
        if second.is_some() && slopes.is_none() {
            return Err(Error::InvalidParams(
                "second derivatives need slopes as well".into(),
            ));
        }
        let all_finite = nodes
            .iter()
            .chain(&values)
            .chain(slopes.iter().flatten())
            .chain(second.iter().flatten())
            .all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::InvalidParams("grid contains non-finite entries".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams("grid nodes must be strictly ascending".into()));
        }
        let spline_m = if slopes.is_none() {
            natural_spline_moments(&nodes, &values)
        } else {
            Vec::new()
        };
        Ok(Self {
            nodes,
            values,
            slopes,
            second,
            spline_m,
        })
    }

    pub fn interpolation(&self) -> Interpolation {
        match (&self.slopes, &self.second) {
            (None, _) => Interpolation::NaturalCubic,
            (Some(_), None) => Interpolation::CubicHermite,
            (Some(_), Some(_)) => Interpolation::QuinticHermite,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slopes(&self) -> Option<&[f64]> {
        self.slopes.as_deref()
    }

    pub fn second(&self) -> Option<&[f64]> {
        self.second.as_deref()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.nodes[0], self.nodes[self.nodes.len() - 1])
    }

    /// `(f, f', f'')` at `x`, which must lie in the node range.
    pub fn eval(&self, x: f64) -> Result<[f64; 3]> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(Error::OutOfInterval { s: x, lo, hi });
        }
        let j = self
            .nodes
            .partition_point(|&n| n <= x)
            .clamp(1, self.nodes.len() - 1)
            - 1;
        let (x0, x1) = (self.nodes[j], self.nodes[j + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (y0, y1) = (self.values[j], self.values[j + 1]);
        let [p, dp, ddp] = match (&self.slopes, &self.second) {
            (None, _) => {
                let (m0, m1) = (self.spline_m[j], self.spline_m[j + 1]);
                let (a, b) = (1.0 - t, t);
                let value = a * y0
                    + b * y1
                    + h * h / 6.0 * ((a * a * a - a) * m0 + (b * b * b - b) * m1);
                let slope = (y1 - y0) / h + h / 6.0 * ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1);
                return Ok([value, slope, a * m0 + b * m1]);
            }
            (Some(d), None) => {
                let (d0, d1) = (h * d[j], h * d[j + 1]);
                let r0 = y1 - y0 - d0;
                let r1 = d1 - d0;
                let c2 = 3.0 * r0 - r1;
                let c3 = r1 - 2.0 * r0;
                poly_eval(&[y0, d0, c2, c3], t)
            }
            (Some(d), Some(dd)) => {
                return Ok(quintic_hermite(
                    h,
                    [y0, d[j], dd[j]],
                    [y1, d[j + 1], dd[j + 1]],
                    t,
                ));
            }
        };
        Ok([p, dp / h, ddp / (h * h)])
    }
}

/// Quintic matching value, slope and second derivative at both ends of a
/// step of length `h`, evaluated at the fraction `t`. Returns `(f, f', f'')`.
pub(crate) fn quintic_hermite(h: f64, left: [f64; 3], right: [f64; 3], t: f64) -> [f64; 3] {
    let [y0, d0, s0] = left;
    let [y1, d1, s1] = right;
    let (d0, d1) = (h * d0, h * d1);
    let (s0, s1) = (h * h * s0, h * h * s1);
    let c2 = 0.5 * s0;
    let r0 = y1 - (y0 + d0 + c2);
    let r1 = d1 - (d0 + 2.0 * c2);
    let r2 = s1 - 2.0 * c2;
    let c3 = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
    let c4 = -15.0 * r0 + 7.0 * r1 - r2;
    let c5 = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
    let [p, dp, ddp] = poly_eval(&[y0, d0, c2, c3, c4, c5], t);
    [p, dp / h, ddp / (h * h)]
}

/// Value, first and second derivative of `Σ c_i t^i` by Horner.
fn poly_eval(c: &[f64], t: f64) -> [f64; 3] {
    let mut p = 0.0;
    let mut dp = 0.0;
    let mut ddp = 0.0;
    for &ci in c.iter().rev() {
        ddp = ddp * t + 2.0 * dp;
        dp = dp * t + p;
        p = p * t + ci;
    }
    [p, dp, ddp]
}

fn natural_spline_moments(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let a = h0 / 6.0;
        let b = (h0 + h1) / 3.0;
        let c = h1 / 6.0;
        let d = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        let denom = b - a * c_prime[i - 1];
        c_prime[i] = c / denom;
        d_prime[i] = (d - a * d_prime[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(f: impl Fn(f64) -> f64, n: usize) -> (Vec<f64>, Vec<f64>) {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        (xs, ys)
    }

    #[test]
    fn quintic_reproduces_quintic() {
        let f = |x: f64| 1.0 + x - 2.0 * x.powi(3) + 0.5 * x.powi(5);
        let df = |x: f64| 1.0 - 6.0 * x * x + 2.5 * x.powi(4);
        let ddf = |x: f64| -12.0 * x + 10.0 * x.powi(3);
        let (xs, ys) = sample(f, 5);
        let d1 = xs.iter().map(|&x| df(x)).collect();
        let d2 = xs.iter().map(|&x| ddf(x)).collect();
        let g = GridCurve::new(xs, ys, Some(d1), Some(d2)).unwrap();
        assert_eq!(g.interpolation(), Interpolation::QuinticHermite);
        for x in [0.0, 0.13, 0.5, 0.77, 1.0] {
            let [v, d, dd] = g.eval(x).unwrap();
            assert_relative_eq!(v, f(x), epsilon = 1e-13);
            assert_relative_eq!(d, df(x), epsilon = 1e-12);
            assert_relative_eq!(dd, ddf(x), epsilon = 1e-11);
        }
    }

    #[test]
    fn cubic_hermite_reproduces_cubic() {
        let f = |x: f64| x.powi(3) - x;
        let (xs, ys) = sample(f, 4);
        let d1 = xs.iter().map(|&x| 3.0 * x * x - 1.0).collect();
        let g = GridCurve::new(xs, ys, Some(d1), None).unwrap();
        let [v, d, dd] = g.eval(0.4).unwrap();
        assert_relative_eq!(v, f(0.4), epsilon = 1e-14);
        assert_relative_eq!(d, 3.0 * 0.16 - 1.0, epsilon = 1e-13);
        assert_relative_eq!(dd, 2.4, epsilon = 1e-12);
    }

    #[test]
    fn natural_spline_is_exact_for_lines_and_close_for_sine() {
        let (xs, ys) = sample(|x| 2.0 * x - 1.0, 7);
        let g = GridCurve::new(xs, ys, None, None).unwrap();
        let [v, d, dd] = g.eval(0.31).unwrap();
        assert_relative_eq!(v, -0.38, epsilon = 1e-14);
        assert_relative_eq!(d, 2.0, epsilon = 1e-13);
        assert!(dd.abs() < 1e-12);

        let (xs, ys) = sample(|x| (3.0 * x).sin(), 201);
        let g = GridCurve::new(xs, ys, None, None).unwrap();
        assert!((g.eval(0.5).unwrap()[0] - 1.5f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridCurve::new(vec![0.0], vec![1.0], None, None).is_err());
        assert!(GridCurve::new(vec![0.0, 0.0], vec![1.0, 2.0], None, None).is_err());
        assert!(GridCurve::new(vec![0.0, 1.0], vec![1.0], None, None).is_err());
        let g = GridCurve::new(vec![0.0, 1.0], vec![1.0, 2.0], None, None).unwrap();
        assert!(g.eval(1.5).is_err());
    }
}
