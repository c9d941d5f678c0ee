//! Adaptive Gauss-Kronrod (7/15) quadrature for `I(s) = ∫_base^s 4h(u)/sin(4u) du`.
//!
//! The integrand blows up like `1/(4 d)` at distance `d` from a branch end.
//! Queries are only accepted at least `EPS_LOC` inside the branch, and the
//! global bisection loop keeps splitting the worst panel until the summed
//! error estimate is below tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{EllipsoidParams, Interval};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_BUDGET: usize = 1 << 20;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error, abs_value: res_abs }
}

/// Integrates `f` over `[a, b]` (either orientation) to relative tolerance
/// `tol`, spending at most `budget` function evaluations.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let first = kronrod15(&f, a, b);
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut abs_value = first.abs_value;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        let round_off = 50.0 * f64::EPSILON * abs_value;
        if error <= (tol * value.abs()).max(round_off) {
            return Ok(value);
        }
        if evaluations + 30 > budget {
            return Err(Error::ToleranceNotMet {
                evaluations,
                estimate: error,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid == worst.a || mid == worst.b {
            return Err(Error::ToleranceNotMet {
                evaluations,
                estimate: error,
            });
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        // the running sums drift; refresh them now and then
        if heap.len() % 128 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
            abs_value = heap.iter().map(|p| p.abs_value).sum();
        }
    }
}

/// `4 h(u) / sin(4u)`.
pub fn integrand(params: &EllipsoidParams, u: f64) -> f64 {
    4.0 * params.h(u) / (4.0 * u).sin()
}

/// Direct adaptive evaluation of `∫_{base_s}^{s} 4h(u)/sin(4u) du`.
pub fn quadrature_i(
    params: &EllipsoidParams,
    branch: Interval,
    base_s: f64,
    s: f64,
    tol: f64,
) -> Result<f64> {
    branch.check(s)?;
    branch.check(base_s)?;
    integrate(|u| integrand(params, u), base_s, s, tol, DEFAULT_BUDGET)
}

const TABLE_SEGMENTS: usize = 32;

/// Cumulative values of `I` at fixed nodes of one branch.
///
/// Queries integrate from the nearest node only, so a sweep over a dense
/// grid costs a few panels per point.
#[derive(Debug, Clone)]
pub struct QuadratureTable {
    params: EllipsoidParams,
    branch: Interval,
    base_s: f64,
    tol: f64,
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
}

impl QuadratureTable {
    pub fn new(params: &EllipsoidParams, branch: Interval, tol: f64) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "quadrature tolerance must be positive, got {tol}"
            )));
        }
        let (lo, hi) = branch.endpoints();
        let width = hi - lo;
        let mut nodes: Vec<f64> = (1..TABLE_SEGMENTS)
            .map(|j| lo + width * j as f64 / TABLE_SEGMENTS as f64)
            .collect();
        let base_index = TABLE_SEGMENTS / 2 - 1;
        let base_s = branch.base_s();
        nodes[base_index] = base_s;
        let f = |u: f64| integrand(params, u);
        let mut cumulative = vec![0.0; nodes.len()];
        for j in base_index + 1..nodes.len() {
            cumulative[j] =
                cumulative[j - 1] + integrate(f, nodes[j - 1], nodes[j], tol, DEFAULT_BUDGET)?;
        }
        for j in (0..base_index).rev() {
            cumulative[j] =
                cumulative[j + 1] + integrate(f, nodes[j + 1], nodes[j], tol, DEFAULT_BUDGET)?;
        }
        Ok(Self {
            params: *params,
            branch,
            base_s,
            tol,
            nodes,
            cumulative,
        })
    }

    pub fn params(&self) -> &EllipsoidParams {
        &self.params
    }

    pub fn branch(&self) -> Interval {
        self.branch
    }

    pub fn base_s(&self) -> f64 {
        self.base_s
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Sign of the integrand on the branch; `I` is monotone in this direction.
    pub fn integrand_sign(&self) -> f64 {
        self.branch.sign()
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        self.branch.check(s)?;
        let (lo, hi) = self.branch.endpoints();
        let position = (s - lo) / (hi - lo) * TABLE_SEGMENTS as f64;
        let j = (position.round() as usize).clamp(1, TABLE_SEGMENTS - 1) - 1;
        let rest = integrate(
            |u| integrand(&self.params, u),
            self.nodes[j],
            s,
            self.tol,
            DEFAULT_BUDGET,
        )?;
        Ok(self.cumulative[j] + rest)
    }
}
