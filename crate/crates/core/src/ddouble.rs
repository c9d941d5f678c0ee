//! Double-double arithmetic (about 106 significant bits) for the ODE
//! coefficients, whose two algebraically equal forms must round to the same
//! double even where they grow like `1/s²` near the loci.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

const HALF_PI: [f64; 3] = [1.5707963267948966, 6.123233995736766e-17, -1.4973849048591698e-33];
pub(crate) const FRAC_1_SQRT_2: Dd = Dd { hi: 0.7071067811865476, lo: -4.833646656726457e-17 };

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `x²` with `x` a double, exactly.
    pub fn square_of(x: f64) -> Self {
        two_prod(x, x)
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn scale(self, b: f64) -> Self {
        let p = two_prod(self.hi, b);
        quick_two_sum(p.hi, p.lo + self.lo * b)
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - two_prod(q1, b);
        let q2 = r.hi / b;
        let r = r - two_prod(q2, b);
        let q3 = r.hi / b;
        quick_two_sum(q1, q2) + Dd::from_f64(q3)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let s = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(s.hi, s.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o.scale(q1);
        let q2 = r.hi / o.hi;
        let r = r - o.scale(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + Dd::from_f64(q3)
    }
}

/// `(sin x, cos x)` in double-double for a double `x` of moderate size.
pub(crate) fn sin_cos(x: f64) -> (Dd, Dd) {
    let n = (x / HALF_PI[0]).round();
    let mut r = Dd::from_f64(x) - two_prod(n, HALF_PI[0]);
    r = r - Dd { hi: HALF_PI[1], lo: HALF_PI[2] }.scale(n);
    let r2 = r.sqr();

    let mut term = r;
    let mut sin = r;
    let mut j = 1.0;
    while term.hi.abs() > 1e-36 * sin.hi.abs() && j < 30.0 {
        term = -(term * r2).div_f64((2.0 * j) * (2.0 * j + 1.0));
        sin = sin + term;
        j += 1.0;
    }
    let mut term = Dd::ONE;
    let mut cos = Dd::ONE;
    let mut j = 1.0;
    while term.hi.abs() > 1e-36 && j < 30.0 {
        term = -(term * r2).div_f64((2.0 * j - 1.0) * (2.0 * j));
        cos = cos + term;
        j += 1.0;
    }
    match n.rem_euclid(4.0) as u8 {
        0 => (sin, cos),
        1 => (cos, -sin),
        2 => (-sin, -cos),
        _ => (-cos, sin),
    }
}
