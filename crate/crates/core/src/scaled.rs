//! Mantissa/exponent arithmetic for quantities of size exp(S/hbar).
//!
//! Semiclassical sweeps produce factors like exp(S/hbar) far beyond the
//! double range, so every exponential-regime value is carried as a pair
//! `m * exp(e)` with `m` kept near unit magnitude.

use crate::Complex;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex value stored as `m * exp(e)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub m: Complex,
    pub e: f64,
}

/// Real value stored as `m * exp(e)` (used by the scaled Airy evaluators).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SReal {
    pub m: f64,
    pub e: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        m: Complex::new(0.0, 0.0),
        e: 0.0,
    };

    pub fn new(m: Complex, e: f64) -> Self {
        Scaled { m, e }.normalized()
    }

    pub fn from_complex(z: Complex) -> Self {
        Scaled { m: z, e: 0.0 }.normalized()
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex::new(x, 0.0))
    }

    /// exp(e) as a scaled value.
    pub fn from_exponent(e: f64) -> Self {
        Scaled {
            m: Complex::new(1.0, 0.0),
            e,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.norm_sqr() == 0.0
    }

    fn normalized(self) -> Self {
        let n = self.m.norm();
        if n == 0.0 {
            return Scaled::ZERO;
        }
        if !(0.05..=20.0).contains(&n) {
            let d = n.ln();
            Scaled {
                m: self.m * (-d).exp(),
                e: self.e + d,
            }
        } else {
            self
        }
    }

    pub fn conj(self) -> Self {
        Scaled {
            m: self.m.conj(),
            e: self.e,
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Scaled {
            m: self.m * k,
            e: self.e,
        }
        .normalized()
    }

    pub fn mul_complex(self, k: Complex) -> Self {
        Scaled {
            m: self.m * k,
            e: self.e,
        }
        .normalized()
    }

    /// Multiply by exp(de).
    pub fn mul_exp(self, de: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            Scaled {
                m: self.m,
                e: self.e + de,
            }
        }
    }

    pub fn recip(self) -> Self {
        Scaled {
            m: Complex::new(1.0, 0.0) / self.m,
            e: -self.e,
        }
        .normalized()
    }

    /// ln |value|; -inf for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.norm().ln() + self.e
        }
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs() / std::f64::consts::LN_10
    }

    pub fn arg(&self) -> f64 {
        self.m.arg()
    }

    /// Collapse to a plain complex; saturates to 0/inf outside range.
    pub fn to_complex(&self) -> Complex {
        self.m * self.e.exp()
    }

    /// |value| as a scaled real.
    pub fn abs(&self) -> SReal {
        SReal {
            m: self.m.norm(),
            e: self.e,
        }
        .normalized()
    }

    /// |value|^2 as a scaled real.
    pub fn abs_sqr(&self) -> SReal {
        SReal {
            m: self.m.norm_sqr(),
            e: 2.0 * self.e,
        }
        .normalized()
    }

    pub fn re_scaled(&self) -> SReal {
        SReal {
            m: self.m.re,
            e: self.e,
        }
        .normalized()
    }

    pub fn im_scaled(&self) -> SReal {
        SReal {
            m: self.m.im,
            e: self.e,
        }
        .normalized()
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled {
            m: self.m * rhs.m,
            e: self.e + rhs.e,
        }
        .normalized()
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled {
            m: self.m / rhs.m,
            e: self.e - rhs.e,
        }
        .normalized()
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, rhs: Scaled) -> Scaled {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= rhs.e { (self, rhs) } else { (rhs, self) };
        let d = lo.e - hi.e;
        if d < -745.0 {
            hi
        } else {
            Scaled {
                m: hi.m + lo.m * d.exp(),
                e: hi.e,
            }
            .normalized()
        }
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, rhs: Scaled) -> Scaled {
        self + (-rhs)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            m: -self.m,
            e: self.e,
        }
    }
}

impl SReal {
    pub const ZERO: SReal = SReal { m: 0.0, e: 0.0 };

    pub fn new(m: f64, e: f64) -> Self {
        SReal { m, e }.normalized()
    }

    pub fn from_f64(x: f64) -> Self {
        SReal { m: x, e: 0.0 }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    fn normalized(self) -> Self {
        if self.m == 0.0 {
            return SReal::ZERO;
        }
        let n = self.m.abs();
        if !(0.05..=20.0).contains(&n) {
            let d = n.ln();
            SReal {
                m: self.m * (-d).exp(),
                e: self.e + d,
            }
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.m * self.e.exp()
    }

    pub fn ln_abs(&self) -> f64 {
        if self.m == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.m.abs().ln() + self.e
        }
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs() / std::f64::consts::LN_10
    }

    pub fn recip(self) -> Self {
        SReal {
            m: 1.0 / self.m,
            e: -self.e,
        }
        .normalized()
    }

    pub fn mul_exp(self, de: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            SReal {
                m: self.m,
                e: self.e + de,
            }
        }
    }

    pub fn sqrt(self) -> Self {
        assert!(self.m >= 0.0, "sqrt of negative scaled real");
        SReal {
            m: self.m.sqrt(),
            e: 0.5 * self.e,
        }
        .normalized()
    }

    pub fn to_scaled(self) -> Scaled {
        Scaled {
            m: Complex::new(self.m, 0.0),
            e: self.e,
        }
    }
}

impl Mul for SReal {
    type Output = SReal;
    fn mul(self, rhs: SReal) -> SReal {
        SReal {
            m: self.m * rhs.m,
            e: self.e + rhs.e,
        }
        .normalized()
    }
}

impl Div for SReal {
    type Output = SReal;
    fn div(self, rhs: SReal) -> SReal {
        SReal {
            m: self.m / rhs.m,
            e: self.e - rhs.e,
        }
        .normalized()
    }
}

impl Add for SReal {
    type Output = SReal;
    fn add(self, rhs: SReal) -> SReal {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= rhs.e { (self, rhs) } else { (rhs, self) };
        let d = lo.e - hi.e;
        if d < -745.0 {
            hi
        } else {
            SReal {
                m: hi.m + lo.m * d.exp(),
                e: hi.e,
            }
            .normalized()
        }
    }
}

impl Neg for SReal {
    type Output = SReal;
    fn neg(self) -> SReal {
        SReal {
            m: -self.m,
            e: self.e,
        }
    }
}
