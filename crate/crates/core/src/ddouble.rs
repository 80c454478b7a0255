//! Double-double arithmetic (an unevaluated sum `hi + lo` of two binary64
//! values, ~106 bits of significand).
//!
//! The basic operations follow the error-free transformations of Dekker and
//! Knuth; elementary functions use argument reduction plus Taylor series.
//! Accuracy is roughly 1e-31 relative for arguments of moderate size; trig
//! reduction uses a two-term pi/2 and degrades for |x| beyond ~1e6.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const LN2: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17);
const FRAC_PI_2: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::FRAC_PI_2, 6.123_233_995_736_766e-17);

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const PI: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::PI, 1.224_646_799_147_353_2e-16);
    pub const E: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::E, 1.445_646_891_729_250_2e-16);

    /// Builds a value from an already-normalized pair (`|lo| <= ulp(hi)/2`).
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    fn nan() -> Self {
        Self::new(f64::NAN)
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        Self::renorm(p1, p2 + self.lo * b)
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, e) = two_sum(self.hi, -p1);
        let e = e - p2 + self.lo;
        let q2 = (s + e) / b;
        Self::renorm(q1, q2)
    }

    fn square(x: f64) -> Self {
        let (p, e) = two_prod(x, x);
        Self::renorm(p, e)
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Self {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            Self::renorm(fh, self.lo.floor())
        } else {
            Self::new(fh)
        }
    }

    fn from_bigint(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Self::new(hi);
        }
        let rem = n - BigInt::from_f64(hi).expect("finite f64 is an integer here");
        Self::renorm(hi, rem.to_f64().unwrap_or(0.0))
    }

    /// sin and cos of a reduced argument |r| <= pi/4 by Taylor series.
    fn sin_cos_reduced(r: Self) -> (Self, Self) {
        let r2 = r * r;
        let mut s = r;
        let mut term = r;
        let mut k = 1.0;
        loop {
            term = -(term * r2).div_f64((k + 1.0) * (k + 2.0));
            k += 2.0;
            s += term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        let mut c = Self::one();
        let mut term = Self::one();
        let mut k = 0.0;
        loop {
            term = -(term * r2).div_f64((k + 1.0) * (k + 2.0));
            k += 2.0;
            c += term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        (s, c)
    }

    pub fn sin_cos(self) -> (Self, Self) {
        if !self.hi.is_finite() {
            return (Self::nan(), Self::nan());
        }
        let j = (self / FRAC_PI_2).hi.round();
        let r = self - FRAC_PI_2.mul_f64(j);
        let (s, c) = Self::sin_cos_reduced(r);
        match (j as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::new(x)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Self::renorm(s1, s2 + t2)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        Self::renorm(p1, p2 + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        Self::renorm(q1, q2) + Self::new(q3)
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl Real for DoubleDouble {
    const EPSILON: f64 = 4.93038065763132e-32;

    fn from_f64(x: f64) -> Self {
        Self::new(x)
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return <Self as Real>::zero();
        }
        if self.hi < 0.0 {
            return Self::nan();
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        Self::new(ax) + Self::new((self - Self::square(ax)).hi * (x * 0.5))
    }

    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return <Self as Real>::zero();
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::one();
        }
        let m = (self.hi / LN2.hi + 0.5).floor();
        // r = (x - m ln2) / 512, |r| <= 6.8e-4
        let r = (self - LN2.mul_f64(m)).ldexp(-9);
        let mut s = r;
        let mut term = r;
        for k in 2..=12 {
            term = (term * r).div_f64(k as f64);
            s += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // (1 + s)^2 - 1 = 2s + s^2, nine times
        for _ in 0..9 {
            s = s.ldexp(1) + s * s;
        }
        (s + Self::one()).ldexp(m as i32)
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::nan();
        }
        if self.hi == 1.0 && self.lo == 0.0 {
            return <Self as Real>::zero();
        }
        let mut x = Self::new(self.hi.ln());
        for _ in 0..2 {
            x = x + self * (-x).exp() - Self::one();
        }
        x
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }
}

impl fmt::Display for DoubleDouble {
    /// Prints 32 significant decimal digits in scientific notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hi.is_finite() {
            return write!(f, "{}", self.hi);
        }
        if self.hi == 0.0 {
            return write!(f, "0.0");
        }
        let neg = self.hi < 0.0;
        let mut x = self.abs();
        let mut e = x.hi.log10().floor() as i32;
        x = if e >= 0 {
            x / Self::new(10.0).powi(e)
        } else {
            x * Self::new(10.0).powi(-e)
        };
        if x.hi >= 10.0 {
            x = x.div_f64(10.0);
            e += 1;
        } else if x.hi < 1.0 {
            x = x.mul_f64(10.0);
            e -= 1;
        }
        let mut digits = Vec::with_capacity(32);
        for _ in 0..32 {
            let d = x.floor().hi.clamp(0.0, 9.0);
            digits.push(d as u8);
            x = (x - Self::new(d)).mul_f64(10.0);
        }
        let sign = if neg { "-" } else { "" };
        write!(f, "{sign}{}.", digits[0])?;
        for d in &digits[1..] {
            write!(f, "{d}")?;
        }
        write!(f, "e{e}")
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::new(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}
