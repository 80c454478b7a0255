//! Small helpers for exact big-integer / rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Real;

pub type Rational = BigRational;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn pow2(k: usize) -> BigInt {
    BigInt::one() << k
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

/// Exact rational value of a finite binary64 number.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite value")
}

pub fn pow(q: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

pub fn sign_pow(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}

/// An exact rational coefficient multiplying a power of the interval
/// width `b - a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledValue {
    pub coeff: Rational,
    pub power: usize,
}

impl ScaledValue {
    pub fn new(coeff: Rational, power: usize) -> Self {
        Self { coeff, power }
    }

    pub fn zero(power: usize) -> Self {
        Self {
            coeff: Rational::zero(),
            power,
        }
    }

    /// Value for a concrete width, exactly.
    pub fn exact(&self, width: &Rational) -> Rational {
        &self.coeff * pow(width, self.power)
    }

    pub fn value<T: Real>(&self, width: T) -> T {
        T::from_rational(&self.coeff) * width.powi(self.power as i32)
    }

    pub fn negated(&self) -> Self {
        Self {
            coeff: -self.coeff.clone(),
            power: self.power,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_beyond_u64() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(25).to_string(), "15511210043330985984000000");
    }

    #[test]
    fn float_conversion_is_exact() {
        assert_eq!(from_f64(0.75), ratio(BigInt::from(3), BigInt::from(4)));
        assert_eq!(to_f64(&from_f64(0.1)), 0.1);
    }

    #[test]
    fn scaled_values() {
        let v = ScaledValue::new(ratio(BigInt::from(1), BigInt::from(12)), 2);
        assert_eq!(v.exact(&int(2)), ratio(BigInt::from(1), BigInt::from(3)));
        assert!((v.value(2.0f64) - 1.0 / 3.0).abs() < 1e-16);
    }
}
