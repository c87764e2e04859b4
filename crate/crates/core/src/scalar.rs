//! Numeric field abstraction shared by exact and floating-point evaluation.

use std::fmt::Debug;
use std::ops::Neg;

use num::bigint::BigInt;
use num::traits::{Num, One, Signed, ToPrimitive, Zero};
use num::BigRational;

pub type Rational = BigRational;

/// A field in which observables can be evaluated and states weighted.
pub trait Scalar: Num + Clone + Neg<Output = Self> + PartialOrd + Debug + Send + Sync + 'static {
    fn from_rational(q: &Rational) -> Self;
    /// Exact conversion for rationals, identity for floats. Panics on non-finite input.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn from_i64(n: i64) -> Self;
    fn abs_value(&self) -> Self;
    fn is_exact() -> bool;
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn abs_value(&self) -> Self {
        self.abs()
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }
    fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite float");
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn abs_value(&self) -> Self {
        self.abs()
    }
    fn is_exact() -> bool {
        false
    }
}

/// Converts a rational to the nearest-ish double, robust to huge numerators and denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = q.numer().bits() as i64 - q.denom().bits() as i64;
            let scaled = if shift > 0 {
                q / Rational::from_integer(BigInt::one() << (shift as usize))
            } else {
                q * Rational::from_integer(BigInt::one() << ((-shift) as usize))
            };
            let n = scaled.numer().to_f64().unwrap_or(0.0);
            let d = scaled.denom().to_f64().unwrap_or(1.0);
            if n.is_finite() && d.is_finite() {
                (n / d) * 2f64.powi(shift as i32)
            } else {
                f64::NAN
            }
        }
    }
}

/// The rational `n / d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `a` or `a/b` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(n))
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of ordered `k`-tuples of distinct elements of an `n`-set.
pub fn falling_factorial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// JSON encoding: exact values as `"p/q"` strings, floats as numbers. Both forms are
/// accepted on input.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Option<Self>;
}

impl JsonScalar for Rational {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(int(i))
                } else {
                    n.as_f64().filter(|x| x.is_finite()).and_then(Rational::from_float)
                }
            }
            _ => None,
        }
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self).map_or(serde_json::Value::Null, serde_json::Value::Number)
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(n) => n.as_f64(),
            serde_json::Value::String(s) => parse_rational(s).map(|q| rational_to_f64(&q)),
            _ => None,
        }
    }
}
