//! Exact rational scalars used for rates, queue weights, and LP data.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The exact scalar for rate matrices and virtual-queue arithmetic.
pub type Rational = Ratio<i64>;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("finite rational")
}

pub fn big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn from_big(r: &BigRational) -> Result<Rational> {
    let numer = r.numer().to_i64().ok_or(Error::RationalOverflow)?;
    let denom = r.denom().to_i64().ok_or(Error::RationalOverflow)?;
    Ok(Rational::new(numer, denom))
}

/// On-disk form of a rational: `{"num": 7, "den": 10}`, with bare
/// integers accepted as a shorthand.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalSpec {
    Int(i64),
    Frac { num: i64, den: i64 },
}

impl RationalSpec {
    pub fn to_rational(self, field: &str) -> Result<Rational> {
        match self {
            RationalSpec::Int(v) => Ok(Rational::from_integer(v)),
            RationalSpec::Frac { num, den } => {
                if den == 0 {
                    return Err(Error::config(field, "denominator must be nonzero"));
                }
                Ok(Rational::new(num, den))
            }
        }
    }
}

impl From<Rational> for RationalSpec {
    fn from(r: Rational) -> Self {
        if r.denom() == &1 {
            RationalSpec::Int(*r.numer())
        } else {
            RationalSpec::Frac {
                num: *r.numer(),
                den: *r.denom(),
            }
        }
    }
}

/// Exact conversion of a finite float to a rational (floats are dyadic).
pub fn rational_from_f64(value: f64, field: &str) -> Result<Rational> {
    if !value.is_finite() {
        return Err(Error::config(field, "value must be finite"));
    }
    let big = BigRational::from_float(value)
        .ok_or_else(|| Error::config(field, "value must be finite"))?;
    if big.is_negative() {
        return Err(Error::config(field, "value must be nonnegative"));
    }
    if big.is_zero() {
        return Ok(Rational::zero());
    }
    from_big(&big)
}

/// Snaps a float to the simplest rational within `tolerance` (continued
/// fractions), so `0.9` ingests as 9/10 rather than its dyadic expansion.
/// Falls back to the exact dyadic value when no small rational is close
/// enough.
pub fn rational_from_f64_tol(value: f64, tolerance: f64, field: &str) -> Result<Rational> {
    if !value.is_finite() {
        return Err(Error::config(field, "value must be finite"));
    }
    if value < 0.0 {
        return Err(Error::config(field, "value must be nonnegative"));
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, value.floor() as i64, 1i64);
    let mut x = value;
    loop {
        let approx = p1 as f64 / q1 as f64;
        if (approx - value).abs() <= tolerance {
            return Ok(Rational::new(p1, q1));
        }
        let frac = x - x.floor();
        if frac <= 0.0 {
            break;
        }
        x = 1.0 / frac;
        let a = x.floor() as i64;
        let Some(pm) = a.checked_mul(p1) else { break };
        let Some(p) = pm.checked_add(p0) else { break };
        let Some(qm) = a.checked_mul(q1) else { break };
        let Some(q) = qm.checked_add(q0) else { break };
        if q > 1_000_000_000_000 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p, q);
    }
    rational_from_f64(value, field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_conversion_is_exact() {
        let r = rational_from_f64(0.25, "x").unwrap();
        assert_eq!(r, rational(1, 4));
        let r = rational_from_f64(0.7, "x").unwrap();
        assert_eq!(to_f64(&r), 0.7);
    }

    #[test]
    fn float_snapping_recovers_decimal_fractions() {
        assert_eq!(rational_from_f64_tol(0.9, 1e-12, "x").unwrap(), rational(9, 10));
        assert_eq!(rational_from_f64_tol(0.7, 1e-12, "x").unwrap(), rational(7, 10));
        assert_eq!(
            rational_from_f64_tol(1.0 / 3.0, 1e-12, "x").unwrap(),
            rational(1, 3)
        );
        assert_eq!(rational_from_f64_tol(0.0, 1e-12, "x").unwrap(), rational(0, 1));
        assert_eq!(rational_from_f64_tol(3.0, 1e-12, "x").unwrap(), rational(3, 1));
        // decimal fractions of a pathological float still land within
        // tolerance of the input
        let v = 0.123456789123;
        let r = rational_from_f64_tol(v, 1e-12, "x").unwrap();
        assert!((to_f64(&r) - v).abs() <= 1e-12);
        assert!(rational_from_f64_tol(-0.5, 1e-12, "x").is_err());
        assert!(rational_from_f64_tol(f64::NAN, 1e-12, "x").is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec = RationalSpec::Frac { num: 2, den: 10 };
        assert_eq!(spec.to_rational("x").unwrap(), rational(1, 5));
        assert!(RationalSpec::Frac { num: 1, den: 0 }.to_rational("x").is_err());
    }
}
