//! Exact rational scalars.
//!
//! Everything in the crate is computed over arbitrary-precision rationals, so
//! repeated application of expanding or contracting maps never loses
//! precision. Persisted values use the `p/q` text form produced by
//! [`format`] (integers are written without a denominator).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// `1/10^k`, handy for tolerances.
pub fn inverse_power_of_ten(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

/// Parses `p/q`, `p`, or a finite decimal such as `0.25` into an exact rational.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational: `{text}`"));
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let value = Rational::new(num, den);
        return Ok(if negative { -value } else { value });
    }
    let num: BigInt = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(num))
}

/// Lowest-terms `p/q` rendering; integers drop the denominator.
pub fn format(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Display-only decimal approximation.
pub fn to_f64(value: &Rational) -> f64 {
    match (value.numer().to_f64(), value.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerators/denominators: scale both down by the same power of two.
            let shift = value.denom().bits().max(value.numer().bits()).saturating_sub(1000);
            let n = (value.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (value.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if value.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn clamp_unit(value: Rational) -> Rational {
    if value.is_negative() {
        zero()
    } else if value > one() {
        one()
    } else {
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse("-2").unwrap(), int(-2));
        assert_eq!(parse("0.4").unwrap(), ratio(2, 5));
        assert_eq!(parse("-0.25").unwrap(), ratio(-1, 4));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format(&ratio(6, 8)), "3/4");
        assert_eq!(format(&int(5)), "5");
        assert_eq!(format(&ratio(-1, 3)), "-1/3");
    }

    #[test]
    fn decimal_of_huge_values() {
        let big = Rational::new(BigInt::from(3).pow(2000) + 1, BigInt::from(3).pow(2000) * 4);
        assert!((to_f64(&big) - 0.25).abs() < 1e-12);
    }
}
