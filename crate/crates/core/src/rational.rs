//! Exact rational helpers.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"3"`, `"-2"`, `"17/2"` or a finite decimal such as `"1.25"`.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::parse(0, format!("not a rational number: {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, fractional)) = t.split_once('.') {
        if fractional.is_empty() || !fractional.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let f: BigInt = fractional.parse().map_err(|_| bad())?;
        let scale = num::pow(BigInt::from(10), fractional.len());
        let mag = w.abs() * &scale + f;
        let signed = if negative { -mag } else { mag };
        return Ok(Rational::new(signed, scale));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Exact text form: `"2"` for integers, `"17/2"` otherwise.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_zero_one(r: &Rational) -> bool {
    r.is_zero() || r.is_one()
}

/// `serialize_with` helpers that write rationals as exact strings.
pub mod as_string {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn seq<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut out = s.serialize_seq(Some(v.len()))?;
        for r in v {
            out.serialize_element(&r.to_string())?;
        }
        out.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_fraction_and_decimal() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse(" 17/2 ").unwrap(), frac(17, 2));
        assert_eq!(parse("1.25").unwrap(), frac(5, 4));
        assert_eq!(parse("-0.5").unwrap(), frac(-1, 2));
        assert_eq!(parse("4/6").unwrap(), frac(2, 3));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.").is_err());
    }

    #[test]
    fn formats_exactly() {
        assert_eq!(format(&frac(17, 2)), "17/2");
        assert_eq!(format(&int(8)), "8");
    }
}
