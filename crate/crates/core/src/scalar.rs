//! Exact rational scalars.
//!
//! The coefficient field is fixed to the rationals; [`Scalar`] is an
//! arbitrary-precision fraction that is always kept in lowest terms with a
//! positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-7"` or `"3/2"`. The denominator must be positive.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("not a rational number: {text:?}") };
    match text.split_once('/') {
        None => text.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if !d.is_positive() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Signed integer power; `base` must be nonzero when `exp < 0`.
pub fn pow_i64(base: &Scalar, exp: i64) -> Scalar {
    if exp == 0 {
        return Scalar::one();
    }
    let mut acc = Scalar::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, s| acc.lcm(s.denom()))
}

pub fn is_zero(s: &Scalar) -> bool {
    s.is_zero()
}

/// Serde adapter: scalars travel as exact fraction strings such as `"3/2"`.
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_scalar(&s).map_err(de::Error::custom),
            Raw::Int(i) => Ok(int(i)),
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&format_scalar(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
            #[derive(Deserialize)]
            struct Wrap(#[serde(with = "super")] Scalar);
            let raw: Vec<Wrap> = Vec::deserialize(d)?;
            Ok(raw.into_iter().map(|w| w.0).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("3/2").unwrap(), frac(3, 2));
        assert_eq!(parse_scalar("-4/6").unwrap(), frac(-2, 3));
        assert_eq!(format_scalar(&frac(-4, 6)), "-2/3");
        assert_eq!(format_scalar(&int(0)), "0");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("1/-2").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow_i64(&frac(2, 3), -2), frac(9, 4));
        assert_eq!(pow_i64(&int(5), 0), int(1));
        assert_eq!(pow_i64(&int(-2), 5), int(-32));
    }
}
