//! Exact rational scalars.
//!
//! Every formula in the crate evaluates over `Rat`, an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. The wire format
//! is the string `"num/den"`; bare integers are accepted on input.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Arbitrary-precision rational. Lowest terms and positive denominator are
/// maintained by the underlying representation.
pub type Rat = BigRational;

/// The rational `n`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The rational `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical string form `"num/den"`, always carrying the denominator
/// (integers render as `"n/1"` so that output re-parses bit-identically).
pub fn rat_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"a/b"`, `"a"`, or `"-a/b"`; normalizes sign and lowest terms.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidRational(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::InvalidRational(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::InvalidRational(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// `r^e` for a possibly negative exponent. Panics when asked for a negative
/// power of zero.
pub fn rat_pow(r: &Rat, e: i64) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    if r.is_zero() {
        assert!(e > 0, "negative power of zero");
        return Rat::zero();
    }
    let abs = e.unsigned_abs() as u32;
    let n = num_traits::pow::pow(r.numer().clone(), abs as usize);
    let d = num_traits::pow::pow(r.denom().clone(), abs as usize);
    if e > 0 {
        Rat::new(n, d)
    } else {
        Rat::new(d, n)
    }
}

/// True when `|r| < 1`.
pub fn abs_lt_one(r: &Rat) -> bool {
    r.abs() < Rat::one()
}

/// True when `0 < r < 1`.
pub fn in_open_unit_interval(r: &Rat) -> bool {
    r.is_positive() && *r < Rat::one()
}

/// Nonnegative-integer extraction, for quantities that group theory forces
/// to be counting numbers.
pub fn rat_to_biguint(r: &Rat) -> Result<BigUint> {
    if !r.is_integer() || r.is_negative() {
        return Err(Error::InternalInconsistency(format!(
            "expected a nonnegative integer, got {}",
            rat_string(r)
        )));
    }
    Ok(r.to_integer()
        .to_biguint()
        .expect("nonnegative integer converts"))
}

/// Decimal preview with `digits` digits after the point, correctly rounded
/// toward zero. Display-only; never feeds back into computation.
pub fn rat_decimal(r: &Rat, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (abs * Rat::from_integer(scale.clone())).to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>width$}", width = digits)
    }
}

/// Crude f64 view for statistical thresholds in reports. Not used in any
/// exact computation.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: rationals as `"num/den"` strings.
pub mod rat_serde {
    use super::{parse_rat, rat_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rat_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod rat_vec_serde {
    use super::{parse_rat, rat_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rat_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Option<Rat>`.
pub mod rat_opt_serde {
    use super::{parse_rat, rat_string, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&rat_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rat>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rat(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["1/2", "-3/7", "0/1", "12345678901234567890/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_string(&r), s);
        }
    }

    #[test]
    fn parse_accepts_bare_integers_and_normalizes() {
        assert_eq!(rat_string(&parse_rat("5").unwrap()), "5/1");
        assert_eq!(rat_string(&parse_rat("6/4").unwrap()), "3/2");
        assert_eq!(rat_string(&parse_rat("1/-2").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let half = rat(1, 2);
        assert_eq!(rat_pow(&half, 3), rat(1, 8));
        assert_eq!(rat_pow(&half, -2), rat_int(4));
        assert_eq!(rat_pow(&half, 0), rat_int(1));
    }

    #[test]
    fn decimal_preview() {
        assert_eq!(rat_decimal(&rat(1, 2), 3), "0.500");
        assert_eq!(rat_decimal(&rat(-1, 3), 4), "-0.3333");
        assert_eq!(rat_decimal(&rat(21, 64), 6), "0.328125");
    }
}
