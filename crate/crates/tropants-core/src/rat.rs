//! Arbitrary-precision rationals and their `"p/q"` string form.
//!
//! [`Rat`] is kept normalized by construction: positive denominator, reduced
//! fraction. Fixture files and reports serialize rationals as strings
//! `"p"` or `"p/q"`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Renders `p/q`, or just `p` for integers.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn rat_from_str(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let mk_err = || Error::Parse(format!("invalid rational literal {s:?}"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| mk_err())?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| mk_err())?;
            let q: BigInt = q.trim().parse().map_err(|_| mk_err())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Floor of a rational as a `BigInt`.
pub fn rat_floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// True if `r` is an integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// f64 approximation, for the floating-point chord routines only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let p = r.numer();
    let q = r.denom();
    // Good enough for desk-scale magnitudes; exact code never calls this.
    let pf: f64 = p.to_string().parse().unwrap_or(if p.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    let qf: f64 = q.to_string().parse().unwrap_or(f64::INFINITY);
    pf / qf
}

/// Serde adapters for `Rat` as `"p/q"` strings.
pub mod rat_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        rat_from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapters for `Vec<Rat>`.
pub mod rat_vec_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rat_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| rat_from_str(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapters for `Vec<Vec<Rat>>`.
pub mod rat_mat_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            v.iter()
                .map(|row| row.iter().map(rat_to_string).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|s| rat_from_str(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["3", "-7", "1/2", "-22/7"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert_eq!(rat_to_string(&rat_from_str("4/2").unwrap()), "2");
        assert_eq!(rat_to_string(&rat_from_str("2/-4").unwrap()), "-1/2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(rat_from_str("").is_err());
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("a/b").is_err());
    }
}
