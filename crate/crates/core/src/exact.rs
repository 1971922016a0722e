//! Exact-rational helpers and the `"p/q"` string encoding used by every JSON
//! surface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn big(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `"p/q"` in lowest terms; integers keep the `/1`.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"p"` or `"p/q"` with optional sign on `p`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(if q.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// `q * 2^-shift` as a float, without forming the scaled rational. Stays finite
/// whenever the result is in range, even when `q` itself is not.
pub fn to_f64_scaled(q: &BigRational, shift: i64) -> f64 {
    fn top(x: &BigInt) -> (f64, i64) {
        let drop = x.bits().saturating_sub(64);
        ((x >> drop).to_f64().unwrap_or(0.0), drop as i64)
    }
    if q.is_zero() {
        return 0.0;
    }
    let (mn, en) = top(q.numer());
    let (md, ed) = top(q.denom());
    let e = (en - ed - shift).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    // Split the power so neither factor overflows on its own.
    let half = e / 2;
    mn / md * 2f64.powi(half) * 2f64.powi(e - half)
}

/// Exact sum with a single normalization at the end.
pub fn sum<'a>(items: impl IntoIterator<Item = &'a BigRational>) -> BigRational {
    sum_owned(
        items
            .into_iter()
            .map(|q| (q.numer().clone(), q.denom().clone())),
    )
}

/// Exact `sum q^2`.
pub fn sum_squares<'a>(items: impl IntoIterator<Item = &'a BigRational>) -> BigRational {
    sum_owned(
        items
            .into_iter()
            .map(|q| (q.numer() * q.numer(), q.denom() * q.denom())),
    )
}

/// Exact `sum |q|`.
pub fn sum_abs<'a>(items: impl IntoIterator<Item = &'a BigRational>) -> BigRational {
    sum_owned(
        items
            .into_iter()
            .map(|q| (q.numer().abs(), q.denom().clone())),
    )
}

fn sum_owned(items: impl Iterator<Item = (BigInt, BigInt)>) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (n, d) in items {
        if d == den {
            num += n;
        } else if d.is_one() {
            num += n * &den;
        } else {
            num = num * &d + n * &den;
            den *= d;
        }
    }
    BigRational::new(num, den)
}

pub fn sqrt_f64(q: &BigRational) -> f64 {
    to_f64(q).sqrt()
}

pub fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Human rendering: integers verbatim, everything else as an approximate decimal.
pub fn display(q: &BigRational) -> String {
    if is_integer(q) {
        q.numer().to_string()
    } else {
        format!("≈{}", to_f64(q))
    }
}

/// serde adapter for a `BigRational` stored as `"p/q"`.
pub mod rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod opt_rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        q: &Option<BigRational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub mod matrix_str {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        rows: &[Vec<BigRational>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for row in rows {
            let row: Vec<String> = row.iter().map(format_rational).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<BigRational>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub mod bigint_vec_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}
