//! JSON representations for exact numbers.
//!
//! Integers that fit an `i64` are written as JSON numbers, anything larger
//! as a decimal string. Rationals are written as `"p/q"` strings unless they
//! are integral.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntRepr {
    Small(i64),
    Text(String),
}

impl From<&BigInt> for IntRepr {
    fn from(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => IntRepr::Small(s),
            None => IntRepr::Text(v.to_string()),
        }
    }
}

impl TryFrom<IntRepr> for BigInt {
    type Error = String;

    fn try_from(r: IntRepr) -> Result<Self, String> {
        match r {
            IntRepr::Small(v) => Ok(BigInt::from(v)),
            IntRepr::Text(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|e| format!("bad integer {s:?}: {e}")),
        }
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| format!("bad rational {text:?}: {e}"))?;
            let d: BigInt = d.trim().parse().map_err(|e| format!("bad rational {text:?}: {e}"))?;
            if d == BigInt::from(0) {
                return Err(format!("zero denominator in {text:?}"));
            }
            Ok(BigRational::new(n, d))
        }
        None => text
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|e| format!("bad rational {text:?}: {e}")),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatRepr {
    Small(i64),
    Text(String),
}

impl From<&BigRational> for RatRepr {
    fn from(q: &BigRational) -> Self {
        if q.denom().is_one() {
            if let Some(v) = q.numer().to_i64() {
                return RatRepr::Small(v);
            }
        }
        RatRepr::Text(format_rational(q))
    }
}

impl TryFrom<RatRepr> for BigRational {
    type Error = String;

    fn try_from(r: RatRepr) -> Result<Self, String> {
        match r {
            RatRepr::Small(v) => Ok(BigRational::from_integer(BigInt::from(v))),
            RatRepr::Text(s) => parse_rational(&s),
        }
    }
}

/// `#[serde(with = "crate::serde_int::bigint")]`
pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        IntRepr::from(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        BigInt::try_from(IntRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "crate::serde_int::bigint_vec")]`
pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(IntRepr::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntRepr>::deserialize(d)?
            .into_iter()
            .map(BigInt::try_from)
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "crate::serde_int::bigint_vecs")]`
pub mod bigint_vecs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(IntRepr::from).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<IntRepr>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::try_from).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}
