//! Exact number helpers shared by every module.
//!
//! Rationals are serialized as `"num/den"` strings (integers without a
//! denominator), which is also the format `BigRational` uses for `Display`
//! and `FromStr`.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn factorial_int(n: usize) -> BigInt {
    BigInt::from(factorial(n))
}

/// Sum of the k-th powers of the divisors of n.
pub fn divisor_sigma(k: u32, n: u64) -> BigInt {
    let mut total = BigInt::zero();
    for m in 1..=n {
        if n.is_multiple_of(m) {
            total += BigInt::from(m).pow(k);
        }
    }
    total
}

pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

pub fn parse(s: &str) -> Option<Rational> {
    s.trim().parse::<Rational>().ok()
}

/// `serde(with = ...)` adapter storing a rational as a string.
pub mod rational_str {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}")))
    }
}

/// Same as [`rational_str`] for a vector of rationals.
pub mod rational_vec {
    use super::Rational;
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| super::parse(s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}"))))
            .collect()
    }
}

/// Vector-of-vectors variant used by genus tables.
pub mod rational_matrix {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Vec<String>> = m.iter().map(|row| row.iter().map(|r| r.to_string()).collect()).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|row| {
                row.iter()
                    .map(|s| super::parse(s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}"))))
                    .collect()
            })
            .collect()
    }
}
