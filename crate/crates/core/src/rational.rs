//! Rational helpers and the `"p/q"` string encoding used in JSON output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(xs: &[i64]) -> Vec<Q> {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    s.parse::<Q>()
        .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
}

/// Parses `"1/2,0;1/3,1/3"` into vectors: `;` separates vectors, `,` entries.
pub fn parse_q_vectors(s: &str) -> Result<Vec<Vec<Q>>> {
    s.split(';')
        .map(|v| v.split(',').map(parse_q).collect::<Result<Vec<_>>>())
        .collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Joins signed terms as `a + b - c`.
pub(crate) fn join_signed<'a>(terms: impl IntoIterator<Item = (&'a Q, String)>) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub mod serde_q {
    //! Serde adapters writing rationals as strings.
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(de::Error::custom)
    }

    pub mod vec_vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            xs: &[Vec<Q>],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for v in xs {
                let strs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                seq.serialize_element(&strs)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
            let raw: Vec<Vec<String>> = Vec::deserialize(d)?;
            raw.iter()
                .map(|v| v.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
                .map_err(de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vectors() {
        let v = parse_q_vectors("1/2, 0; 1/3,1/3").unwrap();
        assert_eq!(v, vec![vec![frac(1, 2), q(0)], vec![frac(1, 3), frac(1, 3)]]);
        assert!(parse_q_vectors("1/2;x").is_err());
    }

    #[test]
    fn signed_join() {
        let (a, b) = (q(1), q(-2));
        assert_eq!(join_signed([(&a, "y".into()), (&b, "2q".into())]), "y - 2q");
        assert_eq!(join_signed([(&b, "2q".into())]), "-2q");
    }
}
