//! Exact rationals with the canonical reductions used for `Q/Z` and `Q/2Z` values.

use num_integer::Integer;
use num_rational::Ratio;

pub type Rational = Ratio<i64>;

/// Representative in `[0, m)` of `r` modulo the integer `m`.
pub fn reduce_mod(r: Rational, m: i64) -> Rational {
    let den = *r.denom();
    let modulus = m * den;
    Rational::new(r.numer().rem_euclid(modulus), den)
}

/// `r mod 1` in `[0, 1)`.
pub fn mod1(r: Rational) -> Rational {
    reduce_mod(r, 1)
}

/// `r mod 2` in `[0, 2)`.
pub fn mod2(r: Rational) -> Rational {
    reduce_mod(r, 2)
}

/// Fraction string, `"0"`, `"3"` or `"1/3"`.
pub fn frac_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the output of [`frac_string`].
pub fn parse_frac(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            let n: i64 = n.trim().parse().ok()?;
            (d != 0).then(|| Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Least common multiple of a list of positive integers.
pub fn lcm_all(xs: impl IntoIterator<Item = u64>) -> u64 {
    xs.into_iter().fold(1, |acc, x| acc.lcm(&x))
}

pub mod serde_frac {
    //! `serde(with = ...)` helpers that write rationals as fraction strings.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&frac_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_frac(&s).ok_or_else(|| serde::de::Error::custom(format!("bad fraction {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reductions() {
        assert_eq!(mod2(Rational::new(-1, 4)), Rational::new(7, 4));
        assert_eq!(mod1(Rational::new(-1, 3)), Rational::new(2, 3));
        assert_eq!(mod2(Rational::from_integer(3)), Rational::from_integer(1));
        assert_eq!(frac_string(&Rational::new(2, 6)), "1/3");
        assert_eq!(frac_string(&Rational::from_integer(0)), "0");
        assert_eq!(parse_frac("7/4"), Some(Rational::new(7, 4)));
        assert_eq!(parse_frac("x"), None);
    }
}
