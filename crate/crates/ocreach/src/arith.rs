//! Small integer helpers shared by the modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

/// Nonnegative remainder of `a` modulo `m` (m > 0).
pub fn modulo(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    u64::try_from(r).expect("remainder fits in u64")
}

/// Bit length of |a|, with 0 mapped to 1.
pub fn bits(a: &BigInt) -> u64 {
    a.abs().bits().max(1)
}

pub fn parse_bigint(text: &str, path: &str) -> Result<BigInt> {
    let trimmed = text.trim();
    let digits = trimmed.strip_prefix(['-', '+']).unwrap_or(trimmed);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::parse(path, format!("expected a decimal integer, found {text:?}")));
    }
    trimmed.parse::<BigInt>().map_err(|e| Error::parse(path, e.to_string()))
}

/// Reads an integer given either as a JSON number or as a decimal string.
pub fn json_bigint(v: &serde_json::Value, path: &str) -> Result<BigInt> {
    match v {
        serde_json::Value::String(s) => parse_bigint(s, path),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::parse(path, format!("expected an integer, found {n}")))
            }
        }
        other => Err(Error::parse(path, format!("expected an integer, found {other}"))),
    }
}

pub fn json_usize(v: &serde_json::Value, path: &str) -> Result<usize> {
    let b = json_bigint(v, path)?;
    usize::try_from(&b).map_err(|_| Error::parse(path, format!("expected a nonnegative index, found {b}")))
}

pub fn big_string(a: &BigInt) -> serde_json::Value {
    serde_json::Value::String(a.to_string())
}

/// Primes up to `limit` inclusive.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for n in 2..=limit {
        if out.iter().take_while(|&&p| p * p <= n).all(|&p| n % p != 0) {
            out.push(n);
        }
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// 2^e as a big integer.
pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

pub fn is_nonneg(a: &BigInt) -> bool {
    !a.is_negative()
}

pub fn max_abs<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().map(|w| w.abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_rounds_towards_the_right_infinity() {
        let b = BigInt::from(3);
        assert_eq!(floor_div(&BigInt::from(-7), &b), BigInt::from(-3));
        assert_eq!(ceil_div(&BigInt::from(-7), &b), BigInt::from(-2));
        assert_eq!(ceil_div(&BigInt::from(7), &b), BigInt::from(3));
        assert_eq!(modulo(&BigInt::from(-7), 3), 2);
    }

    #[test]
    fn decimal_strings_of_any_size_parse() {
        let s = "-123456789012345678901234567890";
        assert_eq!(parse_bigint(s, "x").unwrap().to_string(), s);
        assert!(parse_bigint("12a", "x").is_err());
        assert!(parse_bigint("", "x").is_err());
    }

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(primes_up_to(1).is_empty());
    }
}
