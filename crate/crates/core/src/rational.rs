//! Exact rational scalars and their canonical text form.
//!
//! Every file format in this crate writes rationals as `"p/q"` (or `"p"` when
//! the denominator is 1), with `p` and `q` in decimal and `q > 0`. Values are
//! always kept in lowest terms; `num_rational::BigRational` maintains both
//! invariants for us.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`. Panics on `d == 0`; intended for literals.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|e| Error::parse(format!("bad integer {s:?}: {e}")))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_bigint(s)?)),
        Some((num, den)) => {
            let n = parse_bigint(num)?;
            let d = parse_bigint(den)?;
            if d == BigInt::from(0) {
                return Err(Error::parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational_vec(tokens: &[String]) -> Result<Vec<Rational>> {
    tokens.iter().map(|t| parse_rational(t)).collect()
}

pub fn format_rational_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}
