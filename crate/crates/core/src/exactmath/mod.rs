//! Exact scalar substrate: rationals, dense matrices, univariate polynomials,
//! factorization over the rationals and real root isolation.
//!
//! Nothing in this module (or anywhere in the crate) touches floating point.

mod factor;
mod matrix;
mod poly;
mod roots;

pub use factor::{factor, is_irreducible, squarefree_decomposition, Factorization, FACTOR_DEGREE_CAP};
pub(crate) use matrix::rref_rows;
pub use matrix::{dot, Inertia, QMatrix, QVector};
pub use poly::UPoly;
pub(crate) use roots::compare_root;
pub use roots::{isolate_real_roots, sign_at_root, sturm_count, RealRoot};

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;

/// Arbitrary precision rational, always stored reduced with positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn qr(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form: `a` or `a/b` with `b > 0` and `gcd(a, b) = 1`.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Parse `a` or `a/b`. Surrounding whitespace is tolerated; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Sign as -1, 0 or +1.
pub fn sign(x: &Rational) -> i32 {
    match x.cmp(&Rational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Exact square test for rationals.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_is_canonical() {
        assert_eq!(format_rational(&qr(6, -4)), "-3/2");
        assert_eq!(format_rational(&q(7)), "7");
        assert_eq!(parse_rational(" 10/4 ").unwrap(), qr(5, 2));
        assert_eq!(parse_rational("-0").unwrap(), q(0));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&qr(9, 4)), Some(qr(3, 2)));
        assert_eq!(rational_sqrt(&q(2)), None);
        assert_eq!(rational_sqrt(&q(-1)), None);
        assert_eq!(rational_sqrt(&q(0)), Some(q(0)));
    }
}
