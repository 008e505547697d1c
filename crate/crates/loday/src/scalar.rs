//! Exact scalar arithmetic over the rationals.
//!
//! Scalars are arbitrary-precision rationals kept in lowest terms with a
//! positive denominator.  No floating point appears anywhere in the crate;
//! a verified identity is an identity of rationals.

use num::{BigInt, BigRational, One, Signed, Zero};

/// The ground field: exact rationals.
pub type Scalar = BigRational;

/// Scalar from a machine integer.
pub fn from_int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Scalar from a numerator/denominator pair. Panics on zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `(-1)^exponent` as a scalar, for Koszul-sign bookkeeping.
pub fn sign_pow(exponent: i64) -> Scalar {
    if exponent.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// True parity of an integer degree (odd => true).
pub fn odd(degree: i64) -> bool {
    degree.rem_euclid(2) == 1
}

pub fn is_zero(s: &Scalar) -> bool {
    s.is_zero()
}

/// Parses `p/q` or `p`. The parsed value is normalized by construction.
pub fn parse(text: &str) -> Option<Scalar> {
    let t = text.trim();
    let r: BigRational = t.parse().ok()?;
    Some(r)
}

/// Canonical rendering: `p` for integers, `p/q` otherwise, `q > 0`.
pub fn render(s: &Scalar) -> String {
    debug_assert!(s.denom().is_positive());
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let s = ratio(4, -6);
        assert_eq!(render(&s), "-2/3");
        let t = ratio(-4, -6);
        assert_eq!(render(&t), "2/3");
    }

    #[test]
    fn parse_roundtrip() {
        for text in ["3/4", "-7", "0", "-12/5"] {
            let s = parse(text).unwrap();
            assert_eq!(render(&s), text);
        }
        assert!(parse("1.5").is_none());
        assert!(parse("a/b").is_none());
    }

    #[test]
    fn sign_pow_parity() {
        assert_eq!(sign_pow(0), from_int(1));
        assert_eq!(sign_pow(3), from_int(-1));
        assert_eq!(sign_pow(-1), from_int(-1));
        assert_eq!(sign_pow(-2), from_int(1));
    }
}
