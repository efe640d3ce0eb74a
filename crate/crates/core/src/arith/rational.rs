use std::str::FromStr;

use num::BigInt;

use super::ArithError;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = num::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Parses `p` or `p/q`. Rejects empty parts, zero denominators, whitespace
/// and anything that is not an optionally signed integer.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    Rational::from_str(s).map_err(|_| ArithError::InvalidRational(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{One, Zero};

    #[test]
    fn reduced_with_positive_denominator() {
        let x = rat(2, -4);
        assert_eq!(x, rat(-1, 2));
        assert_eq!(x.to_string(), "-1/2");
        assert_eq!(rat(6, 3).to_string(), "2");
    }

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1/0", "1.5", "a", "1/ 2", " 1", "2/3/4", "1e3"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn field_ops_are_exact() {
        let a = rat(1, 3);
        let b = rat(1, 6);
        assert_eq!(&a + &b, rat(1, 2));
        assert_eq!(&a - &a, Rational::zero());
        assert_eq!(&a * &b.recip(), rat_int(2));
        assert!((&a / &a).is_one());
    }
}
