//! Exact rational scalars and their text grammar.
//!
//! Every coefficient, norm value, and parameter in this crate is a
//! [`Rational`]. There is no floating point anywhere: equalities such as
//! "this norm is exactly `3/2`" are decidable, and the library decides them.
//!
//! Values are kept in lowest terms with a positive denominator. Integer
//! overflow aborts the process (overflow checks stay enabled in release
//! profiles) instead of wrapping, so a result that is returned is a result
//! that is exact.

use num_rational::Ratio;
use num_traits::Signed;
use thiserror::Error;

/// Exact rational scalar backed by 128-bit integers.
///
/// The numerator/denominator pair is reduced after every operation. The
/// i128 backing comfortably covers the dynamic range this crate produces
/// (denominators stay within products of the small primes appearing in the
/// inputs and in theta); inputs with denominators near 2^127 are out of
/// scope and abort loudly.
pub type Rational = Ratio<i128>;

/// Shorthand constructor used pervasively in tests and examples.
///
/// Panics if `den == 0`.
pub fn rat(num: i128, den: i128) -> Rational {
    Ratio::new(num, den)
}

/// Errors from the `p` / `p/q` text grammar.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed integer `{0}`")]
    BadInteger(String),
    #[error("denominator must be a positive integer, got `{0}`")]
    BadDenominator(String),
    #[error("rational literal `{0}` has too many `/`")]
    TooManySlashes(String),
}

/// Parses the strict grammar `p` or `p/q` with `q > 0`.
///
/// The sign, if any, belongs to the numerator; `1/-2` is rejected even
/// though it would denote a perfectly good rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let mut parts = text.split('/');
    let num_part = parts.next().expect("split yields at least one part");
    let den_part = parts.next();
    if parts.next().is_some() {
        return Err(ParseRationalError::TooManySlashes(text.to_owned()));
    }
    let num: i128 = num_part
        .parse()
        .map_err(|_| ParseRationalError::BadInteger(num_part.to_owned()))?;
    let den: i128 = match den_part {
        None => 1,
        Some(d) => {
            let den = d
                .parse()
                .map_err(|_| ParseRationalError::BadDenominator(d.to_owned()))?;
            if den <= 0 {
                return Err(ParseRationalError::BadDenominator(d.to_owned()));
            }
            den
        }
    };
    Ok(Ratio::new(num, den))
}

/// Formats a rational in the same grammar `parse_rational` accepts:
/// `3/2`, `-1/3`, integers without the slash.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Absolute value as a free function; norm code reads better with
/// `abs(&a)` than with the trait method chain.
pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// True when the value is stored in lowest terms with a positive
/// denominator. `Ratio` maintains this on every operation; the check exists
/// so tests can assert it after arbitrary arithmetic chains.
pub fn is_reduced(value: &Rational) -> bool {
    fn gcd(mut a: i128, mut b: i128) -> i128 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a.abs()
    }
    *value.denom() > 0 && gcd(*value.numer(), *value.denom()) <= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
    }

    #[test]
    fn rejects_bad_grammar() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("1/2/3").is_err());
        assert!(parse_rational("a").is_err());
    }

    #[test]
    fn format_round_trips() {
        for r in [rat(3, 2), rat(-7, 3), rat(5, 1), rat(0, 1)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn arithmetic_stays_reduced() {
        let a = rat(1, 6) + rat(1, 3);
        assert_eq!(a, rat(1, 2));
        assert!(is_reduced(&a));
        assert!(is_reduced(&(rat(2, 3) * rat(9, 4))));
        assert!(is_reduced(&(rat(5, 6) - rat(5, 6))));
    }
}
