//! Exact rational weights.
//!
//! Weights are `Ratio<i64>` values kept in lowest terms by `num-rational`.
//! Text form is `"p"` for integers and `"p/q"` otherwise.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::Error;

pub type Rational = Ratio<i64>;

/// `max(0, r)`.
pub fn positive_part(r: Rational) -> Rational {
    if r.is_positive() {
        r
    } else {
        Rational::zero()
    }
}

/// Canonical text form: integers print without a denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `"7"`, `"-7"`, `"p/q"` or a plain decimal such as `"-1.25"`.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = int_part.trim_start_matches(['-', '+']);
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
        let scale = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
        let frac: i64 = frac_part.parse().map_err(|_| bad())?;
        let magnitude = whole
            .checked_mul(scale)
            .and_then(|w| w.checked_add(frac))
            .ok_or_else(bad)?;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    if s.contains(['e', 'E']) {
        return Err(bad());
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// Serde adapter writing a rational in its canonical text form.
pub mod as_text {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }
}

/// Least common multiple of the denominators (1 for an empty input).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values.into_iter().fold(1i64, |acc, r| acc.lcm(r.denom()))
}

/// Scales `r` by `scale` and returns the integer numerator, or `None` when
/// the product is not integral or overflows.
pub fn scaled_integer(r: &Rational, scale: i64) -> Option<i64> {
    let (q, rem) = scale.div_rem(r.denom());
    if !rem.is_zero() {
        return None;
    }
    r.numer().checked_mul(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_text_forms() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational("-3").unwrap(), Rational::from_integer(-3));
        assert_eq!(parse_rational("6/4").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), Rational::new(-5, 4));
        assert_eq!(parse_rational("0.1").unwrap(), Rational::new(1, 10));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e5").is_err());
    }

    #[test]
    fn lowest_terms_and_format() {
        let r = Rational::new(4, -6);
        assert_eq!(*r.numer(), -2);
        assert_eq!(*r.denom(), 3);
        assert_eq!(format_rational(&r), "-2/3");
        assert_eq!(format_rational(&Rational::from_integer(9)), "9");
    }

    #[test]
    fn scaling() {
        let vals = [Rational::new(1, 3), Rational::new(5, 2), Rational::from_integer(4)];
        let l = common_denominator(&vals);
        assert_eq!(l, 6);
        assert_eq!(scaled_integer(&vals[0], l), Some(2));
        assert_eq!(scaled_integer(&vals[1], l), Some(15));
        assert_eq!(scaled_integer(&Rational::new(1, 7), l), None);
        assert_eq!(positive_part(Rational::from_integer(-2)), Rational::zero());
    }
}
