//! Exact rational scalars and their text forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseRationalError;

/// Exact rational number used for every structural computation.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators overflow the direct conversion.
        let num = value.numer().to_f64().unwrap_or(f64::INFINITY);
        let den = value.denom().to_f64().unwrap_or(f64::INFINITY);
        num / den
    })
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"0.25"` / `"1e-3"`.
pub fn parse_q(text: &str) -> Result<Q, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError(text.to_string()));
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRationalError(text.to_string()))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRationalError(text.to_string()))?;
        if den.is_zero() {
            return Err(ParseRationalError(text.to_string()));
        }
        return Ok(Q::new(num, den));
    }
    parse_decimal(text).ok_or_else(|| ParseRationalError(text.to_string()))
}

fn parse_decimal(text: &str) -> Option<Q> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Q::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Q::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    if negative {
        value = -value;
    }
    Some(value)
}

/// `"p/q"` or `"p"` when the denominator is one.
pub fn format_q(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Rational approximation of a positive float keeping `digits` significant decimal digits.
pub fn q_from_f64_sig(value: f64, digits: u32) -> Q {
    assert!(
        value.is_finite() && value > 0.0,
        "value must be positive and finite"
    );
    let magnitude = value.log10().floor() as i32;
    let scale = digits as i32 - 1 - magnitude;
    let ten = BigInt::from(10);
    if scale >= 0 {
        let den = num_traits::pow(ten, scale as usize);
        let num = (value * 10f64.powi(scale)).round() as i64;
        Q::new(BigInt::from(num.max(1)), den)
    } else {
        let factor = num_traits::pow(ten, (-scale) as usize);
        let num = (value / 10f64.powi(-scale)).round() as i64;
        Q::from_integer(BigInt::from(num.max(1)) * factor)
    }
}

/// Exact `k`-th root of a positive rational when one exists.
pub fn exact_root(value: &Q, k: u32) -> Option<Q> {
    if !value.is_positive() || k == 0 {
        return None;
    }
    let num = value.numer().nth_root(k);
    let den = value.denom().nth_root(k);
    let candidate = Q::new(num, den);
    if num_traits::pow(candidate.clone(), k as usize) == *value {
        Some(candidate)
    } else {
        None
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn abs(value: &Q) -> Q {
    value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("1/32").unwrap(), q_frac(1, 32));
        assert_eq!(parse_q("0.25").unwrap(), q_frac(1, 4));
        assert_eq!(parse_q("3").unwrap(), q(3));
        assert_eq!(parse_q("1e-2").unwrap(), q_frac(1, 100));
        assert_eq!(parse_q("-2.5").unwrap(), q_frac(-5, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q(".").is_err());
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_q(&q(7)), "7");
        assert_eq!(format_q(&q_frac(-3, 6)), "-1/2");
    }

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(q_from_f64_sig(0.0123456789, 6), q_frac(123457, 10_000_000));
        assert_eq!(q_from_f64_sig(42.0, 6), q(42));
        assert_eq!(q_from_f64_sig(1.5e7, 3), q(15_000_000));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_root(&q_frac(9, 4), 2), Some(q_frac(3, 2)));
        assert_eq!(exact_root(&q(2), 2), None);
        assert_eq!(exact_root(&q(-1), 1), None);
    }
}
