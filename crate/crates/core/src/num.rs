//! Exact rational numbers used for interval bounds, scale factors and
//! percentages.

use alloc::format;
use alloc::string::String;

use num_traits::{One, Zero};

pub type Rational = num_rational::Ratio<i64>;

/// Parses `12`, `1.2` or `2/3` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    if let Some((num, den)) = text.split_once('/') {
        let n: i64 = num.parse().ok()?;
        let d: i64 = den.parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if int.is_empty() || frac.is_empty() || frac.len() > 12 {
            return None;
        }
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let i: i64 = int.parse().ok()?;
        let f: i64 = frac.parse().ok()?;
        let n = i.checked_mul(scale)?.checked_add(f)?;
        return Some(Rational::new(n, scale));
    }
    text.parse::<i64>().ok().map(Rational::from_integer)
}

/// Formats a rational so that [`parse_rational`] reads it back exactly:
/// integers plainly, terminating fractions as decimals, the rest as `n/d`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return format!("{}", r.numer());
    }
    let mut den = *r.denom();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 || twos.max(fives) > 12 {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let digits = twos.max(fives);
    let scale = 10i64.pow(digits);
    let scaled = r * Rational::from_integer(scale);
    let n = scaled.to_integer();
    let sign = if n < 0 { "-" } else { "" };
    let n = n.abs();
    let int = n / scale;
    let frac = n % scale;
    format!("{sign}{int}.{frac:0width$}", width = digits as usize)
}

/// Formats a fraction in `[0, 1]` as a percent literal (`0.8` -> `80%`).
pub fn format_percent(r: &Rational) -> String {
    format!("{}%", format_rational(&(r * Rational::from_integer(100))))
}

pub fn is_unit_interval(r: &Rational) -> bool {
    *r >= Rational::zero() && *r <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_fraction() {
        assert_eq!(parse_rational("1.2"), Some(Rational::new(6, 5)));
        assert_eq!(parse_rational("2/3"), Some(Rational::new(2, 3)));
        assert_eq!(parse_rational("30"), Some(Rational::from_integer(30)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn formats_round_trip() {
        for r in [
            Rational::new(6, 5),
            Rational::new(2, 3),
            Rational::from_integer(36),
            Rational::new(1, 8),
            Rational::new(4, 5),
        ] {
            assert_eq!(parse_rational(&format_rational(&r)), Some(r));
        }
        assert_eq!(format_rational(&Rational::new(6, 5)), "1.2");
        assert_eq!(format_percent(&Rational::new(4, 5)), "80%");
    }
}
