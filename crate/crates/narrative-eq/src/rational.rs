//! Exact rational arithmetic helpers.
//!
//! Every quantity the solver reasons about (posterior means, likelihoods,
//! biases, incentive thresholds) is a rational number, so all comparisons are
//! exact and no tolerances are needed outside the smooth ambiguity rule.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Shorthand for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Parses `"num/den"` or a bare integer. Denominator must be positive after
/// normalization; `num-rational` keeps values in lowest terms.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Formats as `"num/den"`, or just `"num"` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Exact rational from a finite float (every finite f64 is dyadic).
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Numeric(format!("non-finite value {x}")))
}

/// Decimal rendering rounded to `digits` places, for convenience columns.
pub fn rat_to_decimal(r: &Rat, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * Rat::from_integer(scale.clone())).round();
    let num = scaled.to_integer();
    let sign = if num.is_negative() { "-" } else { "" };
    let abs = num.abs();
    let whole = &abs / &scale;
    let frac = &abs % &scale;
    format!("{sign}{whole}.{frac:0width$}", width = digits as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(format_rat(&parse_rat("3/6").unwrap()), "1/2");
        assert_eq!(format_rat(&parse_rat("-4/2").unwrap()), "-2");
        assert_eq!(format_rat(&parse_rat("7").unwrap()), "7");
        assert_eq!(format_rat(&parse_rat("2/-4").unwrap()), "-1/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
        assert!(parse_rat("1.5").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rat_to_decimal(&rat(1, 30), 12), "0.033333333333");
        assert_eq!(rat_to_decimal(&rat(5, 24), 6), "0.208333");
        assert_eq!(rat_to_decimal(&rat(-1, 4), 3), "-0.250");
    }

    proptest! {
        #[test]
        fn round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rat(n, d);
            let back = parse_rat(&format_rat(&r)).unwrap();
            prop_assert_eq!(r, back);
        }
    }
}
