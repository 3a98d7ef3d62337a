//! Exact rational arithmetic helpers.
//!
//! Probabilities are stored as `f64` for all numeric work, but feasibility
//! decisions (signs of determinant-like quantities, linear-program pivots)
//! must not depend on rounding. Datasets therefore carry an exact rational
//! mirror of every probability: decimal strings from files parse exactly,
//! and in-memory floats convert via their exact binary expansion.

use num_bigint::BigInt;
use num_traits::{pow, One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

/// Parses a decimal literal (`0.25`, `-1.5e-3`, `7`) into the exact rational
/// it denotes. No rounding: `0.1` becomes 1/10, not the nearest double.
pub fn parse_decimal(text: &str) -> Result<Rat> {
    let err = || Error::ParseDecimal {
        text: text.to_owned(),
    };
    let s = text.trim();
    let (s, sign) = match s.strip_prefix('-') {
        Some(rest) => (rest, -1),
        None => (s.strip_prefix('+').unwrap_or(s), 1),
    };
    // Split off an exponent part, if any.
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| err())?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rat::from_integer(digits * pow(ten, scale as usize))
    } else {
        Rat::new(digits, pow(ten, (-scale) as usize))
    };
    Ok(if sign < 0 { -value } else { value })
}

/// Exact rational value of a finite float (its binary expansion).
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float expected")
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational within f64 range")
}

/// Renders `r` as an exact decimal string if its reduced denominator is of
/// the form 2^a·5^b (i.e. the expansion terminates), otherwise `None`.
pub fn decimal_string(r: &Rat) -> Option<String> {
    let mut denom = r.denom().abs();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    // value = scaled / 10^digits with scaled an integer.
    let scaled = (r * Rat::from_integer(pow(BigInt::from(10), digits as usize))).to_integer();
    let neg = scaled.is_negative();
    let mut body = scaled.abs().to_string();
    if digits > 0 {
        let k = digits as usize;
        if body.len() <= k {
            body = format!("0{}", "0".repeat(k - body.len())) + &body;
            // ensure at least one integer digit before inserting the point
        }
        body.insert(body.len() - k, '.');
        // trim trailing zeros but keep at least one fractional digit
        while body.ends_with('0') && !body.ends_with(".0") {
            body.pop();
        }
    }
    Some(if neg { format!("-{body}") } else { body })
}

/// Best textual form for a probability: exact decimal when one exists,
/// shortest round-tripping float otherwise.
pub fn render_prob(r: &Rat) -> String {
    decimal_string(r).unwrap_or_else(|| format!("{}", rat_to_f64(r)))
}
