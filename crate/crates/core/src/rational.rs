//! Exact rational arithmetic helpers.
//!
//! Every probability, expectation and cost in this crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in lowest terms with
//! a positive denominator (both guaranteed by `num_rational::Ratio`).
//! Arithmetic on chains is exact end to end; floating point only appears
//! in Monte Carlo estimates and tolerance reporting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds `numer / denom` from machine integers.
///
/// Panics if `denom == 0`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses a rational from text: a fraction `a/b`, an integer, or a
/// terminating decimal such as `0.25`.
///
/// Decimals convert exactly (`0.1` becomes `1/10`); no binary floating
/// point is involved. Returns `None` on malformed input or a zero
/// denominator.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((numer, denom)) = text.split_once('/') {
        let numer: BigInt = numer.parse().ok()?;
        let denom: BigInt = denom.parse().ok()?;
        if denom.is_zero() {
            return None;
        }
        return Some(Rational::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        // Exact decimal: a.b = (a*10^k + b) / 10^k with the sign applied
        // to the whole value.
        let (negative, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int_part),
        };
        if int_digits.is_empty() || frac_part.is_empty() {
            return None;
        }
        if !int_digits.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return None;
        }
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let int_val: BigInt = int_digits.parse().ok()?;
        let frac_val: BigInt = frac_part.parse().ok()?;
        let mut numer = int_val * &scale + frac_val;
        if negative {
            numer = -numer;
        }
        return Some(Rational::new(numer, scale));
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Renders a rational as an exact decimal string with at most `sig`
/// significant digits, rounding half-up and trimming trailing zeros.
///
/// Exact values shorter than the budget print in full: `1/2` gives
/// `"0.5"`, `2` gives `"2"`, `1/3` with `sig = 12` gives
/// `"0.333333333333"`. Computed by integer long division, so the output
/// never depends on binary floating point.
pub fn decimal_string(value: &Rational, sig: u32) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let numer = value.numer().abs();
    let denom = value.denom().clone();

    let int_part = &numer / &denom;
    let int_digits = if int_part.is_zero() {
        0
    } else {
        int_part.to_string().len() as u32
    };

    // Number of fractional digits needed to retain `sig` significant ones.
    let frac_digits = if int_digits > 0 {
        sig.saturating_sub(int_digits)
    } else {
        // Leading zeros after the point do not count as significant.
        let mut zeros = 0u32;
        let mut scaled = numer.clone() * 10;
        while scaled < denom {
            zeros += 1;
            scaled *= 10;
        }
        zeros + sig
    };

    let scale = BigInt::from(10u32).pow(frac_digits);
    let scaled_numer = &numer * &scale;
    let mut quot = &scaled_numer / &denom;
    let rem = &scaled_numer % &denom;
    if &rem * 2 >= denom {
        quot += 1;
    }

    let digits = quot.to_string();
    let frac_digits = frac_digits as usize;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if digits.len() > frac_digits {
        out.push_str(&digits[..digits.len() - frac_digits]);
    } else {
        out.push('0');
    }
    if frac_digits > 0 {
        let mut frac = "0".repeat(frac_digits.saturating_sub(digits.len()));
        frac.push_str(&digits[digits.len().saturating_sub(frac_digits)..]);
        while frac.ends_with('0') {
            frac.pop();
        }
        if !frac.is_empty() {
            out.push('.');
            out.push_str(&frac);
        }
    }
    out
}

/// Lossy conversion for reporting; exact values stay rational.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// The rational constant one.
pub fn one() -> Rational {
    Rational::one()
}

/// The rational constant zero.
pub fn zero() -> Rational {
    Rational::zero()
}
