//! Direct series summation cross-checks.
//!
//! The exact solver owns the closed-form answers; this module recomputes
//! two of them by summing the underlying probability series in floating
//! point with an explicit tolerance, plus the exact expected value of the
//! doubling-stakes coin lottery truncated at a maximum number of tosses.

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("tolerance must be positive (got {0})")]
    NonPositiveTolerance(f64),
    #[error("start position must be 1 or 2 (got {0})")]
    BadStartPosition(u32),
    #[error("toss limit must be at least 1")]
    NonPositiveTosses,
}

/// Result of summing the two-position walk's series directly.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSums {
    /// Partial sum for the probability of absorbing at the right end.
    pub p_right: f64,
    /// Partial sum for the expected number of steps to absorption.
    pub mean_steps: f64,
    /// Total number of terms accumulated across both sums.
    pub terms_used: usize,
}

/// Sums the absorption series of the symmetric walk on two interior
/// positions between absorbing ends (the `gamblers_ruin(1, 2)` chain).
///
/// From position 1 the walk can only be absorbed right on even steps,
/// from position 2 only on odd steps, so
/// `p_right = sum (1/2)^(2k)` or `sum (1/2)^(2k-1)`, and the expected
/// step count is `sum n * (1/2)^n` from either position. Terms are added
/// while they are `>= tol`; partial sums are monotone and approach the
/// exact values 1/3 (or 2/3) and 2 from below.
pub fn short_walk_series(start: u32, tol: f64) -> Result<SeriesSums, SeriesError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(SeriesError::NonPositiveTolerance(tol));
    }
    let odd_steps = match start {
        1 => false,
        2 => true,
        other => return Err(SeriesError::BadStartPosition(other)),
    };

    let mut terms_used = 0usize;

    let mut p_right = 0.0f64;
    let mut exponent: u32 = if odd_steps { 1 } else { 2 };
    loop {
        let term = 0.5f64.powi(exponent as i32);
        if term < tol {
            break;
        }
        p_right += term;
        terms_used += 1;
        exponent += 2;
    }

    let mut mean_steps = 0.0f64;
    let mut n: u32 = 1;
    loop {
        let term = f64::from(n) * 0.5f64.powi(n as i32);
        if term < tol {
            break;
        }
        mean_steps += term;
        terms_used += 1;
        n += 1;
    }

    Ok(SeriesSums {
        p_right,
        mean_steps,
        terms_used,
    })
}

/// Exact expected payoff of the doubling-stakes coin lottery truncated at
/// `max_tosses`: the player wins `2^(t-1)` when the first head appears on
/// toss `t <= max_tosses`, and nothing if no head appears.
///
/// The sum `sum_{t=1..m} 2^-t * 2^(t-1)` collapses to `m/2`, so the
/// truncated expectation grows without bound as the truncation is lifted;
/// there is deliberately no unbounded mode.
pub fn truncated_lottery_ev(max_tosses: u32) -> Result<Rational, SeriesError> {
    if max_tosses < 1 {
        return Err(SeriesError::NonPositiveTosses);
    }
    let mut ev = Rational::from_integer(0.into());
    for t in 1..=max_tosses {
        // P(first head at toss t) * payoff 2^(t-1) = 2^-t * 2^(t-1).
        let p = Rational::new(1.into(), num_bigint::BigInt::from(2u8).pow(t));
        let payoff = Rational::from_integer(num_bigint::BigInt::from(2u8).pow(t - 1));
        ev += p * payoff;
    }
    Ok(ev)
}
