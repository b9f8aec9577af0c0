//! Exact sampling of one chain step from its rational row distribution.
//!
//! A 64-bit draw `u` stands for the uniform real interval
//! `[u/2^64, (u+1)/2^64)`. Each cumulative row probability `c` is
//! precomputed as the integer threshold `floor(c * 2^64)`, so almost
//! every draw resolves with plain integer comparisons. When the interval
//! straddles a threshold (probability ~2^-64 per step) the draw is
//! extended 64 bits at a time and compared against the exact rational
//! cumulative until the interval falls on one side. The probability of
//! selecting an edge therefore equals its rational probability exactly;
//! no floating point is involved.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chain::CanonicalChain;
use crate::rational::Rational;
use crate::sim::rng::RngStream;

/// One outgoing alternative of a transient row.
#[derive(Debug, Clone)]
struct RowEntry {
    /// Canonical index of the target state.
    target: usize,
    /// `floor(cum * 2^64)` for the cumulative probability up to and
    /// including this entry.
    threshold: u128,
    /// Whether `cum * 2^64` is an integer (no fractional part).
    exact: bool,
    /// Exact cumulative probability, for the refinement path.
    cum_numer: BigUint,
    cum_denom: BigUint,
}

/// Precomputed sampling tables for every transient row of a chain.
#[derive(Debug, Clone)]
pub struct StepSampler {
    rows: Vec<Vec<RowEntry>>,
    n_transient: usize,
}

/// Progressively refined uniform draw in `[0, 1)`.
enum Draw {
    /// First 64 bits; the common case never leaves this state.
    Coarse(u64),
    /// Arbitrary-precision prefix: the value lies in
    /// `[bits/2^nbits, (bits+1)/2^nbits)`.
    Fine { bits: BigUint, nbits: u64 },
}

impl StepSampler {
    pub fn new(chain: &CanonicalChain) -> Self {
        let nt = chain.n_transient();
        let mut rows = Vec::with_capacity(nt);
        for i in 0..nt {
            let mut entries = Vec::new();
            let mut cum = Rational::zero();
            for j in 0..nt {
                let p = &chain.q()[(i, j)];
                if !p.is_zero() {
                    cum += p;
                    entries.push(Self::entry(j, &cum));
                }
            }
            for j in 0..chain.n_absorbing() {
                let p = &chain.r()[(i, j)];
                if !p.is_zero() {
                    cum += p;
                    entries.push(Self::entry(nt + j, &cum));
                }
            }
            debug_assert!(cum.is_one(), "validated rows sum to one");
            rows.push(entries);
        }
        Self {
            rows,
            n_transient: nt,
        }
    }

    fn entry(target: usize, cum: &Rational) -> RowEntry {
        let numer = cum
            .numer()
            .abs()
            .to_biguint()
            .expect("cumulative probabilities are nonnegative");
        let denom = cum
            .denom()
            .to_biguint()
            .expect("denominators are positive");
        let scaled: BigUint = &numer << 64u32;
        let threshold = (&scaled / &denom)
            .to_u128()
            .expect("cumulative probabilities are at most one");
        let exact = (scaled % &denom).is_zero();
        RowEntry {
            target,
            threshold,
            exact,
            cum_numer: numer,
            cum_denom: denom,
        }
    }

    pub fn n_transient(&self) -> usize {
        self.n_transient
    }

    /// Samples the next canonical state from a transient state's row.
    #[inline]
    pub fn step(&self, state: usize, rng: &mut RngStream) -> usize {
        self.pick(state, rng.next_u64(), rng)
    }

    /// Resolves a step given the first 64-bit draw; split out so the
    /// refinement path is directly testable.
    fn pick(&self, state: usize, first_draw: u64, rng: &mut RngStream) -> usize {
        let row = &self.rows[state];
        let mut draw = Draw::Coarse(first_draw);
        for entry in row {
            if below(&mut draw, entry, rng) {
                return entry.target;
            }
        }
        // The final cumulative is exactly one, whose threshold 2^64
        // exceeds any 64-bit draw.
        unreachable!("draw below the final cumulative threshold");
    }
}

/// Does the drawn uniform value lie strictly below this entry's
/// cumulative probability? Extends the draw when the current interval
/// straddles the boundary.
fn below(draw: &mut Draw, entry: &RowEntry, rng: &mut RngStream) -> bool {
    if let Draw::Coarse(u) = *draw {
        let u = u as u128;
        if u < entry.threshold {
            return true;
        }
        if u > entry.threshold || entry.exact {
            return false;
        }
        // u == floor(cum * 2^64) with a nonzero fractional part: the
        // interval straddles the boundary.
        *draw = Draw::Fine {
            bits: BigUint::from(u),
            nbits: 64,
        };
    }
    let Draw::Fine { bits, nbits } = draw else {
        unreachable!()
    };
    loop {
        // value in [bits/2^nbits, (bits+1)/2^nbits) vs cum = a/b:
        // entirely below iff (bits+1)*b <= a*2^nbits,
        // entirely at-or-above iff bits*b >= a*2^nbits.
        let lhs = &*bits * &entry.cum_denom;
        let rhs = &entry.cum_numer << *nbits;
        if &lhs + &entry.cum_denom <= rhs {
            return true;
        }
        if lhs >= rhs {
            return false;
        }
        *bits = (&*bits << 64) | BigUint::from(rng.next_u64());
        *nbits += 64;
    }
}
