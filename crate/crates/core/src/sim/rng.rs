//! Self-contained 64-bit generator with deterministic stream splitting.
//!
//! The generator is SplitMix64. State transition and output function, per
//! draw on state `s`:
//!
//! ```text
//! s     = s + 0x9E3779B97F4A7C15                    (wrapping)
//! z     = s
//! z     = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (wrapping)
//! z     = (z ^ (z >> 27)) * 0x94D049BB133111EB      (wrapping)
//! draw  = z ^ (z >> 31)
//! ```
//!
//! Per-trial streams derive their initial state from the master seed and
//! the trial index through the same avalanche finalizer:
//! `state = mix64(master_seed ^ mix64(trial_index + 0x9E3779B97F4A7C15))`,
//! where `mix64` is the three-line finalizer above. Trial streams are
//! therefore a pure function of `(master_seed, trial_index)` and
//! independent of how trials are scheduled. No external randomness or
//! platform state is involved anywhere, so identical seeds produce
//! identical sequences on every platform.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer; a bijective 64-bit avalanche mix.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic 64-bit random stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    /// Stream whose raw initial state is `state`.
    pub fn from_state(state: u64) -> Self {
        Self { state }
    }

    /// Stream for a master seed, equivalent to `for_trial(seed, 0)`.
    pub fn new(seed: u64) -> Self {
        Self::for_trial(seed, 0)
    }

    /// Derives the independent stream for one trial of an experiment.
    pub fn for_trial(master_seed: u64, trial_index: u64) -> Self {
        Self {
            state: mix64(master_seed ^ mix64(trial_index.wrapping_add(GOLDEN_GAMMA))),
        }
    }

    /// Next 64-bit draw.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Next fair coin flip.
    #[inline]
    pub fn next_bit(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}
