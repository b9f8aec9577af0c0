//! Seeded, reproducible Monte Carlo engine.
//!
//! Every operation here is a pure function of its arguments including the
//! master seed. Each trial runs on its own derived stream
//! ([`RngStream::for_trial`]) and aggregates flow into order-independent
//! exact totals (integer and rational sums), so results cannot depend on
//! trial scheduling and a rerun reproduces them bit for bit.

mod rng;
mod sampler;

pub use rng::{mix64, RngStream};
pub use sampler::StepSampler;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::chain::CanonicalChain;
use crate::rational::{Rational, to_f64};

/// Per-trial step budget used when none is given.
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    /// A trajectory failed to absorb within its step budget; absorption
    /// is almost sure on a validated chain, so in practice this flags a
    /// budget far too small for the chain at hand.
    #[error("no absorption within {max_steps} steps{}", match trial {
        Some(t) => format!(" (trial {t})"),
        None => String::new(),
    })]
    StepLimitExceeded { max_steps: u64, trial: Option<u64> },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("start index {index} out of range for {count} states")]
    StartOutOfRange { index: usize, count: usize },
}

/// One sampled trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    /// Local index of the absorbing state reached (0-based within the
    /// absorbing block).
    pub absorbed: usize,
    pub steps: u64,
    /// Exact accumulated cost: sum over visits of the visited state's
    /// step cost.
    pub cost: Rational,
    /// Visit counts per transient state, the start included.
    pub visits: Vec<u64>,
}

/// Monte Carlo aggregate over many trials.
///
/// Estimates derive from the exact totals only, so aggregation order can
/// never change them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialStats {
    pub trials: u64,
    /// Absorption counts per absorbing state; sums to `trials`.
    pub absorb_counts: Vec<u64>,
    pub total_steps: BigUint,
    /// Sum over trials of the squared step count, for standard errors.
    pub total_steps_sq: BigUint,
    pub total_cost: Rational,
    pub total_cost_sq: Rational,
    /// Visit counts per transient state summed over all trials.
    pub visit_counts: Vec<u64>,
    pub master_seed: u64,
}

impl TrialStats {
    pub fn absorb_frequency(&self, absorbing: usize) -> f64 {
        self.absorb_counts[absorbing] as f64 / self.trials as f64
    }

    /// Binomial standard error of an absorption frequency.
    pub fn absorb_std_err(&self, absorbing: usize) -> f64 {
        let p = self.absorb_frequency(absorbing);
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn mean_steps(&self) -> f64 {
        self.total_steps.to_f64().unwrap_or(f64::NAN) / self.trials as f64
    }

    /// Empirical standard error of the mean step count.
    pub fn steps_std_err(&self) -> f64 {
        empirical_std_err(
            self.total_steps.to_f64().unwrap_or(f64::NAN),
            self.total_steps_sq.to_f64().unwrap_or(f64::NAN),
            self.trials,
        )
    }

    pub fn mean_cost(&self) -> f64 {
        to_f64(&self.total_cost) / self.trials as f64
    }

    pub fn cost_std_err(&self) -> f64 {
        empirical_std_err(to_f64(&self.total_cost), to_f64(&self.total_cost_sq), self.trials)
    }

    pub fn mean_visits(&self, transient: usize) -> f64 {
        self.visit_counts[transient] as f64 / self.trials as f64
    }
}

fn empirical_std_err(sum: f64, sum_sq: f64, n: u64) -> f64 {
    if n < 2 {
        return f64::NAN;
    }
    let n = n as f64;
    let var = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    (var / n).sqrt()
}

/// Walks until absorption, accumulating visits into `visits` (which must
/// be zeroed by the caller). Returns the local absorbing index and the
/// step count.
fn walk(
    sampler: &StepSampler,
    start: usize,
    rng: &mut RngStream,
    max_steps: u64,
    visits: &mut [u64],
) -> Result<(usize, u64), SimError> {
    let nt = sampler.n_transient();
    if start >= nt {
        // Already absorbed.
        return Ok((start - nt, 0));
    }
    let mut state = start;
    let mut steps = 0u64;
    loop {
        visits[state] += 1;
        if steps == max_steps {
            return Err(SimError::StepLimitExceeded {
                max_steps,
                trial: None,
            });
        }
        steps += 1;
        let next = sampler.step(state, rng);
        if next >= nt {
            return Ok((next - nt, steps));
        }
        state = next;
    }
}

fn trial_cost(visits: &[u64], costs: &[Rational]) -> Rational {
    let mut cost = Rational::zero();
    for (&v, c) in visits.iter().zip(costs) {
        if v > 0 && !c.is_zero() {
            cost += Rational::from_integer(v.into()) * c;
        }
    }
    cost
}

/// Samples one trajectory from the exact row distributions.
///
/// The same `(chain, start, rng state)` always produces the identical
/// trajectory. `start` is a canonical state index; an absorbing start
/// returns immediately with zero steps.
pub fn sample_trajectory(
    chain: &CanonicalChain,
    start: usize,
    rng: &mut RngStream,
    max_steps: u64,
) -> Result<Trajectory, SimError> {
    if start >= chain.n_states() {
        return Err(SimError::StartOutOfRange {
            index: start,
            count: chain.n_states(),
        });
    }
    if max_steps < 1 {
        return Err(SimError::InvalidParameter("max_steps must be >= 1".into()));
    }
    let sampler = StepSampler::new(chain);
    let mut visits = vec![0u64; chain.n_transient()];
    let (absorbed, steps) = walk(&sampler, start, rng, max_steps, &mut visits)?;
    let cost = trial_cost(&visits, chain.costs());
    Ok(Trajectory {
        absorbed,
        steps,
        cost,
        visits,
    })
}

/// Runs `trials` independent trajectories from per-trial derived streams
/// and aggregates them. A pure function of
/// `(chain, start, trials, master_seed, max_steps)`.
pub fn run_experiment_with(
    chain: &CanonicalChain,
    start: usize,
    trials: u64,
    master_seed: u64,
    max_steps: u64,
) -> Result<TrialStats, SimError> {
    if trials < 1 {
        return Err(SimError::InvalidParameter("trials must be >= 1".into()));
    }
    if start >= chain.n_states() {
        return Err(SimError::StartOutOfRange {
            index: start,
            count: chain.n_states(),
        });
    }
    if max_steps < 1 {
        return Err(SimError::InvalidParameter("max_steps must be >= 1".into()));
    }

    let sampler = StepSampler::new(chain);
    let nt = chain.n_transient();
    let mut absorb_counts = vec![0u64; chain.n_absorbing()];
    let mut visit_counts = vec![0u64; nt];
    let mut total_steps = BigUint::zero();
    let mut total_steps_sq = BigUint::zero();
    let mut total_cost_sq = Rational::zero();
    let mut visits = vec![0u64; nt];

    for trial in 0..trials {
        let mut rng = RngStream::for_trial(master_seed, trial);
        visits.iter_mut().for_each(|v| *v = 0);
        let (absorbed, steps) =
            walk(&sampler, start, &mut rng, max_steps, &mut visits).map_err(|e| match e {
                SimError::StepLimitExceeded { max_steps, .. } => SimError::StepLimitExceeded {
                    max_steps,
                    trial: Some(trial),
                },
                other => other,
            })?;
        absorb_counts[absorbed] += 1;
        for (total, &v) in visit_counts.iter_mut().zip(&visits) {
            *total += v;
        }
        total_steps += steps;
        total_steps_sq += BigUint::from(steps) * BigUint::from(steps);
        let cost = trial_cost(&visits, chain.costs());
        total_cost_sq += &cost * &cost;
    }

    // Total cost re-derives from the visit totals; equal to the sum of
    // per-trial costs because rational addition is exact.
    let total_cost = trial_cost(&visit_counts, chain.costs());

    Ok(TrialStats {
        trials,
        absorb_counts,
        total_steps,
        total_steps_sq,
        total_cost,
        total_cost_sq,
        visit_counts,
        master_seed,
    })
}

/// [`run_experiment_with`] under the default step budget.
pub fn run_experiment(
    chain: &CanonicalChain,
    start: usize,
    trials: u64,
    master_seed: u64,
) -> Result<TrialStats, SimError> {
    run_experiment_with(chain, start, trials, master_seed, DEFAULT_MAX_STEPS)
}

/// Samples `plays` of the truncated doubling-stakes lottery and returns
/// the running mean after every play.
///
/// A play tosses a fair coin up to `max_tosses` times; a first head on
/// toss `t` pays `2^(t-1)`, no head pays nothing. Payoff totals are kept
/// as exact integers.
pub fn lottery_running_mean(
    plays: u64,
    max_tosses: u32,
    master_seed: u64,
) -> Result<Vec<(u64, f64)>, SimError> {
    if plays < 1 {
        return Err(SimError::InvalidParameter("plays must be >= 1".into()));
    }
    if max_tosses < 1 {
        return Err(SimError::InvalidParameter(
            "max_tosses must be >= 1".into(),
        ));
    }
    let mut total = BigUint::zero();
    let mut out = Vec::with_capacity(plays as usize);
    for play in 0..plays {
        let mut rng = RngStream::for_trial(master_seed, play);
        let mut payoff: Option<u32> = None;
        for toss in 0..max_tosses {
            if rng.next_bit() {
                payoff = Some(toss);
                break;
            }
        }
        if let Some(t) = payoff {
            total += BigUint::from(1u8) << t;
        }
        let mean = total.to_f64().unwrap_or(f64::NAN) / (play + 1) as f64;
        out.push((play + 1, mean));
    }
    Ok(out)
}

/// Result of the fall-and-replace experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RenewalReport {
    pub total_steps: u64,
    pub falls: u64,
    /// Fraction of steps on which the walker fell.
    pub fall_frequency: f64,
    /// Mean number of steps between consecutive falls (from the start or
    /// the previous fall, inclusive of the falling step).
    pub mean_gap: f64,
}

/// Walks the two-position chain for a fixed number of steps, replacing
/// the walker on its start position after every fall, and reports how
/// often falls occur. From either position a fall happens with
/// probability 1/2 per step, so the frequency approaches 1/2 and the mean
/// gap approaches 2.
pub fn renewal_experiment(total_steps: u64, master_seed: u64) -> Result<RenewalReport, SimError> {
    if total_steps < 1 {
        return Err(SimError::InvalidParameter(
            "total_steps must be >= 1".into(),
        ));
    }
    let mut rng = RngStream::new(master_seed);
    // Positions 1 and 2 between two ends; stepping off either end is a
    // fall and the walker restarts at position 1.
    let mut position = 1u8;
    let mut falls = 0u64;
    let mut last_fall = 0u64;
    let mut gap_sum = 0u64;
    for step in 1..=total_steps {
        let right = rng.next_bit();
        let fell = match (position, right) {
            (1, false) => true,
            (1, true) => {
                position = 2;
                false
            }
            (2, true) => true,
            (2, false) => {
                position = 1;
                false
            }
            _ => unreachable!(),
        };
        if fell {
            falls += 1;
            gap_sum += step - last_fall;
            last_fall = step;
            position = 1;
        }
    }
    let fall_frequency = falls as f64 / total_steps as f64;
    let mean_gap = if falls > 0 {
        gap_sum as f64 / falls as f64
    } else {
        f64::NAN
    };
    Ok(RenewalReport {
        total_steps,
        falls,
        fall_frequency,
        mean_gap,
    })
}
