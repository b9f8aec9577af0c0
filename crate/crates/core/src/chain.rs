//! Chain data model: user-facing specs, validation, the canonical
//! transient/absorbing partition, and the lazy (hold-probability)
//! transform.
//!
//! A chain is a probability-labeled digraph. Absorbing states carry no
//! outgoing edges in a [`ChainSpec`]; the canonical form treats them as
//! terminal. All probabilities are exact rationals, and every validated
//! chain satisfies two invariants: each transient row of `[Q | R]` sums
//! to exactly one, and every transient state can reach some absorbing
//! state through positive-probability edges (which makes `I - Q`
//! invertible).

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// A single state declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDecl {
    pub name: String,
    pub absorbing: bool,
    /// Cost accrued each time a step is taken out of this state. Defaults
    /// to one, making expected cost equal expected step count.
    pub step_cost: Rational,
}

impl StateDecl {
    pub fn transient(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            absorbing: false,
            step_cost: Rational::one(),
        }
    }

    pub fn absorbing(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            absorbing: true,
            step_cost: Rational::one(),
        }
    }

    pub fn with_cost(mut self, cost: Rational) -> Self {
        self.step_cost = cost;
        self
    }
}

/// A directed probability-labeled edge between state indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub prob: Rational,
}

impl Edge {
    pub fn new(from: usize, to: usize, prob: Rational) -> Self {
        Self { from, to, prob }
    }
}

/// User-facing chain: named states plus probability-labeled edges.
///
/// `start` is the optional designated start state (an index into
/// `states`); model constructors fill it in and the file format's
/// `start` line sets it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub states: Vec<StateDecl>,
    pub edges: Vec<Edge>,
    pub start: Option<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("duplicate state name `{name}`")]
    DuplicateState { name: String },
    #[error("state {index} has an empty name")]
    EmptyStateName { index: usize },
    #[error("edge references state index {index}, but there are {count} states")]
    StateIndexOutOfRange { index: usize, count: usize },
    #[error("edge {from} -> {to} has probability {prob} outside (0, 1]")]
    ProbOutOfRange { from: String, to: String, prob: Rational },
    #[error("absorbing state `{state}` has an outgoing edge")]
    AbsorbingSource { state: String },
    #[error("state `{state}` has negative step cost {cost}")]
    NegativeCost { state: String, cost: Rational },
    #[error("outgoing probabilities of `{state}` sum to {sum}, expected 1")]
    RowSumNotOne { state: String, sum: Rational },
    #[error("chain has no absorbing state")]
    NoAbsorbingState,
    #[error("transient states cannot reach absorption: {}", states.join(", "))]
    TransientTrap { states: Vec<String> },
    #[error("hold probability {value} for transient {index} outside [0, 1)")]
    HoldOutOfRange { index: usize, value: Rational },
    #[error("hold vector has {got} entries, chain has {expected} transient states")]
    HoldLengthMismatch { expected: usize, got: usize },
    #[error("start index {index} out of range for {count} states")]
    StartOutOfRange { index: usize, count: usize },
}

/// Validated chain partitioned into the transient block `Q` and the
/// absorption block `R`, with transient states first in declaration
/// order, then absorbing states in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalChain {
    /// Canonical position -> original `ChainSpec` index.
    ordering: Vec<usize>,
    /// State names in canonical order.
    names: Vec<String>,
    /// Transient-to-transient one-step probabilities.
    q: RatMatrix,
    /// Transient-to-absorbing one-step probabilities.
    r: RatMatrix,
    /// Per-transient step costs, canonical order.
    costs: Vec<Rational>,
    /// Designated start, as a canonical index.
    start: Option<usize>,
}

impl CanonicalChain {
    pub fn n_transient(&self) -> usize {
        self.q.nrows()
    }

    pub fn n_absorbing(&self) -> usize {
        self.r.ncols()
    }

    pub fn n_states(&self) -> usize {
        self.n_transient() + self.n_absorbing()
    }

    pub fn q(&self) -> &RatMatrix {
        &self.q
    }

    pub fn r(&self) -> &RatMatrix {
        &self.r
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    /// Canonical position -> original index in the source `ChainSpec`.
    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn start(&self) -> Option<usize> {
        self.start
    }

    /// Name of the state at a canonical index.
    pub fn name(&self, canonical: usize) -> &str {
        &self.names[canonical]
    }

    pub fn transient_names(&self) -> &[String] {
        &self.names[..self.n_transient()]
    }

    pub fn absorbing_names(&self) -> &[String] {
        &self.names[self.n_transient()..]
    }

    pub fn is_absorbing(&self, canonical: usize) -> bool {
        canonical >= self.n_transient()
    }

    /// Canonical index of a state by name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Replaces the designated start state.
    pub fn with_start(mut self, canonical: Option<usize>) -> Result<Self, ChainError> {
        if let Some(s) = canonical {
            if s >= self.n_states() {
                return Err(ChainError::StartOutOfRange {
                    index: s,
                    count: self.n_states(),
                });
            }
        }
        self.start = canonical;
        Ok(self)
    }
}

/// Checks every `ChainSpec` invariant and builds the canonical
/// transient/absorbing partition.
///
/// Parallel edges between the same ordered state pair are merged by
/// summing their probabilities. Row sums are compared exactly,
/// and reachability of absorption is established by a reverse graph
/// search over positive-probability edges.
pub fn validate(spec: &ChainSpec) -> Result<CanonicalChain, ChainError> {
    let n = spec.states.len();

    let mut seen = HashMap::new();
    for (i, state) in spec.states.iter().enumerate() {
        if state.name.is_empty() {
            return Err(ChainError::EmptyStateName { index: i });
        }
        if seen.insert(state.name.clone(), i).is_some() {
            return Err(ChainError::DuplicateState {
                name: state.name.clone(),
            });
        }
        if state.step_cost < Rational::zero() {
            return Err(ChainError::NegativeCost {
                state: state.name.clone(),
                cost: state.step_cost.clone(),
            });
        }
    }

    for edge in &spec.edges {
        for index in [edge.from, edge.to] {
            if index >= n {
                return Err(ChainError::StateIndexOutOfRange { index, count: n });
            }
        }
        if spec.states[edge.from].absorbing {
            return Err(ChainError::AbsorbingSource {
                state: spec.states[edge.from].name.clone(),
            });
        }
        if edge.prob <= Rational::zero() || edge.prob > Rational::one() {
            return Err(ChainError::ProbOutOfRange {
                from: spec.states[edge.from].name.clone(),
                to: spec.states[edge.to].name.clone(),
                prob: edge.prob.clone(),
            });
        }
    }

    // Declaration order within each block.
    let transient: Vec<usize> = (0..n).filter(|&i| !spec.states[i].absorbing).collect();
    let absorbing: Vec<usize> = (0..n).filter(|&i| spec.states[i].absorbing).collect();
    if absorbing.is_empty() {
        return Err(ChainError::NoAbsorbingState);
    }

    // Original index -> canonical index.
    let mut canonical_of = vec![0usize; n];
    for (ci, &orig) in transient.iter().chain(absorbing.iter()).enumerate() {
        canonical_of[orig] = ci;
    }
    let nt = transient.len();

    let mut q = RatMatrix::zeros(nt, nt);
    let mut r = RatMatrix::zeros(nt, absorbing.len());
    for edge in &spec.edges {
        let row = canonical_of[edge.from];
        let col = canonical_of[edge.to];
        if col < nt {
            q[(row, col)] += edge.prob.clone();
        } else {
            r[(row, col - nt)] += edge.prob.clone();
        }
    }

    for (row, &orig) in transient.iter().enumerate() {
        let mut sum = Rational::zero();
        for j in 0..nt {
            sum += q[(row, j)].clone();
        }
        for j in 0..absorbing.len() {
            sum += r[(row, j)].clone();
        }
        if !sum.is_one() {
            return Err(ChainError::RowSumNotOne {
                state: spec.states[orig].name.clone(),
                sum,
            });
        }
    }

    // Reverse reachability from the absorbing block.
    let mut reaches = vec![false; n];
    let mut stack: Vec<usize> = absorbing.clone();
    for &a in &absorbing {
        reaches[a] = true;
    }
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for edge in &spec.edges {
        incoming[edge.to].push(edge.from);
    }
    while let Some(v) = stack.pop() {
        for &src in &incoming[v] {
            if !reaches[src] {
                reaches[src] = true;
                stack.push(src);
            }
        }
    }
    let trapped: Vec<String> = transient
        .iter()
        .filter(|&&i| !reaches[i])
        .map(|&i| spec.states[i].name.clone())
        .collect();
    if !trapped.is_empty() {
        return Err(ChainError::TransientTrap { states: trapped });
    }

    let start = match spec.start {
        Some(s) if s >= n => {
            return Err(ChainError::StartOutOfRange { index: s, count: n })
        }
        Some(s) => Some(canonical_of[s]),
        None => None,
    };

    let ordering: Vec<usize> = transient.iter().chain(absorbing.iter()).copied().collect();
    let names = ordering
        .iter()
        .map(|&i| spec.states[i].name.clone())
        .collect();
    let costs = transient
        .iter()
        .map(|&i| spec.states[i].step_cost.clone())
        .collect();

    Ok(CanonicalChain {
        ordering,
        names,
        q,
        r,
        costs,
        start,
    })
}

/// Rescales each transient row to `(1 - h) * row` plus a self-loop of
/// probability `h`, one hold entry per transient state.
///
/// Absorption probabilities are invariant under this transform; expected
/// costs rescale. Row sums remain exactly one.
pub fn lazy_transform(
    chain: &CanonicalChain,
    hold: &[Rational],
) -> Result<CanonicalChain, ChainError> {
    let nt = chain.n_transient();
    if hold.len() != nt {
        return Err(ChainError::HoldLengthMismatch {
            expected: nt,
            got: hold.len(),
        });
    }
    for (i, h) in hold.iter().enumerate() {
        if h < &Rational::zero() || h >= &Rational::one() {
            return Err(ChainError::HoldOutOfRange {
                index: i,
                value: h.clone(),
            });
        }
    }

    let mut q = chain.q.clone();
    let mut r = chain.r.clone();
    for i in 0..nt {
        let keep = Rational::one() - &hold[i];
        for j in 0..nt {
            if !q[(i, j)].is_zero() {
                q[(i, j)] *= keep.clone();
            }
        }
        for j in 0..chain.n_absorbing() {
            if !r[(i, j)].is_zero() {
                r[(i, j)] *= keep.clone();
            }
        }
        q[(i, i)] += hold[i].clone();
    }

    Ok(CanonicalChain {
        ordering: chain.ordering.clone(),
        names: chain.names.clone(),
        q,
        r,
        costs: chain.costs.clone(),
        start: chain.start,
    })
}
