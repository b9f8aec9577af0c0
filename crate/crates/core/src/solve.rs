//! Exact fundamental-matrix solver.
//!
//! For a validated chain with transient block `Q` and absorption block
//! `R`, everything here comes out of one elimination kernel applied to
//! `I - Q`:
//!
//! * absorption probabilities `B = (I - Q)^-1 * R`,
//! * expected visit counts `N = (I - Q)^-1` (the initial state counts as
//!   one visit),
//! * expected accumulated cost `t = N * costs`,
//! * the exact probability of still being unabsorbed after `n` steps.
//!
//! No fraction-size limits apply: intermediate rationals may grow with
//! chain size, which is the price of exactness. Solve time is polynomial
//! in the number of states.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::chain::CanonicalChain;
use crate::linalg::{solve_linear_rational, LinalgError, RatMatrix};
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    /// `I - Q` was singular. Impossible for a validated chain; signals an
    /// internal error or a hand-built canonical form.
    #[error("linear system is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("state index {index} is not a transient state (chain has {transient} transient states)")]
    UnknownState { index: usize, transient: usize },
}

impl From<LinalgError> for SolveError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::SingularMatrix => SolveError::SingularMatrix,
            LinalgError::DimensionMismatch(msg) => SolveError::DimensionMismatch(msg),
        }
    }
}

/// Exact solve results for one chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    /// `b[(i, a)]` = probability of absorption in absorbing state `a`
    /// starting from transient state `i`. Each row sums to one.
    pub b: RatMatrix,
    /// Expected total cost to absorption from each transient state.
    pub t: Vec<Rational>,
    /// `n[(i, j)]` = expected number of visits to transient `j` starting
    /// from transient `i`.
    pub n: RatMatrix,
}

fn i_minus_q(chain: &CanonicalChain) -> RatMatrix {
    let nt = chain.n_transient();
    let mut m = RatMatrix::zeros(nt, nt);
    for i in 0..nt {
        for j in 0..nt {
            let mut v = -chain.q()[(i, j)].clone();
            if i == j {
                v += Rational::one();
            }
            m[(i, j)] = v;
        }
    }
    m
}

fn column(v: &[Rational]) -> RatMatrix {
    RatMatrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect())
}

/// Absorption-probability matrix `B = (I - Q)^-1 * R`, exact.
pub fn absorption_probabilities(chain: &CanonicalChain) -> Result<RatMatrix, SolveError> {
    Ok(solve_linear_rational(&i_minus_q(chain), chain.r())?)
}

/// Expected total cost to absorption from each transient state,
/// `t = N * costs`. With unit costs this is the expected step count.
pub fn expected_cost(chain: &CanonicalChain) -> Result<Vec<Rational>, SolveError> {
    let x = solve_linear_rational(&i_minus_q(chain), &column(chain.costs()))?;
    Ok((0..x.nrows()).map(|i| x[(i, 0)].clone()).collect())
}

/// Expected number of steps to absorption from each transient state,
/// regardless of the chain's cost labels.
pub fn expected_steps(chain: &CanonicalChain) -> Result<Vec<Rational>, SolveError> {
    let ones = vec![Rational::one(); chain.n_transient()];
    let x = solve_linear_rational(&i_minus_q(chain), &column(&ones))?;
    Ok((0..x.nrows()).map(|i| x[(i, 0)].clone()).collect())
}

/// Fundamental matrix `N = (I - Q)^-1`, exact. `n[(i, i)] >= 1`.
pub fn expected_visits(chain: &CanonicalChain) -> Result<RatMatrix, SolveError> {
    let nt = chain.n_transient();
    Ok(solve_linear_rational(&i_minus_q(chain), &RatMatrix::identity(nt))?)
}

/// Computes `B`, `t` and `N` in one report.
pub fn solve_report(chain: &CanonicalChain) -> Result<SolveReport, SolveError> {
    let n = expected_visits(chain)?;
    let b = n.mul(chain.r());
    let t = n.mul_vec(chain.costs());
    Ok(SolveReport { b, t, n })
}

/// Exact probability of not yet being absorbed after `n` steps from the
/// given transient state: `(Q^n * 1)[start]`.
///
/// Computed by repeated matrix-vector products, never by matrix powers.
pub fn survival_after_n(
    chain: &CanonicalChain,
    start: usize,
    n: u64,
) -> Result<Rational, SolveError> {
    let nt = chain.n_transient();
    if start >= nt {
        return Err(SolveError::UnknownState {
            index: start,
            transient: nt,
        });
    }
    let mut v = vec![Rational::one(); nt];
    for _ in 0..n {
        if v.iter().all(Rational::is_zero) {
            break;
        }
        v = chain.q().mul_vec(&v);
    }
    Ok(v[start].clone())
}

/// Distribution over absorbing states when starting from any canonical
/// state. A transient start gives the matching row of `B`; an absorbing
/// start is already absorbed, giving a unit vector.
pub fn absorption_distribution(
    chain: &CanonicalChain,
    start: usize,
) -> Result<Vec<Rational>, SolveError> {
    let nt = chain.n_transient();
    let na = chain.n_absorbing();
    if start >= nt {
        let mut row = vec![Rational::zero(); na];
        let local = start - nt;
        if local >= na {
            return Err(SolveError::UnknownState {
                index: start,
                transient: nt,
            });
        }
        row[local] = Rational::one();
        return Ok(row);
    }
    let b = absorption_probabilities(chain)?;
    Ok(b.row(start).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{validate, ChainSpec, Edge, StateDecl};
    use crate::models;
    use crate::rational::{rat, rat_int};

    fn short_walk() -> CanonicalChain {
        validate(&models::gamblers_ruin(1, 2).unwrap()).unwrap()
    }

    #[test]
    fn short_walk_absorption() {
        let b = absorption_probabilities(&short_walk()).unwrap();
        // From the state one step off the left end: left 2/3, right 1/3.
        assert_eq!(b[(0, 0)], rat(2, 3));
        assert_eq!(b[(0, 1)], rat(1, 3));
        assert_eq!(b[(1, 0)], rat(1, 3));
        assert_eq!(b[(1, 1)], rat(2, 3));
    }

    #[test]
    fn short_walk_expected_steps() {
        let t = expected_cost(&short_walk()).unwrap();
        assert_eq!(t, vec![rat_int(2), rat_int(2)]);
    }

    #[test]
    fn short_walk_visits_match_hand_inverse() {
        // (I - Q) = [[1, -1/2], [-1/2, 1]], det 3/4, inverse by hand.
        let n = expected_visits(&short_walk()).unwrap();
        assert_eq!(n[(0, 0)], rat(4, 3));
        assert_eq!(n[(0, 1)], rat(2, 3));
        assert_eq!(n[(1, 0)], rat(2, 3));
        assert_eq!(n[(1, 1)], rat(4, 3));
        // Row sums equal the expected step counts.
        let t = expected_cost(&short_walk()).unwrap();
        assert_eq!(&n[(0, 0)] + &n[(0, 1)], t[0]);
        assert_eq!(&n[(1, 0)] + &n[(1, 1)], t[1]);
    }

    #[test]
    fn symmetric_single_transient() {
        let spec = ChainSpec {
            states: vec![
                StateDecl::transient("mid"),
                StateDecl::absorbing("a"),
                StateDecl::absorbing("b"),
            ],
            edges: vec![Edge::new(0, 1, rat(1, 2)), Edge::new(0, 2, rat(1, 2))],
            start: Some(0),
        };
        let chain = validate(&spec).unwrap();
        let b = absorption_probabilities(&chain).unwrap();
        assert_eq!(b[(0, 0)], rat(1, 2));
        assert_eq!(b[(0, 1)], rat(1, 2));
    }

    #[test]
    fn immediate_absorption_has_unit_visit_row() {
        let spec = ChainSpec {
            states: vec![StateDecl::transient("go"), StateDecl::absorbing("end")],
            edges: vec![Edge::new(0, 1, rat_int(1))],
            start: Some(0),
        };
        let chain = validate(&spec).unwrap();
        let n = expected_visits(&chain).unwrap();
        assert_eq!(n[(0, 0)], rat_int(1));
        let t = expected_cost(&chain).unwrap();
        assert_eq!(t, vec![rat_int(1)]);
    }

    #[test]
    fn report_satisfies_defining_identities() {
        let chain = validate(&models::gamblers_ruin(2, 3).unwrap()).unwrap();
        let report = solve_report(&chain).unwrap();
        // N = I + Q*N exactly.
        let qn = chain.q().mul(&report.n);
        let nt = chain.n_transient();
        for i in 0..nt {
            for j in 0..nt {
                let expect = if i == j {
                    &qn[(i, j)] + rat_int(1)
                } else {
                    qn[(i, j)].clone()
                };
                assert_eq!(report.n[(i, j)], expect);
            }
        }
        // t = N * costs exactly.
        assert_eq!(report.t, report.n.mul_vec(chain.costs()));
        // Rows of B sum to one.
        for i in 0..nt {
            let sum: Rational = report.b.row(i).iter().sum();
            assert!(sum.is_one());
        }
    }

    #[test]
    fn survival_short_walk_is_power_of_half() {
        let chain = short_walk();
        assert_eq!(survival_after_n(&chain, 0, 0).unwrap(), rat_int(1));
        assert_eq!(survival_after_n(&chain, 0, 3).unwrap(), rat(1, 8));
        assert_eq!(survival_after_n(&chain, 1, 5).unwrap(), rat(1, 32));
    }

    #[test]
    fn survival_reflecting_walk() {
        // Two transient states, reflecting at the first: Q = [[0,1],[1/2,0]].
        let chain = validate(&models::drunkard(2).unwrap()).unwrap();
        assert_eq!(survival_after_n(&chain, 0, 2).unwrap(), rat(1, 2));
    }

    #[test]
    fn survival_rejects_non_transient_start() {
        let chain = short_walk();
        assert!(matches!(
            survival_after_n(&chain, 2, 1),
            Err(SolveError::UnknownState { index: 2, .. })
        ));
    }

    #[test]
    fn survival_is_monotone() {
        let chain = validate(&models::moran(6, 2).unwrap()).unwrap();
        let mut prev = rat_int(1);
        for n in 0..20 {
            let s = survival_after_n(&chain, 1, n).unwrap();
            assert!(s <= prev);
            prev = s;
        }
        assert!(prev < rat_int(1));
    }

    #[test]
    fn absorption_distribution_handles_absorbing_start() {
        let chain = short_walk();
        assert_eq!(
            absorption_distribution(&chain, 2).unwrap(),
            vec![rat_int(1), rat_int(0)]
        );
        assert_eq!(
            absorption_distribution(&chain, 3).unwrap(),
            vec![rat_int(0), rat_int(1)]
        );
        assert_eq!(
            absorption_distribution(&chain, 0).unwrap(),
            vec![rat(2, 3), rat(1, 3)]
        );
        assert!(absorption_distribution(&chain, 4).is_err());
    }
}
