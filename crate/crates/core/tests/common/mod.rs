//! Shared helpers for the integration suites: a floating-point power
//! iteration oracle that is independent of the exact solver, and a
//! deterministic random-chain generator.

use chainkit::chain::{ChainSpec, Edge, StateDecl};
use chainkit::rational::{to_f64, Rational};
use chainkit::sim::RngStream;
use chainkit::CanonicalChain;

/// Power-iteration estimates for a canonical chain.
pub struct PowerIterated {
    /// Absorption probabilities, `b[i][a]`.
    pub b: Vec<Vec<f64>>,
    /// Expected accumulated cost from each transient state.
    pub t: Vec<f64>,
    /// Transient mass left when iteration stopped.
    pub residual: f64,
}

/// Pushes a unit of probability mass through the chain step by step,
/// accumulating absorbed mass and visit costs, until the transient mass
/// drops below `tol` or `max_steps` is reached. Uses only `Q`/`R` entries
/// as `f64`; never calls the exact solver.
pub fn power_iteration(chain: &CanonicalChain, max_steps: usize, tol: f64) -> PowerIterated {
    let nt = chain.n_transient();
    let na = chain.n_absorbing();
    let q: Vec<Vec<f64>> = (0..nt)
        .map(|i| (0..nt).map(|j| to_f64(&chain.q()[(i, j)])).collect())
        .collect();
    let r: Vec<Vec<f64>> = (0..nt)
        .map(|i| (0..na).map(|j| to_f64(&chain.r()[(i, j)])).collect())
        .collect();
    let costs: Vec<f64> = chain.costs().iter().map(to_f64).collect();

    let mut b = vec![vec![0.0; na]; nt];
    let mut t = vec![0.0; nt];
    let mut residual = 0.0f64;
    for start in 0..nt {
        let mut mass = vec![0.0f64; nt];
        mass[start] = 1.0;
        let mut remaining = 1.0f64;
        for _ in 0..max_steps {
            if remaining < tol {
                break;
            }
            // Cost accrues once per visit, then the mass takes a step.
            for j in 0..nt {
                t[start] += mass[j] * costs[j];
            }
            let mut next = vec![0.0f64; nt];
            for j in 0..nt {
                let m = mass[j];
                if m == 0.0 {
                    continue;
                }
                for k in 0..nt {
                    next[k] += m * q[j][k];
                }
                for a in 0..na {
                    b[start][a] += m * r[j][a];
                }
            }
            mass = next;
            remaining = mass.iter().sum();
        }
        residual = residual.max(remaining);
    }
    PowerIterated { b, t, residual }
}

/// Deterministic random valid chain with at most 8 states: 1..=6
/// transient, 1..=2 absorbing. Every transient row includes a direct
/// absorbing edge, so validation always succeeds and absorption mass
/// decays geometrically.
pub fn random_chain(rng: &mut RngStream) -> ChainSpec {
    let nt = 1 + (rng.next_u64() % 6) as usize;
    let na = 1 + (rng.next_u64() % 2) as usize;

    let mut states = Vec::new();
    for i in 0..nt {
        let cost = Rational::new(
            (1 + rng.next_u64() % 6).into(),
            (1 + rng.next_u64() % 3).into(),
        );
        states.push(StateDecl::transient(format!("t{i}")).with_cost(cost));
    }
    for a in 0..na {
        states.push(StateDecl::absorbing(format!("a{a}")));
    }

    let mut edges = Vec::new();
    for i in 0..nt {
        let mut targets = vec![nt + (rng.next_u64() % na as u64) as usize];
        for j in 0..nt {
            if rng.next_u64().is_multiple_of(2) {
                targets.push(j);
            }
        }
        targets.sort_unstable();
        let weights: Vec<u64> = targets.iter().map(|_| 1 + rng.next_u64() % 8).collect();
        let total: u64 = weights.iter().sum();
        for (&to, &w) in targets.iter().zip(&weights) {
            edges.push(Edge::new(
                i,
                to,
                Rational::new(w.into(), total.into()),
            ));
        }
    }
    ChainSpec {
        states,
        edges,
        start: Some(0),
    }
}
