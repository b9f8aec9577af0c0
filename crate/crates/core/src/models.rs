//! Constructors for the built-in chains: the two-ended ruin walk, the
//! birth-death (Moran) process, the reflecting drunkard walk, uniform
//! random walks on graphs, and the step-length calibration that inverts
//! the midpoint hitting-time law.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::chain::{validate, ChainSpec, Edge, StateDecl};
use crate::rational::{rat_int, Rational};
use crate::solve;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("walk lengths must be at least 1 (got {0})")]
    NonPositiveLength(String),
    #[error("{0}")]
    OutOfRange(String),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("target set is empty")]
    EmptyTargets,
    #[error("graph must be simple: {0}")]
    NotSimpleGraph(String),
    #[error("input must be positive: {0}")]
    NonPositiveInput(String),
}

/// Symmetric walk on positions `0..=i+j`, absorbed at both ends, starting
/// `i` steps from the left end. Interior positions step either way with
/// probability `(1 - hold)/2` and stay put with probability `hold`.
///
/// Ends are named `left` and `right`; interior positions carry their
/// index as a name.
pub fn gamblers_ruin(i: u32, j: u32) -> Result<ChainSpec, ModelError> {
    gamblers_ruin_with_hold(i, j, &Rational::zero())
}

/// [`gamblers_ruin`] with a uniform self-loop probability `hold` in
/// `[0, 1)` at every interior position.
pub fn gamblers_ruin_with_hold(i: u32, j: u32, hold: &Rational) -> Result<ChainSpec, ModelError> {
    if i < 1 || j < 1 {
        return Err(ModelError::NonPositiveLength(format!("i={i}, j={j}")));
    }
    if hold < &Rational::zero() || hold >= &Rational::one() {
        return Err(ModelError::OutOfRange(format!(
            "hold probability {hold} outside [0, 1)"
        )));
    }
    let m = (i + j) as usize;
    let mut states = Vec::with_capacity(m + 1);
    states.push(StateDecl::absorbing("left"));
    for k in 1..m {
        states.push(StateDecl::transient(k.to_string()));
    }
    states.push(StateDecl::absorbing("right"));

    let step = (Rational::one() - hold) / rat_int(2);
    let mut edges = Vec::new();
    for k in 1..m {
        edges.push(Edge::new(k, k - 1, step.clone()));
        edges.push(Edge::new(k, k + 1, step.clone()));
        if !hold.is_zero() {
            edges.push(Edge::new(k, k, hold.clone()));
        }
    }
    Ok(ChainSpec {
        states,
        edges,
        start: Some(i as usize),
    })
}

/// Fixed-population birth-death process: `n` individuals of two types,
/// state = count of the first type, starting from `k`. Each tick picks an
/// ordered pair of distinct individuals; the first dies, the second
/// divides. Counts move up or down with probability
/// `i*(n-i) / (n*(n-1))` each and otherwise stay.
///
/// The absorbing all-or-nothing states are named `yellow` (count 0) and
/// `green` (count `n`).
pub fn moran(n: u32, k: u32) -> Result<ChainSpec, ModelError> {
    if n < 2 {
        return Err(ModelError::OutOfRange(format!(
            "population must be at least 2 (got {n})"
        )));
    }
    if k > n {
        return Err(ModelError::OutOfRange(format!(
            "initial count {k} exceeds population {n}"
        )));
    }
    let n_us = n as usize;
    let mut states = Vec::with_capacity(n_us + 1);
    states.push(StateDecl::absorbing("yellow"));
    for i in 1..n_us {
        states.push(StateDecl::transient(i.to_string()));
    }
    states.push(StateDecl::absorbing("green"));

    let pairs = rat_int(i64::from(n)) * rat_int(i64::from(n) - 1);
    let mut edges = Vec::new();
    for i in 1..n_us {
        let moves = rat_int(i as i64) * rat_int((n_us - i) as i64) / pairs.clone();
        let hold = Rational::one() - &moves - &moves;
        edges.push(Edge::new(i, i - 1, moves.clone()));
        edges.push(Edge::new(i, i + 1, moves.clone()));
        if !hold.is_zero() {
            edges.push(Edge::new(i, i, hold));
        }
    }
    Ok(ChainSpec {
        states,
        edges,
        start: Some(k as usize),
    })
}

/// Self-loop probabilities of [`moran`]'s interior states, indexed by
/// canonical transient order. Applying this as a lazy transform to
/// `gamblers_ruin(k, n-k)` reproduces the birth-death transition matrix.
pub fn moran_hold_vector(n: u32) -> Result<Vec<Rational>, ModelError> {
    if n < 2 {
        return Err(ModelError::OutOfRange(format!(
            "population must be at least 2 (got {n})"
        )));
    }
    let pairs = rat_int(i64::from(n)) * rat_int(i64::from(n) - 1);
    Ok((1..n as usize)
        .map(|i| {
            let moves = rat_int(i as i64) * rat_int((n as usize - i) as i64) / pairs.clone();
            Rational::one() - &moves - &moves
        })
        .collect())
}

/// Walk on positions `0` (`bar`) through `n` (`home`): the far end
/// absorbs, the near end reflects (probability 1 towards home), interior
/// positions step either way with probability 1/2. Starts at the bar.
pub fn drunkard(n: u32) -> Result<ChainSpec, ModelError> {
    if n < 1 {
        return Err(ModelError::NonPositiveLength(format!("n={n}")));
    }
    let n_us = n as usize;
    let mut states = Vec::with_capacity(n_us + 1);
    states.push(StateDecl::transient("bar"));
    for k in 1..n_us {
        states.push(StateDecl::transient(k.to_string()));
    }
    states.push(StateDecl::absorbing("home"));

    let half = Rational::new(1.into(), 2.into());
    let mut edges = vec![Edge::new(0, 1, Rational::one())];
    for k in 1..n_us {
        edges.push(Edge::new(k, k - 1, half.clone()));
        edges.push(Edge::new(k, k + 1, half.clone()));
    }
    Ok(ChainSpec {
        states,
        edges,
        start: Some(0),
    })
}

/// Uniform random walk on an undirected simple graph: every non-target
/// vertex moves to a uniformly random neighbour, target vertices absorb.
/// Every state's step cost is set to `step_cost` (the walker's time per
/// edge).
///
/// Vertices are named by their index. The graph must be connected and
/// simple (no self-loops or parallel edges), and `targets` non-empty.
pub fn graph_walk(
    vertices: usize,
    edges: &[(usize, usize)],
    targets: &[usize],
    step_cost: &Rational,
) -> Result<ChainSpec, ModelError> {
    if vertices == 0 {
        return Err(ModelError::OutOfRange("graph has no vertices".into()));
    }
    if targets.is_empty() {
        return Err(ModelError::EmptyTargets);
    }
    for &t in targets {
        if t >= vertices {
            return Err(ModelError::OutOfRange(format!(
                "target {t} out of range for {vertices} vertices"
            )));
        }
    }

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        if a >= vertices || b >= vertices {
            return Err(ModelError::OutOfRange(format!(
                "edge ({a}, {b}) out of range for {vertices} vertices"
            )));
        }
        if a == b {
            return Err(ModelError::NotSimpleGraph(format!("self-loop at {a}")));
        }
        if adjacency[a].contains(&b) {
            return Err(ModelError::NotSimpleGraph(format!(
                "parallel edge ({a}, {b})"
            )));
        }
        adjacency[a].push(b);
        adjacency[b].push(a);
    }

    // Connectivity over the undirected graph.
    let mut seen = vec![false; vertices];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(ModelError::DisconnectedGraph);
    }

    let is_target = {
        let mut flags = vec![false; vertices];
        for &t in targets {
            flags[t] = true;
        }
        flags
    };

    let mut states = Vec::with_capacity(vertices);
    for (v, &target) in is_target.iter().enumerate() {
        let decl = if target {
            StateDecl::absorbing(v.to_string())
        } else {
            StateDecl::transient(v.to_string())
        };
        states.push(decl.with_cost(step_cost.clone()));
    }

    let mut walk_edges = Vec::new();
    for (v, adjacent) in adjacency.iter().enumerate() {
        if is_target[v] {
            continue;
        }
        // Connected with >= 1 target, so every non-target has a neighbour.
        let p = Rational::new(1.into(), (adjacent.len() as i64).into());
        let mut neighbours = adjacent.clone();
        neighbours.sort_unstable();
        for w in neighbours {
            walk_edges.push(Edge::new(v, w, p.clone()));
        }
    }
    Ok(ChainSpec {
        states,
        edges: walk_edges,
        start: None,
    })
}

/// Expected arrival-time difference, in seconds, between a slow walker
/// (60 s per edge) starting at `slow_start` and a fast walker (40 s per
/// edge) starting at `fast_start`, both walking uniformly at random to
/// the same target set.
pub fn walker_time_gap(
    vertices: usize,
    edges: &[(usize, usize)],
    targets: &[usize],
    slow_start: usize,
    fast_start: usize,
) -> Result<Rational, ModelError> {
    let chain = graph_walk(vertices, edges, targets, &Rational::one())
        .and_then(|spec| {
            validate(&spec).map_err(|e| ModelError::OutOfRange(format!("invalid walk: {e}")))
        })?;
    let steps = solve::expected_steps(&chain)
        .map_err(|e| ModelError::OutOfRange(format!("unsolvable walk: {e}")))?;
    let steps_from = |orig: usize| -> Result<Rational, ModelError> {
        let canonical = chain
            .ordering()
            .iter()
            .position(|&o| o == orig)
            .ok_or_else(|| ModelError::OutOfRange(format!("start {orig} out of range")))?;
        if chain.is_absorbing(canonical) {
            Ok(Rational::zero())
        } else {
            Ok(steps[canonical].clone())
        }
    };
    Ok(rat_int(60) * steps_from(slow_start)? - rat_int(40) * steps_from(fast_start)?)
}

/// Infers a walker's step length from the half-width of a symmetric
/// interval and the measured mean number of steps to leave it, inverting
/// the midpoint law `mean_steps = n^2` with `half_width = n * step`.
pub fn brownian_step_length(half_width: f64, mean_steps: f64) -> Result<f64, ModelError> {
    // NaN fails both checks.
    if half_width.is_nan() || half_width <= 0.0 {
        return Err(ModelError::NonPositiveInput(format!(
            "half_width = {half_width}"
        )));
    }
    if mean_steps.is_nan() || mean_steps <= 0.0 {
        return Err(ModelError::NonPositiveInput(format!(
            "mean_steps = {mean_steps}"
        )));
    }
    Ok(half_width / mean_steps.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{lazy_transform, validate};
    use crate::rational::{rat, to_f64};
    use crate::solve;

    #[test]
    fn ruin_1_2_is_the_four_state_walk() {
        let chain = validate(&gamblers_ruin(1, 2).unwrap()).unwrap();
        assert_eq!(chain.n_transient(), 2);
        assert_eq!(chain.absorbing_names(), ["left", "right"]);
        assert_eq!(chain.q()[(0, 1)], rat(1, 2));
        assert_eq!(chain.r()[(0, 0)], rat(1, 2));
        assert_eq!(chain.start(), Some(0));
    }

    #[test]
    fn ruin_3_7_absorbs_right_with_matching_odds() {
        let chain = validate(&gamblers_ruin(3, 7).unwrap()).unwrap();
        let b = solve::absorption_probabilities(&chain).unwrap();
        let start = chain.start().unwrap();
        assert_eq!(b[(start, 1)], rat(3, 10));
    }

    #[test]
    fn ruin_1_1_is_symmetric() {
        let chain = validate(&gamblers_ruin(1, 1).unwrap()).unwrap();
        assert_eq!(chain.n_transient(), 1);
        let b = solve::absorption_probabilities(&chain).unwrap();
        assert_eq!(b[(0, 0)], rat(1, 2));
        assert_eq!(b[(0, 1)], rat(1, 2));
    }

    #[test]
    fn ruin_rejects_zero_lengths() {
        assert!(matches!(
            gamblers_ruin(0, 2),
            Err(ModelError::NonPositiveLength(_))
        ));
        assert!(matches!(
            gamblers_ruin_with_hold(1, 1, &rat_int(1)),
            Err(ModelError::OutOfRange(_))
        ));
    }

    #[test]
    fn moran_10_3_interior_probabilities() {
        let spec = moran(10, 3).unwrap();
        let chain = validate(&spec).unwrap();
        // Interior count 3: up = down = 3*7/90, hold = 48/90.
        let i = chain.index_of("3").unwrap();
        assert_eq!(chain.q()[(i, i)], rat(48, 90));
        assert_eq!(chain.q()[(i, i - 1)], rat(21, 90));
        assert_eq!(chain.q()[(i, i + 1)], rat(21, 90));
    }

    #[test]
    fn moran_10_3_fixation_odds() {
        let chain = validate(&moran(10, 3).unwrap()).unwrap();
        let b = solve::absorption_probabilities(&chain).unwrap();
        let green = 1; // absorbing order: yellow, green
        assert_eq!(b[(chain.start().unwrap(), green)], rat(3, 10));
    }

    #[test]
    fn moran_absorbing_start() {
        let chain = validate(&moran(10, 0).unwrap()).unwrap();
        let start = chain.start().unwrap();
        assert!(chain.is_absorbing(start));
        let dist = solve::absorption_distribution(&chain, start).unwrap();
        assert_eq!(dist, vec![rat_int(1), rat_int(0)]);
    }

    #[test]
    fn moran_matches_lazy_ruin() {
        for n in 2..=12u32 {
            let hold = moran_hold_vector(n).unwrap();
            for k in 1..n {
                let moran_chain = validate(&moran(n, k).unwrap()).unwrap();
                let ruin_chain = validate(&gamblers_ruin(k, n - k).unwrap()).unwrap();
                let lazy = lazy_transform(&ruin_chain, &hold).unwrap();
                assert_eq!(moran_chain.q(), lazy.q(), "Q mismatch at n={n} k={k}");
                assert_eq!(moran_chain.r(), lazy.r(), "R mismatch at n={n} k={k}");
            }
        }
    }

    #[test]
    fn moran_rejects_bad_parameters() {
        assert!(matches!(moran(1, 0), Err(ModelError::OutOfRange(_))));
        assert!(matches!(moran(5, 6), Err(ModelError::OutOfRange(_))));
    }

    #[test]
    fn drunkard_expected_blocks_and_returns() {
        let chain = validate(&drunkard(10).unwrap()).unwrap();
        let t = solve::expected_cost(&chain).unwrap();
        assert_eq!(t[0], rat_int(100));
        let n = solve::expected_visits(&chain).unwrap();
        assert_eq!(n[(0, 0)], rat_int(10));
    }

    #[test]
    fn drunkard_small_cases() {
        let one = validate(&drunkard(1).unwrap()).unwrap();
        assert_eq!(solve::expected_cost(&one).unwrap(), vec![rat_int(1)]);
        assert_eq!(
            solve::expected_visits(&one).unwrap()[(0, 0)],
            rat_int(1)
        );
        let two = validate(&drunkard(2).unwrap()).unwrap();
        assert_eq!(solve::expected_cost(&two).unwrap()[0], rat_int(4));
        assert!(matches!(
            drunkard(0),
            Err(ModelError::NonPositiveLength(_))
        ));
    }

    #[test]
    fn path_walk_matches_reflecting_walk() {
        let spec = graph_walk(3, &[(0, 1), (1, 2)], &[2], &Rational::one()).unwrap();
        let chain = validate(&spec).unwrap();
        let reflecting = validate(&drunkard(2).unwrap()).unwrap();
        assert_eq!(chain.q(), reflecting.q());
        assert_eq!(chain.r(), reflecting.r());
        let t = solve::expected_cost(&chain).unwrap();
        assert_eq!(t[0], rat_int(4));
    }

    #[test]
    fn triangle_walk_takes_two_steps() {
        let spec = graph_walk(3, &[(0, 1), (1, 2), (0, 2)], &[2], &Rational::one()).unwrap();
        let chain = validate(&spec).unwrap();
        let t = solve::expected_cost(&chain).unwrap();
        assert_eq!(t[0], rat_int(2));
        assert_eq!(t[1], rat_int(2));
    }

    #[test]
    fn walk_cost_scales_linearly() {
        let unit = graph_walk(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[3], &Rational::one())
            .unwrap();
        let costed = graph_walk(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[3], &rat(2, 3)).unwrap();
        let t_unit = solve::expected_cost(&validate(&unit).unwrap()).unwrap();
        let t_costed = solve::expected_cost(&validate(&costed).unwrap()).unwrap();
        for (u, c) in t_unit.iter().zip(&t_costed) {
            assert_eq!(c, &(u * rat(2, 3)));
        }
    }

    #[test]
    fn graph_walk_rejects_malformed_graphs() {
        assert!(matches!(
            graph_walk(3, &[(0, 1)], &[2], &Rational::one()),
            Err(ModelError::DisconnectedGraph)
        ));
        assert!(matches!(
            graph_walk(2, &[(0, 1)], &[], &Rational::one()),
            Err(ModelError::EmptyTargets)
        ));
        assert!(matches!(
            graph_walk(2, &[(0, 0)], &[1], &Rational::one()),
            Err(ModelError::NotSimpleGraph(_))
        ));
        assert!(matches!(
            graph_walk(2, &[(0, 1), (1, 0)], &[1], &Rational::one()),
            Err(ModelError::NotSimpleGraph(_))
        ));
    }

    #[test]
    fn walker_gap_matches_expected_steps() {
        // Path 0-1-2-3 with home at 3.
        let edges = [(0usize, 1usize), (1, 2), (2, 3)];
        let chain = validate(&graph_walk(4, &edges, &[3], &Rational::one()).unwrap()).unwrap();
        let steps = solve::expected_steps(&chain).unwrap();
        let slow = chain.ordering().iter().position(|&o| o == 0).unwrap();
        let fast = chain.ordering().iter().position(|&o| o == 2).unwrap();
        let expect = rat_int(60) * steps[slow].clone() - rat_int(40) * steps[fast].clone();
        assert_eq!(walker_time_gap(4, &edges, &[3], 0, 2).unwrap(), expect);
        // A walker already home contributes zero.
        assert_eq!(
            walker_time_gap(4, &edges, &[3], 3, 3).unwrap(),
            rat_int(0)
        );
    }

    #[test]
    fn step_length_inversion() {
        assert_eq!(brownian_step_length(1.0, 100.0).unwrap(), 0.1);
        assert_eq!(brownian_step_length(2.0, 4.0).unwrap(), 1.0);
        assert!(matches!(
            brownian_step_length(0.0, 4.0),
            Err(ModelError::NonPositiveInput(_))
        ));
        assert!(matches!(
            brownian_step_length(1.0, -4.0),
            Err(ModelError::NonPositiveInput(_))
        ));
    }

    #[test]
    fn step_length_round_trip_through_solver() {
        let chain = validate(&gamblers_ruin(20, 20).unwrap()).unwrap();
        let t = solve::expected_cost(&chain).unwrap();
        let mean = to_f64(&t[chain.start().unwrap()]);
        assert_eq!(mean, 400.0);
        assert_eq!(brownian_step_length(1.0, mean).unwrap(), 0.05);
    }
}
