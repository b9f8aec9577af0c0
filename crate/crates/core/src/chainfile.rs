//! Text format for chains as probability-labeled digraphs.
//!
//! The format is line-oriented; `#` starts a comment and blank lines are
//! ignored:
//!
//! ```text
//! state NAME [absorbing] [cost RATIONAL]
//! edge FROM TO PROB
//! start NAME
//! ```
//!
//! State names are arbitrary non-whitespace UTF-8 tokens (no `#`).
//! Numbers are exact fractions `a/b`, integers, or terminating decimals,
//! which convert exactly (`0.5` is the rational `1/2`). States must be
//! declared before they are referenced, absorbing states may not appear
//! as edge sources, and the whole document is validated on parse: a
//! successful [`parse`] always returns a chain whose rows sum to one and
//! whose transient states can all reach absorption.
//!
//! [`serialize`] emits a canonical form — states in declaration order,
//! then edges sorted by source and target with lowest-terms
//! probabilities, then the start line — and `parse . serialize` is the
//! identity on parsed documents. The four-state walk of
//! `gamblers_ruin(1, 2)` looks like:
//!
//! ```text
//! state left absorbing
//! state 1
//! state 2
//! state right absorbing
//! edge 1 left 1/2
//! edge 1 2 1/2
//! edge 2 1 1/2
//! edge 2 right 1/2
//! start 1
//! ```

use std::collections::HashMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::chain::{validate, ChainError, ChainSpec, Edge, StateDecl};
use crate::rational::{parse_rational, Rational};

/// Line and column (1-based, in characters) of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainfileError {
    #[error("{pos}: expected {expected}, found `{found}`")]
    Syntax {
        pos: Pos,
        expected: String,
        found: String,
    },
    #[error("{pos}: unknown state name `{name}`")]
    UnknownStateName { pos: Pos, name: String },
    #[error("{pos}: {source}")]
    Validation { pos: Pos, source: ChainError },
}

impl ChainfileError {
    /// Position of the offending token.
    pub fn pos(&self) -> Pos {
        match self {
            ChainfileError::Syntax { pos, .. }
            | ChainfileError::UnknownStateName { pos, .. }
            | ChainfileError::Validation { pos, .. } => *pos,
        }
    }
}

/// A parsed and validated chain document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDocument {
    pub spec: ChainSpec,
    /// Position of each state declaration's name token.
    pub state_pos: Vec<Pos>,
    /// Position of each (merged) edge's first occurrence.
    pub edge_pos: Vec<Pos>,
    /// Position of the `start` line's name token, if any.
    pub start_pos: Option<Pos>,
}

impl ChainDocument {
    /// Canonical text form of the document.
    pub fn to_text(&self) -> String {
        serialize(&self.spec)
    }
}

struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut col = 0usize;
    let mut start: Option<(usize, usize)> = None; // (byte index, col)
    for (byte, ch) in body.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some((s, c)) = start.take() {
                tokens.push(Token {
                    text: &body[s..byte],
                    pos: Pos { line: line_no, col: c },
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((s, c)) = start {
        tokens.push(Token {
            text: &body[s..],
            pos: Pos { line: line_no, col: c },
        });
    }
    tokens
}

fn syntax(pos: Pos, expected: &str, found: &str) -> ChainfileError {
    ChainfileError::Syntax {
        pos,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Parses and validates a chain document.
#[allow(clippy::result_large_err)]
pub fn parse(text: &str) -> Result<ChainDocument, ChainfileError> {
    let mut states: Vec<StateDecl> = Vec::new();
    let mut state_pos: Vec<Pos> = Vec::new();
    let mut index_of: HashMap<String, usize> = HashMap::new();
    // Raw edges keyed by (from, to): merged probability + first position.
    let mut edges: Vec<(Edge, Pos)> = Vec::new();
    let mut edge_slot: HashMap<(usize, usize), usize> = HashMap::new();
    let mut start: Option<(usize, Pos)> = None;

    let mut first_state_pos: Option<Pos> = None;

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens = tokenize(line, line_no);
        if tokens.is_empty() {
            continue;
        }
        let directive = &tokens[0];
        match directive.text {
            "state" => {
                let name = tokens
                    .get(1)
                    .ok_or_else(|| syntax(directive.pos, "state name", "end of line"))?;
                if index_of.contains_key(name.text) {
                    return Err(ChainfileError::Validation {
                        pos: name.pos,
                        source: ChainError::DuplicateState {
                            name: name.text.to_string(),
                        },
                    });
                }
                let mut decl = StateDecl::transient(name.text);
                let mut rest = 2;
                if tokens.get(rest).map(|t| t.text) == Some("absorbing") {
                    decl.absorbing = true;
                    rest += 1;
                }
                if tokens.get(rest).map(|t| t.text) == Some("cost") {
                    let value = tokens.get(rest + 1).ok_or_else(|| {
                        syntax(tokens[rest].pos, "cost value after `cost`", "end of line")
                    })?;
                    let cost = parse_rational(value.text).ok_or_else(|| {
                        syntax(value.pos, "rational cost (fraction, integer, or decimal)", value.text)
                    })?;
                    decl.step_cost = cost;
                    rest += 2;
                }
                if let Some(extra) = tokens.get(rest) {
                    return Err(syntax(extra.pos, "end of line", extra.text));
                }
                index_of.insert(name.text.to_string(), states.len());
                first_state_pos.get_or_insert(name.pos);
                state_pos.push(name.pos);
                states.push(decl);
            }
            "edge" => {
                if tokens.len() < 4 {
                    let pos = tokens.last().unwrap().pos;
                    return Err(syntax(pos, "`edge FROM TO PROB`", "end of line"));
                }
                if let Some(extra) = tokens.get(4) {
                    return Err(syntax(extra.pos, "end of line", extra.text));
                }
                let resolve = |t: &Token| -> Result<usize, ChainfileError> {
                    index_of.get(t.text).copied().ok_or_else(|| {
                        ChainfileError::UnknownStateName {
                            pos: t.pos,
                            name: t.text.to_string(),
                        }
                    })
                };
                let from = resolve(&tokens[1])?;
                let to = resolve(&tokens[2])?;
                if states[from].absorbing {
                    return Err(ChainfileError::Validation {
                        pos: tokens[1].pos,
                        source: ChainError::AbsorbingSource {
                            state: states[from].name.clone(),
                        },
                    });
                }
                let prob = parse_rational(tokens[3].text).ok_or_else(|| {
                    syntax(
                        tokens[3].pos,
                        "probability (fraction, integer, or decimal)",
                        tokens[3].text,
                    )
                })?;
                if prob <= Rational::from_integer(0.into()) || prob > Rational::one() {
                    return Err(ChainfileError::Validation {
                        pos: tokens[3].pos,
                        source: ChainError::ProbOutOfRange {
                            from: states[from].name.clone(),
                            to: states[to].name.clone(),
                            prob,
                        },
                    });
                }
                // Parallel edges merge by summing.
                match edge_slot.get(&(from, to)) {
                    Some(&slot) => edges[slot].0.prob += prob,
                    None => {
                        edge_slot.insert((from, to), edges.len());
                        edges.push((Edge::new(from, to, prob), tokens[1].pos));
                    }
                }
            }
            "start" => {
                let name = tokens
                    .get(1)
                    .ok_or_else(|| syntax(directive.pos, "state name after `start`", "end of line"))?;
                if let Some(extra) = tokens.get(2) {
                    return Err(syntax(extra.pos, "end of line", extra.text));
                }
                if start.is_some() {
                    return Err(syntax(directive.pos, "a single start directive", "start"));
                }
                let index = index_of.get(name.text).copied().ok_or_else(|| {
                    ChainfileError::UnknownStateName {
                        pos: name.pos,
                        name: name.text.to_string(),
                    }
                })?;
                start = Some((index, name.pos));
            }
            other => {
                return Err(syntax(directive.pos, "`state`, `edge`, or `start`", other));
            }
        }
    }

    edges.sort_by_key(|(e, _)| (e.from, e.to));
    let (edges, edge_pos): (Vec<Edge>, Vec<Pos>) = edges.into_iter().unzip();

    let spec = ChainSpec {
        states,
        edges,
        start: start.map(|(i, _)| i),
    };

    // Remaining whole-chain checks, mapped back to source positions.
    if let Err(source) = validate(&spec) {
        let fallback = first_state_pos.unwrap_or(Pos { line: 1, col: 1 });
        let pos = match &source {
            ChainError::RowSumNotOne { state, .. }
            | ChainError::NegativeCost { state, .. } => state_decl_pos(&spec, &state_pos, state)
                .unwrap_or(fallback),
            ChainError::TransientTrap { states } => states
                .first()
                .and_then(|s| state_decl_pos(&spec, &state_pos, s))
                .unwrap_or(fallback),
            _ => fallback,
        };
        return Err(ChainfileError::Validation { pos, source });
    }

    Ok(ChainDocument {
        spec,
        state_pos,
        edge_pos,
        start_pos: start.map(|(_, p)| p),
    })
}

fn state_decl_pos(spec: &ChainSpec, positions: &[Pos], name: &str) -> Option<Pos> {
    spec.states
        .iter()
        .position(|s| s.name == name)
        .map(|i| positions[i])
}

/// Canonical text form: states in declaration order, then edges sorted by
/// `(from, to)` with lowest-terms probabilities, then the start line.
pub fn serialize(spec: &ChainSpec) -> String {
    let mut out = String::new();
    for state in &spec.states {
        out.push_str("state ");
        out.push_str(&state.name);
        if state.absorbing {
            out.push_str(" absorbing");
        }
        if !state.step_cost.is_one() {
            out.push_str(" cost ");
            out.push_str(&state.step_cost.to_string());
        }
        out.push('\n');
    }
    let mut edges: Vec<&Edge> = spec.edges.iter().collect();
    edges.sort_by_key(|e| (e.from, e.to));
    for edge in edges {
        out.push_str("edge ");
        out.push_str(&spec.states[edge.from].name);
        out.push(' ');
        out.push_str(&spec.states[edge.to].name);
        out.push(' ');
        out.push_str(&edge.prob.to_string());
        out.push('\n');
    }
    if let Some(start) = spec.start {
        out.push_str("start ");
        out.push_str(&spec.states[start].name);
        out.push('\n');
    }
    out
}
