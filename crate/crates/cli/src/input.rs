//! Chain loading: either a `.chain` file or a built-in model described
//! by flags. Exactly one source must be given.

use std::path::PathBuf;

use chainkit::chain::{validate, CanonicalChain, ChainSpec};
use chainkit::chainfile;
use chainkit::models;
use chainkit::rational::{one, parse_rational, zero, Rational};

/// Errors split by exit code: usage mistakes exit 2, domain failures 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        CliError::Domain(msg.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelKind {
    /// Two-ended symmetric walk absorbed at both ends.
    Ruin,
    /// Fixed-population birth-death process.
    Moran,
    /// Reflecting walk from the bar to home.
    Drunkard,
    /// Uniform random walk on an undirected graph.
    Graph,
}

/// Flags consumed by the built-in models; which ones are required
/// depends on the model.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct ModelFlags {
    /// Ruin: steps from the start to the left end.
    #[arg(long)]
    pub left: Option<u32>,
    /// Ruin: steps from the start to the right end.
    #[arg(long)]
    pub right: Option<u32>,
    /// Ruin: uniform self-loop probability in [0, 1), e.g. `1/3`.
    #[arg(long)]
    pub hold: Option<String>,
    /// Moran: population size (at least 2).
    #[arg(long)]
    pub n: Option<u32>,
    /// Moran: initial count of the tracked type (0..=n).
    #[arg(long)]
    pub k: Option<u32>,
    /// Drunkard: blocks between bar and home.
    #[arg(long)]
    pub blocks: Option<u32>,
    /// Graph: undirected edges as `a-b,c-d` vertex index pairs.
    #[arg(long)]
    pub edges: Option<String>,
    /// Graph: absorbing target vertices as `a,b`.
    #[arg(long)]
    pub targets: Option<String>,
    /// Graph: per-step cost applied to every vertex (rational).
    #[arg(long)]
    pub cost: Option<String>,
}

fn parse_rational_flag(name: &str, value: &str) -> Result<Rational, CliError> {
    parse_rational(value)
        .ok_or_else(|| CliError::usage(format!("--{name} expects a rational, got `{value}`")))
}

fn require<T: Copy>(model: &str, name: &str, value: Option<T>) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("--model {model} requires --{name}")))
}

fn parse_index_list(name: &str, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("--{name}: bad vertex index `{tok}`")))
        })
        .collect()
}

fn parse_edge_list(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    text.split(',')
        .map(|tok| {
            let (a, b) = tok
                .trim()
                .split_once('-')
                .ok_or_else(|| CliError::usage(format!("--edges: expected `a-b`, got `{tok}`")))?;
            let a = a
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("--edges: bad vertex index `{a}`")))?;
            let b = b
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("--edges: bad vertex index `{b}`")))?;
            Ok((a, b))
        })
        .collect()
}

/// Builds the spec for a model from its flags.
pub fn build_model(kind: ModelKind, flags: &ModelFlags) -> Result<ChainSpec, CliError> {
    let spec = match kind {
        ModelKind::Ruin => {
            let left = require("ruin", "left", flags.left)?;
            let right = require("ruin", "right", flags.right)?;
            let hold = match &flags.hold {
                Some(text) => parse_rational_flag("hold", text)?,
                None => zero(),
            };
            models::gamblers_ruin_with_hold(left, right, &hold)
        }
        ModelKind::Moran => {
            let n = require("moran", "n", flags.n)?;
            let k = require("moran", "k", flags.k)?;
            models::moran(n, k)
        }
        ModelKind::Drunkard => {
            let blocks = require("drunkard", "blocks", flags.blocks)?;
            models::drunkard(blocks)
        }
        ModelKind::Graph => {
            let edges_text = flags
                .edges
                .as_deref()
                .ok_or_else(|| CliError::usage("--model graph requires --edges"))?;
            let targets_text = flags
                .targets
                .as_deref()
                .ok_or_else(|| CliError::usage("--model graph requires --targets"))?;
            let edges = parse_edge_list(edges_text)?;
            let targets = parse_index_list("targets", targets_text)?;
            let cost = match &flags.cost {
                Some(text) => parse_rational_flag("cost", text)?,
                None => one(),
            };
            let vertices = edges
                .iter()
                .flat_map(|&(a, b)| [a, b])
                .chain(targets.iter().copied())
                .max()
                .map_or(0, |m| m + 1);
            models::graph_walk(vertices, &edges, &targets, &cost)
        }
    };
    spec.map_err(|e| CliError::domain(e.to_string()))
}

/// A chain ready to analyze.
pub struct LoadedChain {
    pub chain: CanonicalChain,
    /// Canonical start index.
    pub start: usize,
    /// Where the chain came from, for report headers.
    pub origin: String,
}

/// Resolves the input source, parses/builds it, validates, and picks the
/// start state.
pub fn load_chain(
    input: Option<&PathBuf>,
    model: Option<ModelKind>,
    flags: &ModelFlags,
    start_override: Option<&str>,
) -> Result<LoadedChain, CliError> {
    let (spec, origin) = match (input, model) {
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "give either a chain file or --model, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::usage(
                "give a chain file or pick a built-in with --model",
            ))
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::domain(format!("{}: {e}", path.display()))
            })?;
            let doc = chainfile::parse(&text).map_err(|e| {
                CliError::domain(format!("{}:{e}", path.display()))
            })?;
            (doc.spec, path.display().to_string())
        }
        (None, Some(kind)) => {
            let spec = build_model(kind, flags)?;
            (spec, format!("{kind:?}").to_lowercase())
        }
    };

    let chain = validate(&spec).map_err(|e| CliError::domain(e.to_string()))?;
    let start = match start_override {
        Some(name) => chain
            .index_of(name)
            .ok_or_else(|| CliError::domain(format!("unknown start state `{name}`")))?,
        None => chain.start().unwrap_or(0),
    };
    Ok(LoadedChain {
        chain,
        start,
        origin,
    })
}
