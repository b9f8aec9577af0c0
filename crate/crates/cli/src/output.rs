//! Report rendering. Human tables by default, or `--format tsv` lines of
//! `metric <tab> state <tab> value-as-fraction <tab> value-as-decimal`.
//! Decimals render at 12 significant digits from exact long division, so
//! output never drifts with platform floating point.

use chainkit::chain::CanonicalChain;
use chainkit::rational::{decimal_string, to_f64, Rational};
use chainkit::sim::TrialStats;
use chainkit::solve::SolveReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Tsv,
}

const SIG_DIGITS: u32 = 12;

fn dec(value: &Rational) -> String {
    decimal_string(value, SIG_DIGITS)
}

/// `fraction (decimal)` pair for human tables.
fn pair(value: &Rational) -> String {
    format!("{} ({})", value, dec(value))
}

pub fn render_solve(
    chain: &CanonicalChain,
    report: &SolveReport,
    start: usize,
    origin: &str,
    format: Format,
) -> String {
    match format {
        Format::Tsv => render_solve_tsv(chain, report),
        Format::Human => render_solve_human(chain, report, start, origin),
    }
}

fn render_solve_tsv(chain: &CanonicalChain, report: &SolveReport) -> String {
    let mut out = String::new();
    let nt = chain.n_transient();
    for i in 0..nt {
        for (a, aname) in chain.absorbing_names().iter().enumerate() {
            let v = &report.b[(i, a)];
            out.push_str(&format!(
                "absorb_{aname}\t{}\t{}\t{}\n",
                chain.name(i),
                v,
                dec(v)
            ));
        }
    }
    for i in 0..nt {
        let v = &report.t[i];
        out.push_str(&format!(
            "expected_cost\t{}\t{}\t{}\n",
            chain.name(i),
            v,
            dec(v)
        ));
    }
    for i in 0..nt {
        for j in 0..nt {
            let v = &report.n[(i, j)];
            out.push_str(&format!(
                "visits_{}\t{}\t{}\t{}\n",
                chain.name(j),
                chain.name(i),
                v,
                dec(v)
            ));
        }
    }
    out
}

fn render_solve_human(
    chain: &CanonicalChain,
    report: &SolveReport,
    start: usize,
    origin: &str,
) -> String {
    let mut out = String::new();
    let nt = chain.n_transient();
    out.push_str(&format!(
        "chain {origin}: {nt} transient, {} absorbing; start {}\n",
        chain.n_absorbing(),
        chain.name(start)
    ));
    out.push_str("\nabsorption probabilities:\n");
    for i in 0..nt {
        let cells: Vec<String> = chain
            .absorbing_names()
            .iter()
            .enumerate()
            .map(|(a, name)| format!("{name} = {}", pair(&report.b[(i, a)])))
            .collect();
        out.push_str(&format!("  from {}: {}\n", chain.name(i), cells.join(", ")));
    }
    out.push_str("\nexpected cost to absorption:\n");
    for i in 0..nt {
        out.push_str(&format!("  from {}: {}\n", chain.name(i), pair(&report.t[i])));
    }
    out.push_str("\nexpected visits:\n");
    for i in 0..nt {
        let cells: Vec<String> = (0..nt)
            .map(|j| format!("{} = {}", chain.name(j), pair(&report.n[(i, j)])))
            .collect();
        out.push_str(&format!("  from {}: {}\n", chain.name(i), cells.join(", ")));
    }
    if !chain.is_absorbing(start) {
        let cells: Vec<String> = chain
            .absorbing_names()
            .iter()
            .enumerate()
            .map(|(a, name)| format!("{name} = {}", pair(&report.b[(start, a)])))
            .collect();
        out.push_str(&format!(
            "\nstart {}: expected cost {}; absorption {}\n",
            chain.name(start),
            pair(&report.t[start]),
            cells.join(", ")
        ));
    }
    out
}

/// Deviation of an estimate from the exact value in standard errors.
fn deviation(estimate: f64, exact: f64, std_err: f64) -> f64 {
    if std_err > 0.0 {
        (estimate - exact) / std_err
    } else if estimate == exact {
        0.0
    } else {
        f64::INFINITY
    }
}

pub struct SimulateReport<'a> {
    pub chain: &'a CanonicalChain,
    pub stats: &'a TrialStats,
    pub start: usize,
    pub origin: &'a str,
    /// Exact absorption distribution from the start state.
    pub exact_absorb: &'a [Rational],
    /// Exact expected steps from the start (zero when absorbing).
    pub exact_steps: Rational,
    /// Exact expected cost from the start (zero when absorbing).
    pub exact_cost: Rational,
    pub max_steps: u64,
}

pub fn render_simulate(report: &SimulateReport, format: Format) -> String {
    let stats = report.stats;
    let chain = report.chain;
    let mut rows: Vec<(String, String, f64, &Rational, f64)> = Vec::new();
    for (a, aname) in chain.absorbing_names().iter().enumerate() {
        let est = stats.absorb_frequency(a);
        let exact = &report.exact_absorb[a];
        let dev = deviation(est, to_f64(exact), stats.absorb_std_err(a));
        rows.push((
            format!("absorb_{aname}"),
            chain.name(report.start).to_string(),
            est,
            exact,
            dev,
        ));
    }
    rows.push((
        "mean_steps".into(),
        chain.name(report.start).to_string(),
        stats.mean_steps(),
        &report.exact_steps,
        deviation(
            stats.mean_steps(),
            to_f64(&report.exact_steps),
            stats.steps_std_err(),
        ),
    ));
    rows.push((
        "mean_cost".into(),
        chain.name(report.start).to_string(),
        stats.mean_cost(),
        &report.exact_cost,
        deviation(
            stats.mean_cost(),
            to_f64(&report.exact_cost),
            stats.cost_std_err(),
        ),
    ));

    match format {
        Format::Tsv => {
            let mut out = String::new();
            out.push_str(&format!(
                "trials\t{}\nseed\t{}\nstart\t{}\nmax_steps\t{}\n",
                stats.trials,
                stats.master_seed,
                chain.name(report.start),
                report.max_steps
            ));
            for (metric, state, est, exact, dev) in &rows {
                out.push_str(&format!(
                    "{metric}\t{state}\t{est:.6}\t{exact}\t{}\t{dev:.2}\n",
                    dec(exact)
                ));
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            out.push_str(&format!(
                "simulate {}: {} trials, seed {}, start {}, step budget {}\n\n",
                report.origin,
                stats.trials,
                stats.master_seed,
                chain.name(report.start),
                report.max_steps
            ));
            out.push_str("metric            estimate      exact                 dev(se)\n");
            for (metric, _, est, exact, dev) in &rows {
                out.push_str(&format!(
                    "{metric:<17} {est:<13.6} {:<21} {dev:.2}\n",
                    pair(exact)
                ));
            }
            out.push_str(&format!(
                "\nabsorbed per state: {}\n",
                chain
                    .absorbing_names()
                    .iter()
                    .enumerate()
                    .map(|(a, name)| format!("{name} {}", stats.absorb_counts[a]))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            out
        }
    }
}
