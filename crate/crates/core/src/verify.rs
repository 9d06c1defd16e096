//! Finite-n checks of the inequalities relating `ex`, `ex_λ` and `ex_q`, and
//! convergence tables of the normalised extremal values.
//!
//! Every check produces a [`CheckReport`] with an oriented slack: the
//! inequality holds when `slack >= -tol`. Checks whose hypotheses fail on a
//! given input (typically a disconnected graph, where the minimum Perron
//! entry is zero) report [`Verdict::NotApplicable`] instead of a pass or fail.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{bits, Graph};
use crate::pattern::ForbiddenPattern;
use crate::search::{enumerate_free, extremal_cached, ExtremalRecord, Measure, SearchConfig, SearchError};
use crate::spectra::{max_edge_degree_sum, min_perron_entry, min_perron_vertex, spectral_radius, MatrixKind, SpectralResult, DEFAULT_TOL};

/// Absolute tolerance for every inequality check.
pub const CHECK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Passed,
    Failed,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    /// graph6 string or a description of the `n` range.
    pub graph_or_n: String,
    #[serde(with = "nan_as_null")]
    pub lhs: f64,
    #[serde(with = "nan_as_null")]
    pub rhs: f64,
    #[serde(with = "nan_as_null")]
    pub slack: f64,
    pub passed: bool,
    pub tol: f64,
    pub verdict: Verdict,
}

/// JSON has no NaN; not-applicable reports store their sides as `null`.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

impl CheckReport {
    /// Report for `lhs <= rhs`.
    pub fn at_most(check_id: &str, subject: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::with_slack(check_id, subject, lhs, rhs, rhs - lhs, tol)
    }

    /// Report for `lhs >= rhs`.
    pub fn at_least(check_id: &str, subject: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::with_slack(check_id, subject, lhs, rhs, lhs - rhs, tol)
    }

    /// Report for `lhs == rhs`.
    pub fn equal(check_id: &str, subject: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::with_slack(check_id, subject, lhs, rhs, -(lhs - rhs).abs(), tol)
    }

    pub fn not_applicable(check_id: &str, subject: impl Into<String>, tol: f64) -> Self {
        CheckReport {
            check_id: check_id.to_string(),
            graph_or_n: subject.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            passed: false,
            tol,
            verdict: Verdict::NotApplicable,
        }
    }

    fn with_slack(check_id: &str, subject: impl Into<String>, lhs: f64, rhs: f64, slack: f64, tol: f64) -> Self {
        let passed = slack >= -tol;
        CheckReport {
            check_id: check_id.to_string(),
            graph_or_n: subject.into(),
            lhs,
            rhs,
            slack,
            passed,
            tol,
            verdict: if passed { Verdict::Passed } else { Verdict::Failed },
        }
    }

    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Failed
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialise")
    }
}

fn q_result(g: &Graph) -> SpectralResult {
    spectral_radius(g, MatrixKind::SignlessLaplacian, DEFAULT_TOL).expect("dense fallback converges")
}

/// Deleting a vertex `u` of minimum Perron entry `μ` from a connected graph
/// `H` keeps `q(H-u) >= q(H)(1-2μ²)/(1-μ²) - (1-nμ²)/(1-μ²)`.
pub fn check_vertex_deletion(h: &Graph, tol: f64) -> CheckReport {
    const ID: &str = "vertex_deletion";
    let subject = h.to_graph6();
    if h.n() < 2 || !h.is_connected() {
        return CheckReport::not_applicable(ID, subject, tol);
    }
    let r = q_result(h);
    let mu2 = min_perron_entry(&r).powi(2);
    let u = min_perron_vertex(&r);
    let n = h.n() as f64;
    let bound = r.value * (1.0 - 2.0 * mu2) / (1.0 - mu2) - (1.0 - n * mu2) / (1.0 - mu2);
    let rest = h.delete_vertex(u).expect("n >= 2");
    CheckReport::at_least(ID, subject, q_result(&rest).value, bound, tol)
}

/// With `δ` the minimum degree and `μ > 0` the minimum Perron entry,
/// `q(G) <= δ + sqrt(δ² + (1/(nμ²) - 1)·n·δ)`.
pub fn check_min_entry_bound(g: &Graph, tol: f64) -> CheckReport {
    const ID: &str = "min_entry_bound";
    let subject = g.to_graph6();
    let r = q_result(g);
    let mu = min_perron_entry(&r);
    if !g.is_connected() || mu <= 0.0 {
        return CheckReport::not_applicable(ID, subject, tol);
    }
    let n = g.n() as f64;
    let delta = g.min_degree() as f64;
    let bound = delta + (delta * delta + (1.0 / (n * mu * mu) - 1.0) * n * delta).max(0.0).sqrt();
    CheckReport::at_most(ID, subject, r.value, bound, tol)
}

/// The individual links of `4e/n <= 2λ <= q <= min(2e/(n-1) + n - 2, max_{xy∈E} d(x)+d(y))`.
pub fn bound_chain_links(g: &Graph, tol: f64) -> Vec<CheckReport> {
    let subject = g.to_graph6();
    let n = g.n() as f64;
    let e = g.edge_count() as f64;
    let lambda = spectral_radius(g, MatrixKind::Adjacency, DEFAULT_TOL).expect("dense fallback converges").value;
    let q = q_result(g).value;
    let upper = (2.0 * e / (n - 1.0) + n - 2.0).min(max_edge_degree_sum(g) as f64);
    vec![
        CheckReport::at_most("bound_chain.edges_lambda", subject.clone(), 4.0 * e / n, 2.0 * lambda, tol),
        CheckReport::at_most("bound_chain.lambda_q", subject.clone(), 2.0 * lambda, q, tol),
        CheckReport::at_most("bound_chain.q_upper", subject, q, upper, tol),
    ]
}

/// The weakest link of the bound chain, relabelled as a single report.
pub fn check_bound_chain(g: &Graph, tol: f64) -> CheckReport {
    if g.n() < 2 {
        return CheckReport::not_applicable("bound_chain", g.to_graph6(), tol);
    }
    let mut worst = worst(bound_chain_links(g, tol)).expect("three links");
    worst.check_id = "bound_chain".to_string();
    worst
}

/// Lowest-slack report, preferring failures; not-applicable reports are ignored
/// unless nothing else is present.
pub fn worst(reports: impl IntoIterator<Item = CheckReport>) -> Option<CheckReport> {
    let mut best: Option<CheckReport> = None;
    for r in reports {
        best = match best {
            None => Some(r),
            Some(b) if b.verdict == Verdict::NotApplicable && r.verdict != Verdict::NotApplicable => Some(r),
            Some(b) if r.verdict != Verdict::NotApplicable && r.slack < b.slack => Some(r),
            keep => keep,
        };
    }
    best
}

/// Outcome of a check assembled from many extremal computations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceCheck {
    pub summary: CheckReport,
    pub details: Vec<CheckReport>,
    /// Set when the search budget ran out before `n_max`.
    pub partial: bool,
}

impl SequenceCheck {
    fn assemble(check_id: &str, subject: String, details: Vec<CheckReport>, partial: bool, tol: f64) -> Self {
        let mut summary = worst(details.iter().cloned()).unwrap_or_else(|| CheckReport::not_applicable(check_id, "", tol));
        summary.check_id = check_id.to_string();
        summary.graph_or_n = subject;
        SequenceCheck { summary, details, partial }
    }
}

/// Extremal records for every `n` in `range`, stopping quietly at the first
/// budget exhaustion. Returns the records and whether the run was cut short.
fn extremal_series(
    pattern: &ForbiddenPattern,
    range: RangeInclusive<usize>,
    measures: &[Measure],
    config: &SearchConfig,
) -> Result<(Vec<Vec<ExtremalRecord>>, bool), SearchError> {
    let mut out = Vec::new();
    for n in range {
        match extremal_cached(n, pattern, measures, config) {
            Ok(r) => out.push(r),
            Err(SearchError::Budget { .. }) => return Ok((out, true)),
            Err(e) => return Err(e),
        }
    }
    Ok((out, false))
}

/// `ex_q(n,F)/(n-1)` must not increase with `n`. For each q-extremal witness
/// `H` at order `n >= 3`, with `u` a vertex of minimum Perron entry and
/// `c = (1-nμ²)/((n-2)(1-μ²))`, also checks the chain
///
/// ```text
/// ex_q(n-1)/(n-2) >= q(H-u)/(n-2)
///                 >= q(H)/(n-1) · (1 + 1/(n-2)) · (1-2μ²)/(1-μ²) - c
///                  = q(H)/(n-1) · (1 + c) - c
///                 >= q(H)/(n-1).
/// ```
pub fn check_monotone_sequence(pattern: &ForbiddenPattern, n_max: usize, config: &SearchConfig) -> Result<SequenceCheck, SearchError> {
    const ID: &str = "monotone_sequence";
    let tol = CHECK_TOL;
    let subject = format!("{} n=2..={n_max}", pattern.label());
    if pattern.chi < 3 || n_max < 3 {
        let summary = CheckReport::not_applicable(ID, subject, tol);
        return Ok(SequenceCheck { summary, details: Vec::new(), partial: false });
    }
    let (series, partial) = extremal_series(pattern, 2..=n_max, &[Measure::QRadius], config)?;
    let ex_q: Vec<f64> = series.iter().map(|r| r[0].value).collect();
    let mut details = Vec::new();
    for (i, pair) in ex_q.windows(2).enumerate() {
        let n = i + 2;
        let prev = pair[0] / (n - 1) as f64;
        let next = pair[1] / n as f64;
        details.push(CheckReport::at_most("monotone_sequence.ratio", format!("n={n}..{}", n + 1), next, prev, tol));
    }
    for (i, records) in series.iter().enumerate().skip(1) {
        let n = i + 2;
        let nf = n as f64;
        for h in records[0].witness_graphs() {
            let subject = format!("n={n} {}", h.to_graph6());
            let r = q_result(&h);
            let mu2 = min_perron_entry(&r).powi(2);
            let u = min_perron_vertex(&r);
            let q = r.value;
            let deleted = q_result(&h.delete_vertex(u).expect("n >= 3")).value / (nf - 2.0);
            let c = (1.0 - nf * mu2) / ((nf - 2.0) * (1.0 - mu2));
            let expanded = q / (nf - 1.0) * (1.0 + 1.0 / (nf - 2.0)) * (1.0 - 2.0 * mu2) / (1.0 - mu2) - c;
            let collected = q / (nf - 1.0) * (1.0 + c) - c;
            details.extend([
                CheckReport::at_most("monotone_sequence.hereditary", subject.clone(), deleted, ex_q[i - 1] / (nf - 2.0), tol),
                CheckReport::at_most("monotone_sequence.deletion", subject.clone(), expanded, deleted, tol),
                CheckReport::equal("monotone_sequence.identity", subject.clone(), expanded, collected, tol),
                CheckReport::at_most("monotone_sequence.final", subject, q / (nf - 1.0), collected, tol),
            ]);
        }
    }
    Ok(SequenceCheck::assemble(ID, subject, details, partial, tol))
}

/// Number of components of `g` that are cliques on exactly `t` vertices.
pub fn clique_components(g: &Graph, t: usize) -> usize {
    g.components()
        .into_iter()
        .filter(|&c| c.count_ones() as usize == t && bits(c).all(|v| (g.row(v) & c).count_ones() as usize == t - 1))
        .count()
}

/// For `F = K_{1,t}` and each `n` in `range`: `ex_q(n,F) = 2(t-1)`, and some
/// extremal witness contains `⌊n/t⌋` components equal to `K_t`.
pub fn check_star_theorem(t: usize, range: RangeInclusive<usize>, config: &SearchConfig) -> Result<SequenceCheck, SearchError> {
    const ID: &str = "star_theorem";
    let tol = 1e-9;
    let subject = format!("K1_{t} n={}..={}", range.start(), range.end());
    if t < 2 || *range.start() < t {
        let summary = CheckReport::not_applicable(ID, subject, tol);
        return Ok(SequenceCheck { summary, details: Vec::new(), partial: false });
    }
    let pattern = ForbiddenPattern::from_name(&format!("K1_{t}")).expect("star names parse");
    let start = *range.start();
    let (series, partial) = extremal_series(&pattern, range, &[Measure::QRadius], config)?;
    let target = 2.0 * (t as f64 - 1.0);
    let mut details = Vec::new();
    for (i, records) in series.iter().enumerate() {
        let n = start + i;
        let rec = &records[0];
        details.push(CheckReport::equal("star_theorem.value", format!("n={n}"), rec.value, target, tol));
        let copies = rec.witness_graphs().iter().map(|w| clique_components(w, t)).max().unwrap_or(0);
        details.push(CheckReport::at_least("star_theorem.witness", format!("n={n}"), copies as f64, (n / t) as f64, 0.0));
    }
    Ok(SequenceCheck::assemble(ID, subject, details, partial, tol))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ex_edges: f64,
    pub ex_lambda: f64,
    pub ex_q: f64,
    pub ratio_edges: f64,
    pub ratio_lambda: f64,
    pub ratio_q_n: f64,
    pub ratio_q_n1: f64,
    pub mu_sq_times_n: f64,
}

impl ConvergenceRow {
    pub const COLUMNS: [&'static str; 9] =
        ["n", "ex_edges", "ex_lambda", "ex_q", "ratio_edges", "ratio_lambda", "ratio_q_n", "ratio_q_n1", "mu_sq_times_n"];

    pub fn values(&self) -> [f64; 9] {
        [
            self.n as f64,
            self.ex_edges,
            self.ex_lambda,
            self.ex_q,
            self.ratio_edges,
            self.ratio_lambda,
            self.ratio_q_n,
            self.ratio_q_n1,
            self.mu_sq_times_n,
        ]
    }
}

/// Limits the ratio columns tend to as `n` grows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Targets {
    pub ratio_edges: f64,
    pub ratio_lambda: f64,
    pub ratio_q_n: f64,
}

impl Targets {
    /// `π = 1 - 1/(χ-1)` for `ex/C(n,2)` and `ex_λ/n`, and `2π` for `ex_q/n`.
    /// Bipartite patterns have `π = 0`; for them `ex_q/n` tends to 1 unless the
    /// pattern is a star, where `ex_q` stays bounded.
    pub fn for_pattern(f: &ForbiddenPattern) -> Targets {
        if f.chi >= 3 {
            let pi = 1.0 - 1.0 / (f.chi as f64 - 1.0);
            Targets { ratio_edges: pi, ratio_lambda: pi, ratio_q_n: 2.0 * pi }
        } else {
            let q = if f.is_star() || f.graph.edge_count() == 0 { 0.0 } else { 1.0 };
            Targets { ratio_edges: 0.0, ratio_lambda: 0.0, ratio_q_n: q }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub pattern: String,
    pub rows: Vec<ConvergenceRow>,
    pub targets: Targets,
    /// Set when the search budget ran out before `n_max`.
    pub partial: bool,
}

/// One row per `n` in `2..=n_max`. `n = 1` is omitted because `ex_q/(n-1)`
/// is undefined there.
pub fn convergence_table(pattern: &ForbiddenPattern, n_max: usize, config: &SearchConfig) -> Result<ConvergenceTable, SearchError> {
    let (series, partial) = extremal_series(pattern, 2..=n_max, &Measure::ALL, config)?;
    let rows = series
        .iter()
        .map(|r| {
            let n = r[0].n;
            let nf = n as f64;
            let (e, l, q) = (r[0].value, r[1].value, r[2].value);
            let witness = &r[2].witness_graphs()[0];
            let mu = min_perron_entry(&q_result(witness));
            ConvergenceRow {
                n,
                ex_edges: e,
                ex_lambda: l,
                ex_q: q,
                ratio_edges: e / (nf * (nf - 1.0) / 2.0),
                ratio_lambda: l / nf,
                ratio_q_n: q / nf,
                ratio_q_n1: q / (nf - 1.0),
                mu_sq_times_n: nf * mu * mu,
            }
        })
        .collect();
    Ok(ConvergenceTable { pattern: pattern.label(), rows, targets: Targets::for_pattern(pattern), partial })
}

/// Every connected graph on `2..=n_max` vertices, one per isomorphism class,
/// ordered by `n` then canonical graph6.
pub fn connected_graphs(n_max: usize, config: &SearchConfig) -> Result<Vec<Graph>, SearchError> {
    all_graphs(n_max, config).map(|gs| gs.into_iter().filter(Graph::is_connected).collect())
}

/// Every graph on `2..=n_max` vertices, one per isomorphism class.
pub fn all_graphs(n_max: usize, config: &SearchConfig) -> Result<Vec<Graph>, SearchError> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.extend(enumerate_free(n, None, config)?);
    }
    Ok(out)
}

/// `count` graphs on `n` vertices from a fixed seed. Each graph draws its own
/// edge density uniformly from `(0, 1)` so that sparse and dense graphs both
/// appear.
pub fn random_graphs(n: usize, count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..count)
        .map(|_| {
            let p: f64 = rng.random();
            let edges: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).filter(|_| rng.random_bool(p)).collect();
            Graph::from_edges(n, &edges).expect("valid edges")
        })
        .collect()
}

/// Apply `check` to every graph in parallel, keeping the input order.
pub fn sweep(graphs: &[Graph], check: impl Fn(&Graph) -> CheckReport + Sync) -> Vec<CheckReport> {
    graphs.par_iter().map(&check).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub check_id: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    pub worst: Option<CheckReport>,
}

pub fn summarize(check_id: &str, reports: &[CheckReport]) -> SweepSummary {
    let count = |v| reports.iter().filter(|r| r.verdict == v).count();
    SweepSummary {
        check_id: check_id.to_string(),
        total: reports.len(),
        passed: count(Verdict::Passed),
        failed: count(Verdict::Failed),
        not_applicable: count(Verdict::NotApplicable),
        worst: worst(reports.iter().cloned()),
    }
}

/// Plain-text table with one line per summary.
pub fn summary_table(summaries: &[SweepSummary]) -> String {
    let mut out = format!("{:<20} {:>8} {:>8} {:>8} {:>8} {:>14}\n", "check", "total", "passed", "failed", "n/a", "worst slack");
    for s in summaries {
        let slack = s.worst.as_ref().filter(|w| !w.slack.is_nan()).map_or("-".to_string(), |w| format!("{:.3e}", w.slack));
        out.push_str(&format!("{:<20} {:>8} {:>8} {:>8} {:>8} {:>14}\n", s.check_id, s.total, s.passed, s.failed, s.not_applicable, slack));
    }
    out
}
