//! Isomorph-free exhaustive search for `ex(n,F)`, `ex_λ(n,F)` and `ex_q(n,F)`.
//!
//! Graphs are generated by canonical augmentation: a child of an
//! `(k-1)`-vertex representative is obtained by adding vertex `k-1` with an
//! arbitrary neighbourhood, and is kept only if
//!
//! * the new vertex has minimum degree,
//! * deleting the canonical deletion vertex (the last minimum-degree vertex in
//!   canonical order) gives back the parent's isomorphism class, and
//! * it is the first child of this parent in its own class.
//!
//! Each class then has exactly one parent class, so the output contains one
//! representative per isomorphism class without a global seen-set.
//! F-freeness is hereditary, so only F-free parents need extending.
//!
//! In [`SearchMode::MaximalOnly`] the last level keeps only edge-maximal
//! F-free graphs. All three measures are monotone under edge addition, so the
//! maximum over maximal graphs equals the maximum over all F-free graphs.
//!
//! The prefixes at depth `n - 2` are distributed over a rayon pool. Results
//! merge by maximum value and union of witnesses; the merge is associative
//! and commutative, so the output does not depend on the worker count.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::canon::{canonical_form, canonical_labeling};
use crate::graph::{bits, Graph};
use crate::pattern::{contains_subgraph, contains_subgraph_through, ForbiddenPattern};
use crate::spectra::{spectral_radius, MatrixKind, DEFAULT_TOL};

/// Largest `n` for [`SearchMode::AllGraphs`].
pub const CAP_ALL_GRAPHS: usize = 12;
/// Largest `n` for [`SearchMode::MaximalOnly`].
pub const CAP_MAXIMAL_ONLY: usize = 14;
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Two measured values closer than this are the same extremal value.
pub const VALUE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Edges,
    AdjacencyRadius,
    QRadius,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Edges, Measure::AdjacencyRadius, Measure::QRadius];

    /// Short name used on the command line and in cache paths.
    pub fn short_name(self) -> &'static str {
        match self {
            Measure::Edges => "edges",
            Measure::AdjacencyRadius => "lambda",
            Measure::QRadius => "q",
        }
    }

    pub fn evaluate(self, g: &Graph, tol: f64) -> f64 {
        let radius = |kind| spectral_radius(g, kind, tol).expect("dense fallback converges").value;
        match self {
            Measure::Edges => g.edge_count() as f64,
            Measure::AdjacencyRadius => radius(MatrixKind::Adjacency),
            Measure::QRadius => radius(MatrixKind::SignlessLaplacian),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    AllGraphs,
    MaximalOnly,
}

impl SearchMode {
    pub fn cap(self) -> usize {
        match self {
            SearchMode::AllGraphs => CAP_ALL_GRAPHS,
            SearchMode::MaximalOnly => CAP_MAXIMAL_ONLY,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_n: usize,
    pub mode: SearchMode,
    pub workers: usize,
    pub cache_dir: Option<PathBuf>,
    pub tol: f64,
    /// Abort once this many candidate children have been generated.
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_n: CAP_ALL_GRAPHS,
            mode: SearchMode::AllGraphs,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            cache_dir: None,
            tol: DEFAULT_TOL,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SearchConfig {
    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self.max_n = mode.cap();
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_cache_dir(mut self, dir: Option<PathBuf>) -> Self {
        self.cache_dir = dir;
        self
    }

    fn check(&self, n: usize) -> Result<(), SearchError> {
        let cap = self.mode.cap().min(self.max_n);
        if n == 0 || n > cap {
            return Err(SearchError::OverCap { n, cap, mode: self.mode });
        }
        Ok(())
    }

    /// Hash over everything that can change a completed record. The worker
    /// count and budget are excluded.
    pub fn record_hash(&self, n: usize, pattern: &ForbiddenPattern, measure: Measure) -> String {
        let key = format!(
            "spectral-turan/{}|{}|{}|{}|{:?}|{:e}",
            env!("CARGO_PKG_VERSION"),
            pattern.graph.to_graph6(),
            measure.short_name(),
            n,
            self.mode,
            self.tol
        );
        Sha256::digest(key.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub pattern: ForbiddenPattern,
    pub measure: Measure,
    pub mode: SearchMode,
    pub value: f64,
    /// Canonical graph6 strings, sorted.
    pub witnesses: Vec<String>,
    pub graphs_examined: u64,
    /// Set when the search stopped at the budget; `value` is then a lower bound.
    #[serde(default)]
    pub partial: bool,
    /// Not serialised, so that output is reproducible across runs.
    #[serde(skip)]
    pub wallclock: Duration,
}

impl ExtremalRecord {
    pub fn witness_graphs(&self) -> Vec<Graph> {
        self.witnesses.iter().map(|w| Graph::from_graph6(w).expect("witnesses are valid graph6")).collect()
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("n = {n} is outside 1..={cap} for {mode:?}")]
    OverCap { n: usize, cap: usize, mode: SearchMode },
    #[error("budget exhausted after {examined} candidate graphs")]
    Budget { examined: u64, partial: Option<Box<ExtremalRecord>> },
    #[error("no F-free graph on {n} vertices")]
    EmptyDomain { n: usize },
    #[error("cache error at {}: {reason}", path.display())]
    Cache { path: PathBuf, reason: String },
}

/// An isomorphism class representative in canonical labelling.
#[derive(Clone, Debug)]
struct Node {
    graph: Graph,
    code: String,
}

struct Generator<'a> {
    pattern: Option<&'a ForbiddenPattern>,
    mode: SearchMode,
    n: usize,
    examined: AtomicU64,
    budget: u64,
    stopped: AtomicBool,
}

impl Generator<'_> {
    fn contains_through(&self, g: &Graph, v: usize) -> bool {
        self.pattern.is_some_and(|f| contains_subgraph_through(g, f, v))
    }

    /// Adding any missing edge at `v` creates a copy of the pattern.
    fn saturated_at(&self, g: &Graph, v: usize) -> bool {
        let missing = g.vertex_mask() & !g.row(v) & !(1 << v);
        bits(missing).all(|u| self.contains_through(&g.with_edge_unchecked(u, v), v))
    }

    fn saturated(&self, g: &Graph) -> bool {
        (0..g.n()).all(|v| self.saturated_at(g, v))
    }

    fn children(&self, parent: &Node) -> Vec<Node> {
        let g = &parent.graph;
        let k = g.n();
        let last = k + 1 == self.n;
        let maximal = last && self.mode == SearchMode::MaximalOnly;
        let masks = 1u64 << k;
        let before = self.examined.fetch_add(masks, Ordering::Relaxed);
        if before + masks > self.budget {
            self.stopped.store(true, Ordering::Relaxed);
        }
        if self.stopped.load(Ordering::Relaxed) {
            return Vec::new();
        }
        let degs: Vec<u32> = g.rows().iter().map(|r| r.count_ones()).collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for mask in 0..masks {
            let d = mask.count_ones();
            if degs.iter().enumerate().any(|(i, &di)| di + ((mask >> i & 1) as u32) < d) {
                continue;
            }
            let child = g.add_vertex_unchecked(mask);
            if self.contains_through(&child, k) {
                continue;
            }
            if maximal && !self.saturated_at(&child, k) {
                continue;
            }
            let canon = canonical_labeling(&child);
            let min_deg = d as usize;
            let w = *canon.labeling.iter().rev().find(|&&u| child.degree(u) == min_deg).expect("new vertex has min degree");
            if w != k && canonical_form(&child.delete_vertex_unchecked(w)) != parent.code {
                continue;
            }
            if !seen.insert(canon.code.clone()) {
                continue;
            }
            if maximal && !self.saturated(&canon.graph) {
                continue;
            }
            out.push(Node { graph: canon.graph, code: canon.code });
        }
        out
    }

    fn root(&self) -> Option<Node> {
        let k1 = Graph::empty(1).expect("one vertex");
        if self.pattern.is_some_and(|f| contains_subgraph(&k1, f)) {
            return None;
        }
        let code = k1.to_graph6();
        Some(Node { graph: k1, code })
    }

    fn dfs<A>(&self, node: &Node, acc: &mut A, leaf: &(impl Fn(&mut A, &Node) + Sync)) {
        if node.graph.n() == self.n {
            leaf(acc, node);
            return;
        }
        for child in self.children(node) {
            self.dfs(&child, acc, leaf);
        }
    }

    /// Fold `leaf` over one representative of every class at order `n`.
    fn run<A: Send>(
        &self,
        workers: usize,
        init: impl Fn() -> A + Sync + Send,
        leaf: impl Fn(&mut A, &Node) + Sync + Send,
        merge: impl Fn(A, A) -> A + Sync + Send,
    ) -> A {
        let Some(root) = self.root() else {
            return init();
        };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
        pool.install(|| {
            let depth = self.n.saturating_sub(2).max(1);
            let mut level = vec![root];
            for _ in 1..depth {
                let mut next: Vec<Node> = level.par_iter().flat_map_iter(|p| self.children(p)).collect();
                next.sort_by(|a, b| a.code.cmp(&b.code));
                level = next;
            }
            level
                .par_iter()
                .fold(&init, |mut acc, p| {
                    self.dfs(p, &mut acc, &leaf);
                    acc
                })
                .reduce(&init, &merge)
        })
    }
}

fn generator(n: usize, pattern: Option<&ForbiddenPattern>, mode: SearchMode, budget: u64) -> Generator<'_> {
    Generator { pattern, mode, n, examined: AtomicU64::new(0), budget, stopped: AtomicBool::new(false) }
}

/// One canonical representative per isomorphism class of F-free graphs on
/// `n` vertices (or of edge-maximal ones), sorted by canonical graph6 string.
/// `pattern = None` enumerates all graphs.
pub fn enumerate_free(n: usize, pattern: Option<&ForbiddenPattern>, config: &SearchConfig) -> Result<Vec<Graph>, SearchError> {
    config.check(n)?;
    let gen = generator(n, pattern, config.mode, config.budget);
    let mut nodes = gen.run(
        config.workers,
        Vec::new,
        |acc: &mut Vec<Node>, node| acc.push(node.clone()),
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    );
    let examined = gen.examined.load(Ordering::Relaxed);
    if gen.stopped.load(Ordering::Relaxed) {
        return Err(SearchError::Budget { examined, partial: None });
    }
    nodes.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(nodes.into_iter().map(|n| n.graph).collect())
}

/// Best value seen so far and every graph within [`VALUE_EPS`] of it.
#[derive(Clone, Debug, Default)]
struct Best {
    value: Option<f64>,
    witnesses: Vec<(f64, String)>,
}

impl Best {
    fn offer(&mut self, value: f64, code: &str) {
        match self.value {
            Some(b) if value < b - VALUE_EPS => return,
            Some(b) if value > b => {
                self.value = Some(value);
                self.witnesses.retain(|(v, _)| *v >= value - VALUE_EPS);
            }
            None => self.value = Some(value),
            _ => {}
        }
        self.witnesses.push((value, code.to_string()));
    }

    fn merge(mut self, other: Best) -> Best {
        for (v, c) in other.witnesses {
            self.offer(v, &c);
        }
        self
    }
}

/// `ex(n,F)`, `ex_λ(n,F)` or `ex_q(n,F)` for each requested measure, from a
/// single enumeration. Does not consult the cache.
pub fn extremal_many(
    n: usize,
    pattern: &ForbiddenPattern,
    measures: &[Measure],
    config: &SearchConfig,
) -> Result<Vec<ExtremalRecord>, SearchError> {
    config.check(n)?;
    let start = Instant::now();
    let gen = generator(n, Some(pattern), config.mode, config.budget);
    let tol = config.tol;
    let bests = gen.run(
        config.workers,
        || vec![Best::default(); measures.len()],
        |acc: &mut Vec<Best>, node| {
            for (b, m) in acc.iter_mut().zip(measures) {
                b.offer(m.evaluate(&node.graph, tol), &node.code);
            }
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
    );
    let examined = gen.examined.load(Ordering::Relaxed);
    let partial = gen.stopped.load(Ordering::Relaxed);
    let wallclock = start.elapsed();
    let records: Vec<ExtremalRecord> = bests
        .into_iter()
        .zip(measures)
        .filter_map(|(b, &measure)| {
            let value = b.value?;
            let mut witnesses: Vec<String> = b.witnesses.into_iter().map(|(_, c)| c).collect();
            witnesses.sort();
            witnesses.dedup();
            Some(ExtremalRecord {
                n,
                pattern: pattern.clone(),
                measure,
                mode: config.mode,
                value,
                witnesses,
                graphs_examined: examined,
                partial,
                wallclock,
            })
        })
        .collect();
    if partial {
        return Err(SearchError::Budget { examined, partial: records.into_iter().next().map(Box::new) });
    }
    if records.len() != measures.len() {
        return Err(SearchError::EmptyDomain { n });
    }
    Ok(records)
}

/// The extremal value of `measure` over F-free graphs on `n` vertices,
/// served from the cache when `config.cache_dir` is set.
pub fn extremal(n: usize, pattern: &ForbiddenPattern, measure: Measure, config: &SearchConfig) -> Result<ExtremalRecord, SearchError> {
    let mut records = extremal_cached(n, pattern, &[measure], config)?;
    Ok(records.remove(0))
}

/// Like [`extremal_many`], reading and writing the cache when configured.
pub fn extremal_cached(
    n: usize,
    pattern: &ForbiddenPattern,
    measures: &[Measure],
    config: &SearchConfig,
) -> Result<Vec<ExtremalRecord>, SearchError> {
    let Some(dir) = &config.cache_dir else {
        return extremal_many(n, pattern, measures, config);
    };
    let loaded = measures.iter().map(|&m| cache::load(dir, n, pattern, m, config)).collect::<Result<Vec<_>, _>>()?;
    let cached: Option<Vec<ExtremalRecord>> = loaded.into_iter().collect();
    if let Some(records) = cached {
        return Ok(records);
    }
    let records = extremal_many(n, pattern, measures, config)?;
    for r in &records {
        cache::store(dir, r, config)?;
    }
    Ok(records)
}

/// Do the full and edge-maximal enumerations agree on the extremal value?
pub fn equivalence_check(n: usize, pattern: &ForbiddenPattern, measure: Measure, config: &SearchConfig) -> Result<bool, SearchError> {
    if n > 8 {
        return Err(SearchError::OverCap { n, cap: 8, mode: SearchMode::AllGraphs });
    }
    let mut all = config.clone().with_cache_dir(None);
    all.mode = SearchMode::AllGraphs;
    let mut maximal = all.clone();
    maximal.mode = SearchMode::MaximalOnly;
    let a = extremal_many(n, pattern, &[measure], &all)?.remove(0);
    let b = extremal_many(n, pattern, &[measure], &maximal)?.remove(0);
    Ok((a.value - b.value).abs() <= VALUE_EPS)
}

/// Record persistence under `cache_dir/{pattern}/{measure}/n={k}.json`.
pub mod cache {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        config_hash: String,
        record: ExtremalRecord,
    }

    pub fn path(dir: &Path, n: usize, pattern: &ForbiddenPattern, measure: Measure) -> PathBuf {
        dir.join(pattern.label()).join(measure.short_name()).join(format!("n={n}.json"))
    }

    /// `Ok(None)` when the entry is missing, unreadable or from another config.
    pub fn load(
        dir: &Path,
        n: usize,
        pattern: &ForbiddenPattern,
        measure: Measure,
        config: &SearchConfig,
    ) -> Result<Option<ExtremalRecord>, SearchError> {
        let p = path(dir, n, pattern, measure);
        let Ok(text) = fs::read_to_string(&p) else {
            return Ok(None);
        };
        let Ok(entry) = serde_json::from_str::<Entry>(&text) else {
            return Ok(None);
        };
        if entry.config_hash != config.record_hash(n, pattern, measure) || entry.record.partial {
            return Ok(None);
        }
        Ok(Some(entry.record))
    }

    pub fn store(dir: &Path, record: &ExtremalRecord, config: &SearchConfig) -> Result<(), SearchError> {
        let p = path(dir, record.n, &record.pattern, record.measure);
        let fail = |e: &dyn std::fmt::Display| SearchError::Cache { path: p.clone(), reason: e.to_string() };
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent).map_err(|e| fail(&e))?;
        }
        let entry = Entry { config_hash: config.record_hash(record.n, &record.pattern, record.measure), record: record.clone() };
        let text = serde_json::to_string_pretty(&entry).map_err(|e| fail(&e))?;
        // Write then rename so concurrent readers never see a torn file.
        let tmp = p.with_extension(format!("json.{}.tmp", std::process::id()));
        fs::write(&tmp, text).map_err(|e| fail(&e))?;
        fs::rename(&tmp, &p).map_err(|e| fail(&e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NamedFamily;
    use crate::pattern::is_free;

    fn cfg() -> SearchConfig {
        SearchConfig::default().with_workers(2)
    }

    fn pat(name: &str) -> ForbiddenPattern {
        ForbiddenPattern::from_name(name).unwrap()
    }

    fn labeled(n: usize, code: u64) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if code >> k & 1 == 1 {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Oracle: classes of all labelled graphs on `n` vertices, by canonical form,
    /// filtered with a naive permutation matcher.
    fn brute_free_classes(n: usize, f: Option<&Graph>) -> usize {
        let mut classes = std::collections::BTreeSet::new();
        for c in 0..(1u64 << (n * (n - 1) / 2)) {
            let g = labeled(n, c);
            if f.is_some_and(|f| naive_contains(&g, f)) {
                continue;
            }
            classes.insert(g.canonical_form());
        }
        classes.len()
    }

    fn naive_contains(host: &Graph, f: &Graph) -> bool {
        fn rec(host: &Graph, f: &Graph, map: &mut Vec<usize>, used: u64) -> bool {
            if map.len() == f.n() {
                return f.edges().all(|(a, b)| host.has_edge(map[a], map[b]));
            }
            (0..host.n()).any(|h| {
                used >> h & 1 == 0 && {
                    map.push(h);
                    let ok = rec(host, f, map, used | 1 << h);
                    map.pop();
                    ok
                }
            })
        }
        f.n() <= host.n() && rec(host, f, &mut Vec::new(), 0)
    }

    #[test]
    fn class_counts_without_pattern() {
        let expect = [1, 2, 4, 11, 34, 156, 1044];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(enumerate_free(i + 1, None, &cfg()).unwrap().len(), e, "n = {}", i + 1);
        }
    }

    #[test]
    fn triangle_free_counts_match_brute_force() {
        let k3 = pat("K3");
        assert_eq!(brute_free_classes(3, Some(&k3.graph)), 3);
        assert_eq!(brute_free_classes(4, Some(&k3.graph)), 7);
        for n in 1..=6 {
            let got = enumerate_free(n, Some(&k3), &cfg()).unwrap();
            assert_eq!(got.len(), brute_free_classes(n, Some(&k3.graph)), "n = {n}");
            assert!(got.iter().all(|g| is_free(g, &k3)));
        }
    }

    #[test]
    fn maximal_mode_matches_filtered_brute_force() {
        for name in ["K3", "C4", "K1_3", "P4"] {
            let f = pat(name);
            for n in 2..=6 {
                let all = enumerate_free(n, Some(&f), &cfg()).unwrap();
                let gen = generator(n, Some(&f), SearchMode::MaximalOnly, u64::MAX);
                let expect = all.iter().filter(|g| gen.saturated(g)).count();
                let got = enumerate_free(n, Some(&f), &cfg().with_mode(SearchMode::MaximalOnly)).unwrap();
                assert_eq!(got.len(), expect, "{name} n = {n}");
            }
        }
    }

    #[test]
    fn extremal_examples() {
        let r = extremal(5, &pat("K3"), Measure::Edges, &cfg()).unwrap();
        assert_eq!(r.value, 6.0);

        let r = extremal(6, &pat("K3"), Measure::QRadius, &cfg()).unwrap();
        assert!((r.value - 6.0).abs() < 1e-9);
        let k33 = NamedFamily::CompleteBipartite(3, 3).build().unwrap().canonical_form();
        assert!(r.witnesses.contains(&k33));

        let r = extremal(6, &pat("K1_3"), Measure::QRadius, &cfg()).unwrap();
        assert!((r.value - 4.0).abs() < 1e-9);
        let two_k3 = NamedFamily::DisjointUnion(vec![NamedFamily::Complete(3); 2]).build().unwrap().canonical_form();
        assert!(r.witnesses.contains(&two_k3));
    }

    #[test]
    fn witnesses_are_valid() {
        for name in ["K4", "C5", "K2_3"] {
            let f = pat(name);
            for measure in Measure::ALL {
                let r = extremal(7, &f, measure, &cfg()).unwrap();
                assert!(!r.witnesses.is_empty());
                for w in r.witness_graphs() {
                    assert_eq!(w.n(), 7);
                    assert!(is_free(&w, &f));
                    assert!((measure.evaluate(&w, DEFAULT_TOL) - r.value).abs() <= VALUE_EPS);
                }
                if f.chi >= 3 {
                    let t = NamedFamily::Turan(f.chi - 1, 7).build().unwrap();
                    assert!(r.value >= measure.evaluate(&t, DEFAULT_TOL) - VALUE_EPS);
                }
            }
        }
    }

    #[test]
    fn non_star_bipartite_patterns_admit_the_star() {
        for name in ["C4", "K2_3", "P4", "C6"] {
            let f = pat(name);
            for n in 4..=7 {
                let r = extremal(n, &f, Measure::QRadius, &cfg()).unwrap();
                assert!(r.value >= n as f64 - VALUE_EPS, "{name} n = {n}");
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalence_check(6, &pat("K3"), Measure::QRadius, &cfg()).unwrap());
        assert!(equivalence_check(6, &pat("C4"), Measure::QRadius, &cfg()).unwrap());
        assert!(equivalence_check(5, &pat("K3"), Measure::Edges, &cfg()).unwrap());
        assert!(matches!(equivalence_check(9, &pat("K3"), Measure::Edges, &cfg()), Err(SearchError::OverCap { .. })));
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let f = pat("C4");
        let runs: Vec<_> = [1, 3, 8].iter().map(|&w| extremal_many(7, &f, &Measure::ALL, &cfg().with_workers(w)).unwrap()).collect();
        for r in &runs[1..] {
            for (a, b) in r.iter().zip(&runs[0]) {
                assert_eq!(a.value, b.value);
                assert_eq!(a.witnesses, b.witnesses);
                assert_eq!(a.graphs_examined, b.graphs_examined);
            }
        }
    }

    #[test]
    fn caps_and_budget() {
        assert!(matches!(enumerate_free(13, None, &cfg()), Err(SearchError::OverCap { .. })));
        assert!(matches!(enumerate_free(0, None, &cfg()), Err(SearchError::OverCap { .. })));
        assert!(enumerate_free(13, Some(&pat("K3")), &cfg().with_mode(SearchMode::MaximalOnly).with_budget(10)).is_err());
        match extremal_many(8, &pat("K4"), &[Measure::Edges], &cfg().with_budget(5_000)) {
            Err(SearchError::Budget { examined, partial }) => {
                assert!(examined > 5_000);
                assert!(partial.is_none_or(|p| p.partial));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(matches!(extremal(3, &pat("E1"), Measure::Edges, &cfg()), Err(SearchError::EmptyDomain { n: 3 })));
    }

    #[test]
    fn single_vertex_and_tiny_orders() {
        let r = extremal(1, &pat("K3"), Measure::QRadius, &cfg()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.witnesses, vec!["@".to_string()]);
        let r = extremal(2, &pat("K3"), Measure::Edges, &cfg()).unwrap();
        assert_eq!(r.value, 1.0);
        let r = extremal(3, &pat("K3"), Measure::Edges, &cfg().with_mode(SearchMode::MaximalOnly)).unwrap();
        assert_eq!(r.value, 2.0);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let config = cfg().with_cache_dir(Some(dir.path().to_path_buf()));
        let f = pat("C5");
        let first = extremal(6, &f, Measure::QRadius, &config).unwrap();
        let p = cache::path(dir.path(), 6, &f, Measure::QRadius);
        assert!(p.ends_with("C5/q/n=6.json"));
        assert!(p.exists());
        let second = extremal(6, &f, Measure::QRadius, &config).unwrap();
        assert_eq!(second.value, first.value);
        assert_eq!(second.witnesses, first.witnesses);
        assert_eq!(second.wallclock, Duration::ZERO);
        // Another mode hashes differently and must not reuse the entry.
        let other = config.clone().with_mode(SearchMode::MaximalOnly);
        assert!(cache::load(dir.path(), 6, &f, Measure::QRadius, &other).unwrap().is_none());
        assert_eq!(config.record_hash(6, &f, Measure::QRadius), config.clone().with_workers(7).record_hash(6, &f, Measure::QRadius));
    }
}
