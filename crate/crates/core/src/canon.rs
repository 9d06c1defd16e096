//! Canonical labelling by partition refinement.
//!
//! The search individualises one vertex of the first smallest non-singleton
//! cell, refines to an equitable partition, and recurses. Every discrete
//! partition is a candidate labelling; the winner is the one whose graph6
//! bit string is lexicographically smallest. Two leaves with equal strings
//! yield an automorphism, and automorphisms fixing the current path are used
//! to skip equivalent branches.

use std::collections::HashSet;

use crate::graph::{bits, Graph};

/// A graph together with its canonical relabelling.
#[derive(Clone, Debug)]
pub struct Canonical {
    /// `self.graph` is the input relabelled so that canonical position `i`
    /// holds input vertex `labeling[i]`.
    pub graph: Graph,
    pub labeling: Vec<usize>,
    /// graph6 string of `graph`; equal for two inputs iff they are isomorphic.
    pub code: String,
}

pub fn canonical_form(g: &Graph) -> String {
    canonical_labeling(g).code
}

pub fn canonical_labeling(g: &Graph) -> Canonical {
    let n = g.n();
    let mut search = Search { g, words: (n * n.saturating_sub(1) / 2).div_ceil(64), best: None, first: None, autos: Vec::new(), known: HashSet::new() };
    let mut path = Vec::new();
    search.descend(vec![g.vertex_mask()], &mut path);
    let (_, labeling) = search.best.expect("search visits at least one leaf");
    let graph = g.permuted(&labeling);
    let code = graph.to_graph6();
    Canonical { graph, labeling, code }
}

/// Split cells until every vertex of a cell has the same number of
/// neighbours in every other cell. Sub-cells are ordered by that count, so
/// the result does not depend on the labelling.
fn refine(g: &Graph, cells: &mut Vec<u64>) {
    let mut buckets: Vec<(u32, u64)> = Vec::new();
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let splitter = cells[s];
            let mut next = Vec::with_capacity(cells.len() + 1);
            for &cell in cells.iter() {
                if cell.count_ones() == 1 {
                    next.push(cell);
                    continue;
                }
                buckets.clear();
                for v in bits(cell) {
                    let c = (g.row(v) & splitter).count_ones();
                    match buckets.iter_mut().find(|(k, _)| *k == c) {
                        Some((_, m)) => *m |= 1 << v,
                        None => buckets.push((c, 1 << v)),
                    }
                }
                buckets.sort_unstable_by_key(|&(k, _)| k);
                next.extend(buckets.iter().map(|&(_, m)| m));
            }
            if next.len() != cells.len() {
                changed = true;
                *cells = next;
            }
            s += 1;
        }
        if !changed {
            break;
        }
    }
}

/// Union-find over vertices, fed with the automorphisms that fix the
/// current search path.
struct Orbits {
    parent: Vec<usize>,
    /// Number of entries of `Search::autos` already merged.
    applied: usize,
}

impl Orbits {
    fn new(n: usize) -> Self {
        Orbits { parent: (0..n).collect(), applied: 0 }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn join(&mut self, gamma: &[u8]) {
        for (x, &y) in gamma.iter().enumerate() {
            let (a, b) = (self.find(x), self.find(y as usize));
            if a != b {
                self.parent[a] = b;
            }
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    words: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    first: Option<(Vec<u64>, Vec<usize>)>,
    /// Automorphisms found so far, as vertex images.
    autos: Vec<Vec<u8>>,
    known: HashSet<Vec<u8>>,
}

impl Search<'_> {
    fn descend(&mut self, mut cells: Vec<u64>, path: &mut Vec<usize>) {
        refine(self.g, &mut cells);
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|&(i, c)| (c.count_ones(), i))
            .map(|(i, _)| i);
        let Some(target) = target else {
            let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
            self.leaf(lab);
            return;
        };
        let cell = cells[target];
        let mut orbits = Orbits::new(self.g.n());
        let mut tried: Vec<usize> = Vec::new();
        for v in bits(cell) {
            if !tried.is_empty() {
                // Swapping twins is an automorphism that fixes the path.
                let twin = |t: usize| self.g.row(t) & !(1 << v) == self.g.row(v) & !(1 << t);
                if tried.iter().any(|&t| twin(t)) {
                    continue;
                }
                for gamma in &self.autos[orbits.applied..] {
                    if path.iter().all(|&p| gamma[p] as usize == p) {
                        orbits.join(gamma);
                    }
                }
                orbits.applied = self.autos.len();
                let rv = orbits.find(v);
                if tried.iter().any(|&t| orbits.find(t) == rv) {
                    continue;
                }
            }
            tried.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << v);
            child.push(cell & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            path.push(v);
            self.descend(child, path);
            path.pop();
        }
    }

    fn leaf(&mut self, lab: Vec<usize>) {
        let key = self.key(&lab);
        for reference in [&self.first, &self.best].into_iter().flatten() {
            if reference.0 == key {
                let mut gamma = vec![0u8; lab.len()];
                for (i, &v) in reference.1.iter().enumerate() {
                    gamma[v] = lab[i] as u8;
                }
                if gamma.iter().enumerate().any(|(i, &x)| i != x as usize) && self.known.insert(gamma.clone()) {
                    self.autos.push(gamma);
                }
                break;
            }
        }
        if self.first.is_none() {
            self.first = Some((key.clone(), lab.clone()));
        }
        match &self.best {
            Some((b, _)) if *b <= key => {}
            _ => self.best = Some((key, lab)),
        }
    }

    /// Upper-triangle bits in graph6 order, packed most significant first,
    /// so that comparing keys compares graph6 strings.
    fn key(&self, lab: &[usize]) -> Vec<u64> {
        let mut key = vec![0u64; self.words];
        let mut k = 0;
        for j in 1..lab.len() {
            let row = self.g.row(lab[j]);
            for &li in &lab[..j] {
                if row >> li & 1 == 1 {
                    key[k / 64] |= 1 << (63 - k % 64);
                }
                k += 1;
            }
        }
        key
    }
}
