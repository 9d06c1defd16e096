//! Compact simple graphs on at most 64 vertices.
//!
//! Every vertex neighbourhood is one `u64`, so degrees and common
//! neighbourhoods are single popcounts. Graphs are values: all "mutating"
//! operations return a new graph and leave the input untouched.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GraphError;
use crate::graph6;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// Read-only adjacency access shared by [`Graph`] and [`AdjacencyList`].
///
/// The spectral routines are written against this trait so that the
/// closed-form families can be checked beyond the 64-vertex cap.
pub trait Adjacency {
    fn order(&self) -> usize;
    fn neighbors(&self, u: usize) -> Vec<usize>;

    fn degree(&self, u: usize) -> usize {
        self.neighbors(u).len()
    }

    /// Ordering key used to break ties between components of equal
    /// spectral radius. Smaller keys win.
    fn component_key(&self, vertices: &[usize]) -> String;
}

/// An immutable simple graph with one bitmask row per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

#[inline]
pub(crate) fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Iterate the set bits of a mask in increasing order.
#[inline]
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::Order(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// Build from adjacency rows, validating symmetry and the absence of loops.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self, GraphError> {
        let n = rows.len();
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::Order(n));
        }
        for (i, &row) in rows.iter().enumerate() {
            if row & !low_mask(n) != 0 {
                return Err(GraphError::Asymmetric(i, 64 - row.leading_zeros() as usize - 1));
            }
            if row >> i & 1 == 1 {
                return Err(GraphError::Loop(i));
            }
            for j in bits(row) {
                if rows[j] >> i & 1 == 0 {
                    return Err(GraphError::Asymmetric(i, j));
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    /// Rows are trusted to be symmetric and loop-free.
    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        debug_assert!(Graph::from_rows(rows.clone()).is_ok());
        Graph { n: rows.len(), adj: rows }
    }

    fn check_vertex(&self, u: usize) -> Result<(), GraphError> {
        if u >= self.n {
            Err(GraphError::Vertex { u, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, u: usize) -> u64 {
        self.adj[u]
    }

    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    /// Mask with one bit per vertex.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    /// Remove `u` and shift the higher-numbered vertices down by one.
    pub fn delete_vertex(&self, u: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        if self.n == 1 {
            return Err(GraphError::EmptyResult);
        }
        Ok(self.delete_vertex_unchecked(u))
    }

    pub(crate) fn delete_vertex_unchecked(&self, u: usize) -> Graph {
        let lo = low_mask(u);
        let rows = (0..self.n)
            .filter(|&i| i != u)
            .map(|i| {
                let r = self.adj[i];
                (r & lo) | ((r >> 1) & !lo)
            })
            .collect();
        Graph::from_rows_unchecked(rows)
    }

    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let mut g = self.clone();
        g.adj[u] |= 1 << v;
        g.adj[v] |= 1 << u;
        Ok(g)
    }

    pub(crate) fn with_edge_unchecked(&self, u: usize, v: usize) -> Graph {
        let mut g = self.clone();
        g.adj[u] |= 1 << v;
        g.adj[v] |= 1 << u;
        g
    }

    /// Append a vertex adjacent to exactly the vertices in `mask`.
    pub fn add_vertex(&self, mask: u64) -> Result<Graph, GraphError> {
        if self.n == MAX_VERTICES {
            return Err(GraphError::Order(self.n + 1));
        }
        if mask & !self.vertex_mask() != 0 {
            return Err(GraphError::Vertex { u: 63 - mask.leading_zeros() as usize, n: self.n });
        }
        Ok(self.add_vertex_unchecked(mask))
    }

    pub(crate) fn add_vertex_unchecked(&self, mask: u64) -> Graph {
        let v = self.n;
        let mut rows = Vec::with_capacity(v + 1);
        rows.extend(self.adj.iter().enumerate().map(|(i, &r)| r | ((mask >> i & 1) << v)));
        rows.push(mask);
        Graph { n: v + 1, adj: rows }
    }

    /// Subgraph induced by the vertices of `mask`, relabelled in increasing order.
    pub fn induced(&self, mask: u64) -> Result<Graph, GraphError> {
        let verts: Vec<usize> = bits(mask & self.vertex_mask()).collect();
        if verts.is_empty() {
            return Err(GraphError::EmptyResult);
        }
        Ok(self.induced_by(&verts))
    }

    fn induced_by(&self, verts: &[usize]) -> Graph {
        let rows = verts
            .iter()
            .map(|&u| {
                verts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| self.has_edge(u, v))
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Graph::from_rows_unchecked(rows)
    }

    /// Relabel so that vertex `order[i]` of `self` becomes vertex `i`.
    pub fn permuted(&self, order: &[usize]) -> Graph {
        assert_eq!(order.len(), self.n);
        self.induced_by(order)
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertex_mask();
        let rows = (0..self.n).map(|i| !self.adj[i] & all & !(1u64 << i)).collect();
        Graph::from_rows_unchecked(rows)
    }

    /// Connected components as vertex masks, ordered by their lowest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.adj[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Disjoint union; vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(GraphError::Order(n));
        }
        let mut rows = self.adj.clone();
        rows.extend(other.adj.iter().map(|&r| r << self.n));
        Ok(Graph { n, adj: rows })
    }

    pub fn to_graph6(&self) -> String {
        graph6::encode(self)
    }

    pub fn from_graph6(s: &str) -> Result<Graph, crate::error::Graph6Error> {
        graph6::decode(s)
    }

    pub fn canonical_form(&self) -> String {
        crate::canon::canonical_form(self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({})", graph6::encode(self))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&graph6::encode(self))
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&graph6::encode(self))
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        graph6::decode(&s).map_err(serde::de::Error::custom)
    }
}

impl Adjacency for Graph {
    fn order(&self) -> usize {
        self.n
    }

    fn neighbors(&self, u: usize) -> Vec<usize> {
        bits(self.adj[u]).collect()
    }

    fn degree(&self, u: usize) -> usize {
        Graph::degree(self, u)
    }

    fn component_key(&self, vertices: &[usize]) -> String {
        self.induced_by(vertices).canonical_form()
    }
}

/// Neighbour lists for graphs beyond the bitmask cap. Only the spectral
/// routines accept these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyList {
    lists: Vec<Vec<usize>>,
}

impl AdjacencyList {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Order(0));
        }
        let mut lists = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::Vertex { u: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        for (u, l) in lists.iter_mut().enumerate() {
            l.sort_unstable();
            let before = l.len();
            l.dedup();
            if l.len() != before {
                return Err(GraphError::DuplicateEdge(u, l[0]));
            }
        }
        Ok(AdjacencyList { lists })
    }

    pub fn edge_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum::<usize>() / 2
    }
}

impl From<&Graph> for AdjacencyList {
    fn from(g: &Graph) -> Self {
        AdjacencyList { lists: (0..g.n()).map(|u| bits(g.row(u)).collect()).collect() }
    }
}

impl Adjacency for AdjacencyList {
    fn order(&self) -> usize {
        self.lists.len()
    }

    fn neighbors(&self, u: usize) -> Vec<usize> {
        self.lists[u].clone()
    }

    fn degree(&self, u: usize) -> usize {
        self.lists[u].len()
    }

    fn component_key(&self, vertices: &[usize]) -> String {
        if vertices.len() <= MAX_VERTICES {
            let rows = vertices
                .iter()
                .map(|&u| {
                    self.lists[u]
                        .iter()
                        .filter_map(|v| vertices.iter().position(|w| w == v))
                        .fold(0u64, |acc, j| acc | 1 << j)
                })
                .collect();
            Graph::from_rows_unchecked(rows).canonical_form()
        } else {
            // Oversized components sort after every canonical string, by first vertex.
            format!("~~{:020}", vertices[0])
        }
    }
}

/// The graph families used throughout: cliques, Turán graphs, stars and friends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedFamily {
    Empty(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    /// `Turan(r, n)`: complete `r`-partite graph on `n` vertices with balanced parts.
    Turan(usize, usize),
    Cycle(usize),
    /// `Star(t)` is `K_{1,t}`, on `t + 1` vertices.
    Star(usize),
    /// `Path(k)` has `k` vertices.
    Path(usize),
    Petersen,
    DisjointUnion(Vec<NamedFamily>),
}

impl NamedFamily {
    pub fn order(&self) -> usize {
        match self {
            NamedFamily::Empty(n) | NamedFamily::Complete(n) => *n,
            NamedFamily::CompleteBipartite(s, t) => s + t,
            NamedFamily::Turan(_, n) => *n,
            NamedFamily::Cycle(k) | NamedFamily::Path(k) => *k,
            NamedFamily::Star(t) => t + 1,
            NamedFamily::Petersen => 10,
            NamedFamily::DisjointUnion(parts) => parts.iter().map(NamedFamily::order).sum(),
        }
    }

    fn validate(&self) -> Result<(), GraphError> {
        let bad = |why: &str| Err(GraphError::InvalidFamily(format!("{self:?}: {why}")));
        match self {
            NamedFamily::Empty(n) | NamedFamily::Complete(n) if *n == 0 => bad("needs at least one vertex"),
            NamedFamily::CompleteBipartite(s, t) if *s == 0 || *t == 0 => bad("part sizes must be positive"),
            NamedFamily::Turan(r, n) if *r == 0 || n < r => bad("requires 1 <= r <= n"),
            NamedFamily::Cycle(k) if *k < 3 => bad("cycle length must be at least 3"),
            NamedFamily::Star(t) if *t == 0 => bad("star needs at least one leaf"),
            NamedFamily::Path(k) if *k == 0 => bad("path needs at least one vertex"),
            NamedFamily::DisjointUnion(parts) if parts.is_empty() => bad("empty union"),
            NamedFamily::DisjointUnion(parts) => parts.iter().try_for_each(NamedFamily::validate),
            _ => Ok(()),
        }
    }

    /// Edge list of the canonical construction.
    pub fn edge_list(&self) -> Result<(usize, Vec<(usize, usize)>), GraphError> {
        self.validate()?;
        let n = self.order();
        let mut edges = Vec::new();
        match self {
            NamedFamily::Empty(_) => {}
            NamedFamily::Complete(n) => {
                for u in 0..*n {
                    edges.extend((u + 1..*n).map(|v| (u, v)));
                }
            }
            NamedFamily::CompleteBipartite(s, t) => {
                for u in 0..*s {
                    edges.extend((*s..s + t).map(|v| (u, v)));
                }
            }
            NamedFamily::Turan(r, n) => {
                // The first n mod r parts get the extra vertex.
                let part = turan_parts(*r, *n);
                for u in 0..*n {
                    edges.extend((u + 1..*n).filter(|&v| part[u] != part[v]).map(|v| (u, v)));
                }
            }
            NamedFamily::Cycle(k) => edges.extend((0..*k).map(|u| (u, (u + 1) % k))),
            NamedFamily::Path(k) => edges.extend((1..*k).map(|u| (u - 1, u))),
            NamedFamily::Star(t) => edges.extend((1..=*t).map(|v| (0, v))),
            NamedFamily::Petersen => {
                for i in 0..5 {
                    edges.push((i, (i + 1) % 5));
                    edges.push((i, i + 5));
                    edges.push((5 + i, 5 + (i + 2) % 5));
                }
            }
            NamedFamily::DisjointUnion(parts) => {
                let mut offset = 0;
                for p in parts {
                    let (k, es) = p.edge_list()?;
                    edges.extend(es.into_iter().map(|(u, v)| (u + offset, v + offset)));
                    offset += k;
                }
            }
        }
        Ok((n, edges))
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        let (n, edges) = self.edge_list()?;
        if n > MAX_VERTICES {
            return Err(GraphError::InvalidFamily(format!("{self:?}: {n} vertices exceeds {MAX_VERTICES}")));
        }
        Graph::from_edges(n, &edges)
    }

    /// Unbounded construction for the spectral routines.
    pub fn build_list(&self) -> Result<AdjacencyList, GraphError> {
        let (n, edges) = self.edge_list()?;
        AdjacencyList::from_edges(n, edges)
    }
}

/// Part index of each vertex of `T_r(n)`; parts are contiguous.
pub(crate) fn turan_parts(r: usize, n: usize) -> Vec<usize> {
    let (q, rem) = (n / r, n % r);
    let mut part = Vec::with_capacity(n);
    for p in 0..r {
        let size = q + usize::from(p < rem);
        part.extend(std::iter::repeat_n(p, size));
    }
    part
}

/// `e(T_r(n))`, the Turán number of `K_{r+1}`.
pub fn turan_edge_count(r: usize, n: usize) -> usize {
    let (q, rem) = (n / r, n % r);
    let sum_sq = rem * (q + 1) * (q + 1) + (r - rem) * q * q;
    (n * n - sum_sq) / 2
}
