//! Forbidden subgraphs: (non-induced) subgraph containment and chromatic number.

use serde::{Deserialize, Serialize};

use crate::error::PatternError;
use crate::graph::{bits, Graph, NamedFamily};

/// Names accepted by the command line and swept by the equivalence checks.
pub const REGISTRY: [&str; 12] = ["K3", "K4", "K5", "C4", "C5", "C6", "C7", "K1_2", "K1_3", "K1_4", "K2_3", "petersen"];

/// A pattern `F` with its chromatic number and degree sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenPattern {
    pub name: Option<String>,
    pub graph: Graph,
    pub chi: usize,
    /// Sorted descending.
    pub degseq: Vec<usize>,
}

impl ForbiddenPattern {
    pub fn new(graph: Graph, name: Option<String>) -> Self {
        let chi = chromatic_number(&graph);
        let mut degseq = graph.degrees();
        degseq.sort_unstable_by(|a, b| b.cmp(a));
        ForbiddenPattern { name, graph, chi, degseq }
    }

    pub fn from_name(name: &str) -> Result<Self, PatternError> {
        Ok(Self::new(parse_family(name)?.build()?, Some(name.to_string())))
    }

    pub fn from_graph6(s: &str) -> Result<Self, PatternError> {
        Ok(Self::new(Graph::from_graph6(s)?, None))
    }

    /// Name for display and cache paths: the registry name, or `g6_` followed
    /// by the hex bytes of the graph6 string.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => {
                let g6 = self.graph.to_graph6();
                let hex: String = g6.bytes().map(|b| format!("{b:02x}")).collect();
                format!("g6_{hex}")
            }
        }
    }

    pub fn order(&self) -> usize {
        self.graph.n()
    }

    /// `K_{1,t}` for some `t >= 1`, with no further vertices.
    pub fn is_star(&self) -> bool {
        let n = self.graph.n();
        n >= 2 && self.graph.edge_count() == n - 1 && self.degseq[0] == n - 1
    }

    pub fn is_bipartite(&self) -> bool {
        self.chi <= 2
    }
}

/// Parse `K<r>`, `E<n>` (edgeless), `C<k>`, `P<k>`, `K<s>_<t>`, `S<t>`
/// (= `K1_<t>`), `T<r>_<n>` or `petersen`.
pub fn parse_family(name: &str) -> Result<NamedFamily, PatternError> {
    let unknown = || PatternError::UnknownName(name.to_string());
    if name.eq_ignore_ascii_case("petersen") {
        return Ok(NamedFamily::Petersen);
    }
    let mut chars = name.chars();
    let head = chars.next().ok_or_else(unknown)?;
    let rest = chars.as_str();
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    let pair = |s: &str| -> Result<(usize, usize), PatternError> {
        let (a, b) = s.split_once('_').ok_or_else(unknown)?;
        Ok((num(a)?, num(b)?))
    };
    let family = match head {
        'K' if rest.contains('_') => {
            let (s, t) = pair(rest)?;
            if s == 1 {
                NamedFamily::Star(t)
            } else {
                NamedFamily::CompleteBipartite(s, t)
            }
        }
        'K' => NamedFamily::Complete(num(rest)?),
        'E' => NamedFamily::Empty(num(rest)?),
        'C' => NamedFamily::Cycle(num(rest)?),
        'P' => NamedFamily::Path(num(rest)?),
        'S' => NamedFamily::Star(num(rest)?),
        'T' => {
            let (r, n) = pair(rest)?;
            NamedFamily::Turan(r, n)
        }
        _ => return Err(unknown()),
    };
    Ok(family)
}

pub fn registry() -> Vec<ForbiddenPattern> {
    REGISTRY.iter().map(|n| ForbiddenPattern::from_name(n).expect("registry names parse")).collect()
}

/// Pattern vertices in matching order, each with the positions of its
/// already-placed neighbours.
fn match_order(f: &Graph, start: usize) -> Vec<(usize, Vec<usize>)> {
    let k = f.n();
    let mut placed = 0u64;
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut next = Some(start);
    while let Some(p) = next {
        order.push(p);
        placed |= 1 << p;
        next = (0..k)
            .filter(|&q| placed >> q & 1 == 0)
            .max_by_key(|&q| ((f.row(q) & placed).count_ones(), f.degree(q), std::cmp::Reverse(q)));
    }
    order
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, order[..i].iter().enumerate().filter(|&(_, &q)| f.has_edge(p, q)).map(|(j, _)| j).collect()))
        .collect()
}

struct Matcher<'a> {
    host: &'a Graph,
    order: Vec<(usize, Vec<usize>)>,
    /// Host vertices whose degree is at least that of each pattern vertex.
    fits: Vec<u64>,
    image: Vec<usize>,
}

impl Matcher<'_> {
    fn extend(&mut self, pos: usize, used: u64, first: u64) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let (p, ref back) = self.order[pos];
        let mut cand = self.fits[p] & !used;
        if pos == 0 {
            cand &= first;
        }
        for &j in back {
            cand &= self.host.row(self.image[j]);
        }
        for h in bits(cand) {
            self.image[pos] = h;
            if self.extend(pos + 1, used | 1 << h, first) {
                return true;
            }
        }
        false
    }
}

fn fits(host: &Graph, f: &Graph) -> Vec<u64> {
    let hd = host.degrees();
    (0..f.n())
        .map(|p| {
            let d = f.degree(p);
            hd.iter().enumerate().filter(|&(_, &h)| h >= d).fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect()
}

/// Does `host` contain a (not necessarily induced) copy of `f`?
pub fn contains_subgraph(host: &Graph, f: &ForbiddenPattern) -> bool {
    let pg = &f.graph;
    if pg.n() > host.n() || pg.edge_count() > host.edge_count() {
        return false;
    }
    let start = (0..pg.n()).max_by_key(|&p| (pg.degree(p), std::cmp::Reverse(p))).expect("pattern is nonempty");
    let mut m = Matcher { host, order: match_order(pg, start), fits: fits(host, pg), image: vec![0; pg.n()] };
    m.extend(0, 0, host.vertex_mask())
}

/// Does `host` contain a copy of `f` that uses vertex `v`?
pub fn contains_subgraph_through(host: &Graph, f: &ForbiddenPattern, v: usize) -> bool {
    let pg = &f.graph;
    if pg.n() > host.n() || pg.edge_count() > host.edge_count() {
        return false;
    }
    let fit = fits(host, pg);
    let dv = host.degree(v);
    for p in 0..pg.n() {
        if pg.degree(p) > dv {
            continue;
        }
        let mut m = Matcher { host, order: match_order(pg, p), fits: fit.clone(), image: vec![0; pg.n()] };
        if m.extend(0, 0, 1 << v) {
            return true;
        }
    }
    false
}

pub fn is_free(host: &Graph, f: &ForbiddenPattern) -> bool {
    !contains_subgraph(host, f)
}

/// Greedy clique: grow from each vertex by repeatedly adding the candidate
/// of largest degree. A lower bound on the clique number.
pub fn greedy_clique(g: &Graph) -> usize {
    (0..g.n())
        .map(|s| {
            let mut size = 1;
            let mut cand = g.row(s);
            while cand != 0 {
                let v = bits(cand).max_by_key(|&v| (g.row(v) & cand).count_ones()).expect("nonempty");
                size += 1;
                cand &= g.row(v);
            }
            size
        })
        .max()
        .unwrap_or(0)
}

/// Exact clique number by simple branch and bound.
pub fn clique_number(g: &Graph) -> usize {
    fn expand(g: &Graph, size: usize, mut cand: u64, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= !(1 << v);
            expand(g, size + 1, cand & g.row(v), best);
        }
    }
    let mut best = 0;
    expand(g, 0, g.vertex_mask(), &mut best);
    best
}

struct Coloring<'a> {
    g: &'a Graph,
    color: Vec<usize>,
    classes: Vec<u64>,
    best: usize,
    lower: usize,
}

impl Coloring<'_> {
    const NONE: usize = usize::MAX;

    /// DSATUR choice: most distinctly coloured neighbours, then most
    /// uncoloured neighbours, then lowest index.
    fn pick(&self, uncolored: u64) -> usize {
        bits(uncolored)
            .max_by_key(|&v| {
                let sat = self.classes.iter().filter(|&&c| c & self.g.row(v) != 0).count();
                (sat, (self.g.row(v) & uncolored).count_ones(), std::cmp::Reverse(v))
            })
            .expect("uncoloured vertex exists")
    }

    fn greedy(&mut self) -> usize {
        let mut uncolored = self.g.vertex_mask();
        while uncolored != 0 {
            let v = self.pick(uncolored);
            let c = (0..self.classes.len()).find(|&c| self.classes[c] & self.g.row(v) == 0).unwrap_or_else(|| {
                self.classes.push(0);
                self.classes.len() - 1
            });
            self.classes[c] |= 1 << v;
            self.color[v] = c;
            uncolored &= !(1 << v);
        }
        let used = self.classes.len();
        self.classes.clear();
        self.color.iter_mut().for_each(|c| *c = Self::NONE);
        used
    }

    fn branch(&mut self, uncolored: u64) {
        if self.best == self.lower {
            return;
        }
        if uncolored == 0 {
            self.best = self.classes.len();
            return;
        }
        let used = self.classes.len();
        if used >= self.best {
            return;
        }
        let v = self.pick(uncolored);
        for c in 0..used {
            if self.classes[c] & self.g.row(v) == 0 {
                self.classes[c] |= 1 << v;
                self.color[v] = c;
                self.branch(uncolored & !(1 << v));
                self.classes[c] &= !(1 << v);
                self.color[v] = Self::NONE;
            }
        }
        if used + 1 < self.best {
            self.classes.push(1 << v);
            self.color[v] = used;
            self.branch(uncolored & !(1 << v));
            self.classes.pop();
            self.color[v] = Self::NONE;
        }
    }
}

/// Exact chromatic number: DSATUR branch and bound between a greedy clique
/// lower bound and the DSATUR greedy upper bound.
pub fn chromatic_number(g: &Graph) -> usize {
    if g.edge_count() == 0 {
        return 1;
    }
    let mut c = Coloring { g, color: vec![Coloring::NONE; g.n()], classes: Vec::new(), best: 0, lower: greedy_clique(g) };
    c.best = c.greedy();
    c.branch(g.vertex_mask());
    c.best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: NamedFamily) -> Graph {
        f.build().unwrap()
    }

    fn pat(name: &str) -> ForbiddenPattern {
        ForbiddenPattern::from_name(name).unwrap()
    }

    /// Oracle: try every injective map of pattern vertices into host vertices.
    pub(crate) fn naive_contains(host: &Graph, f: &Graph) -> bool {
        fn rec(host: &Graph, f: &Graph, map: &mut Vec<usize>, used: u64) -> bool {
            let p = map.len();
            if p == f.n() {
                return f.edges().all(|(a, b)| host.has_edge(map[a], map[b]));
            }
            for h in 0..host.n() {
                if used >> h & 1 == 0 {
                    map.push(h);
                    if rec(host, f, map, used | 1 << h) {
                        return true;
                    }
                    map.pop();
                }
            }
            false
        }
        f.n() <= host.n() && rec(host, f, &mut Vec::new(), 0)
    }

    fn labeled_graph(n: usize, code: u64) -> Graph {
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

    #[test]
    fn containment_examples() {
        assert!(contains_subgraph(&g(NamedFamily::CompleteBipartite(2, 3)), &pat("C4")));
        assert!(!contains_subgraph(&g(NamedFamily::Turan(2, 6)), &pat("K3")));
        assert!(is_free(&g(NamedFamily::Complete(3)), &pat("K4")));
        assert!(is_free(&g(NamedFamily::Petersen), &pat("C4")));
        assert!(contains_subgraph(&g(NamedFamily::Petersen), &pat("C5")));
        assert!(contains_subgraph(&g(NamedFamily::Petersen), &pat("petersen")));
    }

    #[test]
    fn c4_free_classes_on_four_vertices() {
        let mut classes = std::collections::BTreeMap::new();
        for c in 0..64 {
            let h = labeled_graph(4, c);
            classes.insert(h.canonical_form(), h);
        }
        assert_eq!(classes.len(), 11);
        let c4 = pat("C4");
        let naive = classes.values().filter(|h| !naive_contains(h, &c4.graph)).count();
        let fast = classes.values().filter(|h| is_free(h, &c4)).count();
        // C4, K4 minus an edge and K4 contain a 4-cycle.
        assert_eq!(naive, 8);
        assert_eq!(fast, naive);
    }

    #[test]
    fn matcher_agrees_with_naive_oracle() {
        let mut patterns = Vec::new();
        for k in 1..=4 {
            let mut seen = std::collections::BTreeSet::new();
            for c in 0..(1u64 << (k * (k - 1) / 2)) {
                let f = labeled_graph(k, c);
                if seen.insert(f.canonical_form()) {
                    patterns.push(ForbiddenPattern::new(f, None));
                }
            }
        }
        assert_eq!(patterns.len(), 1 + 2 + 4 + 11);
        for n in 1..=6usize {
            for c in 0..(1u64 << (n * (n - 1) / 2)) {
                if n == 6 && c % 31 != 0 {
                    continue;
                }
                let host = labeled_graph(n, c);
                for f in &patterns {
                    let expect = naive_contains(&host, &f.graph);
                    assert_eq!(contains_subgraph(&host, f), expect, "host {} pattern {}", host, f.graph);
                    for v in 0..n {
                        let through = contains_through_naive(&host, &f.graph, v);
                        assert_eq!(contains_subgraph_through(&host, f, v), through);
                    }
                }
            }
        }
    }

    fn contains_through_naive(host: &Graph, f: &Graph, v: usize) -> bool {
        fn rec(host: &Graph, f: &Graph, v: usize, map: &mut Vec<usize>, used: u64) -> bool {
            if map.len() == f.n() {
                return used >> v & 1 == 1 && f.edges().all(|(a, b)| host.has_edge(map[a], map[b]));
            }
            for h in 0..host.n() {
                if used >> h & 1 == 0 {
                    map.push(h);
                    if rec(host, f, v, map, used | 1 << h) {
                        return true;
                    }
                    map.pop();
                }
            }
            false
        }
        rec(host, f, v, &mut Vec::new(), 0)
    }

    #[test]
    fn free_examples() {
        for r in 1..=5 {
            let k = ForbiddenPattern::new(g(NamedFamily::Complete(r + 1)), None);
            for n in r..=12 {
                assert!(is_free(&g(NamedFamily::Turan(r, n)), &k), "T_{r}({n})");
            }
        }
        for t in 2..=5 {
            let star = ForbiddenPattern::new(g(NamedFamily::Star(t)), None);
            let union = g(NamedFamily::DisjointUnion(vec![NamedFamily::Complete(t); 3]));
            assert!(is_free(&union, &star));
        }
        assert!(is_free(&g(NamedFamily::Complete(4)), &pat("C5")));
    }

    /// Oracle: does a proper colouring with `k` colours exist? Tries all `k^n`.
    fn colorable_exhaustive(g: &Graph, k: usize) -> bool {
        let n = g.n();
        let total = k.pow(n as u32);
        (0..total).any(|mut code| {
            let mut col = vec![0; n];
            for c in col.iter_mut() {
                *c = code % k;
                code /= k;
            }
            g.edges().all(|(u, v)| col[u] != col[v])
        })
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&g(NamedFamily::Cycle(5))), 3);
        assert_eq!(chromatic_number(&g(NamedFamily::Cycle(6))), 2);
        for r in 1..=8 {
            assert_eq!(chromatic_number(&g(NamedFamily::Complete(r + 1))), r + 1);
        }
        let p = g(NamedFamily::Petersen);
        assert_eq!(chromatic_number(&p), 3);
        assert!(colorable_exhaustive(&p, 3));
        assert!(!colorable_exhaustive(&p, 2));
        assert_eq!(chromatic_number(&Graph::empty(3).unwrap()), 1);
        assert_eq!(pat("petersen").chi, 3);
        assert_eq!(pat("K2_3").chi, 2);
    }

    #[test]
    fn chromatic_bounds_on_small_graphs() {
        for c in 0..(1u64 << 15) {
            if c % 5 != 0 {
                continue;
            }
            let h = labeled_graph(6, c);
            let chi = chromatic_number(&h);
            assert!(chi >= clique_number(&h));
            assert!(chi <= h.max_degree() + 1);
            assert!(colorable_exhaustive(&h, chi));
            if chi > 1 {
                assert!(!colorable_exhaustive(&h, chi - 1));
            }
        }
    }

    #[test]
    fn names() {
        assert_eq!(parse_family("K1_3").unwrap(), NamedFamily::Star(3));
        assert_eq!(parse_family("K2_2").unwrap(), NamedFamily::CompleteBipartite(2, 2));
        assert_eq!(parse_family("T3_7").unwrap(), NamedFamily::Turan(3, 7));
        assert_eq!(parse_family("Petersen").unwrap(), NamedFamily::Petersen);
        assert!(matches!(parse_family("X9"), Err(PatternError::UnknownName(_))));
        assert!(matches!(parse_family("K"), Err(PatternError::UnknownName(_))));
        assert!(matches!(ForbiddenPattern::from_name("C2"), Err(PatternError::Graph(_))));
        assert_eq!(registry().len(), 12);
        assert!(pat("K1_3").is_star());
        assert!(!pat("P4").is_star());
        assert!(!pat("C4").is_star());
        assert_eq!(pat("K4").degseq, vec![3, 3, 3, 3]);
        assert_eq!(ForbiddenPattern::from_graph6("C~").unwrap().label(), "g6_437e");
    }
}
