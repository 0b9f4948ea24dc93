//! Undirected simple graphs stored as packed adjacency rows, plus the
//! structural primitives the rest of the crate builds on: complements,
//! components after deleting vertex sets, vertex connectivity and the
//! Ore-type degree-sum condition.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::bits::{self, OnesU64};
use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Row `v` is a bitset of the neighbours of `v`; rows are `stride` words wide.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let stride = bits::words_for(n);
        Graph {
            n,
            stride,
            rows: vec![0; n * stride],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!("edge ({u},{v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::arg(format!("self-loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        if n >= 3 {
            for v in 0..n {
                g.add_edge(v, (v + 1) % n);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    /// `K_{1,leaves}` with the centre at vertex 0.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::new(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::new(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Petersen graph: outer 5-cycle `0..5`, spokes `i -- i+5`, inner pentagram.
    pub fn petersen() -> Self {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(i + 5, (i + 2) % 5 + 5);
        }
        g
    }

    /// Prism over an `m`-cycle: two `m`-cycles joined by a perfect matching.
    pub fn prism(m: usize) -> Self {
        let mut g = Graph::new(2 * m);
        for i in 0..m {
            g.add_edge(i, (i + 1) % m);
            g.add_edge(m + i, m + (i + 1) % m);
            g.add_edge(i, m + i);
        }
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "bad edge ({u},{v})");
        bits::set(&mut self.rows[u * self.stride..(u + 1) * self.stride], v);
        bits::set(&mut self.rows[v * self.stride..(v + 1) * self.stride], u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        bits::clear(&mut self.rows[u * self.stride..(u + 1) * self.stride], v);
        bits::clear(&mut self.rows[v * self.stride..(v + 1) * self.stride], u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && bits::get(self.row(u), v)
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    /// Neighbourhood of `v` as a single word. Only valid for `n <= 64`.
    #[inline]
    pub fn row_word(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.rows[v * self.stride]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        bits::count(self.row(v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits::ones(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn is_complete(&self) -> bool {
        self.n == 0 || self.min_degree() == self.n - 1
    }

    pub fn complement(&self) -> Graph {
        let mut h = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    h.add_edge(u, v);
                }
            }
        }
        h
    }

    /// Relabel so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut h = Graph::new(self.n);
        for (u, v) in self.edges() {
            h.add_edge(perm[u], perm[v]);
        }
        h
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || components_of_mask(self, &vec![0; self.stride]).len() == 1
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

fn check_vertices(g: &Graph, set: &[usize], name: &str) -> Result<()> {
    match set.iter().find(|&&v| v >= g.order()) {
        Some(v) => Err(Error::arg(format!("vertex {v} in {name} out of range"))),
        None => Ok(()),
    }
}

/// Packs two disjoint vertex lists into one removal bitset.
pub(crate) fn removal_mask(g: &Graph, s: &[usize], t: &[usize]) -> Result<Vec<u64>> {
    check_vertices(g, s, "S")?;
    check_vertices(g, t, "T")?;
    let mut removed = vec![0u64; bits::words_for(g.order())];
    for &v in s {
        bits::set(&mut removed, v);
    }
    if let Some(v) = t.iter().find(|&&v| bits::get(&removed, v)) {
        return Err(Error::arg(format!("S and T overlap at vertex {v}")));
    }
    for &v in t {
        bits::set(&mut removed, v);
    }
    Ok(removed)
}

/// Components of `g` minus the vertices marked in `removed`, each sorted,
/// listed in order of their smallest vertex.
pub(crate) fn components_of_mask(g: &Graph, removed: &[u64]) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if bits::get(&seen, start) {
            continue;
        }
        bits::set(&mut seen, start);
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for (wi, (&row, &s)) in g.row(v).iter().zip(seen.iter()).enumerate() {
                for b in OnesU64(row & !s) {
                    queue.push_back(wi * 64 + b);
                }
            }
            for (s, &row) in seen.iter_mut().zip(g.row(v)) {
                *s |= row;
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Connected components of `g - S - T`.
pub fn components_after_removal(g: &Graph, s: &[usize], t: &[usize]) -> Result<Vec<Vec<usize>>> {
    let removed = removal_mask(g, s, t)?;
    Ok(components_of_mask(g, &removed))
}

/// Result of testing the degree-sum condition `d(x) + d(y) >= n + k - 2`
/// over all nonadjacent pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OreReport {
    pub k: usize,
    /// Minimum of `d(u) + d(v) - (n + k - 2)` over nonadjacent pairs;
    /// `None` stands for `+inf` (no nonadjacent pair).
    pub deficit: Option<i64>,
    pub witness_pair: Option<(usize, usize)>,
}

impl OreReport {
    pub fn is_ore_type(&self) -> bool {
        self.deficit.is_none_or(|d| d >= 0)
    }
}

/// Evaluates the Ore-type-(k-2) condition. The witness is the
/// lexicographically first pair attaining the minimum.
pub fn ore_report(g: &Graph, k: usize) -> OreReport {
    let n = g.order();
    let deg = g.degrees();
    let threshold = n as i64 + k as i64 - 2;
    let mut best: Option<(i64, (usize, usize))> = None;
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                continue;
            }
            let d = (deg[u] + deg[v]) as i64 - threshold;
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, (u, v)));
            }
        }
    }
    OreReport {
        k,
        deficit: best.map(|(d, _)| d),
        witness_pair: best.map(|(_, p)| p),
    }
}

pub fn is_ore_type(g: &Graph, k: usize) -> bool {
    ore_report(g, k).is_ore_type()
}

/// Vertex connectivity: the least number of vertices whose removal
/// disconnects `g`, or `n - 1` for complete graphs.
///
/// Computed as the minimum, over nonadjacent pairs, of the number of
/// internally vertex-disjoint paths (unit-capacity max-flow on the
/// vertex-split network).
pub fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.order();
    if n <= 1 {
        return 0;
    }
    if g.is_complete() {
        return n - 1;
    }
    let mut best = g.min_degree();
    for s in 0..n {
        for t in s + 1..n {
            if best == 0 {
                return 0;
            }
            if !g.has_edge(s, t) {
                best = best.min(local_connectivity(g, s, t, best));
            }
        }
    }
    best
}

/// Number of internally disjoint `s`-`t` paths for nonadjacent `s`, `t`,
/// capped at `limit`.
fn local_connectivity(g: &Graph, s: usize, t: usize, limit: usize) -> usize {
    let n = g.order();
    // node 2v = v_in, 2v+1 = v_out; v_in -> v_out has capacity 1 except at s, t
    let size = 2 * n;
    let big = n as i32;
    let mut cap = vec![0i32; size * size];
    for v in 0..n {
        cap[(2 * v) * size + 2 * v + 1] = if v == s || v == t { big } else { 1 };
        for w in g.neighbors(v) {
            cap[(2 * v + 1) * size + 2 * w] = big;
        }
    }
    let source = 2 * s + 1;
    let sink = 2 * t;
    let mut flow = 0;
    let mut parent = vec![usize::MAX; size];
    while flow < limit {
        parent.fill(usize::MAX);
        parent[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for y in 0..size {
                if parent[y] == usize::MAX && cap[x * size + y] > 0 {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        let mut y = sink;
        while y != source {
            let x = parent[y];
            cap[x * size + y] -= 1;
            cap[y * size + x] += 1;
            y = x;
        }
        flow += 1;
    }
    flow
}
