//! Maximum-cardinality matching in general graphs (Edmonds' blossom
//! algorithm) and perfect-matching queries built on it.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

const NONE: usize = usize::MAX;

/// A set of pairwise vertex-disjoint edges, stored as `(u, v)` with `u < v`
/// and sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    /// Normalizes orientation and order; does not check disjointness.
    pub fn from_edges(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        Matching { edges }
    }

    fn from_mates(mate: &[usize]) -> Self {
        let edges = mate
            .iter()
            .enumerate()
            .filter(|&(v, &m)| m != NONE && v < m)
            .map(|(v, &m)| (v, m))
            .collect();
        Matching { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Edges of `g`, pairwise vertex-disjoint.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.order()];
        self.edges.iter().all(|&(u, v)| {
            let ok = g.has_edge(u, v) && !used[u] && !used[v];
            used[u] = true;
            used[v] = true;
            ok
        })
    }

    pub fn is_perfect_in(&self, g: &Graph) -> bool {
        self.is_valid_in(g) && 2 * self.len() == g.order()
    }
}

/// Blossom search state over adjacency lists.
struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    in_tree: Vec<bool>,
    in_blossom: Vec<bool>,
    lca_mark: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            in_tree: vec![false; n],
            in_blossom: vec![false; n],
            lca_mark: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.lca_mark.fill(false);
        loop {
            a = self.base[a];
            self.lca_mark[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.lca_mark[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from the exposed vertex `root`; returns
    /// its exposed far end.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.in_tree.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.in_tree[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.in_tree[i] {
                                self.in_tree[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    self.in_tree[self.mate[to]] = true;
                    self.queue.push_back(self.mate[to]);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }

    /// Grows the matching from every exposed vertex in ascending order.
    /// With `need_perfect`, gives up at the first root that stays exposed:
    /// such a vertex is exposed in some maximum matching, so none is perfect.
    fn run(mut self, need_perfect: bool) -> Option<Vec<usize>> {
        for root in 0..self.adj.len() {
            if self.mate[root] != NONE || self.adj[root].is_empty() && !need_perfect {
                continue;
            }
            match self.find_path(root) {
                Some(end) => self.augment(end),
                None if need_perfect => return None,
                None => {}
            }
        }
        Some(self.mate)
    }
}

fn adjacency(g: &Graph, excluded: &[bool]) -> Vec<Vec<usize>> {
    (0..g.order())
        .map(|v| {
            if excluded[v] {
                Vec::new()
            } else {
                g.neighbors(v).filter(|&w| !excluded[w]).collect()
            }
        })
        .collect()
}

/// Maximum-cardinality matching. Augmenting searches are rooted at exposed
/// vertices in ascending order and scan neighbours ascending, so the result
/// is reproducible.
pub fn max_matching(g: &Graph) -> Matching {
    let adj = adjacency(g, &vec![false; g.order()]);
    let mate = Blossom::new(&adj).run(false).expect("non-perfect run always completes");
    Matching::from_mates(&mate)
}

pub fn perfect_matching(g: &Graph) -> Option<Matching> {
    if g.order() % 2 == 1 {
        return None;
    }
    let adj = adjacency(g, &vec![false; g.order()]);
    Blossom::new(&adj).run(true).map(|mate| Matching::from_mates(&mate))
}

/// Perfect matching of `g` that uses the edge `(u, v)`.
pub fn perfect_matching_with_forced_edge(g: &Graph, (u, v): (usize, usize)) -> Result<Option<Matching>> {
    if !g.has_edge(u, v) {
        return Err(Error::arg(format!("({u},{v}) is not an edge")));
    }
    if g.order() % 2 == 1 {
        return Ok(None);
    }
    let mut excluded = vec![false; g.order()];
    excluded[u] = true;
    excluded[v] = true;
    let adj = adjacency(g, &excluded);
    let mut blossom = Blossom::new(&adj);
    for root in 0..g.order() {
        if excluded[root] || blossom.mate[root] != NONE {
            continue;
        }
        match blossom.find_path(root) {
            Some(end) => blossom.augment(end),
            None => return Ok(None),
        }
    }
    let mut mate = blossom.mate;
    mate[u] = v;
    mate[v] = u;
    Ok(Some(Matching::from_mates(&mate)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(max_matching(&Graph::complete(4)).len(), 2);
        assert_eq!(max_matching(&Graph::star(3)).len(), 1);
        assert_eq!(max_matching(&Graph::petersen()).len(), 5);
        assert_eq!(max_matching(&Graph::cycle(5)).len(), 2);
        assert_eq!(max_matching(&Graph::new(3)).len(), 0);
    }

    #[test]
    fn perfect() {
        let c6 = Graph::cycle(6);
        let m = perfect_matching(&c6).unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.is_perfect_in(&c6));
        assert_eq!(perfect_matching(&Graph::star(3)), None);
        assert_eq!(perfect_matching(&Graph::cycle(5)), None);
        let p = Graph::petersen();
        assert!(perfect_matching(&p).unwrap().is_perfect_in(&p));
        assert_eq!(perfect_matching(&Graph::new(0)), Some(Matching::default()));
    }

    #[test]
    fn forced() {
        let c4 = Graph::cycle(4);
        let m = perfect_matching_with_forced_edge(&c4, (0, 1)).unwrap().unwrap();
        assert_eq!(m.edges(), &[(0, 1), (2, 3)]);
        let c6 = Graph::cycle(6);
        let m = perfect_matching_with_forced_edge(&c6, (1, 0)).unwrap().unwrap();
        assert_eq!(m.edges(), &[(0, 1), (2, 3), (4, 5)]);
        assert!(perfect_matching_with_forced_edge(&c4, (0, 2)).is_err());
        // path 0-1-2-3 cannot use its middle edge
        let p4 = Graph::path(4);
        assert_eq!(perfect_matching_with_forced_edge(&p4, (1, 2)).unwrap(), None);
        let p = Graph::petersen();
        for i in 0..5 {
            let m = perfect_matching_with_forced_edge(&p, (i, i + 5)).unwrap().unwrap();
            assert!(m.is_perfect_in(&p) && m.contains(i, i + 5));
        }
    }
}
