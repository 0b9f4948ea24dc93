//! Slow, obviously-correct reference implementations shared by the
//! integration tests. None of them calls into the algorithms under test
//! beyond `Graph` accessors.

#![allow(dead_code)]

use factorium::Graph;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// All vertex pairs `(u, v)`, `u < v`, in graph6 order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect()
}

/// The labelled graph whose edge set is given by the bits of `mask` over
/// `pairs(n)`.
pub fn labelled(n: usize, mask: u64) -> Graph {
    let edges = pairs(n).into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e);
    Graph::from_edges(n, edges).unwrap()
}

/// Every labelled graph on `n` vertices.
pub fn all_labelled(n: usize) -> impl Iterator<Item = Graph> {
    let m = n * n.saturating_sub(1) / 2;
    (0..1u64 << m).map(move |mask| labelled(n, mask))
}

pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let edges: Vec<_> = pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
    Graph::from_edges(n, edges).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Canonical form by brute force: the smallest edge mask over all `n!`
/// relabellings.
pub struct OrbitOracle {
    n: usize,
    perms: Vec<Vec<usize>>,
    index: Vec<Vec<usize>>,
}

impl OrbitOracle {
    pub fn new(n: usize) -> Self {
        let mut index = vec![vec![usize::MAX; n]; n];
        for (i, (u, v)) in pairs(n).into_iter().enumerate() {
            index[u][v] = i;
            index[v][u] = i;
        }
        OrbitOracle {
            n,
            perms: permutations(n),
            index,
        }
    }

    pub fn form(&self, g: &Graph) -> u64 {
        let edges = g.edges();
        self.perms
            .iter()
            .map(|p| edges.iter().fold(0u64, |m, &(u, v)| m | 1 << self.index[p[u]][p[v]]))
            .min()
            .unwrap_or(0)
    }

    /// Number of isomorphism classes among all labelled graphs satisfying
    /// `keep`.
    pub fn count_classes(&self, keep: impl Fn(&Graph) -> bool) -> usize {
        let mut forms: Vec<u64> = all_labelled(self.n).filter(|g| keep(g)).map(|g| self.form(&g)).collect();
        forms.sort_unstable();
        forms.dedup();
        forms.len()
    }
}

/// Maximum matching size by exhaustive branching on the lowest vertex.
pub fn brute_max_matching(g: &Graph) -> usize {
    fn go(g: &Graph, alive: u64) -> usize {
        let Some(x) = (0..g.order()).find(|&x| alive >> x & 1 == 1) else {
            return 0;
        };
        let rest = alive & !(1 << x);
        let mut best = go(g, rest);
        for y in g.neighbors(x).filter(|&y| rest >> y & 1 == 1) {
            best = best.max(1 + go(g, rest & !(1 << y)));
        }
        best
    }
    go(g, (1u64 << g.order()) - 1)
}

/// Number of odd components of `g - s` (vertex mask).
pub fn odd_components_after(g: &Graph, s: u64) -> usize {
    let n = g.order();
    let mut seen = s;
    let mut odd = 0;
    for root in 0..n {
        if seen >> root & 1 == 1 {
            continue;
        }
        let mut stack = vec![root];
        seen |= 1 << root;
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for w in g.neighbors(v) {
                if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        odd += size % 2;
    }
    odd
}

/// Matching number from the Tutte-Berge formula.
pub fn tutte_berge(g: &Graph) -> usize {
    let n = g.order();
    (0..1u64 << n)
        .map(|s| (n + s.count_ones() as usize - odd_components_after(g, s)) / 2)
        .min()
        .unwrap()
}

/// Whether `g` has a k-factor, by branching over edges in order with
/// degree bookkeeping.
pub fn brute_has_k_factor(g: &Graph, k: usize) -> bool {
    let edges = g.edges();
    let n = g.order();
    let mut remaining = vec![0usize; n];
    for &(u, v) in &edges {
        remaining[u] += 1;
        remaining[v] += 1;
    }
    fn go(edges: &[(usize, usize)], i: usize, k: usize, deg: &mut [usize], remaining: &mut [usize]) -> bool {
        if deg.iter().zip(remaining.iter()).any(|(&d, &r)| d > k || d + r < k) {
            return false;
        }
        if i == edges.len() {
            return deg.iter().all(|&d| d == k);
        }
        let (u, v) = edges[i];
        remaining[u] -= 1;
        remaining[v] -= 1;
        deg[u] += 1;
        deg[v] += 1;
        let with = go(edges, i + 1, k, deg, remaining);
        deg[u] -= 1;
        deg[v] -= 1;
        let found = with || go(edges, i + 1, k, deg, remaining);
        remaining[u] += 1;
        remaining[v] += 1;
        found
    }
    go(&edges, 0, k, &mut vec![0; n], &mut remaining)
}

/// All perfect matchings, each as a bit mask over `pairs(n)`.
pub fn all_perfect_matchings(g: &Graph) -> Vec<u64> {
    let n = g.order();
    let mut index = vec![vec![0usize; n]; n];
    for (i, (u, v)) in pairs(n).into_iter().enumerate() {
        index[u][v] = i;
        index[v][u] = i;
    }
    fn go(g: &Graph, index: &[Vec<usize>], alive: u64, acc: u64, out: &mut Vec<u64>) {
        let Some(x) = (0..g.order()).find(|&x| alive >> x & 1 == 1) else {
            out.push(acc);
            return;
        };
        let rest = alive & !(1 << x);
        for y in g.neighbors(x).filter(|&y| rest >> y & 1 == 1) {
            go(g, index, rest & !(1 << y), acc | 1 << index[x][y], out);
        }
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        go(g, &index, (1u64 << n) - 1, 0, &mut out);
    }
    out
}

/// Whether `k` of the perfect matchings are pairwise edge-disjoint.
pub fn brute_has_disjoint_pms(g: &Graph, k: usize) -> bool {
    fn go(pms: &[u64], start: usize, used: u64, left: usize) -> bool {
        left == 0 || (start..pms.len()).any(|i| pms[i] & used == 0 && go(pms, i + 1, used | pms[i], left - 1))
    }
    go(&all_perfect_matchings(g), 0, 0, k)
}

/// Vertex connectivity: the smallest vertex subset whose removal leaves a
/// disconnected graph, found by trying every subset.
pub fn brute_connectivity(g: &Graph) -> usize {
    let n = g.order();
    if g.is_complete() {
        return n.saturating_sub(1);
    }
    let mut best = n - 1;
    for w in 0..1u64 << n {
        let size = w.count_ones() as usize;
        if size >= best {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|&v| w >> v & 1 == 0).collect();
        let mut seen = vec![false; n];
        let mut stack = vec![keep[0]];
        seen[keep[0]] = true;
        while let Some(v) = stack.pop() {
            for x in g.neighbors(v) {
                if w >> x & 1 == 0 && !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        if keep.iter().any(|&v| !seen[v]) {
            best = size;
        }
    }
    best
}
