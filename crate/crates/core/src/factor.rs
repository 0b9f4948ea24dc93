//! k-factors and their obstructions.
//!
//! The constructive side reduces k-factor existence to a perfect matching
//! in Tutte's gadget graph. The dual side evaluates the deficiency
//!
//! ```text
//! eta(S, T) = k|S| - k|T| + sum_{x in T} d_{G-S}(x) - q(S, T)
//! ```
//!
//! where `q(S, T)` counts the k-odd components of `G - S - T`, and searches
//! all disjoint pairs `(S, T)` exhaustively for a certificate that no
//! k-factor exists.

use std::cmp::Ordering;
use std::fmt;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{self, OnesU64};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::matching;

/// Largest order accepted by the exhaustive `(S, T)` searches (3^n pairs).
pub const CERTIFICATE_MAX_N: usize = 16;

/// A spanning subgraph in which every vertex has degree exactly `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Factor {
    pub fn as_graph(&self, n: usize) -> Graph {
        Graph::from_edges(n, self.edges.iter().copied()).expect("factor edges come from a host graph")
    }

    /// Spanning, `k`-regular and contained in `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut deg = vec![0; g.order()];
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) {
                return false;
            }
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == self.edges.len() && deg.iter().all(|&d| d == self.k)
    }
}

/// Tutte's reduction of the degree-constrained subgraph problem with
/// target degrees `f(v)` to perfect matching.
///
/// Vertex `v` contributes `d(v)` external nodes, one per incident edge in
/// ascending neighbour order, and `d(v) - f(v)` internal nodes joined to all
/// of its externals. Each host edge `uv` becomes one external-external edge.
#[derive(Debug, Clone)]
pub struct TutteGadget {
    pub graph: Graph,
    /// For external nodes: the partner external node and the host edge.
    links: Vec<Option<(usize, (usize, usize))>>,
}

impl TutteGadget {
    /// `None` when some `f(v)` exceeds `d(v)`.
    pub fn build(g: &Graph, f: &[usize]) -> Option<Self> {
        let n = g.order();
        let deg = g.degrees();
        if (0..n).any(|v| f[v] > deg[v]) {
            return None;
        }
        let mut first_ext = vec![0; n];
        let mut size = 0;
        for v in 0..n {
            first_ext[v] = size;
            size += 2 * deg[v] - f[v];
        }
        let mut gadget = Graph::new(size);
        let mut links = vec![None; size];
        for v in 0..n {
            let ext = first_ext[v];
            let int = ext + deg[v];
            for i in 0..deg[v] {
                for j in 0..deg[v] - f[v] {
                    gadget.add_edge(ext + i, int + j);
                }
            }
            for (i, w) in g.neighbors(v).enumerate() {
                if w > v {
                    let j = g.neighbors(w).position(|x| x == v).expect("symmetric adjacency");
                    let (a, b) = (ext + i, first_ext[w] + j);
                    gadget.add_edge(a, b);
                    links[a] = Some((b, (v, w)));
                    links[b] = Some((a, (v, w)));
                }
            }
        }
        Some(TutteGadget { graph: gadget, links })
    }

    /// Host edges selected by a perfect matching of the gadget.
    pub fn pull_back(&self, m: &matching::Matching) -> Vec<(usize, usize)> {
        let mut edges: Vec<_> = m
            .edges()
            .iter()
            .filter_map(|&(a, b)| match self.links[a] {
                Some((partner, e)) if partner == b => Some(e),
                _ => None,
            })
            .collect();
        edges.sort_unstable();
        edges
    }
}

/// Subgraph with degree exactly `f(v)` at every `v`, via the gadget.
pub fn find_f_factor(g: &Graph, f: &[usize]) -> Option<Vec<(usize, usize)>> {
    assert_eq!(f.len(), g.order());
    if f.iter().sum::<usize>() % 2 == 1 {
        return None;
    }
    let gadget = TutteGadget::build(g, f)?;
    let m = matching::perfect_matching(&gadget.graph)?;
    Some(gadget.pull_back(&m))
}

/// A k-factor of `g`, if one exists.
pub fn find_k_factor(g: &Graph, k: usize) -> Option<Factor> {
    let n = g.order();
    if k * n % 2 == 1 || g.min_degree() < k && n > 0 {
        return None;
    }
    find_f_factor(g, &vec![k; n]).map(|edges| Factor { k, edges })
}

/// Visits every k-factor of `g` exactly once, stopping early when `visit`
/// breaks. Branches on the lowest undecided edge at the lowest vertex that
/// still needs degree, and prunes every branch that the gadget reports
/// infeasible, so no branch dead-ends.
pub fn for_each_k_factor<B>(g: &Graph, k: usize, mut visit: impl FnMut(&Factor) -> ControlFlow<B>) -> Option<B> {
    let n = g.order();
    find_k_factor(g, k)?;
    let mut need = vec![k; n];
    let mut chosen = Vec::new();
    match enumerate_factors(g.clone(), &mut need, &mut chosen, k, &mut visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

fn enumerate_factors<B>(
    mut open: Graph,
    need: &mut [usize],
    chosen: &mut Vec<(usize, usize)>,
    k: usize,
    visit: &mut impl FnMut(&Factor) -> ControlFlow<B>,
) -> ControlFlow<B> {
    // edges at saturated vertices can no longer be used
    for v in 0..open.order() {
        if need[v] == 0 {
            let nbrs: Vec<_> = open.neighbors(v).collect();
            for w in nbrs {
                open.remove_edge(v, w);
            }
        }
    }
    let Some(v) = need.iter().position(|&d| d > 0) else {
        let mut edges = chosen.clone();
        edges.sort_unstable();
        return visit(&Factor { k, edges });
    };
    let w = open.neighbors(v).next().expect("feasible state has an open edge at v");
    open.remove_edge(v, w);

    need[v] -= 1;
    need[w] -= 1;
    if find_f_factor(&open, need).is_some() {
        chosen.push((v, w));
        enumerate_factors(open.clone(), need, chosen, k, visit)?;
        chosen.pop();
    }
    need[v] += 1;
    need[w] += 1;

    if find_f_factor(&open, need).is_some() {
        enumerate_factors(open, need, chosen, k, visit)?;
    }
    ControlFlow::Continue(())
}

/// Parity test for a component `C` of `G - S - T`:
/// `e_G(C, T) + k|C|` is odd.
pub fn is_k_odd_component(g: &Graph, k: usize, t: &[usize], c: &[usize]) -> bool {
    let mut in_t = vec![false; g.order()];
    for &x in t {
        in_t[x] = true;
    }
    let e_ct: usize = c.iter().map(|&v| g.neighbors(v).filter(|&w| in_t[w]).count()).sum();
    (e_ct + k * c.len()) % 2 == 1
}

/// The k-odd components of `G - S - T`.
pub fn odd_components(g: &Graph, k: usize, s: &[usize], t: &[usize]) -> Result<Vec<Vec<usize>>> {
    let comps = graph::components_after_removal(g, s, t)?;
    Ok(comps.into_iter().filter(|c| is_k_odd_component(g, k, t, c)).collect())
}

/// Exact deficiency `eta(S, T)` for disjoint `S`, `T`.
pub fn eta(g: &Graph, k: usize, s: &[usize], t: &[usize]) -> Result<i64> {
    let removed = graph::removal_mask(g, s, t)?;
    let mut in_s = vec![0u64; removed.len()];
    for &v in s {
        bits::set(&mut in_s, v);
    }
    let degree_outside_s = |x: usize| -> i64 {
        g.row(x).iter().zip(&in_s).map(|(r, m)| (r & !m).count_ones() as i64).sum()
    };
    let sum_t: i64 = t.iter().map(|&x| degree_outside_s(x)).sum();
    let q = graph::components_of_mask(g, &removed)
        .iter()
        .filter(|c| is_k_odd_component(g, k, t, c))
        .count() as i64;
    let k = k as i64;
    Ok(k * s.len() as i64 - k * t.len() as i64 + sum_t - q)
}

/// Disjoint `(S, T)` with negative deficiency, i.e. a proof that `G` has no
/// k-factor.
///
/// When `k * n` is even every deficiency is even and `eta <= -2`; when it is
/// odd the minimum can be `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TutteCertificate {
    pub k: usize,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub eta: i64,
    pub odd_components: Vec<Vec<usize>>,
}

impl TutteCertificate {
    /// Whether the certificate meets the `eta <= -2` form of the criterion.
    pub fn meets_strict_bound(&self) -> bool {
        self.eta <= -2
    }

    pub fn q(&self) -> usize {
        self.odd_components.len()
    }

    /// Recomputes `eta` and the odd components from `g` and checks them
    /// against the stored fields.
    pub fn verify(&self, g: &Graph) -> Result<bool> {
        let eta = eta(g, self.k, &self.s, &self.t)?;
        let odd = odd_components(g, self.k, &self.s, &self.t)?;
        Ok(eta == self.eta && odd == self.odd_components && self.eta < 0)
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &[usize]) -> fmt::Result {
    for (i, v) in set.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for TutteCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S: ")?;
        write_set(f, &self.s)?;
        write!(f, "\nT: ")?;
        write_set(f, &self.t)?;
        write!(f, "\neta: {}\nodd:", self.eta)?;
        for c in &self.odd_components {
            write!(f, " {{")?;
            write_set(f, c)?;
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// A certificate chosen by: minimum `eta`; then fewest vertices in k-odd
/// components (`U`); then most vertices outside `S`, `T` and `U`; then
/// lexicographically smallest sorted `S`, then `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalCertificate {
    pub base: TutteCertificate,
    pub u_size: usize,
    pub rest_size: usize,
}

/// A vertex of `U` that breaks `e_G(v, T) <= k - 1` or `d_{G-S}(v) >= k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    pub vertex: usize,
    pub edges_to_t: usize,
    pub degree_outside_s: usize,
}

impl ExtremalCertificate {
    pub fn u(&self) -> Vec<usize> {
        let mut u: Vec<_> = self.base.odd_components.iter().flatten().copied().collect();
        u.sort_unstable();
        u
    }

    /// `U` is empty or has a component with fewer than three vertices.
    pub fn is_degenerate(&self) -> bool {
        self.base.odd_components.is_empty() || self.base.odd_components.iter().any(|c| c.len() < 3)
    }

    pub fn lemma_violations(&self, g: &Graph) -> Vec<LemmaViolation> {
        let k = self.base.k;
        let mut in_s = vec![false; g.order()];
        let mut in_t = vec![false; g.order()];
        self.base.s.iter().for_each(|&v| in_s[v] = true);
        self.base.t.iter().for_each(|&v| in_t[v] = true);
        self.u()
            .into_iter()
            .filter_map(|v| {
                let edges_to_t = g.neighbors(v).filter(|&w| in_t[w]).count();
                let degree_outside_s = g.neighbors(v).filter(|&w| !in_s[w]).count();
                (edges_to_t + 1 > k || degree_outside_s < k + 1).then_some(LemmaViolation {
                    vertex: v,
                    edges_to_t,
                    degree_outside_s,
                })
            })
            .collect()
    }
}

impl fmt::Display for ExtremalCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\nu_size: {}\nrest_size: {}", self.base, self.u_size, self.rest_size)
    }
}

/// Compares the ascending vertex lists of two masks lexicographically.
fn cmp_sorted_sets(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let x = diff.trailing_zeros();
    // both lists agree below x; exactly one of them contains x
    let (has, other) = if a >> x & 1 == 1 { (Ordering::Greater, b) } else { (Ordering::Less, a) };
    if other >> x == 0 {
        // the other list ends before x: it is a proper prefix
        has
    } else {
        has.reverse()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Selection {
    /// minimum eta, then smallest (S, T)
    MinEta,
    /// minimum eta, smallest |U|, largest rest, then smallest (S, T)
    Extremal,
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    eta: i64,
    u_size: u32,
    rest_size: u32,
    s: u64,
    t: u64,
}

impl Candidate {
    fn cmp(&self, other: &Candidate, sel: Selection) -> Ordering {
        let head = self.eta.cmp(&other.eta);
        let head = match sel {
            Selection::MinEta => head,
            Selection::Extremal => head
                .then(self.u_size.cmp(&other.u_size))
                .then(other.rest_size.cmp(&self.rest_size)),
        };
        head.then_with(|| cmp_sorted_sets(self.s, other.s))
            .then_with(|| cmp_sorted_sets(self.t, other.t))
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>, sel: Selection) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.cmp(&x, sel) == Ordering::Less { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Bit-parallel evaluation of all `(S, T)` pairs for graphs with `n <= 16`.
struct PairSearch<'a> {
    n: usize,
    k: i64,
    rows: &'a [u64],
}

impl PairSearch<'_> {
    /// Returns `(q, U)` for remaining vertex set `rest` and `T`.
    #[inline]
    fn odd_part(&self, rest: u64, t: u64) -> (i64, u64) {
        let mut q = 0;
        let mut u = 0;
        let mut left = rest;
        while left != 0 {
            let seed = left & left.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            while frontier != 0 {
                let mut reach = 0;
                for v in OnesU64(frontier) {
                    reach |= self.rows[v];
                }
                frontier = reach & rest & !comp;
                comp |= frontier;
            }
            left &= !comp;
            let e_ct: u32 = OnesU64(comp).map(|v| (self.rows[v] & t).count_ones()).sum();
            if (e_ct as i64 + self.k * comp.count_ones() as i64) & 1 == 1 {
                q += 1;
                u |= comp;
            }
        }
        (q, u)
    }

    fn best_for_s(&self, s: u64, mut best: Option<Candidate>, sel: Selection) -> Option<Candidate> {
        let full = bits::low_mask(self.n);
        let mut ds = [0i64; CERTIFICATE_MAX_N];
        for (x, d) in ds.iter_mut().enumerate().take(self.n) {
            *d = (self.rows[x] & !s).count_ones() as i64;
        }
        let base = self.k * s.count_ones() as i64;
        let avail = full & !s;
        let mut t = avail;
        loop {
            let sum_t: i64 = OnesU64(t).map(|x| ds[x]).sum();
            let rest = avail & !t;
            let rest_count = rest.count_ones() as i64;
            // q <= |rest|, so this bounds eta from below
            let partial = base - self.k * t.count_ones() as i64 + sum_t;
            if best.is_none_or(|b| partial - rest_count <= b.eta) {
                let (q, u) = self.odd_part(rest, t);
                let cand = Candidate {
                    eta: partial - q,
                    u_size: u.count_ones(),
                    rest_size: (rest & !u).count_ones(),
                    s,
                    t,
                };
                best = better(best, Some(cand), sel);
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & avail;
        }
        best
    }

    fn search(&self, sel: Selection) -> Candidate {
        let total = 1u64 << self.n;
        let chunk = (total / 64).max(1);
        let chunks: Vec<u64> = (0..total).step_by(chunk as usize).collect();
        chunks
            .into_par_iter()
            .map(|start| {
                (start..(start + chunk).min(total)).fold(None, |best, s| self.best_for_s(s, best, sel))
            })
            .reduce(|| None, |a, b| better(a, b, sel))
            .expect("the pair (empty, empty) is always evaluated")
    }
}

fn run_search(g: &Graph, k: usize, sel: Selection) -> Result<Candidate> {
    let n = g.order();
    if n > CERTIFICATE_MAX_N {
        return Err(Error::SizeLimit {
            what: "exhaustive (S, T) search",
            limit: CERTIFICATE_MAX_N,
            n,
        });
    }
    let rows: Vec<u64> = (0..n).map(|v| g.row_word(v)).collect();
    let search = PairSearch {
        n,
        k: k as i64,
        rows: &rows,
    };
    Ok(search.search(sel))
}

fn certificate_from(g: &Graph, k: usize, c: Candidate) -> TutteCertificate {
    let s = bits::mask_to_vec(c.s);
    let t = bits::mask_to_vec(c.t);
    let odd_components = odd_components(g, k, &s, &t).expect("search yields disjoint pairs");
    TutteCertificate {
        k,
        s,
        t,
        eta: c.eta,
        odd_components,
    }
}

/// Minimum of `eta(S, T)` over all disjoint pairs.
pub fn min_eta(g: &Graph, k: usize) -> Result<i64> {
    Ok(run_search(g, k, Selection::MinEta)?.eta)
}

/// Exhaustive search for a certificate attaining the global minimum of
/// `eta`; `None` when that minimum is non-negative.
pub fn find_tutte_certificate(g: &Graph, k: usize) -> Result<Option<TutteCertificate>> {
    let best = run_search(g, k, Selection::MinEta)?;
    Ok((best.eta < 0).then(|| certificate_from(g, k, best)))
}

pub fn find_extremal_certificate(g: &Graph, k: usize) -> Result<Option<ExtremalCertificate>> {
    let best = run_search(g, k, Selection::Extremal)?;
    Ok((best.eta < 0).then(|| ExtremalCertificate {
        base: certificate_from(g, k, best),
        u_size: best.u_size as usize,
        rest_size: best.rest_size as usize,
    }))
}

/// Exactly one of "a k-factor exists" and "a certificate exists" holds.
pub fn verify_duality(g: &Graph, k: usize) -> Result<bool> {
    let cert = find_tutte_certificate(g, k)?;
    let factor = find_k_factor(g, k);
    if let Some(f) = &factor {
        if !f.is_valid_in(g) {
            return Ok(false);
        }
    }
    Ok(factor.is_some() != cert.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_odd_component_examples() {
        let star = Graph::star(3);
        assert!(is_k_odd_component(&star, 1, &[], &[1]));
        let c6 = Graph::cycle(6);
        assert!(is_k_odd_component(&c6, 1, &[3], &[1, 2]));
        assert!(is_k_odd_component(&c6, 2, &[3], &[4, 5]));
        // k even and e(C, T) even
        assert!(!is_k_odd_component(&c6, 2, &[], &[0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn eta_examples() {
        let star = Graph::star(3);
        assert_eq!(eta(&star, 1, &[0], &[]).unwrap(), -2);
        assert_eq!(eta(&star, 1, &[], &[0]).unwrap(), 2);
        let c5 = Graph::cycle(5);
        assert_eq!(eta(&c5, 1, &[], &[]).unwrap(), -1);
        assert!(eta(&star, 1, &[0], &[0]).is_err());
    }

    #[test]
    fn factor_examples() {
        let c4 = Graph::cycle(4);
        assert_eq!(find_k_factor(&c4, 2).unwrap().edges, c4.edges());
        let k4 = Graph::complete(4);
        assert_eq!(find_k_factor(&k4, 3).unwrap().edges, k4.edges());
        assert_eq!(find_k_factor(&Graph::star(3), 1), None);
        assert_eq!(find_k_factor(&Graph::cycle(5), 1), None);
        let f = find_k_factor(&Graph::petersen(), 1).unwrap();
        assert!(f.is_valid_in(&Graph::petersen()));
    }

    #[test]
    fn gadget_size() {
        let p = Graph::petersen();
        let gadget = TutteGadget::build(&p, &[2; 10]).unwrap();
        assert_eq!(gadget.graph.order(), 10 * (2 * 3 - 2));
    }

    #[test]
    fn certificate_examples() {
        let star = Graph::star(3);
        let c = find_tutte_certificate(&star, 1).unwrap().unwrap();
        assert_eq!((c.s.as_slice(), c.t.as_slice(), c.eta), (&[0][..], &[][..], -2));
        assert_eq!(c.to_string(), "S: 0\nT: \neta: -2\nodd: {1} {2} {3}");
        assert!(c.verify(&star).unwrap());
        assert_eq!(find_tutte_certificate(&Graph::cycle(4), 2).unwrap(), None);
        assert_eq!(find_tutte_certificate(&Graph::complete(4), 1).unwrap(), None);
        assert!(find_tutte_certificate(&Graph::new(17), 1).is_err());
    }

    #[test]
    fn extremal_examples() {
        let star = Graph::star(3);
        let x = find_extremal_certificate(&star, 1).unwrap().unwrap();
        assert_eq!(x.base.eta, -2);
        assert_eq!(x.base.s, vec![0]);
        assert_eq!(x.base.t, vec![1, 2, 3]);
        assert_eq!((x.u_size, x.rest_size), (0, 0));
        assert!(x.is_degenerate());
        assert!(x.lemma_violations(&star).is_empty());

        let c5 = find_extremal_certificate(&Graph::cycle(5), 1).unwrap().unwrap();
        assert_eq!(c5.base.eta, -1);
        assert!(!c5.base.meets_strict_bound());

        assert_eq!(find_extremal_certificate(&Graph::cycle(6), 2).unwrap(), None);
    }

    #[test]
    fn set_order() {
        // [0] < [0, 1] < [1]
        assert_eq!(cmp_sorted_sets(0b01, 0b11), Ordering::Less);
        assert_eq!(cmp_sorted_sets(0b11, 0b10), Ordering::Less);
        assert_eq!(cmp_sorted_sets(0b10, 0b01), Ordering::Greater);
        assert_eq!(cmp_sorted_sets(0, 0b1), Ordering::Less);
        assert_eq!(cmp_sorted_sets(0b101, 0b011), Ordering::Greater);
    }

    #[test]
    fn duality_examples() {
        assert!(verify_duality(&Graph::star(3), 1).unwrap());
        assert!(verify_duality(&Graph::cycle(4), 2).unwrap());
        assert!(verify_duality(&Graph::cycle(5), 1).unwrap());
        assert!(verify_duality(&Graph::petersen(), 3).unwrap());
    }

    #[test]
    fn factor_enumeration() {
        let mut count = 0;
        for_each_k_factor::<()>(&Graph::complete(4), 1, |f| {
            assert!(f.is_valid_in(&Graph::complete(4)));
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 3);
        let mut count = 0;
        for_each_k_factor::<()>(&Graph::complete(6), 2, |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        // 2-factors of K6: 60 hexagons + 10 pairs of triangles
        assert_eq!(count, 70);
    }
}
