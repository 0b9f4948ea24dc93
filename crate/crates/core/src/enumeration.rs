//! Isomorph-free generation of small graphs and the counterexample search
//! harness for the Ore-type degree condition.
//!
//! Graphs are grown one edge at a time from the edgeless graph. A child
//! `H = P + e` is kept only if deleting the canonical edge of `H` gives a
//! graph isomorphic to `P`; isomorphic children of the same parent are
//! then merged. Every generated class must be closed under edge deletion,
//! so that the canonical parent of a class member is again a member.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{self, CANON_MAX_N};
use crate::error::{Error, Result};
use crate::factor;
use crate::factorization;
use crate::graph::{self, Graph};
use crate::graph6;

/// Largest order for unrestricted enumeration.
pub const ENUMERATE_MAX_N: usize = 10;
/// Largest order for Ore-type enumeration and searches. Runtime grows
/// quickly as `k` drops: at `n = 10` it is under a second for `k >= 5`
/// and minutes for `k = 1`.
pub const ORE_MAX_N: usize = 12;

/// Edge-deletion-closed graph class that the generator walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    All,
    /// Maximum degree at most the bound.
    MaxDegree(usize),
    /// `d(u) + d(v) <= cap` on every edge `uv`.
    DegreeSumCap(usize),
}

impl EdgeClass {
    /// Whether `g + uv` stays in the class, given that `g` is in it.
    fn admits(self, g: &Graph, u: usize, v: usize) -> bool {
        match self {
            EdgeClass::All => true,
            EdgeClass::MaxDegree(d) => g.degree(u) < d && g.degree(v) < d,
            EdgeClass::DegreeSumCap(cap) => {
                let du = g.degree(u) + 1;
                let dv = g.degree(v) + 1;
                du + dv <= cap
                    && g.neighbors(u).all(|w| du + g.degree(w) <= cap)
                    && g.neighbors(v).all(|w| dv + g.degree(w) <= cap)
            }
        }
    }
}

/// Canonical-augmentation generator for one class of graphs on `n` vertices.
#[derive(Debug, Clone, Copy)]
pub struct Generator {
    n: usize,
    class: EdgeClass,
}

struct Node {
    graph: Graph,
    code: u128,
}

impl Generator {
    pub fn new(n: usize, class: EdgeClass) -> Result<Self> {
        if n > CANON_MAX_N {
            return Err(Error::SizeLimit {
                what: "graph generation",
                limit: CANON_MAX_N,
                n,
            });
        }
        Ok(Generator { n, class })
    }

    fn root(&self) -> Node {
        let graph = Graph::new(self.n);
        let code = canon::canonical_code(&graph);
        Node { graph, code }
    }

    /// Accepted children of `parent`, one per isomorphism class, ordered by
    /// canonical code.
    fn children(&self, parent: &Node) -> Vec<Node> {
        let g = &parent.graph;
        let mut out: Vec<Node> = Vec::new();
        for v in 1..self.n {
            for u in 0..v {
                if g.has_edge(u, v) || !self.class.admits(g, u, v) {
                    continue;
                }
                let mut child = g.clone();
                child.add_edge(u, v);
                let lab = canon::canonical_labelling(&child);
                let (a, b) = canonical_edge(&lab);
                let mut back = child.clone();
                back.remove_edge(a, b);
                if canon::canonical_code(&back) == parent.code {
                    out.push(Node {
                        graph: child,
                        code: lab.code,
                    });
                }
            }
        }
        out.sort_by_key(|c| c.code);
        out.dedup_by_key(|c| c.code);
        out
    }

    /// Lazy depth-first stream over one representative per class.
    pub fn stream(&self) -> GraphStream {
        GraphStream {
            gen: *self,
            stack: vec![self.root()],
        }
    }

    /// Applies `f` to every generated graph, distributing subtrees over the
    /// current rayon pool. Results come back in stream order whatever the
    /// number of workers.
    pub fn par_filter_map<T, F>(&self, f: &F) -> (usize, Vec<T>)
    where
        T: Send,
        F: Fn(&Graph) -> Option<T> + Sync,
    {
        self.walk(self.root(), f)
    }

    fn walk<T, F>(&self, node: Node, f: &F) -> (usize, Vec<T>)
    where
        T: Send,
        F: Fn(&Graph) -> Option<T> + Sync,
    {
        let mine = f(&node.graph);
        let kids = self.children(&node);
        let parts: Vec<(usize, Vec<T>)> = kids.into_par_iter().map(|c| self.walk(c, f)).collect();
        let mut count = 1;
        let mut out: Vec<T> = mine.into_iter().collect();
        for (c, items) in parts {
            count += c;
            out.extend(items);
        }
        (count, out)
    }
}

/// The edge of `H` occupying the last set bit of its canonical code.
fn canonical_edge(lab: &canon::Labelling) -> (usize, usize) {
    let n = lab.lab.len();
    let last = lab.code.trailing_zeros() as usize;
    let total = n * (n - 1) / 2;
    // code bit index counted from the most significant end
    let idx = total - 1 - last;
    let mut j = 1;
    while j * (j + 1) / 2 <= idx {
        j += 1;
    }
    let i = idx - j * (j - 1) / 2;
    (lab.lab[i], lab.lab[j])
}

/// Depth-first stream of generated graphs.
pub struct GraphStream {
    gen: Generator,
    stack: Vec<Node>,
}

impl Iterator for GraphStream {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        let node = self.stack.pop()?;
        let mut kids = self.gen.children(&node);
        kids.reverse();
        self.stack.extend(kids);
        Some(node.graph)
    }
}

fn check_n(n: usize, limit: usize, what: &'static str) -> Result<()> {
    if n > limit {
        return Err(Error::SizeLimit { what, limit, n });
    }
    Ok(())
}

/// One graph per isomorphism class on `n <= 10` vertices.
pub fn enumerate_graphs(n: usize) -> Result<GraphStream> {
    check_n(n, ENUMERATE_MAX_N, "graph enumeration")?;
    Ok(Generator::new(n, EdgeClass::All)?.stream())
}

fn check_ore_params(n: usize, k: usize) -> Result<()> {
    if n >= 2 && !(1..n).contains(&k) {
        return Err(Error::arg(format!("need 1 <= k <= n-1, got n = {n}, k = {k}")));
    }
    check_n(n, ORE_MAX_N, "Ore enumeration")
}

/// Complements of Ore-type-(k-2) graphs: `d(u) + d(v) <= n - k` on every
/// edge, which is closed under edge deletion.
fn ore_complements(n: usize, k: usize) -> Result<Generator> {
    Generator::new(n, EdgeClass::DegreeSumCap(n - k))
}

/// Graphs satisfying `d(x) + d(y) >= n + k - 2` for all nonadjacent pairs,
/// one per isomorphism class.
///
/// With `d(x) = n - 1 - d'(x)` in the complement, the condition reads
/// `d'(u) + d'(v) <= n - k` on every complement edge, so the complements
/// are generated directly under that cap. The cap is tight for large `k`
/// and loose for small `k`, where the class approaches all graphs.
pub fn enumerate_ore_graphs(n: usize, k: usize) -> Result<Box<dyn Iterator<Item = Graph> + Send>> {
    check_ore_params(n, k)?;
    Ok(Box::new(ore_complements(n, k)?.stream().map(|h| h.complement())))
}

/// Same classes as [`enumerate_ore_graphs`], obtained by filtering the full
/// enumeration; slower, kept as an independent route for cross-checks.
pub fn enumerate_ore_graphs_filtered(n: usize, k: usize) -> Result<Box<dyn Iterator<Item = Graph> + Send>> {
    check_ore_params(n, k)?;
    Ok(Box::new(enumerate_graphs(n)?.filter(move |g| graph::is_ore_type(g, k))))
}

/// One graph per isomorphism class of `d`-regular graphs on `n` vertices.
/// Graphs of degree above `(n - 1) / 2` are produced as complements.
pub fn enumerate_regular_graphs(n: usize, d: usize) -> Result<Box<dyn Iterator<Item = Graph> + Send>> {
    check_n(n, ENUMERATE_MAX_N, "regular graph enumeration")?;
    if n * d % 2 == 1 {
        return Err(Error::arg(format!("no {d}-regular graph on {n} vertices: n*d is odd")));
    }
    if n > 0 && d >= n {
        return Err(Error::arg(format!("degree {d} impossible on {n} vertices")));
    }
    let low = if n == 0 { 0 } else { d.min(n - 1 - d) };
    let flip = n > 0 && low != d;
    let gen = Generator::new(n, EdgeClass::MaxDegree(low))?;
    Ok(Box::new(gen.stream().filter(move |g| g.regular_degree() == Some(low)).map(
        move |g| if flip { g.complement() } else { g },
    )))
}

/// Outcome of scanning every Ore-type graph for a property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub k: usize,
    pub graphs_scanned: usize,
    /// Ore-type classes among those scanned; equal to `graphs_scanned`
    /// since only Ore-type graphs are generated.
    pub ore_graphs: usize,
    /// graph6 strings of Ore-type graphs lacking the property
    pub failures: Vec<String>,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

impl SearchReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    /// Header line followed by one graph6 string per failure.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "n={} k={} scanned={} ore={} failures={}",
            self.n,
            self.k,
            self.graphs_scanned,
            self.ore_graphs,
            self.failures.len()
        );
        for f in &self.failures {
            out.push('\n');
            out.push_str(f);
        }
        out
    }
}

/// Hooks for long-running searches.
#[derive(Default)]
pub struct SearchOptions<'a> {
    /// Called as soon as a failure is found.
    pub on_failure: Option<&'a (dyn Fn(&str) + Sync)>,
    /// Called with the running count every `progress_every` scanned graphs.
    pub on_progress: Option<&'a (dyn Fn(usize) + Sync)>,
    pub progress_every: usize,
}

/// Scans every Ore-type-(k-2) graph on `n` vertices and records those that
/// fail `property`.
pub fn search_ore_graphs<P>(n: usize, k: usize, opts: &SearchOptions<'_>, property: P) -> Result<SearchReport>
where
    P: Fn(&Graph) -> bool + Sync,
{
    let start = Instant::now();
    check_ore_params(n, k)?;
    let scanned = AtomicUsize::new(0);
    let every = opts.progress_every.max(1);
    let visit = |h: &Graph| -> Option<String> {
        let seen = scanned.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(p) = opts.on_progress {
            if seen.is_multiple_of(every) {
                p(seen);
            }
        }
        let g = h.complement();
        if property(&g) {
            return None;
        }
        let code = graph6::emit_graph6(&g).expect("n is within graph6 range");
        if let Some(sink) = opts.on_failure {
            sink(&code);
        }
        Some(code)
    };
    let (_, failures) = ore_complements(n, k)?.par_filter_map(&visit);
    Ok(SearchReport {
        n,
        k,
        graphs_scanned: scanned.load(Ordering::Relaxed),
        ore_graphs: scanned.into_inner(),
        failures,
        elapsed: start.elapsed(),
    })
}

/// Ore-type-(k-2) graphs on `n` vertices without `k` edge-disjoint perfect
/// matchings.
pub fn search_win_counterexample(n: usize, k: usize, opts: &SearchOptions<'_>) -> Result<SearchReport> {
    if n % 2 == 1 || k < 1 || k + 2 > n {
        return Err(Error::arg(format!("need even n and 1 <= k <= n-2, got n = {n}, k = {k}")));
    }
    search_ore_graphs(n, k, opts, |g| {
        factorization::k_disjoint_perfect_matchings(g, k)
            .expect("n is even")
            .is_some()
    })
}

/// Ore-type-(k-2) graphs on `n` vertices without a k-factor.
pub fn search_kfactor_counterexample(n: usize, k: usize, opts: &SearchOptions<'_>) -> Result<SearchReport> {
    if n % 2 == 1 || 2 * k < n || k + 1 > n {
        return Err(Error::arg(format!("need even n and n/2 <= k <= n-1, got n = {n}, k = {k}")));
    }
    search_ore_graphs(n, k, opts, |g| factor::find_k_factor(g, k).is_some())
}
