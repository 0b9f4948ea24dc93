//! Edge-disjoint perfect matchings: 1-factorizations of regular graphs,
//! `k` disjoint perfect matchings in arbitrary graphs, and the
//! factor-then-decompose pipeline.

use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor;
use crate::graph::Graph;
use crate::matching::{self, Matching};

/// An ordered list of pairwise edge-disjoint perfect matchings.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct Factorization {
    pub matchings: Vec<Matching>,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    /// Every matching is perfect in `g` and no edge is used twice.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = Graph::new(g.order());
        for m in &self.matchings {
            if !m.is_perfect_in(g) {
                return false;
            }
            for &(u, v) in m.edges() {
                if used.has_edge(u, v) {
                    return false;
                }
                used.add_edge(u, v);
            }
        }
        true
    }

    /// The union of the matchings is all of `E(g)`.
    pub fn covers(&self, g: &Graph) -> bool {
        self.is_valid_in(g) && self.matchings.iter().map(Matching::len).sum::<usize>() == g.edge_count()
    }

    /// Union of the matchings as a spanning subgraph of order `n`.
    pub fn union(&self, n: usize) -> Graph {
        let edges = self.matchings.iter().flat_map(|m| m.edges().iter().copied());
        Graph::from_edges(n, edges).expect("matching edges are in range")
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.matchings.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "M{}: ", i + 1)?;
            for (u, v) in m.edges() {
                write!(f, "({u},{v})")?;
            }
        }
        Ok(())
    }
}

/// Visits the perfect matchings of `g` restricted to the unmatched vertices
/// in `mate`, extending the partial matching it holds. The lowest unmatched
/// vertex is paired with each available neighbour in ascending order;
/// `first_partner_above` restricts the partner of that first vertex.
fn for_each_completion<B>(
    g: &Graph,
    mate: &mut [Option<usize>],
    first_partner_above: Option<usize>,
    visit: &mut impl FnMut(&[Option<usize>]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let Some(x) = mate.iter().position(Option::is_none) else {
        return visit(mate);
    };
    let candidates: Vec<usize> = g
        .neighbors(x)
        .filter(|&y| mate[y].is_none() && first_partner_above.is_none_or(|a| y > a))
        .collect();
    for y in candidates {
        mate[x] = Some(y);
        mate[y] = Some(x);
        // every other unmatched vertex still needs an unmatched neighbour
        let stuck = (0..g.order()).any(|z| mate[z].is_none() && g.neighbors(z).all(|w| mate[w].is_some()));
        if !stuck {
            for_each_completion(g, mate, None, visit)?;
        }
        mate[x] = None;
        mate[y] = None;
    }
    ControlFlow::Continue(())
}

fn matching_of(mate: &[Option<usize>]) -> Matching {
    Matching::from_edges(
        mate.iter()
            .enumerate()
            .filter_map(|(v, m)| m.filter(|&w| v < w).map(|w| (v, w))),
    )
}

fn remove_matching(g: &Graph, m: &Matching) -> Graph {
    let mut h = g.clone();
    for &(u, v) in m.edges() {
        h.remove_edge(u, v);
    }
    h
}

/// Decomposes a regular graph of even order into perfect matchings.
///
/// Backtracking: the lowest vertex `v` with remaining edges has its lowest
/// remaining edge `vw` in exactly one matching, so each level tries the
/// perfect matchings through `vw` and recurses on the residual graph.
pub fn one_factorization(g: &Graph) -> Result<Option<Factorization>> {
    let n = g.order();
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::arg("one_factorization needs a regular graph"))?;
    if n % 2 == 1 {
        return Err(Error::arg("one_factorization needs an even number of vertices"));
    }
    let mut out = Vec::with_capacity(d);
    Ok(factorize(g, &mut out).then_some(Factorization { matchings: out }))
}

fn factorize(residual: &Graph, out: &mut Vec<Matching>) -> bool {
    let Some(v) = (0..residual.order()).find(|&v| residual.degree(v) > 0) else {
        return true;
    };
    if matching::perfect_matching(residual).is_none() {
        return false;
    }
    let w = residual.neighbors(v).next().expect("v has an edge");
    let mut mate = vec![None; residual.order()];
    mate[v] = Some(w);
    mate[w] = Some(v);
    let found = for_each_completion(residual, &mut mate, None, &mut |mate| {
        let m = matching_of(mate);
        let rest = remove_matching(residual, &m);
        out.push(m);
        if factorize(&rest, out) {
            return ControlFlow::Break(());
        }
        out.pop();
        ControlFlow::Continue(())
    });
    found.is_break()
}

/// `k` pairwise edge-disjoint perfect matchings of `g`, searched directly.
///
/// Matchings are generated in increasing order of the partner of vertex 0,
/// and a branch is abandoned as soon as the residual graph has no
/// `(k - i)`-factor.
pub fn k_disjoint_perfect_matchings(g: &Graph, k: usize) -> Result<Option<Factorization>> {
    let n = g.order();
    if n % 2 == 1 {
        return Err(Error::arg("perfect matchings need an even number of vertices"));
    }
    if k == 0 || n == 0 {
        return Ok(Some(Factorization {
            matchings: vec![Matching::default(); if n == 0 { k } else { 0 }],
        }));
    }
    let mut out = Vec::with_capacity(k);
    Ok(disjoint_search(g, k, None, &mut out).then_some(Factorization { matchings: out }))
}

fn disjoint_search(residual: &Graph, remaining: usize, last_partner: Option<usize>, out: &mut Vec<Matching>) -> bool {
    if remaining == 0 {
        return true;
    }
    if factor::find_k_factor(residual, remaining).is_none() {
        return false;
    }
    let mut mate = vec![None; residual.order()];
    for_each_completion(residual, &mut mate, last_partner, &mut |mate| {
        let m = matching_of(mate);
        let partner = mate[0].expect("perfect");
        let rest = remove_matching(residual, &m);
        out.push(m);
        if disjoint_search(&rest, remaining - 1, Some(partner), out) {
            return ControlFlow::Break(());
        }
        out.pop();
        ControlFlow::Continue(())
    })
    .is_break()
}

/// Finds a k-factor that splits into `k` perfect matchings, trying every
/// k-factor of `g` in turn.
pub fn decompose_via_factor(g: &Graph, k: usize) -> Option<Factorization> {
    if g.order() % 2 == 1 {
        return None;
    }
    factor::for_each_k_factor(g, k, |f| {
        let h = f.as_graph(g.order());
        match one_factorization(&h) {
            Ok(Some(fact)) => ControlFlow::Break(fact),
            _ => ControlFlow::Continue(()),
        }
    })
}
