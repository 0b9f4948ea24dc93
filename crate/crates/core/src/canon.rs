//! Canonical labelling of small graphs (n <= 16) by partition refinement
//! and a search over individualization sequences.
//!
//! Each leaf of the search tree is a vertex ordering; the canonical form is
//! the ordering whose upper-triangle adjacency code (graph6 bit order,
//! first bit most significant) is largest. Leaves with equal codes yield
//! automorphisms, which prune children in the same orbit and let the
//! search jump back to the first-path ancestor.

use crate::graph::Graph;

pub const CANON_MAX_N: usize = 16;

/// Canonical labelling: `lab[i]` is the vertex placed at position `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    pub lab: Vec<usize>,
    pub code: u128,
}

impl Labelling {
    /// The relabelled graph, identical for all isomorphic inputs.
    pub fn graph(&self, g: &Graph) -> Graph {
        let mut perm = vec![0; self.lab.len()];
        for (pos, &v) in self.lab.iter().enumerate() {
            perm[v] = pos;
        }
        g.permuted(&perm)
    }
}

/// Upper-triangle code of `g` under the ordering `lab`.
pub fn code_under(g: &Graph, lab: &[usize]) -> u128 {
    let mut code = 0u128;
    for j in 1..lab.len() {
        let row = g.row_word(lab[j]);
        for &u in &lab[..j] {
            code = code << 1 | (row >> u & 1) as u128;
        }
    }
    code
}

pub fn canonical_code(g: &Graph) -> u128 {
    canonical_labelling(g).code
}

pub fn canonical_labelling(g: &Graph) -> Labelling {
    let n = g.order();
    assert!(n <= CANON_MAX_N, "canonical labelling supports n <= {CANON_MAX_N}");
    let rows: Vec<u64> = (0..n).map(|v| g.row_word(v)).collect();
    let mut search = Search {
        g,
        rows,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    let root = search.refine(vec![0; n]);
    let mut path = Vec::new();
    search.descend(root, &mut path);
    let (code, lab) = search.best.expect("the search reaches at least one leaf");
    Labelling { lab, code }
}

struct Search<'a> {
    g: &'a Graph,
    rows: Vec<u64>,
    /// code, labelling and individualized path of the first leaf
    first: Option<(u128, Vec<usize>, Vec<usize>)>,
    best: Option<(u128, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Equitable refinement. `cells[v]` is the index of `v`'s cell; cells
    /// split in place, ordered by neighbour counts into every current cell,
    /// so singleton positions never move.
    fn refine(&self, mut cells: Vec<u32>) -> Vec<u32> {
        let n = cells.len();
        let mut count = distinct(&cells);
        loop {
            let mut keys: Vec<(u32, Vec<u8>, usize)> = (0..n)
                .map(|v| {
                    let mut sig = vec![0u8; n];
                    let mut row = self.rows[v];
                    while row != 0 {
                        let w = row.trailing_zeros() as usize;
                        row &= row - 1;
                        sig[cells[w] as usize] += 1;
                    }
                    (cells[v], sig, v)
                })
                .collect();
            keys.sort_unstable();
            let mut next = vec![0u32; n];
            let mut idx = 0u32;
            for i in 0..n {
                if i > 0 && (keys[i].0 != keys[i - 1].0 || keys[i].1 != keys[i - 1].1) {
                    idx += 1;
                }
                next[keys[i].2] = idx;
            }
            // re-index cells by position of their first vertex
            let next = positional(&next);
            let new_count = distinct(&next);
            cells = next;
            if new_count == count {
                return cells;
            }
            count = new_count;
        }
    }

    fn descend(&mut self, cells: Vec<u32>, path: &mut Vec<usize>) -> Option<usize> {
        let n = cells.len();
        let sizes = cell_sizes(&cells);
        let target = (0..n).filter(|&v| sizes[cells[v] as usize] > 1).map(|v| cells[v]).min();
        let Some(target) = target else {
            return self.leaf(&cells, path);
        };
        let members: Vec<usize> = (0..n).filter(|&v| cells[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &w in &members {
            if !tried.is_empty() && self.same_orbit(path, &tried, w) {
                continue;
            }
            let child = self.refine(individualize(&cells, w));
            path.push(w);
            let jump = self.descend(child, path);
            path.pop();
            tried.push(w);
            if let Some(depth) = jump {
                if depth < path.len() {
                    return Some(depth);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[u32], path: &[usize]) -> Option<usize> {
        let mut lab = vec![0; cells.len()];
        for (v, &c) in cells.iter().enumerate() {
            lab[c as usize] = v;
        }
        let code = code_under(self.g, &lab);
        let Some((first_code, first_lab, first_path)) = &self.first else {
            self.first = Some((code, lab.clone(), path.to_vec()));
            self.best = Some((code, lab));
            return None;
        };
        if code == *first_code {
            self.generators.push(map_between(first_lab, &lab));
            let common = first_path.iter().zip(path).take_while(|(a, b)| a == b).count();
            return Some(common);
        }
        let (best_code, best_lab) = self.best.as_ref().expect("set with first");
        if code == *best_code {
            self.generators.push(map_between(best_lab, &lab));
        } else if code > *best_code {
            self.best = Some((code, lab));
        }
        None
    }

    /// Whether `w` shares an orbit with an already tried sibling under the
    /// known automorphisms that fix `path` pointwise.
    fn same_orbit(&self, path: &[usize], tried: &[usize], w: usize) -> bool {
        let n = self.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gen in self.generators.iter().filter(|g| path.iter().all(|&v| g[v] == v)) {
            any = true;
            for v in 0..n {
                let (a, b) = (find(&mut parent, v), find(&mut parent, gen[v]));
                parent[a] = b;
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, w);
        tried.iter().any(|&t| find(&mut parent, t) == root)
    }
}

/// Automorphism sending `from[i]` to `to[i]`.
fn map_between(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut gamma = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gamma[a] = b;
    }
    gamma
}

fn distinct(cells: &[u32]) -> usize {
    let mut seen = vec![false; cells.len()];
    cells.iter().filter(|&&c| !std::mem::replace(&mut seen[c as usize], true)).count()
}

fn cell_sizes(cells: &[u32]) -> Vec<usize> {
    let mut sizes = vec![0; cells.len()];
    for &c in cells {
        sizes[c as usize] += 1;
    }
    sizes
}

/// Renames cell indices to the position of the cell's first element in the
/// ordered partition, so that a singleton's index equals its final position.
fn positional(rank: &[u32]) -> Vec<u32> {
    let n = rank.len();
    let mut sizes = vec![0u32; n];
    for &r in rank {
        sizes[r as usize] += 1;
    }
    let mut start = vec![0u32; n];
    let mut acc = 0;
    for (s, &size) in start.iter_mut().zip(&sizes) {
        *s = acc;
        acc += size;
    }
    rank.iter().map(|&r| start[r as usize]).collect()
}

/// Splits `w` off as a singleton at the front of its cell.
fn individualize(cells: &[u32], w: usize) -> Vec<u32> {
    cells
        .iter()
        .enumerate()
        .map(|(v, &c)| if v == w || cells[v] != cells[w] { c } else { c + 1 })
        .collect()
}
