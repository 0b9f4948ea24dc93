//! Exact integer verification of the algebra behind the k-factor theorem:
//! the inequality chains of each case over their integer grids, the
//! Hessian of the Case 4.1 objective, its KKT point and the grid minimum.
//!
//! Everything is computed in `i64`; no floating point is involved.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_K_MAX: i64 = 500;
pub const DEFAULT_QP_K_MAX: i64 = 200;
pub const DEFAULT_CASE42_RANGE: i64 = 1_000_000;
/// Largest `n` for the four-variable chain grids.
pub const DEFAULT_CHAIN_N_MAX: i64 = 80;

/// Named integer assignment, e.g. `k=3 h1=2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment(pub Vec<(&'static str, i64)>);

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, value)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

macro_rules! at {
    ($($name:ident),* $(,)?) => {
        Assignment(vec![$((stringify!($name), $name)),*])
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerResult {
    pub check_name: &'static str,
    pub grid_points_tested: u64,
    pub violations: Vec<Assignment>,
    pub passed: bool,
    /// Observations that are reported but not asserted.
    pub remarks: Vec<String>,
}

impl LedgerResult {
    fn new(check_name: &'static str, grid_points_tested: u64, violations: Vec<Assignment>) -> Self {
        LedgerResult {
            check_name,
            grid_points_tested,
            passed: violations.is_empty(),
            violations,
            remarks: Vec::new(),
        }
    }

    fn remark(mut self, text: String) -> Self {
        self.remarks.push(text);
        self
    }
}

impl fmt::Display for LedgerResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violations.first() {
            None => write!(f, "PASS {} points={}", self.check_name, self.grid_points_tested),
            Some(w) => write!(f, "FAIL {} witness={}", self.check_name, w),
        }
    }
}

/// Grid accumulator: counts points and keeps violating assignments.
#[derive(Default)]
struct Tally {
    points: u64,
    violations: Vec<Assignment>,
}

impl Tally {
    fn check(&mut self, ok: bool, at: impl FnOnce() -> Assignment) {
        self.points += 1;
        if !ok {
            self.violations.push(at());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.points += other.points;
        self.violations.extend(other.violations);
        self
    }

    fn finish(self, name: &'static str) -> LedgerResult {
        LedgerResult::new(name, self.points, self.violations)
    }
}

/// Case 1 (`h1 >= k`): the counting contradictions `n >= 3(k^2+2)+k` and
/// `n >= 4k+6` are impossible when `k >= n/2`.
pub fn check_case1_density(k_max: i64) -> LedgerResult {
    let mut t = Tally::default();
    for n in (2..=2 * k_max).step_by(2) {
        for k in (n / 2).max(1)..=k_max {
            t.check(3 * (k * k + 2) + k > n, || at!(n, k));
            t.check(4 * k + 6 > n, || at!(n, k));
            // 3(k^2+2)+k >= (3/4)n^2 + n/2 + 6, scaled by 4
            t.check(4 * (3 * (k * k + 2) + k) >= 3 * n * n + 2 * n + 24, || at!(n, k));
            // (3/4)n^2 + n/2 + 6 > n, scaled by 4
            t.check(3 * n * n + 2 * n + 24 > 4 * n, || at!(n, k));
        }
    }
    t.finish("case1_density")
}

/// Case 2 (`T = N_T[u1]`): `2k^2 + k - 3k h1 + h1^2 + h1 >= 3k` for
/// `0 <= h1 <= k-1`, together with `k(k+2-h1) - 1 >= 3k - 1 >= 0`.
pub fn check_case2_chain(k_max: i64) -> LedgerResult {
    let mut t = Tally::default();
    let mut equalities = 0u64;
    let mut equality_off_boundary = 0u64;
    for k in 1..=k_max {
        for h1 in 0..k {
            let value = 2 * k * k + k - 3 * k * h1 + h1 * h1 + h1;
            t.check(value >= 3 * k, || at!(k, h1));
            t.check(k * (k + 2 - h1) > 3 * k - 1 && 3 * k > 0, || at!(k, h1));
            if value == 3 * k {
                equalities += 1;
                if h1 != k - 1 {
                    equality_off_boundary += 1;
                }
            }
        }
    }
    t.finish("case2_chain").remark(format!(
        "equality in {equalities} points, {equality_off_boundary} of them away from h1 = k-1"
    ))
}

/// Case 3 (`T != N_T[u1]`, `h2 >= k`): the bound
/// `h1^2 - (2k-1)h1 + k^2 + 2k >= 3k` (and that this quadratic decreases on
/// `h1 <= k-1`), `(k-h1)(k-h1-1) + 2 >= 2`, and the closing
/// `(k-h1)(k-h1+5) > 0`.
pub fn check_case3_chains(k_max: i64) -> LedgerResult {
    let mut t = Tally::default();
    let quad = |k: i64, h1: i64| h1 * h1 - (2 * k - 1) * h1 + k * k + 2 * k;
    for k in 1..=k_max {
        for h1 in 0..k {
            t.check(quad(k, h1) >= 3 * k, || at!(k, h1));
            t.check((k - h1) * (k - h1 - 1) + 2 >= 2, || at!(k, h1));
            t.check((k - h1) * (k - h1 + 5) > 0, || at!(k, h1));
            if h1 + 1 < k {
                t.check(quad(k, h1) >= quad(k, h1 + 1), || at!(k, h1));
            }
        }
        // 3k(q-1) - q is increasing in q
        t.check(3 * k > 0, || at!(k));
    }
    t.finish("case3_chains")
}

/// Objective of the Case 4.1 program.
pub fn qp_objective(h1: i64, h2: i64, k: i64) -> i64 {
    h1 * h1 - h1 * (k - 1 + h2) + h2 * h2 + (1 - k) * h2 + k * k - 2 * k + 2
}

/// Hessian of `qp_objective` in `(h1, h2, k)`.
pub const HESSIAN: [[i64; 3]; 3] = [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]];

/// Characteristic polynomial `det(x I - m)` as coefficients of
/// `x^3, x^2, x, 1`.
pub fn characteristic_polynomial(m: &[[i64; 3]; 3]) -> [i64; 4] {
    let trace = m[0][0] + m[1][1] + m[2][2];
    let minors2 = principal_minor(m, &[0, 1]) + principal_minor(m, &[0, 2]) + principal_minor(m, &[1, 2]);
    let det = principal_minor(m, &[0, 1, 2]);
    [1, -trace, minors2, -det]
}

/// Determinant of the principal submatrix on `idx` (size 1, 2 or 3).
pub fn principal_minor(m: &[[i64; 3]; 3], idx: &[usize]) -> i64 {
    match *idx {
        [a] => m[a][a],
        [a, b] => m[a][a] * m[b][b] - m[a][b] * m[b][a],
        [a, b, c] => {
            m[a][a] * (m[b][b] * m[c][c] - m[b][c] * m[c][b]) - m[a][b] * (m[b][a] * m[c][c] - m[b][c] * m[c][a])
                + m[a][c] * (m[b][a] * m[c][b] - m[b][b] * m[c][a])
        }
        _ => panic!("principal minors of size 1..=3 only"),
    }
}

/// All roots of a monic integer polynomial (highest degree first) when it
/// splits over the integers, with multiplicity, ascending.
pub fn integer_roots(poly: &[i64]) -> Option<Vec<i64>> {
    let mut p = poly.to_vec();
    let mut roots = Vec::new();
    while p.len() > 1 {
        let constant = *p.last().expect("nonempty");
        let root = if constant == 0 {
            0
        } else {
            let bound = constant.abs();
            (1..=bound)
                .filter(|d| bound % d == 0)
                .flat_map(|d| [d, -d])
                .find(|&r| horner(&p, r) == 0)?
        };
        // synthetic division by (x - root)
        let mut q = Vec::with_capacity(p.len() - 1);
        let mut acc = 0;
        for &c in &p[..p.len() - 1] {
            acc = acc * root + c;
            q.push(acc);
        }
        p = q;
        roots.push(root);
    }
    roots.sort_unstable();
    Some(roots)
}

fn horner(p: &[i64], x: i64) -> i64 {
    p.iter().fold(0, |acc, &c| acc * x + c)
}

/// Second differences of a quadratic in three variables; exact.
fn second_difference(f: impl Fn([i64; 3]) -> i64, x: [i64; 3], i: usize, j: usize) -> i64 {
    let shift = |mut p: [i64; 3], a: usize| {
        p[a] += 1;
        p
    };
    f(shift(shift(x, i), j)) - f(shift(x, i)) - f(shift(x, j)) + f(x)
}

/// `M` is the Hessian of the objective, its eigenvalues are exactly
/// `{0, 3, 3}` and all of its principal minors are non-negative.
pub fn check_hessian() -> LedgerResult {
    let m = &HESSIAN;
    let mut t = Tally::default();
    let objective = |p: [i64; 3]| qp_objective(p[0], p[1], p[2]);
    for base in [[0, 0, 1], [3, 5, 7], [-4, 2, 9]] {
        for i in 0..3 {
            for j in 0..3 {
                let (h1, h2, k) = (base[0], base[1], base[2]);
                let (i, j) = (i as i64, j as i64);
                t.check(
                    second_difference(objective, base, i as usize, j as usize) == m[i as usize][j as usize],
                    || at!(h1, h2, k, i, j),
                );
            }
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            let (i, j) = (i as i64, j as i64);
            t.check(m[i as usize][j as usize] == m[j as usize][i as usize], || at!(i, j));
        }
    }
    let poly = characteristic_polynomial(m);
    let (c3, c2, c1, c0) = (poly[0], poly[1], poly[2], poly[3]);
    t.check(poly == [1, -6, 9, 0], || at!(c3, c2, c1, c0));
    let roots = integer_roots(&poly);
    let eigen_ok = roots.as_deref() == Some(&[0, 3, 3]);
    t.check(eigen_ok, || at!(c3, c2, c1, c0));
    let minors: [&[usize]; 7] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];
    for idx in minors {
        let minor = principal_minor(m, idx);
        let size = idx.len() as i64;
        t.check(minor >= 0, || at!(size, minor));
    }
    let det = principal_minor(m, &[0, 1, 2]);
    let trace = m[0][0] + m[1][1] + m[2][2];
    t.check(det == 0 && trace == 6, || at!(det, trace));
    t.finish("hessian")
}

/// Residuals of the six KKT equations of the Case 4.1 program.
pub fn kkt_residuals(h1: i64, h2: i64, k: i64, lambda: [i64; 3]) -> [i64; 6] {
    let [l1, l2, l3] = lambda;
    [
        2 * h1 - (k - 1 + h2) + l1 - l3,
        -h1 + 2 * h2 + (1 - k) - l1 + l2,
        -h1 - h2 + 2 * k - 2 - l2,
        l1 * (h1 - h2),
        l2 * (h2 - k + 1),
        l3 * h1,
    ]
}

/// At `h1 = h2 = k-1`, `lambda = 0`: all six residuals vanish, the point is
/// feasible, multipliers are non-negative, and the stationarity rows agree
/// with the exact gradient of the objective.
pub fn check_kkt(k_max: i64) -> LedgerResult {
    let mut t = Tally::default();
    for k in 1..=k_max {
        let (h1, h2) = (k - 1, k - 1);
        let lambda = [0i64; 3];
        for (i, r) in kkt_residuals(h1, h2, k, lambda).into_iter().enumerate() {
            let row = i as i64 + 1;
            t.check(r == 0, || at!(k, row, r));
        }
        t.check(h1 - h2 <= 0 && h2 - k < 0 && -h1 <= 0, || at!(k, h1, h2));
        t.check(lambda.iter().all(|&l| l >= 0), || at!(k));
        // central differences are exact for quadratics
        let f = |a: i64, b: i64, c: i64| qp_objective(a, b, c);
        let grad = [
            f(h1 + 1, h2, k) - f(h1 - 1, h2, k),
            f(h1, h2 + 1, k) - f(h1, h2 - 1, k),
            f(h1, h2, k + 1) - f(h1, h2, k - 1),
        ];
        let rows = kkt_residuals(h1, h2, k, [0; 3]);
        for axis in 0..3 {
            let (g2, row) = (grad[axis], rows[axis]);
            t.check(g2 == 2 * row, || at!(k, g2, row));
        }
    }
    t.finish("kkt")
}

/// For every `k`, the minimum of the objective over the integer grid
/// `0 <= h1 <= h2 <= k-1` is exactly 1 and is attained at the KKT point
/// `(k-1, k-1)`.
pub fn check_qp_minimum(k_max: i64) -> LedgerResult {
    let per_k: Vec<(Tally, bool)> = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let mut t = Tally::default();
            let mut min = i64::MAX;
            let mut argmin_count = 0;
            for h2 in 0..k {
                for h1 in 0..=h2 {
                    let v = qp_objective(h1, h2, k);
                    t.points += 1;
                    match v.cmp(&min) {
                        std::cmp::Ordering::Less => {
                            min = v;
                            argmin_count = 1;
                        }
                        std::cmp::Ordering::Equal => argmin_count += 1,
                        _ => {}
                    }
                }
            }
            let at_kkt = qp_objective(k - 1, k - 1, k);
            t.check(min == 1, || at!(k, min));
            t.check(at_kkt == min, || at!(k, at_kkt, min));
            (t, argmin_count == 1)
        })
        .collect();
    let unique = per_k.iter().filter(|(_, u)| *u).count();
    let tally = per_k.into_iter().map(|(t, _)| t).fold(Tally::default(), Tally::merge);
    tally
        .finish("qp_minimum")
        .remark(format!("unique grid minimiser for {unique} of {k_max} values of k"))
}

/// Case 4.2 closing bound `(3/4)m^2 - 2m + 3 > 0`, scaled by 4 to
/// `3m^2 - 8m + 12 > 0`, for `1 <= m <= range`, together with the
/// identity `4(-(1/4)m^2 + (m-1)^2 + 2) = 3m^2 - 8m + 12` and the negative
/// discriminant.
pub fn check_case42(range: i64) -> LedgerResult {
    let mut t = (1..=range)
        .into_par_iter()
        .fold(Tally::default, |mut t, m| {
            let scaled = 3 * m * m - 8 * m + 12;
            t.check(scaled > 0, || at!(m, scaled));
            t.check(-m * m + 4 * (m - 1) * (m - 1) + 8 == scaled, || at!(m));
            t
        })
        .reduce(Tally::default, Tally::merge);
    let disc = 8 * 8 - 4 * 3 * 12;
    t.check(disc < 0, || at!(disc));
    t.finish("case42")
}

/// Case 4.1 (`k - h1 <= (n+k-2-h1-h2)/2`): over even `n`, `n/2 <= k <= n-1`
/// and `0 <= h1 <= h2 <= k-1` in the subcase, the expansion of the
/// substituted Tutte bound (doubled) and its lower bound by twice the
/// objective.
pub fn check_case41_chain(n_max: i64) -> LedgerResult {
    let mut t = Tally::default();
    for n in (2..=n_max).step_by(2) {
        for k in (n / 2).max(1)..n {
            for h2 in 0..k {
                for h1 in 0..=h2 {
                    // subcase condition, doubled
                    if 2 * (k - h1) > n + k - 2 - h1 - h2 {
                        continue;
                    }
                    let doubled = (2 * k - h2) * (n + k - 2 - h1 - h2) - 2 * (k - h2) * n + 2 * (h1 - h2) * (h1 + 1) + 4;
                    let expanded = 2 * h1 * h1 - h1 * (2 * k - 2 + h2) + h2 * h2 + (n - 3 * k) * h2 + 2 * k * k - 4 * k + 4;
                    t.check(doubled == expanded, || at!(n, k, h1, h2));
                    t.check(h1 - h2 >= k + 2 - n, || at!(n, k, h1, h2));
                    t.check(expanded >= 2 * qp_objective(h1, h2, k), || at!(n, k, h1, h2));
                    t.check(2 * k - h2 > 0, || at!(n, k, h2));
                }
            }
        }
    }
    t.finish("case41_chain")
}

/// Case 4.2 (`k - h1 > (n+k-2-h1-h2)/2`): the expansion of the Tutte bound
/// at `s = k - h1`, the substitution `h2 >= n-k-1+h1`, completing the
/// square in `h1`, and the final simplification to `(3/4)(n-k)^2 - 2(n-k) + 3`
/// (all scaled to integers).
pub fn check_case42_chain(n_max: i64) -> LedgerResult {
    let mut t = Tally::default();
    for n in (2..=n_max).step_by(2) {
        for k in (n / 2).max(1)..n {
            for h2 in 0..k {
                for h1 in 0..=h2 {
                    if 2 * (k - h1) <= n + k - 2 - h1 - h2 {
                        continue;
                    }
                    let start = (2 * k - h2) * (k - h1) - (k - h2) * n + (h1 - h2) * (h1 + 1) + 2;
                    let expanded = h1 * h1 - (2 * k - 1) * h1 + 2 * k * k - k * n + 2 + h2 * (n - k - 1);
                    t.check(start == expanded, || at!(n, k, h1, h2));
                    t.check(h2 - h1 > n - k - 2, || at!(n, k, h1, h2));
                    let m1 = n - k - 1;
                    t.check(h2 * m1 >= m1 * m1 + m1 * h1, || at!(n, k, h1, h2));
                    let quad = h1 * h1 - (3 * k - n) * h1;
                    // 4 h1^2 - 4(3k-n) h1 >= -(3k-n)^2
                    t.check(4 * quad >= -(3 * k - n) * (3 * k - n), || at!(n, k, h1));
                    let lhs4 = -(3 * k - n) * (3 * k - n) + 4 * (2 * k * k - k * n + 2) + 4 * m1 * m1;
                    let m = n - k;
                    t.check(lhs4 == 3 * m * m - 8 * m + 12, || at!(n, k));
                    t.check(lhs4 > 0, || at!(n, k));
                }
            }
        }
    }
    t.finish("case42_chain")
}

/// Grid sizes for a full ledger run.
#[derive(Debug, Clone, Copy)]
pub struct LedgerConfig {
    pub k_max: i64,
    pub qp_k_max: i64,
    pub case42_range: i64,
    pub chain_n_max: i64,
}

impl Default for LedgerConfig {
    fn default() -> Self {
        LedgerConfig {
            k_max: DEFAULT_K_MAX,
            qp_k_max: DEFAULT_QP_K_MAX,
            case42_range: DEFAULT_CASE42_RANGE,
            chain_n_max: DEFAULT_CHAIN_N_MAX,
        }
    }
}

pub fn run_all(cfg: &LedgerConfig) -> Vec<LedgerResult> {
    vec![
        check_case1_density(cfg.k_max),
        check_case2_chain(cfg.k_max),
        check_case3_chains(cfg.k_max),
        check_hessian(),
        check_kkt(cfg.k_max),
        check_qp_minimum(cfg.qp_k_max),
        check_case42(cfg.case42_range),
        check_case41_chain(cfg.chain_n_max),
        check_case42_chain(cfg.chain_n_max),
    ]
}
