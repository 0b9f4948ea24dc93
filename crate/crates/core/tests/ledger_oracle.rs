//! The ledger's grid checks against closed forms derived by hand: each
//! inequality is a factored product or a sum of squares, so the oracle
//! states why it holds rather than re-evaluating it.

use factorium::ledger::{self, qp_objective, LedgerConfig, HESSIAN};
use proptest::prelude::*;

#[test]
fn spec_values() {
    // Case 2 at k = 3, h1 = 2: 18 + 3 - 18 + 4 + 2 = 9 = 3k
    let (k, h1) = (3i64, 2i64);
    assert_eq!(2 * k * k + k - 3 * k * h1 + h1 * h1 + h1, 9);
    // Case 3 at k = 4, h1 = 3: 9 - 21 + 24 = 12 = 3k
    let (k, h1) = (4i64, 3i64);
    assert_eq!(h1 * h1 - (2 * k - 1) * h1 + k * k + 2 * k, 12);
    assert_eq!(qp_objective(0, 0, 1), 1);
    // grid minima at k = 3 (6 points) and k = 10 (55 points)
    for (k, points) in [(3, 6), (10, 55)] {
        let grid: Vec<i64> = (0..k).flat_map(|h2| (0..=h2).map(move |h1| qp_objective(h1, h2, k))).collect();
        assert_eq!(grid.len(), points);
        assert_eq!(grid.iter().min(), Some(&1));
    }
    assert_eq!(3 - 8 + 12, 7);
    assert_eq!(3 * 4 - 16 + 12, 8);
}

#[test]
fn default_run_passes_with_expected_sizes() {
    let results = ledger::run_all(&LedgerConfig::default());
    let names: Vec<&str> = results.iter().map(|r| r.check_name).collect();
    assert_eq!(
        names,
        [
            "case1_density",
            "case2_chain",
            "case3_chains",
            "hessian",
            "kkt",
            "qp_minimum",
            "case42",
            "case41_chain",
            "case42_chain"
        ]
    );
    for r in &results {
        assert!(r.passed, "{r}");
        assert!(r.violations.is_empty());
        assert_eq!(r.to_string(), format!("PASS {} points={}", r.check_name, r.grid_points_tested));
    }
    let points = |name: &str| results.iter().find(|r| r.check_name == name).unwrap().grid_points_tested;
    // Case 2: two checks per (k, h1), 500*501/2 pairs
    assert_eq!(points("case2_chain"), 2 * 125_250);
    // qp: sum over k of k(k+1)/2 grid points plus two checks per k
    let grid: u64 = (1..=200u64).map(|k| k * (k + 1) / 2).sum();
    assert_eq!(points("qp_minimum"), grid + 400);
    // case42: two checks per m plus the discriminant
    assert_eq!(points("case42"), 2_000_001);
    // kkt: six residuals, feasibility, sign and three gradient rows per k
    assert_eq!(points("kkt"), 500 * 11);
}

#[test]
fn case2_equality_only_on_the_boundary() {
    let r = ledger::check_case2_chain(500);
    assert_eq!(r.remarks, vec!["equality in 500 points, 0 of them away from h1 = k-1".to_string()]);
}

#[test]
fn hessian_eigenvectors() {
    let apply = |v: [i64; 3]| {
        let mut out = [0i64; 3];
        for (i, row) in HESSIAN.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    };
    assert_eq!(apply([1, 1, 1]), [0, 0, 0]);
    assert_eq!(apply([1, -1, 0]), [3, -3, 0]);
    assert_eq!(apply([1, 0, -1]), [3, 0, -3]);
    assert_eq!(ledger::characteristic_polynomial(&HESSIAN), [1, -6, 9, 0]);
    assert_eq!(ledger::integer_roots(&[1, -6, 9, 0]), Some(vec![0, 3, 3]));
    // (x - 1)(x + 2)^2 = x^3 + 3x^2 - 4
    assert_eq!(ledger::integer_roots(&[1, 3, 0, -4]), Some(vec![-2, -2, 1]));
}

#[test]
fn small_grids_are_reproducible() {
    let cfg = LedgerConfig {
        k_max: 40,
        qp_k_max: 40,
        case42_range: 5000,
        chain_n_max: 24,
    };
    let a = ledger::run_all(&cfg);
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| ledger::run_all(&cfg));
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn objective_is_one_plus_a_positive_form(h1 in -300i64..300, h2 in -300i64..300, k in -300i64..300) {
        // with a = k-1-h1, b = k-1-h2: f = 1 + a^2 - ab + b^2
        let (a, b) = (k - 1 - h1, k - 1 - h2);
        prop_assert_eq!(qp_objective(h1, h2, k), 1 + a * a - a * b + b * b);
        // 4(a^2 - ab + b^2) = (2a - b)^2 + 3b^2, so f >= 1 with equality only at a = b = 0
        prop_assert_eq!(4 * (a * a - a * b + b * b), (2 * a - b).pow(2) + 3 * b * b);
    }

    #[test]
    fn case2_factors(k in 1i64..10_000, h1 in 0i64..10_000) {
        prop_assume!(h1 < k);
        // 2k^2 + k - 3k h1 + h1^2 + h1 - 3k = (k-1-h1)(2k-h1)
        prop_assert_eq!(2 * k * k + k - 3 * k * h1 + h1 * h1 + h1 - 3 * k, (k - 1 - h1) * (2 * k - h1));
    }

    #[test]
    fn case3_factors(k in 1i64..10_000, h1 in 0i64..10_000) {
        prop_assume!(h1 < k);
        // h1^2 - (2k-1) h1 + k^2 + 2k - 3k = (k-h1)(k-1-h1)
        prop_assert_eq!(h1 * h1 - (2 * k - 1) * h1 + k * k + 2 * k - 3 * k, (k - h1) * (k - 1 - h1));
    }

    #[test]
    fn case42_is_a_shifted_square(m in -1_000_000i64..1_000_000) {
        // 3m^2 - 8m + 12 = 3(m - 4/3)^2 + 20/3, times 3
        prop_assert_eq!(3 * (3 * m * m - 8 * m + 12), (3 * m - 4).pow(2) + 20);
    }

    #[test]
    fn kkt_residuals_vanish_only_with_zero_multipliers(k in 1i64..1000, l in 0i64..5, which in 0usize..3) {
        let mut lambda = [0i64; 3];
        lambda[which] = l;
        let zero = ledger::kkt_residuals(k - 1, k - 1, k, lambda) == [0; 6];
        // lambda3 pairs with h1 = k-1 in its slackness term; it is zero only
        // when k = 1, so any positive multiplier breaks some equation
        prop_assert_eq!(zero, l == 0);
    }
}
