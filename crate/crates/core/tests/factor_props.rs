mod common;

use factorium::enumeration::{EdgeClass, Generator};
use factorium::factor::{
    eta, find_extremal_certificate, find_k_factor, find_tutte_certificate, is_k_odd_component, min_eta, odd_components,
    verify_duality, TutteGadget, CERTIFICATE_MAX_N,
};
use factorium::graph6::emit_graph6;
use factorium::Graph;
use proptest::prelude::*;

/// Deficiency straight from the definition, with components found by
/// depth-first search.
fn eta_oracle(g: &Graph, k: usize, s: u64, t: u64) -> i64 {
    let n = g.order();
    let k = k as i64;
    let in_s = |v: usize| s >> v & 1 == 1;
    let in_t = |v: usize| t >> v & 1 == 1;
    let sum_t: i64 = (0..n).filter(|&x| in_t(x)).map(|x| g.neighbors(x).filter(|&y| !in_s(y)).count() as i64).sum();
    let mut seen = s | t;
    let mut q = 0;
    for root in 0..n {
        if seen >> root & 1 == 1 {
            continue;
        }
        seen |= 1 << root;
        let mut stack = vec![root];
        let (mut size, mut to_t) = (0i64, 0i64);
        while let Some(v) = stack.pop() {
            size += 1;
            for w in g.neighbors(v) {
                if in_t(w) {
                    to_t += 1;
                } else if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        q += (to_t + k * size) & 1;
    }
    k * s.count_ones() as i64 - k * t.count_ones() as i64 + sum_t - q
}

fn mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

fn sets_of(n: usize, code: u64) -> (Vec<usize>, Vec<usize>) {
    // base-3 digits: 1 = S, 2 = T
    let (mut s, mut t) = (Vec::new(), Vec::new());
    let mut c = code;
    for v in 0..n {
        match c % 3 {
            1 => s.push(v),
            2 => t.push(v),
            _ => {}
        }
        c /= 3;
    }
    (s, t)
}

#[test]
fn spec_examples() {
    let claw = Graph::star(3);
    assert_eq!(eta(&claw, 1, &[0], &[]).unwrap(), -2);
    assert_eq!(eta(&claw, 1, &[], &[0]).unwrap(), 2);
    let cert = find_tutte_certificate(&claw, 1).unwrap().unwrap();
    assert_eq!((cert.s.clone(), cert.t.clone(), cert.eta), (vec![0], vec![], -2));
    assert_eq!(cert.to_string(), "S: 0\nT: \neta: -2\nodd: {1} {2} {3}");
    assert!(find_tutte_certificate(&Graph::cycle(4), 2).unwrap().is_none());
    assert!(find_tutte_certificate(&Graph::complete(4), 1).unwrap().is_none());

    let c6 = Graph::cycle(6);
    assert!(is_k_odd_component(&c6, 1, &[3], &[1, 2]));
    assert_eq!(odd_components(&c6, 1, &[0], &[3]).unwrap(), vec![vec![1, 2], vec![4, 5]]);

    // odd order: the minimum is -1, below zero but above -2
    let c5 = Graph::cycle(5);
    let cert = find_tutte_certificate(&c5, 1).unwrap().unwrap();
    assert_eq!(cert.eta, -1);
    assert!(!cert.meets_strict_bound());
    let ext = find_extremal_certificate(&c5, 1).unwrap().unwrap();
    assert_eq!(ext.base.eta, -1);

    assert!(find_tutte_certificate(&Graph::new(CERTIFICATE_MAX_N + 1), 1).is_err());
}

#[test]
fn eta_matches_definition_exhaustively_on_small_graphs() {
    let mut rng = common::rng(11);
    for i in 0..60 {
        let n = 1 + i % 7;
        let g = common::random_graph(&mut rng, n, 0.45);
        for k in 1..=3 {
            let mut best = i64::MAX;
            for code in 0..3u64.pow(n as u32) {
                let (s, t) = sets_of(n, code);
                let value = eta(&g, k, &s, &t).unwrap();
                assert_eq!(value, eta_oracle(&g, k, mask(&s), mask(&t)));
                // eta and k*n have the same parity
                assert_eq!((value - (k * n) as i64).rem_euclid(2), 0);
                best = best.min(value);
            }
            assert_eq!(min_eta(&g, k).unwrap(), best);
        }
    }
}

#[test]
fn gadget_agrees_with_brute_force_up_to_7() {
    for n in 1..=7 {
        let (_, bad) = Generator::new(n, EdgeClass::All).unwrap().par_filter_map(&|g: &Graph| {
            (1..=4).find_map(|k| {
                let fast = find_k_factor(g, k);
                let ok = match &fast {
                    Some(f) => f.is_valid_in(g) && f.k == k,
                    None => true,
                } && fast.is_some() == common::brute_has_k_factor(g, k);
                (!ok).then(|| format!("{} k={k}", emit_graph6(g).unwrap()))
            })
        });
        assert!(bad.is_empty(), "{bad:?}");
    }
}

#[test]
fn gadget_size_is_sum_of_two_d_minus_f() {
    let mut rng = common::rng(5);
    for i in 0..100 {
        let g = common::random_graph(&mut rng, 2 + i % 10, 0.5);
        let k = 1 + i % 3;
        let f = vec![k; g.order()];
        match TutteGadget::build(&g, &f) {
            Some(gadget) => {
                let expect: usize = g.degrees().iter().map(|&d| 2 * d - k).sum();
                assert_eq!(gadget.graph.order(), expect);
            }
            None => assert!(g.min_degree() < k),
        }
    }
}

#[test]
fn duality_on_all_classes_up_to_7_and_k_up_to_4() {
    for n in 1..=7 {
        let (_, bad) = Generator::new(n, EdgeClass::All).unwrap().par_filter_map(&|g: &Graph| {
            (1..=4)
                .find(|&k| !verify_duality(g, k).unwrap())
                .map(|k| format!("{} k={k}", emit_graph6(g).unwrap()))
        });
        assert!(bad.is_empty(), "{bad:?}");
    }
}

#[test]
fn extremal_certificate_is_extremal() {
    // compare the selector against a brute-force scan of (eta, |U|, -rest)
    let mut rng = common::rng(23);
    for i in 0..40 {
        let n = 3 + i % 6;
        let g = common::random_graph(&mut rng, n, 0.35);
        for k in 1..=2 {
            let Some(cert) = find_extremal_certificate(&g, k).unwrap() else {
                assert!(find_k_factor(&g, k).is_some());
                continue;
            };
            let mut best: Option<(i64, usize, i64)> = None;
            for code in 0..3u64.pow(n as u32) {
                let (s, t) = sets_of(n, code);
                let e = eta(&g, k, &s, &t).unwrap();
                let u: usize = odd_components(&g, k, &s, &t).unwrap().iter().map(Vec::len).sum();
                let rest = (n - s.len() - t.len() - u) as i64;
                let key = (e, u, -rest);
                best = Some(best.map_or(key, |b| b.min(key)));
            }
            let (e, u, neg_rest) = best.unwrap();
            assert_eq!((cert.base.eta, cert.u_size, -(cert.rest_size as i64)), (e, u, neg_rest));
            assert_eq!(cert.u().len(), cert.u_size);
            assert!(cert.base.verify(&g).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_recompute(seed in any::<u64>(), n in 1usize..=10, k in 1usize..=4, p in 0.1f64..0.9) {
        let g = common::random_graph(&mut common::rng(seed), n, p);
        let cert = find_tutte_certificate(&g, k).unwrap();
        let factor = find_k_factor(&g, k);
        prop_assert!(factor.is_some() != cert.is_some());
        if let Some(c) = cert {
            prop_assert!(c.verify(&g).unwrap());
            prop_assert_eq!(c.eta, eta_oracle(&g, k, mask(&c.s), mask(&c.t)));
            prop_assert!(c.s.iter().all(|v| !c.t.contains(v)));
            if k * n % 2 == 0 {
                prop_assert!(c.meets_strict_bound());
            }
            for comp in &c.odd_components {
                prop_assert!(is_k_odd_component(&g, k, &c.t, comp));
            }
        }
        if let Some(f) = factor {
            prop_assert!(f.is_valid_in(&g));
        }
    }

    #[test]
    fn certificate_search_is_relabelling_covariant(seed in any::<u64>(), n in 2usize..=9, k in 1usize..=3) {
        use rand::seq::SliceRandom;
        let mut rng = common::rng(seed);
        let g = common::random_graph(&mut rng, n, 0.4);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let h = g.permuted(&perm);
        prop_assert_eq!(min_eta(&g, k).unwrap(), min_eta(&h, k).unwrap());
        prop_assert_eq!(find_k_factor(&g, k).is_some(), find_k_factor(&h, k).is_some());
    }

    #[test]
    fn search_result_is_independent_of_worker_count(seed in any::<u64>(), n in 4usize..=11) {
        let g = common::random_graph(&mut common::rng(seed), n, 0.3);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
                (find_tutte_certificate(&g, 1).unwrap(), find_extremal_certificate(&g, 2).unwrap())
            })
        };
        prop_assert_eq!(run(1), run(4));
    }
}
