mod common;

use std::collections::HashSet;

use graphgames_core::dataset::{
    build_dataset, gen_barabasi_albert, gen_erdos_renyi, gen_watts_strogatz, wl1_test, wl_equivalent_pairs, DatasetSpec, Model,
};
use graphgames_core::invariants::laplacian_spectrum;
use graphgames_core::{g6, Graph};
use proptest::prelude::*;
use rand::Rng;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| common::random_graph(n, &mut common::rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wl_never_separates_isomorphic_graphs(g in graph_strategy(20), seed: u64) {
        let h = g.permuted(&common::random_permutation(g.n(), &mut common::rng(seed)));
        prop_assert!(wl1_test(&g, &h, None).unwrap().equivalent);
    }

    #[test]
    fn wl_is_symmetric(n in 1usize..16, a: u64, b: u64) {
        let g = common::random_graph(n, &mut common::rng(a));
        let h = common::random_graph(n, &mut common::rng(b));
        prop_assert_eq!(wl1_test(&g, &h, None).unwrap().equivalent, wl1_test(&h, &g, None).unwrap().equivalent);
    }

    #[test]
    fn wl_separates_different_degree_sequences(n in 2usize..16, a: u64, b: u64) {
        let g = common::random_graph(n, &mut common::rng(a));
        let h = common::random_graph(n, &mut common::rng(b));
        let (mut dg, mut dh) = (g.degrees(), h.degrees());
        dg.sort_unstable();
        dh.sort_unstable();
        prop_assume!(dg != dh);
        let out = wl1_test(&g, &h, None).unwrap();
        prop_assert!(!out.equivalent);
        prop_assert_eq!(out.rounds, 1);
    }

    #[test]
    fn er_extremes(n in 1usize..20, seed: u64) {
        prop_assert!(gen_erdos_renyi(n, 0.0, 3, seed).unwrap().iter().all(|g| g.edge_count() == 0));
        let full = n * (n - 1) / 2;
        prop_assert!(gen_erdos_renyi(n, 1.0, 3, seed).unwrap().iter().all(|g| g.edge_count() == full));
    }

    #[test]
    fn ws_preserves_edge_count(half_k in 1usize..5, extra in 1usize..6, beta in 0.0f64..=1.0, seed: u64) {
        let k = 2 * half_k;
        let n = k + extra;
        for g in gen_watts_strogatz(n, k, beta, 5, seed).unwrap() {
            prop_assert_eq!(g.n(), n);
            prop_assert_eq!(g.edge_count(), n * k / 2);
            prop_assert!(!g.has_self_loops());
        }
    }

    #[test]
    fn ba_adds_m_edges_per_node(m in 1usize..5, extra_seed in 1usize..5, target_extra in 0usize..8, seed: u64) {
        let n0 = m + extra_seed;
        let seed_graph = Graph::complete(n0, false).unwrap();
        let target = n0 + target_extra;
        for g in gen_barabasi_albert(target, m, &seed_graph, 3, seed).unwrap() {
            prop_assert_eq!(g.n(), target);
            prop_assert_eq!(g.edge_count(), seed_graph.edge_count() + m * target_extra);
            prop_assert!(seed_graph.edges().into_iter().all(|(i, j)| g.has_edge(i, j)));
            prop_assert!(g.is_connected());
        }
    }
}

#[test]
fn classic_false_positive() {
    let c6 = Graph::cycle(6).unwrap();
    let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
    assert!(wl1_test(&c6, &two_triangles, None).unwrap().equivalent);
    assert!(wl1_test(&c6, &Graph::path(5).unwrap(), None).is_err());
}

#[test]
fn generator_preconditions() {
    assert!(gen_watts_strogatz(11, 3, 0.5, 1, 0).is_err());
    assert!(gen_watts_strogatz(11, 12, 0.5, 1, 0).is_err());
    assert!(gen_watts_strogatz(11, 0, 0.5, 1, 0).is_err());
    assert!(gen_barabasi_albert(11, 3, &Graph::complete(3, false).unwrap(), 1, 0).is_err());
    assert!(gen_barabasi_albert(2, 1, &Graph::complete(3, false).unwrap(), 1, 0).is_err());
    assert!(gen_barabasi_albert(11, 2, &Graph::empty(4, false).unwrap(), 1, 0).is_err());
    assert!(gen_erdos_renyi(5, 1.5, 1, 0).is_err());
}

#[test]
fn screening_agrees_with_pairwise_tests() {
    let mut rng = common::rng(12);
    // a pool dense in collisions: small graphs, some relabelled copies
    let mut graphs: Vec<Graph> = (0..80).map(|_| common::random_graph(6, &mut rng)).collect();
    for i in 0..20 {
        let perm = common::random_permutation(6, &mut rng);
        graphs.push(graphs[i].permuted(&perm));
    }
    let screened: HashSet<(usize, usize)> = wl_equivalent_pairs(&graphs).into_iter().collect();
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            let pairwise = wl1_test(&graphs[i], &graphs[j], None).unwrap().equivalent;
            assert_eq!(screened.contains(&(i, j)), pairwise, "pair ({i}, {j})");
        }
    }
}

#[test]
fn emitted_files_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let spec = DatasetSpec::default().with_models([Model::ErdosRenyi, Model::WattsStrogatz]).with_seed(5);
    let report = build_dataset(&spec, None, dir.path()).unwrap();
    assert_eq!(report.count(Model::ErdosRenyi), 1010);
    assert_eq!(report.count(Model::WattsStrogatz), 540);
    assert_eq!(report.total, 1550);

    let graphs = g6::decode_lines(&std::fs::read_to_string(&report.files.graphs).unwrap()).unwrap();
    let labels = std::fs::read_to_string(&report.files.labels).unwrap();
    let labels: Vec<&str> = labels.lines().collect();
    assert_eq!(graphs.len(), labels.len());
    for (g, line) in graphs.iter().zip(&labels) {
        assert_eq!(g.n(), 11);
        assert!(!g.has_self_loops());
        let values: Vec<f64> = line.split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(values.len(), 11);
        assert!(values.windows(2).all(|w| w[0] >= w[1]));
        let recomputed = laplacian_spectrum(g).unwrap();
        for (a, b) in values.iter().zip(recomputed.values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    let report_text = std::fs::read_to_string(&report.files.wl_report).unwrap();
    let pairs: Vec<(usize, usize)> = report_text
        .lines()
        .map(|l| {
            let (a, b) = l.split_once(' ').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(pairs.len(), report.wl_pairs);
    // the p = 0 and p = 1 copies are identical, so positives must exist
    assert!(pairs.contains(&(0, 1)));
    for &(i, j) in pairs.iter().take(300) {
        assert!(i < j);
        assert!(wl1_test(&graphs[i], &graphs[j], None).unwrap().equivalent);
    }
    let reported: HashSet<_> = pairs.into_iter().collect();
    let mut rng = common::rng(3);
    for _ in 0..2000 {
        let i = rng.gen_range(0..graphs.len());
        let j = rng.gen_range(0..graphs.len());
        if i < j {
            let positive = wl1_test(&graphs[i], &graphs[j], None).unwrap().equivalent;
            assert_eq!(reported.contains(&(i, j)), positive);
        }
    }
}
