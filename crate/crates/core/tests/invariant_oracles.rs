mod common;

use graphgames_core::invariants::{
    adjacency_spectral_radius, adjacency_spectrum_with, brute_force_matching, laplacian_matrix, laplacian_spectrum,
    max_matching, EigenOptions,
};
use graphgames_core::Graph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::Rng;

fn graph_strategy(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, any::<u64>()).prop_map(|(n, seed)| common::random_graph(n, &mut common::rng(seed)))
}

/// Exact determinant by fraction-valued Gaussian elimination.
fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut result = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            result = -result;
        }
        let pivot = m[c][c].clone();
        result *= pivot.clone();
        for r in c + 1..n {
            let factor = &m[r][c] / &pivot;
            if factor.is_zero() {
                continue;
            }
            let (upper, lower) = m.split_at_mut(r);
            for (target, source) in lower[0][c..].iter_mut().zip(&upper[c][c..]) {
                *target -= &factor * source;
            }
        }
    }
    result
}

/// `det(x I - L)` evaluated exactly.
fn laplacian_char_poly_at(g: &Graph, x: i64) -> BigRational {
    let n = g.n();
    let l = laplacian_matrix(g).unwrap();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = if i == j { x } else { 0 };
                    BigRational::from_integer(BigInt::from(diag - l[i * n + j] as i64))
                })
                .collect()
        })
        .collect();
    det(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_exact_characteristic_polynomial(g in graph_strategy(1, 12), x in 1i64..30) {
        let spectrum = laplacian_spectrum(&g).unwrap();
        let exact = laplacian_char_poly_at(&g, x + g.n() as i64);
        let numeric: f64 = spectrum.values().iter().map(|mu| (x + g.n() as i64) as f64 - mu).product();
        let exact = exact.to_f64().unwrap();
        prop_assert!(exact.is_sign_positive());
        prop_assert!((numeric - exact).abs() <= 1e-9 * exact.abs(), "numeric {numeric} exact {exact}");
    }

    #[test]
    fn zero_eigenvalue_multiplicity_counts_components(g in graph_strategy(1, 24)) {
        let spectrum = laplacian_spectrum(&g).unwrap();
        let zeros = spectrum.values().iter().filter(|v| v.abs() < 1e-9).count();
        prop_assert_eq!(zeros, g.component_count());
    }

    #[test]
    fn exact_determinant_certifies_connectivity(g in graph_strategy(2, 10)) {
        // Kirchhoff: any cofactor of L counts spanning trees, nonzero iff connected
        let n = g.n();
        let l = laplacian_matrix(&g).unwrap();
        let minor = (1..n)
            .map(|i| (1..n).map(|j| BigRational::from_integer(BigInt::from(l[i * n + j] as i64))).collect())
            .collect();
        let trees = det(minor);
        prop_assert!(!trees.is_negative());
        prop_assert_eq!(!trees.is_zero(), g.is_connected());
    }

    #[test]
    fn spectra_are_permutation_invariant(g in graph_strategy(1, 24), seed in any::<u64>()) {
        let perm = common::random_permutation(g.n(), &mut common::rng(seed));
        let h = g.permuted(&perm);
        let a = laplacian_spectrum(&g).unwrap();
        let b = laplacian_spectrum(&h).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        prop_assert!((adjacency_spectral_radius(&g) - adjacency_spectral_radius(&h)).abs() < 1e-9);
        prop_assert_eq!(max_matching(&g).size, max_matching(&h).size);
    }

    #[test]
    fn laplacian_spectrum_bounds(g in graph_strategy(1, 32)) {
        let s = laplacian_spectrum(&g).unwrap();
        let v = s.values();
        prop_assert_eq!(v.len(), g.n());
        prop_assert!(v.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(v.iter().all(|&x| x > -1e-9 && x <= g.n() as f64 + 1e-9));
        prop_assert!(v[v.len() - 1].abs() < 1e-9);
        prop_assert!((s.sum() - 2.0 * g.edge_count() as f64).abs() < 1e-8);
        let max_degree = g.degrees().into_iter().max().unwrap_or(0) as f64;
        prop_assert!(v[0] <= 2.0 * max_degree + 1e-9);
        if g.edge_count() > 0 {
            prop_assert!(v[0] >= max_degree + 1.0 - 1e-9);
        }
    }

    #[test]
    fn spectral_radius_bounds(g in graph_strategy(1, 32)) {
        prop_assume!(g.edge_count() > 0);
        let lambda = adjacency_spectral_radius(&g);
        let degrees = g.degrees();
        let max_degree = *degrees.iter().max().unwrap() as f64;
        let avg = 2.0 * g.edge_count() as f64 / g.n() as f64;
        prop_assert!(lambda <= max_degree + 1e-9);
        prop_assert!(lambda >= avg - 1e-9);
        prop_assert!(lambda >= max_degree.sqrt() - 1e-9);
        let adj = adjacency_spectrum_with(&g, EigenOptions::STANDARD);
        prop_assert!(adj.sum().abs() < 1e-8, "trace of A is zero");
        let squares: f64 = adj.values().iter().map(|x| x * x).sum();
        prop_assert!((squares - 2.0 * g.edge_count() as f64).abs() < 1e-8);
    }

    #[test]
    fn blossom_matches_brute_force(g in graph_strategy(1, 12)) {
        let fast = max_matching(&g);
        prop_assert!(fast.is_valid_for(&g));
        prop_assert_eq!(fast.size, brute_force_matching(&g).unwrap().size);
    }

    #[test]
    fn matching_on_larger_graphs_is_valid_and_bounded(g in graph_strategy(13, 64)) {
        let m = max_matching(&g);
        prop_assert!(m.is_valid_for(&g));
        prop_assert!(2 * m.size <= g.n());
        // every maximum matching is maximal, so no edge has both ends free
        let mut covered = vec![false; g.n()];
        for &(i, j) in &m.edges {
            covered[i] = true;
            covered[j] = true;
        }
        prop_assert!(g.edges().into_iter().all(|(i, j)| covered[i] || covered[j]));
    }
}

#[test]
fn matching_exhaustive_small() {
    for n in 1..=6 {
        for g in common::all_graphs(n) {
            assert_eq!(max_matching(&g).size, brute_force_matching(&g).unwrap().size, "{}", g.to_g6().unwrap());
        }
    }
}

#[test]
fn odd_cycles_and_blossoms() {
    for n in 3..40 {
        assert_eq!(max_matching(&Graph::cycle(n).unwrap()).size, n / 2);
        assert_eq!(max_matching(&Graph::path(n).unwrap()).size, n / 2);
    }
    // two triangles joined by a path: the classic case that needs blossom shrinking
    let g = Graph::from_edges(8, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 5)]).unwrap();
    assert_eq!(max_matching(&g).size, 4);
    // Petersen graph has a perfect matching
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    assert_eq!(max_matching(&Graph::from_edges(10, edges).unwrap()).size, 5);
}

#[test]
fn brute_force_refuses_large_graphs() {
    assert!(brute_force_matching(&Graph::empty(13, false).unwrap()).is_err());
}

#[test]
fn random_laplacian_sums() {
    let mut rng = common::rng(99);
    for _ in 0..2000 {
        let n = rng.gen_range(1..=32);
        let g = common::random_graph(n, &mut rng);
        let s = laplacian_spectrum(&g).unwrap();
        assert!((s.sum() - 2.0 * g.edge_count() as f64).abs() < 1e-8);
    }
}
