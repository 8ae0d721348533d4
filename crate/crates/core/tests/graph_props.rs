use ctwalk::encode::{
    bits_to_index, bitstring, encoding_cost, hamming_neighbors, index_to_bits, parse_bitstring,
};
use ctwalk::graph::{
    adjacency, degree_vector, laplacian, laplacian_csr, make_graph, GluedTreesLayout, Graph,
    GraphKind,
};
use proptest::prelude::*;

fn random_graph() -> impl Strategy<Value = Graph> {
    (2usize..24).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            let mut edges: Vec<(usize, usize)> = pairs
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn family() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (1usize..40).prop_map(|n| make_graph(GraphKind::Line, n, None).unwrap()),
        (3usize..40).prop_map(|n| make_graph(GraphKind::Cycle, n, None).unwrap()),
        (1usize..12).prop_map(|n| make_graph(GraphKind::Complete, n, None).unwrap()),
        (1usize..6).prop_map(|n| make_graph(GraphKind::Hypercube, n, None).unwrap()),
        (1usize..5, any::<u64>())
            .prop_map(|(d, s)| make_graph(GraphKind::GluedTrees, d, Some(s)).unwrap()),
        random_graph(),
    ]
}

proptest! {
    #[test]
    fn laplacian_rows_sum_to_zero(g in family()) {
        let l = laplacian(&g);
        for s in l.row_sums() {
            prop_assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn laplacian_symmetric_with_negative_degree_diagonal(g in family()) {
        let l = laplacian(&g).to_dense();
        let deg = degree_vector(&g);
        for r in 0..g.num_vertices() {
            prop_assert_eq!(l[(r, r)], -(deg[r] as f64));
            for c in 0..g.num_vertices() {
                prop_assert_eq!(l[(r, c)], l[(c, r)]);
            }
        }
    }

    #[test]
    fn laplacian_is_negative_semidefinite(g in family()) {
        let l = laplacian(&g).to_dense();
        let eig = l.symmetric_eigenvalues();
        let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(max <= 1e-10, "largest eigenvalue {max}");
        let zeros = eig.iter().filter(|v| v.abs() < 1e-8).count();
        prop_assert_eq!(zeros, g.connected_components());
    }

    #[test]
    fn sparse_laplacian_matches_dense(g in family()) {
        let dense = laplacian(&g).to_dense();
        let csr = laplacian_csr(&g).to_dense();
        prop_assert_eq!(dense, csr);
    }

    #[test]
    fn edge_list_round_trip(g in random_graph()) {
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.num_vertices(), g.num_vertices());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn bits_round_trip(width in 1usize..20, j in any::<u32>()) {
        let j = j as usize & ((1 << width) - 1);
        let bits = index_to_bits(j, width).unwrap();
        prop_assert_eq!(bits.len(), width);
        prop_assert_eq!(bits_to_index(&bits).unwrap(), j);
        let s = bitstring(j, width).unwrap();
        prop_assert_eq!(parse_bitstring(&s).unwrap(), j);
    }

    #[test]
    fn glued_trees_shape(depth in 1usize..6, seed in any::<u64>()) {
        let g = make_graph(GraphKind::GluedTrees, depth, Some(seed)).unwrap();
        let layout = GluedTreesLayout::new(depth);
        prop_assert_eq!(g.num_vertices(), 2 * ((1 << (depth + 1)) - 1));
        prop_assert_eq!(g.connected_components(), 1);
        let deg = degree_vector(&g);
        prop_assert_eq!(deg[layout.entrance()], 2);
        prop_assert_eq!(deg[layout.exit()], 2);
        for v in 0..g.num_vertices() {
            if v != layout.entrance() && v != layout.exit() {
                prop_assert_eq!(deg[v], 3, "vertex {}", v);
            }
        }
        for &(a, b) in g.edges() {
            prop_assert_eq!(layout.column(a).abs_diff(layout.column(b)), 1);
        }
    }
}

#[test]
fn hypercube_three_census() {
    let g = make_graph(GraphKind::Hypercube, 3, None).unwrap();
    assert_eq!(g.num_vertices(), 8);
    assert_eq!(g.edges().len(), 12);
    assert!(degree_vector(&g).iter().all(|&d| d == 3));
    let sq = make_graph(GraphKind::Hypercube, 2, None).unwrap();
    assert!(degree_vector(&sq).iter().all(|&d| d == 2));
}

#[test]
fn hypercube_laplacian_spectrum() {
    let g = make_graph(GraphKind::Hypercube, 3, None).unwrap();
    let mut eig: Vec<f64> = laplacian(&g)
        .to_dense()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    eig.sort_by(f64::total_cmp);
    let expect = [-6.0, -4.0, -4.0, -4.0, -2.0, -2.0, -2.0, 0.0];
    for (a, b) in eig.iter().zip(expect) {
        assert!((a - b).abs() < 1e-10, "{eig:?}");
    }
}

#[test]
fn hamming_neighbors_are_hypercube_edges() {
    for n in 1..=6 {
        let g = make_graph(GraphKind::Hypercube, n, None).unwrap();
        let a = adjacency(&g).to_dense();
        for j in 0..1usize << n {
            let mut from_bits = hamming_neighbors(j, n).unwrap();
            from_bits.sort_unstable();
            let from_graph: Vec<usize> = (0..1 << n).filter(|&k| a[(j, k)] == 1.0).collect();
            assert_eq!(from_bits, from_graph, "n={n} j={j}");
        }
    }
}

#[test]
fn glued_trees_depth_two() {
    let g = make_graph(GraphKind::GluedTrees, 2, Some(7)).unwrap();
    assert_eq!(g.num_vertices(), 14);
    let layout = GluedTreesLayout::new(2);
    let deg = degree_vector(&g);
    for v in 0..14 {
        if matches!(layout.column(v), 2 | 3) {
            assert_eq!(deg[v], 3);
        }
    }
}

#[test]
fn labels_and_encoding_costs() {
    assert_eq!(bitstring(5, 3).unwrap(), "101");
    assert_eq!(bitstring(7, 3).unwrap(), "111");
    assert_eq!(encoding_cost(8).unwrap().binary_bits, 3);
    assert_eq!(encoding_cost(2).unwrap().binary_bits, 1);
    for n in 1..=20u32 {
        let c = encoding_cost(1 << n).unwrap();
        assert_eq!(c.binary_bits, n);
        assert_eq!(c.unary_symbols, 1 << n);
    }
}

#[test]
fn malformed_edge_lists_rejected() {
    assert!(Graph::from_edge_list("").is_err());
    assert!(Graph::from_edge_list("N 3\n0 0\n").is_err());
    assert!(Graph::from_edge_list("N 3\n0 1\n1 0\n").is_err());
    assert!(Graph::from_edge_list("N 3\n0 5\n").is_err());
    assert!(Graph::from_edge_list("N 3\n0 x\n").is_err());
}
