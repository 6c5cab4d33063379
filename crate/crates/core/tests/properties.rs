use std::cmp::Ordering;

use proptest::prelude::*;

use twiso::augmented::build_augmented_tree;
use twiso::harness::{brute_force_iso, generate_partial_ktree, random_relabel};
use twiso::order::{canon_tdw, child_theta, compare_augmented, induces_bipartite_isomorphism, BagOrdering, ThetaSet};
use twiso::tdd::{build_minimal_tdd, traverse_minimal_tdd, validate_tdd};
use twiso::treewidth::{
    compute_tree_decomposition, iso_one_decomp, iso_respecting_both, validate_tree_decomposition, TreeDecomposition,
};
use twiso::{Distance, Graph, Permutation, VertexSet};

/// Connected graph: a random tree plus extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
            let extra = prop::collection::vec((0..n, 0..n), 0..=n);
            (Just(n), parents, extra)
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            for (u, v) in extra {
                let e = (u.min(v), u.max(v));
                if u != v && !edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == e) {
                    edges.push(e);
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn graph_and_perm(max_n: usize) -> impl Strategy<Value = (Graph, Permutation)> {
    connected_graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), permutation(n))
    })
}

fn relabel_set(s: &VertexSet, p: &Permutation) -> VertexSet {
    s.iter().map(|v| p.apply(v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimal_tdd_is_valid_and_metric((g, _) in graph_and_perm(9), r in 0usize..9) {
        let root = VertexSet::singleton(r % g.vertex_count());
        let d = build_minimal_tdd(&g, &root).unwrap();
        prop_assert!(validate_tdd(&g, &d).is_empty());
        let dist = g.distances_from(&root);
        let mut seen = vec![0; g.vertex_count()];
        for i in 0..d.bag_count() {
            for v in d.bag(i).iter() {
                seen[v] += 1;
                prop_assert_eq!(dist[v], Distance::Finite(d.depth(i)));
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn minimal_tdd_is_unique_under_relabeling((g, p) in graph_and_perm(8), r in 0usize..8) {
        let root = VertexSet::singleton(r % g.vertex_count());
        let d = build_minimal_tdd(&g, &root).unwrap();
        let h = p.apply_to_graph(&g);
        let e = build_minimal_tdd(&h, &relabel_set(&root, &p)).unwrap();
        let moved: Vec<_> = d.shape().into_iter()
            .map(|(b, parent)| (relabel_set(&b, &p), parent.map(|q| relabel_set(&q, &p))))
            .collect();
        let mut moved = moved;
        moved.sort();
        prop_assert_eq!(moved, e.shape());
        prop_assert_eq!(traverse_minimal_tdd(&g, &root).unwrap(), d);
    }

    #[test]
    fn order_is_antisymmetric(a in connected_graph(6), b in connected_graph(6)) {
        let ta = build_augmented_tree(&a, &build_minimal_tdd(&a, &VertexSet::singleton(0)).unwrap()).unwrap();
        let tb = build_augmented_tree(&b, &build_minimal_tdd(&b, &VertexSet::singleton(0)).unwrap()).unwrap();
        let (l, r) = (ta.root_handle(), tb.root_handle());
        let ab = compare_augmented(l, r, &ThetaSet::full(&l.node().vertices, &r.node().vertices)).unwrap();
        let ba = compare_augmented(r, l, &ThetaSet::full(&r.node().vertices, &l.node().vertices)).unwrap();
        prop_assert_eq!(ab, ba.reverse());
        if ab == Ordering::Equal {
            prop_assert!(brute_force_iso(&a, &b).is_some());
        }
    }

    #[test]
    fn relabeled_trees_compare_equal((g, p) in graph_and_perm(7)) {
        let h = p.apply_to_graph(&g);
        let root = VertexSet::singleton(0);
        let tg = build_augmented_tree(&g, &build_minimal_tdd(&g, &root).unwrap()).unwrap();
        let th = build_augmented_tree(&h, &build_minimal_tdd(&h, &relabel_set(&root, &p)).unwrap()).unwrap();
        let (l, r) = (tg.root_handle(), th.root_handle());
        let theta = ThetaSet::full(&l.node().vertices, &r.node().vertices);
        prop_assert_eq!(compare_augmented(l, r, &theta).unwrap(), Ordering::Equal);
    }

    #[test]
    fn theta_restriction_admits_only_bipartite_isomorphisms((g, p) in graph_and_perm(7)) {
        let h = p.apply_to_graph(&g);
        let root = VertexSet::singleton(0);
        let tg = build_augmented_tree(&g, &build_minimal_tdd(&g, &root).unwrap()).unwrap();
        let th = build_augmented_tree(&h, &build_minimal_tdd(&h, &relabel_set(&root, &p)).unwrap()).unwrap();
        let children = |t: &twiso::augmented::AugmentedTree| -> Vec<usize> {
            t.node(0).children.iter().flat_map(|&s| t.node(s).children.clone()).collect()
        };
        let parent_g = BagOrdering::new(tg.node(0).vertices.as_slice().to_vec());
        let parent_h = BagOrdering::new(parent_g.sequence().iter().map(|&v| p.apply(v)).collect());
        for &cg in &children(&tg) {
            for &ch in &children(&th) {
                let Ok(theta) = child_theta(tg.handle(cg), &parent_g, th.handle(ch), &parent_h) else { continue };
                for (lo, ro) in theta.pairs() {
                    prop_assert!(induces_bipartite_isomorphism(
                        tg.handle(cg), &parent_g, lo, th.handle(ch), &parent_h, ro
                    ));
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_invariant((g, p) in graph_and_perm(9)) {
        let h = p.apply_to_graph(&g);
        match (canon_tdw(&g, 2), canon_tdw(&h, 2)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "mismatched outcomes {:?} {:?}", a, b),
        }
    }

    #[test]
    fn computed_decompositions_are_valid(g in connected_graph(9), k in 1usize..4) {
        if let Ok(d) = compute_tree_decomposition(&g, k) {
            let report = validate_tree_decomposition(&g, &d);
            prop_assert!(report.is_valid());
            prop_assert!(report.width <= k);
        }
    }

    #[test]
    fn one_decomp_agrees_with_oracle(a in connected_graph(8), b in connected_graph(8), seed in 1u64..1000) {
        let Ok(d) = compute_tree_decomposition(&a, 3) else { return Ok(()) };
        if a.vertex_count() != b.vertex_count() {
            return Ok(());
        }
        let (b, _) = random_relabel(&b, seed);
        let found = iso_one_decomp(&a, &d, &b, 3).unwrap();
        prop_assert_eq!(found.is_some(), brute_force_iso(&a, &b).is_some());
    }

    #[test]
    fn one_decomp_finds_relabelings(seed in 0u64..500, k in 1usize..4, n in 5usize..25) {
        let bundle = generate_partial_ktree(n, k, 0.8, seed).unwrap();
        let (h, _) = random_relabel(&bundle.graph, seed + 1);
        let d = bundle.decomposition.unwrap();
        let p = iso_one_decomp(&bundle.graph, &d, &h, k).unwrap();
        prop_assert!(p.is_some_and(|p| p.is_isomorphism(&bundle.graph, &h)));
    }

    #[test]
    fn respecting_both_implies_isomorphism(seed in 0u64..500, n in 4usize..10) {
        let bundle = generate_partial_ktree(n, 2, 0.7, seed).unwrap();
        let d = bundle.decomposition.unwrap();
        let (h, p) = random_relabel(&bundle.graph, seed + 7);
        let bags = d.bags().iter().map(|b| relabel_set(b, &p)).collect();
        let dh = TreeDecomposition::new(bags, d.tree_edges().to_vec(), None).unwrap();
        prop_assert!(iso_respecting_both(&bundle.graph, &d, &h, &dh).unwrap());
        let other = generate_partial_ktree(n, 2, 0.7, seed + 1000).unwrap();
        let od = other.decomposition.unwrap();
        if iso_respecting_both(&bundle.graph, &d, &other.graph, &od).unwrap() {
            prop_assert!(brute_force_iso(&bundle.graph, &other.graph).is_some());
        }
    }

    #[test]
    fn oracle_is_symmetric(a in connected_graph(7), b in connected_graph(7)) {
        prop_assert_eq!(brute_force_iso(&a, &b).is_some(), brute_force_iso(&b, &a).is_some());
    }
}
