use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shrubkit::ef::ef_equivalent;
use shrubkit::generate::{clique_model, random_tree, random_tree_model, star_model};
use shrubkit::shrink::report::Verdict;
use shrubkit::shrink::{shrink_graph_report, shrink_tree_report, ShrinkConfig};
use shrubkit::{interpret, is_leaf_hereditary_subtree, shrink_tree, verify_shrink, CapPolicy, Error, Structure};

#[test]
fn auto_cap_is_the_smallest_that_works() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let config = ShrinkConfig::default();
    for _ in 0..40 {
        let t = random_tree(&mut rng, 2, 2, 20);
        let k = shrink_tree_report(&t, 1, CapPolicy::auto(), &config).unwrap();
        if k.report.verdict != Verdict::Verified {
            continue;
        }
        let cap: usize = k.report.cap.parse().unwrap();
        for smaller in 1..cap {
            match shrink_tree(&t, 1, CapPolicy::Fixed(smaller)) {
                Err(Error::Semantic(_)) => {}
                Ok(u) => assert_eq!(u, t, "cap {smaller} < {cap} must fail or keep everything"),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn fixed_caps_that_pass_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let t = random_tree(&mut rng, 2, 2, 20);
        for k in 1..=3 {
            if let Ok(u) = shrink_tree(&t, 2, CapPolicy::Fixed(k)) {
                assert!(verify_shrink(&t, &u, 2).unwrap());
            }
        }
    }
}

#[test]
fn certified_mode_keeps_a_leaf_hereditary_subtree() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let t = random_tree(&mut rng, 2, 2, 20);
        let k = shrink_tree_report(&t, 1, CapPolicy::Certified, &ShrinkConfig::default()).unwrap();
        assert!(is_leaf_hereditary_subtree(&k.tree, &t));
        assert_eq!(k.tree.height(), t.height());
        assert!(ef_equivalent(&Structure::from_tree(&t), &Structure::from_tree(&k.tree), 1).unwrap());
    }
}

#[test]
fn cap_search_can_be_exhausted() {
    // a single node has nothing to drop
    let t = random_tree(&mut ChaCha8Rng::seed_from_u64(0), 0, 1, 1);
    assert_eq!(shrink_tree(&t, 2, CapPolicy::auto()).unwrap(), t);
    // one ray of a star cannot stand for six at rank 2
    let tm = star_model(6);
    match shrink_graph_report(&tm, 2, CapPolicy::Auto { max_cap: Some(1) }, &ShrinkConfig::default()) {
        Err(Error::CapExhausted { largest_failing: 1 }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn graph_kernels_of_cliques() {
    // at rank 3 a set X with two points inside and two outside separates
    // K3 from larger cliques, so the smallest equivalent clique is K4
    for (m, size) in [(1, 1), (2, 2), (3, 4)] {
        let k = shrink_graph_report(&clique_model(10), m, CapPolicy::auto(), &ShrinkConfig::default()).unwrap();
        assert_eq!(k.graph.vertex_count(), size, "m = {m}");
    }
}

#[test]
fn graph_kernels_are_equivalent_at_rank_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..25 {
        let r = rng.gen_range(1..=2);
        let tm = random_tree_model(&mut rng, r, 2, 10, 0.5);
        let k = shrink_graph_report(&tm, 2, CapPolicy::auto(), &ShrinkConfig::default()).unwrap();
        let g = interpret(&tm).unwrap();
        let (sg, sh) = (
            Structure::from_graph_with_vocabulary(&g, r),
            Structure::from_graph_with_vocabulary(&k.graph, r),
        );
        assert!(ef_equivalent(&sg, &sh, 2).unwrap());
        assert_eq!(interpret(&k.model).unwrap(), k.graph);
    }
}
