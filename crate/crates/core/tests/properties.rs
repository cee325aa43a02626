use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shrubkit::census::index_lower_bound;
use shrubkit::ef::ef_equivalent;
use shrubkit::generate::{random_tree, random_tree_model};
use shrubkit::interp::interpret;
use shrubkit::logic::eval::holds;
use shrubkit::logic::{parse_formula, sample_formula};
use shrubkit::model::{validate_against_graph, Condition};
use shrubkit::shrink::bounds::g;
use shrubkit::structure::Vocabulary;
use shrubkit::{
    is_leaf_hereditary_subtree, shrink_tree, validate_tree_model, CapPolicy, Formula, LabeledTree, Signature,
    Structure, TreeModel,
};

/// Parent arrays where node `i > 0` hangs below some node `< i`.
fn tree_strategy(max_nodes: usize, p: u32) -> impl Strategy<Value = LabeledTree> {
    (1..=max_nodes)
        .prop_flat_map(move |n| {
            let parents = (1..n).map(|i| (0..i).boxed()).collect::<Vec<_>>();
            (parents, prop::collection::vec(1..=p, n))
        })
        .prop_map(move |(parents, labels)| {
            let parents: Vec<Option<usize>> = std::iter::once(None).chain(parents.into_iter().map(Some)).collect();
            LabeledTree::from_parents(&parents, &labels, p).unwrap()
        })
}

fn graph_structure(seed: u64) -> Structure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tm = random_tree_model(&mut rng, 2, 2, 6, 0.5);
    Structure::from_graph_with_vocabulary(&interpret(&tm).unwrap(), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restriction_preserves_leaf_distances(t in tree_strategy(14, 2), picks in prop::collection::vec(any::<bool>(), 14)) {
        let deleted: HashSet<usize> = (1..t.len()).filter(|&v| picks[v]).map(|v| t.id(v)).collect();
        let Ok(s) = t.leaf_hereditary_restrict(&deleted) else {
            return Ok(());
        };
        prop_assert!(is_leaf_hereditary_subtree(&s, &t));
        let leaves: Vec<usize> = s.leaves().into_iter().filter(|&v| t.is_leaf(t.index_of(s.id(v)).unwrap())).collect();
        for &a in &leaves {
            for &b in &leaves {
                let (ta, tb) = (t.index_of(s.id(a)).unwrap(), t.index_of(s.id(b)).unwrap());
                prop_assert_eq!(s.distance(a, b), t.distance(ta, tb));
            }
        }
    }

    #[test]
    fn canonical_code_ignores_node_order(t in tree_strategy(12, 3), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let n = t.len();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut parents = vec![None; n];
        let mut labels = vec![0; n];
        let mut ids = vec![0; n];
        for v in 0..n {
            parents[perm[v]] = t.parent(v).map(|p| perm[p]);
            labels[perm[v]] = t.label(v);
            ids[perm[v]] = 1000 + v;
        }
        let u = LabeledTree::with_ids(ids, parents, labels, 3).unwrap();
        prop_assert_eq!(u.canonical_encode(), t.canonical_encode());
    }

    #[test]
    fn validation_catches_mutations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tm = random_tree_model(&mut rng, 2, 2, 8, 0.5);
        let g = interpret(&tm).unwrap();
        prop_assert!(validate_against_graph(&tm, &g).is_valid());

        // a leaf relabeled with the internal label
        let leaf = tm.tree.leaves()[0];
        let relabeled = tm.tree.map_labels(3, |v, l| if v == leaf { 3 } else { l }).unwrap();
        let bad = TreeModel::new(relabeled, tm.sig.clone()).unwrap();
        prop_assert!(validate_tree_model(&bad).conditions().contains(&Condition::Labels));

        // a triple beyond the height
        let mut triples = tm.sig.triples();
        triples.push((1, 1, 3));
        let bad = TreeModel::new(tm.tree.clone(), Signature::new(2, 2, triples)).unwrap();
        prop_assert!(validate_tree_model(&bad).conditions().contains(&Condition::Signature));

        // an extra vertex and a flipped pair
        let mut extra = g.clone();
        extra.add_vertex(10_000, Some(1));
        prop_assert!(validate_against_graph(&tm, &extra).conditions().contains(&Condition::VertexSet));
        let vs: Vec<usize> = g.vertices().collect();
        if vs.len() >= 2 {
            let mut flipped = shrubkit::Graph::new();
            for &v in &vs {
                flipped.add_vertex(v, g.label(v));
            }
            for (a, b) in g.edges() {
                if (a, b) != (vs[0], vs[1]) && (b, a) != (vs[0], vs[1]) {
                    flipped.add_edge(a, b).unwrap();
                }
            }
            if !g.has_edge(vs[0], vs[1]) {
                flipped.add_edge(vs[0], vs[1]).unwrap();
            }
            prop_assert!(validate_against_graph(&tm, &flipped).conditions().contains(&Condition::Edges));
        }
    }

    #[test]
    fn evaluator_laws(seed in any::<u64>(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let s = graph_structure(seed);
        let vocab = Vocabulary::graph(2);
        let (phi, psi) = (sample_formula(s1, 2, vocab), sample_formula(s2, 2, vocab));
        let (a, b) = (holds(&s, &phi).unwrap(), holds(&s, &psi).unwrap());
        prop_assert_eq!(holds(&s, &Formula::not(phi.clone())).unwrap(), !a);
        let lhs = Formula::not(Formula::and(vec![phi.clone(), psi.clone()]));
        let rhs = Formula::or(vec![Formula::not(phi.clone()), Formula::not(psi.clone())]);
        prop_assert_eq!(holds(&s, &lhs).unwrap(), !(a && b));
        prop_assert_eq!(holds(&s, &rhs).unwrap(), !(a && b));
        // a body with a free variable w
        let body = Formula::or(vec![
            Formula::and(vec![phi, Formula::label(1, "w")]),
            Formula::exists("u", Formula::edge("w", "u")),
        ]);
        let all = Formula::forall("w", body.clone());
        let not_some_not = Formula::not(Formula::exists("w", Formula::not(body)));
        prop_assert_eq!(holds(&s, &all).unwrap(), holds(&s, &not_some_not).unwrap());
    }

    #[test]
    fn ef_is_monotone_in_rank(a in tree_strategy(6, 2), b in tree_strategy(6, 2)) {
        let (sa, sb) = (Structure::from_tree(&a), Structure::from_tree(&b));
        let verdicts: Vec<bool> = (0..=3).map(|m| ef_equivalent(&sa, &sb, m).unwrap()).collect();
        for w in verdicts.windows(2) {
            prop_assert!(!w[1] || w[0]);
        }
        prop_assert_eq!(verdicts[2], ef_equivalent(&sb, &sa, 2).unwrap());
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>()) {
        let one = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), 2, 2, 20);
        let two = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), 2, 2, 20);
        prop_assert_eq!(&one, &two);
        prop_assert_eq!(
            shrink_tree(&one, 2, CapPolicy::auto()).unwrap(),
            shrink_tree(&two, 2, CapPolicy::auto()).unwrap()
        );
        prop_assert_eq!(sample_formula(seed, 2, Vocabulary::tree(2)), sample_formula(seed, 2, Vocabulary::tree(2)));
    }
}

#[test]
fn print_parse_round_trip() {
    for seed in 0..200 {
        for vocab in [Vocabulary::graph(0), Vocabulary::graph(2), Vocabulary::tree(3)] {
            let f = sample_formula(seed, 3, vocab);
            let text = f.to_string();
            assert_eq!(parse_formula(&text).unwrap(), f, "{text}");
        }
    }
}

#[test]
fn g_is_a_power_of_28() {
    for d in 0..=8 {
        assert_eq!(g(d), num_bigint::BigUint::from(28u32).pow(d as u32));
    }
}

#[test]
fn index_of_stars_at_rank_one() {
    // rank-1 sentences over one label only see whether a non-root exists
    assert_eq!(index_lower_bound(1, 1, 1, 8).unwrap(), 2);
}
