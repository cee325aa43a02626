//! Random and parametric trees and tree models.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Signature, TreeModel};
use crate::tree::{Label, LabeledTree, NodeId};

/// A random tree of height at most `d` with labels in `[p]` and between 1
/// and `max_nodes` nodes.
pub fn random_tree<R: Rng>(rng: &mut R, d: usize, p: Label, max_nodes: usize) -> LabeledTree {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let mut parents = vec![None];
    let mut depth = vec![0usize];
    for _ in 1..n {
        let open: Vec<usize> = (0..parents.len()).filter(|&v| depth[v] < d).collect();
        let Some(&parent) = open.choose(rng) else { break };
        parents.push(Some(parent));
        depth.push(depth[parent] + 1);
    }
    let labels: Vec<Label> = (0..parents.len()).map(|_| rng.gen_range(1..=p)).collect();
    LabeledTree::from_parents(&parents, &labels, p).expect("generated parent array is a tree")
}

/// A random valid tree model with `r` leaf labels, height `d` and between 1
/// and `max_leaves` leaves (exactly 1 when `d = 0`). Every canonical
/// signature triple is included with probability `density`.
pub fn random_tree_model<R: Rng>(rng: &mut R, r: Label, d: usize, max_leaves: usize, density: f64) -> TreeModel {
    let leaves = if d == 0 { 1 } else { rng.gen_range(1..=max_leaves.max(1)) };
    tree_model_with_leaves(rng, r, d, leaves, density)
}

/// Like [`random_tree_model`] with exactly `leaves` leaves (1 when `d = 0`).
pub fn tree_model_with_leaves<R: Rng>(rng: &mut R, r: Label, d: usize, leaves: usize, density: f64) -> TreeModel {
    let leaves = if d == 0 { 1 } else { leaves.max(1) };
    let mut parents = Vec::new();
    let mut labels = Vec::new();
    grow(rng, r, d, 0, leaves, None, &mut parents, &mut labels);
    let tree = LabeledTree::from_parents(&parents, &labels, r + 1).expect("generated parent array is a tree");
    let mut triples = Vec::new();
    for l in 1..=d {
        for i in 1..=r {
            for j in i..=r {
                if rng.gen_bool(density) {
                    triples.push((i, j, l));
                }
            }
        }
    }
    TreeModel::new(tree, Signature::new(r, d, triples)).expect("alphabet r + 1")
}

#[allow(clippy::too_many_arguments)]
fn grow<R: Rng>(
    rng: &mut R,
    r: Label,
    d: usize,
    depth: usize,
    leaves: usize,
    parent: Option<usize>,
    parents: &mut Vec<Option<usize>>,
    labels: &mut Vec<Label>,
) {
    let me = parents.len();
    parents.push(parent);
    if depth == d {
        labels.push(rng.gen_range(1..=r));
        return;
    }
    labels.push(r + 1);
    // split the leaves among 1..=4 children, or one child each just above the leaves
    let k = if depth + 1 == d { leaves } else { rng.gen_range(1..=leaves.min(4)) };
    let mut cuts: Vec<usize> = (1..leaves).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(leaves)) {
        grow(rng, r, d, depth + 1, c - prev, Some(me), parents, labels);
        prev = c;
    }
}

/// The model of `K_n`: a root with `n` leaves labeled 1 and `S = {(1,1,1)}`.
pub fn clique_model(n: usize) -> TreeModel {
    let mut parents = vec![None];
    parents.extend(std::iter::repeat(Some(0)).take(n));
    let mut labels = vec![2];
    labels.extend(std::iter::repeat(1).take(n));
    let tree = LabeledTree::from_parents(&parents, &labels, 2).expect("star");
    TreeModel::new(tree, Signature::new(1, 1, [(1, 1, 1)])).expect("alphabet 2")
}

/// A star: one leaf labeled 1 and `n` leaves labeled 2 under the root,
/// with `S = {(1,2,1)}`.
pub fn star_model(n: usize) -> TreeModel {
    let mut parents = vec![None];
    parents.extend(std::iter::repeat(Some(0)).take(n + 1));
    let mut labels = vec![3, 1];
    labels.extend(std::iter::repeat(2).take(n));
    let tree = LabeledTree::from_parents(&parents, &labels, 3).expect("star");
    TreeModel::new(tree, Signature::new(2, 1, [(1, 2, 1)])).expect("alphabet 3")
}

/// A random leaf-hereditary restriction of a tree model that stays a valid
/// model: a nonempty random subset of the leaves and their ancestors.
pub fn random_model_restriction<R: Rng>(rng: &mut R, tm: &TreeModel) -> (TreeModel, HashSet<NodeId>) {
    let t = &tm.tree;
    let leaves = t.leaves();
    let mut keep: Vec<usize> = leaves.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    if keep.is_empty() {
        keep.push(*leaves.choose(rng).unwrap());
    }
    let mut alive = vec![false; t.len()];
    for &v in &keep {
        let mut u = Some(v);
        while let Some(x) = u {
            alive[x] = true;
            u = t.parent(x);
        }
    }
    let deleted: HashSet<NodeId> = (0..t.len()).filter(|&v| !alive[v]).map(|v| t.id(v)).collect();
    let tree = t.leaf_hereditary_restrict(&deleted).expect("root survives");
    (TreeModel::new(tree, tm.sig.clone()).expect("same alphabet"), deleted)
}
