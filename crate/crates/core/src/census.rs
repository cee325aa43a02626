//! Enumeration of small trees, empirical type counts, and a brute-force
//! recognizer for graphs with tree models.

use std::collections::{BTreeMap, HashMap};

use crate::ef::type_partition_trees;
use crate::error::Result;
use crate::graph::Graph;
use crate::interp::interpret;
use crate::model::{Signature, TreeModel};
use crate::tree::{CanonicalCode, Label, LabeledTree, NodeId};

/// Rebuilds a tree from its canonical code (ids in preorder).
pub fn tree_from_code(code: &[u32], alphabet: Label) -> LabeledTree {
    let mut parents = Vec::new();
    let mut labels = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &tok in code {
        if tok == 0 {
            stack.pop();
        } else {
            parents.push(stack.last().copied());
            labels.push(tok - 1);
            stack.push(labels.len() - 1);
        }
    }
    LabeledTree::from_parents(&parents, &labels, alphabet).expect("canonical codes describe trees")
}

/// Streams one tree per isomorphism class of height `<= d`, labels in
/// `[p]`, at most `max_nodes` nodes; ordered by size, then canonical code.
pub struct TreeEnumerator {
    d: usize,
    p: Label,
    max_nodes: usize,
    size: usize,
    pending: std::vec::IntoIter<CanonicalCode>,
    table: HashMap<(usize, usize), Vec<CanonicalCode>>,
}

impl TreeEnumerator {
    /// Trees of height `<= h` with exactly `n` nodes, sorted by code.
    fn trees(&mut self, h: usize, n: usize) -> Vec<CanonicalCode> {
        if let Some(v) = self.table.get(&(h, n)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 1 {
            out.extend((1..=self.p).map(|l| vec![l + 1, 0]));
        } else if h > 0 {
            let mut pool: Vec<(CanonicalCode, usize)> = Vec::new();
            for k in 1..n {
                pool.extend(self.trees(h - 1, k).into_iter().map(|c| (c, k)));
            }
            pool.sort();
            let mut forests = Vec::new();
            multisets(&pool, 0, n - 1, &mut Vec::new(), &mut forests);
            for l in 1..=self.p {
                for f in &forests {
                    let mut code = vec![l + 1];
                    code.extend_from_slice(f);
                    code.push(0);
                    out.push(code);
                }
            }
        }
        out.sort();
        self.table.insert((h, n), out.clone());
        out
    }
}

/// All multisets from `pool[from..]` (indices nondecreasing) whose sizes sum
/// to `rest`, each emitted as the concatenation of its codes.
fn multisets(pool: &[(CanonicalCode, usize)], from: usize, rest: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(chosen.iter().flat_map(|&i| pool[i].0.iter().copied()).collect());
        return;
    }
    for i in from..pool.len() {
        if pool[i].1 <= rest {
            chosen.push(i);
            multisets(pool, i, rest - pool[i].1, chosen, out);
            chosen.pop();
        }
    }
}

impl Iterator for TreeEnumerator {
    type Item = LabeledTree;

    fn next(&mut self) -> Option<LabeledTree> {
        loop {
            if let Some(code) = self.pending.next() {
                return Some(tree_from_code(&code, self.p));
            }
            if self.size >= self.max_nodes {
                return None;
            }
            self.size += 1;
            let level = self.trees(self.d, self.size);
            self.pending = level.into_iter();
        }
    }
}

pub fn enumerate_trees(d: usize, p: Label, max_nodes: usize) -> TreeEnumerator {
    TreeEnumerator {
        d,
        p,
        max_nodes,
        size: 0,
        pending: Vec::new().into_iter(),
        table: HashMap::new(),
    }
}

/// Number of `≡_m` classes among the enumerated trees: a lower bound on the
/// index of `T_{d,p}`.
pub fn index_lower_bound(d: usize, p: Label, m: usize, max_nodes: usize) -> Result<usize> {
    let trees: Vec<LabeledTree> = enumerate_trees(d, p, max_nodes).collect();
    Ok(type_partition_trees(&trees, m)?.class_count())
}

/// Outcome of [`recognize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    Found(TreeModel),
    /// Exhaustive search found no model.
    No,
    /// The candidate budget ran out first.
    Unknown { examined: u64 },
}

/// Searches for a tree model of height `d` with `r` leaf labels whose graph
/// is `g` (as labeled graph when `g` is labeled, otherwise up to labels).
///
/// Candidates are leaf labelings (up to renaming of labels) times chains
/// of coarsening partitions of the vertices, one partition per level; the
/// signature is forced by the pairs, and a contradiction discards the
/// candidate. `budget` caps the number of candidates.
pub fn recognize(g: &Graph, r: Label, d: usize, budget: u64) -> Recognition {
    let vs: Vec<NodeId> = g.vertices().collect();
    let n = vs.len();
    if n == 0 || r == 0 {
        return Recognition::No;
    }
    if d == 0 {
        return match n {
            1 => {
                let label = g.label(vs[0]).unwrap_or(1);
                if label > r {
                    return Recognition::No;
                }
                let t = LabeledTree::with_ids(vec![vs[0]], vec![None], vec![label], r + 1).expect("single node");
                Recognition::Found(TreeModel::new(t, Signature::empty(r, 0)).expect("alphabet r + 1"))
            }
            _ => Recognition::No,
        };
    }
    let labelings: Vec<Vec<Label>> = if g.is_labeled() {
        let ls: Vec<Label> = vs.iter().map(|&v| g.label(v).unwrap()).collect();
        if ls.iter().any(|&l| l > r) {
            return Recognition::No;
        }
        vec![ls]
    } else {
        let mut out = Vec::new();
        growth_strings(n, r as usize, &mut Vec::new(), &mut out);
        out.into_iter().map(|s| s.into_iter().map(|b| b as Label + 1).collect()).collect()
    };
    let mut search = Recognizer {
        g,
        vs: &vs,
        r,
        d,
        budget,
        examined: 0,
    };
    for labels in &labelings {
        let singletons: Vec<usize> = (0..n).collect();
        match search.chains(labels, &mut vec![singletons], n) {
            Some(Ok(tm)) => return Recognition::Found(tm),
            Some(Err(())) => {
                return Recognition::Unknown {
                    examined: search.examined,
                }
            }
            None => {}
        }
    }
    Recognition::No
}

/// Restricted growth strings of length `n` with at most `k` blocks.
fn growth_strings(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    let next = cur.iter().map(|&b| b + 1).max().unwrap_or(0);
    for b in 0..=next.min(k - 1) {
        cur.push(b);
        growth_strings(n, k, cur, out);
        cur.pop();
    }
}

struct Recognizer<'a> {
    g: &'a Graph,
    vs: &'a [NodeId],
    r: Label,
    d: usize,
    budget: u64,
    examined: u64,
}

impl Recognizer<'_> {
    /// Extends the chain `levels` (block index of every vertex, level 0 =
    /// singletons) to height `d`. `Some(Err)` means the budget ran out.
    fn chains(&mut self, labels: &[Label], levels: &mut Vec<Vec<usize>>, blocks: usize) -> Option<std::result::Result<TreeModel, ()>> {
        if levels.len() == self.d {
            levels.push(vec![0; self.vs.len()]);
            let out = self.candidate(labels, levels);
            levels.pop();
            return out;
        }
        let mut merges = Vec::new();
        growth_strings(blocks, blocks, &mut Vec::new(), &mut merges);
        let last = levels.last().unwrap().clone();
        for merge in merges {
            let nb = merge.iter().max().map_or(0, |&b| b + 1);
            levels.push(last.iter().map(|&b| merge[b]).collect());
            let out = self.chains(labels, levels, nb);
            levels.pop();
            if out.is_some() {
                return out;
            }
        }
        None
    }

    fn candidate(&mut self, labels: &[Label], levels: &[Vec<usize>]) -> Option<std::result::Result<TreeModel, ()>> {
        self.examined += 1;
        if self.examined > self.budget {
            return Some(Err(()));
        }
        let n = self.vs.len();
        let mut required: BTreeMap<(Label, Label, usize), bool> = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                let l = (1..levels.len()).find(|&l| levels[l][a] == levels[l][b]).expect("top level is one block");
                let (i, j) = (labels[a].min(labels[b]), labels[a].max(labels[b]));
                let edge = self.g.has_edge(self.vs[a], self.vs[b]);
                if *required.entry((i, j, l)).or_insert(edge) != edge {
                    return None;
                }
            }
        }
        let sig = Signature::new(self.r, self.d, required.into_iter().filter(|&(_, e)| e).map(|(t, _)| t));
        let tm = self.build(labels, levels, sig);
        let h = interpret(&tm).ok()?;
        let same = if self.g.is_labeled() { h == *self.g } else { h.unlabeled() == *self.g };
        same.then_some(Ok(tm))
    }

    fn build(&self, labels: &[Label], levels: &[Vec<usize>], sig: Signature) -> TreeModel {
        let n = self.vs.len();
        let mut ids: Vec<NodeId> = self.vs.to_vec();
        let mut node_labels: Vec<Label> = labels.to_vec();
        let mut parents: Vec<Option<usize>> = vec![None; n];
        let mut next_id = self.vs.iter().max().copied().unwrap_or(0) + 1;
        // local index of block b at level l
        let mut prev: HashMap<usize, usize> = (0..n).map(|v| (v, v)).collect();
        for l in 1..levels.len() {
            let mut here: HashMap<usize, usize> = HashMap::new();
            for v in 0..n {
                let block = levels[l][v];
                let local = *here.entry(block).or_insert_with(|| {
                    ids.push(next_id);
                    next_id += 1;
                    node_labels.push(self.r + 1);
                    parents.push(None);
                    ids.len() - 1
                });
                let child = prev[&levels[l - 1][v]];
                parents[child] = Some(local);
            }
            prev = here;
        }
        let tree = LabeledTree::with_ids(ids, parents, node_labels, self.r + 1).expect("chain of partitions is a tree");
        TreeModel::new(tree, sig).expect("alphabet r + 1")
    }
}
