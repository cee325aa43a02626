//! Labeled rooted trees and forests.
//!
//! Nodes are stored densely (local indices `0..len`), but every node also
//! carries an external [`NodeId`]. Freshly built trees use ids `0..len`;
//! restrictions and kernels keep the ids of the tree they came from, so
//! "is a subtree of" questions reduce to id-set inclusion.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type Label = u32;

/// Isomorphism-invariant code of a labeled rooted tree.
///
/// `code(v) = [label(v) + 1] ++ sorted(code(children)) ++ [0]`. The token
/// stream is prefix-free, so equal codes mean isomorphic trees.
pub type CanonicalCode = Vec<u32>;

/// Nested (pointer-free) description of a tree, used by the JSON formats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<NodeId>,
    pub label: Label,
    #[serde(default)]
    pub children: Vec<NestedNode>,
}

impl NestedNode {
    pub fn leaf(label: Label) -> Self {
        NestedNode {
            id: None,
            label,
            children: Vec::new(),
        }
    }

    pub fn node(label: Label, children: Vec<NestedNode>) -> Self {
        NestedNode {
            id: None,
            label,
            children,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    ids: Vec<NodeId>,
    parent: Vec<Option<usize>>,
    labels: Vec<Label>,
    children: Vec<Vec<usize>>,
    root: usize,
    alphabet: Label,
    index: HashMap<NodeId, usize>,
}

impl LabeledTree {
    /// Builds a tree from a parent array over local indices, with ids `0..n`.
    pub fn from_parents(parents: &[Option<usize>], labels: &[Label], alphabet: Label) -> Result<Self> {
        let ids = (0..parents.len()).collect();
        Self::with_ids(ids, parents.to_vec(), labels.to_vec(), alphabet)
    }

    /// Builds a tree with explicit external ids. `parents` refers to local
    /// indices (positions in `ids`).
    pub fn with_ids(
        ids: Vec<NodeId>,
        parents: Vec<Option<usize>>,
        labels: Vec<Label>,
        alphabet: Label,
    ) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::Structure("tree has no nodes".into()));
        }
        if parents.len() != n || labels.len() != n {
            return Err(Error::Structure(format!(
                "length mismatch: {} ids, {} parents, {} labels",
                n,
                parents.len(),
                labels.len()
            )));
        }
        if alphabet == 0 {
            return Err(Error::Structure("label alphabet must be non-empty".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, &id) in ids.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::Structure(format!("duplicate node id {id}")));
            }
        }
        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (i, p) in parents.iter().enumerate() {
            match *p {
                None => {
                    if let Some(r) = root {
                        return Err(Error::Structure(format!(
                            "nodes {} and {} are both roots",
                            ids[r], ids[i]
                        )));
                    }
                    root = Some(i);
                }
                Some(p) if p >= n => {
                    return Err(Error::Structure(format!(
                        "node {} has parent index {p} out of range",
                        ids[i]
                    )))
                }
                Some(p) if p == i => {
                    return Err(Error::Structure(format!("node {} is its own parent", ids[i])))
                }
                Some(p) => children[p].push(i),
            }
        }
        let root = root.ok_or_else(|| Error::Structure("no root (parent links form a cycle)".into()))?;
        for (i, &l) in labels.iter().enumerate() {
            if l == 0 || l > alphabet {
                return Err(Error::Structure(format!(
                    "node {} has label {l} outside [1, {alphabet}]",
                    ids[i]
                )));
            }
        }
        // connectivity: every node must be reached from the root
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        let mut count = 0;
        while let Some(v) = stack.pop() {
            seen[v] = true;
            count += 1;
            stack.extend(children[v].iter().copied());
        }
        if count != n {
            let stray = (0..n).find(|&i| !seen[i]).unwrap();
            return Err(Error::Structure(format!(
                "node {} is not connected to the root (cycle in parent links)",
                ids[stray]
            )));
        }
        Ok(LabeledTree {
            ids,
            parent: parents,
            labels,
            children,
            root,
            alphabet,
            index,
        })
    }

    pub fn single(label: Label, alphabet: Label) -> Result<Self> {
        Self::from_parents(&[None], &[label], alphabet)
    }

    /// Builds a tree from a nested description. Nodes without an explicit id
    /// are numbered in preorder.
    pub fn from_nested(root: &NestedNode, alphabet: Label) -> Result<Self> {
        let mut ids = Vec::new();
        let mut parents = Vec::new();
        let mut labels = Vec::new();
        let mut stack: Vec<(&NestedNode, Option<usize>)> = vec![(root, None)];
        while let Some((node, parent)) = stack.pop() {
            let local = ids.len();
            ids.push(node.id.unwrap_or(local));
            parents.push(parent);
            labels.push(node.label);
            for child in node.children.iter().rev() {
                stack.push((child, Some(local)));
            }
        }
        Self::with_ids(ids, parents, labels, alphabet)
    }

    pub fn to_nested(&self) -> NestedNode {
        let default_ids = self.has_preorder_ids();
        self.nested_at(self.root, default_ids)
    }

    fn nested_at(&self, v: usize, default_ids: bool) -> NestedNode {
        NestedNode {
            id: if default_ids { None } else { Some(self.ids[v]) },
            label: self.labels[v],
            children: self.children[v].iter().map(|&c| self.nested_at(c, default_ids)).collect(),
        }
    }

    fn has_preorder_ids(&self) -> bool {
        self.preorder().iter().enumerate().all(|(k, &v)| self.ids[v] == k)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn alphabet(&self) -> Label {
        self.alphabet
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn id(&self, v: usize) -> NodeId {
        self.ids[v]
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Local indices in preorder (children in stored order).
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev().copied());
        }
        out
    }

    /// Local indices ordered so that every child precedes its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = self.preorder();
        order.reverse();
        order
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.preorder().into_iter().filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn leaf_ids(&self) -> BTreeSet<NodeId> {
        self.leaves().into_iter().map(|v| self.ids[v]).collect()
    }

    pub fn depth(&self, mut v: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[v] {
            v = p;
            d += 1;
        }
        d
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.len()];
        for v in self.preorder() {
            if let Some(p) = self.parent[v] {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// Height of the subtree rooted at every node.
    pub fn subtree_heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len()];
        for v in self.postorder() {
            h[v] = self.children[v].iter().map(|&c| h[c] + 1).max().unwrap_or(0);
        }
        h
    }

    pub fn height(&self) -> usize {
        self.subtree_heights()[self.root]
    }

    /// Distance between two nodes along tree edges.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        let depth = self.depths();
        let (mut a, mut b) = (u, v);
        let mut dist = 0;
        while depth[a] > depth[b] {
            a = self.parent[a].unwrap();
            dist += 1;
        }
        while depth[b] > depth[a] {
            b = self.parent[b].unwrap();
            dist += 1;
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
            dist += 2;
        }
        dist
    }

    /// Canonical code of every node's subtree, indexed by local index.
    pub fn canonical_codes(&self) -> Vec<CanonicalCode> {
        let mut codes: Vec<CanonicalCode> = vec![Vec::new(); self.len()];
        for v in self.postorder() {
            let mut kids: Vec<&CanonicalCode> = self.children[v].iter().map(|&c| &codes[c]).collect();
            kids.sort();
            let mut code = Vec::with_capacity(2 + kids.iter().map(|k| k.len()).sum::<usize>());
            code.push(self.labels[v] + 1);
            for k in kids {
                code.extend_from_slice(k);
            }
            code.push(0);
            codes[v] = code;
        }
        codes
    }

    pub fn canonical_encode(&self) -> CanonicalCode {
        self.canonical_codes().swap_remove(self.root)
    }

    /// The subtree rooted at local index `v`, keeping external ids.
    pub fn subtree(&self, v: usize) -> LabeledTree {
        let mut keep = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            keep.push(u);
            stack.extend(self.children[u].iter().copied());
        }
        self.restrict_to(&keep)
    }

    /// Induced sub-tree on a set of local indices that is closed under
    /// taking parents up to a single topmost node, which becomes the root.
    /// Node order follows the original local order.
    pub fn restrict_to(&self, keep: &[usize]) -> LabeledTree {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut local = vec![usize::MAX; self.len()];
        for (k, &v) in keep.iter().enumerate() {
            local[v] = k;
        }
        let ids = keep.iter().map(|&v| self.ids[v]).collect();
        let labels = keep.iter().map(|&v| self.labels[v]).collect();
        let parents = keep
            .iter()
            .map(|&v| self.parent[v].map(|p| local[p]).filter(|&p| p != usize::MAX))
            .collect();
        LabeledTree::with_ids(ids, parents, labels, self.alphabet)
            .expect("restriction of a valid tree to a connected node set")
    }

    /// Removes the subtrees rooted at the nodes with the given ids, then
    /// every internal node left without children, so that all remaining
    /// leaves are leaves of `self`.
    pub fn leaf_hereditary_restrict(&self, deleted: &HashSet<NodeId>) -> Result<LabeledTree> {
        if deleted.contains(&self.ids[self.root]) {
            return Err(Error::Input("cannot delete the subtree of the root".into()));
        }
        let mut cut = vec![false; self.len()];
        for v in self.preorder() {
            cut[v] = deleted.contains(&self.ids[v]) || self.parent[v].is_some_and(|p| cut[p]);
        }
        let mut alive = vec![false; self.len()];
        for v in self.postorder() {
            alive[v] = !cut[v] && (self.is_leaf(v) || self.children[v].iter().any(|&c| alive[c]));
        }
        if !alive[self.root] {
            return Err(Error::Input("the deletion removes every leaf".into()));
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&v| alive[v]).collect();
        Ok(self.restrict_to(&keep))
    }

    /// Relabels every node through `f`, keeping shape and ids.
    pub fn map_labels(&self, alphabet: Label, f: impl Fn(usize, Label) -> Label) -> Result<LabeledTree> {
        let labels = (0..self.len()).map(|v| f(v, self.labels[v])).collect();
        LabeledTree::with_ids(self.ids.clone(), self.parent.clone(), labels, alphabet)
    }
}

/// True iff `t2` is a leaf-hereditary subtree of `t1`: same root, `t2` is an
/// induced substructure of `t1` (ids, labels and parent links agree), and
/// every leaf of `t2` is a leaf of `t1`.
pub fn is_leaf_hereditary_subtree(t2: &LabeledTree, t1: &LabeledTree) -> bool {
    if t2.id(t2.root()) != t1.id(t1.root()) {
        return false;
    }
    for v in 0..t2.len() {
        let Some(u) = t1.index_of(t2.id(v)) else {
            return false;
        };
        if t1.label(u) != t2.label(v) {
            return false;
        }
        let p2 = t2.parent(v).map(|p| t2.id(p));
        let p1 = t1.parent(u).map(|p| t1.id(p));
        if p1 != p2 {
            return false;
        }
        if t2.is_leaf(v) && !t1.is_leaf(u) {
            return false;
        }
    }
    true
}

/// Disjoint union of labeled rooted trees with disjoint id spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    pub trees: Vec<LabeledTree>,
}

impl Forest {
    /// The forest left after deleting the root of `t`.
    pub fn below_root(t: &LabeledTree) -> Forest {
        Forest {
            trees: t.children(t.root()).iter().map(|&c| t.subtree(c)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.trees.iter().map(LabeledTree::len).sum()
    }
}
