//! Signatures, tree models and their validation.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::{Label, LabeledTree, NodeId};

/// Symmetric set of triples `(i, j, l)`: a label-`i` leaf and a label-`j`
/// leaf at tree distance `2l` are adjacent.
///
/// Only canonical triples (`i <= j`) are stored; [`Signature::contains`] and
/// [`Signature::triples`] expose the symmetric view.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    r: Label,
    d: usize,
    entries: BTreeSet<(Label, Label, usize)>,
}

impl Signature {
    /// Builds a signature, closing the given triples under `(i, j, l) -> (j, i, l)`.
    pub fn new(r: Label, d: usize, triples: impl IntoIterator<Item = (Label, Label, usize)>) -> Self {
        let entries = triples.into_iter().map(|(i, j, l)| (i.min(j), i.max(j), l)).collect();
        Signature { r, d, entries }
    }

    /// Like [`Signature::new`] but rejects input that is not already symmetric.
    pub fn new_strict(r: Label, d: usize, triples: impl IntoIterator<Item = (Label, Label, usize)>) -> Result<Self> {
        let given: BTreeSet<_> = triples.into_iter().collect();
        if let Some(&(i, j, l)) = given.iter().find(|&&(i, j, l)| !given.contains(&(j, i, l))) {
            let mut report = ValidationReport::default();
            report.push(
                Condition::Signature,
                Witness::Triple(i, j, l),
                format!("signature contains ({i}, {j}, {l}) but not ({j}, {i}, {l})"),
            );
            return Err(Error::InvalidModel(report));
        }
        Ok(Signature::new(r, d, given))
    }

    pub fn empty(r: Label, d: usize) -> Self {
        Signature::new(r, d, [])
    }

    pub fn r(&self) -> Label {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn contains(&self, i: Label, j: Label, l: usize) -> bool {
        self.entries.contains(&(i.min(j), i.max(j), l))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored triples with `i <= j`.
    pub fn canonical_triples(&self) -> impl Iterator<Item = (Label, Label, usize)> + '_ {
        self.entries.iter().copied()
    }

    /// All triples of the symmetric closure, sorted.
    pub fn triples(&self) -> Vec<(Label, Label, usize)> {
        let mut out: BTreeSet<_> = self.entries.clone();
        out.extend(self.entries.iter().map(|&(i, j, l)| (j, i, l)));
        out.into_iter().collect()
    }

    /// Largest distance level mentioned, 0 when empty.
    pub fn max_level(&self) -> usize {
        self.entries.iter().map(|t| t.2).max().unwrap_or(0)
    }
}

/// A tree over labels `[r + 1]` together with a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeModel {
    pub tree: LabeledTree,
    pub sig: Signature,
}

impl TreeModel {
    /// Pairs a tree and a signature. The tree's alphabet must be `r + 1`;
    /// everything else is checked by [`validate_tree_model`].
    pub fn new(tree: LabeledTree, sig: Signature) -> Result<Self> {
        if tree.alphabet() != sig.r() + 1 {
            return Err(Error::Structure(format!(
                "tree alphabet is {} but a model with r = {} needs r + 1 = {}",
                tree.alphabet(),
                sig.r(),
                sig.r() + 1
            )));
        }
        Ok(TreeModel { tree, sig })
    }

    pub fn r(&self) -> Label {
        self.sig.r()
    }

    pub fn d(&self) -> usize {
        self.sig.d()
    }

    pub fn internal_label(&self) -> Label {
        self.sig.r() + 1
    }
}

/// The five tree-model conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    /// Every root-to-leaf path has length exactly `d`.
    PathLength = 1,
    /// The graph's vertices are exactly the leaves.
    VertexSet = 2,
    /// Leaves carry labels in `[r]`, internal nodes carry `r + 1`.
    Labels = 3,
    /// `S ⊆ [r]² × [d]` and `S` is symmetric.
    Signature = 4,
    /// Adjacency agrees with the signature.
    Edges = 5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    Node(NodeId),
    Triple(Label, Label, usize),
    Pair(NodeId, NodeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Witness,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn conditions(&self) -> BTreeSet<Condition> {
        self.violations.iter().map(|v| v.condition).collect()
    }

    fn push(&mut self, condition: Condition, witness: Witness, message: String) {
        self.violations.push(Violation {
            condition,
            witness,
            message,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "[{}] {}", v.condition as u8, v.message)?;
        }
        Ok(())
    }
}

/// Checks conditions 1, 3 and 4 (2 and 5 concern a graph; see
/// [`validate_against_graph`]).
pub fn validate_tree_model(tm: &TreeModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    let t = &tm.tree;
    let (r, d) = (tm.r(), tm.d());
    let depth = t.depths();
    for v in t.preorder() {
        if t.is_leaf(v) && depth[v] != d {
            report.push(
                Condition::PathLength,
                Witness::Node(t.id(v)),
                format!("leaf {} is at depth {} instead of {d}", t.id(v), depth[v]),
            );
        }
    }
    for v in t.preorder() {
        let l = t.label(v);
        if t.is_leaf(v) && !(1..=r).contains(&l) {
            report.push(
                Condition::Labels,
                Witness::Node(t.id(v)),
                format!("leaf {} has label {l} outside [1, {r}]", t.id(v)),
            );
        } else if !t.is_leaf(v) && l != r + 1 {
            report.push(
                Condition::Labels,
                Witness::Node(t.id(v)),
                format!("internal node {} has label {l} instead of {}", t.id(v), r + 1),
            );
        }
    }
    for (i, j, l) in tm.sig.canonical_triples() {
        if i == 0 || j > r || l == 0 || l > d {
            report.push(
                Condition::Signature,
                Witness::Triple(i, j, l),
                format!("triple ({i}, {j}, {l}) is outside [{r}]² × [{d}]"),
            );
        }
    }
    report
}

/// Checks all five conditions for a claimed graph `g` of the model.
pub fn validate_against_graph(tm: &TreeModel, g: &Graph) -> ValidationReport {
    let mut report = validate_tree_model(tm);
    let t = &tm.tree;
    let leaves = t.leaf_ids();
    let vertices = g.vertex_set();
    for &v in vertices.symmetric_difference(&leaves) {
        let msg = if leaves.contains(&v) {
            format!("leaf {v} is not a vertex")
        } else {
            format!("vertex {v} is not a leaf")
        };
        report.push(Condition::VertexSet, Witness::Node(v), msg);
    }
    let shared: Vec<NodeId> = leaves.intersection(&vertices).copied().collect();
    for (a, &u) in shared.iter().enumerate() {
        for &v in &shared[a + 1..] {
            let (iu, iv) = (t.index_of(u).unwrap(), t.index_of(v).unwrap());
            let dist = t.distance(iu, iv);
            let expected = dist % 2 == 0 && tm.sig.contains(t.label(iu), t.label(iv), dist / 2);
            if expected != g.has_edge(u, v) {
                report.push(
                    Condition::Edges,
                    Witness::Pair(u, v),
                    format!(
                        "pair {{{u}, {v}}} at distance {dist}: signature says {}, graph says {}",
                        expected,
                        g.has_edge(u, v)
                    ),
                );
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(parents: &[Option<usize>], labels: &[Label], r: Label, d: usize, sig: &[(Label, Label, usize)]) -> TreeModel {
        let t = LabeledTree::from_parents(parents, labels, r + 1).unwrap();
        TreeModel::new(t, Signature::new(r, d, sig.iter().copied())).unwrap()
    }

    #[test]
    fn height_zero_model_is_valid() {
        let tm = model(&[None], &[1], 1, 0, &[]);
        assert!(validate_tree_model(&tm).is_valid());
    }

    #[test]
    fn root_with_two_leaves() {
        let tm = model(&[None, Some(0), Some(0)], &[2, 1, 1], 1, 1, &[]);
        assert!(validate_tree_model(&tm).is_valid());
        let bad = model(&[None, Some(0), Some(0)], &[1, 1, 1], 1, 1, &[]);
        assert_eq!(validate_tree_model(&bad).conditions(), BTreeSet::from([Condition::Labels]));
    }

    #[test]
    fn uneven_depth_names_the_short_leaf() {
        // root 0 -> {1 (leaf, depth 1), 2}, 2 -> {3 (leaf, depth 2)}
        let tm = model(&[None, Some(0), Some(0), Some(2)], &[2, 1, 2, 1], 1, 2, &[]);
        let report = validate_tree_model(&tm);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].condition, Condition::PathLength);
        assert_eq!(report.violations[0].witness, Witness::Node(1));
    }

    #[test]
    fn signature_symmetry() {
        let s = Signature::new(2, 1, [(2, 1, 1)]);
        assert!(s.contains(1, 2, 1) && s.contains(2, 1, 1));
        assert_eq!(s.triples(), vec![(1, 2, 1), (2, 1, 1)]);
        assert!(Signature::new_strict(2, 1, [(2, 1, 1)]).is_err());
        assert!(Signature::new_strict(2, 1, [(2, 1, 1), (1, 2, 1)]).is_ok());
    }

    #[test]
    fn out_of_range_triple() {
        let tm = model(&[None, Some(0)], &[2, 1], 1, 1, &[(1, 1, 2)]);
        assert_eq!(validate_tree_model(&tm).conditions(), BTreeSet::from([Condition::Signature]));
    }

    #[test]
    fn graph_conditions() {
        let tm = model(&[None, Some(0), Some(0)], &[2, 1, 1], 1, 1, &[(1, 1, 1)]);
        let mut g = Graph::new();
        g.add_vertex(1, None);
        g.add_vertex(2, None);
        let report = validate_against_graph(&tm, &g);
        assert_eq!(report.conditions(), BTreeSet::from([Condition::Edges]));
        g.add_edge(1, 2).unwrap();
        assert!(validate_against_graph(&tm, &g).is_valid());
        g.add_vertex(0, None);
        assert_eq!(validate_against_graph(&tm, &g).conditions(), BTreeSet::from([Condition::VertexSet]));
    }

    #[test]
    fn alphabet_mismatch_is_structural() {
        let t = LabeledTree::single(1, 5).unwrap();
        assert!(matches!(TreeModel::new(t, Signature::empty(1, 0)), Err(Error::Structure(_))));
    }
}
