//! A uniform relational view over trees and graphs: a finite universe with
//! a symmetric irreflexive relation `E`, unary label predicates `P_i` and,
//! for trees, the `root` predicate.

use crate::graph::Graph;
use crate::tree::{Label, LabeledTree, NodeId};

/// Which symbols a structure interprets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    /// Number of label predicates `P_1..P_p`; 0 for unlabeled graphs.
    pub labels: Label,
    pub root: bool,
}

impl Vocabulary {
    pub fn graph(labels: Label) -> Self {
        Vocabulary { labels, root: false }
    }

    pub fn tree(labels: Label) -> Self {
        Vocabulary { labels, root: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    ids: Vec<NodeId>,
    adj: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
    labels: Vec<Option<Label>>,
    roots: Vec<bool>,
    vocab: Vocabulary,
}

impl Structure {
    pub fn from_tree(t: &LabeledTree) -> Self {
        let n = t.len();
        let mut s = Structure::blank(t.ids().to_vec(), Vocabulary::tree(t.alphabet()));
        for v in 0..n {
            s.labels[v] = Some(t.label(v));
            if let Some(p) = t.parent(v) {
                s.connect(p, v);
            }
        }
        s.roots[t.root()] = true;
        s
    }

    pub fn from_graph(g: &Graph) -> Self {
        let ids: Vec<NodeId> = g.vertices().collect();
        let labeled = g.is_labeled();
        let p = if labeled {
            ids.iter().filter_map(|&v| g.label(v)).max().unwrap_or(0)
        } else {
            0
        };
        let mut s = Structure::blank(ids.clone(), Vocabulary::graph(p));
        let pos = |v: NodeId| ids.binary_search(&v).unwrap();
        if labeled {
            for (k, &v) in ids.iter().enumerate() {
                s.labels[k] = g.label(v);
            }
        }
        for (u, v) in g.edges() {
            s.connect(pos(u), pos(v));
        }
        s
    }

    /// Graph with an explicit label vocabulary size (for comparing graphs
    /// whose largest realized label differs).
    pub fn from_graph_with_vocabulary(g: &Graph, labels: Label) -> Self {
        let mut s = Structure::from_graph(g);
        s.vocab.labels = if g.is_labeled() { labels } else { 0 };
        s
    }

    fn blank(ids: Vec<NodeId>, vocab: Vocabulary) -> Self {
        let n = ids.len();
        Structure {
            ids,
            adj: vec![false; n * n],
            neighbors: vec![Vec::new(); n],
            labels: vec![None; n],
            roots: vec![false; n],
            vocab,
        }
    }

    fn connect(&mut self, a: usize, b: usize) {
        let n = self.ids.len();
        if !self.adj[a * n + b] {
            self.adj[a * n + b] = true;
            self.adj[b * n + a] = true;
            self.neighbors[a].push(b);
            self.neighbors[b].push(a);
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn vocabulary(&self) -> Vocabulary {
        self.vocab
    }

    pub fn id(&self, a: usize) -> NodeId {
        self.ids[a]
    }

    #[inline]
    pub fn edge(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.ids.len() + b]
    }

    pub fn neighbors(&self, a: usize) -> &[usize] {
        &self.neighbors[a]
    }

    #[inline]
    pub fn label(&self, a: usize) -> Option<Label> {
        self.labels[a]
    }

    #[inline]
    pub fn has_label(&self, a: usize, l: Label) -> bool {
        self.labels[a] == Some(l)
    }

    #[inline]
    pub fn is_root(&self, a: usize) -> bool {
        self.roots[a]
    }
}
