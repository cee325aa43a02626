//! File formats: JSON tree models and trees, and structure-file detection.
//!
//! Tree model: `{"d": 2, "r": 1, "signature": [[1,1,1]], "tree": {"label": 2, "children": [...]}}`.
//! Plain tree: `{"p": 2, "tree": {...}}` (`p` defaults to the largest label).
//! Graphs use the text format of [`Graph::parse`].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;
use crate::interp::interpret;
use crate::model::{Signature, TreeModel};
use crate::structure::Structure;
use crate::tree::{Label, LabeledTree, NestedNode};

#[derive(Debug, Serialize, Deserialize)]
struct TreeModelFile {
    d: usize,
    r: Label,
    signature: Vec<(Label, Label, usize)>,
    tree: NestedNode,
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<Label>,
    tree: NestedNode,
}

/// Parses a tree model. Asymmetric signatures are symmetrized unless
/// `strict` is set, in which case they are rejected.
pub fn parse_tree_model(text: &str, strict: bool) -> Result<TreeModel> {
    let file: TreeModelFile = serde_json::from_str(text)?;
    let sig = if strict {
        Signature::new_strict(file.r, file.d, file.signature)?
    } else {
        Signature::new(file.r, file.d, file.signature)
    };
    let tree = LabeledTree::from_nested(&file.tree, file.r + 1)?;
    TreeModel::new(tree, sig)
}

pub fn tree_model_to_json(tm: &TreeModel) -> String {
    let file = TreeModelFile {
        d: tm.d(),
        r: tm.r(),
        signature: tm.sig.triples(),
        tree: tm.tree.to_nested(),
    };
    serde_json::to_string_pretty(&file).expect("tree model serializes")
}

pub fn parse_tree(text: &str) -> Result<LabeledTree> {
    let file: TreeFile = serde_json::from_str(text)?;
    let p = match file.p {
        Some(p) => p,
        None => max_label(&file.tree),
    };
    LabeledTree::from_nested(&file.tree, p)
}

pub fn tree_to_json(t: &LabeledTree) -> String {
    let file = TreeFile {
        p: Some(t.alphabet()),
        tree: t.to_nested(),
    };
    serde_json::to_string_pretty(&file).expect("tree serializes")
}

fn max_label(n: &NestedNode) -> Label {
    n.children.iter().map(max_label).fold(n.label, Label::max)
}

/// Contents of a structure file, as detected from its text.
#[derive(Clone, Debug)]
pub enum StructureFile {
    Model(TreeModel),
    Tree(LabeledTree),
    Graph(Graph),
}

impl StructureFile {
    /// Tree models are read as JSON objects carrying a `signature` field,
    /// trees as other JSON objects, and anything else as a graph.
    pub fn parse(text: &str) -> Result<StructureFile> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            let value: serde_json::Value = serde_json::from_str(trimmed)?;
            if value.get("signature").is_some() {
                Ok(StructureFile::Model(parse_tree_model(trimmed, false)?))
            } else {
                Ok(StructureFile::Tree(parse_tree(trimmed)?))
            }
        } else {
            Ok(StructureFile::Graph(Graph::parse(text)?))
        }
    }

    /// The structure formulas are evaluated on. Tree models are viewed as
    /// their tree unless `model_as_graph` is set.
    pub fn structure(&self, model_as_graph: bool) -> Result<Structure> {
        Ok(match self {
            StructureFile::Model(tm) if model_as_graph => Structure::from_graph(&interpret(tm)?),
            StructureFile::Model(tm) => Structure::from_tree(&tm.tree),
            StructureFile::Tree(t) => Structure::from_tree(t),
            StructureFile::Graph(g) => Structure::from_graph(g),
        })
    }

    pub fn as_tree(&self) -> Option<&LabeledTree> {
        match self {
            StructureFile::Model(tm) => Some(&tm.tree),
            StructureFile::Tree(t) => Some(t),
            StructureFile::Graph(_) => None,
        }
    }
}
