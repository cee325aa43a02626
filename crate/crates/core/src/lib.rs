//! Tree models of bounded shrub-depth, MSO type-capping kernels, and an
//! Ehrenfeucht–Fraïssé oracle to check them.
//!
//! * [`tree`], [`graph`], [`model`]: labeled rooted trees, graphs, tree
//!   models and their validation.
//! * [`interp`]: the graph of a tree model and the translation of graph
//!   formulas into tree formulas.
//! * [`logic`]: MSO syntax, parser, brute-force evaluator, characteristic
//!   sentences, random sentences.
//! * [`ef`]: `≡_m` decision, distinguishing sentences, type partitions.
//! * [`shrink`]: kernels for trees and graphs, bound calculators.
//! * [`census`]: tree enumeration, type counts, tree-model recognition.

pub mod bench;
pub mod census;
pub mod ef;
pub mod error;
pub mod generate;
pub mod graph;
pub mod interp;
pub mod io;
pub mod logic;
pub mod model;
pub mod shrink;
pub mod structure;
pub mod tree;

pub use ef::{distinguish, ef_equivalent, type_partition, type_partition_trees, TypePartition};
pub use error::{Error, Result};
pub use graph::Graph;
pub use interp::{interpret, interpretation_rank, translate_formula};
pub use logic::{characteristic_sentence, evaluate, parse_formula, Formula};
pub use model::{validate_tree_model, Signature, TreeModel, ValidationReport};
pub use shrink::{shrink_graph, shrink_tree, verify_shrink, CapPolicy};
pub use structure::{Structure, Vocabulary};
pub use tree::{is_leaf_hereditary_subtree, Forest, Label, LabeledTree, NodeId};
