//! Browser bindings: generate a tree model, shrink it, and lay out the tree
//! and both graphs for drawing. The plain functions return JSON strings so
//! they can be tested natively; the `wasm_bindgen` wrappers only convert
//! errors.

use std::collections::{BTreeSet, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use shrubkit::generate::tree_model_with_leaves;
use shrubkit::interp::interpretation_rank;
use shrubkit::io::{parse_tree_model, tree_model_to_json};
use shrubkit::shrink::bounds::Bounds;
use shrubkit::shrink::{shrink_graph_report, ShrinkConfig};
use shrubkit::{interpret, CapPolicy, Graph, LabeledTree, NodeId};

/// Largest model the page accepts; the oracle is exponential.
pub const MAX_LEAVES: usize = 40;

pub fn random_model_json(seed: u32, r: u32, d: usize, leaves: usize) -> Result<String, String> {
    if r == 0 || r > 4 || d > 3 || leaves == 0 || leaves > MAX_LEAVES {
        return Err(format!("need 1 <= r <= 4, d <= 3 and 1 <= leaves <= {MAX_LEAVES}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    Ok(tree_model_to_json(&tree_model_with_leaves(&mut rng, r, d, leaves, 0.5)))
}

/// Positions in the unit square: leaves evenly spaced in preorder, parents
/// centered over their children, depth downwards.
fn tree_layout(t: &LabeledTree) -> HashMap<NodeId, (f64, f64)> {
    let order = t.preorder();
    let leaves: Vec<usize> = order.iter().copied().filter(|&v| t.is_leaf(v)).collect();
    let height = t.height().max(1) as f64;
    let depth = t.depths();
    let mut x = vec![0.0; t.len()];
    for (k, &v) in leaves.iter().enumerate() {
        x[v] = (k as f64 + 0.5) / leaves.len() as f64;
    }
    for v in t.postorder() {
        if !t.is_leaf(v) {
            let cs = t.children(v);
            x[v] = cs.iter().map(|&c| x[c]).sum::<f64>() / cs.len() as f64;
        }
    }
    (0..t.len())
        .map(|v| (t.id(v), (x[v], 0.05 + 0.9 * depth[v] as f64 / height)))
        .collect()
}

/// Vertices on a circle, in the order of the tree's leaves.
fn circle_layout(order: &[NodeId]) -> HashMap<NodeId, (f64, f64)> {
    let n = order.len().max(1) as f64;
    order
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let a = std::f64::consts::TAU * k as f64 / n - std::f64::consts::FRAC_PI_2;
            (v, (0.5 + 0.42 * a.cos(), 0.5 + 0.42 * a.sin()))
        })
        .collect()
}

fn graph_json(g: &Graph, pos: &HashMap<NodeId, (f64, f64)>, kept: &BTreeSet<NodeId>) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .map(|v| {
            let (x, y) = pos[&v];
            json!({ "id": v, "label": g.label(v), "x": x, "y": y, "kept": kept.contains(&v) })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .map(|(u, v)| json!([u, v, kept.contains(&u) && kept.contains(&v)]))
        .collect();
    json!({ "vertices": vertices, "edges": edges })
}

/// Shrinks the model at rank `m` (auto policy) and returns the tree, the
/// graph, the kernel and the report, with coordinates.
pub fn analyze_json(model: &str, m: usize) -> Result<String, String> {
    let tm = parse_tree_model(model, false).map_err(|e| e.to_string())?;
    if tm.tree.leaves().len() > MAX_LEAVES {
        return Err(format!("at most {MAX_LEAVES} leaves"));
    }
    let g = interpret(&tm).map_err(|e| e.to_string())?;
    let k = shrink_graph_report(&tm, m, CapPolicy::auto(), &ShrinkConfig::default()).map_err(|e| e.to_string())?;
    let t = &tm.tree;
    let kept_nodes: BTreeSet<NodeId> = k.model.tree.ids().iter().copied().collect();
    let tpos = tree_layout(t);
    let nodes: Vec<Value> = (0..t.len())
        .map(|v| {
            let (x, y) = tpos[&t.id(v)];
            json!({
                "id": t.id(v),
                "label": t.label(v),
                "leaf": t.is_leaf(v),
                "x": x,
                "y": y,
                "kept": kept_nodes.contains(&t.id(v)),
            })
        })
        .collect();
    let tree_edges: Vec<Value> = (0..t.len())
        .filter_map(|v| t.parent(v).map(|p| json!([t.id(p), t.id(v)])))
        .collect();
    let leaf_order: Vec<NodeId> = t.preorder().into_iter().filter(|&v| t.is_leaf(v)).map(|v| t.id(v)).collect();
    let gpos = circle_layout(&leaf_order);
    let kept: BTreeSet<NodeId> = k.graph.vertex_set();
    let out = json!({
        "r": tm.r(),
        "d": tm.d(),
        "signature": tm.sig.triples(),
        "tree": { "nodes": nodes, "edges": tree_edges },
        "graph": graph_json(&g, &gpos, &kept),
        "kernel": graph_json(&k.graph, &gpos, &kept),
        "report": k.report,
        "reportText": k.report.to_string(),
    });
    Ok(out.to_string())
}

/// Bound values for a tree model with `r` labels and height `d` at rank `m`.
pub fn bounds_json(d: usize, r: u64, m: u64) -> Result<String, String> {
    if r == 0 {
        return Err("r must be at least 1".into());
    }
    let b = Bounds::default();
    let q = interpretation_rank(d) as u64;
    let out = json!({
        "g": b.g(d).to_string(),
        "h": b.h(d).to_string(),
        "treeRank": m + q,
        "zeta": b.zeta(d, r + 1, m + q, d + 1),
        "rho": b.rho(d, r + 1, m + q),
        "graphKernelBound": b.graph_kernel_bound(d, r, m),
        "graphIndexBound": b.graph_index_bound(d, r, m),
        "constantsConsistent": b.constants_consistent(),
    });
    Ok(out.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn random_model(seed: u32, r: u32, d: usize, leaves: usize) -> Result<String, JsError> {
    js(random_model_json(seed, r, d, leaves))
}

#[wasm_bindgen]
pub fn analyze(model: &str, m: usize) -> Result<String, JsError> {
    js(analyze_json(model, m))
}

#[wasm_bindgen]
pub fn bounds(d: usize, r: u32, m: u32) -> Result<String, JsError> {
    js(bounds_json(d, r as u64, m as u64))
}
