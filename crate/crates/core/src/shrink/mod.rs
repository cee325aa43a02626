//! Type-capping kernels for trees and tree-model graphs.
//!
//! Children of every node are shrunk recursively, grouped by class, and at
//! most `cap` children per class are kept: the smallest by canonical code,
//! except that one child of maximal height is always kept so the height is
//! preserved. Trees group children by `≡_m` type; graphs group by
//! isomorphism of the labeled subtree (a refinement of every type) and are
//! checked at rank `m` on the graphs themselves.

pub mod bounds;
pub mod report;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::ef::types::{EfLimits, TypeId, TypeInterner};
use crate::ef::ef_equivalent_with;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::interp::{interpret, interpretation_rank};
use crate::model::TreeModel;
use crate::structure::Structure;
use crate::tree::{is_leaf_hereditary_subtree, CanonicalCode, LabeledTree};
use bounds::{Bound, Bounds};
use report::{BoundValues, LevelStats, ShrinkReport, Verdict};

/// How many children per class survive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapPolicy {
    /// Cap `rho(h - 1, p, m)` at a node of height `h`; no oracle call.
    Certified,
    /// The same cap `k >= 1` everywhere; the result must pass the oracle.
    Fixed(usize),
    /// Smallest uniform cap whose result passes the oracle, searched up to
    /// `max_cap` (default: the largest child count, which keeps everything).
    Auto { max_cap: Option<usize> },
}

impl CapPolicy {
    pub fn auto() -> Self {
        CapPolicy::Auto { max_cap: None }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CapPolicy::Certified => "certified",
            CapPolicy::Fixed(_) => "fixed",
            CapPolicy::Auto { .. } => "auto",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ShrinkConfig {
    pub bounds: Bounds,
    pub limits: EfLimits,
}

#[derive(Clone, Debug)]
pub struct TreeKernel {
    pub tree: LabeledTree,
    pub report: ShrinkReport,
}

#[derive(Clone, Debug)]
pub struct GraphKernel {
    pub model: TreeModel,
    pub graph: Graph,
    pub report: ShrinkReport,
}

enum Classifier {
    Types {
        m: usize,
        types: TypeInterner,
        cache: HashMap<CanonicalCode, TypeId>,
    },
    Iso(HashMap<CanonicalCode, u32>),
}

impl Classifier {
    fn class(&mut self, code: &CanonicalCode, subtree: impl FnOnce() -> LabeledTree) -> Result<u32> {
        match self {
            Classifier::Types { m, types, cache } => {
                if let Some(&t) = cache.get(code) {
                    return Ok(t);
                }
                let t = types.type_of(&Structure::from_tree(&subtree()), *m)?;
                cache.insert(code.clone(), t);
                Ok(t)
            }
            Classifier::Iso(ids) => {
                let next = ids.len() as u32;
                Ok(*ids.entry(code.clone()).or_insert(next))
            }
        }
    }
}

enum CapRule {
    Uniform(usize),
    Certified { bounds: Bounds, p: u64, m: u64 },
}

impl CapRule {
    /// Cap for a group of `count` children of a node of height `h`.
    fn cap(&self, h: usize, count: usize) -> usize {
        match self {
            CapRule::Uniform(k) => *k,
            CapRule::Certified { bounds, p, m } => match bounds.rho(h.saturating_sub(1), *p, *m) {
                Bound::Exact(v) => v.to_usize().unwrap_or(usize::MAX).max(1),
                Bound::Overflow { .. } => count,
            },
        }
    }
}

struct Run<'a> {
    t: &'a LabeledTree,
    heights: Vec<usize>,
    depths: Vec<usize>,
    classifier: &'a mut Classifier,
    rule: CapRule,
    types_at_depth: BTreeMap<usize, BTreeSet<u32>>,
}

impl Run<'_> {
    /// Kept nodes of the subtree at `v` and the canonical code of the result.
    fn process(&mut self, v: usize) -> Result<(Vec<usize>, CanonicalCode)> {
        let t = self.t;
        if t.is_leaf(v) {
            return Ok((vec![v], vec![t.label(v) + 1, 0]));
        }
        struct Child {
            node: usize,
            kept: Vec<usize>,
            code: CanonicalCode,
            class: u32,
        }
        let mut kids = Vec::new();
        for &c in t.children(v) {
            let (kept, code) = self.process(c)?;
            let class = self.classifier.class(&code, || t.restrict_to(&kept))?;
            self.types_at_depth.entry(self.depths[c]).or_default().insert(class);
            kids.push(Child { node: c, kept, code, class });
        }
        let special = kids
            .iter()
            .min_by(|a, b| {
                (self.heights[b.node], &a.code, t.id(a.node)).cmp(&(self.heights[a.node], &b.code, t.id(b.node)))
            })
            .map(|c| c.node)
            .expect("internal node has children");
        let mut groups: BTreeMap<u32, Vec<&Child>> = BTreeMap::new();
        for k in &kids {
            groups.entry(k.class).or_default().push(k);
        }
        let mut kept = vec![v];
        let mut codes = Vec::new();
        for group in groups.values_mut() {
            group.sort_by(|a, b| (&a.code, t.id(a.node)).cmp(&(&b.code, t.id(b.node))));
            if let Some(pos) = group.iter().position(|c| c.node == special) {
                let s = group.remove(pos);
                group.insert(0, s);
            }
            let cap = self.rule.cap(self.heights[v], group.len());
            for c in group.iter().take(cap) {
                kept.extend_from_slice(&c.kept);
                codes.push(&c.code);
            }
        }
        codes.sort();
        let mut code = vec![t.label(v) + 1];
        for c in codes {
            code.extend_from_slice(c);
        }
        code.push(0);
        Ok((kept, code))
    }
}

fn run(t: &LabeledTree, classifier: &mut Classifier, rule: CapRule) -> Result<(LabeledTree, BTreeMap<usize, BTreeSet<u32>>)> {
    let mut r = Run {
        t,
        heights: t.subtree_heights(),
        depths: t.depths(),
        classifier,
        rule,
        types_at_depth: BTreeMap::new(),
    };
    let (kept, _) = r.process(t.root())?;
    let types = std::mem::take(&mut r.types_at_depth);
    Ok((t.restrict_to(&kept), types))
}

fn max_children(t: &LabeledTree) -> usize {
    (0..t.len()).map(|v| t.children(v).len()).max().unwrap_or(0).max(1)
}

/// Outcome of the cap search shared by trees and graphs.
struct Search {
    tree: LabeledTree,
    types: BTreeMap<usize, BTreeSet<u32>>,
    cap: String,
    verdict: Verdict,
    notes: Vec<String>,
}

fn search(
    t: &LabeledTree,
    policy: CapPolicy,
    mut classifier: Classifier,
    certified: CapRule,
    mut equivalent: impl FnMut(&LabeledTree) -> Result<bool>,
) -> Result<Search> {
    let unchanged = |tree: &LabeledTree| tree.len() == t.len();
    match policy {
        CapPolicy::Certified => {
            let (tree, types) = run(t, &mut classifier, certified)?;
            let mut notes = Vec::new();
            let verdict = if unchanged(&tree) {
                notes.push("certified cap is at least every child multiplicity; no shrinking possible under certification".into());
                Verdict::Unchanged
            } else {
                Verdict::NotChecked
            };
            Ok(Search {
                tree,
                types,
                cap: "rho(h-1, p, m) per node".into(),
                verdict,
                notes,
            })
        }
        CapPolicy::Fixed(k) => {
            if k == 0 {
                return Err(Error::Input("a fixed cap must be at least 1".into()));
            }
            let (tree, types) = run(t, &mut classifier, CapRule::Uniform(k))?;
            let verdict = if unchanged(&tree) {
                Verdict::Unchanged
            } else if equivalent(&tree)? {
                Verdict::Verified
            } else {
                return Err(Error::Semantic(format!(
                    "cap {k} does not preserve the equivalence class; try a larger cap"
                )));
            };
            Ok(Search {
                tree,
                types,
                cap: k.to_string(),
                verdict,
                notes: Vec::new(),
            })
        }
        CapPolicy::Auto { max_cap } => {
            let top = max_children(t);
            let limit = max_cap.unwrap_or(top).min(top);
            if limit == 0 {
                return Err(Error::Input("the cap search needs max_cap >= 1".into()));
            }
            let mut failed: HashSet<CanonicalCode> = HashSet::new();
            for k in 1..=limit {
                let (tree, types) = run(t, &mut classifier, CapRule::Uniform(k))?;
                let verdict = if unchanged(&tree) {
                    Verdict::Unchanged
                } else {
                    let code = tree.canonical_encode();
                    if failed.contains(&code) || !equivalent(&tree)? {
                        failed.insert(code);
                        continue;
                    }
                    Verdict::Verified
                };
                return Ok(Search {
                    tree,
                    types,
                    cap: k.to_string(),
                    verdict,
                    notes: Vec::new(),
                });
            }
            Err(Error::CapExhausted { largest_failing: limit })
        }
    }
}

fn level_stats(t: &LabeledTree, out: &LabeledTree, types: &BTreeMap<usize, BTreeSet<u32>>) -> Vec<LevelStats> {
    let count = |tree: &LabeledTree| {
        let mut c: BTreeMap<usize, usize> = BTreeMap::new();
        for d in tree.depths() {
            *c.entry(d).or_default() += 1;
        }
        c
    };
    let (cin, cout) = (count(t), count(out));
    cin.iter()
        .map(|(&depth, &n)| LevelStats {
            depth,
            nodes_in: n,
            nodes_out: cout.get(&depth).copied().unwrap_or(0),
            types: types.get(&depth).map_or(if depth == 0 { 1 } else { 0 }, BTreeSet::len),
        })
        .collect()
}

fn within(bound: &Bound, size: usize) -> Option<bool> {
    bound.exact().map(|b| BigUint::from(size) <= *b)
}

/// Kernel of a tree at rank `m` together with its report.
pub fn shrink_tree_report(t: &LabeledTree, m: usize, policy: CapPolicy, config: &ShrinkConfig) -> Result<TreeKernel> {
    let (d, p) = (t.height(), t.alphabet() as u64);
    let classifier = Classifier::Types {
        m,
        types: TypeInterner::with_limits(config.limits),
        cache: HashMap::new(),
    };
    let certified = CapRule::Certified {
        bounds: config.bounds,
        p,
        m: m as u64,
    };
    let source = Structure::from_tree(t);
    let s = search(t, policy, classifier, certified, |out| {
        ef_equivalent_with(&source, &Structure::from_tree(out), m, config.limits)
    })?;
    let zeta = config.bounds.zeta(d, p, m as u64, d);
    let bounds = BoundValues {
        within_bound: within(&zeta, s.tree.len()),
        zeta,
        rho: config.bounds.rho(d.saturating_sub(1), p, m as u64),
        graph_kernel_bound: None,
        graph_index_bound: None,
        constants_consistent: config.bounds.constants_consistent(),
    };
    let report = ShrinkReport {
        mode: policy.name().into(),
        m,
        tree_rank: m,
        cap: s.cap,
        input_nodes: t.len(),
        output_nodes: s.tree.len(),
        input_leaves: t.leaves().len(),
        output_leaves: s.tree.leaves().len(),
        input_edges: None,
        output_edges: None,
        levels: level_stats(t, &s.tree, &s.types),
        bounds,
        verdict: s.verdict,
        notes: s.notes,
    };
    Ok(TreeKernel { tree: s.tree, report })
}

/// A leaf-hereditary subtree of `t` with the same height and, in fixed and
/// auto modes, verified `≡_m` to `t`.
pub fn shrink_tree(t: &LabeledTree, m: usize, policy: CapPolicy) -> Result<LabeledTree> {
    Ok(shrink_tree_report(t, m, policy, &ShrinkConfig::default())?.tree)
}

/// Kernel of a tree-model graph at rank `m` together with its report.
pub fn shrink_graph_report(tm: &TreeModel, m: usize, policy: CapPolicy, config: &ShrinkConfig) -> Result<GraphKernel> {
    let g = interpret(tm)?;
    let (d, r) = (tm.d(), tm.r());
    let q = interpretation_rank(d);
    let certified = CapRule::Certified {
        bounds: config.bounds,
        p: r as u64 + 1,
        m: (m + q) as u64,
    };
    let source = Structure::from_graph_with_vocabulary(&g, r);
    let s = search(&tm.tree, policy, Classifier::Iso(HashMap::new()), certified, |out| {
        let h = interpret(&TreeModel::new(out.clone(), tm.sig.clone())?)?;
        ef_equivalent_with(&source, &Structure::from_graph_with_vocabulary(&h, r), m, config.limits)
    })?;
    let model = TreeModel::new(s.tree, tm.sig.clone())?;
    let h = interpret(&model)?;
    debug_assert_eq!(g.induced_subgraph(&h.vertex_set())?, h);

    let mut notes = s.notes;
    let (r64, m64) = (r as u64, m as u64);
    let kernel_bound = config.bounds.graph_kernel_bound(d, r64, m64);
    let index_bound = config.bounds.graph_index_bound(d, r64, m64);
    let mut within_bound = within(&kernel_bound, h.vertex_count());
    if d == 0 {
        notes.push("kernel bound is vacuous at d = 0 (h(0) = 0); height-0 models have one vertex".into());
        within_bound = None;
    }
    if r == 1 {
        notes.push("lg r = 0 for r = 1, so the index bound is vacuous".into());
    }
    notes.push(format!("tree shrunk at rank m + q(d) = {}; children grouped by isomorphism", m + q));
    let zeta = config.bounds.zeta(d, r64 + 1, (m + q) as u64, d);
    let bounds = BoundValues {
        within_bound,
        zeta,
        rho: config.bounds.rho(d.saturating_sub(1), r64 + 1, (m + q) as u64),
        graph_kernel_bound: Some(kernel_bound),
        graph_index_bound: Some(index_bound),
        constants_consistent: config.bounds.constants_consistent(),
    };
    let report = ShrinkReport {
        mode: policy.name().into(),
        m,
        tree_rank: m + q,
        cap: s.cap,
        input_nodes: tm.tree.len(),
        output_nodes: model.tree.len(),
        input_leaves: g.vertex_count(),
        output_leaves: h.vertex_count(),
        input_edges: Some(g.edge_count()),
        output_edges: Some(h.edge_count()),
        levels: level_stats(&tm.tree, &model.tree, &s.types),
        bounds,
        verdict: s.verdict,
        notes,
    };
    Ok(GraphKernel {
        model,
        graph: h,
        report,
    })
}

/// Shrunk tree model and its graph, an induced subgraph of the input graph.
pub fn shrink_graph(tm: &TreeModel, m: usize, policy: CapPolicy) -> Result<(TreeModel, Graph)> {
    let k = shrink_graph_report(tm, m, policy, &ShrinkConfig::default())?;
    Ok((k.model, k.graph))
}

/// `t2` is a leaf-hereditary subtree of `t`, has the same height, and is
/// `≡_m` to it.
pub fn verify_shrink(t: &LabeledTree, t2: &LabeledTree, m: usize) -> Result<bool> {
    Ok(is_leaf_hereditary_subtree(t2, t)
        && t.height() == t2.height()
        && ef_equivalent_with(&Structure::from_tree(t), &Structure::from_tree(t2), m, EfLimits::default())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Signature;
    use crate::tree::Label;

    fn star(labels: &[Label], alphabet: Label) -> LabeledTree {
        let mut parents = vec![None];
        parents.extend(std::iter::repeat(Some(0)).take(labels.len()));
        let mut ls = vec![alphabet];
        ls.extend_from_slice(labels);
        LabeledTree::from_parents(&parents, &ls, alphabet).unwrap()
    }

    #[test]
    fn identical_leaves_fixed_cap_one() {
        let t = star(&[1; 10], 1);
        let out = shrink_tree(&t, 1, CapPolicy::Fixed(1)).unwrap();
        assert_eq!(out.len(), 2);
        assert!(verify_shrink(&t, &out, 1).unwrap());
        // fixed point
        assert_eq!(shrink_tree(&out, 1, CapPolicy::Fixed(1)).unwrap(), out);
    }

    #[test]
    fn two_child_types_keep_one_each() {
        let t = star(&[1, 2, 1, 2, 2, 1], 3);
        let out = shrink_tree(&t, 1, CapPolicy::Fixed(1)).unwrap();
        let labels: BTreeSet<Label> = out.leaves().iter().map(|&v| out.label(v)).collect();
        assert_eq!(out.leaves().len(), 2);
        assert_eq!(labels, BTreeSet::from([1, 2]));
    }

    #[test]
    fn fixed_cap_that_breaks_equivalence_is_an_error() {
        let t = star(&[1; 5], 1);
        assert!(matches!(shrink_tree(&t, 2, CapPolicy::Fixed(1)), Err(Error::Semantic(_))));
        let out = shrink_tree(&t, 2, CapPolicy::auto()).unwrap();
        assert_eq!(out.leaves().len(), 2);
        assert!(matches!(
            shrink_tree(&t, 3, CapPolicy::Auto { max_cap: Some(1) }),
            Err(Error::CapExhausted { largest_failing: 1 })
        ));
    }

    #[test]
    fn certified_mode_keeps_everything_at_desk_scale() {
        let t = star(&[1; 6], 1);
        let k = shrink_tree_report(&t, 1, CapPolicy::Certified, &ShrinkConfig::default()).unwrap();
        assert_eq!(k.tree, t);
        assert_eq!(k.report.verdict, Verdict::Unchanged);
    }

    #[test]
    fn height_is_preserved() {
        // root -> a (leaf), b -> c (leaf); a and b share label and rank-0 type
        let t = LabeledTree::from_parents(&[None, Some(0), Some(0), Some(2)], &[1, 1, 1, 1], 1).unwrap();
        let out = shrink_tree(&t, 0, CapPolicy::Fixed(1)).unwrap();
        assert_eq!(out.height(), 2);
    }

    #[test]
    fn clique_kernel() {
        let mut parents = vec![None];
        parents.extend(std::iter::repeat(Some(0)).take(8));
        let mut labels = vec![2];
        labels.extend(std::iter::repeat(1).take(8));
        let tree = LabeledTree::from_parents(&parents, &labels, 2).unwrap();
        let tm = TreeModel::new(tree, Signature::new(1, 1, [(1, 1, 1)])).unwrap();
        let (_, h1) = shrink_graph(&tm, 1, CapPolicy::auto()).unwrap();
        assert_eq!(h1.vertex_count(), 1);
        let (_, h2) = shrink_graph(&tm, 2, CapPolicy::auto()).unwrap();
        assert_eq!(h2.vertex_count(), 2);
    }
}
