//! The interpretation of a graph in its tree model: vertices are the
//! leaves, and two leaves with labels `i`, `j` at distance `2l` are adjacent
//! iff `(i, j, l)` is in the signature.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::logic::formula::Formula;
use crate::model::{validate_tree_model, Signature, TreeModel};

/// Rank budget of the edge formula at height `d`. The implemented formula
/// uses `max(0, 2d - 1)` quantifiers, and relativizing a set quantifier
/// adds one more, so `2d + 1` covers every translation.
pub fn interpretation_rank(d: usize) -> usize {
    2 * d + 1
}

/// Constant `c1` with `interpretation_rank(d) <= c1 * d` for `d >= 1`.
pub const C1: usize = 3;

/// The graph of a valid tree model. Vertex ids are leaf ids.
pub fn interpret(tm: &TreeModel) -> Result<Graph> {
    let report = validate_tree_model(tm);
    if !report.is_valid() {
        return Err(Error::InvalidModel(report));
    }
    let t = &tm.tree;
    let leaves = t.leaves();
    let mut g = Graph::new();
    for &v in &leaves {
        g.add_vertex(t.id(v), Some(t.label(v)));
    }
    // distances via ancestor chains; all leaves sit at depth d
    let chains: Vec<Vec<usize>> = leaves
        .iter()
        .map(|&v| {
            let mut chain = vec![v];
            while let Some(p) = t.parent(*chain.last().unwrap()) {
                chain.push(p);
            }
            chain
        })
        .collect();
    for a in 0..leaves.len() {
        for b in a + 1..leaves.len() {
            let l = (1..chains[a].len()).find(|&l| chains[a][l] == chains[b][l]).unwrap_or(0);
            let (u, v) = (leaves[a], leaves[b]);
            if l > 0 && tm.sig.contains(t.label(u), t.label(v), l) {
                g.add_edge(t.id(u), t.id(v))?;
            }
        }
    }
    Ok(g)
}

/// The formulas `ξ_V` and `ξ_E` for a signature.
#[derive(Clone, Debug)]
pub struct Interpretation {
    pub sig: Signature,
    /// Rank budget `q`; defaults to [`interpretation_rank`]`(d)`.
    pub rank_budget: usize,
    prefix: String,
}

impl Interpretation {
    pub fn new(sig: Signature) -> Self {
        let rank_budget = interpretation_rank(sig.d());
        Interpretation {
            sig,
            rank_budget,
            prefix: "z".into(),
        }
    }

    /// `ξ_V(x)`: `x` is a leaf, i.e. does not carry the internal label.
    pub fn vertex(&self, x: &str) -> Formula {
        Formula::not(Formula::label(self.sig.r() + 1, x))
    }

    /// `ξ_E(x, y)`.
    pub fn edge(&self, x: &str, y: &str) -> Formula {
        let mut by_level = Vec::new();
        for l in 1..=self.sig.d() {
            let pairs: Vec<Formula> = self
                .sig
                .triples()
                .into_iter()
                .filter(|t| t.2 == l)
                .map(|(i, j, _)| Formula::and(vec![Formula::label(i, x), Formula::label(j, y)]))
                .collect();
            if !pairs.is_empty() {
                by_level.push(Formula::and(vec![Formula::or(pairs), self.walk(x, y, 2 * l)]));
            }
        }
        if by_level.is_empty() {
            return Formula::False;
        }
        Formula::and(vec![
            self.vertex(x),
            self.vertex(y),
            Formula::not(Formula::eq(x, y)),
            Formula::or(by_level),
        ])
    }

    /// A non-backtracking walk of `len >= 2` steps from `x` to `y`; in a
    /// tree that is a path, so this says `dist(x, y) = len`.
    fn walk(&self, x: &str, y: &str, len: usize) -> Formula {
        let z = |i: usize| -> String {
            match i {
                0 => x.to_string(),
                i if i == len => y.to_string(),
                i => format!("{}{i}", self.prefix),
            }
        };
        // innermost: last step into y
        let mut body = Formula::and(vec![Formula::edge(z(len - 1), z(len)), Formula::not(Formula::eq(z(len), z(len - 2)))]);
        for i in (1..len).rev() {
            let mut step = vec![Formula::edge(z(i - 1), z(i))];
            if i >= 2 {
                step.push(Formula::not(Formula::eq(z(i), z(i - 2))));
            }
            step.push(body);
            body = Formula::exists(z(i), Formula::and(step));
        }
        body
    }

    /// Translates a graph sentence or formula to the tree vocabulary.
    pub fn translate(&self, phi: &Formula) -> Result<Formula> {
        let names = phi.var_names();
        let mut me = self.clone();
        while names.iter().any(|v| v.starts_with(&me.prefix)) {
            me.prefix.push('z');
        }
        let guard = format!("{}0", me.prefix);
        let out = me.go(phi, &guard)?;
        assert!(
            out.rank() <= phi.rank() + self.rank_budget,
            "translation rank {} exceeds {} + {}",
            out.rank(),
            phi.rank(),
            self.rank_budget
        );
        Ok(out)
    }

    fn go(&self, f: &Formula, guard: &str) -> Result<Formula> {
        Ok(match f {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::In(..) => f.clone(),
            Formula::Label(l, _) if *l > self.sig.r() => {
                return Err(Error::Vocabulary(format!("P {l} (graph labels are 1..={})", self.sig.r())))
            }
            Formula::Label(..) => f.clone(),
            Formula::Root(_) => return Err(Error::Vocabulary("root".into())),
            Formula::Edge(x, y) => self.edge(x, y),
            Formula::Not(g) => Formula::Not(Box::new(self.go(g, guard)?)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.go(g, guard)).collect::<Result<_>>()?),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.go(g, guard)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Formula::implies(self.go(a, guard)?, self.go(b, guard)?),
            Formula::Exists(x, g) => Formula::exists(x, Formula::And(vec![self.vertex(x), self.go(g, guard)?])),
            Formula::Forall(x, g) => Formula::forall(x, Formula::implies(self.vertex(x), self.go(g, guard)?)),
            Formula::ExistsSet(s, g) => Formula::exists_set(s, Formula::And(vec![self.only_leaves(s, guard), self.go(g, guard)?])),
            Formula::ForallSet(s, g) => Formula::forall_set(s, Formula::implies(self.only_leaves(s, guard), self.go(g, guard)?)),
        })
    }

    /// `∀y (y ∈ S → ξ_V(y))`.
    fn only_leaves(&self, set: &str, y: &str) -> Formula {
        Formula::forall(y, Formula::implies(Formula::member(y, set), self.vertex(y)))
    }
}

/// `Ξ_S(φ)`: quantifiers relativized to leaves and sets of leaves, edges
/// replaced by `ξ_E`. Fails on symbols outside the graph vocabulary.
pub fn translate_formula(phi: &Formula, sig: &Signature, d: usize) -> Result<Formula> {
    if d != sig.d() {
        return Err(Error::Input(format!("height {d} does not match the signature's {}", sig.d())));
    }
    Interpretation::new(sig.clone()).translate(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::eval::holds;
    use crate::logic::parse::parse_formula;
    use crate::structure::Structure;
    use crate::tree::LabeledTree;

    fn kn_model(n: usize) -> TreeModel {
        let mut parents = vec![None];
        parents.extend(std::iter::repeat(Some(0)).take(n));
        let mut labels = vec![2];
        labels.extend(std::iter::repeat(1).take(n));
        let t = LabeledTree::from_parents(&parents, &labels, 2).unwrap();
        TreeModel::new(t, Signature::new(1, 1, [(1, 1, 1)])).unwrap()
    }

    #[test]
    fn complete_graph() {
        let g = interpret(&kn_model(4)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 6));
    }

    #[test]
    fn star_example() {
        let t = LabeledTree::from_parents(&[None, Some(0), Some(0), Some(0)], &[3, 1, 2, 2], 3).unwrap();
        let tm = TreeModel::new(t, Signature::new(2, 1, [(1, 2, 1)])).unwrap();
        let g = interpret(&tm).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(1, 2), (1, 3)]);
    }

    #[test]
    fn ranks() {
        assert_eq!((0..3).map(interpretation_rank).collect::<Vec<_>>(), vec![1, 3, 5]);
        let sig = Signature::new(1, 2, [(1, 1, 1), (1, 1, 2)]);
        let e = Interpretation::new(sig).edge("x", "y");
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn transfer_on_cliques() {
        let phi = parse_formula("(exists x (exists y (E x y)))").unwrap();
        for n in 1..4 {
            let tm = kn_model(n);
            let psi = translate_formula(&phi, &tm.sig, 1).unwrap();
            let tree_side = holds(&Structure::from_tree(&tm.tree), &psi).unwrap();
            assert_eq!(tree_side, n >= 2);
        }
    }

    #[test]
    fn root_is_rejected() {
        let phi = parse_formula("(exists x (root x))").unwrap();
        assert!(matches!(translate_formula(&phi, &Signature::empty(1, 1), 1), Err(Error::Vocabulary(_))));
    }

    #[test]
    fn invalid_model_carries_report() {
        let t = LabeledTree::from_parents(&[None, Some(0)], &[1, 1], 2).unwrap();
        let tm = TreeModel::new(t, Signature::empty(1, 1)).unwrap();
        assert!(matches!(interpret(&tm), Err(Error::InvalidModel(_))));
    }
}
