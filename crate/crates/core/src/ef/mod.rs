//! Deciding `≡_m` between finite structures, extracting distinguishing
//! sentences, and partitioning collections into `≡_m` classes.

pub mod game;
pub mod types;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::chi::{point_var, separating_literal, set_var, split_formula};
use crate::logic::formula::Formula;
use crate::structure::{Structure, Vocabulary};
use crate::tree::{CanonicalCode, LabeledTree};
use types::{TypeId, TypeInterner, TypeNode};

pub use game::game_equivalent;
pub use types::EfLimits;

/// `A ≡_m B`: the duplicator wins the `m`-round MSO game.
pub fn ef_equivalent(a: &Structure, b: &Structure, m: usize) -> Result<bool> {
    ef_equivalent_with(a, b, m, EfLimits::default())
}

pub fn ef_equivalent_with(a: &Structure, b: &Structure, m: usize, limits: EfLimits) -> Result<bool> {
    let mut types = TypeInterner::with_limits(limits);
    Ok(types.type_of(a, m)? == types.type_of(b, m)?)
}

/// A sentence of rank at most `m` true in `a` and false in `b`, or `None`
/// when `a ≡_m b`.
pub fn distinguish(a: &Structure, b: &Structure, m: usize) -> Result<Option<Formula>> {
    let mut types = TypeInterner::new();
    let (ta, tb) = (types.type_of(a, m)?, types.type_of(b, m)?);
    if ta == tb {
        return Ok(None);
    }
    let vocab = merge(a.vocabulary(), b.vocabulary());
    let mut d = Distinguisher {
        types: &types,
        vocab,
        memo: HashMap::new(),
    };
    Ok(Some(d.separate(ta, tb)))
}

fn merge(a: Vocabulary, b: Vocabulary) -> Vocabulary {
    Vocabulary {
        labels: a.labels.max(b.labels),
        root: a.root || b.root,
    }
}

struct Distinguisher<'a> {
    types: &'a TypeInterner,
    vocab: Vocabulary,
    memo: HashMap<(TypeId, TypeId), Formula>,
}

impl Distinguisher<'_> {
    /// A formula satisfied by tuples of type `a` and not by those of type `b`.
    fn separate(&mut self, a: TypeId, b: TypeId) -> Formula {
        debug_assert_ne!(a, b);
        if let Some(f) = self.memo.get(&(a, b)) {
            return f.clone();
        }
        let f = self.compute(a, b);
        self.memo.insert((a, b), f.clone());
        f
    }

    fn compute(&mut self, a: TypeId, b: TypeId) -> Formula {
        let (na, nb) = (self.types.node(a).clone(), self.types.node(b).clone());
        let (aa, ab) = (self.types.atomic(a), self.types.atomic(b));
        if aa != ab {
            return separating_literal(aa, ab).expect("distinct atomic types differ in a literal");
        }
        let (k, j) = (aa.points(), aa.sets);
        let (pa, pb) = (children(&na, false), children(&nb, false));
        if pa != pb {
            return self.quantified(pa, pb, &point_var(k), false);
        }
        match (&na, &nb) {
            (TypeNode::Rank2 { split: sa, .. }, TypeNode::Rank2 { split: sb, .. }) => {
                if let Some(&c) = sa.iter().find(|c| !sb.contains(c)) {
                    return split_formula(self.types.atomic(c), self.vocab);
                }
                let c = *sb.iter().find(|c| !sa.contains(c)).expect("rank-2 types differ");
                Formula::not(split_formula(self.types.atomic(c), self.vocab))
            }
            _ => {
                let (sa, sb) = (children(&na, true), children(&nb, true));
                self.quantified(sa, sb, &set_var(j), true)
            }
        }
    }

    /// Separates two types whose extension sets `ea != eb` differ.
    fn quantified(&mut self, ea: &[TypeId], eb: &[TypeId], var: &str, set: bool) -> Formula {
        if let Some(&t) = ea.iter().find(|t| !eb.contains(t)) {
            let body = Formula::and(eb.iter().map(|&s| self.separate(t, s)).collect());
            return if set {
                Formula::exists_set(var, body)
            } else {
                Formula::exists(var, body)
            };
        }
        let s = *eb.iter().find(|s| !ea.contains(s)).expect("extension sets differ");
        let body = Formula::or(ea.iter().map(|&t| self.separate(t, s)).collect());
        if set {
            Formula::forall_set(var, body)
        } else {
            Formula::forall(var, body)
        }
    }
}

fn children(node: &TypeNode, sets: bool) -> &[TypeId] {
    match (node, sets) {
        (TypeNode::Atomic(_), _) => &[],
        (TypeNode::Rank1 { points, .. } | TypeNode::Rank2 { points, .. } | TypeNode::Full { points, .. }, false) => points,
        (TypeNode::Full { sets, .. }, true) => sets,
        (_, true) => &[],
    }
}

/// Partition of a list of structures into `≡_m` classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypePartition {
    pub m: usize,
    /// Class of every member, numbered `0..class_count()`.
    pub classes: Vec<usize>,
}

impl TypePartition {
    pub fn class_count(&self) -> usize {
        self.classes.iter().map(|&c| c + 1).max().unwrap_or(0)
    }

    /// Members of every class, in class order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (i, &c) in self.classes.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// Multiplicity of every class (the type indicator of the family).
    pub fn indicator(&self) -> Vec<usize> {
        self.members().iter().map(Vec::len).collect()
    }
}

fn with_offender<T>(r: Result<T>, i: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Resource(msg) => Error::Resource(format!("structure #{i}: {msg}")),
        e => e,
    })
}

/// Partitions general structures; classes are numbered by first occurrence.
pub fn type_partition(structures: &[Structure], m: usize) -> Result<TypePartition> {
    let mut types = TypeInterner::new();
    let mut dense: HashMap<TypeId, usize> = HashMap::new();
    let mut classes = Vec::with_capacity(structures.len());
    for (i, s) in structures.iter().enumerate() {
        let t = with_offender(types.type_of(s, m), i)?;
        let next = dense.len();
        classes.push(*dense.entry(t).or_insert(next));
    }
    Ok(TypePartition { m, classes })
}

/// Partitions trees. Isomorphic trees are bucketed by canonical code first,
/// and classes are numbered by the smallest canonical code they contain.
pub fn type_partition_trees(trees: &[LabeledTree], m: usize) -> Result<TypePartition> {
    let mut buckets: BTreeMap<CanonicalCode, Vec<usize>> = BTreeMap::new();
    for (i, t) in trees.iter().enumerate() {
        buckets.entry(t.canonical_encode()).or_default().push(i);
    }
    let mut types = TypeInterner::new();
    let mut dense: HashMap<TypeId, usize> = HashMap::new();
    let mut classes = vec![0; trees.len()];
    for members in buckets.values() {
        let s = Structure::from_tree(&trees[members[0]]);
        let t = with_offender(types.type_of(&s, m), members[0])?;
        let next = dense.len();
        let c = *dense.entry(t).or_insert(next);
        for &i in members {
            classes[i] = c;
        }
    }
    Ok(TypePartition { m, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::logic::eval::holds;

    fn star(leaves: usize) -> LabeledTree {
        let mut parents = vec![None];
        parents.extend(std::iter::repeat(Some(0)).take(leaves));
        LabeledTree::from_parents(&parents, &vec![1; leaves + 1], 1).unwrap()
    }

    #[test]
    fn examples() {
        let s2 = Structure::from_tree(&star(2));
        let s3 = Structure::from_tree(&star(3));
        assert!(ef_equivalent(&s2, &s2, 3).unwrap());
        assert!(ef_equivalent(&s2, &s3, 1).unwrap());
        let one = Structure::from_tree(&LabeledTree::single(1, 2).unwrap());
        let two = Structure::from_tree(&LabeledTree::single(2, 2).unwrap());
        assert!(ef_equivalent(&one, &two, 0).unwrap());
        assert!(!ef_equivalent(&one, &two, 1).unwrap());
    }

    #[test]
    fn distinguishing_sentences() {
        let k2 = Structure::from_graph(&Graph::complete(2));
        let e2 = Structure::from_graph(&Graph::with_vertices(2));
        let f = distinguish(&k2, &e2, 2).unwrap().unwrap();
        assert!(f.rank() <= 2);
        assert!(holds(&k2, &f).unwrap() && !holds(&e2, &f).unwrap());
        assert_eq!(distinguish(&k2, &k2, 2).unwrap(), None);
        let k3 = Structure::from_graph(&Graph::complete(3));
        let g = distinguish(&k3, &k2, 3).unwrap().unwrap();
        assert!(holds(&k3, &g).unwrap() && !holds(&k2, &g).unwrap());
    }

    #[test]
    fn partitions() {
        let singles: Vec<LabeledTree> = (1..=3).map(|l| LabeledTree::single(l, 3).unwrap()).collect();
        assert_eq!(type_partition_trees(&singles, 1).unwrap().class_count(), 3);
        let stars: Vec<LabeledTree> = (1..=4).map(star).collect();
        let p = type_partition_trees(&stars, 1).unwrap();
        assert_eq!(p.classes, vec![0, 0, 0, 0]);
        let p2 = type_partition_trees(&stars, 2).unwrap();
        assert_eq!(p2.classes, vec![0, 1, 1, 1]);
        let s: Vec<Structure> = stars.iter().map(Structure::from_tree).collect();
        assert_eq!(type_partition(&s, 2).unwrap(), p2);
    }
}
