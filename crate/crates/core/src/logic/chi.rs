//! Characteristic (Hintikka) sentences read off the type DAG.
//!
//! Point `i` of a tuple is named `x{i+1}` and set `j` is named `X{j+1}`.

use std::collections::HashMap;

use super::formula::Formula;
use crate::ef::types::{Atomic, TypeId, TypeInterner, TypeNode};
use crate::error::{Error, Result};
use crate::structure::{Structure, Vocabulary};

/// Default limit on the size (syntax-tree nodes) of a characteristic sentence.
pub const DEFAULT_CHI_BUDGET: u64 = 10_000_000;

pub fn point_var(i: usize) -> String {
    format!("x{}", i + 1)
}

pub fn set_var(j: usize) -> String {
    format!("X{}", j + 1)
}

/// Literals describing an atomic type completely (for structures in which
/// every element carries at most one label).
pub fn atomic_literals(at: &Atomic, vocab: Vocabulary) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 0..at.points() {
        let x = point_var(i);
        if at.labels[i] > 0 {
            out.push(Formula::label(at.labels[i], &x));
        } else {
            out.extend((1..=vocab.labels).map(|l| Formula::not(Formula::label(l, &x))));
        }
        if vocab.root {
            out.push(literal(at.roots[i], Formula::root(&x)));
        }
        for s in 0..at.sets {
            out.push(literal(at.members[i] >> s & 1 == 1, Formula::member(&x, set_var(s))));
        }
    }
    for j in 0..at.points() {
        for i in 0..j {
            let eq = at.equal(i, j);
            out.push(literal(eq, Formula::eq(point_var(i), point_var(j))));
            if !eq {
                out.push(literal(at.edge(i, j), Formula::edge(point_var(i), point_var(j))));
            }
        }
    }
    out
}

fn literal(positive: bool, f: Formula) -> Formula {
    if positive {
        f
    } else {
        Formula::not(f)
    }
}

/// A literal true of `a` and false of `b` (same numbers of points and sets).
pub fn separating_literal(a: &Atomic, b: &Atomic) -> Option<Formula> {
    for i in 0..a.points() {
        let x = point_var(i);
        if a.labels[i] != b.labels[i] {
            return Some(if a.labels[i] > 0 {
                Formula::label(a.labels[i], &x)
            } else {
                Formula::not(Formula::label(b.labels[i], &x))
            });
        }
        if a.roots[i] != b.roots[i] {
            return Some(literal(a.roots[i], Formula::root(&x)));
        }
        let diff = a.members[i] ^ b.members[i];
        if diff != 0 {
            let s = diff.trailing_zeros() as usize;
            return Some(literal(a.members[i] >> s & 1 == 1, Formula::member(&x, set_var(s))));
        }
    }
    for j in 0..a.points() {
        for i in 0..j {
            if a.equal(i, j) != b.equal(i, j) {
                return Some(literal(a.equal(i, j), Formula::eq(point_var(i), point_var(j))));
            }
            if a.edge(i, j) != b.edge(i, j) {
                return Some(literal(a.edge(i, j), Formula::edge(point_var(i), point_var(j))));
            }
        }
    }
    None
}

/// `∃X (∃x (x ∈ X ∧ γ(x)) ∧ ∃x (x ∉ X ∧ γ(x)))`: the fresh class `c`
/// (an atomic type over `k + 1` points and `j` sets) has two members.
pub fn split_formula(c: &Atomic, vocab: Vocabulary) -> Formula {
    let (k, j) = (c.points() - 1, c.sets);
    let gamma = Formula::and(atomic_literals(c, vocab));
    let (x, set) = (point_var(k), set_var(j));
    let side = |inside: bool| {
        let mut parts = vec![literal(inside, Formula::member(&x, &set))];
        parts.push(gamma.clone());
        Formula::exists(&x, Formula::and(parts))
    };
    Formula::exists_set(&set, Formula::and(vec![side(true), side(false)]))
}

struct Builder<'a> {
    types: &'a TypeInterner,
    vocab: Vocabulary,
    memo: HashMap<TypeId, Formula>,
    sizes: HashMap<TypeId, u64>,
}

impl Builder<'_> {
    fn size(&mut self, t: TypeId) -> u64 {
        if let Some(&s) = self.sizes.get(&t) {
            return s;
        }
        let s = match self.types.node(t).clone() {
            TypeNode::Atomic(at) => 1 + atomic_literals(&at, self.vocab).iter().map(|f| f.size() as u64).sum::<u64>(),
            TypeNode::Rank1 { atomic, points } => {
                let pts = self.sum(&points);
                self.size(atomic).saturating_add(pts.saturating_mul(2)).saturating_add(6)
            }
            TypeNode::Rank2 { atomic, points, .. } => {
                let pts = self.sum(&points);
                let split_size: u64 = self
                    .fresh_classes(&points)
                    .into_iter()
                    .map(|c| split_formula(self.types.atomic(c), self.vocab).size() as u64 + 1)
                    .sum();
                self.size(atomic)
                    .saturating_add(pts.saturating_mul(2))
                    .saturating_add(split_size)
                    .saturating_add(6)
            }
            TypeNode::Full { atomic, points, sets, .. } => {
                let pts = self.sum(&points);
                let sts = self.sum(&sets);
                self.size(atomic)
                    .saturating_add(pts.saturating_mul(2))
                    .saturating_add(sts.saturating_mul(2))
                    .saturating_add(12)
            }
        };
        self.sizes.insert(t, s);
        s
    }

    fn sum(&mut self, ts: &[TypeId]) -> u64 {
        ts.iter().fold(0u64, |acc, &t| acc.saturating_add(self.size(t) + 1))
    }

    /// Atomic types of fresh one-point extensions among rank-1 types.
    fn fresh_classes(&self, points: &[TypeId]) -> Vec<TypeId> {
        let mut out: Vec<TypeId> = points
            .iter()
            .filter_map(|&p| match self.types.node(p) {
                TypeNode::Rank1 { atomic, .. } if self.types.atomic(*atomic).last_is_fresh() => Some(*atomic),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn build(&mut self, t: TypeId) -> Formula {
        if let Some(f) = self.memo.get(&t) {
            return f.clone();
        }
        let node = self.types.node(t).clone();
        let f = match node {
            TypeNode::Atomic(at) => Formula::and(atomic_literals(&at, self.vocab)),
            TypeNode::Rank1 { atomic, points } | TypeNode::Rank2 { atomic, points, .. } | TypeNode::Full { atomic, points, .. } => {
                let at = self.types.atomic(atomic).clone();
                let (k, j) = (at.points(), at.sets);
                let mut parts = vec![self.build(atomic)];
                self.quantified_parts(&points, &point_var(k), false, &mut parts);
                match self.types.node(t).clone() {
                    TypeNode::Rank2 { split, .. } => {
                        for c in self.fresh_classes(&points) {
                            let f = split_formula(self.types.atomic(c), self.vocab);
                            parts.push(literal(split.contains(&c), f));
                        }
                    }
                    TypeNode::Full { sets, .. } => self.quantified_parts(&sets, &set_var(j), true, &mut parts),
                    _ => {}
                }
                Formula::and(parts)
            }
        };
        self.memo.insert(t, f.clone());
        f
    }

    /// `⋀_t ∃v χ_t ∧ ∀v ⋁_t χ_t`.
    fn quantified_parts(&mut self, ts: &[TypeId], var: &str, set: bool, parts: &mut Vec<Formula>) {
        let chis: Vec<Formula> = ts.iter().map(|&c| self.build(c)).collect();
        for c in &chis {
            parts.push(if set {
                Formula::exists_set(var, c.clone())
            } else {
                Formula::exists(var, c.clone())
            });
        }
        let any = Formula::or(chis);
        parts.push(if set {
            Formula::forall_set(var, any)
        } else {
            Formula::forall(var, any)
        });
    }
}

/// Builds the formula characterizing type `t`, failing when its estimated
/// size exceeds `budget`.
pub fn type_formula(types: &TypeInterner, t: TypeId, vocab: Vocabulary, budget: u64) -> Result<Formula> {
    let mut b = Builder {
        types,
        vocab,
        memo: HashMap::new(),
        sizes: HashMap::new(),
    };
    let estimate = b.size(t);
    if estimate > budget {
        return Err(Error::Resource(format!(
            "characteristic sentence would have about {estimate} nodes (budget {budget})"
        )));
    }
    Ok(b.build(t))
}

/// A rank-`m` sentence true exactly in the structures `≡_m`-equivalent
/// to `a` (over the same vocabulary).
pub fn characteristic_sentence(a: &Structure, m: usize) -> Result<Formula> {
    characteristic_sentence_with_budget(a, m, DEFAULT_CHI_BUDGET)
}

pub fn characteristic_sentence_with_budget(a: &Structure, m: usize, budget: u64) -> Result<Formula> {
    let mut types = TypeInterner::new();
    let t = types.type_of(a, m)?;
    type_formula(&types, t, a.vocabulary(), budget)
}
