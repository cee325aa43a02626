//! Brute-force MSO model checking.
//!
//! Point quantifiers range over the universe; set quantifiers range over all
//! subsets, visited by increasing size and then in lexicographic order.
//! A set quantifier whose body starts with a guard
//! `∀y (y ∈ X → θ(y))` (conjunct of `∃X`, antecedent of `∀X`) only ranges
//! over subsets of `{a : θ(a)}`; the guard is then dropped from the body.

use std::collections::HashMap;

use super::formula::Formula;
use crate::error::{Error, Result};
use crate::structure::Structure;
use crate::tree::Label;

/// Largest universe over which set quantifiers are enumerated.
pub const MAX_SET_UNIVERSE: usize = 63;

/// Values for free variables: points by universe index, sets as bitmasks
/// over universe indices.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    pub points: HashMap<String, usize>,
    pub sets: HashMap<String, u64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(mut self, name: &str, a: usize) -> Self {
        self.points.insert(name.to_string(), a);
        self
    }

    pub fn set(mut self, name: &str, mask: u64) -> Self {
        self.sets.insert(name.to_string(), mask);
        self
    }
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Eq(usize, usize),
    Edge(usize, usize),
    Label(Label, usize),
    Root(usize),
    In(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
    ExistsSet(usize, Option<Guard>, Box<Node>),
    ForallSet(usize, Option<Guard>, Box<Node>),
}

/// Elements allowed in a guarded set: `cond` evaluated with the point slot
/// bound to each element.
#[derive(Clone, Debug)]
struct Guard {
    slot: usize,
    cond: Box<Node>,
}

/// A formula with variables resolved to environment slots.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: Node,
    free_points: Vec<(String, usize)>,
    free_sets: Vec<(String, usize)>,
    point_slots: usize,
    set_slots: usize,
}

#[derive(Default)]
struct Scope {
    points: Vec<String>,
    sets: Vec<String>,
    max_points: usize,
    max_sets: usize,
}

impl Scope {
    fn point(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .rposition(|v| v == name)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    fn set(&self, name: &str) -> Result<usize> {
        self.sets
            .iter()
            .rposition(|v| v == name)
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    }

    fn push_point(&mut self, name: &str) -> usize {
        self.points.push(name.to_string());
        self.max_points = self.max_points.max(self.points.len());
        self.points.len() - 1
    }

    fn push_set(&mut self, name: &str) -> usize {
        self.sets.push(name.to_string());
        self.max_sets = self.max_sets.max(self.sets.len());
        self.sets.len() - 1
    }
}

impl Compiled {
    /// Compiles `f`; its free variables must be among `free_points` and
    /// `free_sets`.
    pub fn new(f: &Formula, free_points: &[&str], free_sets: &[&str]) -> Result<Self> {
        let mut scope = Scope::default();
        let fp: Vec<(String, usize)> = free_points.iter().map(|v| (v.to_string(), scope.push_point(v))).collect();
        let fs: Vec<(String, usize)> = free_sets.iter().map(|v| (v.to_string(), scope.push_set(v))).collect();
        let root = compile(f, &mut scope)?;
        Ok(Compiled {
            root,
            free_points: fp,
            free_sets: fs,
            point_slots: scope.max_points,
            set_slots: scope.max_sets,
        })
    }

    /// Compiles a formula, taking the free variables from the formula itself.
    pub fn for_formula(f: &Formula) -> Result<Self> {
        let free = f.free_vars();
        let points: Vec<&str> = free.iter().filter(|v| super::formula::is_point_var(v)).map(String::as_str).collect();
        let sets: Vec<&str> = free.iter().filter(|v| super::formula::is_set_var(v)).map(String::as_str).collect();
        Self::new(f, &points, &sets)
    }

    pub fn eval(&self, a: &Structure, env: &Assignment) -> Result<bool> {
        let mut points = vec![0usize; self.point_slots];
        let mut sets = vec![0u64; self.set_slots];
        for (name, slot) in &self.free_points {
            let v = *env.points.get(name).ok_or_else(|| Error::UnboundVariable(name.clone()))?;
            if v >= a.len() {
                return Err(Error::Input(format!("`{name}` is bound to {v}, outside the universe")));
            }
            points[*slot] = v;
        }
        for (name, slot) in &self.free_sets {
            sets[*slot] = *env.sets.get(name).ok_or_else(|| Error::UnboundVariable(name.clone()))?;
        }
        let mut ev = Eval {
            a,
            points,
            sets,
            depth_p: self.free_points.len(),
            depth_s: self.free_sets.len(),
        };
        ev.run(&self.root)
    }

    pub fn eval_sentence(&self, a: &Structure) -> Result<bool> {
        self.eval(a, &Assignment::default())
    }
}

fn compile(f: &Formula, scope: &mut Scope) -> Result<Node> {
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Eq(x, y) => Node::Eq(scope.point(x)?, scope.point(y)?),
        Formula::Edge(x, y) => Node::Edge(scope.point(x)?, scope.point(y)?),
        Formula::Label(l, x) => Node::Label(*l, scope.point(x)?),
        Formula::Root(x) => Node::Root(scope.point(x)?),
        Formula::In(x, s) => Node::In(scope.point(x)?, scope.set(s)?),
        Formula::Not(g) => Node::Not(Box::new(compile(g, scope)?)),
        Formula::And(gs) => Node::And(gs.iter().map(|g| compile(g, scope)).collect::<Result<_>>()?),
        Formula::Or(gs) => Node::Or(gs.iter().map(|g| compile(g, scope)).collect::<Result<_>>()?),
        Formula::Implies(a, b) => Node::Implies(Box::new(compile(a, scope)?), Box::new(compile(b, scope)?)),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let slot = scope.push_point(v);
            let body = compile(g, scope);
            scope.points.pop();
            let body = Box::new(body?);
            if matches!(f, Formula::Exists(..)) {
                Node::Exists(slot, body)
            } else {
                Node::Forall(slot, body)
            }
        }
        Formula::ExistsSet(v, g) => {
            let slot = scope.push_set(v);
            let out = match g.as_ref() {
                Formula::And(parts) if parts.len() >= 2 && guard_of(&parts[0], v).is_some() => {
                    let guard = compile_guard(&parts[0], v, scope);
                    let rest = Formula::and(parts[1..].to_vec());
                    compile(&rest, scope).and_then(|b| Ok(Node::ExistsSet(slot, Some(guard?), Box::new(b))))
                }
                _ => compile(g, scope).map(|b| Node::ExistsSet(slot, None, Box::new(b))),
            };
            scope.sets.pop();
            out?
        }
        Formula::ForallSet(v, g) => {
            let slot = scope.push_set(v);
            let out = match g.as_ref() {
                Formula::Implies(ante, cons) if guard_of(ante, v).is_some() => {
                    let guard = compile_guard(ante, v, scope);
                    compile(cons, scope).and_then(|b| Ok(Node::ForallSet(slot, Some(guard?), Box::new(b))))
                }
                _ => compile(g, scope).map(|b| Node::ForallSet(slot, None, Box::new(b))),
            };
            scope.sets.pop();
            out?
        }
    })
}

/// Recognizes `∀y (y ∈ set → θ)` where `θ` does not mention `set`.
fn guard_of<'a>(f: &'a Formula, set: &str) -> Option<(&'a str, &'a Formula)> {
    let Formula::Forall(y, body) = f else { return None };
    let Formula::Implies(ante, cond) = body.as_ref() else {
        return None;
    };
    match ante.as_ref() {
        Formula::In(p, s) if p == y && s == set && !cond.var_names().contains(set) => Some((y, cond)),
        _ => None,
    }
}

fn compile_guard(f: &Formula, set: &str, scope: &mut Scope) -> Result<Guard> {
    let (y, cond) = guard_of(f, set).expect("checked by caller");
    let slot = scope.push_point(y);
    let cond = compile(cond, scope);
    scope.points.pop();
    Ok(Guard {
        slot,
        cond: Box::new(cond?),
    })
}

struct Eval<'a> {
    a: &'a Structure,
    points: Vec<usize>,
    sets: Vec<u64>,
    depth_p: usize,
    depth_s: usize,
}

impl Eval<'_> {
    fn run(&mut self, n: &Node) -> Result<bool> {
        Ok(match n {
            Node::Const(b) => *b,
            Node::Eq(x, y) => self.points[*x] == self.points[*y],
            Node::Edge(x, y) => self.a.edge(self.points[*x], self.points[*y]),
            Node::Label(l, x) => self.a.has_label(self.points[*x], *l),
            Node::Root(x) => self.a.is_root(self.points[*x]),
            Node::In(x, s) => self.sets[*s] >> self.points[*x] & 1 == 1,
            Node::Not(g) => !self.run(g)?,
            Node::And(gs) => {
                for g in gs {
                    if !self.run(g)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(gs) => {
                for g in gs {
                    if self.run(g)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Implies(a, b) => !self.run(a)? || self.run(b)?,
            Node::Exists(slot, g) => self.quantify_point(*slot, g, true)?,
            Node::Forall(slot, g) => self.quantify_point(*slot, g, false)?,
            Node::ExistsSet(slot, guard, g) => self.quantify_set(*slot, guard.as_ref(), g, true)?,
            Node::ForallSet(slot, guard, g) => self.quantify_set(*slot, guard.as_ref(), g, false)?,
        })
    }

    fn quantify_point(&mut self, slot: usize, body: &Node, exists: bool) -> Result<bool> {
        let saved = self.points[slot];
        let mut result = !exists;
        for a in 0..self.a.len() {
            self.points[slot] = a;
            if self.run(body)? == exists {
                result = exists;
                break;
            }
        }
        self.points[slot] = saved;
        let _ = self.depth_p;
        Ok(result)
    }

    fn quantify_set(&mut self, slot: usize, guard: Option<&Guard>, body: &Node, exists: bool) -> Result<bool> {
        let n = self.a.len();
        let mut allowed: u64 = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        if let Some(g) = guard {
            let saved = self.points[g.slot];
            allowed = 0;
            for a in 0..n {
                self.points[g.slot] = a;
                if self.run(&g.cond)? {
                    allowed |= 1 << a;
                }
            }
            self.points[g.slot] = saved;
        }
        if allowed.count_ones() as usize > MAX_SET_UNIVERSE || (guard.is_none() && n > MAX_SET_UNIVERSE) {
            return Err(Error::Resource(format!(
                "set quantification over {} elements (limit {MAX_SET_UNIVERSE})",
                allowed.count_ones().max(n as u32)
            )));
        }
        let saved = self.sets[slot];
        let mut result = !exists;
        for s in subsets_by_size(allowed) {
            self.sets[slot] = s;
            if self.run(body)? == exists {
                result = exists;
                break;
            }
        }
        self.sets[slot] = saved;
        let _ = self.depth_s;
        Ok(result)
    }
}

/// All subsets of `mask`, by increasing size, lexicographic within a size.
pub fn subsets_by_size(mask: u64) -> impl Iterator<Item = u64> {
    let positions: Vec<u32> = (0..64).filter(|&b| mask >> b & 1 == 1).collect();
    let k = positions.len() as u32;
    (0..=k).flat_map(move |size| {
        let positions = positions.clone();
        let limit: u128 = 1u128 << k;
        let mut comb: u128 = (1u128 << size) - 1;
        let mut done = false;
        std::iter::from_fn(move || {
            if done || comb >= limit && size > 0 {
                return None;
            }
            let current = comb;
            if size == 0 {
                done = true;
            } else {
                // Gosper's hack: next integer with the same popcount
                let c = comb & comb.wrapping_neg();
                let r = comb + c;
                comb = (((r ^ comb) >> 2) / c) | r;
            }
            let mut out = 0u64;
            for (i, &p) in positions.iter().enumerate() {
                if current >> i & 1 == 1 {
                    out |= 1 << p;
                }
            }
            Some(out)
        })
    })
}

/// Evaluates `f` on `a` under `env`.
pub fn evaluate(a: &Structure, f: &Formula, env: &Assignment) -> Result<bool> {
    let free = f.free_vars();
    let points: Vec<&str> = free.iter().filter(|v| super::formula::is_point_var(v)).map(String::as_str).collect();
    let sets: Vec<&str> = free.iter().filter(|v| super::formula::is_set_var(v)).map(String::as_str).collect();
    Compiled::new(f, &points, &sets)?.eval(a, env)
}

/// Evaluates a sentence.
pub fn holds(a: &Structure, f: &Formula) -> Result<bool> {
    evaluate(a, f, &Assignment::default())
}
