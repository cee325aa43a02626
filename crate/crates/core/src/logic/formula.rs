use std::collections::BTreeSet;
use std::fmt;

use crate::tree::Label;

/// MSO formulas over `{=, E, P_i, root, ∈}`.
///
/// Point variables start with a lowercase letter, set variables with an
/// uppercase one. `True`/`False` are the nullary constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Eq(String, String),
    Edge(String, String),
    Label(Label, String),
    Root(String),
    /// `In(x, X)`: point `x` belongs to set `X`.
    In(String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

pub fn is_point_var(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
}

pub fn is_set_var(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

impl Formula {
    pub fn eq(x: impl Into<String>, y: impl Into<String>) -> Self {
        Formula::Eq(x.into(), y.into())
    }

    pub fn edge(x: impl Into<String>, y: impl Into<String>) -> Self {
        Formula::Edge(x.into(), y.into())
    }

    pub fn label(l: Label, x: impl Into<String>) -> Self {
        Formula::Label(l, x.into())
    }

    pub fn root(x: impl Into<String>) -> Self {
        Formula::Root(x.into())
    }

    pub fn member(x: impl Into<String>, set: impl Into<String>) -> Self {
        Formula::In(x.into(), set.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            f => Formula::Not(Box::new(f)),
        }
    }

    /// Conjunction; empty is `True`, a singleton is returned as is.
    pub fn and(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; empty is `False`, a singleton is returned as is.
    pub fn or(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn exists_set(x: impl Into<String>, body: Formula) -> Self {
        Formula::ExistsSet(x.into(), Box::new(body))
    }

    pub fn forall_set(x: impl Into<String>, body: Formula) -> Self {
        Formula::ForallSet(x.into(), Box::new(body))
    }

    /// Quantifier rank: the largest number of quantifiers (point or set) on
    /// any root-to-leaf path of the syntax tree.
    pub fn rank(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Eq(..)
            | Formula::Edge(..)
            | Formula::Label(..)
            | Formula::Root(_)
            | Formula::In(..) => 0,
            Formula::Not(f) => f.rank(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::rank).max().unwrap_or(0),
            Formula::Implies(a, b) => a.rank().max(b.rank()),
            Formula::Exists(_, f) | Formula::Forall(_, f) | Formula::ExistsSet(_, f) | Formula::ForallSet(_, f) => {
                1 + f.rank()
            }
        }
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Formula::Not(f)
            | Formula::Exists(_, f)
            | Formula::Forall(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallSet(_, f) => f.size(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::size).sum(),
            Formula::Implies(a, b) => a.size() + b.size(),
            _ => 0,
        }
    }

    /// Free variables (point and set) in sorted order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut note = |v: &'a str, bound: &Vec<&'a str>| {
            if !bound.contains(&v) {
                out.insert(v.to_string());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Edge(a, b) | Formula::In(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Label(_, a) | Formula::Root(a) => note(a, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) | Formula::ExistsSet(v, f) | Formula::ForallSet(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// All variable names, bound or free.
    pub fn var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Eq(a, b) | Formula::Edge(a, b) | Formula::In(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Label(_, a) | Formula::Root(a) => {
                out.insert(a.clone());
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) | Formula::ExistsSet(v, _) | Formula::ForallSet(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Preorder traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Not(g)
            | Formula::Exists(_, g)
            | Formula::Forall(_, g)
            | Formula::ExistsSet(_, g)
            | Formula::ForallSet(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Edge(a, b) => write!(f, "(E {a} {b})"),
            Formula::Label(l, a) => write!(f, "(P {l} {a})"),
            Formula::Root(a) => write!(f, "(root {a})"),
            Formula::In(a, b) => write!(f, "(in {a} {b})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) => write_list(f, "and", gs),
            Formula::Or(gs) => write_list(f, "or", gs),
            Formula::Implies(a, b) => write!(f, "(imp {a} {b})"),
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
            Formula::ExistsSet(v, g) => write!(f, "(existsS {v} {g})"),
            Formula::ForallSet(v, g) => write!(f, "(forallS {v} {g})"),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "({head}")?;
    for g in items {
        write!(f, " {g}")?;
    }
    write!(f, ")")
}
