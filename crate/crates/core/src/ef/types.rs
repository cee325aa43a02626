//! Rank-`r` MSO types of tuples `(ā, P̄)`, interned as a DAG.
//!
//! Two tuples (in the same or different structures) have equal type ids at
//! rank `r` exactly when the duplicator wins the `r`-round MSO game from
//! the corresponding position. Types are computed bottom-up:
//!
//! * rank 0: the atomic type (labels, root, memberships, equalities, edges);
//! * rank 1: atomic type plus the set of atomic types of one-point
//!   extensions. A set chosen in the last round can always be answered by
//!   copying membership of the already placed points, so set moves add
//!   nothing here;
//! * rank 2: rank-1 data of point extensions, plus the atomic classes of
//!   fresh points that occur at least twice. A set move followed by one
//!   point move can only test, per fresh class, which memberships occur,
//!   and a class can show both only if it has two members;
//! * rank `r >= 3`: point extensions and all `2^n` set extensions.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::structure::Structure;
use crate::tree::Label;

pub type TypeId = u32;

/// Atomic type of a tuple of `k` points and `j` sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atomic {
    /// Label of every point, 0 when unlabeled.
    pub labels: Vec<Label>,
    pub roots: Vec<bool>,
    /// Per point, bit `s` tells membership in set `s`.
    pub members: Vec<u64>,
    /// Per pair `i < j` in lexicographic order: bit 0 equality, bit 1 edge.
    pub pairs: Vec<u8>,
    pub sets: usize,
}

impl Atomic {
    pub fn points(&self) -> usize {
        self.labels.len()
    }

    /// Position of pair `(i, j)`, `i < j`, in [`Atomic::pairs`].
    pub fn pair_index(i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        j * (j - 1) / 2 + i
    }

    pub fn equal(&self, i: usize, j: usize) -> bool {
        i == j || self.pairs[Self::pair_index(i.min(j), i.max(j))] & 1 == 1
    }

    pub fn edge(&self, i: usize, j: usize) -> bool {
        i != j && self.pairs[Self::pair_index(i.min(j), i.max(j))] & 2 == 2
    }

    /// True when the last point differs from all earlier ones.
    pub fn last_is_fresh(&self) -> bool {
        let k = self.points();
        k > 0 && (0..k - 1).all(|i| !self.equal(i, k - 1))
    }

    pub fn of(s: &Structure, points: &[usize], sets: &[u64]) -> Atomic {
        let k = points.len();
        let mut pairs = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for j in 0..k {
            for i in 0..j {
                let (a, b) = (points[i], points[j]);
                pairs.push(u8::from(a == b) | (u8::from(s.edge(a, b)) << 1));
            }
        }
        Atomic {
            labels: points.iter().map(|&a| s.label(a).unwrap_or(0)).collect(),
            roots: points.iter().map(|&a| s.is_root(a)).collect(),
            members: points
                .iter()
                .map(|&a| {
                    sets.iter()
                        .enumerate()
                        .fold(0u64, |acc, (s, &mask)| acc | ((mask >> a & 1) << s))
                })
                .collect(),
            pairs,
            sets: sets.len(),
        }
    }
}

/// One node of the type DAG. Child lists are sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeNode {
    Atomic(Atomic),
    Rank1 {
        atomic: TypeId,
        points: Vec<TypeId>,
    },
    Rank2 {
        atomic: TypeId,
        points: Vec<TypeId>,
        /// Atomic types of fresh one-point extensions realized at least twice.
        split: Vec<TypeId>,
    },
    Full {
        rank: usize,
        atomic: TypeId,
        points: Vec<TypeId>,
        sets: Vec<TypeId>,
    },
}

impl TypeNode {
    pub fn rank(&self) -> usize {
        match self {
            TypeNode::Atomic(_) => 0,
            TypeNode::Rank1 { .. } => 1,
            TypeNode::Rank2 { .. } => 2,
            TypeNode::Full { rank, .. } => *rank,
        }
    }
}

/// Limits guarding type computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EfLimits {
    /// Largest universe on which subsets are enumerated (needed from rank 3 on).
    pub max_set_universe: usize,
    /// Largest allowed estimate of atomic-type evaluations per structure.
    pub budget: u64,
}

impl Default for EfLimits {
    fn default() -> Self {
        EfLimits {
            max_set_universe: 14,
            budget: 200_000_000,
        }
    }
}

/// Shared table of type nodes; ids are comparable across structures
/// processed with the same interner.
#[derive(Debug, Default)]
pub struct TypeInterner {
    map: HashMap<TypeNode, TypeId>,
    nodes: Vec<TypeNode>,
    pub limits: EfLimits,
}

impl TypeInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_limits(limits: EfLimits) -> Self {
        TypeInterner {
            limits,
            ..Self::default()
        }
    }

    pub fn intern(&mut self, node: TypeNode) -> TypeId {
        if let Some(&id) = self.map.get(&node) {
            return id;
        }
        let id = self.nodes.len() as TypeId;
        self.nodes.push(node.clone());
        self.map.insert(node, id);
        id
    }

    pub fn node(&self, id: TypeId) -> &TypeNode {
        &self.nodes[id as usize]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The atomic type underlying `id`.
    pub fn atomic(&self, id: TypeId) -> &Atomic {
        match self.node(id) {
            TypeNode::Atomic(a) => a,
            TypeNode::Rank1 { atomic, .. } | TypeNode::Rank2 { atomic, .. } | TypeNode::Full { atomic, .. } => {
                self.atomic(*atomic)
            }
        }
    }

    /// Rank-`m` type of the structure (empty tuple).
    pub fn type_of(&mut self, s: &Structure, m: usize) -> Result<TypeId> {
        check_cost(s.len(), m, &self.limits)?;
        Ok(self.tuple_type(s, &mut Vec::new(), &mut Vec::new(), m))
    }

    /// Rank-`r` type of `(points, sets)`. Callers are responsible for the
    /// cost check; see [`estimated_cost`].
    pub fn tuple_type(&mut self, s: &Structure, points: &mut Vec<usize>, sets: &mut Vec<u64>, r: usize) -> TypeId {
        let atomic = self.intern(TypeNode::Atomic(Atomic::of(s, points, sets)));
        if r == 0 {
            return atomic;
        }
        let n = s.len();
        let mut pts = Vec::with_capacity(n);
        let mut fresh_counts: HashMap<TypeId, usize> = HashMap::new();
        for a in 0..n {
            points.push(a);
            pts.push(self.tuple_type(s, points, sets, r - 1));
            if r == 2 && !points[..points.len() - 1].contains(&a) {
                let at = self.intern(TypeNode::Atomic(Atomic::of(s, points, sets)));
                *fresh_counts.entry(at).or_default() += 1;
            }
            points.pop();
        }
        pts.sort_unstable();
        pts.dedup();
        let node = match r {
            1 => TypeNode::Rank1 { atomic, points: pts },
            2 => {
                let mut split: Vec<TypeId> = fresh_counts.into_iter().filter(|&(_, c)| c >= 2).map(|(t, _)| t).collect();
                split.sort_unstable();
                TypeNode::Rank2 {
                    atomic,
                    points: pts,
                    split,
                }
            }
            _ => {
                let full: u64 = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
                let mut st = Vec::new();
                let mut mask = 0u64;
                loop {
                    sets.push(mask);
                    st.push(self.tuple_type(s, points, sets, r - 1));
                    sets.pop();
                    if mask == full {
                        break;
                    }
                    mask = (mask + 1) & full;
                }
                st.sort_unstable();
                st.dedup();
                TypeNode::Full {
                    rank: r,
                    atomic,
                    points: pts,
                    sets: st,
                }
            }
        };
        self.intern(node)
    }
}

/// Estimated number of atomic-type evaluations for a rank-`m` type on a
/// universe of `n` elements (saturating).
pub fn estimated_cost(n: usize, m: usize) -> u64 {
    let n = n as u64;
    let subsets = if n >= 64 { u64::MAX } else { 1u64 << n };
    let mut c: u64 = 1;
    for r in 1..=m {
        let mut next = 1u64.saturating_add(n.saturating_mul(c));
        if r == 2 {
            next = next.saturating_add(n);
        }
        if r >= 3 {
            next = next.saturating_add(subsets.saturating_mul(c));
        }
        c = next;
    }
    c
}

pub(crate) fn check_cost(n: usize, m: usize, limits: &EfLimits) -> Result<()> {
    if m >= 3 && n > limits.max_set_universe {
        return Err(Error::Resource(format!(
            "rank {m} needs set enumeration over {n} elements (limit {})",
            limits.max_set_universe
        )));
    }
    let cost = estimated_cost(n, m);
    if cost > limits.budget {
        return Err(Error::Resource(format!(
            "rank-{m} type of a {n}-element structure needs about {cost} steps (budget {})",
            limits.budget
        )));
    }
    Ok(())
}
