//! Exact big-integer evaluation of the size and index bounds.
//!
//! `lg(p) = ceil(log2 p)` with `lg(1) = 0`; `g(d) = (14 c0)^d`.
//! Towers whose value would exceed the bit budget are returned as an
//! [`Bound::Overflow`] marker instead of being computed.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact value, or a tower too large to write down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Exact(BigUint),
    /// `tower(d, n)` exceeded the bit budget. `levels` and `top` describe
    /// the same value as `tower(levels, top)` after evaluating as many
    /// levels as fit.
    Overflow {
        d: usize,
        n: BigUint,
        levels: usize,
        top: BigUint,
    },
}

impl Bound {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Bound::Exact(v) => Some(v),
            Bound::Overflow { .. } => None,
        }
    }

    pub fn is_overflow(&self) -> bool {
        matches!(self, Bound::Overflow { .. })
    }

    /// The value as `u64` when it fits.
    pub fn to_u64(&self) -> Option<u64> {
        self.exact().and_then(ToPrimitive::to_u64)
    }

    fn key(&self) -> (usize, &BigUint) {
        match self {
            Bound::Exact(v) => (0, v),
            Bound::Overflow { levels, top, .. } => (*levels, top),
        }
    }
}

impl Ord for Bound {
    /// Exact values stay within the bit budget and overflowed tops exceed it,
    /// so comparing (remaining levels, top) orders the values correctly.
    fn cmp(&self, other: &Self) -> Ordering {
        let (la, ta) = self.key();
        let (lb, tb) = other.key();
        la.cmp(&lb).then_with(|| ta.cmp(tb))
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(v) if v.bits() <= 256 => write!(f, "{v}"),
            Bound::Exact(v) if v.count_ones() == 1 => write!(f, "2^{}", v.bits() - 1),
            Bound::Exact(v) => write!(f, "<{}-bit integer>", v.bits()),
            Bound::Overflow { d, n, .. } => write!(f, "overflow: tower({d}, {n})"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Constants and budget for the calculators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub c0: u64,
    pub c1: u64,
    /// Largest number of bits an exact tower value may have.
    pub bit_budget: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            c0: 2,
            c1: crate::interp::C1 as u64,
            bit_budget: 1_000_000,
        }
    }
}

/// `ceil(log2 p)`, with `lg(1) = 0`.
pub fn lg(p: u64) -> u64 {
    assert!(p >= 1, "lg is defined for p >= 1");
    if p == 1 {
        0
    } else {
        64 - (p - 1).leading_zeros() as u64
    }
}

impl Bounds {
    /// Whether `c0 >= c1^2`, the relation the graph bound's proof assumes.
    pub fn constants_consistent(&self) -> bool {
        self.c0 >= self.c1 * self.c1
    }

    pub fn check_constants(&self) -> Result<()> {
        if self.constants_consistent() {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "c0 = {} is smaller than c1^2 = {}",
                self.c0,
                self.c1 * self.c1
            )))
        }
    }

    pub fn tower(&self, d: usize, n: &BigUint) -> Bound {
        let mut t = n.clone();
        for i in 0..d {
            let fits = t.to_u64().is_some_and(|e| e < self.bit_budget);
            if !fits {
                return Bound::Overflow {
                    d,
                    n: n.clone(),
                    levels: d - i,
                    top: t,
                };
            }
            t = BigUint::one() << t.to_u64().unwrap();
        }
        Bound::Exact(t)
    }

    /// `g(d) = 14 c0 g(d - 1)`, `g(0) = 1`.
    pub fn g(&self, d: usize) -> BigUint {
        BigUint::from(14 * self.c0).pow(d as u32)
    }

    /// `h(d) = c0 g(d) d^2`.
    pub fn h(&self, d: usize) -> BigUint {
        BigUint::from(self.c0) * self.g(d) * BigUint::from(d * d)
    }

    /// `zeta_{d,p}(n1, n2) = tower(n2, g(d) (n1 + 1) (n1 + lg p))`.
    pub fn zeta(&self, d: usize, p: u64, n1: u64, n2: usize) -> Bound {
        let base = self.g(d) * BigUint::from(n1 + 1) * BigUint::from(n1 + lg(p));
        self.tower(n2, &base)
    }

    /// `rho_{d,p}(m) = tower(d + 1, 4 c0 g(d) (m + 1) (m + lg p))`.
    pub fn rho(&self, d: usize, p: u64, m: u64) -> Bound {
        let base = BigUint::from(4 * self.c0) * self.g(d) * BigUint::from(m + 1) * BigUint::from(m + lg(p));
        self.tower(d + 1, &base)
    }

    /// `tower(d, h(d) m (m + lg r))`: kernel size bound for graphs.
    pub fn graph_kernel_bound(&self, d: usize, r: u64, m: u64) -> Bound {
        let base = self.h(d) * BigUint::from(m) * BigUint::from(m + lg(r));
        self.tower(d, &base)
    }

    /// `tower(d + 1, h(d) m^2 (lg r)^2)`: index bound for graphs.
    pub fn graph_index_bound(&self, d: usize, r: u64, m: u64) -> Bound {
        let base = self.h(d) * BigUint::from(m * m) * BigUint::from(lg(r) * lg(r));
        self.tower(d + 1, &base)
    }
}

/// `tower(0, n) = n`, `tower(d, n) = 2^tower(d - 1, n)` with the default budget.
pub fn tower(d: usize, n: u64) -> Bound {
    Bounds::default().tower(d, &BigUint::from(n))
}

pub fn g(d: usize) -> BigUint {
    Bounds::default().g(d)
}

pub fn h_bound(d: usize) -> BigUint {
    Bounds::default().h(d)
}

pub fn zeta(d: usize, p: u64, n1: u64, n2: usize) -> Bound {
    Bounds::default().zeta(d, p, n1, n2)
}

pub fn rho(d: usize, p: u64, m: u64) -> Bound {
    Bounds::default().rho(d, p, m)
}

pub fn graph_kernel_bound(d: usize, r: u64, m: u64) -> Bound {
    Bounds::default().graph_kernel_bound(d, r, m)
}

pub fn graph_index_bound(d: usize, r: u64, m: u64) -> Bound {
    Bounds::default().graph_index_bound(d, r, m)
}

/// `1 + (q - 1) |σ|`: elements kept per structure by the monadic lemma.
pub fn monadic_cap(q: &BigUint, sigma: &BigUint) -> BigUint {
    assert!(!q.is_zero() && !sigma.is_zero(), "monadic_cap needs q, |σ| >= 1");
    BigUint::one() + (q - BigUint::one()) * sigma
}
