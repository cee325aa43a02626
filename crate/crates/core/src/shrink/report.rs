use std::fmt;

use serde::Serialize;

use super::bounds::Bound;

/// How the kernel was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The EF oracle confirmed equivalence with the input.
    Verified,
    /// Nothing was removed.
    Unchanged,
    /// Certified mode: soundness rests on the cap bound, not on the oracle.
    NotChecked,
}

/// Per-depth statistics of a kernel computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub depth: usize,
    pub nodes_in: usize,
    pub nodes_out: usize,
    /// Distinct child classes seen among nodes at this depth.
    pub types: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundValues {
    pub zeta: Bound,
    pub rho: Bound,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_kernel_bound: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_index_bound: Option<Bound>,
    /// Whether the output size was compared against an exact bound, and the result.
    pub within_bound: Option<bool>,
    pub constants_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShrinkReport {
    pub mode: String,
    pub m: usize,
    /// Rank at which the tree was shrunk (`m + q(d)` for graphs).
    pub tree_rank: usize,
    pub cap: String,
    pub input_nodes: usize,
    pub output_nodes: usize,
    pub input_leaves: usize,
    pub output_leaves: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_edges: Option<usize>,
    pub levels: Vec<LevelStats>,
    pub bounds: BoundValues,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ShrinkReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ShrinkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode        {} (cap {})", self.mode, self.cap)?;
        writeln!(f, "rank        m = {}, tree rank {}", self.m, self.tree_rank)?;
        writeln!(f, "nodes       {} -> {}", self.input_nodes, self.output_nodes)?;
        writeln!(f, "leaves      {} -> {}", self.input_leaves, self.output_leaves)?;
        if let (Some(a), Some(b)) = (self.input_edges, self.output_edges) {
            writeln!(f, "edges       {a} -> {b}")?;
        }
        writeln!(f, "depth  in  out  types")?;
        for l in &self.levels {
            writeln!(f, "{:>5} {:>3} {:>4} {:>6}", l.depth, l.nodes_in, l.nodes_out, l.types)?;
        }
        writeln!(f, "zeta        {}", self.bounds.zeta)?;
        writeln!(f, "rho         {}", self.bounds.rho)?;
        if let Some(b) = &self.bounds.graph_kernel_bound {
            writeln!(f, "kernel bnd  {b}")?;
        }
        if let Some(b) = &self.bounds.graph_index_bound {
            writeln!(f, "index bnd   {b}")?;
        }
        if let Some(w) = self.bounds.within_bound {
            writeln!(f, "size within bound: {w}")?;
        }
        if !self.bounds.constants_consistent {
            writeln!(f, "warning: c0 < c1^2")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(
            f,
            "verdict     {}",
            match self.verdict {
                Verdict::Verified => "verified by EF oracle",
                Verdict::Unchanged => "unchanged",
                Verdict::NotChecked => "not checked (certified cap)",
            }
        )
    }
}
