//! Finite simple undirected graphs with optional vertex labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tree::{Label, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeMap<NodeId, Option<Label>>,
    edges: BTreeSet<(NodeId, NodeId)>,
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            vertices: BTreeMap::new(),
            edges: BTreeSet::new(),
        }
    }

    /// Unlabeled graph on vertices `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v, None);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::with_vertices(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::with_vertices(n);
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        g
    }

    pub fn add_vertex(&mut self, v: NodeId, label: Option<Label>) {
        self.vertices.insert(v, label);
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        if u == v {
            return Err(Error::Input(format!("self-loop at vertex {u}")));
        }
        if !self.vertices.contains_key(&u) || !self.vertices.contains_key(&v) {
            return Err(Error::Input(format!("edge {{{u}, {v}}} uses an unknown vertex")));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<NodeId> {
        self.vertices.keys().copied().collect()
    }

    pub fn label(&self, v: NodeId) -> Option<Label> {
        self.vertices.get(&v).copied().flatten()
    }

    pub fn is_labeled(&self) -> bool {
        !self.vertices.is_empty() && self.vertices.values().all(Option::is_some)
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Drops vertex labels.
    pub fn unlabeled(&self) -> Graph {
        Graph {
            vertices: self.vertices.keys().map(|&v| (v, None)).collect(),
            edges: self.edges.clone(),
        }
    }

    /// Subgraph induced by `keep`, which must be a subset of the vertices.
    pub fn induced_subgraph(&self, keep: &BTreeSet<NodeId>) -> Result<Graph> {
        if let Some(v) = keep.iter().find(|v| !self.vertices.contains_key(v)) {
            return Err(Error::Input(format!("vertex {v} is not in the graph")));
        }
        Ok(Graph {
            vertices: keep.iter().map(|&v| (v, self.vertices[&v])).collect(),
            edges: self
                .edges
                .iter()
                .filter(|(u, v)| keep.contains(u) && keep.contains(v))
                .copied()
                .collect(),
        })
    }

    /// Same graph with vertices renumbered `0..n` in increasing id order.
    pub fn compacted(&self) -> Graph {
        let pos: BTreeMap<NodeId, NodeId> = self.vertices.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        Graph {
            vertices: self.vertices.iter().map(|(v, l)| (pos[v], *l)).collect(),
            edges: self.edges.iter().map(|(u, v)| (pos[u], pos[v])).collect(),
        }
    }

    /// Parses the text format: a header `n m`, then `m` lines `u v`
    /// (0-based), then optionally a line `labels: l0 l1 ...`.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| Error::Input("empty graph file".into()))?;
        let nums = parse_numbers(header, 1)?;
        let [n, m] = nums[..] else {
            return Err(Error::Input("graph header must be `n m`".into()));
        };
        let mut g = Graph::with_vertices(n);
        for _ in 0..m {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::Input(format!("expected {m} edge lines")))?;
            let uv = parse_numbers(line, no + 1)?;
            let [u, v] = uv[..] else {
                return Err(Error::Input(format!("line {}: expected `u v`", no + 1)));
            };
            g.add_edge(u, v)
                .map_err(|e| Error::Input(format!("line {}: {e}", no + 1)))?;
        }
        if let Some((no, line)) = lines.next() {
            let rest = line
                .strip_prefix("labels:")
                .ok_or_else(|| Error::Input(format!("line {}: unexpected content", no + 1)))?;
            let labels = parse_numbers(rest, no + 1)?;
            if labels.len() != n {
                return Err(Error::Input(format!(
                    "line {}: {} labels for {n} vertices",
                    no + 1,
                    labels.len()
                )));
            }
            if labels.contains(&0) {
                return Err(Error::Input(format!("line {}: labels start at 1", no + 1)));
            }
            for (v, l) in labels.into_iter().enumerate() {
                g.add_vertex(v, Some(l as Label));
            }
        }
        if let Some((no, _)) = lines.next() {
            return Err(Error::Input(format!("line {}: trailing content", no + 1)));
        }
        Ok(g)
    }

    /// Writes the text format. Vertices are renumbered `0..n` in increasing
    /// id order.
    pub fn to_text(&self) -> String {
        let g = self.compacted();
        let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
        for (u, v) in g.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        if g.is_labeled() {
            let labels: Vec<String> = g.vertices.values().map(|l| l.unwrap().to_string()).collect();
            let _ = writeln!(out, "labels: {}", labels.join(" "));
        }
        out
    }
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

fn parse_numbers(line: &str, line_no: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Input(format!("line {line_no}: `{tok}` is not a non-negative integer")))
        })
        .collect()
}
