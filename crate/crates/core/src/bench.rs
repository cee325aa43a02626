//! Evaluating a sentence corpus on a graph and on its kernel.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::logic::eval::Compiled;
use crate::logic::formula::Formula;
use crate::model::TreeModel;
use crate::shrink::{shrink_graph, CapPolicy};
use crate::structure::Structure;

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub index: usize,
    pub sentence: String,
    pub verdict: bool,
    pub graph_micros: u128,
    pub kernel_micros: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub m: usize,
    pub graph_vertices: usize,
    pub kernel_vertices: usize,
    pub rows: Vec<BenchRow>,
    pub graph_total_micros: u128,
    pub kernel_total_micros: u128,
}

fn timed(c: &Compiled, s: &Structure) -> Result<(bool, Duration)> {
    let start = Instant::now();
    let v = c.eval_sentence(s)?;
    Ok((v, start.elapsed()))
}

/// Evaluates sentence `index` on both sides; differing verdicts are an error
/// since they would refute the kernel.
pub fn bench_row(g: &Structure, h: &Structure, index: usize, phi: &Formula) -> Result<BenchRow> {
    let c = Compiled::for_formula(phi)?;
    let (vg, tg) = timed(&c, g)?;
    let (vh, th) = timed(&c, h)?;
    if vg != vh {
        return Err(Error::Semantic(format!(
            "sentence #{index} is {vg} on the graph but {vh} on the kernel: {phi}"
        )));
    }
    Ok(BenchRow {
        index,
        sentence: phi.to_string(),
        verdict: vg,
        graph_micros: tg.as_micros(),
        kernel_micros: th.as_micros(),
    })
}

/// Collects rows into a report.
pub fn summarize(m: usize, g: &Graph, h: &Graph, rows: Vec<BenchRow>) -> BenchReport {
    BenchReport {
        m,
        graph_vertices: g.vertex_count(),
        kernel_vertices: h.vertex_count(),
        graph_total_micros: rows.iter().map(|r| r.graph_micros).sum(),
        kernel_total_micros: rows.iter().map(|r| r.kernel_micros).sum(),
        rows,
    }
}

/// Shrinks `tm` at rank `m` and times every corpus sentence (rank at most
/// `m`) on the graph and on the kernel.
pub fn bench(tm: &TreeModel, corpus: &[Formula], m: usize, policy: CapPolicy) -> Result<BenchReport> {
    if let Some((i, f)) = corpus.iter().enumerate().find(|(_, f)| f.rank() > m) {
        return Err(Error::Input(format!("sentence #{i} has rank {} > {m}", f.rank())));
    }
    let (_, h) = shrink_graph(tm, m, policy)?;
    let g = crate::interp::interpret(tm)?;
    let r = tm.r();
    let (sg, sh) = (
        Structure::from_graph_with_vocabulary(&g, r),
        Structure::from_graph_with_vocabulary(&h, r),
    );
    let rows = corpus
        .iter()
        .enumerate()
        .map(|(i, f)| bench_row(&sg, &sh, i, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(m, &g, &h, rows))
}
