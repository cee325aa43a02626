use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use shrubkit::bench::{bench_row, summarize};
use shrubkit::census::index_lower_bound;
use shrubkit::ef::{distinguish, ef_equivalent};
use shrubkit::generate::{clique_model, random_tree, random_tree_model, star_model};
use shrubkit::interp::{interpret, interpretation_rank};
use shrubkit::io::{parse_tree_model, tree_model_to_json, tree_to_json, StructureFile};
use shrubkit::logic::chi::characteristic_sentence_with_budget;
use shrubkit::logic::eval::holds;
use shrubkit::logic::{parse_formula, sample_corpus};
use shrubkit::shrink::bounds::{lg, Bounds};
use shrubkit::shrink::{shrink_graph_report, shrink_tree_report, ShrinkConfig};
use shrubkit::structure::Vocabulary;
use shrubkit::{CapPolicy, Error, Formula, Structure};

use crate::{BenchArgs, BoundsArgs, CliError, CliResult, GenArgs, GenKind, IndexArgs, PolicyArgs, PolicyKind, ShrinkArgs};

pub struct Context {
    pub jobs: usize,
    pub strict: bool,
}

impl Context {
    fn pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", self.jobs)))
    }

    fn load(&self, path: &Path) -> CliResult<StructureFile> {
        let text = read(path)?;
        let file = StructureFile::parse(&text)?;
        Ok(match file {
            StructureFile::Model(_) if self.strict => StructureFile::Model(parse_tree_model(&text, true)?),
            other => other,
        })
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn structure(file: &StructureFile, as_graph: bool) -> CliResult<Structure> {
    Ok(match file {
        StructureFile::Model(tm) if as_graph => Structure::from_graph_with_vocabulary(&interpret(tm)?, tm.r()),
        other => other.structure(false)?,
    })
}

fn policy(a: &PolicyArgs) -> CliResult<CapPolicy> {
    Ok(match a.policy {
        PolicyKind::Auto => CapPolicy::Auto { max_cap: a.max_cap },
        PolicyKind::Certified => CapPolicy::Certified,
        PolicyKind::Fixed => {
            CapPolicy::Fixed(a.cap.ok_or_else(|| CliError::Usage("--policy fixed needs --cap".into()))?)
        }
    })
}

pub fn gen(a: &GenArgs) -> CliResult<()> {
    let rng = || {
        a.seed
            .map(ChaCha8Rng::seed_from_u64)
            .ok_or_else(|| CliError::Usage(format!("--seed is required for --kind {:?}", a.kind).to_lowercase()))
    };
    let text = match a.kind {
        GenKind::Model => {
            if a.r == 0 || a.leaves == 0 || !(0.0..=1.0).contains(&a.density) {
                return Err(CliError::Usage("need r >= 1, leaves >= 1 and density in [0, 1]".into()));
            }
            tree_model_to_json(&random_tree_model(&mut rng()?, a.r, a.d, a.leaves, a.density))
        }
        GenKind::Tree => {
            if a.p == 0 || a.max_nodes == 0 {
                return Err(CliError::Usage("need p >= 1 and max-nodes >= 1".into()));
            }
            tree_to_json(&random_tree(&mut rng()?, a.d, a.p, a.max_nodes))
        }
        GenKind::Clique => tree_model_to_json(&clique_model(a.n)),
        GenKind::Star => tree_model_to_json(&star_model(a.n)),
    };
    emit(a.out.as_deref(), &text)
}

pub fn interpret_cmd(ctx: &Context, model: &Path, out: Option<&Path>) -> CliResult<()> {
    match ctx.load(model)? {
        StructureFile::Model(tm) => emit(out, &interpret(&tm)?.to_text()),
        _ => Err(CliError::Usage(format!("{} is not a tree-model file", model.display()))),
    }
}

pub fn shrink(ctx: &Context, a: &ShrinkArgs) -> CliResult<()> {
    let file = ctx.load(&a.file)?;
    let policy = policy(&a.policy)?;
    let config = ShrinkConfig::default();
    let (kernel, report) = match &file {
        StructureFile::Model(tm) if !a.as_tree => {
            let k = shrink_graph_report(tm, a.m, policy, &config)?;
            (tree_model_to_json(&k.model), k.report)
        }
        StructureFile::Model(tm) => {
            let k = shrink_tree_report(&tm.tree, a.m, policy, &config)?;
            (tree_to_json(&k.tree), k.report)
        }
        StructureFile::Tree(t) => {
            let k = shrink_tree_report(t, a.m, policy, &config)?;
            (tree_to_json(&k.tree), k.report)
        }
        StructureFile::Graph(_) => {
            return Err(CliError::Usage("shrink needs a tree or tree-model file".into()));
        }
    };
    if let Some(path) = &a.out {
        emit(Some(path), &kernel)?;
        if a.json {
            println!("{}", report.to_json());
        } else {
            println!("{report}");
        }
    } else if a.json {
        let kernel: serde_json::Value = serde_json::from_str(&kernel).map_err(Error::from)?;
        let both = json!({ "kernel": kernel, "report": report });
        println!("{}", serde_json::to_string_pretty(&both).map_err(Error::from)?);
    } else {
        println!("{report}");
        println!("{kernel}");
    }
    Ok(())
}

fn formula_from(text: Option<String>, file: Option<&Path>) -> CliResult<Formula> {
    let text = match (text, file) {
        (Some(t), _) => t,
        (None, Some(path)) => read(path)?,
        (None, None) => return Err(CliError::Usage("give --formula or --formula-file".into())),
    };
    Ok(parse_formula(text.trim())?)
}

pub fn check(ctx: &Context, file: &Path, formula: Option<String>, formula_file: Option<&Path>, as_graph: bool) -> CliResult<()> {
    let s = structure(&ctx.load(file)?, as_graph)?;
    let phi = formula_from(formula, formula_file)?;
    println!("{}", holds(&s, &phi)?);
    Ok(())
}

pub fn equiv(ctx: &Context, a: &Path, b: &Path, m: usize, as_graph: bool) -> CliResult<()> {
    let (sa, sb) = (structure(&ctx.load(a)?, as_graph)?, structure(&ctx.load(b)?, as_graph)?);
    if ef_equivalent(&sa, &sb, m)? {
        println!("equivalent");
    } else {
        println!("not equivalent");
        if let Some(f) = distinguish(&sa, &sb, m)? {
            println!("distinguishing: {f}");
        }
    }
    Ok(())
}

pub fn chi(ctx: &Context, file: &Path, m: usize, budget: u64, as_graph: bool) -> CliResult<()> {
    let s = structure(&ctx.load(file)?, as_graph)?;
    println!("{}", characteristic_sentence_with_budget(&s, m, budget)?);
    Ok(())
}

pub fn index(ctx: &Context, a: &IndexArgs) -> CliResult<()> {
    if a.p.contains(&0) || a.max_nodes.contains(&0) {
        return Err(CliError::Usage("p and max-nodes must be at least 1".into()));
    }
    let mut cells = Vec::new();
    for &d in &a.d {
        for &p in &a.p {
            for &m in &a.m {
                for &n in &a.max_nodes {
                    cells.push((d, p, m, n));
                }
            }
        }
    }
    let rows: Vec<shrubkit::Result<(usize, u128)>> = ctx.pool()?.install(|| {
        cells
            .par_iter()
            .map(|&(d, p, m, n)| {
                let start = Instant::now();
                let classes = index_lower_bound(d, p, m, n)?;
                Ok((classes, start.elapsed().as_millis()))
            })
            .collect()
    });
    let mut out = String::new();
    if !a.no_header {
        out.push_str("d,p,m,maxNodes,classes,wallclock_ms\n");
    }
    for (&(d, p, m, n), row) in cells.iter().zip(rows) {
        let (classes, ms) = row?;
        let _ = writeln!(out, "{d},{p},{m},{n},{classes},{ms}");
    }
    print!("{out}");
    Ok(())
}

pub fn bounds(a: &BoundsArgs) -> CliResult<()> {
    let b = Bounds {
        c0: a.c0,
        bit_budget: a.bit_budget,
        ..Bounds::default()
    };
    let (d, m) = (a.d, a.m);
    let mut rows: Vec<(String, String)> = vec![
        ("g(d)".into(), b.g(d).to_string()),
        ("h(d)".into(), b.h(d).to_string()),
    ];
    let p = match (a.r, a.p) {
        (Some(0), _) | (_, Some(0)) => return Err(CliError::Usage("labels must be at least 1".into())),
        (Some(r), _) => {
            rows.push(("lg(r)".into(), lg(r).to_string()));
            rows.push(("graph_kernel_bound(d,r,m)".into(), b.graph_kernel_bound(d, r, m).to_string()));
            rows.push(("graph_index_bound(d,r,m)".into(), b.graph_index_bound(d, r, m).to_string()));
            r + 1
        }
        (None, Some(p)) => p,
        (None, None) => return Err(CliError::Usage("give --r or --p".into())),
    };
    // for tree models the tree has r + 1 labels and is shrunk at rank m + q(d)
    let tree_m = if a.r.is_some() { m + interpretation_rank(d) as u64 } else { m };
    rows.push(("p".into(), p.to_string()));
    rows.push(("tree rank".into(), tree_m.to_string()));
    rows.push(("zeta(d,p,m,d+1)".into(), b.zeta(d, p, tree_m, d + 1).to_string()));
    rows.push(("rho(d,p,m)".into(), b.rho(d, p, tree_m).to_string()));
    rows.push((
        "c0 >= c1^2".into(),
        format!("{} (c0 = {}, c1 = {})", b.constants_consistent(), b.c0, b.c1),
    ));
    if a.json {
        let map: serde_json::Map<String, serde_json::Value> =
            rows.into_iter().map(|(k, v)| (k, serde_json::Value::String(v))).collect();
        println!("{}", serde_json::to_string_pretty(&map).map_err(Error::from)?);
    } else {
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            println!("{k:<width$}  {v}");
        }
    }
    Ok(())
}

pub fn bench(ctx: &Context, a: &BenchArgs) -> CliResult<()> {
    let tm = match ctx.load(&a.model)? {
        StructureFile::Model(tm) => tm,
        _ => return Err(CliError::Usage(format!("{} is not a tree-model file", a.model.display()))),
    };
    let r = tm.r();
    let corpus = match (&a.corpus, a.seed) {
        (Some(path), _) => read_corpus(path)?,
        (None, Some(seed)) => sample_corpus(seed, a.count, a.m, Vocabulary::graph(r)),
        (None, None) => return Err(CliError::Usage("give --corpus or --seed".into())),
    };
    if let Some((i, f)) = corpus.iter().enumerate().find(|(_, f)| f.rank() > a.m) {
        return Err(Error::Input(format!("sentence #{i} has rank {} > {}", f.rank(), a.m)).into());
    }
    let kernel = shrink_graph_report(&tm, a.m, policy(&a.policy)?, &ShrinkConfig::default())?;
    let g = interpret(&tm)?;
    let (sg, sh) = (
        Structure::from_graph_with_vocabulary(&g, r),
        Structure::from_graph_with_vocabulary(&kernel.graph, r),
    );
    let rows = ctx.pool()?.install(|| {
        corpus
            .par_iter()
            .enumerate()
            .map(|(i, f)| bench_row(&sg, &sh, i, f))
            .collect::<shrubkit::Result<Vec<_>>>()
    })?;
    let report = summarize(a.m, &g, &kernel.graph, rows);
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(Error::from)?);
        return Ok(());
    }
    println!("{:>5}  {:<7} {:>10} {:>10}  sentence", "#", "verdict", "G (us)", "H (us)");
    for row in &report.rows {
        println!(
            "{:>5}  {:<7} {:>10} {:>10}  {}",
            row.index, row.verdict, row.graph_micros, row.kernel_micros, row.sentence
        );
    }
    println!(
        "total  G: {} vertices, {} us   H: {} vertices, {} us   verdicts agree on {} sentences",
        report.graph_vertices,
        report.graph_total_micros,
        report.kernel_vertices,
        report.kernel_total_micros,
        report.rows.len()
    );
    Ok(())
}

fn read_corpus(path: &Path) -> CliResult<Vec<Formula>> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f = parse_formula(line).map_err(|e| match e {
            Error::Syntax { column, message, .. } => Error::Syntax {
                line: no + 1,
                column,
                message,
            },
            other => other,
        })?;
        out.push(f);
    }
    Ok(out)
}
