//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shrubkit::census::{enumerate_trees, index_lower_bound, recognize, Recognition};
use shrubkit::ef::{distinguish, ef_equivalent, game_equivalent};
use shrubkit::generate::{clique_model, random_model_restriction, random_tree, random_tree_model};
use shrubkit::interp::{interpret, translate_formula};
use shrubkit::logic::eval::holds;
use shrubkit::logic::{characteristic_sentence, sample_corpus, sample_formula};
use shrubkit::shrink::bounds::{g, monadic_cap, rho, tower, zeta, Bound};
use shrubkit::structure::Vocabulary;
use shrubkit::bench::bench;
use shrubkit::{shrink_graph, shrink_tree, verify_shrink, CapPolicy, Graph, Structure, TreeModel};

type Outcome = Result<String, String>;

fn labeled(g: &Graph, r: u32) -> Structure {
    Structure::from_graph_with_vocabulary(g, r)
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Ok(detail)
    } else {
        Err(format!("{detail}; took {elapsed:?}, limit {limit:?}"))
    }
}

fn c1_index_d0() -> Outcome {
    let start = Instant::now();
    for p in 1..=3 {
        for m in 1..=2 {
            let got = index_lower_bound(0, p, m, 1).map_err(|e| e.to_string())?;
            if got != p as usize {
                return Err(format!("p = {p}, m = {m}: got {got}"));
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(1), "6 cases exact".into())
}

fn c2_tree_kernels() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut shrunk = 0;
    for i in 0..200 {
        let (d, p) = (rng.gen_range(0..=2), rng.gen_range(1..=2));
        let t = random_tree(&mut rng, d, p, 25);
        for m in 1..=2 {
            let k = shrink_tree(&t, m, CapPolicy::auto()).map_err(|e| format!("tree #{i}, m = {m}: {e}"))?;
            if !verify_shrink(&t, &k, m).map_err(|e| e.to_string())? {
                return Err(format!("tree #{i}, m = {m}: kernel not equivalent"));
            }
            shrunk += usize::from(k.len() < t.len());
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(600),
        format!("400/400 verified, {shrunk} strictly smaller"),
    )
}

fn c3_graph_kernels() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let r = rng.gen_range(1..=2);
        let d = rng.gen_range(0..=2);
        let tm = random_tree_model(&mut rng, r, d, 20, 0.5);
        let g = interpret(&tm).map_err(|e| e.to_string())?;
        let (_, h) = shrink_graph(&tm, 1, CapPolicy::auto()).map_err(|e| format!("model #{i}: {e}"))?;
        let kept: BTreeSet<_> = h.vertex_set();
        if !kept.is_subset(&g.vertex_set()) || g.induced_subgraph(&kept).map_err(|e| e.to_string())? != h {
            return Err(format!("model #{i}: kernel is not an induced subgraph"));
        }
        if !ef_equivalent(&labeled(&g, r), &labeled(&h, r), 1).map_err(|e| e.to_string())? {
            return Err(format!("model #{i}: kernel not 1-equivalent"));
        }
    }
    within(start.elapsed(), Duration::from_secs(600), "100/100".into())
}

fn c4_transfer() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut truths = 0;
    for i in 0..100 {
        let r = rng.gen_range(1..=2);
        let d = rng.gen_range(0..=2);
        let tm = random_tree_model(&mut rng, r, d, 12, 0.5);
        let g = interpret(&tm).map_err(|e| e.to_string())?;
        let phi = sample_formula(i, 2, Vocabulary::graph(r));
        let psi = translate_formula(&phi, &tm.sig, tm.d()).map_err(|e| e.to_string())?;
        let lhs = holds(&labeled(&g, r), &phi).map_err(|e| e.to_string())?;
        let rhs = holds(&Structure::from_tree(&tm.tree), &psi).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!("pair #{i}: graph says {lhs}, tree says {rhs} for {phi}"));
        }
        truths += usize::from(lhs);
    }
    within(
        start.elapsed(),
        Duration::from_secs(300),
        format!("100/100 agree ({truths} true)"),
    )
}

fn c5_restrictions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let (r, d) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
        let tm = random_tree_model(&mut rng, r, d, 16, 0.5);
        let (sub, _) = random_model_restriction(&mut rng, &tm);
        let g = interpret(&tm).map_err(|e| e.to_string())?;
        let h = interpret(&sub).map_err(|e| e.to_string())?;
        if g.induced_subgraph(&sub.tree.leaf_ids()).map_err(|e| e.to_string())? != h {
            return Err(format!("restriction #{i} differs"));
        }
    }
    Ok("100/100 equal".into())
}

fn c6_bounds() -> Outcome {
    let start = Instant::now();
    let big = |n: u64| BigUint::from(n);
    let exact = [
        ("tower(2,3)", tower(2, 3), Bound::Exact(big(256))),
        ("zeta(1,1,1,1)", zeta(1, 1, 1, 1), Bound::Exact(big(1) << 56)),
        ("rho(0,1,1)", rho(0, 1, 1), Bound::Exact(big(65536))),
    ];
    for (name, got, want) in exact {
        if got != want {
            return Err(format!("{name} = {got}"));
        }
    }
    for d in 0..=8 {
        if g(d) != big(28).pow(d as u32) {
            return Err(format!("g({d}) = {}", g(d)));
        }
    }
    if monadic_cap(&big(3), &big(2)) != big(5) {
        return Err("monadic_cap(3,2)".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let (d, n) = (rng.gen_range(0..4), rng.gen_range(0..40));
        let (p, m) = (rng.gen_range(1..9), rng.gen_range(0..6));
        let (n1, n2) = (rng.gen_range(0..6), rng.gen_range(0..3));
        let checks = [
            tower(d, n) <= tower(d, n + 1),
            tower(d, n + 1) <= tower(d + 1, n + 1),
            g(d) < g(d + 1),
            zeta(d, p, n1, n2) <= zeta(d + 1, p, n1, n2),
            zeta(d, p, n1, n2) <= zeta(d, p + 1, n1, n2),
            zeta(d, p, n1, n2) <= zeta(d, p, n1 + 1, n2),
            zeta(d, p, n1, n2) <= zeta(d, p, n1, n2 + 1),
            rho(d, p, m) <= rho(d + 1, p, m),
            rho(d, p, m) <= rho(d, p + 1, m),
            rho(d, p, m) <= rho(d, p, m + 1),
        ];
        if let Some(k) = checks.iter().position(|ok| !ok) {
            return Err(format!("monotonicity check {k} fails at d={d} n={n} p={p} m={m} n1={n1} n2={n2}"));
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(1),
        "exact values and 1000 monotonicity tuples".into(),
    )
}

fn c7_characteristic() -> Outcome {
    let start = Instant::now();
    let pool: Vec<Structure> = enumerate_trees(1, 2, 5).map(|t| Structure::from_tree(&t)).collect();
    let mut pairs = 0;
    for a in &pool {
        let chi = characteristic_sentence(a, 1).map_err(|e| e.to_string())?;
        for b in &pool {
            let sat = holds(b, &chi).map_err(|e| e.to_string())?;
            let eq = ef_equivalent(a, b, 1).map_err(|e| e.to_string())?;
            let game = game_equivalent(a, b, 1).map_err(|e| e.to_string())?;
            if sat != eq || eq != game {
                return Err(format!("mismatch: chi {sat}, types {eq}, game {game}"));
            }
            pairs += 1;
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(600),
        format!("{pairs} pairs over {} trees, 0 mismatches", pool.len()),
    )
}

fn c8_oracle_vs_evaluator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let corpus = sample_corpus(8, 100, 2, Vocabulary::tree(2));
    let (mut equivalent, mut separated) = (0, 0);
    for i in 0..50 {
        let t = random_tree(&mut rng, 2, 2, 10);
        // half the pairs are a tree and its kernel, so both verdicts occur
        let u = if i % 2 == 0 {
            shrink_tree(&t, 2, CapPolicy::auto()).map_err(|e| e.to_string())?
        } else {
            random_tree(&mut rng, 2, 2, 10)
        };
        let (a, b) = (Structure::from_tree(&t), Structure::from_tree(&u));
        match distinguish(&a, &b, 2).map_err(|e| e.to_string())? {
            None => {
                equivalent += 1;
                for f in &corpus {
                    if holds(&a, f).map_err(|e| e.to_string())? != holds(&b, f).map_err(|e| e.to_string())? {
                        return Err(format!("pair #{i}: equivalent but disagree on {f}"));
                    }
                }
            }
            Some(f) => {
                separated += 1;
                let ok = f.rank() <= 2
                    && holds(&a, &f).map_err(|e| e.to_string())?
                    && !holds(&b, &f).map_err(|e| e.to_string())?;
                if !ok {
                    return Err(format!("pair #{i}: sentence does not separate: {f}"));
                }
            }
        }
    }
    Ok(format!("{equivalent} equivalent pairs agree, {separated} separated"))
}

fn c9_recognizer() -> Outcome {
    for n in 1..=5 {
        match recognize(&Graph::complete(n), 1, 1, 1_000_000) {
            Recognition::Found(tm) if n == 1 || tm.sig.triples() == vec![(1, 1, 1)] => {}
            other => return Err(format!("K{n}: {other:?}")),
        }
    }
    if recognize(&Graph::path(4), 1, 1, 1_000_000) != Recognition::No {
        return Err("P4 not rejected".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..50 {
        let (r, d) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let tm = random_tree_model(&mut rng, r, d, 5, 0.5);
        let g = interpret(&tm).map_err(|e| e.to_string())?.unlabeled();
        if !matches!(recognize(&g, r, d, 1_000_000), Recognition::Found(_)) {
            return Err(format!("sample #{i}: graph of a model not recognized"));
        }
        let mut keep: BTreeSet<_> = g.vertices().filter(|_| rng.gen_bool(0.6)).collect();
        if keep.is_empty() {
            keep.insert(g.vertices().next().unwrap());
        }
        let sub = g.induced_subgraph(&keep).map_err(|e| e.to_string())?;
        match recognize(&sub, r, d, 1_000_000) {
            Recognition::Found(found) => {
                if interpret(&found).map_err(|e| e.to_string())?.unlabeled() != sub {
                    return Err(format!("sample #{i}: returned model does not produce the subgraph"));
                }
            }
            other => return Err(format!("sample #{i}: induced subgraph gave {other:?}")),
        }
    }
    Ok("K1..K5 found, P4 rejected, 50/50 hereditary".into())
}

fn c10_bench() -> Outcome {
    let tm: TreeModel = clique_model(8);
    let corpus = sample_corpus(10, 100, 2, Vocabulary::graph(1));
    let report = bench(&tm, &corpus, 2, CapPolicy::auto()).map_err(|e| e.to_string())?;
    let detail = format!(
        "{} sentences agree; {} vs {} vertices; {} us vs {} us",
        report.rows.len(),
        report.graph_vertices,
        report.kernel_vertices,
        report.graph_total_micros,
        report.kernel_total_micros
    );
    if report.kernel_total_micros < report.graph_total_micros {
        Ok(detail)
    } else {
        Err(format!("kernel not faster: {detail}"))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("d=0 index", c1_index_d0),
        ("tree kernel soundness", c2_tree_kernels),
        ("graph kernel soundness", c3_graph_kernels),
        ("interpretation transfer", c4_transfer),
        ("restriction compatibility", c5_restrictions),
        ("bound calculators", c6_bounds),
        ("characteristic sentences", c7_characteristic),
        ("EF oracle vs evaluator", c8_oracle_vs_evaluator),
        ("recognizer", c9_recognizer),
        ("bench integrity", c10_bench),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
