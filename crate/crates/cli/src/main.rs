//! `shrubkit`: batch experiments on tree models, kernels and the EF oracle.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "shrubkit", version, about = "Tree models, MSO kernels and an EF-game oracle")]
struct Cli {
    /// Worker threads for `index` and `bench`; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Reject asymmetric signatures in tree-model files instead of symmetrizing.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random or parametric tree model (or plain tree).
    Gen(GenArgs),
    /// Tree-model file to graph file.
    Interpret {
        model: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Shrink a tree or tree model at rank m and report.
    Shrink(ShrinkArgs),
    /// Evaluate a sentence on a structure file.
    Check {
        file: PathBuf,
        /// Sentence text.
        #[arg(long, conflicts_with = "formula_file", required_unless_present = "formula_file")]
        formula: Option<String>,
        #[arg(long)]
        formula_file: Option<PathBuf>,
        /// Read tree-model files as their graph rather than their tree.
        #[arg(long)]
        as_graph: bool,
    },
    /// Decide m-equivalence of two structure files.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        as_graph: bool,
    },
    /// Print the characteristic sentence of rank m.
    Chi {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        /// Give up when the sentence would exceed this many nodes.
        #[arg(long, default_value_t = shrubkit::logic::chi::DEFAULT_CHI_BUDGET)]
        chi_budget: u64,
        #[arg(long)]
        as_graph: bool,
    },
    /// Type counts of small trees, as CSV.
    Index(IndexArgs),
    /// Size and index bounds.
    Bounds(BoundsArgs),
    /// Time a sentence corpus on a graph and on its kernel.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// Random tree model.
    Model,
    /// Random labeled tree.
    Tree,
    /// Model of the complete graph on `n` vertices.
    Clique,
    /// Model of the star with `n` rays.
    Star,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Model)]
    kind: GenKind,
    /// Required for the random kinds.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 2)]
    r: u32,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 12)]
    leaves: usize,
    /// Probability of each signature triple.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 20)]
    max_nodes: usize,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyKind {
    Auto,
    Certified,
    Fixed,
}

#[derive(Args)]
struct PolicyArgs {
    #[arg(long, value_enum, default_value_t = PolicyKind::Auto)]
    policy: PolicyKind,
    /// Cap for `--policy fixed`.
    #[arg(long)]
    cap: Option<usize>,
    /// Largest cap tried by `--policy auto`.
    #[arg(long)]
    max_cap: Option<usize>,
}

#[derive(Args)]
struct ShrinkArgs {
    file: PathBuf,
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Shrink the tree of a tree-model file as a plain tree.
    #[arg(long)]
    as_tree: bool,
    /// Write the kernel here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct IndexArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    max_nodes: Vec<usize>,
    #[arg(long)]
    no_header: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    m: u64,
    /// Leaf labels of a tree model (graph bounds).
    #[arg(long, required_unless_present = "p", conflicts_with = "p")]
    r: Option<u64>,
    /// Labels of a plain tree (tree bounds).
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 2)]
    c0: u64,
    /// Towers beyond this many bits are reported as overflow markers.
    #[arg(long, default_value_t = 1_000_000)]
    bit_budget: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    model: PathBuf,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Sentences, one per line (`#` starts a comment line).
    #[arg(long, conflicts_with_all = ["seed", "count"], required_unless_present = "seed")]
    corpus: Option<PathBuf>,
    /// Seed of a sampled corpus.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] shrubkit::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Core(e) if e.is_resource() => 3,
            CliError::Core(e) if e.is_input() => 1,
            CliError::Core(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Core(e) => e.kind(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn run(cli: Cli) -> CliResult<()> {
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let ctx = commands::Context {
        jobs: cli.jobs,
        strict: cli.strict,
    };
    match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Interpret { model, out } => commands::interpret_cmd(&ctx, &model, out.as_deref()),
        Command::Shrink(a) => commands::shrink(&ctx, &a),
        Command::Check {
            file,
            formula,
            formula_file,
            as_graph,
        } => commands::check(&ctx, &file, formula, formula_file.as_deref(), as_graph),
        Command::Equiv { a, b, m, as_graph } => commands::equiv(&ctx, &a, &b, m, as_graph),
        Command::Chi {
            file,
            m,
            chi_budget,
            as_graph,
        } => commands::chi(&ctx, &file, m, chi_budget, as_graph),
        Command::Index(a) => commands::index(&ctx, &a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::Bench(a) => commands::bench(&ctx, &a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("code=1 kind=usage {}", e.render());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("code={} kind={} {e}", e.code(), e.kind());
            ExitCode::from(e.code())
        }
    }
}
