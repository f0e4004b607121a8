//! Command-line surface: exact vertex integrity, sentence checking with
//! optional kernelization, kernel emission, gadget-instance construction,
//! and the brute-force oracles.
//!
//! Reports go to stdout as single-line JSON. Exit code 0 means the run
//! completed (the verdict, true or false, is data in the report); 2 is an
//! input error; 3 means an exhaustive search or enumeration was over
//! capacity.

mod formats;
mod report;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use formats::{emit_formula, emit_graph, parse_formula_file, parse_graph, FormatError};
use report::RunReport;
use vimc::construct::{
    adjacency_formula, build_hardness_instance, clique_formula, three_coloring_formula,
};
use vimc::eval::{
    evaluate_with_cache_and_options, EvalOptions, Environment, PredicateCache,
    DEFAULT_SET_QUANTIFIER_CAP,
};
use vimc::graph::Structure;
use vimc::integrity::{verify_separator, vertex_integrity_exact, Separator};
use vimc::kernel::{kernelize, Kernelized};
use vimc::logic::{free_vars, quantifier_profile, Formula, QuantifierProfile};
use vimc::testkit::{brute_clique, brute_three_color, brute_vertex_cover};
use vimc::{Error, Graph};

#[derive(Parser)]
#[command(name = "vimc", about = "Model checking on graphs of small vertex integrity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact vertex integrity and an optimal separator.
    Vi {
        graph: PathBuf,
    },
    /// Decide whether a graph satisfies a sentence.
    Check {
        graph: PathBuf,
        formula: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[command(flatten)]
        separator: SeparatorArg,
        /// Refuse set quantification over more vertices than this.
        #[arg(long, default_value_t = DEFAULT_SET_QUANTIFIER_CAP)]
        set_quantifier_cap: usize,
    },
    /// Kernelize a graph for a quantifier profile and emit the kernel.
    Kernel {
        graph: PathBuf,
        /// Take the profile from this sentence.
        #[arg(long, conflicts_with_all = ["q1", "q2"])]
        formula: Option<PathBuf>,
        /// Vertex quantifier budget, when no formula file is given.
        #[arg(long)]
        q1: Option<usize>,
        /// Set quantifier budget, when no formula file is given.
        #[arg(long, requires = "q1")]
        q2: Option<usize>,
        #[command(flatten)]
        separator: SeparatorArg,
        /// Directory for the emitted kernel graph.
        #[arg(long, default_value = ".")]
        emit_dir: PathBuf,
    },
    /// Build the gadget instance of a source graph with companion formulas.
    Construct {
        graph: PathBuf,
        #[arg(long)]
        emit_dir: PathBuf,
        /// Also emit the clique sentence for this clique size.
        #[arg(long)]
        q: Option<usize>,
        /// Also emit the 3-coloring sentence.
        #[arg(long)]
        three_col: bool,
    },
    /// Brute-force oracles over small graphs.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        graph: PathBuf,
        /// Clique size for the clique oracle.
        #[arg(long)]
        q: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Naive,
    Kernel,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Clique,
    #[value(name = "3col")]
    ThreeCol,
    Vc,
}

#[derive(Args)]
struct SeparatorArg {
    /// Separator vertices, comma-separated ("0,3,7").
    #[arg(long, value_delimiter = ',')]
    separator: Option<Vec<usize>>,
}

struct Failure {
    msg: String,
    code: u8,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure {
            msg: msg.into(),
            code: 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_capacity() { 3 } else { 2 },
            msg: e.to_string(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            println!("{}", report.to_json_line());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(parse_graph(&read_file(path)?)?)
}

fn read_sentence(path: &Path) -> Result<Formula, Failure> {
    let f = parse_formula_file(&read_file(path)?)?;
    let fv = free_vars(&f);
    if !fv.is_empty() {
        return Err(Failure::input(format!(
            "{} is not a sentence; free variables remain",
            path.display()
        )));
    }
    Ok(f)
}

fn run(command: Command) -> Result<RunReport, Failure> {
    match command {
        Command::Vi { graph } => cmd_vi(&graph),
        Command::Check {
            graph,
            formula,
            mode,
            separator,
            set_quantifier_cap,
        } => cmd_check(&graph, &formula, mode, separator.separator, set_quantifier_cap),
        Command::Kernel {
            graph,
            formula,
            q1,
            q2,
            separator,
            emit_dir,
        } => cmd_kernel(&graph, formula.as_deref(), q1, q2, separator.separator, &emit_dir),
        Command::Construct {
            graph,
            emit_dir,
            q,
            three_col,
        } => cmd_construct(&graph, &emit_dir, q, three_col),
        Command::Oracle { kind, graph, q } => cmd_oracle(kind, &graph, q),
    }
}

fn cmd_vi(path: &Path) -> Result<RunReport, Failure> {
    let mut report = RunReport::new("vi", &[path]);
    let start = Instant::now();
    let g = read_graph(path)?;
    report.phase("parse", start);

    let start = Instant::now();
    let sep = vertex_integrity_exact(&g).map_err(|e| {
        if e.is_capacity() {
            Failure {
                msg: format!("{e}; supply --separator to a check/kernel run instead"),
                code: 3,
            }
        } else {
            e.into()
        }
    })?;
    report.phase("search", start);
    report.integrity = Some(sep.k);
    report.separator = Some(sep.vertices.iter().copied().collect());
    Ok(report)
}

// A user-supplied separator is certified against the graph; its budget is
// whatever it actually achieves.
fn resolve_separator(g: &Graph, ids: Vec<usize>) -> Result<Separator, Failure> {
    let vertices: BTreeSet<usize> = ids.into_iter().collect();
    let max = g.max_component_size_after_removal(&vertices)?;
    let k = vertices.len() + max;
    debug_assert!(verify_separator(g, &vertices, k).unwrap());
    Ok(Separator {
        k,
        max_component_size: max,
        vertices,
    })
}

fn cmd_check(
    graph_path: &Path,
    formula_path: &Path,
    mode: Mode,
    separator: Option<Vec<usize>>,
    set_cap: usize,
) -> Result<RunReport, Failure> {
    let mut report = RunReport::new("check", &[graph_path, formula_path]);
    let start = Instant::now();
    let g = read_graph(graph_path)?;
    let f = read_sentence(formula_path)?;
    let profile = quantifier_profile(&f);
    report.phase("parse", start);

    let (target, separator_used) = match mode {
        Mode::Naive => (g.clone(), None),
        Mode::Kernel => {
            let sep = find_separator(&g, separator, &mut report)?;
            (kernel_target(&g, &sep, profile, &mut report)?, Some(sep))
        }
        Mode::Auto => match find_separator(&g, separator, &mut report) {
            Ok(sep) => match kernel_target(&g, &sep, profile, &mut report) {
                Ok(kernel) => (kernel, Some(sep)),
                Err(f) if f.code == 3 => (g.clone(), None),
                Err(f) => return Err(f),
            },
            Err(f) if f.code == 3 => (g.clone(), None),
            Err(f) => return Err(f),
        },
    };
    if let Some(sep) = &separator_used {
        report.integrity = Some(sep.k);
        report.separator = Some(sep.vertices.iter().copied().collect());
    }

    let start = Instant::now();
    let structure = Structure::new(target);
    let mut cache = PredicateCache::new();
    let verdict = evaluate_with_cache_and_options(
        &structure,
        &f,
        &Environment::new(),
        &mut cache,
        EvalOptions {
            set_quantifier_cap: set_cap,
        },
    )
    .map_err(|e| match e {
        Error::SetQuantifierCapacity { .. } if mode == Mode::Naive => Failure {
            msg: format!("{e}; try --mode kernel to shrink the graph first"),
            code: 3,
        },
        other => other.into(),
    })?;
    report.phase("evaluate", start);
    report.verdict = Some(verdict);
    Ok(report)
}

fn find_separator(
    g: &Graph,
    provided: Option<Vec<usize>>,
    report: &mut RunReport,
) -> Result<Separator, Failure> {
    let start = Instant::now();
    let sep = match provided {
        Some(ids) => resolve_separator(g, ids)?,
        None => vertex_integrity_exact(g)?,
    };
    report.phase("separator", start);
    Ok(sep)
}

fn kernel_target(
    g: &Graph,
    sep: &Separator,
    profile: QuantifierProfile,
    report: &mut RunReport,
) -> Result<Graph, Failure> {
    let start = Instant::now();
    let kernel = kernelize(g, &sep.vertices, profile)?;
    report.phase("kernelize", start);
    report.kernel = Some(kernel.report.clone());
    Ok(kernel.graph)
}

fn cmd_kernel(
    graph_path: &Path,
    formula_path: Option<&Path>,
    q1: Option<usize>,
    q2: Option<usize>,
    separator: Option<Vec<usize>>,
    emit_dir: &Path,
) -> Result<RunReport, Failure> {
    let mut inputs: Vec<&Path> = vec![graph_path];
    if let Some(p) = formula_path {
        inputs.push(p);
    }
    let mut report = RunReport::new("kernel", &inputs);

    let start = Instant::now();
    let g = read_graph(graph_path)?;
    let profile = match (formula_path, q1) {
        (Some(path), _) => quantifier_profile(&read_sentence(path)?),
        (None, Some(q1)) => QuantifierProfile::new(q1, q2.unwrap_or(0)),
        (None, None) => {
            return Err(Failure::input(
                "kernel needs either --formula or --q1 (and optionally --q2)",
            ))
        }
    };
    report.phase("parse", start);

    let sep = find_separator(&g, separator, &mut report)?;
    report.integrity = Some(sep.k);
    report.separator = Some(sep.vertices.iter().copied().collect());

    let start = Instant::now();
    let kernel: Kernelized = kernelize(&g, &sep.vertices, profile)?;
    report.phase("kernelize", start);

    fs::create_dir_all(emit_dir)
        .map_err(|e| Failure::input(format!("cannot create {}: {e}", emit_dir.display())))?;
    let out = emit_dir.join("kernel.graph");
    fs::write(&out, emit_graph(&kernel.graph))
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", out.display())))?;
    report.kernel = Some(kernel.report);
    Ok(report)
}

fn cmd_construct(
    graph_path: &Path,
    emit_dir: &Path,
    clique_q: Option<usize>,
    three_col: bool,
) -> Result<RunReport, Failure> {
    let mut report = RunReport::new("construct", &[graph_path]);
    let start = Instant::now();
    let g = read_graph(graph_path)?;
    report.phase("parse", start);

    let start = Instant::now();
    let instance = build_hardness_instance(&g)?;
    report.phase("construct", start);

    let start = Instant::now();
    fs::create_dir_all(emit_dir)
        .map_err(|e| Failure::input(format!("cannot create {}: {e}", emit_dir.display())))?;
    let write = |name: &str, contents: String| -> Result<(), Failure> {
        let path = emit_dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
    };
    write("hardness.graph", emit_graph(&instance.graph))?;
    write(
        "hardness_meta.json",
        format!("{}\n", serde_json::to_string_pretty(&instance.metadata_json()).unwrap()),
    )?;
    write(
        "adjacency.formula",
        format!(
            "# free variables: x1, x2 (two block vertices)\n{}",
            emit_formula(&adjacency_formula())
        ),
    )?;
    if let Some(q) = clique_q {
        write(&format!("clique{q}.formula"), emit_formula(&clique_formula(q)?))?;
    }
    if three_col {
        write("three_coloring.formula", emit_formula(&three_coloring_formula()))?;
    }
    report.phase("emit", start);
    Ok(report)
}

fn cmd_oracle(kind: OracleKind, graph_path: &Path, q: Option<usize>) -> Result<RunReport, Failure> {
    let mut report = RunReport::new("oracle", &[graph_path]);
    let start = Instant::now();
    let g = read_graph(graph_path)?;
    report.phase("parse", start);

    let start = Instant::now();
    match kind {
        OracleKind::Clique => {
            let q = q.ok_or_else(|| Failure::input("the clique oracle needs --q"))?;
            report.verdict = Some(brute_clique(&g, q)?);
        }
        OracleKind::ThreeCol => {
            report.verdict = Some(brute_three_color(&g)?.is_some());
        }
        OracleKind::Vc => {
            report.value = Some(brute_vertex_cover(&g)? as u64);
        }
    }
    report.phase("oracle", start);
    Ok(report)
}
