//! Command-line front end. Exit status: 0 on success, 2 when a solver
//! reports failure or infeasibility, 1 on usage or input errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seqham::coloring::{color_edges, rainbow_color_edges, ColorPattern, VertexColoring};
use seqham::graph::{gen_gnp, gen_layered, Edge, Graph, Vertex};
use seqham::ham::{brute_hamilton, posa_solve, validate_cycle, RotationParams, BRUTE_CAP};
use seqham::inversion::{
    count_inversion_bounded, count_inversions, first_moment_bound, greedy_layer_probs, greedy_low_inversion,
    p_epsilon, restricted_class_size, GreedyParams,
};
use seqham::io;
use seqham::ordered::{ordered_layer_probs, solve_ordered, solve_ordered_graph, OrderedParams};
use seqham::pattern::{
    coupling_monotonicity, find_patterned, spread_ratio, CouplingParams, PatternProblem, SearchMode,
    DEFAULT_NODE_BUDGET, SPREAD_CAP,
};
use seqham::rng::derive_seed;
use seqham::sweep::{csv_string, parse_grid, run_sweep, write_csv, ExperimentKind, SweepResult, SweepSpec};

#[derive(Parser)]
#[command(name = "seqham", version, about = "Sequentially constrained Hamilton cycles in random graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample G(n,p), optionally with random edge colors.
    Gen(GenArgs),
    /// Find a Hamilton cycle in a graph file.
    Solve(SolveArgs),
    /// Find a Hamilton cycle following edge and/or vertex color patterns.
    Pattern(PatternArgs),
    /// Find a Hamilton cycle visiting given vertices in order.
    Ordered(OrderedArgs),
    /// Run the greedy low-inversion construction on a fresh random instance.
    Greedy(GreedyArgs),
    /// Counting formulas for inversion-bounded Hamilton cycles.
    Count(CountArgs),
    /// Exact spread of vertex-patterned Hamilton cycles of K_n.
    Spread(SpreadArgs),
    /// Interpolation experiment between plain and colored random graphs.
    Couple(CoupleArgs),
    /// Monte Carlo parameter sweep written as CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Color edges i.i.d. with these probabilities, e.g. 0.5,0.5.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Color edges uniformly from 1..=q.
    #[arg(long, conflicts_with = "alpha")]
    rainbow: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Edge the cycle must use, as u,v.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    required: Option<Vec<Vertex>>,
    /// brute or posa; brute is the default up to the exhaustive cap.
    #[arg(long)]
    solver: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PatternArgs {
    /// Graph file; edge colors are required for --edge-pattern and --rainbow.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    edge_pattern: Option<PathBuf>,
    #[arg(long, requires = "vertex_pattern")]
    vertex_coloring: Option<PathBuf>,
    #[arg(long, requires = "vertex_coloring")]
    vertex_pattern: Option<PathBuf>,
    #[arg(long)]
    rainbow: bool,
    /// Use the budgeted heuristic instead of the exact search.
    #[arg(long)]
    heuristic: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrderedArgs {
    /// Graph file; without it a layered instance is sampled from --n and --p.
    #[arg(long, conflicts_with_all = ["n"])]
    graph: Option<PathBuf>,
    #[arg(long, requires = "p")]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// File with one line of vertex labels.
    #[arg(long)]
    order: Option<PathBuf>,
    /// Vertex labels inline, e.g. 3,1,7.
    #[arg(long, value_delimiter = ',', conflicts_with = "order")]
    s0: Option<Vec<Vertex>>,
    #[arg(long, default_value_t = 2.0)]
    omega: f64,
    /// Further attempts with derived seeds after a failure.
    #[arg(long, default_value_t = 0)]
    retries: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the key-value pipeline report (default: stderr).
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GreedyArgs {
    #[arg(long)]
    n: usize,
    /// Total edge probability; the walk layer gets p/3.
    #[arg(long)]
    p: f64,
    #[arg(long)]
    u_target: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the key-value transcript.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Where to write the histogram of a_j as CSV.
    #[arg(long)]
    histogram: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
}

#[derive(Args)]
struct SpreadArgs {
    #[arg(long)]
    n: usize,
    /// Class sizes of the block vertex coloring, e.g. 4,4.
    #[arg(long, value_delimiter = ',')]
    classes: Vec<usize>,
    /// Vertex pattern, e.g. 1,2,1,2,1,2,1,2.
    #[arg(long, value_delimiter = ',')]
    pattern: Vec<u32>,
}

#[derive(Args)]
struct CoupleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    beta_p: Option<f64>,
    /// t values, as lo:hi:step or a comma list.
    #[arg(long)]
    grid: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// hamiltonicity, edge-pattern, vertex-pattern, ordered, greedy-inversion, coupling or first-moment.
    #[arg(long)]
    kind: ExperimentKind,
    #[arg(long)]
    n: usize,
    /// lo:hi:step or a comma list.
    #[arg(long)]
    grid: String,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Experiment parameters as key=val; repeatable.
    #[arg(long = "params", value_parser = parse_kv)]
    params: Vec<(String, String)>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| format!("expected key=val, got `{s}`"))
}

/// Usage and input errors.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

enum Done {
    Ok,
    /// The solver gave up or the instance has no solution.
    Failed(String),
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Usage> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_sweep(out: &Option<PathBuf>, res: &SweepResult) -> Result<(), Usage> {
    match out {
        Some(path) => write_csv(res, std::io::BufWriter::new(fs::File::create(path)?))?,
        None => std::io::stdout().write_all(csv_string(res).as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.cmd) {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::Failed(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Result<Done, Usage> {
    match cmd {
        Cmd::Gen(a) => {
            let g = gen_gnp(a.n, a.p, a.seed)?;
            let ec = match (&a.alpha, a.rainbow) {
                (Some(alpha), _) => Some(color_edges(&g, alpha, a.seed)?),
                (None, Some(q)) => Some(rainbow_color_edges(&g, q, a.seed)?),
                (None, None) => None,
            };
            emit(&a.out, &io::format_graph(&g, ec.as_ref()))?;
            Ok(Done::Ok)
        }
        Cmd::Solve(a) => solve(a),
        Cmd::Pattern(a) => pattern(a),
        Cmd::Ordered(a) => ordered(a),
        Cmd::Greedy(a) => greedy(a),
        Cmd::Count(a) => {
            let mut text = format!("n={}\nm={}\n", a.n, a.m);
            text.push_str(&format!("count_inversion_bounded={}\n", count_inversion_bounded(a.n, a.m)));
            // the restricted class needs M >= n
            if let Ok(size) = restricted_class_size(a.n, a.m) {
                text.push_str(&format!("restricted_class_size={size}\n"));
            }
            let pe = p_epsilon(a.n, a.m, a.eps);
            text.push_str(&format!("p_epsilon={pe}\n"));
            let p = a.p.unwrap_or(pe);
            text.push_str(&format!("first_moment_bound={}\n", first_moment_bound(a.n, a.m, p)));
            emit(&None, &text)?;
            Ok(Done::Ok)
        }
        Cmd::Spread(a) => {
            let vc = VertexColoring::block(a.n, &a.classes)?;
            let r = spread_ratio(&vc, &ColorPattern::new(a.pattern)?, SPREAD_CAP)?;
            let worst: Vec<String> = r.worst_set.iter().map(Edge::to_string).collect();
            let text = format!(
                "n={}\nh_size={}\nh_size_formula={}\nautomorphisms={}\nkappa_hat={}\nkappa_reference={}\n\
                 worst_phi={}\nworst_set={}\nsets_checked={}\nbound_check={}\n",
                r.n,
                r.h_size,
                r.h_size_formula,
                r.automorphisms,
                r.kappa_hat,
                r.kappa_reference,
                r.worst_phi,
                worst.join(" "),
                r.sets_checked,
                r.bound_check
            );
            emit(&None, &text)?;
            Ok(Done::Ok)
        }
        Cmd::Couple(a) => {
            let t_grid = parse_grid(&a.grid)?
                .into_iter()
                .map(|t| {
                    if t >= 0.0 && t.fract() == 0.0 {
                        Ok(t as usize)
                    } else {
                        Err(Usage(format!("t value {t} is not a nonnegative integer")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let res = coupling_monotonicity(&CouplingParams {
                n: a.n,
                p: a.p,
                beta_p: a.beta_p,
                alpha: vec![1.0 / a.k as f64; a.k as usize],
                pattern: ColorPattern::random(a.n, a.k, derive_seed(a.seed, "sweep-pattern", 0)),
                t_grid,
                trials: a.trials,
                seed: a.seed,
            })?;
            emit_sweep(&a.out, &res)?;
            Ok(Done::Ok)
        }
        Cmd::Sweep(a) => {
            let spec = SweepSpec {
                kind: a.kind,
                n: a.n,
                grid: parse_grid(&a.grid)?,
                trials: a.trials,
                seed: a.seed,
                params: a.params.into_iter().collect::<BTreeMap<_, _>>(),
            };
            let res = run_sweep(&spec)?;
            emit_sweep(&a.out, &res)?;
            Ok(Done::Ok)
        }
    }
}

fn solve(a: SolveArgs) -> Result<Done, Usage> {
    let g = io::read_graph(&a.graph)?;
    let required = match a.required.as_deref() {
        Some(&[u, v]) => Some(Edge::try_new(u, v).ok_or_else(|| Usage(format!("{u},{v} is not an edge")))?),
        _ => None,
    };
    let default = if g.n() <= BRUTE_CAP { "brute" } else { "posa" };
    let cycle = match a.solver.as_deref().unwrap_or(default) {
        "brute" => brute_hamilton(&g, |seq| {
            required.is_none_or(|e| {
                let n = seq.len();
                (0..n).any(|i| Edge::try_new(seq[i], seq[(i + 1) % n]) == Some(e))
            })
        })?,
        "posa" => match posa_solve(&g, &[], required, &RotationParams::default(), a.seed) {
            Ok(sol) => Some(sol.cycle),
            Err(e) => return Ok(Done::Failed(e.to_string())),
        },
        other => return Err(Usage(format!("solver must be brute or posa, got {other}"))),
    };
    match cycle {
        Some(h) if validate_cycle(&g, h.as_slice(), required) => {
            emit(&a.out, &io::format_int_line(h.as_slice()))?;
            Ok(Done::Ok)
        }
        Some(_) => Ok(Done::Failed("solver returned an invalid cycle".into())),
        None => Ok(Done::Failed("no Hamilton cycle".into())),
    }
}

fn pattern(a: PatternArgs) -> Result<Done, Usage> {
    let (g, ec) = io::read_colored_graph(&a.graph)?;
    let mut prob = PatternProblem::new(g);
    let colors = || ec.clone().ok_or_else(|| Usage("the graph file has no edge colors".into()));
    if let Some(path) = &a.edge_pattern {
        prob = prob.with_edge_pattern(colors()?, io::parse_pattern(&fs::read_to_string(path)?)?)?;
    }
    if let (Some(vc), Some(c2)) = (&a.vertex_coloring, &a.vertex_pattern) {
        let vc = io::parse_vertex_coloring(&fs::read_to_string(vc)?)?;
        prob = prob.with_vertex_pattern(vc, io::parse_pattern(&fs::read_to_string(c2)?)?)?;
    }
    if a.rainbow {
        prob = prob.with_rainbow(colors()?)?;
    }
    let mode = if a.heuristic {
        SearchMode::Heuristic { node_budget: a.budget }
    } else {
        SearchMode::Exact
    };
    match find_patterned(&prob, mode, a.seed) {
        Ok(Some(m)) => {
            emit(&a.out, &io::format_int_line(&m.aligned))?;
            Ok(Done::Ok)
        }
        Ok(None) => Ok(Done::Failed("no Hamilton cycle follows the pattern".into())),
        Err(e @ seqham::Error::BudgetExhausted { .. }) => Ok(Done::Failed(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn ordered(a: OrderedArgs) -> Result<Done, Usage> {
    let order: Vec<Vertex> = match (&a.order, &a.s0) {
        (Some(path), _) => io::parse_int_line(&fs::read_to_string(path)?)?,
        (None, Some(list)) => list.clone(),
        (None, None) => return Err(Usage("give --order or --s0".into())),
    };
    let params = OrderedParams {
        omega: a.omega,
        p: a.p,
        ..Default::default()
    };
    let graph: Option<Graph> = a.graph.as_ref().map(io::read_graph).transpose()?;
    let mut last = None;
    for attempt in 0..=a.retries {
        let seed = if attempt == 0 {
            a.seed
        } else {
            derive_seed(a.seed, "ordered-retry", attempt as u64)
        };
        let result = match &graph {
            Some(g) => solve_ordered_graph(g, &order, &params, seed),
            None => {
                let (n, p) = match (a.n, a.p) {
                    (Some(n), Some(p)) => (n, p),
                    _ => return Err(Usage("give --graph or both --n and --p".into())),
                };
                let lg = gen_layered(n, &ordered_layer_probs(n, p, a.omega)?, a.seed)?;
                solve_ordered(&lg, &order, &params, seed)
            }
        };
        match result {
            Ok(sol) => {
                write_report(&a.report, &sol.report.to_key_value())?;
                emit(&a.out, &io::format_int_line(sol.cycle.as_slice()))?;
                return Ok(Done::Ok);
            }
            Err(f) => {
                if matches!(f.error.stage, seqham::ordered::Stage::Input) {
                    return Err(Usage(f.to_string()));
                }
                last = Some(f);
            }
        }
    }
    let f = last.expect("at least one attempt");
    write_report(&a.report, &f.report.to_key_value())?;
    Ok(Done::Failed(f.to_string()))
}

fn write_report(path: &Option<PathBuf>, text: &str) -> Result<(), Usage> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => eprint!("{text}"),
    }
    Ok(())
}

fn greedy(a: GreedyArgs) -> Result<Done, Usage> {
    let lg = gen_layered(a.n, &greedy_layer_probs(a.p), a.seed)?;
    let params = GreedyParams {
        u_target: a.u_target,
        ..Default::default()
    };
    let (h, transcript) = greedy_low_inversion(&lg, &params, a.seed)?;
    if let Some(path) = &a.transcript {
        fs::write(path, transcript.to_key_value())?;
    }
    if let Some(path) = &a.histogram {
        fs::write(path, transcript.a_histogram_csv())?;
    }
    match h {
        Some(h) => {
            eprintln!("inversions={}", count_inversions(h.as_slice()));
            emit(&a.out, &io::format_int_line(h.as_slice()))?;
            Ok(Done::Ok)
        }
        None => Ok(Done::Failed(format!(
            "greedy construction did not complete: {}",
            transcript.completion_error.as_deref().unwrap_or("walk stalled")
        ))),
    }
}
