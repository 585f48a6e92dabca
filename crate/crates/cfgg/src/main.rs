//! Command-line front end: point-set generation, compilation, queries,
//! self-test, and benchmark reporting.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cfgg::cgraph::{CombinationGraph, Sense};
use cfgg::compilers::{compile_cf, compile_dsc, compile_sc, compile_st, Compilation};
use cfgg::gen;
use cfgg::geometry::{
    segment_length_fixed, twice_trapezoid_weight, PointSet, LENGTH_FIXED_SHIFT,
};
use cfgg::oracle::Objective;
use cfgg::selftest::run_selftest;
use cfgg::Family;

#[derive(Parser)]
#[command(
    name = "cfgg",
    about = "Compile crossing-free geometric graphs into a combination DAG and query it",
    long_about = "Compiles the chosen family of crossing-free geometric graphs on an \
integer point set into a DAG whose source-sink paths are exactly the family \
members, then answers counting, enumeration, uniform-sampling, and \
optimization queries on the DAG.\n\n\
Families: cf = all crossing-free graphs (includes the empty graph), st = \
spanning trees, sc = spanning cycles, dsc = counter-clockwise spanning \
cycles over directed segments.\n\n\
Point files are UTF-8 text with one \"x y\" integer pair per line; lines \
starting with '#' are ignored."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct FamilyPoints {
    /// Family to compile: cf|st|sc|dsc
    #[arg(long)]
    family: Family,
    /// Point file
    #[arg(long)]
    points: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point file in general position
    Gen {
        /// convex|random
        #[arg(long)]
        kind: gen::Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a family and report graph statistics
    Compile {
        #[command(flatten)]
        fp: FamilyPoints,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write a DOT rendering of the compiled graph
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Alias of compile: statistics of the compiled graph
    Stats {
        #[command(flatten)]
        fp: FamilyPoints,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the number of solutions
    Count {
        #[command(flatten)]
        fp: FamilyPoints,
    },
    /// Stream solutions, one per line, labels sorted
    Enumerate {
        #[command(flatten)]
        fp: FamilyPoints,
        /// Stop after this many solutions
        #[arg(long)]
        limit: Option<usize>,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw uniformly random solutions; deterministic per seed
    Sample {
        #[command(flatten)]
        fp: FamilyPoints,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Find an extremal spanning cycle.
    ///
    /// The area objective compiles the dsc family and reports the exact
    /// doubled integer area alongside area/2. The length objective
    /// compiles sc with fixed-point weights floor(|s| * 2^32), i.e.
    /// 2^-32 relative precision.
    Optimize {
        /// Point file
        #[arg(long)]
        points: PathBuf,
        /// area|length
        #[arg(long)]
        objective: Objective,
        /// min|max
        #[arg(long)]
        sense: Sense,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the oracle-equivalence suite for n = 3..=max-n
    Selftest {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Compile convex sets of growing size and report state-count ratios
    Bench {
        /// Largest convex n for the sc family
        #[arg(long, default_value_t = 12)]
        max_sc_n: usize,
        /// Largest convex n for the st family
        #[arg(long, default_value_t = 9)]
        max_st_n: usize,
    },
}

#[derive(Serialize)]
struct StatsJson {
    n: usize,
    family: String,
    nodes: usize,
    edges: usize,
    height: usize,
    count: String,
    build_ms: u128,
}

fn load_points(path: &PathBuf) -> Result<PointSet, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    PointSet::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn solution_line<L: Display>(labels: &[L]) -> String {
    labels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs a closure against the compiled graph of the requested family,
/// erasing the label-type difference between undirected and directed
/// compilations.
fn with_compiled<T>(
    ps: &PointSet,
    family: Family,
    f: impl FnOnce(DynGraph<'_>) -> T,
) -> Result<T, String> {
    match family {
        Family::Cf => {
            let c = compile_cf(ps).map_err(|e| e.to_string())?;
            Ok(f(DynGraph::Undirected(&c)))
        }
        Family::St => {
            let c = compile_st(ps).map_err(|e| e.to_string())?;
            Ok(f(DynGraph::Undirected(&c)))
        }
        Family::Sc => {
            let c = compile_sc(ps).map_err(|e| e.to_string())?;
            Ok(f(DynGraph::Undirected(&c)))
        }
        Family::Dsc => {
            let c = compile_dsc(ps).map_err(|e| e.to_string())?;
            Ok(f(DynGraph::Directed(&c)))
        }
    }
}

enum DynGraph<'a> {
    Undirected(&'a Compilation<cfgg::Segment>),
    Directed(&'a Compilation<cfgg::DirSeg>),
}

impl DynGraph<'_> {
    fn stats(&self) -> cfgg::Stats {
        match self {
            DynGraph::Undirected(c) => c.graph.stats(),
            DynGraph::Directed(c) => c.graph.stats(),
        }
    }

    fn states(&self) -> usize {
        match self {
            DynGraph::Undirected(c) => c.states,
            DynGraph::Directed(c) => c.states,
        }
    }

    fn dot(&self) -> String {
        match self {
            DynGraph::Undirected(c) => c.graph.to_dot(),
            DynGraph::Directed(c) => c.graph.to_dot(),
        }
    }

    fn enumerate_lines(&self, limit: Option<usize>) -> String {
        fn lines<L: cfgg::cgraph::EdgeLabel>(g: &CombinationGraph<L>, limit: Option<usize>) -> String {
            let mut s = String::new();
            for sol in g.enumerate(limit) {
                s.push_str(&solution_line(&sol));
                s.push('\n');
            }
            s
        }
        match self {
            DynGraph::Undirected(c) => lines(&c.graph, limit),
            DynGraph::Directed(c) => lines(&c.graph, limit),
        }
    }

    fn sample_lines(&self, seed: u64, k: usize) -> Result<String, String> {
        fn lines<L: cfgg::cgraph::EdgeLabel>(
            g: &CombinationGraph<L>,
            seed: u64,
            k: usize,
        ) -> Result<String, String> {
            let sols = g.sample(seed, k).map_err(|e| e.to_string())?;
            Ok(sols
                .iter()
                .map(|sol| solution_line(sol) + "\n")
                .collect::<String>())
        }
        match self {
            DynGraph::Undirected(c) => lines(&c.graph, seed, k),
            DynGraph::Directed(c) => lines(&c.graph, seed, k),
        }
    }
}

fn report_stats(
    ps: &PointSet,
    family: Family,
    g: &DynGraph<'_>,
    build_ms: u128,
    format: Format,
) -> String {
    let stats = g.stats();
    match format {
        Format::Json => {
            let json = StatsJson {
                n: ps.n(),
                family: family.tag().to_string(),
                nodes: stats.nodes,
                edges: stats.edges,
                height: stats.height,
                count: stats.count.to_string(),
                build_ms,
            };
            serde_json::to_string(&json).expect("stats serialize") + "\n"
        }
        Format::Text => format!(
            "n={} family={} nodes={} edges={} height={} count={} states={} build_ms={}\n",
            ps.n(),
            family.tag(),
            stats.nodes,
            stats.edges,
            stats.height,
            stats.count,
            g.states(),
            build_ms
        ),
    }
}

fn compile_and_report(
    fp: &FamilyPoints,
    format: Format,
    dot: Option<&PathBuf>,
) -> Result<i32, String> {
    let ps = load_points(&fp.points)?;
    let start = Instant::now();
    with_compiled(&ps, fp.family, |g| -> Result<(), String> {
        let build_ms = start.elapsed().as_millis();
        if let Some(path) = dot {
            fs::write(path, g.dot()).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
        print!("{}", report_stats(&ps, fp.family, &g, build_ms, format));
        Ok(())
    })??;
    Ok(0)
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Gen { kind, n, seed, out } => {
            let raw = gen::generate(kind, n, seed).map_err(|e| e.to_string())?;
            write_out(&out, &gen::to_point_file(&raw))?;
            Ok(0)
        }
        Command::Compile { fp, format, dot } => compile_and_report(&fp, format, dot.as_ref()),
        Command::Stats { fp, format } => compile_and_report(&fp, format, None),
        Command::Count { fp } => {
            let ps = load_points(&fp.points)?;
            let count = with_compiled(&ps, fp.family, |g| g.stats().count)?;
            println!("{count}");
            Ok(0)
        }
        Command::Enumerate { fp, limit, out } => {
            let ps = load_points(&fp.points)?;
            let text = with_compiled(&ps, fp.family, |g| g.enumerate_lines(limit))?;
            write_out(&out, &text)?;
            Ok(0)
        }
        Command::Sample { fp, seed, k } => {
            let ps = load_points(&fp.points)?;
            let text = with_compiled(&ps, fp.family, |g| g.sample_lines(seed, k))??;
            print!("{text}");
            Ok(0)
        }
        Command::Optimize {
            points,
            objective,
            sense,
            format,
        } => {
            let ps = load_points(&points)?;
            match objective {
                Objective::Area => {
                    let c = compile_dsc(&ps).map_err(|e| e.to_string())?;
                    let (value, sol) = c
                        .graph
                        .optimize(|d| twice_trapezoid_weight(&ps, d), sense)
                        .map_err(|e| e.to_string())?;
                    let half = format_half(value);
                    match format {
                        Format::Text => println!(
                            "objective=area sense={sense:?} twice_area={value} area={half} solution={}",
                            solution_line(&sol)
                        ),
                        Format::Json => println!(
                            "{}",
                            serde_json::json!({
                                "objective": "area",
                                "sense": format!("{sense:?}").to_lowercase(),
                                "twice_area": value.to_string(),
                                "area": half,
                                "solution": sol.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                            })
                        ),
                    }
                }
                Objective::Length => {
                    let c = compile_sc(&ps).map_err(|e| e.to_string())?;
                    let (value, sol) = c
                        .graph
                        .optimize(|s| segment_length_fixed(&ps, s), sense)
                        .map_err(|e| e.to_string())?;
                    let approx = value as f64 / (1u64 << LENGTH_FIXED_SHIFT) as f64;
                    match format {
                        Format::Text => println!(
                            "objective=length sense={sense:?} length_fixed={value} scale=2^-{LENGTH_FIXED_SHIFT} length~={approx} solution={}",
                            solution_line(&sol)
                        ),
                        Format::Json => println!(
                            "{}",
                            serde_json::json!({
                                "objective": "length",
                                "sense": format!("{sense:?}").to_lowercase(),
                                "length_fixed": value.to_string(),
                                "fixed_point_scale": format!("2^-{LENGTH_FIXED_SHIFT}"),
                                "length_approx": approx,
                                "solution": sol.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                            })
                        ),
                    }
                }
            }
            Ok(0)
        }
        Command::Selftest { max_n } => {
            let reports = run_selftest(max_n).map_err(|e| e.to_string())?;
            let mut failures = 0;
            for r in &reports {
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!("{status} {} ({})", r.name, r.detail);
                if !r.pass {
                    failures += 1;
                }
            }
            println!(
                "selftest: {}/{} checks passed",
                reports.len() - failures,
                reports.len()
            );
            Ok(if failures == 0 { 0 } else { 1 })
        }
        Command::Bench { max_sc_n, max_st_n } => {
            bench(max_sc_n, max_st_n)?;
            Ok(0)
        }
    }
}

fn format_half(doubled: i128) -> String {
    if doubled % 2 == 0 {
        format!("{}.0", doubled / 2)
    } else {
        format!("{}.5", doubled / 2)
    }
}

fn bench(max_sc_n: usize, max_st_n: usize) -> Result<(), String> {
    println!("family n states nodes edges count ratio build_ms");
    let mut prev: Option<usize> = None;
    for n in 4..=max_sc_n {
        let raw = gen::gen_convex(n, 1).map_err(|e| e.to_string())?;
        let ps = PointSet::new(&raw).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let c = compile_sc(&ps).map_err(|e| e.to_string())?;
        let ms = start.elapsed().as_millis();
        let st = c.graph.stats();
        let ratio = prev
            .map(|p| format!("{:.3}", c.states as f64 / p as f64))
            .unwrap_or_else(|| "-".into());
        println!(
            "sc {n} {} {} {} {} {ratio} {ms}",
            c.states, st.nodes, st.edges, st.count
        );
        prev = Some(c.states);
    }
    let mut prev: Option<usize> = None;
    for n in 4..=max_st_n {
        let raw = gen::gen_convex(n, 1).map_err(|e| e.to_string())?;
        let ps = PointSet::new(&raw).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let c = compile_st(&ps).map_err(|e| e.to_string())?;
        let ms = start.elapsed().as_millis();
        let st = c.graph.stats();
        let ratio = prev
            .map(|p| format!("{:.3}", c.states as f64 / p as f64))
            .unwrap_or_else(|| "-".into());
        println!(
            "st {n} {} {} {} {} {ratio} {ms}",
            c.states, st.nodes, st.edges, st.count
        );
        prev = Some(c.states);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
