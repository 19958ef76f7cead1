//! `specgap`: certified spectra, bound checks, constructions and sweeps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;

use specgap::bounds::{
    check_regular_variants, check_subgraph_gap, max_cut, min_bipartization, BoundError, CheckId, TolerancePolicy,
    Verdict,
};
use specgap::constructions::{build_theorem2_construction, build_theorem3_construction, ConstructionReport};
use specgap::eig::{bits_for_tolerance, EigConfig, Spectrum, DEFAULT_MAX_PRECISION_BITS, PRECISION_ENV};
use specgap::graph::Graph;
use specgap::harness::{
    construction_outcome_of, parse_checks, parse_decimal, random_corpus, read_corpus, run_sweep, HarnessError, Outcome,
    ReportPaths, ReportWriter, Source, SummaryRow, Tally, DECIMAL_DIGITS,
};

const EXIT_FAILS: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_IO: u8 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "specgap",
    version,
    about = "Certified extreme eigenvalues and spectral gap bounds for graphs"
)]
struct Cli {
    /// Cap on fractional bits spent on any eigenvalue bracket.
    #[arg(
        long,
        global = true,
        env = PRECISION_ENV,
        default_value_t = DEFAULT_MAX_PRECISION_BITS,
        value_parser = clap::value_parser!(u32).range(1..)
    )]
    max_precision_bits: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enclosures of the largest and smallest adjacency eigenvalue.
    Spectrum {
        #[command(flatten)]
        input: GraphInput,
        /// Width of each printed enclosure.
        #[arg(long, default_value_t = 1e-12, value_parser = positive_f64)]
        tol: f64,
        /// JSON-lines output file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one check; exit 0 on holds or skipped, 2 on fails, 3 on undecided.
    Check {
        #[arg(long)]
        id: CheckId,
        #[command(flatten)]
        input: GraphInput,
        /// Only the deletion of this edge, for per-edge checks (`u,v`).
        #[arg(long, value_parser = parse_edge, conflicts_with = "subgraph")]
        edge: Option<(usize, usize)>,
        /// Proper spanning subgraph H (graph6) for T1, T1a_strong and T11.
        #[arg(long)]
        subgraph: Option<String>,
        /// Report directory (detail.jsonl, summary.csv, counterexamples.g6).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and validate an extremal construction.
    Construct {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long, required_if_eq("family", "thm2"))]
        k: Option<usize>,
        #[arg(long = "D", alias = "d", required_if_eq("family", "thm2"))]
        d: Option<u32>,
        #[arg(long, required_if_eq("family", "thm3"))]
        n: Option<usize>,
        /// Rational in (0, 1/16), as `p/q` or a decimal.
        #[arg(long, value_parser = parse_rational, required_if_eq("family", "thm3"))]
        eps: Option<BigRational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run checks over a graph source.
    Sweep {
        #[command(flatten)]
        source: SweepSource,
        /// Comma-separated check ids, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        threads: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Orders of random graphs (with `--random`).
        #[arg(long, default_value_t = 2)]
        min_n: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Values of k and D for `--thm2-grid`.
        #[arg(long, value_delimiter = ',', default_values_t = [3, 4, 5, 6])]
        ks: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 6, 7, 8])]
        ds: Vec<u32>,
    },
    /// Exact minimum number of edges whose removal leaves a bipartite graph.
    Bipartization {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproducible corpus of random connected graphs, one graph6 per line.
    Random {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        min_n: u64,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GraphInput {
    /// Graph in graph6 format.
    graph6: Option<String>,
    /// File of graph6 lines.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct SweepSource {
    /// Every labeled connected graph of this order.
    #[arg(long)]
    enumerate: Option<usize>,
    #[arg(long)]
    file: Option<PathBuf>,
    /// This many random connected graphs.
    #[arg(long)]
    random: Option<usize>,
    /// Triangle/K_(k,k) instances over `--ks` x `--ds`.
    #[arg(long)]
    thm2_grid: bool,
    /// K_(r,r)/K_s instances, `n:eps` pairs separated by commas.
    #[arg(long, value_delimiter = ',', value_parser = parse_thm3_instance)]
    thm3: Option<Vec<(usize, BigRational)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Thm2,
    Thm3,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once(',').ok_or("expected `u,v`")?;
    let u: usize = u.trim().parse().map_err(|_| format!("bad vertex `{u}`"))?;
    let v: usize = v.trim().parse().map_err(|_| format!("bad vertex `{v}`"))?;
    Ok((u.min(v), u.max(v)))
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.parse::<BigRational>()
        .ok()
        .or_else(|| parse_decimal(s))
        .ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn parse_thm3_instance(s: &str) -> Result<(usize, BigRational), String> {
    let (n, eps) = s.split_once(':').ok_or("expected `n:eps`")?;
    Ok((
        n.trim().parse().map_err(|_| format!("bad order `{n}`"))?,
        parse_rational(eps.trim())?,
    ))
}

/// A failed run, with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl ToString) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let code = match &e {
            HarnessError::Io { .. } | HarnessError::Csv { .. } => EXIT_IO,
            HarnessError::Corpus { .. } | HarnessError::Graph(_) | HarnessError::Construction(_) => EXIT_DATA,
            HarnessError::NoChecks => EXIT_USAGE,
            HarnessError::Threads(_) => EXIT_SOFTWARE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Run = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("specgap: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Run {
    let policy = TolerancePolicy::with_cap(cli.max_precision_bits);
    match cli.command {
        Command::Spectrum { input, tol, out } => spectrum(&input, tol, &policy.eig, out.as_deref()),
        Command::Check {
            id,
            input,
            edge,
            subgraph,
            out,
        } => check(id, &input, edge, subgraph.as_deref(), &policy, out.as_deref()),
        Command::Construct {
            family,
            k,
            d,
            n,
            eps,
            out,
        } => {
            let t = Instant::now();
            let (report, check_id) = match family {
                FamilyArg::Thm2 => (
                    build_theorem2_construction(k.unwrap_or(0), d.unwrap_or(0), &policy),
                    CheckId::Thm2,
                ),
                FamilyArg::Thm3 => {
                    let eps = eps.expect("required by clap");
                    (
                        build_theorem3_construction(n.unwrap_or(0), &eps, &policy),
                        CheckId::Thm3,
                    )
                }
            };
            let report = report.map_err(Failure::data)?;
            construct(&report, check_id, t.elapsed(), out.as_deref())
        }
        Command::Sweep {
            source,
            checks,
            threads,
            out,
            min_n,
            max_n,
            seed,
            ks,
            ds,
        } => {
            let checks = parse_checks(&checks).map_err(|e| Failure::usage(e.to_string()))?;
            let source = if let Some(n) = source.enumerate {
                Source::Enumerate(n)
            } else if let Some(path) = source.file {
                Source::Corpus(path)
            } else if let Some(count) = source.random {
                if !(1 <= min_n && min_n <= max_n) {
                    return Err(Failure::usage(format!("bad order range {min_n}..={max_n}")));
                }
                Source::Graphs(random_corpus(count, min_n, max_n, seed))
            } else if source.thm2_grid {
                Source::Theorem2Grid { ks, ds }
            } else {
                Source::Theorem3 {
                    instances: source.thm3.unwrap_or_default(),
                }
            };
            sweep(&source, &checks, &policy, threads.map(|t| t as usize), out.as_deref())
        }
        Command::Bipartization { input, out } => bipartization(&input, out.as_deref()),
        Command::Random {
            count,
            seed,
            min_n,
            max_n,
            out,
        } => {
            if min_n > max_n {
                return Err(Failure::usage(format!("bad order range {min_n}..={max_n}")));
            }
            let text: String = random_corpus(count, min_n as usize, max_n as usize, seed)
                .iter()
                .map(|g| g.to_graph6() + "\n")
                .collect();
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| Failure::io(&path, e))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn read_graphs(input: &GraphInput) -> Result<Vec<Graph>, Failure> {
    match (&input.graph6, &input.file) {
        (Some(s), None) => Ok(vec![
            Graph::from_graph6(s.trim()).map_err(|e| Failure::data(format!("{s}: {e}")))?
        ]),
        (None, Some(path)) => Ok(read_corpus(path)?),
        _ => Err(Failure::usage("give a graph6 string or --file")),
    }
}

/// Buffered writer on `path`, creating parent directories.
fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Failure::io(parent, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Failure::io(path, e))?))
}

fn write_jsonl(path: &Path, rows: &[serde_json::Value]) -> Result<(), Failure> {
    let mut w = create(path)?;
    for row in rows {
        writeln!(w, "{row}").map_err(|e| Failure::io(path, e))?;
    }
    w.flush().map_err(|e| Failure::io(path, e))
}

fn spectrum(input: &GraphInput, tol: f64, cfg: &EigConfig, out: Option<&Path>) -> Run {
    let bits = bits_for_tolerance(tol).map_err(Failure::data)?;
    let mut rows = Vec::new();
    for g in read_graphs(input)? {
        let s = Spectrum::with_config(&g, cfg).summary(bits);
        println!("{} (n={}, m={})", g.to_graph6(), g.order(), g.edge_count());
        println!("  mu     {}", s.mu);
        println!("  mu_min {}", s.mu_min);
        println!(
            "  bits {} via {}{}",
            s.precision_bits,
            s.method.tag(),
            if s.capped { " (capped)" } else { "" }
        );
        rows.push(json!({
            "graph6": g.to_graph6(),
            "n": g.order(),
            "m": g.edge_count(),
            "mu_lo": s.mu.lo_decimal(DECIMAL_DIGITS),
            "mu_hi": s.mu.hi_decimal(DECIMAL_DIGITS),
            "mu_min_lo": s.mu_min.lo_decimal(DECIMAL_DIGITS),
            "mu_min_hi": s.mu_min.hi_decimal(DECIMAL_DIGITS),
            "precision_bits": s.precision_bits,
            "method": s.method.tag(),
            "capped": s.capped,
        }));
    }
    if let Some(path) = out {
        write_jsonl(path, &rows)?;
    }
    Ok(0)
}

/// Exit status from verdict counts: any failure beats any undecided.
fn status(fails: u64, undecided: u64) -> u8 {
    if fails > 0 {
        EXIT_FAILS
    } else if undecided > 0 {
        EXIT_UNDECIDED
    } else {
        0
    }
}

fn print_outcome(o: &Outcome) {
    let v = &o.verdict;
    let edge = o.edge.map(|(u, w)| format!(" -({u},{w})")).unwrap_or_default();
    let sides = match (&v.lhs, &v.rhs) {
        (Some(l), Some(r)) => format!("  {l} {} {r}", v.relation.symbol()),
        _ => String::new(),
    };
    println!("{} {}{edge}: {}{sides}", v.check_id, o.graph_id, v.verdict.as_str());
    let hyps = v.hypothesis_report();
    if !hyps.is_empty() {
        println!("  hypotheses {hyps}");
    }
    for n in &v.notes {
        println!("  note {n}");
    }
}

/// Prints and records outcomes, returning the verdict-based exit status.
fn finish(outcomes: &[Outcome], out: Option<&Path>) -> Run {
    let mut tally = Tally::new();
    let mut writer = out
        .map(|dir| ReportWriter::create(ReportPaths::in_dir(dir)))
        .transpose()?;
    for o in outcomes {
        print_outcome(o);
        tally.add_outcome(o);
        if let Some(w) = writer.as_mut() {
            w.write(&o.record())?;
        }
    }
    if let Some(w) = writer {
        w.finish()?;
    }
    let rows = tally.rows();
    Ok(status(
        rows.iter().map(|r| r.fails).sum(),
        rows.iter().map(|r| r.undecided).sum(),
    ))
}

fn check(
    id: CheckId,
    input: &GraphInput,
    edge: Option<(usize, usize)>,
    subgraph: Option<&str>,
    policy: &TolerancePolicy,
    out: Option<&Path>,
) -> Run {
    if CheckId::CONSTRUCTIONS.contains(&id) {
        return Err(Failure::usage(format!(
            "{id} validates a construction; use `construct`"
        )));
    }
    let per_edge = matches!(id, CheckId::T1 | CheckId::T1aStrong | CheckId::T11 | CheckId::DistLemma);
    if edge.is_some() && !per_edge {
        return Err(Failure::usage(format!("--edge does not apply to {id}")));
    }
    if subgraph.is_some() && !matches!(id, CheckId::T1 | CheckId::T1aStrong | CheckId::T11) {
        return Err(Failure::usage(format!("--subgraph does not apply to {id}")));
    }
    let graphs = read_graphs(input)?;
    let mut outcomes = Vec::new();
    if let Some(h6) = subgraph {
        let h = Graph::from_graph6(h6.trim()).map_err(|e| Failure::data(format!("{h6}: {e}")))?;
        for (index, g) in graphs.iter().enumerate() {
            let t = Instant::now();
            let verdicts = if id == CheckId::T11 {
                check_regular_variants(g, Some(&h), policy)
            } else {
                check_subgraph_gap(g, &h, policy)
            }
            .map_err(Failure::data)?;
            let wall_time = t.elapsed();
            let g6: std::sync::Arc<str> = g.to_graph6().into();
            outcomes.extend(
                verdicts
                    .into_iter()
                    .filter(|v| v.check_id == id)
                    .map(|verdict| Outcome {
                        index,
                        graph_id: g6.clone(),
                        graph6: g6.clone(),
                        edge: None,
                        verdict,
                        wall_time,
                    }),
            );
        }
    } else {
        if let Some((u, v)) = edge {
            if let Some(g) = graphs
                .iter()
                .find(|g| u >= g.order() || v >= g.order() || !g.has_edge(u, v))
            {
                return Err(Failure::data(
                    BoundError::EdgeNotInGraph { u, v }.to_string() + " " + &g.to_graph6(),
                ));
            }
        }
        run_sweep(&Source::Graphs(graphs), &[id], policy, Some(1), |o| {
            if edge.is_none() || o.edge == edge {
                outcomes.push(o);
            }
        })?;
    }
    finish(&outcomes, out)
}

fn construct(
    report: &ConstructionReport,
    check_id: CheckId,
    wall_time: std::time::Duration,
    out: Option<&Path>,
) -> Run {
    let g = &report.graph;
    println!("{}", report.label);
    println!("graph6 {}", g.to_graph6());
    println!("order {} edges {}", g.order(), g.edge_count());
    for c in &report.claims {
        println!(
            "{} {}: {} {} {}",
            c.name,
            c.verdict.as_str(),
            c.lhs,
            c.relation.symbol(),
            c.rhs
        );
    }
    if let Some(v) = &report.gap_check {
        let sides = match (&v.lhs, &v.rhs) {
            (Some(l), Some(r)) => format!(" {l} {} {r}", v.relation.symbol()),
            _ => String::new(),
        };
        println!("{} on the instance {}:{sides}", v.check_id, v.verdict.as_str());
    }
    for n in &report.notes {
        println!("note {n}");
    }
    let outcome = construction_outcome_of(0, check_id, report, wall_time);
    if let Some(dir) = out {
        let mut w = ReportWriter::create(ReportPaths::in_dir(dir))?;
        w.write(&outcome.record())?;
        w.finish()?;
    }
    let overall = report.overall();
    println!("overall {}", overall.as_str());
    Ok(status(
        (overall == Verdict::Fails) as u64,
        (overall == Verdict::Undecided) as u64,
    ))
}

fn print_summary(rows: &[SummaryRow]) {
    println!(
        "{:<13} {:>9} {:>9} {:>7} {:>9} {:>9}  {:<24} {:>5}",
        "check", "total", "holds", "fails", "undecided", "skipped", "min_margin", "bits"
    );
    for r in rows {
        println!(
            "{:<13} {:>9} {:>9} {:>7} {:>9} {:>9}  {:<24} {:>5}",
            r.check_id,
            r.total,
            r.holds,
            r.fails,
            r.undecided,
            r.skipped,
            r.min_margin.as_deref().unwrap_or("-"),
            r.max_precision_bits
        );
    }
}

fn sweep(
    source: &Source,
    checks: &[CheckId],
    policy: &TolerancePolicy,
    threads: Option<usize>,
    out: Option<&Path>,
) -> Run {
    let mut writer = out
        .map(|dir| ReportWriter::create(ReportPaths::in_dir(dir)))
        .transpose()?;
    let mut tally = Tally::new();
    let mut write_err = None;
    let stats = run_sweep(source, checks, policy, threads, |o| {
        tally.add_outcome(&o);
        if let Some(w) = writer.as_mut() {
            if write_err.is_none() {
                write_err = w.write(&o.record()).err();
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let rows = match writer {
        Some(w) => w.finish()?,
        None => tally.rows(),
    };
    println!("{} graphs, {} outcomes", stats.graphs, stats.outcomes);
    print_summary(&rows);
    Ok(status(
        rows.iter().map(|r| r.fails).sum(),
        rows.iter().map(|r| r.undecided).sum(),
    ))
}

fn bipartization(input: &GraphInput, out: Option<&Path>) -> Run {
    let mut rows = Vec::new();
    for g in read_graphs(input)? {
        let b = min_bipartization(&g).map_err(Failure::data)?;
        let cut = max_cut(&g).map_err(Failure::data)?;
        println!("{} b={b} max_cut={cut} edges={}", g.to_graph6(), g.edge_count());
        rows.push(json!({ "graph6": g.to_graph6(), "n": g.order(), "m": g.edge_count(), "min_bipartization": b, "max_cut": cut }));
    }
    if let Some(path) = out {
        write_jsonl(path, &rows)?;
    }
    Ok(0)
}
