//! `trilat`: counting, coloring and verification tools for equilateral
//! triangles on the triangular lattice.
//!
//! Exit status: 0 success, 1 verification failure, 2 malformed input,
//! 3 solver gave up within its budget, 64 usage error.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use trilat::coloring::{
    is_proper, is_proper_parallel, read_certificate, write_certificate, Coloring,
};
use trilat::constructions::{banded_coloring_jobs, chevron_coloring, minimal_spacer, stripe_partition_coloring};
use trilat::counting::CountReport;
use trilat::dimacs::{export_dimacs, import_assignment, parse_solver_output, run_external, SatAnswer};
use trilat::render::{render_svg, RenderOptions};
use trilat::solver::{
    compute_f_by, solve_hypergraph, Budget, ChromaticBounds, Hypergraph, SolveOutcome, SolveStatus,
};
use trilat::triangles::{classify_pairs, for_each_triangle};
use trilat::triples::{
    is_modified_sts, profile, read_triples, search_modified_sts, write_triples, SearchOptions,
    TripleSearch, TripleSystem,
};
use trilat::{Error, Region};

use output::{Format, Report};

const EXIT_FAILED: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "trilat", version, about = "Equilateral triangles and their colorings on the triangular lattice")]
struct Cli {
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Worker threads; 1 keeps every result reproducible.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Triangle and pair counts of T_n from closed forms, optionally cross-checked by enumeration.
    Count {
        #[arg(long)]
        n: u64,
        /// Last n of a range starting at --n.
        #[arg(long)]
        to: Option<u64>,
        /// Also enumerate and fail unless the counts agree.
        #[arg(long)]
        brute: bool,
    },
    /// List every equilateral triangle of T_n.
    Enumerate {
        #[arg(long)]
        n: u32,
    },
    /// Count point pairs of T_n by number of apex completions, or list one class.
    Classify {
        #[arg(long)]
        n: u32,
        /// List the pairs with this many completions (0, 1 or 2).
        #[arg(long)]
        class: Option<u8>,
    },
    /// Decide whether a region has a proper coloring with K colors.
    Solve {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the coloring here when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound or determine the least number of colors for T_n.
    F {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        /// A certificate for T_n to start from as the upper bound.
        #[arg(long)]
        known: Option<PathBuf>,
        /// Write the best coloring found here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an explicit coloring of T_n.
    Construct {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long)]
        n: u32,
        /// Central columns for the banded scheme; searched for when omitted.
        #[arg(long)]
        d: Option<u32>,
        /// Periodic stripe certificate used as the base block.
        #[arg(long)]
        block: Option<PathBuf>,
        /// Without --block: rows of the stripe to search a block for.
        #[arg(long, default_value_t = 6)]
        width: u32,
        /// Without --block: colors of the block to search for.
        #[arg(long, default_value_t = 4)]
        block_colors: u32,
        /// Certificate destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate; exits 1 if some triangle is monochromatic.
    Verify { certificate: PathBuf },
    /// Write the K-coloring problem of a region as DIMACS CNF.
    ExportDimacs {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn SAT solver output for an exported CNF into a certificate.
    ImportSolution {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long)]
        k: u32,
        /// Solver output in SAT-competition format.
        solution: PathBuf,
        /// Certificate destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a periodic coloring of the stripe S_k, or build one from a coloring of T_k.
    Stripe {
        #[arg(long)]
        k: u32,
        #[arg(long, required_unless_present = "partition")]
        colors: Option<u32>,
        #[arg(long, default_value_t = 1)]
        min_period: u32,
        #[arg(long, default_value_t = 12)]
        max_period: u32,
        /// Tile S_k with copies of this T_k coloring instead of searching.
        #[arg(long, conflicts_with = "colors")]
        partition: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Modified Steiner triple systems.
    Triples {
        #[command(subcommand)]
        action: TriplesAction,
    },
    /// Draw a certificate as SVG.
    Render {
        certificate: PathBuf,
        /// Outline a monochromatic triangle if there is one.
        #[arg(long)]
        witness: bool,
        /// Print color indices inside the discs.
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TriplesAction {
    /// Report the pair profile and defect of a triple system.
    Check { file: PathBuf },
    /// Exhaustively search for a system on V points with defect R.
    Search {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the triangles of T_n as a triple system.
    Triangles {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Chevron,
    Banded,
}

#[derive(Args, Clone, Copy)]
struct RegionArgs {
    /// Rows of the triangle T_n.
    #[arg(long, conflicts_with_all = ["stripe", "period"], required_unless_present = "stripe")]
    n: Option<u32>,
    /// Rows of a periodic stripe S_k.
    #[arg(long, requires = "period")]
    stripe: Option<u32>,
    /// Period of the stripe coloring.
    #[arg(long, requires = "stripe")]
    period: Option<u32>,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Stop after this many branching decisions.
    #[arg(long)]
    nodes: Option<u64>,
    /// Stop after this many seconds of wall clock (not reproducible).
    #[arg(long)]
    timeout: Option<f64>,
    /// External SAT solver command; the CNF file path is appended.
    #[arg(long)]
    sat_cmd: Option<String>,
}

/// How a run ended, before mapping to an exit status.
enum Failure {
    Usage(String),
    Malformed(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidArgument(_)
            | Error::DegeneratePair(_)
            | Error::PeriodicRegion(_)
            | Error::NoRhombi(_) => Failure::Usage(e.to_string()),
            Error::Improper(_) | Error::Integrity(_) => Failure::Failed(e.to_string()),
            _ => Failure::Malformed(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Malformed(m) => (EXIT_MALFORMED, m),
                Failure::Failed(m) => (EXIT_FAILED, m),
            };
            eprintln!("trilat: {message}");
            ExitCode::from(code)
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

fn check_range(name: &str, value: u64, lo: u64, hi: u64) -> Result<(), Failure> {
    if value < lo || value > hi {
        return Err(usage(format!("--{name} must be in {lo}..={hi}, got {value}")));
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display())))
}

/// Writes to `out` if given, otherwise to stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_certificate(path: &Path) -> Result<Coloring, Failure> {
    read_certificate(&read_text(path)?).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

impl RegionArgs {
    fn region(&self) -> Result<Region, Failure> {
        match (self.n, self.stripe, self.period) {
            (Some(n), None, None) => {
                check_range("n", n.into(), 1, 5000)?;
                Ok(Region::triangle(n))
            }
            (None, Some(k), Some(p)) => {
                check_range("stripe", k.into(), 1, 1000)?;
                check_range("period", p.into(), 1, 100_000)?;
                Ok(Region::periodic_stripe(k, p))
            }
            _ => Err(usage("give either --n or both --stripe and --period")),
        }
    }
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget, Failure> {
        let timeout = match self.timeout {
            Some(s) if !(s.is_finite() && s > 0.0) => return Err(usage("--timeout must be a positive number of seconds")),
            Some(s) => {
                eprintln!("trilat: note: wall-clock budget of {s} s; results may differ between runs");
                Some(Duration::from_secs_f64(s))
            }
            None => None,
        };
        Ok(Budget { nodes: self.nodes, timeout })
    }

    fn json(&self) -> Value {
        json!({
            "nodes": self.nodes,
            "timeout_seconds": self.timeout,
            "deterministic": self.timeout.is_none(),
            "external": self.sat_cmd,
        })
    }

    /// Decides `K`-colorability of `region` with the internal search or the
    /// external solver.
    fn decide(&self, region: &Region, k: u32) -> Result<SolveOutcome, Error> {
        let budget = Budget { nodes: self.nodes, timeout: self.timeout.map(Duration::from_secs_f64) };
        match &self.sat_cmd {
            Some(cmd) => run_external(cmd, &export_dimacs(region, k)?, budget.timeout),
            None => solve_hypergraph(&Hypergraph::for_region(region), k, budget),
        }
    }
}

fn seconds(d: Duration) -> Value {
    json!((d.as_secs_f64() * 1e6).round() / 1e6)
}

fn outcome_code(status: &SolveStatus) -> u8 {
    match status {
        SolveStatus::Unknown => EXIT_UNKNOWN,
        _ => 0,
    }
}

fn u128_value(x: u128) -> Result<Value, Failure> {
    u64::try_from(x).map(Value::from).map_err(|_| usage("count exceeds 64 bits; use a smaller --n"))
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    let jobs = cli.jobs;
    if jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    match cli.command {
        Command::Count { n, to, brute } => count(format, n, to, brute),
        Command::Enumerate { n } => enumerate(format, n),
        Command::Classify { n, class } => classify(format, n, class),
        Command::Solve { region, k, budget, out } => solve(format, &region, k, &budget, out.as_deref()),
        Command::F { n, budget, known, out } => f(format, n, &budget, known.as_deref(), out.as_deref()),
        Command::Construct { scheme, n, d, block, width, block_colors, out } => {
            construct(format, jobs, scheme, n, d, block.as_deref(), width, block_colors, out.as_deref())
        }
        Command::Verify { certificate } => verify(format, jobs, &certificate),
        Command::ExportDimacs { region, k, out } => {
            let region = region.region()?;
            check_range("k", k.into(), 1, 1000)?;
            emit(out.as_deref(), &export_dimacs(&region, k)?.to_dimacs())?;
            Ok(0)
        }
        Command::ImportSolution { region, k, solution, out } => {
            import_solution(format, &region, k, &solution, out.as_deref())
        }
        Command::Stripe { k, colors, min_period, max_period, partition, budget, out } => stripe(
            format,
            jobs,
            StripeArgs { k, colors, min_period, max_period, partition, budget, out },
        ),
        Command::Triples { action } => triples(format, jobs, action),
        Command::Render { certificate, witness, labels, out } => {
            let c = load_certificate(&certificate)?;
            let shown = if witness { is_proper(&c).witness() } else { None };
            let svg = render_svg(&c, shown, &RenderOptions { labels, ..Default::default() });
            emit(out.as_deref(), &svg)?;
            Ok(0)
        }
    }
}

fn count(format: Format, n: u64, to: Option<u64>, brute: bool) -> Outcome {
    let last = to.unwrap_or(n);
    check_range("n", n, 1, 100_000)?;
    check_range("to", last, n, 100_000)?;
    if brute && last > 200 {
        return Err(usage("--brute enumerates every triangle; keep n at most 200"));
    }
    let mut report = Report::new(&["n", "alpha", "beta", "gamma", "a0", "a1", "a2", "source"]);
    let mut code = 0;
    for n in n..=last {
        let closed = CountReport::closed_form(n);
        let mut sources = vec![(closed, "closed")];
        if brute {
            let b = CountReport::brute_force(n);
            if !b.same_counts(&closed) {
                eprintln!("trilat: n = {n}: enumeration disagrees with the closed forms");
                code = EXIT_FAILED;
            }
            sources.push((b, "enumerated"));
        }
        for (r, source) in sources {
            report.row(vec![
                json!(r.n),
                u128_value(r.alpha)?,
                u128_value(r.beta)?,
                u128_value(r.gamma)?,
                u128_value(r.a0)?,
                u128_value(r.a1)?,
                u128_value(r.a2)?,
                json!(source),
            ]);
        }
    }
    print!("{}", report.render(format));
    Ok(code)
}

fn enumerate(format: Format, n: u32) -> Outcome {
    check_range("n", n.into(), 1, 60)?;
    let mut report = Report::new(&["a1", "b1", "a2", "b2", "a3", "b3", "side2", "upright"]);
    for_each_triangle(&Region::triangle(n), |t| {
        let [p, q, r] = t.vertices();
        report.row(vec![
            json!(p.a),
            json!(p.b),
            json!(q.a),
            json!(q.b),
            json!(r.a),
            json!(r.b),
            json!(t.side2()),
            json!(t.is_upright()),
        ]);
    })?;
    print!("{}", report.render(format));
    Ok(0)
}

fn classify(format: Format, n: u32, class: Option<u8>) -> Outcome {
    check_range("n", n.into(), 1, 300)?;
    let classes = classify_pairs(&Region::triangle(n))?;
    match class {
        None => {
            let (a0, a1, a2) = classes.tallies();
            let mut report = Report::new(&["completions", "pairs"]);
            for (c, count) in [(0, a0), (1, a1), (2, a2)] {
                report.row(vec![json!(c), json!(count)]);
            }
            print!("{}", report.render(format));
        }
        Some(c) => {
            check_range("class", c.into(), 0, 2)?;
            let mut report = Report::new(&["a1", "b1", "a2", "b2"]);
            for (p, q) in classes.pairs_in_class(c) {
                report.row(vec![json!(p.a), json!(p.b), json!(q.a), json!(q.b)]);
            }
            print!("{}", report.render(format));
        }
    }
    Ok(0)
}

fn solve(format: Format, region: &RegionArgs, k: u32, budget: &BudgetArgs, out: Option<&Path>) -> Outcome {
    let region = region.region()?;
    check_range("k", k.into(), 1, 64)?;
    budget.budget()?;
    let outcome = budget.decide(&region, k)?;
    if let SolveStatus::Sat(c) = &outcome.status {
        if let Some(path) = out {
            write_text(path, &write_certificate(c))?;
        }
    }
    let mut report = Report::new(&["region", "k", "status", "nodes", "seconds", "colors_used"]);
    report.row(vec![
        json!(region.to_string()),
        json!(k),
        json!(outcome.status.label()),
        json!(outcome.stats.nodes),
        seconds(outcome.stats.elapsed),
        outcome.coloring().map_or(Value::Null, |c| json!(c.color_count())),
    ]);
    report.summary(format!("{region} K={k}: {}", outcome.status.label()), json!({
        "status": outcome.status.label(),
        "budget": budget.json(),
    }));
    print!("{}", report.render(format));
    Ok(outcome_code(&outcome.status))
}

fn f(format: Format, n: u32, budget: &BudgetArgs, known: Option<&Path>, out: Option<&Path>) -> Outcome {
    check_range("n", n.into(), 1, 5000)?;
    budget.budget()?;
    let known = known.map(load_certificate).transpose()?;
    let region = Region::triangle(n);
    let bounds: ChromaticBounds = compute_f_by(n, known.as_ref(), |k| budget.decide(&region, k))?;
    if let Some(path) = out {
        write_text(path, &write_certificate(&bounds.witness))?;
    }
    let mut report = Report::new(&["k", "status", "nodes", "seconds"]);
    for (k, status, stats) in &bounds.steps {
        report.row(vec![json!(k), json!(status.label()), json!(stats.nodes), seconds(stats.elapsed)]);
    }
    let text = match bounds.exact() {
        Some(v) => format!("f({n}) = {v}"),
        None => format!("{} <= f({n}) <= {}", bounds.lower, bounds.upper),
    };
    report.summary(text, json!({
        "n": n,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "exact": bounds.exact(),
        "budget": budget.json(),
    }));
    print!("{}", report.render(format));
    Ok(if bounds.exact().is_some() { 0 } else { EXIT_UNKNOWN })
}

/// Loads `--block` or searches a periodic coloring of `S_width` with
/// `block_colors` colors over periods 1..=12.
fn base_block(jobs: usize, block: Option<&Path>, width: u32, block_colors: u32) -> Result<Coloring, Failure> {
    if let Some(path) = block {
        return load_certificate(path);
    }
    check_range("width", width.into(), 1, 64)?;
    check_range("block-colors", block_colors.into(), 1, 64)?;
    let attempts = trilat::solver::search_stripe_periods(width, block_colors, 1..=12, Budget::unlimited(), jobs)?;
    attempts
        .into_iter()
        .find_map(|(_, o)| o.coloring().cloned())
        .ok_or_else(|| Failure::Failed(format!("S{width} has no periodic {block_colors}-coloring with period at most 12")))
}

#[allow(clippy::too_many_arguments)]
fn construct(
    format: Format,
    jobs: usize,
    scheme: Scheme,
    n: u32,
    d: Option<u32>,
    block: Option<&Path>,
    width: u32,
    block_colors: u32,
    out: Option<&Path>,
) -> Outcome {
    check_range("n", n.into(), 1, 5000)?;
    let (coloring, spacer) = match scheme {
        Scheme::Chevron => {
            if d.is_some() || block.is_some() {
                return Err(usage("--d and --block apply to the banded scheme only"));
            }
            (chevron_coloring(n), None)
        }
        Scheme::Banded => {
            let block = base_block(jobs, block, width, block_colors)?;
            match d {
                Some(d) => {
                    check_range("d", d.into(), 0, 2 * u64::from(n))?;
                    (banded_coloring_jobs(n, &block, d, jobs)?, Some(d))
                }
                None => {
                    let search = minimal_spacer(n, &block, jobs)?;
                    (search.coloring, Some(search.spacer))
                }
            }
        }
    };
    let cert = write_certificate(&coloring);
    match out {
        None => print!("{cert}"),
        Some(path) => {
            write_text(path, &cert)?;
            let mut report = Report::new(&["scheme", "n", "colors", "spacer", "ratio"]);
            let used = coloring.color_count();
            report.row(vec![
                json!(match scheme {
                    Scheme::Chevron => "chevron",
                    Scheme::Banded => "banded",
                }),
                json!(n),
                json!(used),
                spacer.map_or(Value::Null, |d| json!(d)),
                json!((used as f64 / n as f64 * 1e4).round() / 1e4),
            ]);
            print!("{}", report.render(format));
        }
    }
    Ok(0)
}

fn verify(format: Format, jobs: usize, path: &Path) -> Outcome {
    let c = load_certificate(path)?;
    let start = Instant::now();
    let verdict = is_proper_parallel(&c, jobs);
    let mut report = Report::new(&["region", "points", "colors", "colors_used", "verdict", "witness", "seconds"]);
    let points = if c.region().is_finite() { c.region().len() } else { c.colors().len() };
    report.row(vec![
        json!(c.region().to_string()),
        json!(points),
        json!(c.num_colors()),
        json!(c.color_count()),
        json!(if verdict.is_proper() { "proper" } else { "improper" }),
        verdict.witness().map_or(Value::Null, |t| json!(t.to_string())),
        seconds(start.elapsed()),
    ]);
    print!("{}", report.render(format));
    Ok(if verdict.is_proper() { 0 } else { EXIT_FAILED })
}

fn import_solution(format: Format, region: &RegionArgs, k: u32, solution: &Path, out: Option<&Path>) -> Outcome {
    let region = region.region()?;
    check_range("k", k.into(), 1, 1000)?;
    let text = read_text(solution)?;
    let answer = parse_solver_output(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", solution.display())))?;
    let status = match answer {
        SatAnswer::Satisfiable(_) => {
            let cnf = export_dimacs(&region, k)?;
            let c = import_assignment(&cnf, &text)?;
            emit(out, &write_certificate(&c))?;
            if out.is_none() {
                return Ok(0);
            }
            "SAT"
        }
        SatAnswer::Unsatisfiable => "UNSAT",
        SatAnswer::Unknown => "UNKNOWN",
    };
    let mut report = Report::new(&["region", "k", "status"]);
    report.row(vec![json!(region.to_string()), json!(k), json!(status)]);
    print!("{}", report.render(format));
    Ok(if status == "UNKNOWN" { EXIT_UNKNOWN } else { 0 })
}

struct StripeArgs {
    k: u32,
    colors: Option<u32>,
    min_period: u32,
    max_period: u32,
    partition: Option<PathBuf>,
    budget: BudgetArgs,
    out: Option<PathBuf>,
}

fn stripe(format: Format, jobs: usize, args: StripeArgs) -> Outcome {
    check_range("k", args.k.into(), 1, 1000)?;
    if let Some(path) = &args.partition {
        let tri = load_certificate(path)?;
        let c = stripe_partition_coloring(args.k, &tri)?;
        if let Some(out) = &args.out {
            write_text(out, &write_certificate(&c))?;
        }
        let mut report = Report::new(&["period", "status", "colors_used"]);
        report.row(vec![json!(args.k), json!("SAT"), json!(c.color_count())]);
        print!("{}", report.render(format));
        return Ok(0);
    }
    let colors = args.colors.expect("clap requires --colors without --partition");
    check_range("colors", colors.into(), 1, 64)?;
    check_range("min-period", args.min_period.into(), 1, 10_000)?;
    check_range("max-period", args.max_period.into(), args.min_period.into(), 10_000)?;
    args.budget.budget()?;
    let periods = args.min_period..=args.max_period;
    let attempts: Vec<(u32, SolveOutcome)> = if args.budget.sat_cmd.is_some() {
        let mut attempts = Vec::new();
        for p in periods {
            let outcome = args.budget.decide(&Region::periodic_stripe(args.k, p), colors)?;
            let sat = outcome.coloring().is_some();
            attempts.push((p, outcome));
            if sat {
                break;
            }
        }
        attempts
    } else {
        let budget = args.budget.budget()?;
        trilat::solver::search_stripe_periods(args.k, colors, periods, budget, jobs)?
    };
    let mut report = Report::new(&["period", "status", "nodes", "seconds"]);
    let mut found = None;
    let mut any_unknown = false;
    for (p, outcome) in &attempts {
        report.row(vec![json!(p), json!(outcome.status.label()), json!(outcome.stats.nodes), seconds(outcome.stats.elapsed)]);
        any_unknown |= outcome.status == SolveStatus::Unknown;
        if let Some(c) = outcome.coloring() {
            found = Some((*p, c.clone()));
        }
    }
    let k = args.k;
    let code = match &found {
        Some((p, c)) => {
            if let Some(out) = &args.out {
                write_text(out, &write_certificate(c))?;
            }
            report.summary(format!("S{k} has a periodic {colors}-coloring with period {p}"), json!({ "period": p, "budget": args.budget.json() }));
            0
        }
        None if any_unknown => {
            report.summary(format!("S{k}: undecided within the budget"), json!({ "period": null, "budget": args.budget.json() }));
            EXIT_UNKNOWN
        }
        None => {
            report.summary(
                format!("S{k} has no periodic {colors}-coloring with period in {}..={}", args.min_period, args.max_period),
                json!({ "period": null, "budget": args.budget.json() }),
            );
            0
        }
    };
    print!("{}", report.render(format));
    Ok(code)
}

fn triples(format: Format, jobs: usize, action: TriplesAction) -> Outcome {
    match action {
        TriplesAction::Check { file } => {
            let ts = read_triples(&read_text(&file)?).map_err(|e| Failure::Malformed(format!("{}: {e}", file.display())))?;
            let p = profile(&ts);
            let r = is_modified_sts(&ts);
            let mut report = Report::new(&["multiplicity", "pairs"]);
            for (m, &count) in p.histogram.iter().enumerate() {
                report.row(vec![json!(m), json!(count)]);
            }
            let text = match r {
                Some(r) => format!("modified triple system on {} points with r = {r}", ts.points()),
                None => format!("not a modified triple system ({} points, {} triples)", ts.points(), ts.triples().len()),
            };
            report.summary(text, json!({ "points": ts.points(), "triples": ts.triples().len(), "r": r }));
            print!("{}", report.render(format));
            Ok(if r.is_some() { 0 } else { EXIT_FAILED })
        }
        TriplesAction::Search { v, r, budget, out } => {
            if budget.sat_cmd.is_some() {
                return Err(usage("--sat-cmd does not apply to triple systems"));
            }
            let options = SearchOptions { budget: budget.budget()?, jobs, ..Default::default() };
            let result = search_modified_sts(v, r, options)?;
            let mut report = Report::new(&["v", "r", "status"]);
            report.row(vec![json!(v), json!(r), json!(result.label())]);
            if let TripleSearch::Found(ts) = &result {
                // Without --out the system itself is the output, as with `construct`.
                match &out {
                    Some(path) => write_text(path, &write_triples(ts))?,
                    None => {
                        print!("{}", write_triples(ts));
                        return Ok(0);
                    }
                }
            }
            print!("{}", report.render(format));
            Ok(if result == TripleSearch::Unknown { EXIT_UNKNOWN } else { 0 })
        }
        TriplesAction::Triangles { n, out } => {
            check_range("n", n.into(), 1, 40)?;
            emit(out.as_deref(), &write_triples(&TripleSystem::from_triangles(n)))?;
            Ok(0)
        }
    }
}
