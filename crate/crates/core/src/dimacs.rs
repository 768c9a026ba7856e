//! CNF encoding of `K`-colorability and the external SAT solver hook.
//!
//! Variable `rank·K + color + 1` means "the point of that rank has that
//! color". Each point gets one at-least-one-color clause and each
//! (triangle, color) gets `¬x_p ∨ ¬x_q ∨ ¬x_r`. At-most-one clauses are left
//! out: taking the lowest true color of every point in any model gives a
//! proper coloring, because a monochromatic triangle in the chosen colors
//! would falsify one of its clauses.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::coloring::{is_proper, Coloring};
use crate::lattice::Region;
use crate::solver::{Hypergraph, SolveOutcome, SolveStats, SolveStatus};
use crate::{Error, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    region: Region,
    num_colors: u32,
    clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn region(&self) -> Region {
        self.region
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn num_vars(&self) -> usize {
        self.region.len() * self.num_colors as usize
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// DIMACS variable for the point of rank `rank` taking `color`.
    pub fn var(&self, rank: usize, color: u32) -> i32 {
        (rank * self.num_colors as usize + color as usize + 1) as i32
    }

    /// Inverse of [`CnfInstance::var`].
    pub fn decode(&self, var: i32) -> Option<(usize, u32)> {
        if var < 1 || var as usize > self.num_vars() {
            return None;
        }
        let v = var as usize - 1;
        let k = self.num_colors as usize;
        Some((v / k, (v % k) as u32))
    }

    /// Standard DIMACS text with a `p cnf V C` header.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "c trilat {} colors {}", self.region, self.num_colors).unwrap();
        writeln!(out, "c var = rank * {} + color + 1", self.num_colors).unwrap();
        writeln!(out, "p cnf {} {}", self.num_vars(), self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Encodes "`region` has a proper `num_colors`-coloring" as CNF. Periodic
/// stripes are encoded over one fundamental domain.
pub fn export_dimacs(region: &Region, num_colors: u32) -> Result<CnfInstance, Error> {
    if num_colors == 0 {
        return Err(Error::InvalidArgument("color count must be positive".into()));
    }
    let graph = Hypergraph::for_region(region);
    let mut cnf = CnfInstance { region: *region, num_colors, clauses: Vec::new() };
    let mut clauses = Vec::with_capacity(region.len() + graph.edges().len() * num_colors as usize);
    for rank in 0..region.len() {
        clauses.push((0..num_colors).map(|c| cnf.var(rank, c)).collect());
    }
    for edge in graph.edges() {
        for c in 0..num_colors {
            clauses.push(edge.iter().map(|&r| -cnf.var(r as usize, c)).collect());
        }
    }
    cnf.clauses = clauses;
    Ok(cnf)
}

/// A solver's answer in SAT-competition output conventions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatAnswer {
    /// Literals from the `v` lines, without the terminating 0.
    Satisfiable(Vec<i32>),
    Unsatisfiable,
    Unknown,
}

/// Reads `s …` and `v …` lines; everything else is ignored.
pub fn parse_solver_output(text: &str) -> Result<SatAnswer, ParseError> {
    let mut status = None;
    let mut literals = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("s") => {
                status = Some(match words.collect::<Vec<_>>().join(" ").as_str() {
                    "SATISFIABLE" => true,
                    "UNSATISFIABLE" => false,
                    "UNKNOWN" | "INDETERMINATE" => return Ok(SatAnswer::Unknown),
                    other => return Err(ParseError::new(n + 1, format!("unknown status {other:?}"))),
                })
            }
            Some("v") => {
                for w in words {
                    let lit: i32 = w
                        .parse()
                        .map_err(|_| ParseError::new(n + 1, format!("bad literal {w:?}")))?;
                    if lit != 0 {
                        literals.push(lit);
                    }
                }
            }
            _ => {}
        }
    }
    Ok(match status {
        Some(true) => SatAnswer::Satisfiable(literals),
        Some(false) => SatAnswer::Unsatisfiable,
        None => SatAnswer::Unknown,
    })
}

/// Turns solver output for `cnf` into a coloring by giving each point its
/// lowest true color.
///
/// Fails if the output is not `SATISFIABLE`, if any variable is missing from
/// the `v` lines, if some point has no true color, or if the projected
/// coloring is improper (which would mean the encoding is wrong).
pub fn import_assignment(cnf: &CnfInstance, text: &str) -> Result<Coloring, Error> {
    let literals = match parse_solver_output(text)? {
        SatAnswer::Satisfiable(lits) => lits,
        SatAnswer::Unsatisfiable => {
            return Err(Error::IncompleteAssignment("solver reported UNSATISFIABLE".into()))
        }
        SatAnswer::Unknown => return Err(Error::IncompleteAssignment("no satisfying assignment".into())),
    };
    assignment_to_coloring(cnf, &literals)
}

fn assignment_to_coloring(cnf: &CnfInstance, literals: &[i32]) -> Result<Coloring, Error> {
    let mut value = vec![None; cnf.num_vars() + 1];
    for &lit in literals {
        let var = lit.unsigned_abs() as usize;
        if var > cnf.num_vars() {
            return Err(Error::IncompleteAssignment(format!("variable {var} is out of range")));
        }
        value[var] = Some(lit > 0);
    }
    if let Some(var) = (1..value.len()).find(|&v| value[v].is_none()) {
        return Err(Error::IncompleteAssignment(format!("variable {var} is unassigned")));
    }
    let region = cnf.region;
    let mut colors = Vec::with_capacity(region.len());
    for rank in 0..region.len() {
        let color = (0..cnf.num_colors)
            .find(|&c| value[cnf.var(rank, c) as usize] == Some(true))
            .ok_or_else(|| {
                Error::IncompleteAssignment(format!("{} has no true color", region.point_at(rank)))
            })?;
        colors.push(color);
    }
    let coloring = Coloring::new(region, cnf.num_colors, colors)?;
    if let Some(t) = is_proper(&coloring).witness() {
        return Err(Error::Integrity(t));
    }
    Ok(coloring)
}

/// Runs an external solver on `cnf`.
///
/// `command` is split on whitespace; the path of a temporary DIMACS file is
/// appended as the last argument. The solver must print its answer on stdout
/// in SAT-competition format. A solver still running after `timeout` is
/// killed and the result is `Unknown`.
pub fn run_external(
    command: &str,
    cnf: &CnfInstance,
    timeout: Option<Duration>,
) -> Result<SolveOutcome, Error> {
    let mut words = command.split_whitespace();
    let program = words.next().ok_or_else(|| Error::External("empty solver command".into()))?;
    let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
    file.write_all(cnf.to_dimacs().as_bytes())?;
    file.flush()?;

    let start = Instant::now();
    let mut child = Command::new(program)
        .args(words)
        .arg(file.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| Error::External(format!("cannot start {program:?}: {e}")))?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut text = String::new();
        stdout.read_to_string(&mut text).map(|_| text)
    });
    let mut timed_out = false;
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if timeout.is_some_and(|t| start.elapsed() >= t) {
            child.kill()?;
            child.wait()?;
            timed_out = true;
            break;
        }
        std::thread::sleep(Duration::from_millis(20));
    }
    let text = reader.join().expect("reader thread panicked")?;
    let stats = SolveStats { nodes: 0, elapsed: start.elapsed(), budget_exhausted: timed_out };
    if timed_out {
        return Ok(SolveOutcome { status: SolveStatus::Unknown, stats });
    }
    let status = match parse_solver_output(&text)? {
        SatAnswer::Satisfiable(lits) => SolveStatus::Sat(assignment_to_coloring(cnf, &lits)?),
        SatAnswer::Unsatisfiable => SolveStatus::Unsat,
        SatAnswer::Unknown => SolveStatus::Unknown,
    };
    Ok(SolveOutcome { status, stats })
}
