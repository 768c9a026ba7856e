//! Exact `K`-colorability of the triangle hypergraph.
//!
//! Points are vertices and every equilateral triangle is a 3-edge; a proper
//! coloring leaves no edge monochromatic. The search is a complete
//! backtracking procedure:
//!
//! * each point keeps a domain of still-allowed colors; once two points of a
//!   triangle share color `c`, `c` is removed from the third point's domain,
//!   and a point left with a single color is assigned it immediately;
//! * the next point to branch on has the smallest domain (ties: most
//!   triangles, then lowest rank);
//! * a branch may only introduce the lowest color not yet used, so colorings
//!   differing by a color permutation are explored once.
//!
//! With a node budget the search is deterministic. An exhausted budget gives
//! [`SolveStatus::Unknown`], never `Unsat`.

use std::time::{Duration, Instant};

use crate::coloring::{is_proper, Coloring};
use crate::constructions::chevron_coloring;
use crate::lattice::Region;
use crate::triangles::{for_each_triangle, periodic_triangles};
use crate::Error;

/// Limits on one search. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    /// Branching decisions.
    pub nodes: Option<u64>,
    /// Wall-clock limit. Runs limited by time are not reproducible.
    pub timeout: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Budget {
        Budget { nodes: Some(n), timeout: None }
    }

    pub fn time(limit: Duration) -> Budget {
        Budget { nodes: None, timeout: Some(limit) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Sat(Coloring),
    Unsat,
    Unknown,
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Sat(_) => "SAT",
            SolveStatus::Unsat => "UNSAT",
            SolveStatus::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed: Duration,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.status {
            SolveStatus::Sat(c) => Some(c),
            _ => None,
        }
    }
}

/// Constraint hypergraph over the points of a region: each edge lists the
/// distinct point ranks of one triangle. On a periodic stripe a triangle may
/// fold onto fewer than three distinct points.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    region: Region,
    edges: Vec<Vec<u32>>,
}

impl Hypergraph {
    pub fn for_region(region: &Region) -> Hypergraph {
        let mut edges = Vec::new();
        let mut push = |ranks: [usize; 3]| {
            let mut e: Vec<u32> = ranks.iter().map(|&r| r as u32).collect();
            e.sort_unstable();
            e.dedup();
            edges.push(e);
        };
        match *region {
            Region::PeriodicStripe { k, period } => {
                for t in periodic_triangles(k, period) {
                    push(t.vertices().map(|v| region.rank(v).expect("row in range")));
                }
            }
            _ => for_each_triangle(region, |t| {
                push(t.vertices().map(|v| region.rank(v).expect("vertex in region")))
            })
            .expect("finite region"),
        }
        edges.sort();
        edges.dedup();
        Hypergraph { region: *region, edges }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }
}

type Mask = u64;

/// Largest palette the search supports.
pub const MAX_COLORS: u32 = Mask::BITS;

const NONE: u8 = u8::MAX;

struct Search<'a> {
    k: u32,
    incidence: Vec<Vec<[u32; 2]>>,
    degree: Vec<usize>,
    domain: Vec<Mask>,
    color: Vec<u8>,
    // (point, previous domain) for every domain change, and the points
    // assigned, in order, so both can be unwound.
    trail: Vec<(u32, Mask)>,
    assigned: Vec<u32>,
    used: u32,
    nodes: u64,
    budget: Budget,
    deadline: Option<Instant>,
    exhausted: bool,
    _graph: &'a Hypergraph,
}

enum Step {
    Found,
    Failed,
    Stop,
}

impl<'a> Search<'a> {
    fn new(graph: &'a Hypergraph, k: u32, budget: Budget) -> Option<Search<'a>> {
        let n = graph.region.len();
        // For each point, the other members of each edge through it; a folded
        // two-point edge stores its partner twice.
        let mut incidence = vec![Vec::new(); n];
        for e in &graph.edges {
            match e.as_slice() {
                [_] => return None,
                &[x, y] => {
                    incidence[x as usize].push([y, y]);
                    incidence[y as usize].push([x, x]);
                }
                &[x, y, z] => {
                    incidence[x as usize].push([y, z]);
                    incidence[y as usize].push([x, z]);
                    incidence[z as usize].push([x, y]);
                }
                _ => unreachable!("edges have one to three points"),
            }
        }
        let degree = incidence.iter().map(Vec::len).collect();
        let full = if k == MAX_COLORS { Mask::MAX } else { (1 << k) - 1 };
        Some(Search {
            k,
            incidence,
            degree,
            domain: vec![full; n],
            color: vec![NONE; n],
            trail: Vec::new(),
            assigned: Vec::new(),
            used: 0,
            nodes: 0,
            budget,
            deadline: budget.timeout.map(|t| Instant::now() + t),
            exhausted: false,
            _graph: graph,
        })
    }

    /// Assigns `c` to `x` and propagates to a fixpoint. Returns false on a
    /// wipe-out or monochromatic edge.
    fn assign(&mut self, x: u32, c: u8) -> bool {
        let mut queue = vec![(x, c)];
        while let Some((x, c)) = queue.pop() {
            match self.color[x as usize] {
                NONE => {}
                old if old == c => continue,
                _ => return false,
            }
            if self.domain[x as usize] & (1 << c) == 0 {
                return false;
            }
            self.color[x as usize] = c;
            self.assigned.push(x);
            self.used = self.used.max(c as u32 + 1);
            let bit: Mask = 1 << c;
            for i in 0..self.incidence[x as usize].len() {
                let [y, z] = self.incidence[x as usize][i];
                let (cy, cz) = (self.color[y as usize], self.color[z as usize]);
                let target = if y == z {
                    // Two-point edge: the partner may not take c.
                    if cy == c {
                        return false;
                    }
                    if cy != NONE {
                        continue;
                    }
                    y
                } else if cy == c && cz == c {
                    return false;
                } else if cy == c && cz == NONE {
                    z
                } else if cz == c && cy == NONE {
                    y
                } else {
                    continue;
                };
                let d = self.domain[target as usize];
                if d & bit == 0 {
                    continue;
                }
                self.trail.push((target, d));
                let nd = d & !bit;
                self.domain[target as usize] = nd;
                if nd == 0 {
                    return false;
                }
                if nd.count_ones() == 1 {
                    queue.push((target, nd.trailing_zeros() as u8));
                }
            }
        }
        true
    }

    fn undo(&mut self, trail_len: usize, assigned_len: usize, used: u32) {
        while self.trail.len() > trail_len {
            let (x, d) = self.trail.pop().unwrap();
            self.domain[x as usize] = d;
        }
        while self.assigned.len() > assigned_len {
            let x = self.assigned.pop().unwrap();
            self.color[x as usize] = NONE;
        }
        self.used = used;
    }

    fn pick(&self) -> Option<u32> {
        let mut best: Option<(u32, usize, u32)> = None;
        for (x, &c) in self.color.iter().enumerate() {
            if c != NONE {
                continue;
            }
            let size = self.domain[x].count_ones();
            let deg = self.degree[x];
            let better = match best {
                None => true,
                Some((bs, bd, _)) => size < bs || (size == bs && deg > bd),
            };
            if better {
                best = Some((size, deg, x as u32));
            }
        }
        best.map(|(_, _, x)| x)
    }

    fn out_of_budget(&mut self) -> bool {
        if self.budget.nodes.is_some_and(|limit| self.nodes >= limit) {
            self.exhausted = true;
        }
        if self.nodes % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.exhausted = true;
        }
        self.exhausted
    }

    fn solve(&mut self) -> Step {
        let Some(x) = self.pick() else {
            return Step::Found;
        };
        // Used colors are always a prefix 0..used; allow one fresh color.
        let allowed = (self.used + 1).min(self.k);
        let window: Mask = if allowed == MAX_COLORS { Mask::MAX } else { (1 << allowed) - 1 };
        let mut candidates = self.domain[x as usize] & window;
        // A point with one candidate is not a branching decision and costs
        // no budget.
        let branching = candidates.count_ones() > 1;
        while candidates != 0 {
            let c = candidates.trailing_zeros() as u8;
            candidates &= candidates - 1;
            if branching {
                if self.out_of_budget() {
                    return Step::Stop;
                }
                self.nodes += 1;
            }
            let (t, a, u) = (self.trail.len(), self.assigned.len(), self.used);
            if self.assign(x, c) {
                match self.solve() {
                    Step::Failed => {}
                    done => return done,
                }
            }
            self.undo(t, a, u);
        }
        Step::Failed
    }
}

/// Searches a hypergraph for a proper coloring with at most `k` colors.
pub fn solve_hypergraph(graph: &Hypergraph, k: u32, budget: Budget) -> Result<SolveOutcome, Error> {
    if k == 0 || k > MAX_COLORS {
        return Err(Error::InvalidArgument(format!("color count must be in 1..={MAX_COLORS}")));
    }
    let start = Instant::now();
    let region = graph.region;
    let Some(mut search) = Search::new(graph, k, budget) else {
        // A triangle folded onto a single point can never be properly colored.
        return Ok(SolveOutcome {
            status: SolveStatus::Unsat,
            stats: SolveStats { elapsed: start.elapsed(), ..SolveStats::default() },
        });
    };
    let status = match search.solve() {
        Step::Found => {
            let colors = search.color.iter().map(|&c| c as u32).collect();
            let coloring = Coloring::new(region, k, colors)?;
            if let Some(t) = is_proper(&coloring).witness() {
                return Err(Error::Integrity(t));
            }
            SolveStatus::Sat(coloring)
        }
        Step::Failed => SolveStatus::Unsat,
        Step::Stop => SolveStatus::Unknown,
    };
    Ok(SolveOutcome {
        status,
        stats: SolveStats {
            nodes: search.nodes,
            elapsed: start.elapsed(),
            budget_exhausted: search.exhausted,
        },
    })
}

/// Decides whether `region` has a proper coloring with at most `k` colors.
pub fn decide_k_colorable(region: &Region, k: u32, budget: Budget) -> Result<SolveOutcome, Error> {
    if !region.is_finite() {
        return Err(Error::PeriodicRegion(*region));
    }
    solve_hypergraph(&Hypergraph::for_region(region), k, budget)
}

/// Decides whether `Sₖ` has a proper `colors`-coloring that repeats with
/// period `period`. A satisfying coloring is returned as its fundamental
/// domain (the base block).
pub fn solve_periodic_stripe(
    k: u32,
    period: u32,
    colors: u32,
    budget: Budget,
) -> Result<SolveOutcome, Error> {
    if k == 0 || period == 0 {
        return Err(Error::InvalidArgument("stripe rows and period must be positive".into()));
    }
    solve_hypergraph(&Hypergraph::for_region(&Region::periodic_stripe(k, period)), colors, budget)
}

/// Tries every period in `periods` and returns the smallest one with a
/// `colors`-coloring, together with the outcome of every attempt. Up to
/// `jobs` periods are searched concurrently; the answer does not depend on
/// `jobs` when the budget is node-based.
pub fn search_stripe_periods(
    k: u32,
    colors: u32,
    periods: impl IntoIterator<Item = u32>,
    budget: Budget,
    jobs: usize,
) -> Result<Vec<(u32, SolveOutcome)>, Error> {
    let periods: Vec<u32> = periods.into_iter().collect();
    let mut results = Vec::new();
    for chunk in periods.chunks(jobs.max(1)) {
        let outcomes: Vec<Result<SolveOutcome, Error>> = std::thread::scope(|s| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|&p| s.spawn(move || solve_periodic_stripe(k, p, colors, budget)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
        });
        for (&p, outcome) in chunk.iter().zip(outcomes) {
            let outcome = outcome?;
            let sat = matches!(outcome.status, SolveStatus::Sat(_));
            results.push((p, outcome));
            if sat {
                return Ok(results);
            }
        }
    }
    Ok(results)
}

/// What is known about `f(n)` after a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticBounds {
    pub n: u32,
    /// Proven lower bound.
    pub lower: u32,
    /// Smallest color count with a verified coloring.
    pub upper: u32,
    /// A proper coloring using `upper` colors.
    pub witness: Coloring,
    /// Status of every `K` tried, in order.
    pub steps: Vec<(u32, SolveStatus, SolveStats)>,
}

impl ChromaticBounds {
    pub fn exact(&self) -> Option<u32> {
        (self.lower == self.upper).then_some(self.upper)
    }
}

/// Computes `f(n)` by trying `K = 1, 2, …`: exact when `K − 1` is refuted and
/// `K` is satisfied, otherwise the tightest interval proven.
pub fn compute_f(n: u32, budget: Budget) -> Result<ChromaticBounds, Error> {
    compute_f_with(n, budget, None)
}

/// [`compute_f`] with an extra known coloring (from a certificate or a
/// construction) used as the starting upper bound. The chevron coloring is
/// always available as a fallback.
pub fn compute_f_with(n: u32, budget: Budget, known: Option<&Coloring>) -> Result<ChromaticBounds, Error> {
    let graph = Hypergraph::for_region(&Region::triangle(n.max(1)));
    compute_f_by(n, known, |k| solve_hypergraph(&graph, k, budget))
}

/// Bounds `f(n)` using `decide(K)` to settle each color count, starting at
/// `K = 1` and stopping at the first `SAT` or `UNKNOWN`. Any coloring
/// `decide` returns is re-checked.
pub fn compute_f_by(
    n: u32,
    known: Option<&Coloring>,
    mut decide: impl FnMut(u32) -> Result<SolveOutcome, Error>,
) -> Result<ChromaticBounds, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let region = Region::triangle(n);
    let mut witness = chevron_coloring(n);
    if let Some(c) = known {
        if c.region() != region {
            return Err(Error::InvalidArgument(format!("known coloring is for {}, not {region}", c.region())));
        }
        if let Some(t) = is_proper(c).witness() {
            return Err(Error::Improper(t));
        }
        if c.color_count() < witness.color_count() {
            witness = c.compact();
        }
    }
    let mut upper = witness.color_count() as u32;
    let mut lower = 1;
    let mut steps = Vec::new();
    for k in 1..upper {
        let outcome = decide(k)?;
        steps.push((k, outcome.status.clone(), outcome.stats));
        match outcome.status {
            SolveStatus::Unsat => lower = k + 1,
            SolveStatus::Sat(c) => {
                if c.region() != region || c.color_count() as u32 > k {
                    return Err(Error::InvalidArgument(format!("solver answered K = {k} with a different instance")));
                }
                if let Some(t) = is_proper(&c).witness() {
                    return Err(Error::Integrity(t));
                }
                upper = k;
                witness = c;
                break;
            }
            SolveStatus::Unknown => break,
        }
    }
    Ok(ChromaticBounds { n, lower, upper, witness, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_proper_by_triangles;

    fn decide(n: u32, k: u32) -> SolveStatus {
        decide_k_colorable(&Region::triangle(n), k, Budget::unlimited()).unwrap().status
    }

    /// Exhaustive search over all `k^points` assignments.
    fn brute_colorable(region: &Region, k: u32) -> bool {
        let n = region.len();
        let mut colors = vec![0u32; n];
        loop {
            let c = Coloring::new(*region, k, colors.clone()).unwrap();
            if is_proper_by_triangles(&c).is_proper() {
                return true;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return false;
                }
                colors[i] += 1;
                if colors[i] < k {
                    break;
                }
                colors[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn t4_needs_three_colors() {
        assert_eq!(decide(4, 2), SolveStatus::Unsat);
        let SolveStatus::Sat(c) = decide(4, 3) else { panic!("T4 is 3-colorable") };
        assert!(is_proper(&c).is_proper());
        assert!(c.color_count() <= 3);
    }

    #[test]
    fn t8_has_a_three_coloring() {
        let SolveStatus::Sat(c) = decide(8, 3) else { panic!("T8 is 3-colorable") };
        assert!(is_proper_by_triangles(&c).is_proper());
        assert_eq!(c.color_count(), 3);
    }

    #[test]
    fn agrees_with_exhaustive_enumeration() {
        let regions = [
            Region::triangle(1),
            Region::triangle(2),
            Region::triangle(3),
            Region::triangle(4),
            Region::stripe_window(2, 0, 5),
            Region::stripe_window(3, 0, 3),
            Region::stripe_window(4, 0, 2),
        ];
        for region in regions {
            for k in 1..=3 {
                let fast = decide_k_colorable(&region, k, Budget::unlimited()).unwrap();
                let sat = matches!(fast.status, SolveStatus::Sat(_));
                assert_eq!(sat, brute_colorable(&region, k), "{region} with {k} colors");
            }
        }
    }

    #[test]
    fn small_chromatic_numbers() {
        for (n, f) in [(1, 1), (2, 2), (3, 2), (4, 3), (5, 3), (6, 3), (7, 3), (8, 3)] {
            let bounds = compute_f(n, Budget::unlimited()).unwrap();
            assert_eq!(bounds.exact(), Some(f), "f({n})");
            assert!(is_proper(&bounds.witness).is_proper());
        }
    }

    #[test]
    fn node_budget_gives_unknown_not_unsat() {
        let outcome = decide_k_colorable(&Region::triangle(7), 2, Budget::nodes(3)).unwrap();
        // T7 contains T4, so 2 colors are impossible.
        assert!(outcome.coloring().is_none());
        if outcome.stats.budget_exhausted {
            assert_eq!(outcome.status, SolveStatus::Unknown);
        }
        let tiny = decide_k_colorable(&Region::triangle(9), 3, Budget::nodes(1)).unwrap();
        assert_eq!(tiny.status, SolveStatus::Unknown);
        assert!(tiny.stats.budget_exhausted);
        let bounds = compute_f(9, Budget::nodes(1)).unwrap();
        assert_eq!(bounds.exact(), None);
        // One color fails by propagation alone, without branching.
        assert!(bounds.lower >= 2 && bounds.lower <= 3);
        assert_eq!(bounds.upper, 5);
    }

    #[test]
    fn search_is_deterministic() {
        let a = decide_k_colorable(&Region::triangle(7), 3, Budget::nodes(1_000_000)).unwrap();
        let b = decide_k_colorable(&Region::triangle(7), 3, Budget::nodes(1_000_000)).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.stats.nodes, b.stats.nodes);
    }

    #[test]
    fn periodic_stripe_matches_brute_force() {
        // S2 with period 1: each row is one color class repeated, and the
        // unit triangles force the rows apart.
        let sat = solve_periodic_stripe(2, 1, 2, Budget::unlimited()).unwrap();
        assert!(matches!(sat.status, SolveStatus::Sat(_)));
        assert_eq!(solve_periodic_stripe(2, 1, 1, Budget::unlimited()).unwrap().status, SolveStatus::Unsat);
        for (k, p) in [(2u32, 1u32), (2, 2), (3, 2), (3, 3), (4, 1), (4, 2)] {
            for colors in 1..=3 {
                let region = Region::periodic_stripe(k, p);
                let fast = solve_periodic_stripe(k, p, colors, Budget::unlimited()).unwrap();
                if let SolveStatus::Sat(c) = &fast.status {
                    assert!(is_proper(c).is_proper());
                }
                let sat = matches!(fast.status, SolveStatus::Sat(_));
                assert_eq!(sat, brute_colorable(&region, colors), "S{k}/{p}, {colors} colors");
            }
        }
    }

    #[test]
    fn stripe_period_search_returns_first_hit() {
        let results = search_stripe_periods(3, 2, 1..=6, Budget::unlimited(), 2).unwrap();
        let (p, last) = results.last().unwrap();
        if let SolveStatus::Sat(c) = &last.status {
            assert_eq!(c.region(), Region::periodic_stripe(3, *p));
            assert!(results[..results.len() - 1].iter().all(|(_, o)| o.status == SolveStatus::Unsat));
        }
    }

    #[test]
    fn known_upper_bound_is_used() {
        let better = decide_k_colorable(&Region::triangle(9), 4, Budget::unlimited()).unwrap();
        let c = better.coloring().unwrap().clone();
        let bounds = compute_f_with(9, Budget::nodes(1), Some(&c)).unwrap();
        assert_eq!(bounds.upper, 4);
        assert!(compute_f_with(8, Budget::nodes(1), Some(&c)).is_err());
    }

    #[test]
    fn rejects_bad_palettes() {
        assert!(decide_k_colorable(&Region::triangle(3), 0, Budget::unlimited()).is_err());
        assert!(decide_k_colorable(&Region::triangle(3), 65, Budget::unlimited()).is_err());
        assert!(decide_k_colorable(&Region::periodic_stripe(3, 3), 2, Budget::unlimited()).is_err());
    }

    #[test]
    fn folded_single_point_edge_is_unsat() {
        // A hypergraph whose only edge folds to one point.
        let graph = Hypergraph { region: Region::triangle(1), edges: vec![vec![0]] };
        assert_eq!(solve_hypergraph(&graph, 3, Budget::unlimited()).unwrap().status, SolveStatus::Unsat);
    }
}
