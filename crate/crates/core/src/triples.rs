//! Triple systems where pair multiplicities are allowed to miss by one.
//!
//! A collection of 3-subsets of `{1..v}` is a *modified Steiner system with
//! defect `r`* when exactly `r` pairs lie in no triple, exactly `r` pairs lie
//! in two, and every other pair lies in exactly one. With `r = 0` this is an
//! ordinary Steiner triple system. The triangles of `Tₙ` form one with
//! `r = a₂(n)`: a pair has as many triangles as it has apex completions, and
//! pairs with 0 and 2 completions are equinumerous.

use std::collections::HashSet;
use std::fmt::{self, Write};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use crate::lattice::Region;
use crate::solver::Budget;
use crate::triangles::for_each_triangle;
use crate::{content_lines, Error, ParseError};

pub const TRIPLES_MAGIC: &str = "trilat-triples v1";

/// Default largest `v` the exhaustive search accepts.
pub const DEFAULT_MAX_POINTS: u32 = 12;

/// Triples over the points `1..=v`, each stored in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    v: u32,
    triples: Vec<[u32; 3]>,
}

impl TripleSystem {
    /// Validates that every triple has three distinct members in `1..=v` and
    /// that no triple repeats.
    pub fn new(v: u32, triples: impl IntoIterator<Item = [u32; 3]>) -> Result<TripleSystem, Error> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for t in triples {
            let mut s = t;
            s.sort_unstable();
            if s[0] == 0 || s[2] > v {
                return Err(Error::InvalidArgument(format!("triple {t:?} leaves 1..={v}")));
            }
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::InvalidArgument(format!("triple {t:?} repeats a point")));
            }
            if !seen.insert(s) {
                return Err(Error::InvalidArgument(format!("triple {t:?} appears twice")));
            }
            out.push(s);
        }
        Ok(TripleSystem { v, triples: out })
    }

    pub fn points(&self) -> u32 {
        self.v
    }

    pub fn triples(&self) -> &[[u32; 3]] {
        &self.triples
    }

    /// The equilateral triangles of `Tₙ`, with point `i` the `i`-th point of
    /// `Tₙ` in canonical order (1-based).
    pub fn from_triangles(n: u32) -> TripleSystem {
        let region = Region::triangle(n);
        let mut triples = Vec::new();
        for_each_triangle(&region, |t| {
            let mut s = t.vertices().map(|p| region.rank(p).expect("vertex in region") as u32 + 1);
            s.sort_unstable();
            triples.push(s);
        })
        .expect("triangles are finite");
        triples.sort_unstable();
        TripleSystem { v: region.len() as u32, triples }
    }

    /// The Fano plane, the Steiner triple system on 7 points.
    pub fn fano() -> TripleSystem {
        TripleSystem::new(
            7,
            [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]],
        )
        .expect("valid")
    }
}

fn pair_count(v: u32) -> usize {
    (v as usize * v.saturating_sub(1) as usize) / 2
}

/// Index of the pair `{i, j}` of 0-based points, `i < j`.
fn pair_index(i: u32, j: u32) -> usize {
    debug_assert!(i < j);
    j as usize * (j as usize - 1) / 2 + i as usize
}

/// Histogram of pair multiplicities: entry `m` counts the pairs of points
/// lying in exactly `m` triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProfile {
    pub points: u32,
    pub histogram: Vec<u64>,
}

impl PairProfile {
    pub fn pairs_with(&self, multiplicity: usize) -> u64 {
        self.histogram.get(multiplicity).copied().unwrap_or(0)
    }

    pub fn total_pairs(&self) -> u64 {
        self.histogram.iter().sum()
    }

    /// `Σ m · count(m)`, which equals three times the number of triples.
    pub fn incidences(&self) -> u64 {
        self.histogram.iter().enumerate().map(|(m, &c)| m as u64 * c).sum()
    }
}

pub fn profile(ts: &TripleSystem) -> PairProfile {
    let mut mult = vec![0u32; pair_count(ts.v)];
    for t in &ts.triples {
        let [x, y, z] = t.map(|p| p - 1);
        for (i, j) in [(x, y), (x, z), (y, z)] {
            mult[pair_index(i, j)] += 1;
        }
    }
    let top = mult.iter().copied().max().unwrap_or(0) as usize;
    let mut histogram = vec![0u64; top.max(2) + 1];
    for m in mult {
        histogram[m as usize] += 1;
    }
    PairProfile { points: ts.v, histogram }
}

/// The defect `r` if `ts` is a modified Steiner system, otherwise `None`.
pub fn is_modified_sts(ts: &TripleSystem) -> Option<u64> {
    let p = profile(ts);
    if p.histogram.len() > 3 && p.histogram[3..].iter().any(|&c| c > 0) {
        return None;
    }
    (p.pairs_with(0) == p.pairs_with(2)).then_some(p.pairs_with(0))
}

/// Necessary condition for a modified system on `v` points: multiplicities
/// sum to `C(v,2)` because the surplus of the doubled pairs cancels the
/// missing ones, so there are exactly `C(v,2)/3` triples.
pub fn required_triples(v: u32) -> Result<usize, Error> {
    let pairs = pair_count(v);
    if pairs % 3 != 0 {
        return Err(Error::InvalidArgument(format!(
            "no modified triple system on {v} points: C({v},2) = {pairs} is not divisible by 3"
        )));
    }
    Ok(pairs / 3)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleSearch {
    Found(TripleSystem),
    Unsat,
    Unknown,
}

impl TripleSearch {
    pub fn label(&self) -> &'static str {
        match self {
            TripleSearch::Found(_) => "FOUND",
            TripleSearch::Unsat => "UNSAT",
            TripleSearch::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Worker threads; with more than one, which instance is returned may vary.
    pub jobs: usize,
    pub max_points: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: Budget::unlimited(), jobs: 1, max_points: DEFAULT_MAX_POINTS }
    }
}

#[derive(Clone)]
struct State {
    v: u32,
    r: u64,
    target: usize,
    mult: Vec<u8>,
    frozen: Vec<bool>,
    zeros: u64,
    twos: u64,
    triples: Vec<[u32; 3]>,
    used: HashSet<[u32; 3]>,
    pairs: Vec<(u32, u32)>,
}

enum Step {
    Done,
    Exhausted,
    OutOfBudget,
}

struct Shared<'a> {
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    budget: Budget,
    start: Instant,
}

impl Shared<'_> {
    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.nodes.is_some_and(|limit| n > limit) {
            return false;
        }
        !(n % 1024 == 0 && self.budget.timeout.is_some_and(|t| self.start.elapsed() >= t))
    }
}

/// A branch at the first undecided pair: cover it with a triple through a
/// third point, or leave it uncovered for good.
#[derive(Clone, Copy)]
enum Choice {
    Cover(u32),
    Freeze,
}

impl State {
    fn new(v: u32, r: u64, target: usize) -> State {
        let pairs = pair_count(v);
        State {
            v,
            r,
            target,
            mult: vec![0; pairs],
            frozen: vec![false; pairs],
            zeros: 0,
            twos: 0,
            triples: Vec::new(),
            used: HashSet::new(),
            pairs: (0..v).flat_map(|j| (0..j).map(move |i| (i, j))).collect(),
        }
    }

    fn pair(&self, i: u32, j: u32) -> usize {
        if i < j {
            pair_index(i, j)
        } else {
            pair_index(j, i)
        }
    }

    fn can_add(&self, t: [u32; 3]) -> bool {
        if self.triples.len() >= self.target || self.used.contains(&t) {
            return false;
        }
        let mut new_twos = 0;
        for (i, j) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let p = self.pair(i, j);
            if self.frozen[p] || self.mult[p] >= 2 {
                return false;
            }
            new_twos += u64::from(self.mult[p] == 1);
        }
        self.twos + new_twos <= self.r
    }

    fn add(&mut self, t: [u32; 3]) {
        for (i, j) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let p = self.pair(i, j);
            self.mult[p] += 1;
            self.twos += u64::from(self.mult[p] == 2);
        }
        self.used.insert(t);
        self.triples.push(t);
    }

    fn remove(&mut self) {
        let t = self.triples.pop().expect("a triple to remove");
        self.used.remove(&t);
        for (i, j) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let p = self.pair(i, j);
            self.twos -= u64::from(self.mult[p] == 2);
            self.mult[p] -= 1;
        }
    }

    /// First pair at index `from` or later that is still uncovered and not frozen.
    fn next_open(&self, from: usize) -> Option<(usize, u32, u32)> {
        (from..self.mult.len()).find(|&p| self.mult[p] == 0 && !self.frozen[p]).map(|p| {
            let (i, j) = self.pairs[p];
            (p, i, j)
        })
    }

    fn choices(&self, i: u32, j: u32) -> Vec<Choice> {
        let mut out: Vec<Choice> = (0..self.v)
            .filter(|&z| z != i && z != j)
            .filter(|&z| self.can_add(sorted([i, j, z])))
            .map(Choice::Cover)
            .collect();
        if self.zeros < self.r {
            out.push(Choice::Freeze);
        }
        out
    }

    fn apply(&mut self, p: usize, i: u32, j: u32, choice: Choice) {
        match choice {
            Choice::Cover(z) => self.add(sorted([i, j, z])),
            Choice::Freeze => {
                self.frozen[p] = true;
                self.zeros += 1;
            }
        }
    }

    fn undo(&mut self, p: usize, choice: Choice) {
        match choice {
            Choice::Cover(_) => self.remove(),
            Choice::Freeze => {
                self.frozen[p] = false;
                self.zeros -= 1;
            }
        }
    }

    fn search(&mut self, from: usize, shared: &Shared) -> Step {
        let Some((p, i, j)) = self.next_open(from) else {
            return if self.zeros == self.r && self.twos == self.r && self.triples.len() == self.target {
                Step::Done
            } else {
                Step::Exhausted
            };
        };
        for choice in self.choices(i, j) {
            if !shared.tick() {
                return Step::OutOfBudget;
            }
            self.apply(p, i, j, choice);
            match self.search(p + 1, shared) {
                Step::Exhausted => self.undo(p, choice),
                other => return other,
            }
        }
        Step::Exhausted
    }

    fn into_system(self) -> TripleSystem {
        TripleSystem::new(self.v, self.triples.iter().map(|t| t.map(|x| x + 1))).expect("search keeps triples valid")
    }
}

fn sorted(mut t: [u32; 3]) -> [u32; 3] {
    t.sort_unstable();
    t
}

/// Exhaustive search for a modified Steiner system on `v` points with
/// defect `r`.
///
/// Pairs are decided in order: each is either covered by a new triple or
/// frozen at multiplicity 0, never exceeding `r` frozen or `r` doubled pairs.
/// Relabeling makes `{1,2,3}` a triple of any nonempty solution, so the
/// search starts from it; the branches at the next open pair are spread over
/// `jobs` threads. Any instance returned has been re-checked.
pub fn search_modified_sts(v: u32, r: u64, options: SearchOptions) -> Result<TripleSearch, Error> {
    if v < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 points, got {v}")));
    }
    if v > options.max_points {
        return Err(Error::InvalidArgument(format!(
            "v = {v} exceeds the search cap of {}",
            options.max_points
        )));
    }
    let target = required_triples(v)?;
    if 2 * r > pair_count(v) as u64 {
        return Ok(TripleSearch::Unsat);
    }
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let shared = Shared { nodes: &nodes, stop: &stop, budget: options.budget, start: Instant::now() };

    let mut root = State::new(v, r, target);
    root.add([0, 1, 2]);
    let Some((p, i, j)) = root.next_open(0) else {
        return Ok(finish(root, r, Step::Done));
    };
    let branches = root.choices(i, j);
    let jobs = options.jobs.max(1).min(branches.len().max(1));
    if jobs == 1 {
        let step = root.search(0, &shared);
        return Ok(finish(root, r, step));
    }
    let next = AtomicU64::new(0);
    let results: Vec<(Step, State)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|_| {
                let (root, branches, shared, next, stop) = (&root, &branches, &shared, &next, &stop);
                scope.spawn(move || {
                    let mut found = Vec::new();
                    loop {
                        let b = next.fetch_add(1, Ordering::Relaxed) as usize;
                        if b >= branches.len() || stop.load(Ordering::Relaxed) {
                            return found;
                        }
                        let mut s = root.clone();
                        s.apply(p, i, j, branches[b]);
                        let step = s.search(p + 1, shared);
                        match step {
                            Step::Exhausted => {}
                            Step::Done => {
                                stop.store(true, Ordering::Relaxed);
                                found.push((step, s));
                                return found;
                            }
                            Step::OutOfBudget => found.push((step, s)),
                        }
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("search thread panicked")).collect()
    });
    let mut results = results;
    if let Some(k) = results.iter().position(|(s, _)| matches!(s, Step::Done)) {
        let (step, s) = results.swap_remove(k);
        return Ok(finish(s, r, step));
    }
    if results.is_empty() {
        Ok(TripleSearch::Unsat)
    } else {
        Ok(TripleSearch::Unknown)
    }
}

fn finish(state: State, r: u64, step: Step) -> TripleSearch {
    match step {
        Step::Done => {
            let ts = state.into_system();
            assert_eq!(is_modified_sts(&ts), Some(r), "search returned an instance with the wrong profile");
            TripleSearch::Found(ts)
        }
        Step::Exhausted => TripleSearch::Unsat,
        Step::OutOfBudget => TripleSearch::Unknown,
    }
}

impl fmt::Display for TripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_triples(self))
    }
}

pub fn write_triples(ts: &TripleSystem) -> String {
    let mut out = format!("{TRIPLES_MAGIC}\npoints {}\n", ts.v);
    for [x, y, z] in &ts.triples {
        writeln!(out, "{x} {y} {z}").unwrap();
    }
    out
}

pub fn read_triples(text: &str) -> Result<TripleSystem, Error> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, TRIPLES_MAGIC)) => {}
        Some((n, _)) => return Err(ParseError::new(n, format!("expected {TRIPLES_MAGIC:?}")).into()),
        None => return Err(ParseError::new(0, "missing header line").into()),
    }
    let v = match lines.next() {
        Some((n, line)) => match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["points", v] => v.parse::<u32>().map_err(|_| ParseError::new(n, format!("bad point count {v:?}")))?,
            _ => return Err(ParseError::new(n, "expected `points V`").into()),
        },
        None => return Err(ParseError::new(0, "missing points line").into()),
    };
    let mut triples = Vec::new();
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        if words.len() != 3 {
            return Err(ParseError::new(n, format!("expected three points, got {line:?}")).into());
        }
        let mut t = [0u32; 3];
        for (slot, w) in t.iter_mut().zip(&words) {
            *slot = w.parse().map_err(|_| ParseError::new(n, format!("bad point {w:?}")))?;
        }
        triples.push(t);
    }
    TripleSystem::new(v, triples)
}
