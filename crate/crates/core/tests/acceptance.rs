//! Acceptance gate: one PASS/FAIL line per criterion, then a nonzero exit if
//! any failed. Runs without network access or an external solver; set
//! `TRILAT_SAT_CMD` (for example `python3 scripts/pysat-solve.py`) to also
//! exercise the DIMACS route for criteria 5-7.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use trilat::coloring::{is_proper, read_certificate, Coloring};
use trilat::constructions::{banded_coloring, chevron_coloring, minimal_spacer};
use trilat::counting::{
    a0_closed, a2_closed, gamma_closed, h_closed, m_brute, m_inclusion_exclusion, CountReport,
};
use trilat::dimacs::{export_dimacs, run_external};
use trilat::solver::{compute_f, decide_k_colorable, search_stripe_periods, Budget, SolveStatus};
use trilat::triangles::periodic_triangles;
use trilat::triples::{is_modified_sts, search_modified_sts, SearchOptions, TripleSystem};
use trilat::Region;

const COUNT_LIMIT: Duration = Duration::from_secs(30);
const SMALL_F_LIMIT: Duration = Duration::from_secs(60);
const T9_LIMIT: Duration = Duration::from_secs(600);
const CERTIFICATE_LIMIT: Duration = Duration::from_secs(10);
const STRIPE_SEARCH_LIMIT: Duration = Duration::from_secs(600);
const STRIPE_VERIFY_LIMIT: Duration = Duration::from_secs(1);
const BANDED_N: u32 = 600;
const BANDED_MAX_RATIO: f64 = 0.36;
const BANDED_VERIFY_LIMIT: Duration = Duration::from_secs(60);
const CHEVRON_LIMIT: Duration = Duration::from_secs(10);
const TRIPLES_LIMIT: Duration = Duration::from_secs(5);

/// Upper bounds on `f(n)` from the published table: `(n, colors)`.
const TABLE: [(u32, u32); 12] = [
    (9, 4),
    (10, 4),
    (11, 4),
    (12, 5),
    (13, 5),
    (14, 5),
    (15, 5),
    (16, 6),
    (17, 6),
    (18, 7),
    (19, 7),
    (20, 7),
];

type Check = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    ensure(elapsed <= limit, || format!("{what} took {elapsed:.2?}, limit {limit:?}"))?;
    Ok(elapsed)
}

fn certificates_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../certificates")
}

fn load(path: &Path) -> Result<Coloring, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_certificate(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn sat_cmd() -> Option<String> {
    std::env::var("TRILAT_SAT_CMD").ok().filter(|s| !s.trim().is_empty())
}

fn counting_oracle() -> Check {
    let start = Instant::now();
    for n in 1..=25 {
        let closed = CountReport::closed_form(n);
        let brute = CountReport::brute_force(n);
        ensure(brute.same_counts(&closed), || format!("n = {n}: {brute:?} vs {closed:?}"))?;
    }
    let t4 = CountReport::brute_force(4);
    ensure(t4.gamma == 45 && (t4.a0, t4.a1, t4.a2) == (9, 27, 9), || format!("T4: {t4:?}"))?;
    let took = within(start, COUNT_LIMIT, "counting")?;
    Ok(format!("n <= 25 exact; T4 pairs 45 = 9 + 27 + 9 ({took:.2?})"))
}

fn decomposition() -> Check {
    for n in 1..=25u64 {
        let expected = a2_closed(n);
        let enumerated = CountReport::brute_force(n).a2;
        ensure(enumerated == expected, || format!("n = {n}: enumerated a2 {enumerated}"))?;
        let mut by_side = 0;
        let mut by_ie = 0;
        for k in 3..=n {
            let h = h_closed(k, n);
            by_side += h * m_brute(k).map_err(|e| e.to_string())?;
            by_ie += h * m_inclusion_exclusion(k, a2_closed).map_err(|e| e.to_string())?;
        }
        ensure(by_side == expected && by_ie == expected, || {
            format!("n = {n}: side-touching {by_side}, inclusion-exclusion {by_ie}, a2 {expected}")
        })?;
    }
    Ok("n <= 25, both rhombus counts".into())
}

fn a0_equals_a2() -> Check {
    for n in 1..=25 {
        let r = CountReport::brute_force(n);
        ensure(r.a0 == r.a2, || format!("n = {n}: enumerated a0 {} a2 {}", r.a0, r.a2))?;
    }
    for n in 1..=1000 {
        ensure(a0_closed(n) == a2_closed(n), || format!("n = {n}: closed forms differ"))?;
        let total = a0_closed(n) + trilat::counting::a1_closed(n) + a2_closed(n);
        ensure(total == gamma_closed(n), || format!("n = {n}: classes do not sum to gamma"))?;
    }
    Ok("enumerated n <= 25, closed n <= 1000".into())
}

fn small_chromatic_values() -> Check {
    let start = Instant::now();
    for (n, value) in [(1, 1), (2, 2), (3, 2), (4, 3)] {
        let bounds = compute_f(n, Budget::unlimited()).map_err(|e| e.to_string())?;
        ensure(bounds.exact() == Some(value), || format!("f({n}): {}..={}", bounds.lower, bounds.upper))?;
        ensure(is_proper(&bounds.witness).is_proper(), || format!("f({n}) witness improper"))?;
    }
    let t4 = Region::triangle(4);
    let two = decide_k_colorable(&t4, 2, Budget::unlimited()).map_err(|e| e.to_string())?;
    ensure(two.status == SolveStatus::Unsat, || "T4 with 2 colors is not UNSAT".into())?;
    for n in 4..=8 {
        let outcome = decide_k_colorable(&Region::triangle(n), 3, Budget::unlimited()).map_err(|e| e.to_string())?;
        let c = outcome.coloring().ok_or_else(|| format!("T{n} with 3 colors: {}", outcome.status.label()))?;
        ensure(is_proper(c).is_proper(), || format!("T{n} coloring improper"))?;
    }
    let took = within(start, SMALL_F_LIMIT, "small f values")?;
    Ok(format!("f(1..4) = 1, 2, 2, 3; T5..T8 3-colored ({took:.2?})"))
}

fn t9_three_colors() -> Check {
    let start = Instant::now();
    let region = Region::triangle(9);
    let outcome = decide_k_colorable(&region, 3, Budget::time(T9_LIMIT)).map_err(|e| e.to_string())?;
    let verdict = outcome.status.label();
    ensure(outcome.status != SolveStatus::Unknown, || "internal solver gave no verdict".into())?;
    if let Some(c) = outcome.coloring() {
        ensure(is_proper(c).is_proper(), || "T9 3-coloring improper".into())?;
    }
    let mut note = format!("internal {verdict} in {} nodes", outcome.stats.nodes);
    if let Some(cmd) = sat_cmd() {
        let cnf = export_dimacs(&region, 3).map_err(|e| e.to_string())?;
        let external = run_external(&cmd, &cnf, Some(T9_LIMIT)).map_err(|e| e.to_string())?;
        ensure(external.status.label() == verdict, || {
            format!("external solver says {}, internal {verdict}", external.status.label())
        })?;
        note.push_str(&format!(", external {} ({} vars)", external.status.label(), cnf.num_vars()));
    }
    let took = within(start, T9_LIMIT, "T9")?;
    Ok(format!("T9 with 3 colors: {note} ({took:.2?})"))
}

fn upper_bound_table() -> Check {
    let start = Instant::now();
    let dir = certificates_dir();
    for (n, colors) in TABLE {
        let path = dir.join(format!("t{n:02}-k{colors}.cert"));
        let c = load(&path)?;
        ensure(c.region() == Region::triangle(n), || format!("{} is for {}", path.display(), c.region()))?;
        ensure(c.color_count() as u32 <= colors, || format!("T{n} uses {} colors", c.color_count()))?;
        ensure(is_proper(&c).is_proper(), || format!("{} is improper", path.display()))?;
    }
    let took = within(start, CERTIFICATE_LIMIT, "certificate verification")?;
    let mut note = format!("{} certificates verified ({took:.2?})", TABLE.len());
    if let Some(cmd) = sat_cmd() {
        for (n, colors) in TABLE {
            let cnf = export_dimacs(&Region::triangle(n), colors).map_err(|e| e.to_string())?;
            let outcome = run_external(&cmd, &cnf, None).map_err(|e| e.to_string())?;
            let c = outcome.coloring().ok_or_else(|| format!("external: T{n} K={colors} {}", outcome.status.label()))?;
            ensure(is_proper(c).is_proper(), || format!("external T{n} coloring improper"))?;
        }
        note.push_str("; regenerated via external SAT");
    }
    Ok(note)
}

fn stripe_result() -> Check {
    let start = Instant::now();
    let attempts = search_stripe_periods(6, 4, 1..=12, Budget::time(STRIPE_SEARCH_LIMIT), 1).map_err(|e| e.to_string())?;
    let searched = within(start, STRIPE_SEARCH_LIMIT, "stripe search")?;
    let (period, found) = attempts
        .iter()
        .find_map(|(p, o)| o.coloring().map(|c| (*p, c.clone())))
        .ok_or("no periodic 4-coloring of S6 with period <= 12")?;
    let max_side2 = periodic_triangles(6, period).iter().map(|t| t.side2()).max().unwrap_or(0);
    ensure(max_side2 == 25, || format!("window triangles reach side^2 {max_side2}, expected 25"))?;
    let verify_start = Instant::now();
    ensure(is_proper(&found).is_proper(), || "found coloring improper".into())?;
    let committed = load(&certificates_dir().join("s6-k4-p6.cert"))?;
    ensure(committed.color_count() <= 4 && is_proper(&committed).is_proper(), || "committed block bad".into())?;
    let verified = within(verify_start, STRIPE_VERIFY_LIMIT, "stripe verification")?;
    let mut note = format!("period {period}, search {searched:.2?}, verification {verified:.2?}");
    if let Some(cmd) = sat_cmd() {
        let cnf = export_dimacs(&Region::periodic_stripe(6, period), 4).map_err(|e| e.to_string())?;
        let outcome = run_external(&cmd, &cnf, Some(STRIPE_SEARCH_LIMIT)).map_err(|e| e.to_string())?;
        let c = outcome.coloring().ok_or_else(|| format!("external: S6/{period} {}", outcome.status.label()))?;
        ensure(is_proper(c).is_proper(), || "external stripe coloring improper".into())?;
        note.push_str("; external SAT agrees");
    }
    Ok(note)
}

fn asymptotic_construction() -> Check {
    let block = load(&certificates_dir().join("s6-k4-p6.cert"))?;
    let search = minimal_spacer(BANDED_N, &block, 1).map_err(|e| e.to_string())?;
    let c = banded_coloring(BANDED_N, &block, search.spacer).map_err(|e| e.to_string())?;
    let start = Instant::now();
    ensure(is_proper(&c).is_proper(), || "banded coloring improper".into())?;
    let took = within(start, BANDED_VERIFY_LIMIT, "pair-based verification")?;
    let ratio = c.color_count() as f64 / BANDED_N as f64;
    ensure(ratio <= BANDED_MAX_RATIO, || format!("{} colors, ratio {ratio:.4}", c.color_count()))?;
    Ok(format!("n = {BANDED_N}, d = {}, {} colors, ratio {ratio:.4}, verified in {took:.2?}", search.spacer, c.color_count()))
}

fn chevron_bound() -> Check {
    let start = Instant::now();
    for n in 1..=100 {
        let c = chevron_coloring(n);
        ensure(c.color_count() as u32 == n / 2 + 1, || format!("n = {n}: {} colors", c.color_count()))?;
        ensure(is_proper(&c).is_proper(), || format!("n = {n}: improper"))?;
    }
    let took = within(start, CHEVRON_LIMIT, "chevron")?;
    Ok(format!("n = 1..100 ({took:.2?})"))
}

fn triple_systems() -> Check {
    let start = Instant::now();
    for n in 1..=12u32 {
        let r = is_modified_sts(&TripleSystem::from_triangles(n));
        ensure(r == Some(a2_closed(n as u64) as u64), || format!("T{n}: {r:?}"))?;
    }
    ensure(is_modified_sts(&TripleSystem::fano()) == Some(0), || "Fano plane".into())?;
    ensure(search_modified_sts(5, 0, SearchOptions::default()).is_err(), || "v = 5 accepted".into())?;
    let took = within(start, TRIPLES_LIMIT, "triples")?;
    Ok(format!("T1..T12, Fano, v = 5 rejected ({took:.2?})"))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Check)> = vec![
        (1, "counting oracle equivalence", counting_oracle),
        (2, "decomposition identity", decomposition),
        (3, "a0 = a2", a0_equals_a2),
        (4, "small chromatic values", small_chromatic_values),
        (5, "T9 with three colors", t9_three_colors),
        (6, "upper-bound table", upper_bound_table),
        (7, "periodic 4-coloring of S6", stripe_result),
        (8, "banded construction at n = 600", asymptotic_construction),
        (9, "chevron bound", chevron_bound),
        (10, "triple systems", triple_systems),
    ];
    let mut passed = Vec::new();
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => {
                println!("PASS {id:>2} {name}: {detail}");
                passed.push(id);
            }
            Err(why) => println!("FAIL {id:>2} {name}: {why}"),
        }
    }
    let offline: Vec<u32> = vec![1, 2, 3, 4, 8, 9, 10];
    let degraded = [5, 6, 7];
    let external = sat_cmd();
    let eleven = offline.iter().chain(&degraded).all(|id| passed.contains(id));
    let mode = match &external {
        None => "no external solver: 5-7 ran on the internal solver and committed certificates".to_string(),
        Some(cmd) => format!("external solver {cmd:?} also used for 5-7"),
    };
    if eleven {
        println!("PASS 11 offline property suites: {mode}");
        passed.push(11);
    } else {
        println!("FAIL 11 offline property suites: {mode}");
    }
    let failed = 11 - passed.len();
    println!("{} of 11 criteria passed", passed.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
