//! Colorings, the proper-coloring checker and the certificate format.
//!
//! A coloring is *proper* when no three points forming an equilateral
//! triangle, in any orientation, share a color.
//!
//! Certificates are line-oriented UTF-8:
//!
//! ```text
//! trilat-coloring v1
//! region triangle 4          # or: region stripe <k> period <p>
//! colors 3
//! 0 0 0                      # <a> <b> <color>, canonical (b, a) order
//! ...
//! ```
//!
//! `#` starts a comment. A stripe certificate lists the fundamental domain
//! `0 ≤ a < p`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::lattice::{LatticePoint, Region};
use crate::triangles::{apex_candidates, enumerate_triangles, periodic_triangles, Triangle};
use crate::{content_lines, Error, ParseError};

pub const CERTIFICATE_MAGIC: &str = "trilat-coloring v1";

/// A total assignment of colors `0..num_colors` to the points of a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    region: Region,
    num_colors: u32,
    colors: Vec<u32>,
}

impl Coloring {
    /// `colors[i]` is the color of the point of rank `i`.
    pub fn new(region: Region, num_colors: u32, colors: Vec<u32>) -> Result<Coloring, Error> {
        if colors.len() != region.len() {
            return Err(Error::WrongLength { expected: region.len(), got: colors.len() });
        }
        if let Some(&color) = colors.iter().find(|&&c| c >= num_colors) {
            return Err(Error::ColorOutOfRange { color, num_colors });
        }
        Ok(Coloring { region, num_colors, colors })
    }

    pub fn from_fn(
        region: Region,
        num_colors: u32,
        color_of: impl FnMut(LatticePoint) -> u32,
    ) -> Result<Coloring, Error> {
        Coloring::new(region, num_colors, region.points().into_iter().map(color_of).collect())
    }

    /// Builds a coloring from explicit `(point, color)` entries, which must
    /// cover the region exactly once.
    pub fn from_entries(
        region: Region,
        num_colors: u32,
        entries: impl IntoIterator<Item = (LatticePoint, u32)>,
    ) -> Result<Coloring, Error> {
        let mut colors = vec![None; region.len()];
        for (point, color) in entries {
            let rank = canonical_rank(&region, point)
                .ok_or(Error::OutOfRegion { point, region })?;
            if color >= num_colors {
                return Err(Error::ColorOutOfRange { color, num_colors });
            }
            if colors[rank].replace(color).is_some() {
                return Err(Error::DuplicatePoint(point));
            }
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::PartialColoring(region.point_at(i))))
            .collect::<Result<_, _>>()?;
        Ok(Coloring { region, num_colors, colors })
    }

    pub fn region(&self) -> Region {
        self.region
    }

    /// The palette size `K`; colors are `0..K`.
    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    /// Colors by point rank.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Color of `p`, reducing modulo the period on a periodic stripe.
    pub fn color(&self, p: LatticePoint) -> Option<u32> {
        self.region.rank(p).map(|r| self.colors[r])
    }

    /// Number of distinct colors actually used.
    pub fn color_count(&self) -> usize {
        let mut seen = vec![false; self.num_colors as usize];
        for &c in &self.colors {
            seen[c as usize] = true;
        }
        seen.into_iter().filter(|&s| s).count()
    }

    /// Renumbers colors so they are `0..color_count()` in order of first use
    /// and shrinks the palette to match.
    pub fn compact(&self) -> Coloring {
        let mut map = HashMap::new();
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                let next = map.len() as u32;
                *map.entry(c).or_insert(next)
            })
            .collect();
        Coloring { region: self.region, num_colors: map.len().max(1) as u32, colors }
    }

    /// Applies `perm` to every color. `perm` must map into `0..num_colors`.
    pub fn permute_colors(&self, perm: impl Fn(u32) -> u32) -> Result<Coloring, Error> {
        Coloring::new(self.region, self.num_colors, self.colors.iter().map(|&c| perm(c)).collect())
    }

    /// Points grouped by color, each group in canonical order.
    pub fn color_classes(&self) -> Vec<Vec<LatticePoint>> {
        let mut classes = vec![Vec::new(); self.num_colors as usize];
        for (rank, &c) in self.colors.iter().enumerate() {
            classes[c as usize].push(self.region.point_at(rank));
        }
        classes
    }
}

/// Rank of `p` without periodic reduction: stripe entries must name the
/// fundamental domain.
fn canonical_rank(region: &Region, p: LatticePoint) -> Option<usize> {
    if let Region::PeriodicStripe { period, .. } = *region {
        if p.a < 0 || p.a >= period as i64 {
            return None;
        }
    }
    region.rank(p)
}

/// Outcome of a properness check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proper,
    /// A monochromatic triangle.
    Monochromatic(Triangle),
}

impl Verdict {
    pub fn is_proper(&self) -> bool {
        matches!(self, Verdict::Proper)
    }

    pub fn witness(&self) -> Option<Triangle> {
        match *self {
            Verdict::Proper => None,
            Verdict::Monochromatic(t) => Some(t),
        }
    }
}

/// Checks that no equilateral triangle is monochromatic.
///
/// On finite regions this walks same-colored pairs and looks up their two
/// apexes, costing `Σ |class|²` rather than one step per triangle. On a
/// periodic stripe it scans one representative per translation class, which
/// covers the whole infinite tiling.
pub fn is_proper(c: &Coloring) -> Verdict {
    match c.region {
        Region::PeriodicStripe { k, period } => scan(c, periodic_triangles(k, period)),
        region => {
            for class in c.color_classes() {
                if let Some(t) = monochromatic_in_class(c, &region, &class) {
                    return Verdict::Monochromatic(t);
                }
            }
            Verdict::Proper
        }
    }
}

/// [`is_proper`] with color classes checked on up to `jobs` threads. The
/// verdict is the same; which witness is reported may differ.
pub fn is_proper_parallel(c: &Coloring, jobs: usize) -> Verdict {
    if jobs <= 1 || !c.region.is_finite() {
        return is_proper(c);
    }
    let region = c.region;
    let classes = c.color_classes();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let found = std::sync::Mutex::new(None);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= classes.len() || found.lock().unwrap().is_some() {
                    break;
                }
                if let Some(t) = monochromatic_in_class(c, &region, &classes[i]) {
                    *found.lock().unwrap() = Some(t);
                }
            });
        }
    });
    let witness = found.into_inner().unwrap();
    witness.map_or(Verdict::Proper, Verdict::Monochromatic)
}

fn monochromatic_in_class(c: &Coloring, region: &Region, class: &[LatticePoint]) -> Option<Triangle> {
    let Some(&first) = class.first() else {
        return None;
    };
    let color = c.color(first);
    for (i, &p) in class.iter().enumerate() {
        for &q in &class[i + 1..] {
            let (x, y) = apex_candidates(p, q).expect("distinct points");
            for apex in [x, y] {
                if region.contains(apex) && c.color(apex) == color {
                    return Triangle::new(p, q, apex);
                }
            }
        }
    }
    None
}

/// Reference checker: scans every enumerated triangle. Quartic in `n`; used
/// to cross-check [`is_proper`].
pub fn is_proper_by_triangles(c: &Coloring) -> Verdict {
    let triangles = match c.region {
        Region::PeriodicStripe { k, period } => periodic_triangles(k, period),
        region => enumerate_triangles(&region).expect("finite region"),
    };
    scan(c, triangles)
}

fn scan(c: &Coloring, triangles: impl IntoIterator<Item = Triangle>) -> Verdict {
    for t in triangles {
        let [p, q, r] = t.vertices();
        let color = c.color(p);
        if color == c.color(q) && color == c.color(r) {
            return Verdict::Monochromatic(t);
        }
    }
    Verdict::Proper
}

/// Number of distinct colors used.
pub fn color_count(c: &Coloring) -> usize {
    c.color_count()
}

fn region_line(region: &Region) -> String {
    match *region {
        Region::Triangle { n } => format!("region triangle {n}"),
        Region::PeriodicStripe { k, period } => format!("region stripe {k} period {period}"),
        Region::StripeWindow { k, x_min, x_max } => format!("region window {k} {x_min} {x_max}"),
    }
}

/// Serializes a coloring; points appear in canonical `(b, a)` order.
pub fn write_certificate(c: &Coloring) -> String {
    let mut out = String::with_capacity(16 * c.colors.len() + 64);
    out.push_str(CERTIFICATE_MAGIC);
    out.push('\n');
    out.push_str(&region_line(&c.region));
    out.push('\n');
    writeln!(out, "colors {}", c.num_colors).unwrap();
    for (rank, &color) in c.colors.iter().enumerate() {
        let p = c.region.point_at(rank);
        writeln!(out, "{} {} {}", p.a, p.b, color).unwrap();
    }
    out
}

fn parse_num<T: std::str::FromStr>(line: usize, word: &str, what: &str) -> Result<T, ParseError> {
    word.parse().map_err(|_| ParseError::new(line, format!("bad {what} {word:?}")))
}

fn parse_region(line: usize, text: &str) -> Result<Region, ParseError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let positive = |w: &str, what: &str| -> Result<u32, ParseError> {
        let v: u32 = parse_num(line, w, what)?;
        if v == 0 {
            return Err(ParseError::new(line, format!("{what} must be positive")));
        }
        Ok(v)
    };
    match words.as_slice() {
        ["region", "triangle", n] => Ok(Region::triangle(positive(n, "row count")?)),
        ["region", "stripe", k, "period", p] => {
            Ok(Region::periodic_stripe(positive(k, "row count")?, positive(p, "period")?))
        }
        ["region", "window", k, lo, hi] => {
            let (lo, hi) = (parse_num(line, lo, "x_min")?, parse_num(line, hi, "x_max")?);
            if hi < lo {
                return Err(ParseError::new(line, "empty window"));
            }
            Ok(Region::stripe_window(positive(k, "row count")?, lo, hi))
        }
        _ => Err(ParseError::new(line, format!("expected a region line, got {text:?}"))),
    }
}

/// Parses a certificate. Syntax problems, points outside the region,
/// repeated points, colors at or above `K` and missing points are reported as
/// distinct errors.
pub fn read_certificate(text: &str) -> Result<Coloring, Error> {
    let mut lines = content_lines(text);
    fn header<'t>(
        lines: &mut impl Iterator<Item = (usize, &'t str)>,
        what: &str,
    ) -> Result<(usize, &'t str), ParseError> {
        lines.next().ok_or_else(|| ParseError::new(0, format!("missing {what} line")))
    }
    let (n, magic) = header(&mut lines, "header")?;
    if magic != CERTIFICATE_MAGIC {
        return Err(ParseError::new(n, format!("expected {CERTIFICATE_MAGIC:?}")).into());
    }
    let (n, region) = header(&mut lines, "region")?;
    let region = parse_region(n, region)?;
    let (n, colors) = header(&mut lines, "colors")?;
    let num_colors = match colors.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["colors", k] => parse_num::<u32>(n, k, "color count")?,
        _ => return Err(ParseError::new(n, "expected `colors <K>`").into()),
    };
    if num_colors == 0 {
        return Err(ParseError::new(n, "color count must be positive").into());
    }
    let mut entries = Vec::with_capacity(region.len());
    for (n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        let [a, b, c] = words.as_slice() else {
            return Err(ParseError::new(n, "expected `<a> <b> <color>`").into());
        };
        let point = LatticePoint::new(parse_num(n, a, "coordinate")?, parse_num(n, b, "coordinate")?);
        entries.push((point, parse_num(n, c, "color")?));
    }
    Coloring::from_entries(region, num_colors, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Symmetry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t4_three_coloring() -> Coloring {
        // Rows bottom to top; the whole bottom row shares a color.
        let rows: [&[u32]; 4] = [&[0, 0, 0, 0], &[1, 1, 2], &[2, 1], &[1]];
        Coloring::new(Region::triangle(4), 3, rows.concat()).unwrap()
    }

    #[test]
    fn all_one_color_t2_is_improper() {
        let c = Coloring::new(Region::triangle(2), 1, vec![0; 3]).unwrap();
        let t = is_proper(&c).witness().expect("improper");
        assert_eq!(t.vertices(), [(0, 0).into(), (1, 0).into(), (0, 1).into()]);
    }

    #[test]
    fn residue_coloring_agrees_with_scan() {
        let c = Coloring::from_fn(Region::triangle(4), 3, |p| ((p.a + p.b) % 3) as u32).unwrap();
        assert_eq!(is_proper(&c).is_proper(), is_proper_by_triangles(&c).is_proper());
    }

    #[test]
    fn no_two_coloring_of_t4() {
        for mask in 0u32..1 << 10 {
            let c = Coloring::new(Region::triangle(4), 2, (0..10).map(|i| (mask >> i) & 1).collect())
                .unwrap();
            assert!(!is_proper(&c).is_proper(), "mask {mask:b}");
            assert!(!is_proper_by_triangles(&c).is_proper());
        }
    }

    #[test]
    fn known_three_coloring_of_t4() {
        let c = t4_three_coloring();
        assert!(is_proper(&c).is_proper());
        assert_eq!(color_count(&c), 3);
    }

    #[test]
    fn color_count_examples() {
        let c = Coloring::new(Region::triangle(1), 1, vec![0]).unwrap();
        assert_eq!(color_count(&c), 1);
        let sparse = Coloring::new(Region::triangle(2), 9, vec![8, 3, 8]).unwrap();
        assert_eq!(sparse.color_count(), 2);
        assert_eq!(sparse.compact().colors(), &[0, 1, 0]);
        assert_eq!(sparse.compact().num_colors(), 2);
    }

    #[test]
    fn constructor_errors() {
        let r = Region::triangle(2);
        assert!(matches!(Coloring::new(r, 2, vec![0, 1]), Err(Error::WrongLength { .. })));
        assert!(matches!(Coloring::new(r, 2, vec![0, 1, 2]), Err(Error::ColorOutOfRange { .. })));
        let entries = [((0, 0).into(), 0), ((1, 0).into(), 1)];
        assert!(matches!(Coloring::from_entries(r, 2, entries), Err(Error::PartialColoring(_))));
    }

    #[test]
    fn pair_and_triangle_checkers_agree_on_random_colorings() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=12 {
            for k in 2..=4 {
                for _ in 0..20 {
                    let c = Coloring::from_fn(Region::triangle(n), k, |_| rng.gen_range(0..k)).unwrap();
                    let fast = is_proper(&c);
                    assert_eq!(fast.is_proper(), is_proper_by_triangles(&c).is_proper());
                    assert_eq!(fast.is_proper(), is_proper_parallel(&c, 3).is_proper());
                    if let Some(t) = fast.witness() {
                        let [p, q, r] = t.vertices();
                        assert!(c.color(p) == c.color(q) && c.color(q) == c.color(r));
                    }
                }
            }
        }
    }

    #[test]
    fn properness_is_invariant_under_symmetry_and_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 6;
        for _ in 0..200 {
            let c = Coloring::from_fn(Region::triangle(n), 3, |_| rng.gen_range(0..3)).unwrap();
            let verdict = is_proper(&c).is_proper();
            let swapped = c.permute_colors(|x| (x + 1) % 3).unwrap();
            assert_eq!(is_proper(&swapped).is_proper(), verdict);
            for s in Symmetry::ALL {
                let moved = Coloring::from_fn(c.region(), 3, |p| {
                    c.color(s.inverse().apply(n, p)).unwrap()
                })
                .unwrap();
                assert_eq!(is_proper(&moved).is_proper(), verdict);
            }
        }
    }

    #[test]
    fn periodic_checker_matches_unrolled_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (k, period) = (rng.gen_range(1..5u32), rng.gen_range(1..6u32));
            let c = Coloring::from_fn(Region::periodic_stripe(k, period), 3, |_| rng.gen_range(0..3))
                .unwrap();
            let window = Region::stripe_window(k, -10, 10 + 3 * k as i64);
            let unrolled = Coloring::from_fn(window, 3, |p| c.color(p).unwrap()).unwrap();
            assert_eq!(is_proper(&c).is_proper(), is_proper(&unrolled).is_proper());
        }
    }

    #[test]
    fn certificate_round_trip() {
        let c = t4_three_coloring();
        let text = write_certificate(&c);
        assert!(text.starts_with("trilat-coloring v1\nregion triangle 4\ncolors 3\n0 0 0\n"));
        let back = read_certificate(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(write_certificate(&back), text);
        let stripe = Coloring::from_fn(Region::periodic_stripe(2, 3), 2, |p| (p.b % 2) as u32).unwrap();
        assert_eq!(read_certificate(&write_certificate(&stripe)).unwrap(), stripe);
    }

    #[test]
    fn certificate_comments_are_ignored() {
        let text = "# made by hand\ntrilat-coloring v1\nregion triangle 2 # T2\ncolors 2\n\n0 0 0\n1 0 1\n0 1 1 # apex\n";
        let c = read_certificate(text).unwrap();
        assert_eq!(c.colors(), &[0, 1, 1]);
    }

    #[test]
    fn certificate_errors_are_distinct() {
        let head = "trilat-coloring v1\nregion triangle 2\ncolors 2\n";
        let syntax = read_certificate(&format!("{head}0 0\n"));
        assert!(matches!(syntax, Err(Error::Parse(ParseError { line: 4, .. }))));
        let outside = read_certificate(&format!("{head}0 0 0\n1 0 1\n0 1 1\n2 0 0\n"));
        assert!(matches!(outside, Err(Error::OutOfRegion { .. })));
        let dup = read_certificate(&format!("{head}0 0 0\n0 0 1\n"));
        assert!(matches!(dup, Err(Error::DuplicatePoint(_))));
        let color = read_certificate(&format!("{head}0 0 2\n1 0 1\n0 1 1\n"));
        assert!(matches!(color, Err(Error::ColorOutOfRange { color: 2, num_colors: 2 })));
        let partial = read_certificate(&format!("{head}0 0 0\n1 0 1\n"));
        assert!(matches!(partial, Err(Error::PartialColoring(_))));
        assert!(matches!(read_certificate("trilat-coloring v2\n"), Err(Error::Parse(_))));
        assert!(matches!(read_certificate(""), Err(Error::Parse(_))));
    }

    #[test]
    fn t4_certificate_missing_one_point_is_partial() {
        let text = write_certificate(&t4_three_coloring());
        let truncated: String = text.lines().take(3 + 9).map(|l| format!("{l}\n")).collect();
        assert!(matches!(read_certificate(&truncated), Err(Error::PartialColoring(_))));
    }

    #[test]
    fn stripe_certificate_rejects_points_outside_the_fundamental_domain() {
        let text = "trilat-coloring v1\nregion stripe 1 period 2\ncolors 1\n0 0 0\n2 0 0\n";
        assert!(matches!(read_certificate(text), Err(Error::OutOfRegion { .. })));
    }
}
