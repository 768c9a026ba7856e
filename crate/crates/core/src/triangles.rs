//! Equilateral triangles of a region and the apex-completion count of every
//! point pair.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::lattice::{LatticePoint, Region, Turn};
use crate::Error;

/// Three lattice points forming a nondegenerate equilateral triangle, stored
/// in canonical `(b, a)` order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triangle {
    vertices: [LatticePoint; 3],
}

impl Triangle {
    /// Returns `None` unless the three points are pairwise equidistant and
    /// distinct.
    pub fn new(p: LatticePoint, q: LatticePoint, r: LatticePoint) -> Option<Triangle> {
        let side = p.dist2(q);
        if side == 0 || q.dist2(r) != side || p.dist2(r) != side {
            return None;
        }
        let mut vertices = [p, q, r];
        vertices.sort();
        Some(Triangle { vertices })
    }

    pub fn vertices(&self) -> [LatticePoint; 3] {
        self.vertices
    }

    /// Squared side length.
    pub fn side2(&self) -> i64 {
        self.vertices[0].dist2(self.vertices[1])
    }

    /// Whether this is a translate of `{(0,0), (s,0), (0,s)}`: an upright
    /// triangle with a horizontal bottom side.
    pub fn is_upright(&self) -> bool {
        let [p, q, r] = self.vertices;
        let s = q.a - p.a;
        s > 0 && q.b == p.b && r == LatticePoint::new(p.a, p.b + s)
    }

    /// The three vertex pairs, each with the vertex it misses.
    pub fn pairs(&self) -> [(LatticePoint, LatticePoint, LatticePoint); 3] {
        let [p, q, r] = self.vertices;
        [(p, q, r), (p, r, q), (q, r, p)]
    }

    pub fn translate(&self, by: LatticePoint) -> Triangle {
        let [p, q, r] = self.vertices;
        Triangle { vertices: [p + by, q + by, r + by] }
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p, q, r] = self.vertices;
        write!(f, "{{{p}, {q}, {r}}}")
    }
}

/// The two points completing `p1, p2` to an equilateral triangle: `p2`
/// rotated about `p1` by +60° and by −60°.
pub fn apex_candidates(
    p1: LatticePoint,
    p2: LatticePoint,
) -> Result<(LatticePoint, LatticePoint), Error> {
    if p1 == p2 {
        return Err(Error::DegeneratePair(p1));
    }
    let v = p2 - p1;
    Ok((p1 + v.rotate60(Turn::Ccw), p1 + v.rotate60(Turn::Cw)))
}

fn require_finite(region: &Region) -> Result<(), Error> {
    if region.is_finite() {
        Ok(())
    } else {
        Err(Error::PeriodicRegion(*region))
    }
}

/// Every equilateral triangle with all three vertices in `region`, each once,
/// sorted.
///
/// Walks all unordered pairs and keeps in-region apexes; each triangle is
/// found from three pairs and deduplicated.
pub fn enumerate_triangles(region: &Region) -> Result<Vec<Triangle>, Error> {
    require_finite(region)?;
    let pts = region.points();
    let mut found = BTreeSet::new();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let (c1, c2) = apex_candidates(p, q).expect("points are distinct");
            for c in [c1, c2] {
                if region.contains(c) {
                    found.insert(Triangle::new(p, q, c).expect("apex completes a triangle"));
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Calls `visit` once per equilateral triangle of `region`, in no particular
/// order.
///
/// Each triangle `{p, p + v, p + rot60(v)}` is listed from the one vertex
/// whose edge vector `v` falls in the half-open 120° sector starting at the
/// positive x axis, so no deduplication is needed. Much faster than
/// [`enumerate_triangles`] on large regions.
pub fn for_each_triangle(region: &Region, mut visit: impl FnMut(Triangle)) -> Result<(), Error> {
    require_finite(region)?;
    let pts = region.points();
    let (lo, hi) = match *region {
        Region::Triangle { n } => (0, n as i64 - 1),
        Region::StripeWindow { k, x_min, x_max } => (x_min, x_max + k as i64),
        Region::PeriodicStripe { .. } => unreachable!(),
    };
    let reach = hi - lo + region.rows() as i64;
    for &p in &pts {
        for i in 1..=reach {
            for j in 0..=reach {
                for v in [LatticePoint::new(i, j), LatticePoint::new(-j, i + j)] {
                    let q = p + v;
                    if !region.contains(q) {
                        continue;
                    }
                    let r = p + v.rotate60(Turn::Ccw);
                    if region.contains(r) {
                        visit(Triangle::new(p, q, r).expect("rotation gives a triangle"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// One representative of every translation class (by multiples of
/// `period`) of triangles in the infinite stripe `Sₖ`: those whose smallest
/// `a` coordinate lies in `0..period`.
///
/// A triangle inside `k` rows has side at most `k − 1`, so its vertices
/// differ by at most `3(k − 1)/2` in `a`; the enumeration window is sized
/// for that.
pub fn periodic_triangles(k: u32, period: u32) -> Vec<Triangle> {
    if k == 0 || period == 0 {
        return Vec::new();
    }
    let window = Region::stripe_window(k, 0, period as i64 - 1 + 2 * k as i64);
    let mut out = Vec::new();
    for_each_triangle(&window, |t| {
        let min_a = t.vertices().iter().map(|v| v.a).min().expect("three vertices");
        if min_a < period as i64 {
            out.push(t);
        }
    })
    .expect("window is finite");
    out.sort();
    out
}

/// Number of triangles of `region` with a horizontal bottom side.
pub fn count_upright(region: &Region) -> Result<u64, Error> {
    let mut count = 0;
    for_each_triangle(region, |t| {
        if t.is_upright() {
            count += 1;
        }
    })?;
    Ok(count)
}

/// For every unordered pair of a finite region, how many of its two apex
/// candidates lie in the region.
#[derive(Clone, Debug)]
pub struct PairClassification {
    region: Region,
    counts: Vec<u8>,
    tallies: [u64; 3],
}

fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    j * (j - 1) / 2 + i
}

impl PairClassification {
    pub fn region(&self) -> Region {
        self.region
    }

    /// `(a0, a1, a2)`: pairs with zero, one and two in-region apexes.
    pub fn tallies(&self) -> (u64, u64, u64) {
        (self.tallies[0], self.tallies[1], self.tallies[2])
    }

    pub fn total_pairs(&self) -> u64 {
        self.counts.len() as u64
    }

    /// Apex count for the pair `{p, q}`; `None` if either point is outside
    /// the region or `p == q`.
    pub fn count(&self, p: LatticePoint, q: LatticePoint) -> Option<u8> {
        let i = self.region.rank(p)?;
        let j = self.region.rank(q)?;
        if i == j {
            return None;
        }
        Some(self.counts[pair_index(i, j)])
    }

    /// All pairs with exactly `class` in-region apexes, in canonical order.
    pub fn pairs_in_class(&self, class: u8) -> Vec<(LatticePoint, LatticePoint)> {
        let pts = self.region.points();
        let mut out = Vec::new();
        for j in 1..pts.len() {
            for i in 0..j {
                if self.counts[pair_index(i, j)] == class {
                    out.push((pts[i], pts[j]));
                }
            }
        }
        out
    }
}

/// Classify every unordered pair of a finite region by its number of
/// in-region apex completions.
pub fn classify_pairs(region: &Region) -> Result<PairClassification, Error> {
    require_finite(region)?;
    let pts = region.points();
    let len = pts.len();
    let mut counts = vec![0u8; len * len.saturating_sub(1) / 2];
    let mut tallies = [0u64; 3];
    for j in 1..len {
        for i in 0..j {
            let (c1, c2) = apex_candidates(pts[i], pts[j]).expect("points are distinct");
            let c = region.contains(c1) as u8 + region.contains(c2) as u8;
            counts[pair_index(i, j)] = c;
            tallies[c as usize] += 1;
        }
    }
    Ok(PairClassification { region: *region, counts, tallies })
}
