//! Explicit proper colorings.
//!
//! * The chevron coloring of `Tₙ` uses `⌊n/2⌋ + 1` colors: the middle column
//!   is one class, and every other class is a pair of 60° lines meeting on
//!   the middle column.
//! * The stripe partition colors `Sₖ` with twice as many colors as a given
//!   coloring of `Tₖ`, by tiling `Sₖ` with upright copies of `Tₖ` and the
//!   inverted gaps between them.
//! * The banded coloring replaces groups of `w` consecutive chevrons by copies
//!   of a periodic coloring of `S_w`, with the mirrored halves of each group
//!   sharing one palette, and widens the middle column to `d` columns so the
//!   halves cannot see each other. With the 4-coloring of `S₆` this uses
//!   about `n/3 + d` colors.
//!
//! Every coloring returned here has been run through the checker.

use crate::coloring::{is_proper, is_proper_parallel, Coloring};
use crate::lattice::{LatticePoint, Region, Turn};
use crate::Error;

/// The middle column of `Tₙ` is `2a + b = n − 1` for either parity of `n`;
/// for even `n` it holds points on odd rows only.
fn middle_column(n: u32) -> i64 {
    n as i64 - 1
}

/// Index of the 60° line through `p` on its side of the axis `2a + b = axis`:
/// `a` on the left, the mirrored `a` on the right. The line pair with index
/// `c` meets the axis at row `n − 1 − 2c`.
fn line_index(n: u32, p: LatticePoint) -> i64 {
    if p.column() < middle_column(n) {
        p.a
    } else {
        mirror(n, p).a
    }
}

/// Reflection of `Tₙ` across its vertical axis.
fn mirror(n: u32, p: LatticePoint) -> LatticePoint {
    LatticePoint::new(n as i64 - 1 - p.a - p.b, p.b)
}

/// Proper coloring of `Tₙ` with exactly `⌊n/2⌋ + 1` colors. Color 0 is the
/// middle column and color `1 + c` is chevron `c`.
pub fn chevron_coloring(n: u32) -> Coloring {
    assert!(n >= 1, "T_0 has no points");
    let mid = middle_column(n);
    Coloring::from_fn(Region::triangle(n), n / 2 + 1, |p| {
        if p.column() == mid {
            0
        } else {
            1 + line_index(n, p) as u32
        }
    })
    .expect("chevron indices stay below n/2 + 1")
}

/// Colors `Sₖ` from a proper coloring of `Tₖ` with `f` colors.
///
/// The fundamental domain `0 ≤ a < k` splits into the upright copy
/// `a + b ≤ k − 1`, colored exactly as the input, and the inverted remainder,
/// which is a point reflection of a `Tₖ₋₁` inside `Tₖ` and is colored with
/// the input's colors shifted by `f`. The result has period `k` and at most
/// `2f` colors.
pub fn stripe_partition_coloring(k: u32, tri: &Coloring) -> Result<Coloring, Error> {
    if tri.region() != Region::triangle(k) {
        return Err(Error::InvalidArgument(format!(
            "expected a coloring of T{k}, got {}",
            tri.region()
        )));
    }
    if let Some(t) = is_proper(tri).witness() {
        return Err(Error::Improper(t));
    }
    let f = tri.num_colors();
    let top = k as i64 - 1;
    let stripe = Coloring::from_fn(Region::periodic_stripe(k, k), 2 * f, |p| {
        if p.a + p.b <= top {
            tri.color(p).expect("upright copy lies in T_k")
        } else {
            f + tri.color(LatticePoint::new(top - p.a, top - p.b)).expect("reflected gap lies in T_k")
        }
    })?;
    match is_proper(&stripe).witness() {
        Some(t) => Err(Error::Improper(t)),
        None => Ok(stripe),
    }
}

/// Exact lattice isometry taking the slanted band of 60° lines
/// `first_line ≤ a < first_line + width` onto rows `0..width` of the stripe:
/// rotate by −60°, then shift rows so line `first_line + width − 1` lands on
/// row 0.
pub fn band_to_stripe(p: LatticePoint, first_line: i64, width: u32) -> LatticePoint {
    p.rotate60(Turn::Cw) + LatticePoint::new(0, first_line + width as i64 - 1)
}

/// Parameters of the banded coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub scheme: Scheme,
    /// Band width `w`; rows of the base block.
    pub band_width: u32,
    /// Number `d` of distinctly colored central columns.
    pub spacer: u32,
    /// Proper periodic coloring of `S_w`, required for [`Scheme::Banded`].
    pub base_block: Option<Coloring>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Chevron,
    StripePartition,
    Banded,
}

impl ConstructionSpec {
    pub fn chevron() -> ConstructionSpec {
        ConstructionSpec { scheme: Scheme::Chevron, band_width: 1, spacer: 1, base_block: None }
    }

    pub fn banded(base_block: Coloring, spacer: u32) -> ConstructionSpec {
        ConstructionSpec {
            scheme: Scheme::Banded,
            band_width: base_block.region().rows(),
            spacer,
            base_block: Some(base_block),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.band_width == 0 {
            return Err(Error::InvalidArgument("band width must be at least 1".into()));
        }
        match (self.scheme, &self.base_block) {
            (Scheme::Banded, None) => {
                Err(Error::InvalidArgument("the banded scheme needs a base block".into()))
            }
            (Scheme::Banded, Some(block)) if block.region().rows() != self.band_width => Err(
                Error::InvalidArgument("base block rows must equal the band width".into()),
            ),
            (Scheme::Chevron | Scheme::StripePartition, Some(_)) => {
                Err(Error::InvalidArgument("only the banded scheme takes a base block".into()))
            }
            _ => Ok(()),
        }
    }

    /// Builds the described coloring of `Tₙ`. The stripe partition
    /// colors a stripe, not `Tₙ`, so it is not available here.
    pub fn build(&self, n: u32) -> Result<Coloring, Error> {
        self.validate()?;
        match self.scheme {
            Scheme::Chevron => Ok(chevron_coloring(n)),
            Scheme::Banded => banded_coloring(n, self.base_block.as_ref().expect("validated"), self.spacer),
            Scheme::StripePartition => Err(Error::InvalidArgument(
                "the stripe partition colors S_k; use stripe_partition_coloring".into(),
            )),
        }
    }
}

fn check_base_block(block: &Coloring) -> Result<(u32, u32, u32), Error> {
    let Region::PeriodicStripe { k, period } = block.region() else {
        return Err(Error::InvalidArgument(format!(
            "base block must be a periodic stripe coloring, got {}",
            block.region()
        )));
    };
    if let Some(t) = is_proper(block).witness() {
        return Err(Error::Improper(t));
    }
    Ok((k, period, block.num_colors()))
}

/// Number of colors [`banded_coloring`] will use, without building it.
pub fn banded_color_count(n: u32, width: u32, block_colors: u32, spacer: u32) -> u32 {
    let layout = Layout::new(n, width, block_colors, spacer);
    layout.total
}

#[derive(Clone, Copy, Debug)]
struct Layout {
    n: u32,
    width: u32,
    block_colors: u32,
    spacer: u32,
    first_central: i64,
    full_bands: i64,
    tail_lines: i64,
    total: u32,
}

impl Layout {
    fn new(n: u32, width: u32, block_colors: u32, spacer: u32) -> Layout {
        let first_central = middle_column(n) - spacer as i64 / 2;
        let end_central = first_central + spacer as i64;
        // Lines on the left are a = 0..ceil(first_central / 2); the right side
        // mirrors columns about the axis.
        let left = (first_central.max(0) + 1) / 2;
        let right_limit = 2 * middle_column(n) - end_central + 1;
        let right = (right_limit.max(0) + 1) / 2;
        let lines = left.max(right);
        let full_bands = lines / width as i64;
        let tail_lines = lines % width as i64;
        // A tail band gets one color per line, like chevrons, when that is no
        // more than a palette or when there is no full band at all.
        let tail_colors = if full_bands == 0 || tail_lines as u32 <= block_colors {
            tail_lines as u32
        } else {
            block_colors
        };
        let total = spacer + full_bands as u32 * block_colors + tail_colors;
        Layout {
            n,
            width,
            block_colors,
            spacer,
            first_central,
            full_bands,
            tail_lines,
            total,
        }
    }

    fn color(&self, block: &Coloring, p: LatticePoint) -> u32 {
        let column = p.column();
        if column >= self.first_central && column < self.first_central + self.spacer as i64 {
            return (column - self.first_central) as u32;
        }
        let q = if column < self.first_central { p } else { mirror(self.n, p) };
        let line = q.a;
        let band = line / self.width as i64;
        let base = self.spacer + band as u32 * self.block_colors;
        if band == self.full_bands && (band == 0 || self.tail_lines as u32 <= self.block_colors) {
            return base + (line % self.width as i64) as u32;
        }
        let s = band_to_stripe(q, band * self.width as i64, self.width);
        base + block.color(s).expect("band maps into the stripe")
    }
}

/// The banded coloring of `Tₙ` with `spacer` central columns.
///
/// Fails with [`Error::Improper`], carrying the witness, when the spacer is
/// too narrow for the two halves of some band to stay apart.
pub fn banded_coloring(n: u32, base_block: &Coloring, spacer: u32) -> Result<Coloring, Error> {
    banded_coloring_jobs(n, base_block, spacer, 1)
}

/// [`banded_coloring`] with the final check spread over `jobs` threads.
pub fn banded_coloring_jobs(
    n: u32,
    base_block: &Coloring,
    spacer: u32,
    jobs: usize,
) -> Result<Coloring, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let (width, _, block_colors) = check_base_block(base_block)?;
    let layout = Layout::new(n, width, block_colors, spacer);
    let coloring = Coloring::from_fn(Region::triangle(n), layout.total.max(1), |p| {
        layout.color(base_block, p)
    })?;
    match is_proper_parallel(&coloring, jobs).witness() {
        Some(t) => Err(Error::Improper(t)),
        None => Ok(coloring),
    }
}

/// Starting guess for the spacer width.
///
/// A band of `w` lines is `√3·(w − 1)` thick measured vertically; keeping
/// both halves' apex regions apart needs a horizontal gap above
/// `(√3/2)·(4/3)·√3·(w − 1) = 2(w − 1)`, and columns are half a unit apart.
/// The search does not rely on this value being sufficient.
pub fn spacer_seed(width: u32) -> u32 {
    4 * width.saturating_sub(1)
}

/// Result of [`minimal_spacer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacerSearch {
    /// Smallest spacer giving a proper coloring.
    pub spacer: u32,
    /// The seed the search started from.
    pub seed: u32,
    /// The proper coloring at `spacer`.
    pub coloring: Coloring,
    /// Every spacer tried, with whether it gave a proper coloring.
    pub tried: Vec<(u32, bool)>,
}

/// Finds the smallest `d ≥ 0` for which [`banded_coloring`] is proper.
///
/// Nothing is assumed about properness being monotone in `d`. The seed is
/// checked first, then every value from 0 upward, so the answer is the true
/// minimum whether or not the seed works. Every answer is certified by the checker. The search ends by
/// `d = 2n` at the latest, where every point is in its own column class.
pub fn minimal_spacer(n: u32, base_block: &Coloring, jobs: usize) -> Result<SpacerSearch, Error> {
    let (width, _, _) = check_base_block(base_block)?;
    let seed = spacer_seed(width).min(2 * n);
    let mut tried = Vec::new();
    let attempt = |d: u32, tried: &mut Vec<(u32, bool)>| -> Result<Option<Coloring>, Error> {
        match banded_coloring_jobs(n, base_block, d, jobs) {
            Ok(c) => {
                tried.push((d, true));
                Ok(Some(c))
            }
            Err(Error::Improper(_)) => {
                tried.push((d, false));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };
    let mut at_seed = attempt(seed, &mut tried)?;
    for d in 0..=2 * n {
        let found = if d == seed { at_seed.take() } else { attempt(d, &mut tried)? };
        if let Some(coloring) = found {
            return Ok(SpacerSearch { spacer: d, seed, coloring, tried });
        }
    }
    unreachable!("a spacer of 2n puts every point in a single-column class")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_proper_by_triangles;
    use crate::lattice::Symmetry;
    use crate::solver::{decide_k_colorable, solve_periodic_stripe, Budget};

    #[test]
    fn chevron_examples() {
        let c7 = chevron_coloring(7);
        assert_eq!(c7.color_count(), 4);
        assert!(is_proper_by_triangles(&c7).is_proper());
        assert_eq!(chevron_coloring(1).color_count(), 1);
        let c20 = chevron_coloring(20);
        assert_eq!(c20.color_count(), 11);
        assert!(is_proper(&c20).is_proper());
    }

    #[test]
    fn chevron_counts_up_to_200() {
        for n in 1..=200 {
            let c = chevron_coloring(n);
            assert_eq!(c.color_count() as u32, n / 2 + 1, "n = {n}");
            assert!(is_proper(&c).is_proper(), "n = {n}");
        }
    }

    #[test]
    fn chevron_is_mirror_symmetric() {
        let n = 9;
        let c = chevron_coloring(n);
        for p in Region::triangle(n).points() {
            assert_eq!(c.color(p), c.color(Symmetry::MirrorVertical.apply(n, p)));
        }
    }

    #[test]
    fn band_map_is_an_isometry_onto_the_stripe() {
        let (first, width) = (12, 6);
        let band: Vec<_> = Region::triangle(40)
            .points()
            .into_iter()
            .filter(|p| p.a >= first && p.a < first + width as i64)
            .collect();
        for &p in &band {
            let s = band_to_stripe(p, first, width);
            assert!(s.b >= 0 && s.b < width as i64, "{p} -> {s}");
            for &q in band.iter().step_by(7) {
                assert_eq!(s.dist2(band_to_stripe(q, first, width)), p.dist2(q));
            }
        }
    }

    fn t_coloring(k: u32, colors: u32) -> Coloring {
        let outcome = decide_k_colorable(&Region::triangle(k), colors, Budget::unlimited()).unwrap();
        outcome.coloring().expect("colorable").clone()
    }

    #[test]
    fn stripe_partition_examples() {
        for (k, f) in [(4, 3), (6, 3), (5, 3), (3, 2)] {
            let tri = t_coloring(k, f);
            let stripe = stripe_partition_coloring(k, &tri).unwrap();
            assert!(stripe.color_count() as u32 <= 2 * f);
            assert!(is_proper_by_triangles(&stripe).is_proper());
            // The upright copy is the input coloring itself.
            for p in Region::triangle(k).points() {
                assert_eq!(stripe.color(p), tri.color(p));
                assert_eq!(stripe.color(p + LatticePoint::new(3 * k as i64, 0)), tri.color(p));
            }
        }
        let line = stripe_partition_coloring(1, &chevron_coloring(1)).unwrap();
        assert!(line.color_count() <= 2);
        assert!(is_proper(&line).is_proper());
    }

    #[test]
    fn stripe_partition_rejects_improper_input() {
        let bad = Coloring::new(Region::triangle(2), 1, vec![0; 3]).unwrap();
        assert!(matches!(stripe_partition_coloring(2, &bad), Err(Error::Improper(_))));
        assert!(stripe_partition_coloring(3, &chevron_coloring(4)).is_err());
    }

    fn small_block() -> Coloring {
        // S3 with 3 colors is easy; the construction does not care which
        // block it gets.
        let outcome = solve_periodic_stripe(3, 3, 3, Budget::unlimited()).unwrap();
        outcome.coloring().expect("S3 has a periodic 3-coloring").clone()
    }

    #[test]
    fn banded_small_n_degenerates_to_chevrons() {
        let block = small_block();
        // Fewer lines than colors per band: each line gets its own color.
        let c = banded_coloring(4, &block, 1).unwrap();
        assert_eq!(c, chevron_coloring(4));
        for n in 1..=6 {
            let search = minimal_spacer(n, &block, 1).unwrap();
            assert!(is_proper_by_triangles(&search.coloring).is_proper());
        }
    }

    #[test]
    fn banded_color_count_bound() {
        let block = small_block();
        for n in [10, 25, 40] {
            let search = minimal_spacer(n, &block, 2).unwrap();
            let c = &search.coloring;
            let bound = search.spacer + 3 * (n / 2).div_ceil(3);
            assert!(c.color_count() as u32 <= bound, "n = {n}");
            assert_eq!(c.num_colors(), banded_color_count(n, 3, 3, search.spacer));
            assert!(is_proper(c).is_proper());
        }
    }

    #[test]
    fn banded_reports_witness_when_spacer_too_small() {
        let block = small_block();
        match banded_coloring(30, &block, 0) {
            Err(Error::Improper(t)) => {
                let c = Coloring::from_fn(Region::triangle(30), 64, |p| {
                    Layout::new(30, 3, 3, 0).color(&block, p)
                })
                .unwrap();
                let [p, q, r] = t.vertices();
                assert!(c.color(p) == c.color(q) && c.color(q) == c.color(r));
            }
            other => panic!("expected an improper result, got {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ConstructionSpec::chevron().build(5).unwrap() == chevron_coloring(5));
        let mut plan = ConstructionSpec::banded(small_block(), 4);
        plan.band_width = 5;
        assert!(plan.build(10).is_err());
        let plan = ConstructionSpec { scheme: Scheme::Banded, band_width: 3, spacer: 2, base_block: None };
        assert!(plan.build(10).is_err());
        let bad_block = Coloring::new(Region::periodic_stripe(2, 1), 1, vec![0, 0]).unwrap();
        assert!(matches!(banded_coloring(10, &bad_block, 3), Err(Error::Improper(_))));
        assert!(banded_coloring(10, &chevron_coloring(3), 3).is_err());
    }
}
