//! Combinatorics of the triangular lattice.
//!
//! `trilat` models the `n`-row triangular lattice `Tₙ` and the infinite
//! stripe `Sₖ` in exact integer coordinates and answers questions about
//! equilateral triangles on them:
//!
//! * [`triangles`] enumerates equilateral triangles and classifies point pairs
//!   by how many in-region triangles they complete to.
//! * [`counting`] holds the closed-form counts together with brute-force
//!   routes that check them.
//! * [`coloring`] checks that a coloring has no monochromatic equilateral
//!   triangle and reads and writes coloring certificates.
//! * [`solver`] decides `K`-colorability exactly, computes `f(n)` (the
//!   fewest colors for `Tₙ`) for small `n`, searches periodic stripe
//!   colorings and talks DIMACS to external SAT solvers.
//! * [`constructions`] builds explicit colorings of large `Tₙ`.
//! * [`triples`] studies triple systems whose pair multiplicities are
//!   `0`, `1` or `2`, as the triangles of `Tₙ` are.
//! * [`render`] draws a certificate as SVG.
//!
//! ```
//! use trilat::{coloring, constructions, Region};
//!
//! let chevron = constructions::chevron_coloring(7);
//! assert_eq!(chevron.region(), Region::triangle(7));
//! assert_eq!(chevron.color_count(), 4);
//! assert!(coloring::is_proper(&chevron).is_proper());
//! ```

use thiserror::Error;

pub mod coloring;
pub mod constructions;
pub mod counting;
pub mod dimacs;
pub mod lattice;
pub mod render;
pub mod solver;
pub mod triangles;
pub mod triples;

pub use coloring::{Coloring, Verdict};
pub use lattice::{LatticePoint, Region};
pub use triangles::Triangle;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate pair: both points are {0}")]
    DegeneratePair(LatticePoint),
    #[error("{0} is periodic; use windowed enumeration")]
    PeriodicRegion(Region),
    #[error("no rhombi fit in T_{0}; need k >= 3")]
    NoRhombi(u64),
    #[error("partial coloring: {0} has no color")]
    PartialColoring(LatticePoint),
    #[error("{point} is not in {region}")]
    OutOfRegion { point: LatticePoint, region: Region },
    #[error("{0} is colored twice")]
    DuplicatePoint(LatticePoint),
    #[error("color {color} is out of range for {num_colors} colors")]
    ColorOutOfRange { color: u32, num_colors: u32 },
    #[error("coloring has {got} entries but the region has {expected} points")]
    WrongLength { expected: usize, got: usize },
    #[error("improper coloring: {0} is monochromatic")]
    Improper(Triangle),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("incomplete assignment: {0}")]
    IncompleteAssignment(String),
    #[error("integrity error: solver assignment projects to an improper coloring ({0} is monochromatic)")]
    Integrity(Triangle),
    #[error("external solver failed: {0}")]
    External(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A syntax error in one of the line-oriented text formats.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// Lines of `text` with `#` comments stripped and blank lines dropped, paired
/// with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

// The guide under `book/` is compiled and run as doctests so its snippets
// cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/coloring.md")]
    mod coloring {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/stripes.md")]
    mod stripes {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/triples.md")]
    mod triples {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
