//! Integer coordinates on the triangular lattice.
//!
//! A point is written `a·e₁ + b·e₂` with `e₁ = (1, 0)` and
//! `e₂ = (1/2, √3/2)`. Rotation by ±60° is then an integer linear map and the
//! squared distance between two points is the integer form
//! `Δa² + Δa·Δb + Δb²`, so nothing in this crate needs floating point except
//! rendering.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A site of the triangular lattice in Eisenstein coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        LatticePoint { a, b }
    }

    /// Squared Euclidean length of this point read as a vector.
    pub fn norm(self) -> i64 {
        self.a * self.a + self.a * self.b + self.b * self.b
    }

    /// Squared Euclidean distance to `other`.
    pub fn dist2(self, other: LatticePoint) -> i64 {
        (other - self).norm()
    }

    /// Rotate about the origin by 60° in the given direction.
    pub fn rotate60(self, turn: Turn) -> LatticePoint {
        match turn {
            Turn::Ccw => LatticePoint::new(-self.b, self.a + self.b),
            Turn::Cw => LatticePoint::new(self.a + self.b, -self.a),
        }
    }

    /// Cartesian embedding, for drawing only.
    pub fn cartesian(self) -> (f64, f64) {
        let a = self.a as f64;
        let b = self.b as f64;
        (a + b / 2.0, b * 3f64.sqrt() / 2.0)
    }

    /// Twice the Cartesian x coordinate. Points sharing this value form a
    /// vertical column.
    pub fn column(self) -> i64 {
        2 * self.a + self.b
    }

    /// Sort key for the canonical (row, then position) order.
    pub fn row_major(self) -> (i64, i64) {
        (self.b, self.a)
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic by `(b, a)`: rows bottom to top, left to right within a row.
impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.row_major().cmp(&other.row_major())
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint::new(-self.a, -self.b)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((a, b): (i64, i64)) -> Self {
        LatticePoint::new(a, b)
    }
}

/// Direction of a 60° rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Turn {
    /// Counterclockwise, `(a, b) ↦ (−b, a + b)`.
    Ccw,
    /// Clockwise, `(a, b) ↦ (a + b, −a)`.
    Cw,
}

impl Turn {
    pub fn from_sign(sign: i32) -> Option<Turn> {
        match sign {
            1 => Some(Turn::Ccw),
            -1 => Some(Turn::Cw),
            _ => None,
        }
    }
}

/// Rotate `p` about the origin by 60°; `direction` is `+1` or `-1`.
///
/// # Panics
///
/// If `direction` is neither `+1` nor `-1`.
pub fn rotate60(p: LatticePoint, direction: i32) -> LatticePoint {
    let turn = Turn::from_sign(direction).expect("rotation direction must be +1 or -1");
    p.rotate60(turn)
}

/// A set of lattice points the rest of the crate works over.
///
/// Finite regions have a canonical point order, lexicographic by `(b, a)`,
/// and every point has a dense rank in that order. A periodic stripe is
/// represented by one fundamental domain `0 ≤ a < period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `Tₙ = { (a, b) : 0 ≤ b < n, 0 ≤ a ≤ n − 1 − b }`.
    Triangle { n: u32 },
    /// Rows `0..k` of the infinite stripe, clipped to `x_min ≤ a ≤ x_max`.
    StripeWindow { k: u32, x_min: i64, x_max: i64 },
    /// The stripe `Sₖ` with `(a, b)` identified with `(a + period, b)`.
    PeriodicStripe { k: u32, period: u32 },
}

impl Region {
    pub fn triangle(n: u32) -> Region {
        Region::Triangle { n }
    }

    pub fn stripe_window(k: u32, x_min: i64, x_max: i64) -> Region {
        Region::StripeWindow { k, x_min, x_max }
    }

    pub fn periodic_stripe(k: u32, period: u32) -> Region {
        Region::PeriodicStripe { k, period }
    }

    /// Number of rows.
    pub fn rows(&self) -> u32 {
        match *self {
            Region::Triangle { n } => n,
            Region::StripeWindow { k, .. } | Region::PeriodicStripe { k, .. } => k,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Region::PeriodicStripe { .. })
    }

    /// Membership. For a periodic stripe only the row matters.
    pub fn contains(&self, p: LatticePoint) -> bool {
        match *self {
            Region::Triangle { n } => {
                let n = n as i64;
                p.b >= 0 && p.b < n && p.a >= 0 && p.a <= n - 1 - p.b
            }
            Region::StripeWindow { k, x_min, x_max } => {
                p.b >= 0 && p.b < k as i64 && p.a >= x_min && p.a <= x_max
            }
            Region::PeriodicStripe { k, .. } => p.b >= 0 && p.b < k as i64,
        }
    }

    /// Number of points (of one fundamental domain, for a periodic stripe).
    pub fn len(&self) -> usize {
        match *self {
            Region::Triangle { n } => {
                let n = n as usize;
                n * (n + 1) / 2
            }
            Region::StripeWindow { k, x_min, x_max } => {
                if x_max < x_min {
                    0
                } else {
                    k as usize * (x_max - x_min + 1) as usize
                }
            }
            Region::PeriodicStripe { k, period } => k as usize * period as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of `p` in the canonical order, or `None` outside the region.
    /// Periodic stripes reduce `a` modulo the period first.
    pub fn rank(&self, p: LatticePoint) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let b = p.b as usize;
        match *self {
            Region::Triangle { n } => {
                let n = n as usize;
                Some(b * n - b * b.saturating_sub(1) / 2 + p.a as usize)
            }
            Region::StripeWindow { x_min, x_max, .. } => {
                let width = (x_max - x_min + 1) as usize;
                Some(b * width + (p.a - x_min) as usize)
            }
            Region::PeriodicStripe { period, .. } => {
                let a = p.a.rem_euclid(period as i64) as usize;
                Some(b * period as usize + a)
            }
        }
    }

    /// Inverse of [`Region::rank`]. Periodic stripes return the
    /// representative with `0 ≤ a < period`.
    pub fn point_at(&self, rank: usize) -> LatticePoint {
        assert!(rank < self.len(), "rank {rank} out of range");
        match *self {
            Region::Triangle { n } => {
                let n = n as usize;
                let mut b = 0;
                let mut offset = 0;
                while offset + (n - b) <= rank {
                    offset += n - b;
                    b += 1;
                }
                LatticePoint::new((rank - offset) as i64, b as i64)
            }
            Region::StripeWindow { x_min, x_max, .. } => {
                let width = (x_max - x_min + 1) as usize;
                LatticePoint::new(x_min + (rank % width) as i64, (rank / width) as i64)
            }
            Region::PeriodicStripe { period, .. } => {
                let p = period as usize;
                LatticePoint::new((rank % p) as i64, (rank / p) as i64)
            }
        }
    }

    /// All points in canonical order.
    pub fn points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.len());
        match *self {
            Region::Triangle { n } => {
                let n = n as i64;
                for b in 0..n {
                    for a in 0..n - b {
                        out.push(LatticePoint::new(a, b));
                    }
                }
            }
            Region::StripeWindow { k, x_min, x_max } => {
                for b in 0..k as i64 {
                    for a in x_min..=x_max {
                        out.push(LatticePoint::new(a, b));
                    }
                }
            }
            Region::PeriodicStripe { k, period } => {
                for b in 0..k as i64 {
                    for a in 0..period as i64 {
                        out.push(LatticePoint::new(a, b));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Region::Triangle { n } => write!(f, "T{n}"),
            Region::StripeWindow { k, x_min, x_max } => write!(f, "S{k}[{x_min}..={x_max}]"),
            Region::PeriodicStripe { k, period } => write!(f, "S{k}/{period}"),
        }
    }
}

/// Point of `Tₙ` in the `col`-th position (1-indexed) of the `row`-th row
/// counted from the top (1-indexed).
pub fn from_row_col(n: u32, row: u32, col: u32) -> Option<LatticePoint> {
    if row == 0 || row > n || col == 0 || col > row {
        return None;
    }
    Some(LatticePoint::new(col as i64 - 1, (n - row) as i64))
}

/// Inverse of [`from_row_col`].
pub fn to_row_col(n: u32, p: LatticePoint) -> Option<(u32, u32)> {
    if !Region::triangle(n).contains(p) {
        return None;
    }
    Some((n - p.b as u32, p.a as u32 + 1))
}

/// One of the six isometries of `Tₙ` onto itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Identity,
    /// `(a, b) ↦ (b, n−1−a−b)`; sends the bottom-left corner to the top.
    Rotate120,
    /// The square of [`Symmetry::Rotate120`].
    Rotate240,
    /// Mirror across the vertical axis, `(a, b) ↦ (n−1−a−b, b)`.
    MirrorVertical,
    /// `(a, b) ↦ (b, a)`.
    MirrorSwap,
    /// `(a, b) ↦ (a, n−1−a−b)`.
    MirrorRight,
}

impl Symmetry {
    pub const ALL: [Symmetry; 6] = [
        Symmetry::Identity,
        Symmetry::Rotate120,
        Symmetry::Rotate240,
        Symmetry::MirrorVertical,
        Symmetry::MirrorSwap,
        Symmetry::MirrorRight,
    ];

    pub fn apply(self, n: u32, p: LatticePoint) -> LatticePoint {
        let m = n as i64 - 1;
        let LatticePoint { a, b } = p;
        match self {
            Symmetry::Identity => p,
            Symmetry::Rotate120 => LatticePoint::new(b, m - a - b),
            Symmetry::Rotate240 => LatticePoint::new(m - a - b, a),
            Symmetry::MirrorVertical => LatticePoint::new(m - a - b, b),
            Symmetry::MirrorSwap => LatticePoint::new(b, a),
            Symmetry::MirrorRight => LatticePoint::new(a, m - a - b),
        }
    }

    pub fn inverse(self) -> Symmetry {
        match self {
            Symmetry::Rotate120 => Symmetry::Rotate240,
            Symmetry::Rotate240 => Symmetry::Rotate120,
            other => other,
        }
    }
}

/// The dihedral group of `Tₙ` as point maps.
pub fn symmetries(n: u32) -> [impl Fn(LatticePoint) -> LatticePoint; 6] {
    Symmetry::ALL.map(move |s| move |p| s.apply(n, p))
}
