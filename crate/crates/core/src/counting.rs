//! Closed forms for triangle and pair counts on `Tₙ`, and the brute-force
//! routes that check them.
//!
//! Notation used throughout:
//!
//! * `alpha(n)`: equilateral triangles in `Tₙ`.
//! * `beta(n)`: those with a horizontal bottom side.
//! * `gamma(n)`: unordered point pairs of `Tₙ`.
//! * `a0, a1, a2`: pairs with zero, one and two in-region apex completions.
//! * `m(k)`: 60°–120° rhombi that fit in `Tₖ` but in no `Tₖ₋₁`.
//! * `h(k, n)`: upright translated copies of `Tₖ` inside `Tₙ`.

use serde::Serialize;

use crate::lattice::{LatticePoint, Region};
use crate::triangles::{apex_candidates, classify_pairs, count_upright, for_each_triangle};
use crate::Error;

fn exact_div(num: u128, den: u128) -> u128 {
    assert!(num % den == 0, "{num} is not divisible by {den}");
    num / den
}

pub fn alpha_closed(n: u64) -> u128 {
    let n = n as u128;
    exact_div(n * n * n * n + 2 * n * n * n - n * n - 2 * n, 24)
}

pub fn beta_closed(n: u64) -> u128 {
    let n = n as u128;
    exact_div(n * n * n - n, 6)
}

pub fn gamma_closed(n: u64) -> u128 {
    let points = n as u128 * (n as u128 + 1) / 2;
    points * points.saturating_sub(1) / 2
}

pub fn a2_closed(n: u64) -> u128 {
    let n = n as u128;
    if n % 2 == 1 {
        exact_div((n - 1) * (n - 1) * (n + 1) * (n + 3), 32)
    } else {
        exact_div(n * (n - 2) * (n + 2) * (n + 2), 32)
    }
}

pub fn a1_closed(n: u64) -> u128 {
    let n = n as u128;
    if n % 2 == 1 {
        exact_div((n * n - 1) * (n * n + 2 * n + 3), 16)
    } else {
        exact_div(n * (n + 2) * (n * n + 2), 16)
    }
}

pub fn a0_closed(n: u64) -> u128 {
    a2_closed(n)
}

/// Minimally contained rhombi of `Tₖ`: `3(k−1)/2` for odd `k`, none for even.
pub fn m_closed(k: u64) -> Result<u128, Error> {
    if k < 3 {
        return Err(Error::NoRhombi(k));
    }
    Ok(if k % 2 == 1 { exact_div(3 * (k as u128 - 1), 2) } else { 0 })
}

/// Counts rhombi of `Tₖ` with a vertex on each of the three sides.
///
/// A rhombus is a class-2 pair together with both of its apexes. It avoids
/// every corner copy of `Tₖ₋₁` exactly when it touches all three sides.
pub fn m_brute(k: u64) -> Result<u128, Error> {
    if k < 3 {
        return Err(Error::NoRhombi(k));
    }
    let region = Region::triangle(k as u32);
    let pts = region.points();
    let top = k as i64 - 1;
    let mut count = 0;
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let (c1, c2) = apex_candidates(p, q)?;
            if !(region.contains(c1) && region.contains(c2)) {
                continue;
            }
            let rhombus = [p, q, c1, c2];
            let bottom = rhombus.iter().any(|v| v.b == 0);
            let left = rhombus.iter().any(|v| v.a == 0);
            let right = rhombus.iter().any(|v| v.a + v.b == top);
            if bottom && left && right {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `m(k)` by inclusion–exclusion over the three corner copies of `Tₖ₋₁`
/// (which meet pairwise in a `Tₖ₋₂` and all together in a `Tₖ₋₃`), given any
/// way of computing `a2`.
pub fn m_inclusion_exclusion(k: u64, a2: impl Fn(u64) -> u128) -> Result<u128, Error> {
    if k < 3 {
        return Err(Error::NoRhombi(k));
    }
    let a = |j: u64| if j == 0 { 0 } else { a2(j) as i128 };
    let m = a(k) - 3 * a(k - 1) + 3 * a(k - 2) - a(k - 3);
    assert!(m >= 0, "inclusion-exclusion went negative at k = {k}");
    Ok(m as u128)
}

/// Upright translated copies of `Tₖ` in `Tₙ`; zero when `k > n`.
pub fn h_closed(k: u64, n: u64) -> u128 {
    if k == 0 || k > n {
        return 0;
    }
    let d = (n - k) as u128;
    (d + 1) * (d + 2) / 2
}

/// Tries every offset and counts those placing all of `Tₖ` inside `Tₙ`.
pub fn h_brute(k: u64, n: u64) -> u128 {
    if k == 0 {
        return 0;
    }
    let small = Region::triangle(k as u32).points();
    let big = Region::triangle(n as u32);
    let mut count = 0;
    for y in 0..n as i64 {
        for x in 0..n as i64 {
            let offset = LatticePoint::new(x, y);
            if small.iter().all(|&p| big.contains(p + offset)) {
                count += 1;
            }
        }
    }
    count
}

/// `a2(n)` as the sum of `h(k, n)·m(k)` over `3 ≤ k ≤ n`.
pub fn a2_by_decomposition(n: u64) -> u128 {
    (3..=n)
        .map(|k| h_closed(k, n) * m_closed(k).expect("k >= 3"))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountSource {
    ClosedForm,
    BruteForce,
}

/// All counts for one `n`, from one source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub n: u64,
    pub alpha: u128,
    pub beta: u128,
    pub gamma: u128,
    pub a0: u128,
    pub a1: u128,
    pub a2: u128,
    pub source: CountSource,
}

impl CountReport {
    pub fn closed_form(n: u64) -> CountReport {
        CountReport {
            n,
            alpha: alpha_closed(n),
            beta: beta_closed(n),
            gamma: gamma_closed(n),
            a0: a0_closed(n),
            a1: a1_closed(n),
            a2: a2_closed(n),
            source: CountSource::ClosedForm,
        }
    }

    /// Enumerates triangles and classifies pairs of `Tₙ` directly.
    pub fn brute_force(n: u64) -> CountReport {
        let region = Region::triangle(n as u32);
        let mut alpha = 0u128;
        for_each_triangle(&region, |_| alpha += 1).expect("finite region");
        let beta = count_upright(&region).expect("finite region") as u128;
        let classes = classify_pairs(&region).expect("finite region");
        let (a0, a1, a2) = classes.tallies();
        CountReport {
            n,
            alpha,
            beta,
            gamma: classes.total_pairs() as u128,
            a0: a0 as u128,
            a1: a1 as u128,
            a2: a2 as u128,
            source: CountSource::BruteForce,
        }
    }

    /// Names of the identities this report violates; empty when consistent.
    ///
    /// Checked: `gamma = C(|Tₙ|, 2)`, `gamma = 3·alpha`, `a0 + a1 + a2 =
    /// gamma`, `a1 + 2·a2 = 3·alpha`, `a0 = a2`.
    pub fn violated_identities(&self) -> Vec<&'static str> {
        let mut bad = Vec::new();
        if self.gamma != gamma_closed(self.n) {
            bad.push("gamma = C(|T_n|, 2)");
        }
        if self.gamma != 3 * self.alpha {
            bad.push("gamma = 3 alpha");
        }
        if self.a0 + self.a1 + self.a2 != self.gamma {
            bad.push("a0 + a1 + a2 = gamma");
        }
        if self.a1 + 2 * self.a2 != 3 * self.alpha {
            bad.push("a1 + 2 a2 = 3 alpha");
        }
        if self.a0 != self.a2 {
            bad.push("a0 = a2");
        }
        bad
    }

    /// Same numbers, ignoring where they came from.
    pub fn same_counts(&self, other: &CountReport) -> bool {
        CountReport { source: other.source, ..*self } == *other
    }
}
