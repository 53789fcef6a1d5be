//! Optimal codebooks for the equal-weight mixture `½U[0, 1] + ½U[½, 3/2]`.
//!
//! The density is `½` on `[0, ½]`, `1` on `[½, 1]`, `½` on `[1, 3/2]` and
//! symmetric about `3/4`, so an optimal codebook is determined by its points
//! in `(0, 3/4)`: `k` points `a_1 < … < a_k` in `[0, ½]` followed by `m`
//! points `b_1 < … < b_m` in `(½, 3/4)`, plus `3/4` itself when `n` is odd.
//!
//! Exactly one Voronoi cell can straddle `½`. In case [`Case::V1`] the boundary
//! `(a_k + b_1)/2` lies at or left of `½` and the straddling cell is `b_1`'s;
//! in case [`Case::V2`] it lies at or right of `½` and the cell is `a_k`'s.
//! All other cells sit on constant-density stretches, where the points are
//! evenly spread (or evenly spread up to the pinned `3/4`). Each case is
//! therefore a single scalar fixed-point problem for the straddling point.

use serde::{Deserialize, Serialize};

use crate::codebook::Codebook;
use crate::density::{square_integral, StepDensity, CENTER, OVERLAP_LO};
use crate::error::{Error, Result};
use crate::uniform_quant::{
    endpoint_constrained, uniform_error, uniform_points, UniformPiece,
};

/// Density level on `[0, ½]` for the equal-weight mixture.
const OUTER_LEVEL: f64 = 0.5;
/// Density level on the overlap.
const INNER_LEVEL: f64 = 1.0;

/// Damping of the straddling-point fixed-point iteration.
pub const DAMPING: f64 = 0.5;
/// Convergence threshold on the size of one damped update.
pub const FIXED_POINT_TOL: f64 = 1e-13;
/// Iteration budget before falling back to bisection.
pub const FIXED_POINT_MAX_ITERS: usize = 100_000;
/// Slack allowed on the case constraints.
pub const FEASIBILITY_TOL: f64 = 1e-12;
/// Errors closer than this are a tie, resolved in favour of [`Case::V1`].
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Which cell straddles `½`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `(a_k + b_1)/2 <= ½`; `b_1`'s cell straddles.
    V1,
    /// `(a_k + b_1)/2 >= ½`; `a_k`'s cell straddles.
    V2,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Case::V1 => "V1",
            Case::V2 => "V2",
        })
    }
}

/// One branch of the `(k, m)` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitConfig {
    /// Codepoints in `[0, ½]`.
    pub k: usize,
    /// Codepoints in `(½, 3/4)`, not counting the centre.
    pub m: usize,
    pub parity: Parity,
    pub case: Case,
}

impl SplitConfig {
    /// Validated constructor; `(1, 1)` and zero counts are rejected.
    pub fn new(k: usize, m: usize, parity: Parity, case: Case) -> Result<Self> {
        if k == 0 || m == 0 || (k == 1 && m == 1) {
            return Err(Error::OutsideDomain { k, m });
        }
        Ok(Self { k, m, parity, case })
    }

    pub fn n(&self) -> usize {
        2 * (self.k + self.m) + usize::from(self.parity == Parity::Odd)
    }
}

/// How a [`QuantizationResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    /// Explicit solution for `n <= 6`.
    Explicit,
    /// Solved `(k, m)` branch.
    Split(SplitConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationResult {
    pub n: usize,
    pub codebook: Codebook,
    pub error: f64,
    pub split: Provenance,
}

impl QuantizationResult {
    pub fn config(&self) -> Option<SplitConfig> {
        match self.split {
            Provenance::Split(c) => Some(c),
            Provenance::Explicit => None,
        }
    }

    /// Points left of `3/4`, followed by `3/4` itself for odd `n`.
    pub fn left_half(&self) -> &[f64] {
        &self.codebook.points()[..self.n.div_ceil(2)]
    }

    /// `(k, m)` read off the codebook: points in `[0, ½]` and in `(½, 3/4)`.
    pub fn occupancy(&self) -> (usize, usize) {
        let pts = self.codebook.points();
        let k = pts.iter().filter(|&&x| x <= OVERLAP_LO).count();
        let m = pts.iter().filter(|&&x| x > OVERLAP_LO && x < CENTER).count();
        (k, m)
    }
}

fn equal_weight() -> StepDensity {
    StepDensity::mixture(0.5).expect("0.5 is a valid weight")
}

fn assemble(mut left: Vec<f64>, odd: bool) -> Result<Codebook> {
    let mirrored: Vec<f64> = left.iter().rev().map(|&x| 2.0 * CENTER - x).collect();
    if odd {
        left.push(CENTER);
    }
    left.extend(mirrored);
    Codebook::new(left)
}

// ---------------------------------------------------------------------------
// explicit solutions, n <= 6

/// Cubic in two variables: `scale * Σ c · a1^i · a2^j`.
struct Poly2 {
    scale: f64,
    terms: &'static [(f64, i32, i32)],
}

impl Poly2 {
    fn eval(&self, a1: f64, a2: f64) -> f64 {
        self.scale
            * self
                .terms
                .iter()
                .map(|&(c, i, j)| c * a1.powi(i) * a2.powi(j))
                .sum::<f64>()
    }

    fn grad(&self, a1: f64, a2: f64) -> [f64; 2] {
        let mut g = [0.0; 2];
        for &(c, i, j) in self.terms {
            if i > 0 {
                g[0] += c * f64::from(i) * a1.powi(i - 1) * a2.powi(j);
            }
            if j > 0 {
                g[1] += c * f64::from(j) * a1.powi(i) * a2.powi(j - 1);
            }
        }
        g.map(|v| v * self.scale)
    }

    fn hessian(&self, a1: f64, a2: f64) -> [[f64; 2]; 2] {
        let mut h = [[0.0; 2]; 2];
        for &(c, i, j) in self.terms {
            let (fi, fj) = (f64::from(i), f64::from(j));
            if i > 1 {
                h[0][0] += c * fi * (fi - 1.0) * a1.powi(i - 2) * a2.powi(j);
            }
            if j > 1 {
                h[1][1] += c * fj * (fj - 1.0) * a1.powi(i) * a2.powi(j - 2);
            }
            if i > 0 && j > 0 {
                h[0][1] += c * fi * fj * a1.powi(i - 1) * a2.powi(j - 1);
            }
        }
        h[1][0] = h[0][1];
        h.map(|r| r.map(|v| v * self.scale))
    }
}

// Distortion of {a1, a2, [3/4,] reflections} on each region, as polynomials.
const N4_INNER: Poly2 = Poly2 {
    scale: 1.0 / 96.0,
    terms: &[
        (24.0, 3, 0),
        (24.0, 2, 1),
        (-24.0, 1, 2),
        (-24.0, 0, 3),
        (96.0, 0, 2),
        (-84.0, 0, 1),
        (23.0, 0, 0),
    ],
};
const N4_STRADDLE: Poly2 = Poly2 {
    scale: 1.0 / 96.0,
    terms: &[
        (48.0, 3, 0),
        (48.0, 2, 1),
        (-48.0, 2, 0),
        (24.0, 1, 0),
        (-48.0, 1, 2),
        (-48.0, 0, 3),
        (144.0, 0, 2),
        (-108.0, 0, 1),
        (23.0, 0, 0),
    ],
};
const N5_LOW: Poly2 = Poly2 {
    scale: 1.0 / 768.0,
    terms: &[
        (192.0, 3, 0),
        (192.0, 2, 1),
        (-192.0, 1, 2),
        (144.0, 0, 2),
        (-108.0, 0, 1),
        (31.0, 0, 0),
    ],
};
const N5_MID: Poly2 = Poly2 {
    scale: 1.0 / 384.0,
    terms: &[
        (96.0, 3, 0),
        (96.0, 2, 1),
        (-96.0, 1, 2),
        (96.0, 0, 3),
        (-48.0, 0, 2),
        (-12.0, 0, 1),
        (11.0, 0, 0),
    ],
};
const N5_STRADDLE: Poly2 = Poly2 {
    scale: 1.0 / 384.0,
    terms: &[
        (192.0, 3, 0),
        (192.0, 2, 1),
        (-192.0, 2, 0),
        (-192.0, 1, 2),
        (96.0, 1, 0),
        (144.0, 0, 2),
        (-108.0, 0, 1),
        (11.0, 0, 0),
    ],
};

/// Half-plane `w1·a1 + w2·a2 <= b`.
type Constraint = (f64, f64, f64);

/// One region of the `(a1, a2)` plane for `n = 4` or `n = 5`, as the closure
/// of a polygon.
struct Region {
    label: &'static str,
    poly: &'static Poly2,
    constraints: &'static [Constraint],
}

impl Region {
    fn contains(&self, a1: f64, a2: f64, tol: f64) -> bool {
        self.constraints
            .iter()
            .all(|&(w1, w2, b)| w1 * a1 + w2 * a2 <= b + tol)
    }
}

const A1_POSITIVE: Constraint = (-1.0, 0.0, 0.0);
const A1_BELOW_A2: Constraint = (1.0, -1.0, 0.0);
const A1_AT_MOST_HALF: Constraint = (1.0, 0.0, 0.5);
const A2_AT_MOST_HALF: Constraint = (0.0, 1.0, 0.5);
const A2_AT_LEAST_HALF: Constraint = (0.0, -1.0, -0.5);
const A2_BELOW_CENTER: Constraint = (0.0, 1.0, 0.75);
const MIDPOINT_AT_MOST_HALF: Constraint = (1.0, 1.0, 1.0);
const MIDPOINT_AT_LEAST_HALF: Constraint = (-1.0, -1.0, -1.0);

const N4_REGIONS: [Region; 3] = [
    Region {
        label: "0 < a1 < a2 <= 1/2",
        poly: &N4_INNER,
        constraints: &[A1_POSITIVE, A1_BELOW_A2, A2_AT_MOST_HALF],
    },
    Region {
        label: "a1 <= 1/2 < a2 < 3/4, (a1 + a2)/2 <= 1/2",
        poly: &N4_INNER,
        constraints: &[A1_POSITIVE, A2_AT_LEAST_HALF, A2_BELOW_CENTER, MIDPOINT_AT_MOST_HALF],
    },
    Region {
        label: "a1 <= 1/2 < a2 < 3/4, (a1 + a2)/2 >= 1/2",
        poly: &N4_STRADDLE,
        constraints: &[A1_AT_MOST_HALF, A2_AT_LEAST_HALF, A2_BELOW_CENTER, MIDPOINT_AT_LEAST_HALF],
    },
];

const N5_REGIONS: [Region; 4] = [
    Region {
        label: "a2 <= 1/2, (a2 + 3/4)/2 <= 1/2",
        poly: &N5_LOW,
        constraints: &[A1_POSITIVE, A1_BELOW_A2, (0.0, 1.0, 0.25)],
    },
    Region {
        label: "a2 <= 1/2, (a2 + 3/4)/2 >= 1/2",
        poly: &N5_MID,
        constraints: &[A1_POSITIVE, A1_BELOW_A2, (0.0, -1.0, -0.25), A2_AT_MOST_HALF],
    },
    Region {
        label: "a1 <= 1/2 < a2 < 3/4, (a1 + a2)/2 <= 1/2",
        poly: &N5_MID,
        constraints: &[A1_POSITIVE, A2_AT_LEAST_HALF, A2_BELOW_CENTER, MIDPOINT_AT_MOST_HALF],
    },
    Region {
        label: "a1 <= 1/2 < a2 < 3/4, (a1 + a2)/2 >= 1/2",
        poly: &N5_STRADDLE,
        constraints: &[A1_AT_MOST_HALF, A2_AT_LEAST_HALF, A2_BELOW_CENTER, MIDPOINT_AT_LEAST_HALF],
    },
];

/// Minimum of one region's distortion polynomial over the closed region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMinimum {
    pub region: &'static str,
    pub point: (f64, f64),
    pub value: f64,
    /// `true` for a critical point strictly inside the region, `false` for a
    /// minimum on its boundary.
    pub interior: bool,
}

/// Newton's method on the gradient with backtracking on the polynomial value.
/// Returns a point where the gradient vanishes and the Hessian is positive
/// definite, or `None` when the start leads elsewhere.
fn newton_minimum(poly: &Poly2, start: (f64, f64)) -> Option<(f64, f64)> {
    let (mut x, mut y) = start;
    for _ in 0..200 {
        let g = poly.grad(x, y);
        if g[0].hypot(g[1]) < 1e-15 {
            break;
        }
        let h = poly.hessian(x, y);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let (dx, dy) = if h[0][0] > 0.0 && det > 0.0 {
            (
                -(h[1][1] * g[0] - h[0][1] * g[1]) / det,
                -(h[0][0] * g[1] - h[1][0] * g[0]) / det,
            )
        } else {
            (-g[0], -g[1])
        };
        let f0 = poly.eval(x, y);
        let mut step = 1.0;
        while step > 1e-12 && poly.eval(x + step * dx, y + step * dy) > f0 + 1e-18 {
            step *= 0.5;
        }
        let (nx, ny) = (x + step * dx, y + step * dy);
        if !(nx.abs() < 3.0 && ny.abs() < 3.0) {
            return None;
        }
        let moved = (nx - x).abs().max((ny - y).abs());
        (x, y) = (nx, ny);
        if moved < 1e-16 {
            break;
        }
    }
    let g = poly.grad(x, y);
    let h = poly.hessian(x, y);
    let pd = h[0][0] > 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0;
    (g[0].hypot(g[1]) < 1e-12 && pd).then_some((x, y))
}

/// Stationary points of the polynomial restricted to the line of `c`.
fn edge_candidates(poly: &Poly2, (w1, w2, b): Constraint) -> Vec<(f64, f64)> {
    let norm = w1 * w1 + w2 * w2;
    let origin = (b * w1 / norm, b * w2 / norm);
    let dir = (-w2, w1);
    let at = |t: f64| (origin.0 + t * dir.0, origin.1 + t * dir.1);
    // cubic q(t) from its values at t = -1, 0, 1, 2
    let q = [-1.0, 0.0, 1.0, 2.0].map(|t| {
        let p = at(t);
        poly.eval(p.0, p.1)
    });
    let c3 = (q[3] - 3.0 * q[2] + 3.0 * q[1] - q[0]) / 6.0;
    let c2 = (q[2] - 2.0 * q[1] + q[0]) / 2.0;
    let c1 = (q[2] - q[0]) / 2.0 - c3;
    // q'(t) = 3 c3 t^2 + 2 c2 t + c1
    let (qa, qb, qc) = (3.0 * c3, 2.0 * c2, c1);
    let roots = if qa.abs() < 1e-14 {
        if qb.abs() < 1e-14 { vec![] } else { vec![-qc / qb] }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            vec![]
        } else {
            let r = disc.sqrt();
            vec![(-qb + r) / (2.0 * qa), (-qb - r) / (2.0 * qa)]
        }
    };
    roots.into_iter().map(at).collect()
}

fn vertex(c: Constraint, d: Constraint) -> Option<(f64, f64)> {
    let det = c.0 * d.1 - c.1 * d.0;
    (det.abs() > 1e-14).then(|| ((c.2 * d.1 - c.1 * d.2) / det, (c.0 * d.2 - c.2 * d.0) / det))
}

fn region_minimum(region: &Region) -> RegionMinimum {
    const GRID: usize = 12;
    let mut interior = Vec::new();
    for i in 1..GRID {
        for j in 1..GRID {
            let start = (0.75 * i as f64 / GRID as f64, 0.75 * j as f64 / GRID as f64);
            if region.contains(start.0, start.1, 0.0) {
                interior.extend(newton_minimum(region.poly, start));
            }
        }
    }
    let mut boundary = Vec::new();
    for (i, &c) in region.constraints.iter().enumerate() {
        boundary.extend(edge_candidates(region.poly, c));
        for &d in &region.constraints[i + 1..] {
            boundary.extend(vertex(c, d));
        }
    }

    let tagged = interior
        .into_iter()
        .map(|p| (p, true))
        .chain(boundary.into_iter().map(|p| (p, false)));
    let (point, value, is_interior) = tagged
        .filter(|&(p, _)| region.contains(p.0, p.1, FEASIBILITY_TOL))
        .map(|(p, int)| (p, region.poly.eval(p.0, p.1), int))
        // prefer interior points on (near) ties so a critical point lying on
        // an edge is reported as such
        .min_by(|a, b| {
            if (a.1 - b.1).abs() < 1e-15 {
                b.2.cmp(&a.2)
            } else {
                a.1.total_cmp(&b.1)
            }
        })
        .expect("every region has vertices");
    RegionMinimum { region: region.label, point, value, interior: is_interior }
}

/// Minimum of every region's distortion polynomial for `n = 4` or `n = 5`.
///
/// The region where `a1, a2` both exceed `½` is omitted: its distortion is
/// bounded below by `1/24`, above the other regions' minima.
pub fn region_minima(n: usize) -> Result<Vec<RegionMinimum>> {
    let regions: &[Region] = match n {
        4 => &N4_REGIONS,
        5 => &N5_REGIONS,
        _ => return Err(Error::SmallNOutOfRange(n)),
    };
    Ok(regions.iter().map(region_minimum).collect())
}

/// Optimal codebook and error for `1 <= n <= 6`.
pub fn small_n(n: usize) -> Result<QuantizationResult> {
    let density = equal_weight();
    let (codebook, error) = match n {
        1 => {
            let m = density.moments();
            (Codebook::new(vec![m.mean])?, m.variance)
        }
        2 => {
            // the boundary sits at the centre by symmetry
            let a1 = density.conditional_mean(0.0, CENTER)?;
            let error = 2.0
                * (square_integral(0.0, 0.5, a1, OUTER_LEVEL)
                    + square_integral(0.5, CENTER, a1, INNER_LEVEL));
            (assemble(vec![a1], false)?, error)
        }
        3 => {
            let a1 = 0.25;
            let error = (192.0 * a1 * a1 * a1 + 144.0 * a1 * a1 - 108.0 * a1 + 31.0) / 768.0;
            (assemble(vec![a1], true)?, error)
        }
        4 | 5 => {
            // the distortion is C^1, so its minimizer is a critical point
            let best = region_minima(n)?
                .into_iter()
                .filter(|r| r.interior)
                .min_by(|a, b| a.value.total_cmp(&b.value))
                .ok_or(Error::NoConvergence { what: "region minimization", iterations: 200 })?;
            let (a1, a2) = best.point;
            (assemble(vec![a1, a2], n == 5)?, best.value)
        }
        6 => {
            // evenly spaced quarters: two cells on level ½, one on level 1 per side
            let error = 2.0
                * (2.0 * uniform_error(0.25, OUTER_LEVEL, 1) + uniform_error(0.25, INNER_LEVEL, 1));
            (Codebook::new(uniform_points(0.0, 1.5, 6))?, error)
        }
        _ => return Err(Error::SmallNOutOfRange(n)),
    };
    Ok(QuantizationResult { n, codebook, error, split: Provenance::Explicit })
}

// ---------------------------------------------------------------------------
// (k, m) family

/// Left end of the evenly spread block that ends at `3/4`, as a function of
/// the point `x` just before it. The block holds `free` unpinned points and,
/// for odd `n`, the pinned centre.
fn block_start(x: f64, free: usize, parity: Parity) -> f64 {
    let f = free as f64;
    match parity {
        // b_next - d = (3/4 - d)/(2 free), d = (x + b_next)/2
        Parity::Even => (CENTER + 2.0 * f * x) / (2.0 * f + 1.0),
        // b_next - d = (3/4 - d)/(2 free + 1)
        Parity::Odd => (CENTER + (2.0 * f + 1.0) * x) / (2.0 * f + 2.0),
    }
}

/// Voronoi cell `[lo, hi]` of the straddling point `x`.
fn straddle_cell(k: usize, m: usize, parity: Parity, case: Case, x: f64) -> (f64, f64) {
    match case {
        // a_j evenly spread on [0, c], c = (a_k + b_1)/2, a_k = (2k - 1)c/(2k)
        Case::V1 => {
            let k = k as f64;
            (2.0 * k * x / (2.0 * k + 1.0), block_start(x, m - 1, parity))
        }
        // a_1..a_{k-1} evenly spread on [0, e], e = (a_{k-1} + a_k)/2
        Case::V2 => {
            let j = k as f64 - 1.0;
            (2.0 * j * x / (2.0 * j + 1.0), block_start(x, m, parity))
        }
    }
}

/// Solves `x = E(X | X ∈ cell(x))` for the straddling point.
fn straddling_point(density: &StepDensity, k: usize, m: usize, parity: Parity, case: Case) -> Result<f64> {
    let residual = |x: f64| -> Result<f64> {
        let (lo, hi) = straddle_cell(k, m, parity, case, x);
        Ok(density.conditional_mean(lo, hi)? - x)
    };

    // equal-mass seed: quantile at the point's position in the full codebook
    let n = 2 * (k + m) + usize::from(parity == Parity::Odd);
    let index = match case {
        Case::V1 => k,
        Case::V2 => k - 1,
    };
    let mut x = density
        .quantile((2 * index + 1) as f64 / (2 * n) as f64)
        .clamp(1e-6, CENTER - 1e-6);

    for _ in 0..FIXED_POINT_MAX_ITERS {
        let step = DAMPING * residual(x)?;
        x += step;
        if step.abs() < FIXED_POINT_TOL {
            return polish(residual, x);
        }
    }

    // the residual is positive at 0 and negative at 3/4
    let (mut lo, mut hi) = (0.0, CENTER);
    if !(residual(lo)? > 0.0 && residual(hi)? < 0.0) {
        return Err(Error::NoConvergence { what: "straddling-point solver", iterations: FIXED_POINT_MAX_ITERS });
    }
    while hi - lo > 1e-16 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Secant steps on the residual from a converged fixed-point iterate.
///
/// Near `1` the contraction factor leaves the damped iterate up to
/// `FIXED_POINT_TOL / (1 - rate)` away from the root; the residual is smooth
/// there, so a few secant steps recover full precision.
fn polish(residual: impl Fn(f64) -> Result<f64>, x: f64) -> Result<f64> {
    let (mut x0, mut r0) = (x, residual(x)?);
    let mut x1 = x0 + r0;
    let mut r1 = residual(x1)?;
    for _ in 0..20 {
        if r1 == 0.0 || r1 == r0 {
            break;
        }
        let x2 = x1 - r1 * (x1 - x0) / (r1 - r0);
        let r2 = residual(x2)?;
        if r2.abs() >= r1.abs() {
            break;
        }
        (x0, r0, x1, r1) = (x1, r1, x2, r2);
    }
    Ok(if r1.abs() < r0.abs() { x1 } else { x0 })
}

/// Points and distortion (one side of `3/4`) of the block on `[start, 3/4]`.
/// For odd `n` the returned points exclude the centre.
fn right_block(start: f64, free: usize, parity: Parity) -> Result<(Vec<f64>, f64)> {
    match (parity, free) {
        (Parity::Even, 0) => Ok((vec![], 0.0)),
        (Parity::Even, _) => Ok((
            uniform_points(start, CENTER, free),
            uniform_error(CENTER - start, INNER_LEVEL, free),
        )),
        (Parity::Odd, 0) => Ok((vec![], square_integral(start, CENTER, CENTER, INNER_LEVEL))),
        (Parity::Odd, _) => {
            let s = endpoint_constrained(UniformPiece::new(start, CENTER, INNER_LEVEL)?, free)?;
            let mut pts = s.codebook.into_inner();
            pts.pop();
            Ok((pts, s.error))
        }
    }
}

/// Solves one case for any `k, m >= 1`, including `(1, 1)`.
fn solve_case(k: usize, m: usize, parity: Parity, case: Case) -> Result<Option<QuantizationResult>> {
    let density = equal_weight();
    let x = straddling_point(&density, k, m, parity, case)?;
    let (lo, hi) = straddle_cell(k, m, parity, case, x);

    let (left, error_half) = match case {
        Case::V1 => {
            let (c, d) = (lo, hi);
            if !(c <= OVERLAP_LO + FEASIBILITY_TOL && x > OVERLAP_LO && x < CENTER) {
                return Ok(None);
            }
            let mut pts = uniform_points(0.0, c, k);
            pts.push(x);
            let (block, block_err) = right_block(d, m - 1, parity)?;
            pts.extend(block);
            let err = uniform_error(c, OUTER_LEVEL, k)
                + square_integral(c, OVERLAP_LO, x, OUTER_LEVEL)
                + square_integral(OVERLAP_LO, d, x, INNER_LEVEL)
                + block_err;
            (pts, err)
        }
        Case::V2 => {
            let (e, c) = (lo, hi);
            if !(c >= OVERLAP_LO - FEASIBILITY_TOL && x > 0.0 && x <= OVERLAP_LO + FEASIBILITY_TOL) {
                return Ok(None);
            }
            let mut pts = if k > 1 { uniform_points(0.0, e, k - 1) } else { vec![] };
            pts.push(x);
            let (block, block_err) = right_block(c, m, parity)?;
            pts.extend(block);
            let left_err = if k > 1 { uniform_error(e, OUTER_LEVEL, k - 1) } else { 0.0 };
            let err = left_err
                + square_integral(e, OVERLAP_LO, x, OUTER_LEVEL)
                + square_integral(OVERLAP_LO, c, x, INNER_LEVEL)
                + block_err;
            (pts, err)
        }
    };

    let Ok(codebook) = assemble(left, parity == Parity::Odd) else {
        return Ok(None);
    };
    let n = codebook.len();
    Ok(Some(QuantizationResult {
        n,
        codebook,
        error: 2.0 * error_half,
        split: Provenance::Split(SplitConfig { k, m, parity, case }),
    }))
}

/// Solves the branch described by `config`.
///
/// Returns `Ok(None)` when the solution violates the branch's own
/// hypotheses: the boundary `(a_k + b_1)/2` on the wrong side of `½`, or a
/// point outside its assigned interval.
pub fn solve_split(config: SplitConfig) -> Result<Option<QuantizationResult>> {
    let SplitConfig { k, m, parity, case } = config;
    if k == 0 || m == 0 || (k == 1 && m == 1) {
        return Err(Error::OutsideDomain { k, m });
    }
    solve_case(k, m, parity, case)
}

/// Better of the two cases, `None` when both are infeasible. Ties go to V1.
pub(crate) fn best_case(k: usize, m: usize, parity: Parity) -> Result<Option<QuantizationResult>> {
    let v1 = solve_case(k, m, parity, Case::V1)?;
    let v2 = solve_case(k, m, parity, Case::V2)?;
    Ok(match (v1, v2) {
        (Some(a), Some(b)) => Some(if b.error < a.error - TIE_TOL { b } else { a }),
        (a, b) => a.or(b),
    })
}

/// Minimizing solution over both cases of `(k, m)`.
pub fn split_minimum(k: usize, m: usize, parity: Parity) -> Result<QuantizationResult> {
    if k == 0 || m == 0 || (k == 1 && m == 1) {
        return Err(Error::OutsideDomain { k, m });
    }
    best_case(k, m, parity)?.ok_or(Error::Infeasible { k, m })
}

/// `F(k, m) = min(V1(k, m), V2(k, m))` for the given parity of `n`.
pub fn f_value(k: usize, m: usize, parity: Parity) -> Result<f64> {
    split_minimum(k, m, parity).map(|r| r.error)
}
