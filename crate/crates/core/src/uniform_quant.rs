//! Closed-form quantizers for a constant density on a single interval.

use serde::{Deserialize, Serialize};

use crate::codebook::Codebook;
use crate::error::{Error, Result};

/// An interval `[a, b]` carrying the constant density level `t`.
///
/// `t` need not integrate to one; errors scale linearly with it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformPiece {
    pub a: f64,
    pub b: f64,
    pub t: f64,
}

/// Codebook of a uniform piece together with its distortion.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSolution {
    pub codebook: Codebook,
    pub error: f64,
}

/// Solution with one codepoint pinned to an endpoint of the piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PinnedSolution {
    /// All `n + 1` points, including the pinned endpoint.
    pub codebook: Codebook,
    /// The free point nearest the unpinned end.
    pub first_free: f64,
    pub error: f64,
}

impl UniformPiece {
    pub fn new(a: f64, b: f64, t: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::InvalidInterval { lo: a, hi: b });
        }
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidDensity(format!("level must be nonnegative, got {t}")));
        }
        Ok(Self { a, b, t })
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    fn reflected(&self) -> Self {
        Self { a: -self.b, b: -self.a, t: self.t }
    }
}

/// Points `a + (2j - 1)(b - a) / 2n` for `j = 1..=n`.
pub(crate) fn uniform_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / n as f64;
    (1..=n).map(|j| a + (j as f64 - 0.5) * step).collect()
}

/// Distortion of `n` evenly spread points on a piece of length `len`, level `t`.
pub(crate) fn uniform_error(len: f64, t: f64, n: usize) -> f64 {
    len * len * len * t / (12.0 * (n * n) as f64)
}

/// Optimal `n` points on a uniform piece, with error `(b - a)^3 t / (12 n^2)`.
pub fn uniform_optimal(piece: UniformPiece, n: usize) -> Result<UniformSolution> {
    if n == 0 {
        return Err(Error::ZeroPoints);
    }
    Ok(UniformSolution {
        codebook: Codebook::new(uniform_points(piece.a, piece.b, n))?,
        error: uniform_error(piece.len(), piece.t, n),
    })
}

/// Free first point when `b` is pinned and `n` points are free.
///
/// The free points sit at spacing `2(a1 - a)`, and the last one is one
/// spacing short of `b`, so `b - a = (2n + 1)(a1 - a)`.
pub(crate) fn pinned_first_free(a: f64, b: f64, n: usize) -> f64 {
    a + (b - a) / (2 * n + 1) as f64
}

/// Optimal `n + 1` points on a uniform piece subject to `b` being one of them.
///
/// The `n` free points are `a + (2j - 1)(b - a1) / 2n`; the error is
/// `t (b - a1)^3 / (12 n^2) + t (a1 - a)^3 / 3`.
pub fn endpoint_constrained(piece: UniformPiece, n: usize) -> Result<PinnedSolution> {
    if n == 0 {
        return Err(Error::ZeroPoints);
    }
    let UniformPiece { a, b, t } = piece;
    let a1 = pinned_first_free(a, b, n);
    let mut points = uniform_points(a, a + (b - a1), n);
    points.push(b);
    let gap = a1 - a;
    Ok(PinnedSolution {
        codebook: Codebook::new(points)?,
        first_free: a1,
        error: uniform_error(b - a1, t, n) + t * gap * gap * gap / 3.0,
    })
}

/// Mirror of [`endpoint_constrained`] with the left endpoint `a` pinned.
///
/// `first_free` is then the free point nearest `b`.
pub fn endpoint_constrained_left(piece: UniformPiece, n: usize) -> Result<PinnedSolution> {
    let mirrored = endpoint_constrained(piece.reflected(), n)?;
    Ok(PinnedSolution {
        codebook: mirrored.codebook.reflect(0.0),
        first_free: -mirrored.first_free,
        error: mirrored.error,
    })
}
