//! Piecewise-constant densities on the line.
//!
//! Every integral here (mass, first moment, squared deviation) is evaluated
//! in closed form on each intersection of an interval with a density piece.
//! Intervals are closed; the densities are atomless, so endpoints carry no
//! mass and closed versus half-open cells make no difference.

use serde::{Deserialize, Serialize};

use crate::codebook::Codebook;
use crate::error::{Error, Result};

/// Masses below this are treated as zero when conditioning.
pub const ZERO_MASS_TOL: f64 = 1e-14;

/// Allowed deviation of the total integral from one.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Left end of the mixture support.
pub const SUPPORT_LO: f64 = 0.0;
/// Right end of the mixture support.
pub const SUPPORT_HI: f64 = 1.5;
/// Point where the first component's support ends and the overlap begins.
pub const OVERLAP_LO: f64 = 0.5;
/// Point where the overlap ends.
pub const OVERLAP_HI: f64 = 1.0;
/// Centre of symmetry of the equal-weight mixture.
pub const CENTER: f64 = 0.75;

/// A probability density that is constant between consecutive breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDensity {
    breakpoints: Vec<f64>,
    levels: Vec<f64>,
    mixture_weight: Option<f64>,
}

/// Mean and variance of a density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// `level * ∫_lo^hi (x - center)^2 dx`, signed when `hi < lo`.
#[inline]
pub(crate) fn square_integral(lo: f64, hi: f64, center: f64, level: f64) -> f64 {
    let (u, v) = (hi - center, lo - center);
    level * (u * u * u - v * v * v) / 3.0
}

impl StepDensity {
    /// Builds a step density from `r + 1` breakpoints and `r` levels.
    pub fn new(breakpoints: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || levels.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidDensity(format!(
                "expected r + 1 breakpoints for r levels, got {} and {}",
                breakpoints.len(),
                levels.len()
            )));
        }
        if breakpoints.iter().any(|x| !x.is_finite())
            || breakpoints.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidDensity(
                "breakpoints must be finite and strictly increasing".into(),
            ));
        }
        if levels.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidDensity("levels must be finite and nonnegative".into()));
        }
        let d = Self { breakpoints, levels, mixture_weight: None };
        let total = d.total_mass();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDensity(format!("total mass is {total}, expected 1")));
        }
        Ok(d)
    }

    /// The mixture `p·U[0, 1] + (1 - p)·U[1/2, 3/2]`: levels `(p, 1, 1 - p)`
    /// on `[0, 1/2]`, `[1/2, 1]`, `[1, 3/2]`.
    pub fn mixture(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidWeight(p));
        }
        let mut d = Self::new(
            vec![SUPPORT_LO, OVERLAP_LO, OVERLAP_HI, SUPPORT_HI],
            vec![p, 1.0, 1.0 - p],
        )?;
        d.mixture_weight = Some(p);
        Ok(d)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// The weight `p` when built by [`StepDensity::mixture`].
    pub fn mixture_weight(&self) -> Option<f64> {
        self.mixture_weight
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    /// `(lo, hi, level)` for every piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.levels)
            .map(|(w, &t)| (w[0], w[1], t))
    }

    /// Pieces intersected with `[lo, hi]`, dropping empty intersections.
    fn clipped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.pieces().filter_map(move |(a, b, t)| {
            let (l, h) = (a.max(lo), b.min(hi));
            (h > l).then_some((l, h, t))
        })
    }

    pub fn value_at(&self, x: f64) -> f64 {
        self.pieces()
            .find(|&(a, b, _)| a <= x && x < b)
            .map_or(0.0, |(_, _, t)| t)
    }

    fn total_mass(&self) -> f64 {
        self.pieces().map(|(a, b, t)| t * (b - a)).sum()
    }

    /// `∫_lo^hi f(x) dx`; zero for empty or reversed intervals.
    pub fn measure(&self, lo: f64, hi: f64) -> f64 {
        self.clipped(lo, hi).map(|(l, h, t)| t * (h - l)).sum()
    }

    /// `∫_lo^hi x f(x) dx`.
    pub fn first_moment(&self, lo: f64, hi: f64) -> f64 {
        self.clipped(lo, hi)
            .map(|(l, h, t)| 0.5 * t * (h * h - l * l))
            .sum()
    }

    /// `E(X | X ∈ [lo, hi])`.
    pub fn conditional_mean(&self, lo: f64, hi: f64) -> Result<f64> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        let mass = self.measure(lo, hi);
        if mass < ZERO_MASS_TOL {
            return Err(Error::ZeroMass { lo, hi });
        }
        // rounding can push the ratio a hair outside the interval
        Ok((self.first_moment(lo, hi) / mass).clamp(lo, hi))
    }

    /// `∫_lo^hi (x - center)^2 f(x) dx`.
    pub fn squared_deviation(&self, lo: f64, hi: f64, center: f64) -> f64 {
        self.clipped(lo, hi)
            .map(|(l, h, t)| square_integral(l, h, center, t))
            .sum()
    }

    pub fn moments(&self) -> Moments {
        let (lo, hi) = self.support();
        let mean = self.first_moment(lo, hi);
        Moments { mean, variance: self.squared_deviation(lo, hi, mean) }
    }

    /// Expected squared distance to the nearest codepoint.
    pub fn distortion(&self, codebook: &Codebook) -> f64 {
        let (lo, hi) = self.support();
        codebook
            .cells(lo, hi)
            .into_iter()
            .zip(codebook.points())
            .map(|((l, h), &a)| self.squared_deviation(l, h, a))
            .sum()
    }

    /// [`StepDensity::distortion`] for a raw slice, validating the order.
    pub fn distortion_of(&self, points: &[f64]) -> Result<f64> {
        Ok(self.distortion(&Codebook::new(points.to_vec())?))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, _) = self.support();
        self.measure(lo, x).min(1.0)
    }

    /// Smallest `x` with `cdf(x) >= u`, for `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let mut acc = 0.0;
        for (a, b, t) in self.pieces() {
            let m = t * (b - a);
            if m > 0.0 && acc + m >= u {
                return (a + (u - acc) / t).min(b);
            }
            acc += m;
        }
        self.support().1
    }
}

/// Density of the mixture with weight `p` on the first component.
pub fn mixture_density(p: f64) -> Result<StepDensity> {
    StepDensity::mixture(p)
}
