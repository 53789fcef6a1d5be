use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strictly increasing, nonempty list of codepoints.
///
/// Voronoi cells on the line are implied: the boundary between two
/// neighbouring codepoints is their midpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Codebook(Vec<f64>);

impl Codebook {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidCodebook("codebook is empty".into()));
        }
        if let Some(x) = points.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidCodebook(format!("non-finite codepoint {x}")));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCodebook(format!(
                "codepoints must be strictly increasing ({} >= {})",
                w[0], w[1]
            )));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Interior Voronoi boundaries, `len() - 1` midpoints.
    pub fn boundaries(&self) -> Vec<f64> {
        self.0.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Voronoi cells clipped to `[lo, hi]`, one per codepoint.
    pub fn cells(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let mut edges = Vec::with_capacity(self.len() + 1);
        edges.push(lo);
        edges.extend(self.boundaries().into_iter().map(|b| b.clamp(lo, hi)));
        edges.push(hi);
        edges.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Mirror image under `x -> 2 * center - x`.
    pub fn reflect(&self, center: f64) -> Self {
        Self(self.0.iter().rev().map(|&x| 2.0 * center - x).collect())
    }

    /// Largest pointwise distance to another codebook of the same size.
    pub fn max_gap(&self, other: &Codebook) -> Option<f64> {
        (self.len() == other.len()).then(|| {
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }
}

impl TryFrom<Vec<f64>> for Codebook {
    type Error = Error;

    fn try_from(points: Vec<f64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Codebook> for Vec<f64> {
    fn from(c: Codebook) -> Self {
        c.0
    }
}

impl AsRef<[f64]> for Codebook {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
