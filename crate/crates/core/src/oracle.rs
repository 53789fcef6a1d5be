//! Lloyd-Max iteration on a step density, used as an independent check of
//! the closed-form results.
//!
//! Each sweep moves the cell boundaries to the midpoints of neighbouring
//! codepoints and each codepoint to the centroid of its cell. Restart 0
//! starts from equal-mass quantiles; the others from sorted uniform draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::Codebook;
use crate::density::StepDensity;
use crate::error::{Error, Result};
use crate::mixed_quant::QuantizationResult;
use crate::selector::solve;

/// Generator used for random restarts. Restart `r` draws from
/// `ChaCha8Rng::seed_from_u64(seed)` with its stream set to `r`.
pub const PRNG: &str = "ChaCha8Rng(seed_from_u64(seed), stream = restart)";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LloydOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once no codepoint moves by this much in one sweep.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LloydOptions {
    fn default() -> Self {
        Self { restarts: 64, max_iters: 100_000, tol: 1e-12, seed: 0 }
    }
}

impl LloydOptions {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidOption("restarts must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidOption(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Best outcome over all restarts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub codebook: Codebook,
    pub error: f64,
    pub iterations: usize,
    pub restart_index: usize,
    pub converged: bool,
    pub seed: u64,
    pub prng: String,
}

/// Outcome of a single Lloyd run.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydRun {
    pub codebook: Codebook,
    pub iterations: usize,
    pub converged: bool,
    /// Distortion before the first sweep and after every `record_every`
    /// sweeps, when recording was requested.
    pub history: Vec<f64>,
}

/// Initial codebook of restart `restart`.
pub fn initial_codebook(density: &StepDensity, n: usize, restart: usize, seed: u64) -> Result<Codebook> {
    if n == 0 {
        return Err(Error::ZeroPoints);
    }
    if restart == 0 {
        let pts = (0..n)
            .map(|i| density.quantile((2 * i + 1) as f64 / (2 * n) as f64))
            .collect();
        return Codebook::new(pts);
    }
    let (lo, hi) = density.support();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    loop {
        let mut pts: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        pts.sort_by(f64::total_cmp);
        if let Ok(c) = Codebook::new(pts) {
            return Ok(c);
        }
        // duplicate draw; sample again
    }
}

/// Runs Lloyd sweeps from `init` until the largest move is below `tol` or
/// `max_iters` sweeps have been made.
pub fn lloyd_from(
    density: &StepDensity,
    init: Codebook,
    max_iters: usize,
    tol: f64,
    record_every: Option<usize>,
) -> LloydRun {
    let (lo, hi) = density.support();
    let mut pts = init.into_inner();
    let mut history = Vec::new();
    let record = |pts: &[f64], history: &mut Vec<f64>| {
        if let Ok(c) = Codebook::new(pts.to_vec()) {
            history.push(density.distortion(&c));
        }
    };
    if record_every.is_some() {
        record(&pts, &mut history);
    }

    let mut edges = vec![0.0; pts.len() + 1];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        edges[0] = lo;
        edges[pts.len()] = hi;
        for i in 1..pts.len() {
            edges[i] = (0.5 * (pts[i - 1] + pts[i])).clamp(lo, hi);
        }
        let mut moved = 0.0f64;
        for (i, p) in pts.iter_mut().enumerate() {
            // a cell without mass keeps its point
            if let Ok(c) = density.conditional_mean(edges[i], edges[i + 1]) {
                moved = moved.max((c - *p).abs());
                *p = c;
            }
        }
        iterations += 1;
        if let Some(every) = record_every {
            if iterations % every.max(1) == 0 {
                record(&pts, &mut history);
            }
        }
        if moved < tol {
            converged = true;
            break;
        }
    }

    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let codebook = Codebook::new(pts).expect("centroids of disjoint cells stay ordered");
    LloydRun { codebook, iterations, converged, history }
}

/// Multi-restart Lloyd-Max; reports the restart with the smallest exact
/// distortion, lowest restart index on ties.
pub fn lloyd(density: &StepDensity, n: usize, options: &LloydOptions) -> Result<OracleReport> {
    options.validate()?;
    if n == 0 {
        return Err(Error::ZeroPoints);
    }
    let runs: Vec<(usize, LloydRun, f64)> = (0..options.restarts)
        .into_par_iter()
        .map(|r| {
            let init = initial_codebook(density, n, r, options.seed)?;
            let run = lloyd_from(density, init, options.max_iters, options.tol, None);
            let err = density.distortion(&run.codebook);
            Ok((r, run, err))
        })
        .collect::<Result<_>>()?;

    let (restart_index, run, error) = runs
        .into_iter()
        .min_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    Ok(OracleReport {
        n: run.codebook.len(),
        codebook: run.codebook,
        error,
        iterations: run.iterations,
        restart_index,
        converged: run.converged,
        seed: options.seed,
        prng: PRNG.to_string(),
    })
}

/// Closed-form result next to the Lloyd oracle for the equal-weight mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub closed_form: QuantizationResult,
    pub oracle: OracleReport,
    /// Largest pointwise distance between the two codebooks; infinite when
    /// the oracle lost a point.
    pub max_point_gap: f64,
    pub error_gap: f64,
}

pub fn verify(n: usize, options: &LloydOptions) -> Result<Verification> {
    let density = StepDensity::mixture(0.5)?;
    let closed_form = solve(n)?;
    let oracle = lloyd(&density, n, options)?;
    let max_point_gap = closed_form
        .codebook
        .max_gap(&oracle.codebook)
        .unwrap_or(f64::INFINITY);
    let error_gap = (closed_form.error - oracle.error).abs();
    Ok(Verification { closed_form, oracle, max_point_gap, error_gap })
}
