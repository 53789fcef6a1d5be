//! Choosing the split `(k, m)` for a given `n`, and the top-level [`solve`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
#[cfg(test)]
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed_quant::{best_case, small_n, Parity, QuantizationResult};

/// Relative distance to the nearest integer below which the floor in
/// [`seed_sequence`] is settled with exact rational arithmetic.
const NEAR_INTEGER: f64 = 1e-9;

/// Record of one run of the descent over `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorTrace {
    pub n: usize,
    /// Starting value `a(n)`.
    pub seed: usize,
    /// Every `(k, F(k, ⌊n/2⌋ - k))` evaluated, in order. Infeasible splits
    /// are recorded as `+∞`.
    pub visited: Vec<(usize, f64)>,
    /// Accepted values of `k`, starting with the clamped seed.
    pub path: Vec<usize>,
    pub chosen_k: usize,
}

/// `Σ_{j=1}^{h} 1/j²` with Neumaier compensation, smallest terms first.
fn inverse_square_sum(h: usize) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for j in (1..=h).rev() {
        let term = 1.0 / (j as f64 * j as f64);
        let t = sum + term;
        comp += if sum.abs() >= term { (sum - t) + term } else { (term - t) + sum };
        sum = t;
    }
    sum + comp
}

fn exact_inverse_square_sum(h: usize) -> BigRational {
    (1..=h).fold(BigRational::zero(), |acc, j| {
        let j = BigInt::from(j);
        acc + BigRational::new(BigInt::one(), &j * &j)
    })
}

/// `a(1) = 0`, `a(n) = ⌊⌊n/2⌋ / Σ_{j=1}^{⌊n/2⌋} 1/j²⌋` for `n >= 2`.
pub fn seed_sequence(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    let h = n / 2;
    let ratio = h as f64 / inverse_square_sum(h);
    let nearest = ratio.round();
    if (ratio - nearest).abs() > NEAR_INTEGER * ratio {
        return ratio.floor() as usize;
    }
    // floor(h / S) >= q  iff  q·S <= h
    let q = nearest as usize;
    let lhs = exact_inverse_square_sum(h) * BigRational::from_integer(BigInt::from(q));
    if lhs <= BigRational::from_integer(BigInt::from(h)) {
        q
    } else {
        q - 1
    }
}

struct Descent {
    trace: SelectorTrace,
    best: QuantizationResult,
}

fn descend(n: usize) -> Result<Descent> {
    if n < 5 {
        return Err(Error::SelectorDomain(n));
    }
    let half = n / 2;
    let parity = Parity::of(n);
    let seed = seed_sequence(n);
    let (lo, hi) = (1, half - 1);

    if lo == hi {
        // n = 5: (1, 1) is the only split and lies outside the domain of F
        return Ok(Descent {
            trace: SelectorTrace { n, seed, visited: vec![], path: vec![lo], chosen_k: lo },
            best: small_n(n)?,
        });
    }

    let mut memo: HashMap<usize, Option<QuantizationResult>> = HashMap::new();
    let mut visited = Vec::new();
    let mut value = |k: usize| -> Result<f64> {
        if k < lo || k > hi {
            return Ok(f64::INFINITY);
        }
        if let Some(r) = memo.get(&k) {
            return Ok(r.as_ref().map_or(f64::INFINITY, |r| r.error));
        }
        let r = best_case(k, half - k, parity)?;
        let v = r.as_ref().map_or(f64::INFINITY, |r| r.error);
        visited.push((k, v));
        memo.insert(k, r);
        Ok(v)
    };

    // an infeasible seed counts as +∞, so any feasible neighbour improves on it
    let mut k = seed.clamp(lo, hi);
    let mut current = value(k)?;
    let mut path = vec![k];
    loop {
        if value(k - 1)? < current {
            k -= 1;
        } else if value(k + 1)? < current {
            k += 1;
        } else {
            break;
        }
        current = value(k)?;
        path.push(k);
    }
    if !current.is_finite() {
        return Err(Error::Infeasible { k, m: half - k });
    }

    let best = memo.remove(&k).flatten().expect("accepted k is feasible");
    Ok(Descent { trace: SelectorTrace { n, seed, visited, path, chosen_k: k }, best })
}

/// Number of codepoints in `[0, ½]` for an optimal set of `n`-means.
///
/// Starts at `a(n)` and moves to a neighbour while that strictly lowers
/// `F(k, ⌊n/2⌋ - k)`, re-examining both neighbours after each move.
pub fn select_k(n: usize) -> Result<(usize, SelectorTrace)> {
    let d = descend(n)?;
    Ok((d.trace.chosen_k, d.trace))
}

/// Optimal set of `n`-means and the `n`th quantization error.
pub fn solve(n: usize) -> Result<QuantizationResult> {
    match n {
        0 => Err(Error::ZeroPoints),
        1..=5 => small_n(n),
        _ => descend(n).map(|d| d.best),
    }
}

/// [`solve`] together with the selector trace (absent for `n < 5`).
pub fn solve_traced(n: usize) -> Result<(QuantizationResult, Option<SelectorTrace>)> {
    match n {
        0 => Err(Error::ZeroPoints),
        1..=4 => Ok((small_n(n)?, None)),
        5 => Ok((small_n(n)?, Some(descend(n)?.trace))),
        _ => descend(n).map(|d| (d.best, Some(d.trace))),
    }
}
