//! Optimal quantization of the mixture `p·U[0, 1] + (1 - p)·U[½, 3/2]`.
//!
//! The crate computes optimal sets of `n`-means and the `n`th quantization
//! errors for the equal-weight mixture, for every `n`, and checks them
//! against an independent Lloyd-Max iteration.
//!
//! - [`density`]: the step density and its exact integrals.
//! - [`uniform_quant`]: closed forms on a single constant-density interval.
//! - [`mixed_quant`]: explicit solutions for `n <= 6` and the `(k, m)` family.
//! - [`selector`]: the seed sequence, the descent over `k`, and [`solve`].
//! - [`oracle`]: multi-restart Lloyd-Max and closed-form verification.
//!
//! ```
//! let r = mixquant::solve(3).unwrap();
//! assert_eq!(r.codebook.points(), &[0.25, 0.75, 1.25]);
//! assert!((r.error - 1.0 / 48.0).abs() < 1e-15);
//! ```

pub mod codebook;
pub mod density;
pub mod error;
pub mod mixed_quant;
pub mod oracle;
pub mod selector;
pub mod uniform_quant;

pub use codebook::Codebook;
pub use density::{mixture_density, Moments, StepDensity};
pub use error::{Error, Result};
pub use mixed_quant::{
    f_value, small_n, solve_split, split_minimum, Case, Parity, Provenance, QuantizationResult,
    SplitConfig,
};
pub use oracle::{lloyd, verify, LloydOptions, OracleReport, Verification};
pub use selector::{seed_sequence, select_k, solve, SelectorTrace};
pub use uniform_quant::{endpoint_constrained, endpoint_constrained_left, uniform_optimal, UniformPiece};
