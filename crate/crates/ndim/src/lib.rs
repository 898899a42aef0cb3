//! Numeric (binary64) companion to the exact one-dimensional algebra:
//! Cesàro-like ball averages over R^n, the ratio of the overlap of two
//! equal balls to a single ball, and the symmetric-difference bound that
//! makes ball averages asymptotically translation-invariant.
//!
//! The overlap ratio is computed by three mutually independent methods so
//! that none is its own oracle: a closed form through hyperspherical caps,
//! the dimension recursion through layer integrals, and Monte Carlo.

mod ball;
mod cesaro;
mod overlap;
mod quad;

pub use ball::{unit_ball_volume, BallSpec, SampledField};
pub use cesaro::{ball_cesaro, Budget, Estimate, Method};
pub use overlap::{
    overlap_ratio_caps, overlap_ratio_layers, overlap_ratio_mc, squeeze_bracket, symdiff_ratio,
    McEstimate, DEFAULT_LAYER_TOL,
};
pub use quad::QuadOutcome;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NdimError {
    #[error("dimension must be at least {min}, got {got}")]
    BadDim { got: usize, min: usize },
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("center has length {got}, dimension is {dim}")]
    BadCenter { got: usize, dim: usize },
    #[error("field bound must be finite and non-negative, got {0}")]
    BadBound(f64),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("quadrature did not converge: achieved {achieved:e}, wanted {wanted:e}")]
    QuadratureNonConvergence { achieved: f64, wanted: f64 },
    #[error("budget exhausted before tolerance: achieved {achieved:e}, wanted {wanted:e}")]
    BudgetExhausted { achieved: f64, wanted: f64 },
}
