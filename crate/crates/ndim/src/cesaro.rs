//! Cesàro-like ball averages: the mean of a bounded field over `B_x(0)`,
//! zero for `x <= 0` by convention, with an explicit error estimate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ball::SampledField;
use crate::overlap::sample_in_ball;
use crate::NdimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Grid,
    MonteCarlo,
}

/// Evaluation budget and reproducibility control.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_evals: u64,
    pub seed: u64,
    /// When set, an estimate whose error exceeds this is a hard error.
    pub tolerance: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_evals: 200_000,
            seed: 0,
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Mean of `u` over the ball of radius `x` centered at the origin.
pub fn ball_cesaro(
    u: &SampledField,
    x: f64,
    method: Method,
    budget: &Budget,
) -> Result<Estimate, NdimError> {
    if x <= 0.0 {
        return Ok(Estimate {
            mean: 0.0,
            stderr: 0.0,
        });
    }
    if budget.max_evals == 0 {
        return Err(NdimError::BadArgument("max_evals must be positive".into()));
    }
    let est = match method {
        Method::MonteCarlo => monte_carlo(u, x, budget),
        Method::Grid => grid(u, x, budget),
    };
    if let Some(tol) = budget.tolerance {
        if est.stderr > tol {
            return Err(NdimError::BudgetExhausted {
                achieved: est.stderr,
                wanted: tol,
            });
        }
    }
    Ok(est)
}

fn monte_carlo(u: &SampledField, x: f64, budget: &Budget) -> Estimate {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut p = vec![0.0f64; u.dim()];
    let n = budget.max_evals;
    // Welford accumulation.
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    for i in 0..n {
        sample_in_ball(&mut rng, x, &mut p);
        let v = u.eval(&p);
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    Estimate {
        mean,
        stderr: (var / n as f64).sqrt(),
    }
}

/// Midpoint-rule mean over in-ball lattice cells at two resolutions; the
/// error estimate combines the resolution difference with the volume of
/// cells straddling the boundary.
fn grid(u: &SampledField, x: f64, budget: &Budget) -> Estimate {
    let dim = u.dim() as u32;
    let cells_fine = (budget.max_evals as f64)
        .powf(1.0 / dim as f64)
        .floor()
        .max(4.0) as u64;
    let coarse = grid_pass(u, x, cells_fine / 2);
    let fine = grid_pass(u, x, cells_fine);
    let stderr = (fine.0 - coarse.0).abs() + u.bound() * fine.1;
    Estimate {
        mean: fine.0,
        stderr,
    }
}

/// One resolution: returns (mean over inside cells, boundary cell fraction).
fn grid_pass(u: &SampledField, x: f64, cells_per_axis: u64) -> (f64, f64) {
    let dim = u.dim();
    let m = cells_per_axis.max(2);
    let h = 2.0 * x / m as f64;
    let half_diag = h * (dim as f64).sqrt() / 2.0;
    let mut idx = vec![0u64; dim];
    let mut p = vec![0.0f64; dim];
    let mut sum = 0.0f64;
    let mut inside: u64 = 0;
    let mut boundary: u64 = 0;
    loop {
        let mut norm2 = 0.0;
        for (k, i) in idx.iter().enumerate() {
            p[k] = -x + (*i as f64 + 0.5) * h;
            norm2 += p[k] * p[k];
        }
        let dist = norm2.sqrt();
        if dist <= x {
            sum += u.eval(&p);
            inside += 1;
        }
        if (dist - x).abs() <= half_diag {
            boundary += 1;
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == dim {
                let mean = if inside > 0 { sum / inside as f64 } else { 0.0 };
                let frac = if inside > 0 {
                    boundary as f64 / inside as f64
                } else {
                    1.0
                };
                return (mean, frac);
            }
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
