//! Ratio of the volume of `B_x(t) ∩ B_x(0)` to `|B_x(0)|`, three ways.
//!
//! 1. `overlap_ratio_caps`: closed form. The lens is two equal
//!    hyperspherical caps of height `x - |t|/2`, and a cap's fraction of
//!    the ball volume is half a regularized incomplete beta function, so
//!    the ratio is `I_s((n+1)/2, 1/2)` with `s = 1 - (|t|/2x)^2`.
//! 2. `overlap_ratio_layers`: the dimension recursion. Slicing along one
//!    axis reduces the `k+1`-dimensional numerator and denominator to
//!    integrals of the `k`-dimensional ones over layers, down to the
//!    one-dimensional base case `(2x - |t|) / 2x`.
//! 3. `overlap_ratio_mc`: Monte Carlo with a per-call deterministic seed.
//!
//! In one dimension the ratio has the closed form `(2x - |t|) / 2x`, which
//! both routes reproduce exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::beta_reg;

use crate::quad::integrate;
use crate::NdimError;

/// Default absolute tolerance for the layer recursion.
pub const DEFAULT_LAYER_TOL: f64 = 1e-9;

fn validate(dim: usize, x: f64, min_dim: usize) -> Result<(), NdimError> {
    if dim < min_dim {
        return Err(NdimError::BadDim { got: dim, min: min_dim });
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(NdimError::BadRadius(x));
    }
    Ok(())
}

/// Closed-form overlap ratio via cap volumes; exact up to `beta_reg`.
pub fn overlap_ratio_caps(dim: usize, x: f64, t_norm: f64) -> Result<f64, NdimError> {
    validate(dim, x, 1)?;
    let d = t_norm.abs();
    if d == 0.0 {
        return Ok(1.0);
    }
    if d >= 2.0 * x {
        return Ok(0.0);
    }
    let c = d / (2.0 * x);
    let s = 1.0 - c * c;
    Ok(beta_reg((dim as f64 + 1.0) / 2.0, 0.5, s).clamp(0.0, 1.0))
}

/// `|B_x(-t) △ B_x(0)| / |B_x(0)| = 2 (1 - overlap ratio)`.
pub fn symdiff_ratio(dim: usize, x: f64, t_norm: f64) -> Result<f64, NdimError> {
    Ok(2.0 * (1.0 - overlap_ratio_caps(dim, x, t_norm)?))
}

/// Driver for the layer recursion: per-level denominators are cached and
/// the error budget is split evenly across the integration levels.
struct LayerEngine {
    d: f64,
    /// `dens[k]` is the integral of `cos^k` over `[0, pi/2]`.
    dens: Vec<f64>,
    /// Per-level quadrature budget, in ratio units.
    level_budget: f64,
    failure: std::cell::Cell<Option<NdimError>>,
}

impl LayerEngine {
    fn new(dim: usize, d: f64, tol: f64) -> Result<Self, NdimError> {
        let levels = (dim - 1).max(1) as f64;
        let mut dens = vec![0.0; dim + 1];
        for (k, slot) in dens.iter_mut().enumerate().take(dim + 1).skip(1) {
            let q = integrate(
                &|theta: f64| theta.cos().powi(k as i32),
                0.0,
                std::f64::consts::FRAC_PI_2,
                1e-13,
                200,
            )?;
            *slot = q.value;
        }
        Ok(Self {
            d,
            dens,
            level_budget: tol / (2.0 * levels),
            failure: std::cell::Cell::new(None),
        })
    }

    /// Overlap ratio in dimension `k` at radius `x`; recursion on `k`.
    fn ratio(&self, k: usize, x: f64) -> f64 {
        if 2.0 * x <= self.d {
            return 0.0;
        }
        if k == 1 {
            return (2.0 * x - self.d) / (2.0 * x);
        }
        // theta* = acos(d / 2x): beyond it the slices are disjoint.
        let theta_star = (self.d / (2.0 * x)).clamp(-1.0, 1.0).acos();
        let num = integrate(
            &|theta: f64| theta.cos().powi(k as i32) * self.ratio(k - 1, x * theta.cos()),
            0.0,
            theta_star,
            self.level_budget * self.dens[k],
            1000,
        );
        match num {
            Ok(q) => (q.value / self.dens[k]).clamp(0.0, 1.0),
            Err(e) => {
                self.failure.set(Some(e));
                f64::NAN
            }
        }
    }
}

/// Overlap ratio by the layer recursion, to absolute tolerance `tol`.
/// Requires `dim >= 2`; the base case of the recursion is the
/// one-dimensional closed form.
pub fn overlap_ratio_layers(
    dim: usize,
    x: f64,
    t_norm: f64,
    tol: f64,
) -> Result<f64, NdimError> {
    validate(dim, x, 2)?;
    if tol <= 0.0 || tol.is_nan() {
        return Err(NdimError::BadArgument(format!("tolerance {tol} must be positive")));
    }
    let d = t_norm.abs();
    if d >= 2.0 * x {
        return Ok(0.0);
    }
    let engine = LayerEngine::new(dim, d, tol)?;
    let r = engine.ratio(dim, x);
    if let Some(e) = engine.failure.take() {
        return Err(e);
    }
    Ok(r)
}

/// Monte Carlo estimate with a binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// Overlap ratio by sampling uniform points of `B_x(0)` and counting how
/// many land in `B_x(t)`; deterministic for a fixed seed.
pub fn overlap_ratio_mc(
    dim: usize,
    x: f64,
    t_norm: f64,
    points: u64,
    seed: u64,
) -> Result<McEstimate, NdimError> {
    validate(dim, x, 1)?;
    if points == 0 {
        return Err(NdimError::BadArgument("points must be positive".into()));
    }
    let d = t_norm.abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits: u64 = 0;
    let mut p = vec![0.0f64; dim];
    for _ in 0..points {
        sample_in_ball(&mut rng, x, &mut p);
        // Distance to the center (d, 0, ..., 0).
        let mut dist2 = (p[0] - d) * (p[0] - d);
        for q in &p[1..] {
            dist2 += q * q;
        }
        if dist2 <= x * x {
            hits += 1;
        }
    }
    let ratio = hits as f64 / points as f64;
    let stderr = (ratio * (1.0 - ratio) / points as f64).sqrt() + 1.0 / points as f64;
    Ok(McEstimate {
        value: ratio,
        stderr,
    })
}

/// Uniform sample of the ball `B_radius(0)`: Gaussian direction and a
/// radius with the `u^(1/dim)` law.
pub(crate) fn sample_in_ball(rng: &mut ChaCha8Rng, radius: f64, out: &mut [f64]) {
    let dim = out.len();
    loop {
        let mut norm2 = 0.0;
        let mut i = 0;
        while i < dim {
            // Box–Muller pair.
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u1.ln()).sqrt();
            out[i] = r * u2.cos();
            norm2 += out[i] * out[i];
            i += 1;
            if i < dim {
                out[i] = r * u2.sin();
                norm2 += out[i] * out[i];
                i += 1;
            }
        }
        if norm2 > 0.0 {
            let u: f64 = rng.gen_range(0.0..1.0f64);
            let scale = radius * u.powf(1.0 / dim as f64) / norm2.sqrt();
            for q in out.iter_mut() {
                *q *= scale;
            }
            return;
        }
    }
}

/// The proof's partial-integral sandwich for the layer step: with
/// `eps = 1 - ratio(dim-1, z)` from the lower dimension, the ratio in
/// `dim` dimensions at radius `x` is bracketed by
///
/// ```text
/// (1-eps) I(z,x) / (z psi(x,z) + I(z,x)) <= ratio
/// ratio <= (z phi(x,z) + (1+eps) I(z,x)) / I(z,x)
/// ```
///
/// where `phi`/`psi` are the substituted layer integrands and `I(z,x)`
/// the partial weight integral. Requires `t/2 < z < x`.
pub fn squeeze_bracket(
    dim: usize,
    x: f64,
    t_norm: f64,
    z: f64,
    tol: f64,
) -> Result<(f64, f64), NdimError> {
    validate(dim, x, 2)?;
    let d = t_norm.abs();
    if !(z > d / 2.0 && z < x) {
        return Err(NdimError::BadArgument(format!(
            "need t/2 < z < x, got z = {z}, t = {d}, x = {x}"
        )));
    }
    let k = dim - 1;
    let ratio_low = |y: f64| -> Result<f64, NdimError> {
        if k == 1 {
            Ok(if 2.0 * y <= d { 0.0 } else { (2.0 * y - d) / (2.0 * y) })
        } else {
            overlap_ratio_layers(k, y, d, tol)
        }
    };
    // eps from the inductive hypothesis; the lower-dimensional ratio is
    // non-decreasing in the radius, so its infimum past z sits at z.
    let eps = 1.0 - ratio_low(z)?;
    // Weight integral of psi over [z, x] under y = x cos(theta):
    // psi(x,y) dy = y^(k+1) / sqrt(x^2-y^2) dy -> x^(k+1) cos^(k+1).
    let theta_z = (z / x).clamp(-1.0, 1.0).acos();
    let weight = integrate(
        &|theta: f64| x.powi(k as i32 + 1) * theta.cos().powi(k as i32 + 1),
        0.0,
        theta_z,
        tol * x.powi(k as i32 + 1),
        1000,
    )?
    .value;
    let sq = (x * x - z * z).sqrt();
    let psi_z = z.powi(k as i32) * z / sq;
    let phi_z = psi_z * ratio_low(z)?;
    let lower = (1.0 - eps) * weight / (z * psi_z + weight);
    let upper = (z * phi_z + (1.0 + eps) * weight) / weight;
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn one_dimensional_closed_form() {
        // (2x - |t|) / 2x in dimension one.
        let r = overlap_ratio_caps(1, 10.0, 1.0).unwrap();
        assert!((r - 0.95).abs() < 1e-12);
        for (x, t) in [(1.0f64, 0.5f64), (3.0, 2.0), (7.0, 13.9)] {
            let expect = ((2.0 * x - t) / (2.0 * x)).max(0.0);
            assert!((overlap_ratio_caps(1, x, t).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_and_disjoint_balls() {
        for dim in 1..=5 {
            assert_eq!(overlap_ratio_caps(dim, 2.0, 0.0).unwrap(), 1.0);
            assert_eq!(overlap_ratio_caps(dim, 1.0, 2.0).unwrap(), 0.0);
            assert_eq!(overlap_ratio_caps(dim, 1.0, 5.0).unwrap(), 0.0);
        }
        assert_eq!(overlap_ratio_layers(3, 1.0, 2.5, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn two_dimensional_lens_closed_form() {
        // Circle lens: 2 acos(c) / pi - 2 c sqrt(1-c^2) / pi with c = t/2x.
        let lens = |x: f64, t: f64| {
            let c = t / (2.0 * x);
            (2.0 * c.acos() - (2.0 * c.asin()).sin()) / PI
        };
        for (x, t) in [(1.0, 1.0), (5.0, 1.0), (2.0, 3.0)] {
            let got = overlap_ratio_caps(2, x, t).unwrap();
            assert!((got - lens(x, t)).abs() < 1e-12, "x={x}, t={t}");
        }
        // The value quoted for unit circles at distance 1.
        let expect = (2.0 * PI / 3.0 - 3.0f64.sqrt() / 2.0) / PI;
        assert!((overlap_ratio_caps(2, 1.0, 1.0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn three_dimensional_rational_case() {
        // Equal unit spheres at distance 1: lens = 5 pi / 12, ratio 5/16.
        let got = overlap_ratio_caps(3, 1.0, 1.0).unwrap();
        assert!((got - 0.3125).abs() < 1e-12);
    }

    #[test]
    fn layers_agree_with_caps_spot_checks() {
        for (dim, x, t) in [(2usize, 1.0, 1.0), (2, 5.0, 0.5), (3, 5.0, 1.0), (4, 1.0, 0.5)] {
            let caps = overlap_ratio_caps(dim, x, t).unwrap();
            let layers = overlap_ratio_layers(dim, x, t, 1e-9).unwrap();
            assert!(
                (caps - layers).abs() < 1e-6,
                "dim={dim} x={x} t={t}: caps={caps}, layers={layers}"
            );
        }
    }

    #[test]
    fn monte_carlo_agrees_within_five_sigma() {
        let mc = overlap_ratio_mc(2, 1.0, 1.0, 200_000, 42).unwrap();
        let caps = overlap_ratio_caps(2, 1.0, 1.0).unwrap();
        assert!((mc.value - caps).abs() < 5.0 * mc.stderr);
        // Determinism of the seeded estimate.
        let again = overlap_ratio_mc(2, 1.0, 1.0, 200_000, 42).unwrap();
        assert_eq!(mc, again);
    }

    #[test]
    fn symdiff_values() {
        assert!((symdiff_ratio(1, 10.0, 1.0).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(symdiff_ratio(3, 4.0, 0.0).unwrap(), 0.0);
        // Decreasing in x for fixed t.
        let mut last = f64::INFINITY;
        for x in [1.0, 2.0, 4.0, 8.0, 100.0, 1e4] {
            let s = symdiff_ratio(2, x, 1.0).unwrap();
            assert!(s < last);
            last = s;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn ratio_increases_to_one_in_x() {
        for dim in 1..=4usize {
            let mut prev = 0.0;
            for x in [0.6, 1.0, 3.0, 10.0, 1e2, 1e4] {
                let r = overlap_ratio_caps(dim, x, 1.0).unwrap();
                assert!(r >= prev, "dim {dim}: ratio not monotone at x={x}");
                prev = r;
            }
            assert!((prev - 1.0).abs() < 1e-3, "dim {dim}: far ratio {prev}");
        }
    }

    #[test]
    fn squeeze_brackets_the_ratio() {
        for (dim, x, t) in [(2usize, 10.0f64, 1.0f64), (3, 10.0, 1.0), (3, 50.0, 2.0)] {
            let z = (x * t).sqrt();
            let (lo, hi) = squeeze_bracket(dim, x, t, z, 1e-9).unwrap();
            let r = overlap_ratio_layers(dim, x, t, 1e-9).unwrap();
            assert!(
                lo - 1e-7 <= r && r <= hi + 1e-7,
                "dim={dim} x={x}: {lo} <= {r} <= {hi}"
            );
            assert!(hi - lo < 1.0, "bracket should carry information");
        }
        // The bracket tightens as x grows with z following sqrt(x t).
        let widths: Vec<f64> = [10.0f64, 100.0, 1000.0]
            .iter()
            .map(|&x| {
                let z = x.sqrt();
                let (lo, hi) = squeeze_bracket(2, x, 1.0, z, 1e-9).unwrap();
                hi - lo
            })
            .collect();
        assert!(widths[1] < widths[0] && widths[2] < widths[1]);
    }

    #[test]
    fn invalid_arguments_error() {
        assert!(overlap_ratio_caps(0, 1.0, 0.5).is_err());
        assert!(overlap_ratio_caps(2, 0.0, 0.5).is_err());
        assert!(overlap_ratio_layers(1, 1.0, 0.5, 1e-9).is_err());
        assert!(overlap_ratio_mc(2, 1.0, 0.5, 0, 1).is_err());
        assert!(squeeze_bracket(2, 1.0, 1.0, 0.2, 1e-9).is_err());
    }
}
