//! Balls in R^n and bounded sampled fields.

use std::sync::Arc;

use crate::NdimError;

/// Lebesgue volume of the unit ball in `dim` dimensions, by the
/// two-step recurrence `V_n = 2 pi / n * V_(n-2)`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        n => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// A ball `B_radius(center)` in R^dim.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    pub dim: usize,
    pub radius: f64,
    pub center: Vec<f64>,
}

impl BallSpec {
    pub fn new(dim: usize, radius: f64, center: Vec<f64>) -> Result<Self, NdimError> {
        if dim < 1 {
            return Err(NdimError::BadDim { got: dim, min: 1 });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(NdimError::BadRadius(radius));
        }
        if center.len() != dim {
            return Err(NdimError::BadCenter {
                got: center.len(),
                dim,
            });
        }
        Ok(Self {
            dim,
            radius,
            center,
        })
    }

    /// Ball of the given radius centered at the origin.
    pub fn centered(dim: usize, radius: f64) -> Result<Self, NdimError> {
        Self::new(dim, radius, vec![0.0; dim])
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        debug_assert_eq!(p.len(), self.dim);
        let d2: f64 = p
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        d2 <= self.radius * self.radius
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim) * self.radius.powi(self.dim as i32)
    }
}

type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A bounded measurable field on R^dim given by an evaluator and an a
/// priori bound `|u| <= bound`.
#[derive(Clone)]
pub struct SampledField {
    dim: usize,
    bound: f64,
    eval: FieldFn,
}

impl SampledField {
    pub fn new(dim: usize, bound: f64, eval: FieldFn) -> Result<Self, NdimError> {
        if dim < 1 {
            return Err(NdimError::BadDim { got: dim, min: 1 });
        }
        if !(bound.is_finite() && bound >= 0.0) {
            return Err(NdimError::BadBound(bound));
        }
        Ok(Self { dim, bound, eval })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        debug_assert_eq!(p.len(), self.dim);
        (self.eval)(p)
    }

    pub fn constant(dim: usize, c: f64) -> Result<Self, NdimError> {
        Self::new(dim, c.abs(), Arc::new(move |_| c))
    }

    /// Indicator of the half-space `x[axis] > threshold`.
    pub fn halfspace_indicator(dim: usize, axis: usize, threshold: f64) -> Result<Self, NdimError> {
        if axis >= dim {
            return Err(NdimError::BadArgument(format!(
                "axis {axis} out of range for dimension {dim}"
            )));
        }
        Self::new(
            dim,
            1.0,
            Arc::new(move |p| if p[axis] > threshold { 1.0 } else { 0.0 }),
        )
    }

    /// Indicator of a ball.
    pub fn ball_indicator(ball: BallSpec) -> Result<Self, NdimError> {
        Self::new(
            ball.dim,
            1.0,
            Arc::new(move |p| if ball.contains(p) { 1.0 } else { 0.0 }),
        )
    }

    /// Product of per-coordinate cosines; smooth, bounded by 1.
    pub fn cosine_mix(dim: usize, freqs: Vec<f64>) -> Result<Self, NdimError> {
        if freqs.len() != dim {
            return Err(NdimError::BadArgument(format!(
                "got {} frequencies for dimension {dim}",
                freqs.len()
            )));
        }
        Self::new(
            dim,
            1.0,
            Arc::new(move |p| {
                p.iter()
                    .zip(&freqs)
                    .map(|(x, f)| (f * x).cos())
                    .product()
            }),
        )
    }

    /// The translate `x -> u(x - t)`.
    pub fn translated(&self, t: Vec<f64>) -> Result<Self, NdimError> {
        if t.len() != self.dim {
            return Err(NdimError::BadCenter {
                got: t.len(),
                dim: self.dim,
            });
        }
        let inner = self.eval.clone();
        Self::new(
            self.dim,
            self.bound,
            Arc::new(move |p| {
                let shifted: Vec<f64> = p.iter().zip(&t).map(|(a, b)| a - b).collect();
                inner(&shifted)
            }),
        )
    }
}

impl std::fmt::Debug for SampledField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SampledField(dim={}, bound={})", self.dim, self.bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_volumes_match_the_classics() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn ball_membership() {
        let b = BallSpec::new(2, 1.0, vec![1.0, 0.0]).unwrap();
        assert!(b.contains(&[1.5, 0.0]));
        assert!(!b.contains(&[-0.5, 0.5]));
        assert!((b.volume() - std::f64::consts::PI).abs() < 1e-14);
        assert!(BallSpec::new(0, 1.0, vec![]).is_err());
        assert!(BallSpec::new(2, 0.0, vec![0.0, 0.0]).is_err());
        assert!(BallSpec::new(2, 1.0, vec![0.0]).is_err());
    }

    #[test]
    fn translation_shifts_the_field() {
        let u = SampledField::halfspace_indicator(2, 0, 0.0).unwrap();
        let v = u.translated(vec![2.0, 0.0]).unwrap();
        assert_eq!(u.eval(&[1.0, 0.0]), 1.0);
        assert_eq!(v.eval(&[1.0, 0.0]), 0.0);
        assert_eq!(v.eval(&[3.0, 0.0]), 1.0);
    }
}
