//! Exact Cesàro-like averaging and exact extraction of the average's limit
//! at infinity, with a rational error certificate.
//!
//! For `x != 0` the average is `(1/x) * integral of u over [0, x]` with the
//! signed convention for `x < 0`; at `x = 0` it is `u(0)`. The average of a
//! step function is rational-over-linear, so it is never materialized as a
//! `StepFn`: it is evaluated pointwise and its limit is read off the tail.

use num_traits::{Signed, Zero};

use crate::rational::Rational;
use crate::stepfn::StepFn;

/// Exact value of the Cesàro-like average at `x`.
pub fn cesaro_eval(u: &StepFn, x: &Rational) -> Rational {
    if x.is_zero() {
        u.eval(x)
    } else if x.is_positive() {
        u.integral_window(&Rational::zero(), x) / x
    } else {
        u.integral_window(x, &Rational::zero()) / -x
    }
}

/// Limit of the Cesàro-like average at plus infinity together with an
/// explicit convergence certificate.
///
/// For every `x >= valid_from` (and `x > 0`) the exact bound
/// `|average(x) - mean| <= certificate_numerator / x` holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CesaroLimit {
    pub mean: Rational,
    pub certificate_numerator: Rational,
    pub valid_from: Rational,
}

impl CesaroLimit {
    /// Certified bound on `|average(x) - mean|`, when the certificate
    /// applies at `x`.
    pub fn bound_at(&self, x: &Rational) -> Option<Rational> {
        if x.is_positive() && *x >= self.valid_from {
            Some(&self.certificate_numerator / x)
        } else {
            None
        }
    }
}

/// The limit of the average at plus infinity: mean of the right tail cell.
///
/// The certificate numerator is `C + 2 * p * norm` where `C` is the absolute
/// signed integral of `u - mean` over `[0, core_end)` and `p` the tail
/// period: past the core, the running integral of `u - mean` stays within a
/// partial period of zero-mean material.
pub fn cesaro_limit_right(u: &StepFn) -> CesaroLimit {
    let cell = u.right_tail();
    let mean = cell.integral() / cell.period();
    let end = u.core_end();
    let signed_head = if end.is_negative() {
        -u.integral_window(end, &Rational::zero())
    } else {
        u.integral_window(&Rational::zero(), end)
    };
    let head_deviation = (signed_head - &mean * end).abs();
    let tail_slack = Rational::from_integer(2.into()) * cell.period() * u.ess_sup_norm();
    CesaroLimit {
        mean,
        certificate_numerator: head_deviation + tail_slack,
        valid_from: end.clone().max(Rational::zero()),
    }
}

/// Limit of the average at minus infinity, via reflection.
pub fn cesaro_limit_left(u: &StepFn) -> CesaroLimit {
    cesaro_limit_right(&u.reflect())
}

/// `Some(l)` exactly when `u(x)` tends to `l` as `x -> inf`, which for this
/// class means the right tail cell is a.e.-constant.
pub fn has_limit_right(u: &StepFn) -> Option<Rational> {
    u.right_tail().constant_value().cloned()
}

/// `Some(l)` exactly when `u(x)` tends to `l` as `x -> -inf`.
pub fn has_limit_left(u: &StepFn) -> Option<Rational> {
    u.left_tail().constant_value().cloned()
}
