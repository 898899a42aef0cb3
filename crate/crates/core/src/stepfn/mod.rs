//! Exact closed algebra of eventually periodic rational step functions.
//!
//! A [`StepFn`] is a total function on the line: a periodic cell tiles
//! `(-inf, core_start)`, finitely many half-open pieces cover
//! `[core_start, core_end)`, and a second cell tiles `[core_end, inf)`.
//! All pieces are `[a, b)`, so two functions agree almost everywhere
//! exactly when their canonical representatives agree pointwise, and
//! equality is decidable by refining breakpoints over aligned periods.

mod cell;

pub use cell::PeriodicCell;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{floor_div, lcm_positive, magnitude, mod_pos, rat_int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepFnError {
    #[error("period explosion: {detail}")]
    PeriodExplosion { detail: String },
    #[error("intervals must be disjoint")]
    OverlappingIntervals,
    #[error("interval [{start}, {end}) is reversed")]
    ReversedInterval { start: String, end: String },
    #[error("period must be positive, got {period}")]
    NonPositivePeriod { period: String },
    #[error("cell breakpoints must start at 0, increase strictly and stay below the period")]
    MalformedCell,
    #[error("core pieces must start at core_start, increase strictly and stay below core_end")]
    MalformedCore,
    #[error("value map undefined at attained value {value}")]
    MapUndefined { value: String },
    #[error("support must lie inside (0, {bound}) up to a null set")]
    SupportOutsideWindow { bound: String },
}

/// Caps on the cost of aligning two tail periods. Exceeding either cap is a
/// hard error, never a silent approximation.
#[derive(Debug, Clone)]
pub struct PeriodGuard {
    /// Largest allowed magnitude for the numerator and denominator of a
    /// combined (lcm) tail period.
    pub max_period_magnitude: BigUint,
    /// Largest number of refined pieces any single alignment may produce.
    pub max_pieces: usize,
}

impl Default for PeriodGuard {
    fn default() -> Self {
        Self {
            max_period_magnitude: BigUint::one() << 64,
            max_pieces: 1 << 16,
        }
    }
}

/// Eventually periodic rational step function; the model element of
/// L-infinity used everywhere in this crate.
///
/// Values are immutable; every operation returns a fresh function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFn {
    left: PeriodicCell,
    core_start: Rational,
    core_bps: Vec<Rational>,
    core_vals: Vec<Rational>,
    core_end: Rational,
    right: PeriodicCell,
}

impl StepFn {
    /// The constant function.
    pub fn constant(c: Rational) -> Self {
        Self {
            left: PeriodicCell::constant(c.clone()),
            core_start: Rational::zero(),
            core_bps: Vec::new(),
            core_vals: Vec::new(),
            core_end: Rational::zero(),
            right: PeriodicCell::constant(c),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// Indicator of a finite union of pairwise disjoint half-open intervals
    /// `[a, b)`. Touching intervals are merged; empty (`a == b`) ones are
    /// dropped.
    pub fn indicator(intervals: &[(Rational, Rational)]) -> Result<Self, StepFnError> {
        let mut ivs: Vec<(Rational, Rational)> = Vec::new();
        for (a, b) in intervals {
            if a > b {
                return Err(StepFnError::ReversedInterval {
                    start: a.to_string(),
                    end: b.to_string(),
                });
            }
            if a < b {
                ivs.push((a.clone(), b.clone()));
            }
        }
        if ivs.is_empty() {
            return Ok(Self::zero());
        }
        ivs.sort();
        for w in ivs.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(StepFnError::OverlappingIntervals);
            }
        }
        let start = ivs[0].0.clone();
        let end = ivs.last().unwrap().1.clone();
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        for (i, (a, b)) in ivs.iter().enumerate() {
            bps.push(a.clone());
            vals.push(Rational::one());
            if let Some((next, _)) = ivs.get(i + 1) {
                if b < next {
                    bps.push(b.clone());
                    vals.push(Rational::zero());
                }
            }
        }
        Ok(Self::assemble(
            PeriodicCell::constant(Rational::zero()),
            start,
            bps,
            vals,
            end,
            PeriodicCell::constant(Rational::zero()),
        ))
    }

    /// Fully periodic function: value at `x` is `cell((x - anchor) mod p)`.
    pub fn periodic(cell: PeriodicCell, anchor: Rational) -> Self {
        Self::assemble(
            cell.clone(),
            anchor.clone(),
            Vec::new(),
            Vec::new(),
            anchor,
            cell,
        )
    }

    /// General constructor from tails and explicit core pieces
    /// `(start, value)`; pieces must begin at `core_start`, increase
    /// strictly and stay below `core_end`.
    pub fn from_parts(
        left: PeriodicCell,
        core_start: Rational,
        core: Vec<(Rational, Rational)>,
        core_end: Rational,
        right: PeriodicCell,
    ) -> Result<Self, StepFnError> {
        if core_start > core_end {
            return Err(StepFnError::MalformedCore);
        }
        if core.is_empty() {
            if core_start != core_end {
                return Err(StepFnError::MalformedCore);
            }
        } else {
            if core_start == core_end || core[0].0 != core_start {
                return Err(StepFnError::MalformedCore);
            }
            for w in core.windows(2) {
                if w[0].0 >= w[1].0 {
                    return Err(StepFnError::MalformedCore);
                }
            }
            if core.last().unwrap().0 >= core_end {
                return Err(StepFnError::MalformedCore);
            }
        }
        let (bps, vals) = core.into_iter().unzip();
        Ok(Self::assemble(left, core_start, bps, vals, core_end, right))
    }

    /// Internal constructor: merges adjacent equal core values. Inputs must
    /// already satisfy the ordering invariants.
    fn assemble(
        left: PeriodicCell,
        core_start: Rational,
        core_bps: Vec<Rational>,
        core_vals: Vec<Rational>,
        core_end: Rational,
        right: PeriodicCell,
    ) -> Self {
        let mut bps = Vec::with_capacity(core_bps.len());
        let mut vals: Vec<Rational> = Vec::with_capacity(core_vals.len());
        for (b, v) in core_bps.into_iter().zip(core_vals) {
            if vals.last() == Some(&v) {
                continue;
            }
            bps.push(b);
            vals.push(v);
        }
        debug_assert!(core_start <= core_end);
        debug_assert_eq!(bps.is_empty(), core_start == core_end);
        debug_assert!(bps.first().is_none_or(|b| *b == core_start));
        debug_assert!(bps.last().is_none_or(|b| *b < core_end));
        Self {
            left,
            core_start,
            core_bps: bps,
            core_vals: vals,
            core_end,
            right,
        }
    }

    pub fn left_tail(&self) -> &PeriodicCell {
        &self.left
    }

    pub fn right_tail(&self) -> &PeriodicCell {
        &self.right
    }

    pub fn core_start(&self) -> &Rational {
        &self.core_start
    }

    pub fn core_end(&self) -> &Rational {
        &self.core_end
    }

    /// Core pieces as `(start, end, value)`.
    pub fn core_pieces(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> {
        self.core_bps.iter().enumerate().map(move |(i, b)| {
            let end = self.core_bps.get(i + 1).unwrap_or(&self.core_end);
            (b, end, &self.core_vals[i])
        })
    }

    /// Pointwise value of the canonical representative.
    pub fn eval(&self, x: &Rational) -> Rational {
        if *x < self.core_start {
            let off = mod_pos(&(x - &self.core_start), self.left.period());
            self.left.value_at(&off).clone()
        } else if *x >= self.core_end {
            let off = mod_pos(&(x - &self.core_end), self.right.period());
            self.right.value_at(&off).clone()
        } else {
            let idx = self.core_bps.partition_point(|b| b <= x);
            self.core_vals[idx - 1].clone()
        }
    }

    /// Exact essential supremum norm: largest |value| over all pieces.
    pub fn ess_sup_norm(&self) -> Rational {
        let mut m = self.left.max_abs().max(self.right.max_abs());
        for v in &self.core_vals {
            m = m.max(v.abs());
        }
        m
    }

    /// True when both tails vanish, i.e. the function is zero a.e. outside
    /// a bounded interval.
    pub fn has_compact_support(&self) -> bool {
        self.left.is_zero() && self.right.is_zero()
    }

    /// True when every attained value is non-negative (u >= 0 a.e.).
    pub fn is_nonneg(&self) -> bool {
        !self.left.values().iter().any(|v| v.is_negative())
            && !self.right.values().iter().any(|v| v.is_negative())
            && !self.core_vals.iter().any(|v| v.is_negative())
    }

    /// All pairwise distinct attained values.
    pub fn attained_values(&self) -> Vec<Rational> {
        let mut vals: Vec<Rational> = self
            .left
            .values()
            .iter()
            .chain(self.right.values())
            .chain(self.core_vals.iter())
            .cloned()
            .collect();
        vals.sort();
        vals.dedup();
        vals
    }

    /// Graph shifted right by `t`.
    pub fn translate(&self, t: &Rational) -> Self {
        Self {
            left: self.left.clone(),
            core_start: &self.core_start + t,
            core_bps: self.core_bps.iter().map(|b| b + t).collect(),
            core_vals: self.core_vals.clone(),
            core_end: &self.core_end + t,
            right: self.right.clone(),
        }
    }

    /// Canonical representative of `x -> u(-x)`.
    pub fn reflect(&self) -> Self {
        let mut bps = Vec::with_capacity(self.core_bps.len());
        let mut vals = Vec::with_capacity(self.core_vals.len());
        bps.push(-&self.core_end);
        for i in (0..self.core_vals.len()).rev() {
            vals.push(self.core_vals[i].clone());
            if i > 0 {
                bps.push(-&self.core_bps[i]);
            }
        }
        if vals.is_empty() {
            bps.clear();
        }
        Self::assemble(
            self.right.reflected(),
            -&self.core_end,
            bps,
            vals,
            -&self.core_start,
            self.left.reflected(),
        )
    }

    /// Pointwise scalar multiple.
    pub fn scale(&self, alpha: &Rational) -> Self {
        self.map_values(|v| Ok(v * alpha))
            .expect("scaling is total")
    }

    /// Post-compose with `f`, applied to the finitely many attained values.
    pub fn map_values(
        &self,
        mut f: impl FnMut(&Rational) -> Result<Rational, StepFnError>,
    ) -> Result<Self, StepFnError> {
        let left = self.left.map_values(&mut f)?;
        let right = self.right.map_values(&mut f)?;
        let vals = self
            .core_vals
            .iter()
            .map(&mut f)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::assemble(
            left,
            self.core_start.clone(),
            self.core_bps.clone(),
            vals,
            self.core_end.clone(),
            right,
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self, StepFnError> {
        self.binary_with(other, &PeriodGuard::default(), |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, StepFnError> {
        self.binary_with(other, &PeriodGuard::default(), |a, b| a - b)
    }

    /// Pointwise maximum (lattice join).
    pub fn join(&self, other: &Self) -> Result<Self, StepFnError> {
        self.binary_with(other, &PeriodGuard::default(), |a, b| a.max(b).clone())
    }

    /// Pointwise minimum (lattice meet).
    pub fn meet(&self, other: &Self) -> Result<Self, StepFnError> {
        self.binary_with(other, &PeriodGuard::default(), |a, b| a.min(b).clone())
    }

    /// Generic pointwise combination; tail periods align over their lcm,
    /// subject to the guard.
    pub fn binary_with(
        &self,
        other: &Self,
        guard: &PeriodGuard,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self, StepFnError> {
        let plan = AlignPlan::for_pair(self, other, guard)?;
        let make = |lo: &Rational, hi: &Rational| -> Result<(Vec<Rational>, Vec<Rational>), StepFnError> {
            let pts = joint_jump_points(self, other, lo, hi, guard)?;
            let mut bps = Vec::with_capacity(pts.len());
            let mut vals: Vec<Rational> = Vec::with_capacity(pts.len());
            for p in pts {
                let v = op(&self.eval(&p), &other.eval(&p));
                if vals.last() == Some(&v) {
                    continue;
                }
                bps.push(p);
                vals.push(v);
            }
            Ok((bps, vals))
        };

        let left_lo = &plan.start - &plan.left_period;
        let (l_bps, l_vals) = make(&left_lo, &plan.start)?;
        let l_bps = l_bps.iter().map(|b| b - &left_lo).collect();
        let left = PeriodicCell::new(plan.left_period.clone(), l_bps, l_vals)?;

        let right_hi = &plan.end + &plan.right_period;
        let (r_bps, r_vals) = make(&plan.end, &right_hi)?;
        let r_bps = r_bps.iter().map(|b| b - &plan.end).collect();
        let right = PeriodicCell::new(plan.right_period.clone(), r_bps, r_vals)?;

        let (c_bps, c_vals) = if plan.start < plan.end {
            make(&plan.start, &plan.end)?
        } else {
            (Vec::new(), Vec::new())
        };

        Ok(Self::assemble(
            left,
            plan.start,
            c_bps,
            c_vals,
            plan.end,
            right,
        ))
    }

    /// Decide `self == other` almost everywhere, exactly.
    pub fn eq_ae(&self, other: &Self) -> Result<bool, StepFnError> {
        self.pointwise_all(other, &PeriodGuard::default(), |a, b| a == b)
    }

    /// Decide `self <= other` almost everywhere, exactly.
    pub fn le_ae(&self, other: &Self) -> Result<bool, StepFnError> {
        self.pointwise_all(other, &PeriodGuard::default(), |a, b| a <= b)
    }

    /// Decide `self * other == 0` almost everywhere (disjoint supports).
    pub fn has_disjoint_support(&self, other: &Self) -> Result<bool, StepFnError> {
        self.pointwise_all(other, &PeriodGuard::default(), |a, b| {
            a.is_zero() || b.is_zero()
        })
    }

    /// Check a pointwise predicate on every refined piece of the pair; this
    /// decides a.e. statements because pieces are half-open.
    pub fn pointwise_all(
        &self,
        other: &Self,
        guard: &PeriodGuard,
        pred: impl Fn(&Rational, &Rational) -> bool,
    ) -> Result<bool, StepFnError> {
        let plan = AlignPlan::for_pair(self, other, guard)?;
        let check = |lo: &Rational, hi: &Rational| -> Result<bool, StepFnError> {
            if lo >= hi {
                return Ok(true);
            }
            for p in joint_jump_points(self, other, lo, hi, guard)? {
                if !pred(&self.eval(&p), &other.eval(&p)) {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let left_lo = &plan.start - &plan.left_period;
        let right_hi = &plan.end + &plan.right_period;
        Ok(check(&left_lo, &plan.start)?
            && check(&plan.start, &plan.end)?
            && check(&plan.end, &right_hi)?)
    }

    /// `u * indicator([0, inf))`: zero on the negative axis.
    pub fn restrict_right(&self) -> Result<Self, StepFnError> {
        let guard = PeriodGuard::default();
        let zero = PeriodicCell::constant(Rational::zero());
        let end = if self.core_end.is_negative() {
            let p = self.right.period();
            let k = (-&self.core_end / p).ceil().to_integer();
            &self.core_end + p * Rational::from_integer(k)
        } else {
            self.core_end.clone()
        };
        let (bps, vals) = self.window_pieces(&Rational::zero(), &end, &guard)?;
        Ok(Self::assemble(
            zero,
            Rational::zero(),
            bps,
            vals,
            end,
            self.right.clone(),
        ))
    }

    /// `u * indicator((-inf, 0))`: zero on `[0, inf)`.
    pub fn restrict_left(&self) -> Result<Self, StepFnError> {
        let guard = PeriodGuard::default();
        let zero = PeriodicCell::constant(Rational::zero());
        let start = if self.core_start.is_positive() {
            let p = self.left.period();
            let k = (&self.core_start / p).ceil().to_integer();
            &self.core_start - p * Rational::from_integer(k)
        } else {
            self.core_start.clone()
        };
        let (bps, vals) = self.window_pieces(&start, &Rational::zero(), &guard)?;
        Ok(Self::assemble(
            self.left.clone(),
            start,
            bps,
            vals,
            Rational::zero(),
            zero,
        ))
    }

    /// Periodic prolongation to the right: zero on the negative axis, then
    /// the pattern of `u` on `[0, n)` repeated with period `n`. Requires the
    /// support of `u` to sit inside `(0, n)` up to a null set, and satisfies
    /// `u + translate(result, n) == result` a.e.
    pub fn prolong_periodic(&self, n: &Rational) -> Result<Self, StepFnError> {
        if !n.is_positive() {
            return Err(StepFnError::NonPositivePeriod {
                period: n.to_string(),
            });
        }
        let outside = |msg: &Rational| StepFnError::SupportOutsideWindow {
            bound: msg.to_string(),
        };
        if !self.left.is_zero() || !self.right.is_zero() {
            return Err(outside(n));
        }
        for (b, e, v) in self.core_pieces() {
            if !v.is_zero() && (b.is_negative() || e > n) {
                return Err(outside(n));
            }
        }
        let guard = PeriodGuard::default();
        let (bps, vals) = self.window_pieces(&Rational::zero(), n, &guard)?;
        let cell = PeriodicCell::new(n.clone(), bps, vals)?;
        Ok(Self::assemble(
            PeriodicCell::constant(Rational::zero()),
            Rational::zero(),
            Vec::new(),
            Vec::new(),
            Rational::zero(),
            cell,
        ))
    }

    /// Exact integral over `[a, b)` for `a <= b`.
    pub fn integral_window(&self, a: &Rational, b: &Rational) -> Rational {
        debug_assert!(a <= b);
        let mut acc = Rational::zero();
        let lo = a.clone();
        let hi = b.min(&self.core_start).clone();
        if lo < hi {
            acc += periodic_integral(&self.core_start, &self.left, &lo, &hi);
        }
        let lo = a.max(&self.core_start);
        let hi = b.min(&self.core_end);
        if lo < hi {
            for (pb, pe, v) in self.core_pieces() {
                let s = pb.max(lo);
                let e = pe.min(hi);
                if s < e {
                    acc += v * (e - s);
                }
            }
        }
        let lo = a.max(&self.core_end).clone();
        let hi = b.clone();
        if lo < hi {
            acc += periodic_integral(&self.core_end, &self.right, &lo, &hi);
        }
        acc
    }

    /// Refined `(breakpoint, value)` pieces of `self` covering `[a, b)`,
    /// merged; the first breakpoint is `a`. Empty when `a == b`.
    pub(crate) fn window_pieces(
        &self,
        a: &Rational,
        b: &Rational,
        guard: &PeriodGuard,
    ) -> Result<(Vec<Rational>, Vec<Rational>), StepFnError> {
        if a >= b {
            return Ok((Vec::new(), Vec::new()));
        }
        let pts = joint_jump_points(self, self, a, b, guard)?;
        let mut bps = Vec::with_capacity(pts.len());
        let mut vals: Vec<Rational> = Vec::with_capacity(pts.len());
        for p in pts {
            let v = self.eval(&p);
            if vals.last() == Some(&v) {
                continue;
            }
            bps.push(p);
            vals.push(v);
        }
        Ok((bps, vals))
    }

    /// Candidate jump points of `self` inside `[lo, hi)`.
    fn jump_points_into(
        &self,
        lo: &Rational,
        hi: &Rational,
        guard: &PeriodGuard,
        out: &mut Vec<Rational>,
    ) -> Result<(), StepFnError> {
        // Left tail region.
        let l_hi = hi.min(&self.core_start);
        if lo < l_hi {
            periodic_jumps(&self.core_start, &self.left, lo, l_hi, guard, out)?;
        }
        // Core region.
        let c_lo = lo.max(&self.core_start);
        let c_hi = hi.min(&self.core_end);
        if c_lo < c_hi {
            for b in &self.core_bps {
                if b >= c_lo && b < c_hi {
                    out.push(b.clone());
                }
            }
        }
        // Right tail region (its first breakpoint is the anchor itself).
        let r_lo = lo.max(&self.core_end).clone();
        if &r_lo < hi {
            periodic_jumps(&self.core_end, &self.right, &r_lo, hi, guard, out)?;
        }
        Ok(())
    }
}

/// Alignment data for a pair: merged core window plus lcm tail periods.
struct AlignPlan {
    start: Rational,
    end: Rational,
    left_period: Rational,
    right_period: Rational,
}

impl AlignPlan {
    fn for_pair(u: &StepFn, v: &StepFn, guard: &PeriodGuard) -> Result<Self, StepFnError> {
        let left_period = guarded_lcm(u.left.period(), v.left.period(), guard)?;
        let right_period = guarded_lcm(u.right.period(), v.right.period(), guard)?;
        Ok(Self {
            start: u.core_start.clone().min(v.core_start.clone()),
            end: u.core_end.clone().max(v.core_end.clone()),
            left_period,
            right_period,
        })
    }
}

fn guarded_lcm(a: &Rational, b: &Rational, guard: &PeriodGuard) -> Result<Rational, StepFnError> {
    let l = lcm_positive(a, b);
    if magnitude(&l) > guard.max_period_magnitude {
        return Err(StepFnError::PeriodExplosion {
            detail: format!("combined tail period {l} exceeds the magnitude limit"),
        });
    }
    Ok(l)
}

/// Sorted, deduplicated jump candidates of both functions in `[lo, hi)`,
/// always including `lo`.
fn joint_jump_points(
    u: &StepFn,
    v: &StepFn,
    lo: &Rational,
    hi: &Rational,
    guard: &PeriodGuard,
) -> Result<Vec<Rational>, StepFnError> {
    let mut pts = vec![lo.clone()];
    u.jump_points_into(lo, hi, guard, &mut pts)?;
    if !std::ptr::eq(u, v) {
        v.jump_points_into(lo, hi, guard, &mut pts)?;
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Jump candidates of a periodic tail anchored at `anchor` within `[lo, hi)`.
fn periodic_jumps(
    anchor: &Rational,
    cell: &PeriodicCell,
    lo: &Rational,
    hi: &Rational,
    guard: &PeriodGuard,
    out: &mut Vec<Rational>,
) -> Result<(), StepFnError> {
    let p = cell.period();
    let tiles = floor_div(&(hi - lo), p) + BigInt::from(2);
    let estimate = &tiles * BigInt::from(cell.piece_count());
    if estimate > BigInt::from(guard.max_pieces) {
        return Err(StepFnError::PeriodExplosion {
            detail: format!("alignment would refine into more than {} pieces", guard.max_pieces),
        });
    }
    let mut tile = anchor + p * Rational::from_integer(floor_div(&(lo - anchor), p));
    while &tile < hi {
        for b in cell.breakpoints() {
            let x = &tile + b;
            if &x >= lo && &x < hi {
                out.push(x);
            }
        }
        tile += p;
    }
    Ok(())
}

/// Integral of a tail anchored at `anchor` over `[lo, hi)`: antiderivative
/// difference using whole-period sums, so distant windows stay cheap.
fn periodic_integral(
    anchor: &Rational,
    cell: &PeriodicCell,
    lo: &Rational,
    hi: &Rational,
) -> Rational {
    let prim = |x: &Rational| -> Rational {
        let off = x - anchor;
        let k = floor_div(&off, cell.period());
        let rem = &off - cell.period() * Rational::from_integer(k.clone());
        Rational::from_integer(k) * cell.integral() + cell.integral_prefix(&rem)
    };
    prim(hi) - prim(lo)
}

/// Convenience free functions mirroring the library verbs.
pub fn make_constant(c: Rational) -> StepFn {
    StepFn::constant(c)
}

pub fn make_indicator(intervals: &[(Rational, Rational)]) -> Result<StepFn, StepFnError> {
    StepFn::indicator(intervals)
}

pub fn make_periodic(cell: PeriodicCell, anchor: Rational) -> StepFn {
    StepFn::periodic(cell, anchor)
}

/// The square wave with period 2: value 1 on `[0, 1)`, 0 on `[1, 2)`,
/// repeated over the whole line. A recurring example and test subject.
pub fn square_wave() -> StepFn {
    let cell = PeriodicCell::new(
        rat_int(2),
        vec![rat_int(0), rat_int(1)],
        vec![rat_int(1), rat_int(0)],
    )
    .expect("static cell");
    StepFn::periodic(cell, rat_int(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn chi01() -> StepFn {
        StepFn::indicator(&[(rat_int(0), rat_int(1))]).unwrap()
    }

    #[test]
    fn constants_evaluate_everywhere() {
        let c = StepFn::constant(rat(-3, 2));
        assert_eq!(c.eval(&rat(7, 3)), rat(-3, 2));
        assert_eq!(StepFn::zero().ess_sup_norm(), rat_int(0));
        assert_eq!(StepFn::one().eval(&rat_int(1_000_000)), rat_int(1));
    }

    #[test]
    fn indicator_evaluation_and_support() {
        let u = chi01();
        assert_eq!(u.eval(&rat(1, 2)), rat_int(1));
        assert_eq!(u.eval(&rat(3, 2)), rat_int(0));
        // Half-open pieces: breakpoints take the right piece's value.
        assert_eq!(u.eval(&rat_int(0)), rat_int(1));
        assert_eq!(u.eval(&rat_int(1)), rat_int(0));
        assert!(u.has_compact_support());

        let two = StepFn::indicator(&[
            (rat_int(0), rat_int(1)),
            (rat_int(2), rat_int(3)),
        ])
        .unwrap();
        assert_eq!(two.ess_sup_norm(), rat_int(1));
        assert!(two.has_compact_support());
        assert_eq!(two.eval(&rat(3, 2)), rat_int(0));

        assert!(StepFn::indicator(&[]).unwrap().eq_ae(&StepFn::zero()).unwrap());
        assert!(StepFn::indicator(&[
            (rat_int(0), rat_int(2)),
            (rat_int(1), rat_int(3))
        ])
        .is_err());
    }

    #[test]
    fn square_wave_matches_its_cell() {
        let u = square_wave();
        assert_eq!(u.eval(&rat(1, 2)), rat_int(1));
        assert_eq!(u.eval(&rat(3, 2)), rat_int(0));
        // 100 mod 2 = 0, so the wave is 1 there.
        assert_eq!(u.eval(&rat_int(100)), rat_int(1));
        assert_eq!(u.eval(&rat_int(-1)), rat_int(0));
        assert_eq!(u.ess_sup_norm(), rat_int(1));
        assert!(!u.has_compact_support());
    }

    #[test]
    fn periodic_with_anchor_equals_translated_wave() {
        let cell = PeriodicCell::new(
            rat_int(2),
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        )
        .unwrap();
        let anchored = StepFn::periodic(cell, rat_int(1));
        let translated = square_wave().translate(&rat_int(1));
        assert!(anchored.eq_ae(&translated).unwrap());
        let const_cell = PeriodicCell::constant(rat_int(5));
        assert!(StepFn::periodic(const_cell, rat(7, 2))
            .eq_ae(&StepFn::constant(rat_int(5)))
            .unwrap());
    }

    #[test]
    fn translation_shifts_the_graph() {
        let u = chi01();
        let t = u.translate(&rat_int(1));
        let expected = StepFn::indicator(&[(rat_int(1), rat_int(2))]).unwrap();
        assert_eq!(t, expected);
        assert!(u.translate(&rat_int(0)).eq_ae(&u).unwrap());
        let w = square_wave();
        assert!(w.translate(&rat_int(2)).eq_ae(&w).unwrap());
        assert!(!w.translate(&rat_int(1)).eq_ae(&w).unwrap());
    }

    #[test]
    fn shifted_wave_is_one_minus_wave() {
        let w = square_wave();
        let shifted = w.translate(&rat_int(1));
        let complement = StepFn::one().sub(&w).unwrap();
        assert!(shifted.eq_ae(&complement).unwrap());
        assert!(w.join(&shifted).unwrap().eq_ae(&StepFn::one()).unwrap());
        assert!(w.meet(&shifted).unwrap().eq_ae(&StepFn::zero()).unwrap());
    }

    #[test]
    fn join_meet_with_zero() {
        let w = square_wave();
        assert!(w.join(&StepFn::zero()).unwrap().eq_ae(&w).unwrap());
        assert!(w
            .meet(&StepFn::zero())
            .unwrap()
            .eq_ae(&StepFn::zero())
            .unwrap());
    }

    #[test]
    fn scaling_and_norm() {
        let u = chi01().scale(&rat_int(-3));
        assert_eq!(u.ess_sup_norm(), rat_int(3));
        assert_eq!(u.eval(&rat(1, 2)), rat_int(-3));
        assert_eq!(square_wave().ess_sup_norm(), rat_int(1));
    }

    #[test]
    fn composition_on_values() {
        let w = square_wave();
        let squared = w.map_values(|v| Ok(v * v)).unwrap();
        assert!(squared.eq_ae(&w).unwrap());
        let doubled = chi01().map_values(|v| Ok(v * rat_int(2))).unwrap();
        assert!(doubled.eq_ae(&chi01().scale(&rat_int(2))).unwrap());
        let id = w.map_values(|v| Ok(v.clone())).unwrap();
        assert!(id.eq_ae(&w).unwrap());
        let err = w.map_values(|v| {
            if v.is_zero() {
                Err(StepFnError::MapUndefined {
                    value: v.to_string(),
                })
            } else {
                Ok(v.clone())
            }
        });
        assert!(err.is_err());
    }

    #[test]
    fn equality_is_decided_over_aligned_periods() {
        let w = square_wave();
        assert!(w.eq_ae(&w).unwrap());
        let re_anchored = StepFn::periodic(
            PeriodicCell::new(
                rat_int(2),
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(1), rat_int(0)],
            )
            .unwrap(),
            rat_int(2),
        );
        assert!(w.eq_ae(&re_anchored).unwrap());
        assert!(!chi01().eq_ae(&StepFn::zero()).unwrap());
    }

    #[test]
    fn period_guard_trips_on_huge_coprime_periods() {
        let p1 = rat_int((1 << 40) + 1);
        let p2 = rat_int(1 << 40);
        let cell = |p: Rational| {
            PeriodicCell::new(
                p.clone(),
                vec![rat_int(0), &p / rat_int(2)],
                vec![rat_int(0), rat_int(1)],
            )
            .unwrap()
        };
        let u = StepFn::periodic(cell(p1), rat_int(0));
        let v = StepFn::periodic(cell(p2), rat_int(0));
        match u.add(&v) {
            Err(StepFnError::PeriodExplosion { .. }) => {}
            other => panic!("expected period explosion, got {other:?}"),
        }
    }

    #[test]
    fn restriction_splits_the_identity() {
        let one = StepFn::one();
        let right = one.restrict_right().unwrap();
        let left = one.restrict_left().unwrap();
        assert_eq!(right.eval(&rat_int(0)), rat_int(1));
        assert_eq!(right.eval(&rat(-1, 2)), rat_int(0));
        assert_eq!(left.eval(&rat(-1, 2)), rat_int(1));
        assert_eq!(left.eval(&rat_int(0)), rat_int(0));
        let sum = right.add(&left).unwrap();
        assert!(sum.eq_ae(&one).unwrap());

        let w = square_wave().translate(&rat(1, 2));
        let sum = w
            .restrict_right()
            .unwrap()
            .add(&w.restrict_left().unwrap())
            .unwrap();
        assert!(sum.eq_ae(&w).unwrap());
    }

    #[test]
    fn prolongation_identity() {
        // indicator of [0,1) prolonged with period 1 is the right ray.
        let u = chi01();
        let pro = u.prolong_periodic(&rat_int(1)).unwrap();
        let ray = StepFn::from_parts(
            PeriodicCell::constant(rat_int(0)),
            rat_int(0),
            vec![],
            rat_int(0),
            PeriodicCell::constant(rat_int(1)),
        )
        .unwrap();
        assert!(pro.eq_ae(&ray).unwrap());
        let lhs = u.add(&pro.translate(&rat_int(1))).unwrap();
        assert!(lhs.eq_ae(&pro).unwrap());

        // Signed two-piece example with period 2.
        let v = StepFn::indicator(&[(rat_int(0), rat_int(1))])
            .unwrap()
            .sub(&StepFn::indicator(&[(rat_int(1), rat_int(2))]).unwrap())
            .unwrap();
        let pro = v.prolong_periodic(&rat_int(2)).unwrap();
        assert_eq!(pro.eval(&rat(-1, 2)), rat_int(0));
        assert_eq!(pro.eval(&rat(1, 2)), rat_int(1));
        assert_eq!(pro.eval(&rat(3, 2)), rat_int(-1));
        assert_eq!(pro.eval(&rat(5, 2)), rat_int(1));
        let lhs = v.add(&pro.translate(&rat_int(2))).unwrap();
        assert!(lhs.eq_ae(&pro).unwrap());

        // Zero prolongs to zero.
        assert!(StepFn::zero()
            .prolong_periodic(&rat_int(3))
            .unwrap()
            .eq_ae(&StepFn::zero())
            .unwrap());

        // Support outside the window is rejected.
        assert!(chi01().prolong_periodic(&rat(1, 2)).is_err());
        assert!(square_wave().prolong_periodic(&rat_int(2)).is_err());
    }

    #[test]
    fn reflection_is_an_involution_on_functions() {
        let w = square_wave().translate(&rat(1, 3));
        let rr = w.reflect().reflect();
        assert!(rr.eq_ae(&w).unwrap());
        let u = StepFn::indicator(&[(rat_int(1), rat_int(2))]).unwrap();
        let r = u.reflect();
        let expected = StepFn::indicator(&[(rat_int(-2), rat_int(-1))]).unwrap();
        assert!(r.eq_ae(&expected).unwrap());
    }

    #[test]
    fn integral_windows_are_exact() {
        let w = square_wave();
        assert_eq!(w.integral_window(&rat_int(0), &rat_int(3)), rat_int(2));
        assert_eq!(
            w.integral_window(&rat_int(0), &rat_int(1_000_000)),
            rat_int(500_000)
        );
        assert_eq!(w.integral_window(&rat(-1, 2), &rat(1, 2)), rat(1, 2));
        let u = chi01();
        assert_eq!(u.integral_window(&rat_int(-5), &rat_int(5)), rat_int(1));
    }

    #[test]
    fn disjoint_support_detection() {
        let a = chi01();
        let b = StepFn::indicator(&[(rat_int(2), rat_int(3))]).unwrap();
        assert!(a.has_disjoint_support(&b).unwrap());
        assert!(!a.has_disjoint_support(&a).unwrap());
        let l = StepFn::one().restrict_left().unwrap();
        let r = StepFn::one().restrict_right().unwrap();
        assert!(l.has_disjoint_support(&r).unwrap());
    }
}
