//! One period of a tail: a step function on `[0, period)`.

use num_traits::{Signed, Zero};

use super::StepFnError;
use crate::rational::{mod_pos, rat_int, Rational};

/// A single period of a periodic tail: strictly increasing breakpoints in
/// `[0, period)` starting at 0, one value per half-open piece.
///
/// Cells are kept merged (no two adjacent pieces share a value, without
/// wrap-around merging) and a constant cell is normalized to period 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicCell {
    period: Rational,
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

impl PeriodicCell {
    /// Build a cell from raw pieces. `breakpoints[i]` starts the piece with
    /// `values[i]`; the last piece ends at `period`.
    pub fn new(
        period: Rational,
        breakpoints: Vec<Rational>,
        values: Vec<Rational>,
    ) -> Result<Self, StepFnError> {
        if !period.is_positive() {
            return Err(StepFnError::NonPositivePeriod {
                period: period.to_string(),
            });
        }
        if breakpoints.is_empty()
            || breakpoints.len() != values.len()
            || !breakpoints[0].is_zero()
        {
            return Err(StepFnError::MalformedCell);
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(StepFnError::MalformedCell);
            }
        }
        if *breakpoints.last().unwrap() >= period {
            return Err(StepFnError::MalformedCell);
        }
        Ok(Self {
            period,
            breakpoints,
            values,
        }
        .merged())
    }

    /// The constant cell, normalized to period 1.
    pub fn constant(value: Rational) -> Self {
        Self {
            period: rat_int(1),
            breakpoints: vec![Rational::zero()],
            values: vec![value],
        }
    }

    fn merged(mut self) -> Self {
        let mut bps = Vec::with_capacity(self.breakpoints.len());
        let mut vals: Vec<Rational> = Vec::with_capacity(self.values.len());
        for (b, v) in self.breakpoints.drain(..).zip(self.values.drain(..)) {
            if vals.last() == Some(&v) {
                continue;
            }
            bps.push(b);
            vals.push(v);
        }
        if vals.len() == 1 {
            return Self::constant(vals.pop().unwrap());
        }
        Self {
            period: self.period,
            breakpoints: bps,
            values: vals,
        }
    }

    pub fn period(&self) -> &Rational {
        &self.period
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Pieces as `(start, end, value)`, the last one ending at the period.
    pub fn pieces(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> {
        self.breakpoints.iter().enumerate().map(move |(i, b)| {
            let end = self.breakpoints.get(i + 1).unwrap_or(&self.period);
            (b, end, &self.values[i])
        })
    }

    /// Value at an offset in `[0, period)`.
    pub fn value_at(&self, offset: &Rational) -> &Rational {
        debug_assert!(!offset.is_negative() && offset < &self.period);
        let idx = self.breakpoints.partition_point(|b| b <= offset);
        &self.values[idx - 1]
    }

    /// Exact integral over one period.
    pub fn integral(&self) -> Rational {
        self.pieces()
            .map(|(b, e, v)| v * (e - b))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// Exact integral over `[0, s]` for `0 <= s <= period`.
    pub fn integral_prefix(&self, s: &Rational) -> Rational {
        debug_assert!(!s.is_negative() && s <= &self.period);
        let mut acc = Rational::zero();
        for (b, e, v) in self.pieces() {
            if s <= b {
                break;
            }
            let end = if s < e { s } else { e };
            acc += v * (end - b);
        }
        acc
    }

    /// `Some(value)` when the cell is a single piece (hence a.e.-constant).
    pub fn constant_value(&self) -> Option<&Rational> {
        if self.values.len() == 1 {
            Some(&self.values[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> Rational {
        self.values
            .iter()
            .map(|v| v.abs())
            .max()
            .expect("cell has at least one piece")
    }

    /// The cell `t -> self((t + delta) mod period)`; used to move a tail
    /// anchor without changing the function it tiles.
    pub fn rotated(&self, delta: &Rational) -> Self {
        if self.values.len() == 1 {
            return self.clone();
        }
        let mut positions: Vec<Rational> = self
            .breakpoints
            .iter()
            .map(|b| mod_pos(&(b - delta), &self.period))
            .collect();
        positions.push(Rational::zero());
        positions.sort();
        positions.dedup();
        let values = positions
            .iter()
            .map(|q| self.value_at(&mod_pos(&(q + delta), &self.period)).clone())
            .collect();
        Self {
            period: self.period.clone(),
            breakpoints: positions,
            values,
        }
        .merged()
    }

    /// The cell of the reflected function: tiles `x -> f(-x)` when `self`
    /// tiles `f` on the opposite side.
    pub fn reflected(&self) -> Self {
        if self.values.len() == 1 {
            return self.clone();
        }
        let mut bps = Vec::with_capacity(self.breakpoints.len());
        let mut vals = Vec::with_capacity(self.values.len());
        bps.push(Rational::zero());
        for i in (0..self.values.len()).rev() {
            vals.push(self.values[i].clone());
            if i > 0 {
                bps.push(&self.period - &self.breakpoints[i]);
            }
        }
        Self {
            period: self.period.clone(),
            breakpoints: bps,
            values: vals,
        }
        .merged()
    }

    /// Map every value through `f`; `None` marks an undefined point.
    pub fn map_values(
        &self,
        mut f: impl FnMut(&Rational) -> Result<Rational, StepFnError>,
    ) -> Result<Self, StepFnError> {
        let values = self
            .values
            .iter()
            .map(&mut f)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            period: self.period.clone(),
            breakpoints: self.breakpoints.clone(),
            values,
        }
        .merged())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn square_cell() -> PeriodicCell {
        PeriodicCell::new(
            rat_int(2),
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        )
        .unwrap()
    }

    #[test]
    fn constant_cells_normalize_to_period_one() {
        let c = PeriodicCell::new(rat_int(5), vec![rat_int(0)], vec![rat_int(7)]).unwrap();
        assert_eq!(c, PeriodicCell::constant(rat_int(7)));
        let merged = PeriodicCell::new(
            rat_int(2),
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(3), rat_int(3)],
        )
        .unwrap();
        assert_eq!(merged, PeriodicCell::constant(rat_int(3)));
    }

    #[test]
    fn rejects_malformed_cells() {
        assert!(PeriodicCell::new(rat_int(0), vec![rat_int(0)], vec![rat_int(1)]).is_err());
        assert!(PeriodicCell::new(rat_int(1), vec![rat(1, 2)], vec![rat_int(1)]).is_err());
        assert!(PeriodicCell::new(
            rat_int(1),
            vec![rat_int(0), rat_int(2)],
            vec![rat_int(0), rat_int(1)]
        )
        .is_err());
    }

    #[test]
    fn value_and_integral() {
        let c = square_cell();
        assert_eq!(*c.value_at(&rat(1, 2)), rat_int(1));
        assert_eq!(*c.value_at(&rat(3, 2)), rat_int(0));
        assert_eq!(c.integral(), rat_int(1));
        assert_eq!(c.integral_prefix(&rat(1, 2)), rat(1, 2));
        assert_eq!(c.integral_prefix(&rat(3, 2)), rat_int(1));
        assert_eq!(c.integral_prefix(&rat_int(2)), rat_int(1));
    }

    #[test]
    fn rotation_preserves_the_tiled_function() {
        let c = square_cell();
        let r = c.rotated(&rat(1, 2));
        // r(t) = c((t + 1/2) mod 2)
        assert_eq!(*r.value_at(&rat_int(0)), rat_int(1));
        assert_eq!(*r.value_at(&rat(1, 4)), rat_int(1));
        assert_eq!(*r.value_at(&rat(1, 2)), rat_int(0));
        assert_eq!(*r.value_at(&rat(3, 2)), rat_int(1));
        assert_eq!(r.rotated(&rat(-1, 2)), c);
    }

    #[test]
    fn reflection_reverses_pieces() {
        let c = PeriodicCell::new(
            rat_int(3),
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(5), rat_int(9)],
        )
        .unwrap();
        let r = c.reflected();
        // r(t) agrees with c(period - t) in the interior of each piece.
        assert_eq!(*r.value_at(&rat(1, 2)), rat_int(9));
        assert_eq!(*r.value_at(&rat(5, 2)), rat_int(5));
        assert_eq!(r.reflected(), c);
    }
}
