//! Decidable semantics of right (and left) Lebesgue-ultrafilters on the
//! Boolean algebra of eventually periodic definable sets.
//!
//! An ultrafilter tag carries no choice data: the module only reports
//! consequences that every ultrafilter of the given kind is forced to agree
//! on. A right Lebesgue-ultrafilter contains every ray `(a, inf)` and every
//! co-null set, so a definable set whose right tail is a.e.-full is forced
//! in, one whose right tail is a.e.-empty is forced out, and anything else
//! genuinely depends on the choice of ultrafilter.
//!
//! The notion of a "bilateral" ultrafilter (containing every complement of
//! a bounded interval) collapses: such a filter must already contain
//! `(0, inf)` or `(-inf, 0)`, which makes it a right or a left ultrafilter.
//! No bilateral tag exists here for that reason.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;
use crate::stepfn::{StepFn, StepFnError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UltraError {
    #[error("definable sets are 0/1-valued; found value {value}")]
    NonIndicator { value: String },
    #[error(transparent)]
    Step(#[from] StepFnError),
}

/// Which kind of ray the ultrafilter is required to contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Right,
    Left,
}

/// An opaque name for an arbitrary Lebesgue-ultrafilter of the given side.
/// Deliberately without computational content: existence is a choice
/// principle, so every verdict computed here must be choice-independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UltrafilterTag {
    pub side: Side,
    pub id: u64,
}

impl UltrafilterTag {
    pub fn right() -> Self {
        Self {
            side: Side::Right,
            id: 0,
        }
    }

    pub fn left() -> Self {
        Self {
            side: Side::Left,
            id: 0,
        }
    }

    pub fn with_id(side: Side, id: u64) -> Self {
        Self { side, id }
    }
}

/// Membership outcome forced by the ultrafilter axioms alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UltraVerdict {
    ForcedIn,
    ForcedOut,
    Undetermined,
}

/// A definable subset of the line, represented by its 0/1 indicator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinableSet(StepFn);

impl DefinableSet {
    pub fn new(indicator: StepFn) -> Result<Self, UltraError> {
        for v in indicator.attained_values() {
            if !v.is_zero() && !v.is_one() {
                return Err(UltraError::NonIndicator {
                    value: v.to_string(),
                });
            }
        }
        Ok(Self(indicator))
    }

    /// The whole line.
    pub fn full() -> Self {
        Self(StepFn::one())
    }

    /// The empty set.
    pub fn empty() -> Self {
        Self(StepFn::zero())
    }

    pub fn indicator(&self) -> &StepFn {
        &self.0
    }

    pub fn into_indicator(self) -> StepFn {
        self.0
    }

    pub fn complement(&self) -> Self {
        Self(
            self.0
                .map_values(|v| Ok(Rational::one() - v))
                .expect("complement is total"),
        )
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, UltraError> {
        Ok(Self(self.0.meet(&other.0)?))
    }

    pub fn union(&self, other: &Self) -> Result<Self, UltraError> {
        Ok(Self(self.0.join(&other.0)?))
    }
}

/// Membership verdict of a definable set in an arbitrary ultrafilter with
/// the given tag. Only the tail on the tag's side matters: the set is
/// forced in iff it contains a ray minus a null set, forced out iff its
/// complement does, and undetermined when the tail carries both values on
/// positive measure.
pub fn membership(set: &DefinableSet, tag: &UltrafilterTag) -> UltraVerdict {
    let cell = match tag.side {
        Side::Right => set.indicator().right_tail(),
        Side::Left => set.indicator().left_tail(),
    };
    match cell.constant_value() {
        Some(v) if v.is_one() => UltraVerdict::ForcedIn,
        Some(_) => UltraVerdict::ForcedOut,
        None => UltraVerdict::Undetermined,
    }
}

/// Outcome of an ultralimit: either forced to a single value for every
/// ultrafilter of the side, or a finite set of possible values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ultralimit {
    Determined(Rational),
    /// The exact set of values `lim u` can take across all ultrafilters of
    /// the given side: the tail values attained on positive measure.
    Undetermined(Vec<Rational>),
}

/// The ultralimit of `u` along an arbitrary ultrafilter with this tag.
///
/// `Determined(l)` holds iff for every `eps > 0` the set
/// `{u in B_eps(l)}` is forced in; on this class the for-all-eps quantifier
/// reduces to a finite check, namely that the tail cell is a.e.-constant.
pub fn ultralimit(u: &StepFn, tag: &UltrafilterTag) -> Ultralimit {
    let cell = match tag.side {
        Side::Right => u.right_tail(),
        Side::Left => u.left_tail(),
    };
    let mut candidates: Vec<Rational> = cell.values().to_vec();
    candidates.sort();
    candidates.dedup();
    if candidates.len() == 1 {
        Ultralimit::Determined(candidates.pop().unwrap())
    } else {
        Ultralimit::Undetermined(candidates)
    }
}

/// The definable set `{x : |u(x) - center| < radius}`.
pub fn ball_preimage(u: &StepFn, center: &Rational, radius: &Rational) -> DefinableSet {
    let f = u
        .map_values(|v| {
            Ok(if (v - center).abs() < *radius {
                Rational::one()
            } else {
                Rational::zero()
            })
        })
        .expect("threshold map is total");
    DefinableSet(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::stepfn::{square_wave, PeriodicCell, StepFn};

    fn ray_from(a: i64) -> DefinableSet {
        // (a, inf) up to a null set: indicator 1 on [a, inf).
        DefinableSet::new(
            StepFn::from_parts(
                PeriodicCell::constant(rat_int(0)),
                rat_int(a),
                vec![],
                rat_int(a),
                PeriodicCell::constant(rat_int(1)),
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn rays_are_forced_in_on_their_side() {
        let r = ray_from(5);
        assert_eq!(membership(&r, &UltrafilterTag::right()), UltraVerdict::ForcedIn);
        assert_eq!(membership(&r, &UltrafilterTag::left()), UltraVerdict::ForcedOut);
    }

    #[test]
    fn bounded_sets_are_forced_out() {
        let s = DefinableSet::new(
            StepFn::indicator(&[(rat_int(0), rat_int(1))]).unwrap(),
        )
        .unwrap();
        assert_eq!(membership(&s, &UltrafilterTag::right()), UltraVerdict::ForcedOut);
        assert_eq!(
            membership(&s.complement(), &UltrafilterTag::right()),
            UltraVerdict::ForcedIn
        );
    }

    #[test]
    fn alternating_union_is_undetermined() {
        // Union of [k, k+1) over odd k: the square wave shifted by 1.
        let s = DefinableSet::new(square_wave().translate(&rat_int(1))).unwrap();
        assert_eq!(
            membership(&s, &UltrafilterTag::right()),
            UltraVerdict::Undetermined
        );
        assert_eq!(
            membership(&s.complement(), &UltrafilterTag::right()),
            UltraVerdict::Undetermined
        );
    }

    #[test]
    fn non_indicator_is_rejected() {
        assert!(DefinableSet::new(StepFn::constant(rat(1, 2))).is_err());
    }

    #[test]
    fn ultralimit_of_constants_and_waves() {
        let c = StepFn::constant(rat(-3, 2));
        assert_eq!(
            ultralimit(&c, &UltrafilterTag::right()),
            Ultralimit::Determined(rat(-3, 2))
        );
        assert_eq!(
            ultralimit(&square_wave(), &UltrafilterTag::right()),
            Ultralimit::Undetermined(vec![rat_int(0), rat_int(1)])
        );
    }

    #[test]
    fn ultralimit_depends_only_on_the_tail() {
        // Wild core, constant right tail 3.
        let u = StepFn::from_parts(
            PeriodicCell::constant(rat_int(-9)),
            rat_int(-2),
            vec![(rat_int(-2), rat_int(17)), (rat_int(0), rat(1, 3))],
            rat_int(4),
            PeriodicCell::constant(rat_int(3)),
        )
        .unwrap();
        assert_eq!(
            ultralimit(&u, &UltrafilterTag::right()),
            Ultralimit::Determined(rat_int(3))
        );
        assert_eq!(
            ultralimit(&u, &UltrafilterTag::left()),
            Ultralimit::Determined(rat_int(-9))
        );
    }

    #[test]
    fn square_wave_witnesses_translation_sensitivity() {
        // The square wave and its unit translate have the same candidate
        // set {0, 1}; the complement constraint keeps both candidate sets
        // closed under c -> 1 - c, and neither limit is determined. This
        // is exactly what blocks translation invariance for raw
        // ultralimits: a common value would have to be 1/2, which is not
        // a candidate.
        let w = square_wave();
        let shifted = w.translate(&rat_int(1));
        assert!(shifted
            .eq_ae(&StepFn::one().sub(&w).unwrap())
            .unwrap());
        let tag = UltrafilterTag::right();
        let zero_one = vec![rat_int(0), rat_int(1)];
        for u in [&w, &shifted] {
            match ultralimit(u, &tag) {
                Ultralimit::Undetermined(cs) => {
                    assert_eq!(cs, zero_one);
                    for c in &cs {
                        assert!(cs.contains(&(rat_int(1) - c)));
                    }
                }
                Ultralimit::Determined(l) => {
                    panic!("wave ultralimit must stay undetermined, got {l}")
                }
            }
        }
        assert!(!zero_one.contains(&rat(1, 2)));
    }

    #[test]
    fn ball_preimage_matches_the_finite_reduction() {
        let w = square_wave();
        // Small radius around 1: picks out exactly the value-1 pieces.
        let s = ball_preimage(&w, &rat_int(1), &rat(1, 4));
        assert_eq!(membership(&s, &UltrafilterTag::right()), UltraVerdict::Undetermined);
        // Radius large enough to cover both values: the whole line.
        let all = ball_preimage(&w, &rat(1, 2), &rat_int(2));
        assert_eq!(membership(&all, &UltrafilterTag::right()), UltraVerdict::ForcedIn);
        // A center far from both values: empty.
        let none = ball_preimage(&w, &rat_int(9), &rat(1, 4));
        assert_eq!(membership(&none, &UltrafilterTag::right()), UltraVerdict::ForcedOut);
    }
}
