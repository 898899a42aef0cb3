//! Seeded, reproducible generation of step functions.
//!
//! Every sample is a pure function of `(seed, index)`: the RNG for sample
//! `index` is an independent stream of one ChaCha instance, so parallel
//! execution order cannot change what gets generated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{rat_int, Rational};
use crate::stepfn::{PeriodicCell, StepFn};

/// Bounds for the generator plus the run length of a suite.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub samples: u32,
    pub max_breakpoints: u32,
    pub max_period_denominator: u32,
    pub value_range: i64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 200,
            max_breakpoints: 5,
            max_period_denominator: 4,
            value_range: 8,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.samples == 0 {
            return Err("samples must be at least 1".into());
        }
        if self.max_breakpoints == 0 || self.max_period_denominator == 0 {
            return Err("generation bounds must be positive".into());
        }
        if self.value_range <= 0 {
            return Err("value_range must be positive".into());
        }
        Ok(())
    }
}

/// The subclasses the generator cycles through with fixed proportions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFnClass {
    Constant,
    Indicator,
    Periodic,
    MixedTail,
    CompactSupport,
}

const CLASS_CYCLE: [StepFnClass; 8] = [
    StepFnClass::Constant,
    StepFnClass::Indicator,
    StepFnClass::Periodic,
    StepFnClass::MixedTail,
    StepFnClass::CompactSupport,
    StepFnClass::MixedTail,
    StepFnClass::Periodic,
    StepFnClass::MixedTail,
];

/// Independent RNG for one sample.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Deterministic sample: a pure function of `(cfg.seed, index)`.
pub fn gen_stepfn(cfg: &GenConfig, index: u64) -> StepFn {
    let mut rng = rng_for(cfg.seed, index);
    gen_in_class(cfg, &mut rng, CLASS_CYCLE[(index % 8) as usize])
}

/// Deterministic sample from a chosen subclass.
pub fn gen_stepfn_class(cfg: &GenConfig, index: u64, class: StepFnClass) -> StepFn {
    let mut rng = rng_for(cfg.seed, index);
    gen_in_class(cfg, &mut rng, class)
}

pub(crate) fn gen_in_class(cfg: &GenConfig, rng: &mut ChaCha8Rng, class: StepFnClass) -> StepFn {
    match class {
        StepFnClass::Constant => StepFn::constant(gen_rat(cfg, rng)),
        StepFnClass::Indicator => gen_indicator(cfg, rng),
        StepFnClass::Periodic => {
            let cell = gen_cell(cfg, rng, None);
            let anchor = gen_rat(cfg, rng);
            StepFn::periodic(cell, anchor)
        }
        StepFnClass::MixedTail => gen_mixed(cfg, rng),
        StepFnClass::CompactSupport => gen_compact(cfg, rng).0,
    }
}

/// A rational with numerator in `[-value_range, value_range]` and small
/// denominator.
pub(crate) fn gen_rat(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(-cfg.value_range..=cfg.value_range);
    let den = rng.gen_range(1..=cfg.max_period_denominator as i64);
    Rational::new(num.into(), den.into())
}

/// A small positive rational usable as a period or window length.
pub(crate) fn gen_period(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(1..=3i64);
    let den = rng.gen_range(1..=cfg.max_period_denominator as i64);
    Rational::new(num.into(), den.into())
}

/// `count` strictly increasing points chosen on a fixed grid over
/// `[lo, lo + len)`, always starting at `lo`.
fn gen_grid_points(
    rng: &mut ChaCha8Rng,
    lo: &Rational,
    len: &Rational,
    count: usize,
) -> Vec<Rational> {
    let slots = (4 * count.max(1)) as i64;
    let mut idx: Vec<i64> = Vec::new();
    idx.push(0);
    while idx.len() < count {
        let cand = rng.gen_range(1..slots);
        if !idx.contains(&cand) {
            idx.push(cand);
        }
    }
    idx.sort_unstable();
    idx.into_iter()
        .map(|i| lo + len * Rational::new(i.into(), slots.into()))
        .collect()
}

/// Random cell; values come from `values` when given, otherwise from
/// `gen_rat`.
pub(crate) fn gen_cell(
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
    values: Option<&[Rational]>,
) -> PeriodicCell {
    let period = gen_period(cfg, rng);
    let count = rng.gen_range(1..=cfg.max_breakpoints as usize);
    let bps = gen_grid_points(rng, &Rational::from_integer(0.into()), &period, count);
    let vals = (0..count)
        .map(|_| match values {
            Some(vs) => vs[rng.gen_range(0..vs.len())].clone(),
            None => gen_rat(cfg, rng),
        })
        .collect();
    PeriodicCell::new(period, bps, vals).expect("generated cell is well-formed")
}

fn gen_indicator(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> StepFn {
    let pairs = rng.gen_range(1..=3usize);
    let lo = gen_rat(cfg, rng);
    let len = gen_period(cfg, rng) * rat_int(4);
    let pts = gen_grid_points(rng, &lo, &len, 2 * pairs);
    let ivs: Vec<(Rational, Rational)> = pts
        .chunks(2)
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect();
    StepFn::indicator(&ivs).expect("grid intervals are disjoint")
}

fn gen_core_window(
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
    start: &Rational,
    len: &Rational,
    values: Option<&[Rational]>,
) -> Vec<(Rational, Rational)> {
    let count = rng.gen_range(1..=cfg.max_breakpoints as usize);
    let bps = gen_grid_points(rng, start, len, count);
    bps.into_iter()
        .map(|b| {
            let v = match values {
                Some(vs) => vs[rng.gen_range(0..vs.len())].clone(),
                None => gen_rat(cfg, rng),
            };
            (b, v)
        })
        .collect()
}

fn gen_mixed(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> StepFn {
    let left = gen_cell(cfg, rng, None);
    let right = gen_cell(cfg, rng, None);
    let start = gen_rat(cfg, rng);
    let len = gen_period(cfg, rng) * rat_int(2);
    let end = &start + &len;
    let core = gen_core_window(cfg, rng, &start, &len, None);
    StepFn::from_parts(left, start, core, end, right).expect("generated core is well-formed")
}

/// Compact-support sample whose support sits inside `(0, n)` up to a null
/// set; returns the prolongation window `n` alongside.
pub(crate) fn gen_compact(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> (StepFn, Rational) {
    let zero = PeriodicCell::constant(Rational::from_integer(0.into()));
    let len = gen_period(cfg, rng) * rat_int(rng.gen_range(1..=3));
    let core = gen_core_window(cfg, rng, &Rational::from_integer(0.into()), &len, None);
    let u = StepFn::from_parts(zero.clone(), Rational::from_integer(0.into()), core, len.clone(), zero)
        .expect("generated core is well-formed");
    let extra = rat_int(rng.gen_range(0..=2));
    (u, len + extra)
}

/// Sample whose tail on the given side is an a.e.-constant `l`; returns `l`.
pub(crate) fn gen_with_constant_tail(
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
    right_side: bool,
) -> (StepFn, Rational) {
    let l = gen_rat(cfg, rng);
    let constant = PeriodicCell::constant(l.clone());
    let other = gen_cell(cfg, rng, None);
    let start = gen_rat(cfg, rng);
    let len = gen_period(cfg, rng);
    let end = &start + &len;
    let core = gen_core_window(cfg, rng, &start, &len, None);
    let (left, right) = if right_side {
        (other, constant)
    } else {
        (constant, other)
    };
    let u = StepFn::from_parts(left, start, core, end, right).expect("well-formed");
    (u, l)
}

/// 0/1-valued sample (an indicator of a definable set).
pub(crate) fn gen_set(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> StepFn {
    let zero_one = [rat_int(0), rat_int(1)];
    match rng.gen_range(0..3) {
        0 => gen_indicator(cfg, rng),
        1 => {
            let cell = gen_cell(cfg, rng, Some(&zero_one));
            let anchor = gen_rat(cfg, rng);
            StepFn::periodic(cell, anchor)
        }
        _ => {
            let left = gen_cell(cfg, rng, Some(&zero_one));
            let right = gen_cell(cfg, rng, Some(&zero_one));
            let start = gen_rat(cfg, rng);
            let len = gen_period(cfg, rng);
            let end = &start + &len;
            let core = gen_core_window(cfg, rng, &start, &len, Some(&zero_one));
            StepFn::from_parts(left, start, core, end, right).expect("well-formed")
        }
    }
}

/// Pair with pointwise disjoint supports.
pub(crate) fn gen_disjoint_pair(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> (StepFn, StepFn) {
    if rng.gen_bool(0.5) {
        // One side lives on the negative axis, the other on the positive.
        let a = gen_in_class(cfg, rng, StepFnClass::MixedTail)
            .restrict_left()
            .expect("restriction in bounds");
        let b = gen_in_class(cfg, rng, StepFnClass::MixedTail)
            .restrict_right()
            .expect("restriction in bounds");
        (a, b)
    } else {
        // Two compact bumps in disjoint windows.
        let (a, na) = gen_compact(cfg, rng);
        let (b, _) = gen_compact(cfg, rng);
        (a, b.translate(&(na + rat_int(1))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig {
            seed: 1,
            ..GenConfig::default()
        };
        let a = gen_stepfn(&cfg, 0);
        let b = gen_stepfn(&cfg, 0);
        assert_eq!(a, b);
        // Different indices give different streams.
        let c = gen_stepfn(&cfg, 1);
        assert!(a != c || a.eq_ae(&c).unwrap());
    }

    #[test]
    fn subclasses_have_their_shape() {
        let cfg = GenConfig::default();
        for i in 0..24 {
            let u = gen_stepfn_class(&cfg, i, StepFnClass::CompactSupport);
            assert!(u.has_compact_support());
            let p = gen_stepfn_class(&cfg, i, StepFnClass::Periodic);
            assert_eq!(p.core_start(), p.core_end());
            assert_eq!(p.left_tail(), p.right_tail());
        }
    }

    #[test]
    fn compact_samples_fit_their_window() {
        let cfg = GenConfig::default();
        for i in 0..32 {
            let mut rng = rng_for(cfg.seed, i);
            let (u, n) = gen_compact(&cfg, &mut rng);
            assert!(u.prolong_periodic(&n).is_ok());
        }
    }

    #[test]
    fn disjoint_pairs_are_disjoint() {
        let cfg = GenConfig::default();
        for i in 0..32 {
            let mut rng = rng_for(cfg.seed, i);
            let (a, b) = gen_disjoint_pair(&cfg, &mut rng);
            assert!(a.has_disjoint_support(&b).unwrap());
        }
    }

    #[test]
    fn sets_are_zero_one_valued() {
        let cfg = GenConfig::default();
        for i in 0..32 {
            let mut rng = rng_for(cfg.seed, i);
            let s = gen_set(&cfg, &mut rng);
            for v in s.attained_values() {
                assert!(v == rat_int(0) || v == rat_int(1));
            }
        }
    }
}
