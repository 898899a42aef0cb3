//! Property tests for the step-function algebra, checked against the
//! independent pointwise oracle from `common::oracle_grid`.

mod common;

use common::oracle_grid;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use stepval_core::cesaro::{cesaro_eval, cesaro_limit_right, has_limit_right};
use stepval_core::rational::{rat_int, Rational};
use stepval_core::stepfn::{PeriodicCell, StepFn};

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=3, 1i64..=3).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn cell() -> impl Strategy<Value = PeriodicCell> {
    (
        positive_rational(),
        prop::collection::btree_set(0u8..16, 1..=4),
        prop::collection::vec(rational(), 4),
    )
        .prop_map(|(period, slots, values)| {
            let mut bps = vec![rat_int(0)];
            for s in slots {
                if s > 0 {
                    bps.push(&period * Rational::new((s as i64).into(), 16.into()));
                }
            }
            bps.dedup();
            let vals = bps
                .iter()
                .enumerate()
                .map(|(i, _)| values[i % values.len()].clone())
                .collect();
            PeriodicCell::new(period, bps, vals).expect("well-formed cell")
        })
}

fn stepfn() -> impl Strategy<Value = StepFn> {
    prop_oneof![
        rational().prop_map(StepFn::constant),
        (cell(), rational()).prop_map(|(c, anchor)| StepFn::periodic(c, anchor)),
        (
            prop::collection::btree_set(0u8..24, 2..=6),
            rational()
        )
            .prop_map(|(slots, off)| {
                let pts: Vec<Rational> = slots
                    .into_iter()
                    .map(|s| &off + Rational::new((s as i64).into(), 4.into()))
                    .collect();
                let ivs: Vec<(Rational, Rational)> = pts
                    .chunks(2)
                    .filter(|c| c.len() == 2)
                    .map(|c| (c[0].clone(), c[1].clone()))
                    .collect();
                StepFn::indicator(&ivs).expect("disjoint by construction")
            }),
        (cell(), cell(), rational(), positive_rational(), prop::collection::vec(rational(), 1..=4))
            .prop_map(|(l, r, start, len, vals)| {
                let end = &start + &len;
                let step = &len / rat_int(vals.len() as i64);
                let core: Vec<(Rational, Rational)> = vals
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (&start + &step * rat_int(i as i64), v.clone()))
                    .collect();
                StepFn::from_parts(l, start, core, end, r).expect("well-formed core")
            }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn binary_ops_match_the_pointwise_oracle(u in stepfn(), v in stepfn()) {
        let sum = u.add(&v).unwrap();
        let join = u.join(&v).unwrap();
        let meet = u.meet(&v).unwrap();
        for x in oracle_grid(&[&u, &v, &sum]) {
            let (a, b) = (u.eval(&x), v.eval(&x));
            prop_assert_eq!(sum.eval(&x), &a + &b);
            prop_assert_eq!(join.eval(&x), a.clone().max(b.clone()));
            prop_assert_eq!(meet.eval(&x), a.min(b));
        }
    }

    #[test]
    fn lattice_law_sum_of_join_and_meet(u in stepfn(), v in stepfn()) {
        // u + v = (u v v) + (u ^ v), the identity behind the valuation law.
        let lhs = u.add(&v).unwrap();
        let rhs = u.join(&v).unwrap().add(&u.meet(&v).unwrap()).unwrap();
        prop_assert!(lhs.eq_ae(&rhs).unwrap());
    }

    #[test]
    fn disjoint_supports_distribute(a in stepfn(), b in stepfn()) {
        // Forcibly disjoint: left and right restrictions.
        let u = a.restrict_left().unwrap();
        let v = b.restrict_right().unwrap();
        prop_assert!(u.has_disjoint_support(&v).unwrap());
        let zero = StepFn::zero();
        let sum = u.add(&v).unwrap();
        let lhs = sum.join(&zero).unwrap();
        let rhs = u.join(&zero).unwrap().add(&v.join(&zero).unwrap()).unwrap();
        prop_assert!(lhs.eq_ae(&rhs).unwrap());
        let lhs = sum.meet(&zero).unwrap();
        let rhs = u.meet(&zero).unwrap().add(&v.meet(&zero).unwrap()).unwrap();
        prop_assert!(lhs.eq_ae(&rhs).unwrap());
    }

    #[test]
    fn norm_is_subadditive_and_homogeneous(u in stepfn(), v in stepfn(), alpha in rational()) {
        let sum = u.add(&v).unwrap();
        prop_assert!(sum.ess_sup_norm() <= u.ess_sup_norm() + v.ess_sup_norm());
        prop_assert_eq!(u.scale(&alpha).ess_sup_norm(), alpha.abs() * u.ess_sup_norm());
    }

    #[test]
    fn eq_ae_is_an_equivalence_compatible_with_eval(u in stepfn(), v in stepfn()) {
        prop_assert!(u.eq_ae(&u).unwrap());
        let eq = u.eq_ae(&v).unwrap();
        prop_assert_eq!(eq, v.eq_ae(&u).unwrap());
        // Decidable equality agrees with the pointwise oracle on the grid.
        let grid_eq = oracle_grid(&[&u, &v]).iter().all(|x| u.eval(x) == v.eval(x));
        prop_assert_eq!(eq, grid_eq);
    }

    #[test]
    fn breakpoint_evaluation_is_right_continuous(u in stepfn()) {
        // Half-open convention: each breakpoint takes its right piece's
        // value, in the core and through several tail tiles on both sides.
        for (b, e, v) in u.core_pieces() {
            prop_assert_eq!(u.eval(b), v.clone());
            prop_assert_eq!(u.eval(&((b + e) / rat_int(2))), v.clone());
        }
        for k in 0..3i64 {
            let base = u.core_end() + u.right_tail().period() * rat_int(k);
            for (b, e, v) in u.right_tail().pieces() {
                prop_assert_eq!(u.eval(&(&base + b)), v.clone());
                prop_assert_eq!(u.eval(&(&base + &((b + e) / rat_int(2)))), v.clone());
            }
            let base = u.core_start() - u.left_tail().period() * rat_int(k + 1);
            for (b, e, v) in u.left_tail().pieces() {
                prop_assert_eq!(u.eval(&(&base + b)), v.clone());
                prop_assert_eq!(u.eval(&(&base + &((b + e) / rat_int(2)))), v.clone());
            }
        }
    }

    #[test]
    fn translation_acts_on_the_graph(u in stepfn(), s in rational(), t in rational()) {
        let st = u.translate(&s).translate(&t);
        let once = u.translate(&(&s + &t));
        prop_assert_eq!(&st, &once);
        let shifted = u.translate(&t);
        for x in oracle_grid(&[&u, &shifted]) {
            prop_assert_eq!(shifted.eval(&x), u.eval(&(&x - &t)));
        }
    }

    #[test]
    fn reflection_preserves_integrals(u in stepfn(), a in rational(), b in rational()) {
        let r = u.reflect();
        prop_assert!(r.reflect().eq_ae(&u).unwrap());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert_eq!(
            u.integral_window(&lo, &hi),
            r.integral_window(&-hi.clone(), &-lo.clone())
        );
    }

    #[test]
    fn averages_are_linear_bounded_and_certified(u in stepfn(), v in stepfn(), x in rational()) {
        if !x.is_zero() {
            let alpha = rat_int(3);
            let combo = u.scale(&alpha).add(&v).unwrap();
            prop_assert_eq!(
                cesaro_eval(&combo, &x),
                alpha * cesaro_eval(&u, &x) + cesaro_eval(&v, &x)
            );
        }
        prop_assert!(cesaro_eval(&u, &x).abs() <= u.ess_sup_norm());
        // Certificate check at a far sample.
        let lim = cesaro_limit_right(&u);
        let far = lim.valid_from.clone().max(rat_int(1)) + rat_int(500) * u.right_tail().period();
        let err = (cesaro_eval(&u, &far) - &lim.mean).abs();
        prop_assert!(err <= lim.bound_at(&far).unwrap());
        if let Some(l) = has_limit_right(&u) {
            prop_assert_eq!(lim.mean, l);
        }
    }

    #[test]
    fn restriction_reassembles_the_function(u in stepfn()) {
        let right = u.restrict_right().unwrap();
        let left = u.restrict_left().unwrap();
        prop_assert!(right.has_disjoint_support(&left).unwrap());
        prop_assert!(right.add(&left).unwrap().eq_ae(&u).unwrap());
        for x in oracle_grid(&[&u]) {
            let expect = if x.is_negative() { rat_int(0) } else { u.eval(&x) };
            prop_assert_eq!(right.eval(&x), expect);
        }
    }
}
