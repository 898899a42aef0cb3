//! Shared helpers: an evaluation grid dense enough to act as an
//! independent pointwise oracle for the refinement-based operations.

use stepval_core::rational::{rat, rat_int, Rational};
use stepval_core::stepfn::StepFn;

/// Sample points covering the cores of all inputs plus several tail periods
/// on both sides: every input breakpoint, shifted copies through a few
/// periods, and a fixed fine grid.
pub fn oracle_grid(fns: &[&StepFn]) -> Vec<Rational> {
    let mut pts: Vec<Rational> = Vec::new();
    let mut lo = rat_int(-4);
    let mut hi = rat_int(4);
    for u in fns {
        lo = lo.min(u.core_start() - rat_int(1));
        hi = hi.max(u.core_end() + rat_int(1));
    }
    for u in fns {
        for (b, _, _) in u.core_pieces() {
            pts.push(b.clone());
        }
        for (cell, anchor, dir) in [
            (u.left_tail(), u.core_start(), -1i64),
            (u.right_tail(), u.core_end(), 1i64),
        ] {
            for k in 0..4i64 {
                let base = anchor + cell.period() * rat_int(dir * k + if dir < 0 { -1 } else { 0 });
                for b in cell.breakpoints() {
                    pts.push(&base + b);
                }
                lo = lo.clone().min(base.clone());
                hi = hi.clone().max(&base + cell.period());
            }
        }
    }
    // Fine uniform grid over the whole observed span.
    let step = rat(1, 8);
    let mut x = lo.clone();
    while x <= hi {
        pts.push(x.clone());
        x += &step;
    }
    // Midpoints between consecutive distinct points catch short pieces.
    pts.sort();
    pts.dedup();
    let mids: Vec<Rational> = pts
        .windows(2)
        .map(|w| (&w[0] + &w[1]) / rat_int(2))
        .collect();
    pts.extend(mids);
    pts.sort();
    pts.dedup();
    pts
}
