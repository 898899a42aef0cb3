//! Exactly computable model of translation-invariant functionals on
//! essentially bounded functions of one real variable.
//!
//! The carrier is the algebra of eventually periodic rational step
//! functions: closed under pointwise sums, scalar multiples, lattice
//! operations, rational translations and post-composition, with decidable
//! almost-everywhere equality. On this class the Cesàro average of every
//! element has a true limit at infinity, which makes the Banach-limit
//! functional exactly computable and independent of the choice of
//! ultrafilter, while raw ultralimits keep their genuine indeterminacy.
//!
//! Modules:
//! - [`stepfn`]: the exact function algebra.
//! - [`cesaro`]: averages, limits, convergence certificates.
//! - [`ultra`]: forced ultrafilter-membership verdicts and ultralimits.
//! - [`valuation`]: Banach-limit valuations, tail restrictions, series.
//! - [`checker`]: seeded property suites with replayable counterexamples.
//! - [`text`]: the textual grammar shared with the command-line front end.

pub mod cesaro;
pub mod checker;
pub mod rational;
pub mod stepfn;
pub mod text;
pub mod ultra;
pub mod valuation;

pub use rational::Rational;
pub use stepfn::{PeriodicCell, StepFn, StepFnError};
