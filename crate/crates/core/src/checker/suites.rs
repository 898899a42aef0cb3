//! The property suites: one per lemma-level identity, each split into a
//! deterministic generator and a pure check so that failing samples can be
//! replayed from their serialized inputs alone.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::cesaro::{cesaro_eval, cesaro_limit_right, has_limit_left, has_limit_right};
use crate::checker::gen::{
    gen_compact, gen_disjoint_pair, gen_in_class, gen_set, gen_stepfn, gen_with_constant_tail,
    rng_for, GenConfig, StepFnClass,
};
use crate::checker::CheckerError;
use crate::rational::{rat, rat_int, Rational};
use crate::stepfn::StepFn;
use crate::text::{parse_rational, parse_stepfn, print_stepfn};
use crate::ultra::{ball_preimage, membership, ultralimit, DefinableSet, UltrafilterTag, Ultralimit, UltraVerdict};
use crate::valuation::{banach_limit, evaluate, Evaluation, ValuationSpec, ValueMap};

/// Identifier of one property suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteId {
    VerdictLaws,
    UltralimitLaws,
    DisjointDistributivity,
    DisjointAdditivity,
    VanishCompactSupport,
    Prolongation,
    TailDecomposition,
    BlimLinearity,
    BlimPositivity,
    BlimExtension,
    BlimTranslation,
    BlimNorm,
    CesaroPositivity,
    CesaroBounded,
    CesaroLimit,
    CesaroTelescoping,
    ValuationIdentity,
    Monotonicity,
    SeriesInterval,
    Continuity,
}

impl SuiteId {
    pub fn all() -> &'static [SuiteId] {
        use SuiteId::*;
        &[
            VerdictLaws,
            UltralimitLaws,
            DisjointDistributivity,
            DisjointAdditivity,
            VanishCompactSupport,
            Prolongation,
            TailDecomposition,
            BlimLinearity,
            BlimPositivity,
            BlimExtension,
            BlimTranslation,
            BlimNorm,
            CesaroPositivity,
            CesaroBounded,
            CesaroLimit,
            CesaroTelescoping,
            ValuationIdentity,
            Monotonicity,
            SeriesInterval,
            Continuity,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        use SuiteId::*;
        match self {
            VerdictLaws => "verdict_laws",
            UltralimitLaws => "ultralimit_laws",
            DisjointDistributivity => "disjoint_distributivity",
            DisjointAdditivity => "disjoint_additivity",
            VanishCompactSupport => "vanish_compact_support",
            Prolongation => "prolongation",
            TailDecomposition => "tail_decomposition",
            BlimLinearity => "blim_linearity",
            BlimPositivity => "blim_positivity",
            BlimExtension => "blim_extension",
            BlimTranslation => "blim_translation",
            BlimNorm => "blim_norm",
            CesaroPositivity => "cesaro_positivity",
            CesaroBounded => "cesaro_bounded",
            CesaroLimit => "cesaro_limit",
            CesaroTelescoping => "cesaro_telescoping",
            ValuationIdentity => "valuation_identity",
            Monotonicity => "monotonicity",
            SeriesInterval => "series_interval",
            Continuity => "continuity",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = CheckerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::all()
            .iter()
            .find(|id| id.as_str() == s)
            .copied()
            .ok_or_else(|| CheckerError::UnknownSuite(s.to_string()))
    }
}

/// Named inputs of one sample, serializable to the textual DSL and parseable
/// back, so a counterexample alone suffices to re-run its check.
#[derive(Debug, Clone, Default)]
pub struct SampleInputs {
    pub fns: BTreeMap<String, StepFn>,
    pub rats: BTreeMap<String, Rational>,
}

impl SampleInputs {
    fn with_fn(mut self, name: &str, f: StepFn) -> Self {
        self.fns.insert(name.to_string(), f);
        self
    }

    fn with_rat(mut self, name: &str, r: Rational) -> Self {
        self.rats.insert(name.to_string(), r);
        self
    }

    pub fn texts(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.fns {
            out.insert(k.clone(), print_stepfn(v));
        }
        for (k, v) in &self.rats {
            out.insert(k.clone(), v.to_string());
        }
        out
    }

    /// Rebuild inputs from serialized texts: entries parse as a bare
    /// rational or as a function expression.
    pub fn from_texts(texts: &BTreeMap<String, String>) -> Result<Self, CheckerError> {
        let mut inputs = SampleInputs::default();
        for (k, v) in texts {
            if let Ok(r) = parse_rational(v) {
                inputs.rats.insert(k.clone(), r);
            } else {
                let f = parse_stepfn(v).map_err(|e| CheckerError::BadCounterexample {
                    name: k.clone(),
                    message: e.to_string(),
                })?;
                inputs.fns.insert(k.clone(), f);
            }
        }
        Ok(inputs)
    }

    fn stepfn(&self, name: &str) -> Result<&StepFn, Failure> {
        self.fns
            .get(name)
            .ok_or_else(|| Failure::new(format!("missing input `{name}`"), "a function input"))
    }

    fn rat(&self, name: &str) -> Result<&Rational, Failure> {
        self.rats
            .get(name)
            .ok_or_else(|| Failure::new(format!("missing input `{name}`"), "a rational input"))
    }
}

/// What a failed sample observed vs. what the property expects.
#[derive(Debug, Clone)]
pub(crate) struct Failure {
    pub observed: String,
    pub expected: String,
}

impl Failure {
    fn new(observed: impl Into<String>, expected: impl Into<String>) -> Self {
        Self {
            observed: observed.into(),
            expected: expected.into(),
        }
    }
}

type CheckResult = Result<(), Failure>;

fn fail(observed: impl Into<String>, expected: impl Into<String>) -> CheckResult {
    Err(Failure::new(observed, expected))
}

fn ev(spec: &ValuationSpec, u: &StepFn) -> Result<Evaluation, Failure> {
    evaluate(spec, u).map_err(|e| Failure::new(format!("evaluation error: {e}"), "a finite value"))
}

fn op<T>(r: Result<T, crate::stepfn::StepFnError>) -> Result<T, Failure> {
    r.map_err(|e| Failure::new(format!("algebra error: {e}"), "a closed-form result"))
}

/// Truncation radius of a spec: zero except for series.
fn spec_truncation(spec: &ValuationSpec) -> Rational {
    match spec {
        ValuationSpec::BanachLimit { .. } => Rational::zero(),
        ValuationSpec::RightTail(inner) | ValuationSpec::LeftTail(inner) => spec_truncation(inner),
        ValuationSpec::Series { tail_bound, .. } => tail_bound.clone(),
    }
}

/// Lipschitz constant of the functional on the ball of radius `m`, when the
/// value maps certify one.
fn spec_lipschitz(spec: &ValuationSpec, m: &Rational) -> Option<Rational> {
    match spec {
        ValuationSpec::BanachLimit { map, .. } => map.lipschitz_on(m),
        ValuationSpec::RightTail(inner) | ValuationSpec::LeftTail(inner) => {
            spec_lipschitz(inner, m)
        }
        ValuationSpec::Series { terms, .. } => {
            let mut acc = Rational::zero();
            for t in terms {
                acc += t.map.lipschitz_on(m)?;
            }
            Some(acc)
        }
    }
}

fn both_tags() -> [UltrafilterTag; 2] {
    [UltrafilterTag::right(), UltrafilterTag::left()]
}

// ---------------------------------------------------------------------------
// Generation

pub(crate) fn generate(suite: SuiteId, cfg: &GenConfig, index: u64) -> SampleInputs {
    let mut rng = rng_for(cfg.seed, index);
    let base = SampleInputs::default();
    match suite {
        SuiteId::VerdictLaws => {
            let s = gen_set(cfg, &mut rng);
            let t = gen_set(cfg, &mut rng);
            base.with_fn("s", s).with_fn("t", t)
        }
        SuiteId::UltralimitLaws => {
            let u = gen_stepfn(cfg, index);
            base.with_fn("u", u)
        }
        SuiteId::DisjointDistributivity | SuiteId::DisjointAdditivity => {
            let (u, v) = gen_disjoint_pair(cfg, &mut rng);
            base.with_fn("u", u).with_fn("v", v)
        }
        SuiteId::VanishCompactSupport => {
            let (u, _) = gen_compact(cfg, &mut rng);
            base.with_fn("u", u)
        }
        SuiteId::Prolongation => {
            let (u, n) = gen_compact(cfg, &mut rng);
            base.with_fn("u", u).with_rat("n", n)
        }
        SuiteId::TailDecomposition | SuiteId::BlimNorm | SuiteId::SeriesInterval => {
            let u = gen_stepfn(cfg, index);
            base.with_fn("u", u)
        }
        SuiteId::BlimLinearity => {
            let u = gen_in_class(cfg, &mut rng, StepFnClass::MixedTail);
            let v = gen_in_class(cfg, &mut rng, StepFnClass::Periodic);
            let alpha = crate::checker::gen::gen_rat(cfg, &mut rng);
            let beta = crate::checker::gen::gen_rat(cfg, &mut rng);
            base.with_fn("u", u)
                .with_fn("v", v)
                .with_rat("alpha", alpha)
                .with_rat("beta", beta)
        }
        SuiteId::BlimPositivity => {
            let g = gen_stepfn(cfg, index);
            base.with_fn("u", g)
        }
        SuiteId::BlimExtension => {
            let (u, _) = gen_with_constant_tail(cfg, &mut rng, true);
            let (v, _) = gen_with_constant_tail(cfg, &mut rng, false);
            base.with_fn("u", u).with_fn("v", v)
        }
        SuiteId::BlimTranslation | SuiteId::CesaroTelescoping => {
            let u = gen_stepfn(cfg, index);
            let t = crate::checker::gen::gen_rat(cfg, &mut rng);
            let x = crate::checker::gen::gen_period(cfg, &mut rng) * rat_int(5);
            base.with_fn("u", u).with_rat("t", t).with_rat("x", x)
        }
        SuiteId::CesaroPositivity | SuiteId::CesaroBounded => {
            let u = gen_stepfn(cfg, index);
            let x_pos = crate::checker::gen::gen_period(cfg, &mut rng) * rat_int(3);
            let x_neg = -(crate::checker::gen::gen_period(cfg, &mut rng) * rat_int(7));
            base.with_fn("u", u)
                .with_rat("x_pos", x_pos)
                .with_rat("x_neg", x_neg)
        }
        SuiteId::CesaroLimit => {
            let u = gen_stepfn(cfg, index);
            base.with_fn("u", u)
        }
        SuiteId::ValuationIdentity | SuiteId::Monotonicity => {
            let u = gen_stepfn(cfg, index);
            let v = gen_in_class(cfg, &mut rng, StepFnClass::MixedTail);
            base.with_fn("u", u).with_fn("v", v)
        }
        SuiteId::Continuity => {
            let u = gen_stepfn(cfg, index);
            let d = gen_in_class(cfg, &mut rng, StepFnClass::Periodic);
            let delta = crate::checker::gen::gen_period(cfg, &mut rng) / rat_int(8);
            base.with_fn("u", u).with_fn("d", d).with_rat("delta", delta)
        }
    }
}

// ---------------------------------------------------------------------------
// Checks

pub(crate) fn check(suite: SuiteId, inputs: &SampleInputs, spec: &ValuationSpec) -> CheckResult {
    match suite {
        SuiteId::VerdictLaws => check_verdict_laws(inputs),
        SuiteId::UltralimitLaws => check_ultralimit_laws(inputs),
        SuiteId::DisjointDistributivity => check_disjoint_distributivity(inputs),
        SuiteId::DisjointAdditivity => check_disjoint_additivity(inputs, spec),
        SuiteId::VanishCompactSupport => check_vanish(inputs, spec),
        SuiteId::Prolongation => check_prolongation(inputs, spec),
        SuiteId::TailDecomposition => check_tail_decomposition(inputs, spec),
        SuiteId::BlimLinearity => check_blim_linearity(inputs),
        SuiteId::BlimPositivity => check_blim_positivity(inputs),
        SuiteId::BlimExtension => check_blim_extension(inputs),
        SuiteId::BlimTranslation => check_blim_translation(inputs),
        SuiteId::BlimNorm => check_blim_norm(inputs),
        SuiteId::CesaroPositivity => check_cesaro_positivity(inputs),
        SuiteId::CesaroBounded => check_cesaro_bounded(inputs),
        SuiteId::CesaroLimit => check_cesaro_limit(inputs),
        SuiteId::CesaroTelescoping => check_cesaro_telescoping(inputs),
        SuiteId::ValuationIdentity => check_valuation_identity(inputs, spec),
        SuiteId::Monotonicity => check_monotonicity(inputs, spec),
        SuiteId::SeriesInterval => check_series_interval(inputs),
        SuiteId::Continuity => check_continuity(inputs, spec),
    }
}

fn check_verdict_laws(inputs: &SampleInputs) -> CheckResult {
    let s = DefinableSet::new(inputs.stepfn("s")?.clone())
        .map_err(|e| Failure::new(e.to_string(), "a 0/1-valued input"))?;
    let t = DefinableSet::new(inputs.stepfn("t")?.clone())
        .map_err(|e| Failure::new(e.to_string(), "a 0/1-valued input"))?;
    for tag in both_tags() {
        // F1 and F2.
        if membership(&DefinableSet::full(), &tag) != UltraVerdict::ForcedIn {
            return fail("the full line is not forced in", "F1: R in every filter");
        }
        if membership(&DefinableSet::empty(), &tag) != UltraVerdict::ForcedOut {
            return fail("the empty set is not forced out", "F2: {} in no filter");
        }
        // Dichotomy between a set and its complement.
        let vs = membership(&s, &tag);
        let vc = membership(&s.complement(), &tag);
        let consistent = matches!(
            (vs, vc),
            (UltraVerdict::ForcedIn, UltraVerdict::ForcedOut)
                | (UltraVerdict::ForcedOut, UltraVerdict::ForcedIn)
                | (UltraVerdict::Undetermined, UltraVerdict::Undetermined)
        );
        if !consistent {
            return fail(
                format!("set {vs:?} vs complement {vc:?}"),
                "forced verdicts swap under complement; undetermined is self-dual",
            );
        }
        // F3: forced intersections stay forced.
        let vt = membership(&t, &tag);
        let inter = s
            .intersect(&t)
            .map_err(|e| Failure::new(e.to_string(), "a closed-form intersection"))?;
        if vs == UltraVerdict::ForcedIn
            && vt == UltraVerdict::ForcedIn
            && membership(&inter, &tag) != UltraVerdict::ForcedIn
        {
            return fail("intersection of forced-in sets not forced in", "F3");
        }
        // F4: forced supersets stay forced.
        let uni = s
            .union(&t)
            .map_err(|e| Failure::new(e.to_string(), "a closed-form union"))?;
        if vs == UltraVerdict::ForcedIn && membership(&uni, &tag) != UltraVerdict::ForcedIn {
            return fail("superset of a forced-in set not forced in", "F4");
        }
    }
    Ok(())
}

fn check_ultralimit_laws(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let norm = u.ess_sup_norm();
    for tag in both_tags() {
        let lim = ultralimit(u, &tag);
        let candidates: Vec<Rational> = match &lim {
            Ultralimit::Determined(l) => vec![l.clone()],
            Ultralimit::Undetermined(cs) => cs.clone(),
        };
        // Candidate bound |l| <= ||u||.
        for c in &candidates {
            if c.abs() > norm {
                return fail(
                    format!("candidate {c} exceeds norm {norm}"),
                    "every admissible limit lies in [-norm, norm]",
                );
            }
        }
        // a.e.-invariance: a rebuilt representation gives the same verdict.
        let rebuilt = op(u.add(&StepFn::zero()))?;
        if ultralimit(&rebuilt, &tag) != lim {
            return fail(
                "verdict changed after an a.e.-preserving rebuild",
                "ultralimits depend only on the a.e. class",
            );
        }
        // Epsilon-oracle: the for-all-eps definition, checked through
        // explicitly constructed level sets at sampled radii.
        let mut probes = candidates.clone();
        probes.push(candidates.iter().max().unwrap().clone() + rat_int(1));
        for l in &probes {
            let mut radii = vec![
                candidates
                    .iter()
                    .map(|c| (c - l).abs())
                    .max()
                    .unwrap()
                    + rat_int(1),
            ];
            if let Some(min_gap) = candidates
                .iter()
                .filter(|c| *c != l)
                .map(|c| (c - l).abs())
                .min()
            {
                if min_gap.is_positive() {
                    radii.push(min_gap / rat_int(2));
                }
            }
            radii.push(rat(1, 7));
            for eps in radii {
                if !eps.is_positive() {
                    continue;
                }
                let inside = candidates.iter().filter(|c| (*c - l).abs() < eps).count();
                let predicted = if inside == candidates.len() {
                    UltraVerdict::ForcedIn
                } else if inside == 0 {
                    UltraVerdict::ForcedOut
                } else {
                    UltraVerdict::Undetermined
                };
                let set = ball_preimage(u, l, &eps);
                let got = membership(&set, &tag);
                if got != predicted {
                    return fail(
                        format!("membership of {{u in B_{eps}({l})}} is {got:?}"),
                        format!("{predicted:?} from the finite tail-value reduction"),
                    );
                }
            }
        }
        // Determinacy matches the tail being a.e.-constant.
        let tail_constant = candidates.len() == 1;
        if matches!(lim, Ultralimit::Determined(_)) != tail_constant {
            return fail(
                "determinacy disagrees with the tail being a.e.-constant",
                "Determined(l) iff the tail cell is a.e.-constant",
            );
        }
    }
    Ok(())
}

fn check_disjoint_distributivity(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let v = inputs.stepfn("v")?;
    if !op(u.has_disjoint_support(v))? {
        return fail("inputs do not have disjoint support", "disjoint supports");
    }
    let zero = StepFn::zero();
    let sum = op(u.add(v))?;
    let lhs_join = op(sum.join(&zero))?;
    let rhs_join = op(op(u.join(&zero))?.add(&op(v.join(&zero))?))?;
    if !op(lhs_join.eq_ae(&rhs_join))? {
        return fail(
            "(u+v) v 0 differs from (u v 0) + (v v 0)",
            "join distributes over disjoint sums",
        );
    }
    let lhs_meet = op(sum.meet(&zero))?;
    let rhs_meet = op(op(u.meet(&zero))?.add(&op(v.meet(&zero))?))?;
    if !op(lhs_meet.eq_ae(&rhs_meet))? {
        return fail(
            "(u+v) ^ 0 differs from (u ^ 0) + (v ^ 0)",
            "meet distributes over disjoint sums",
        );
    }
    Ok(())
}

fn check_disjoint_additivity(inputs: &SampleInputs, spec: &ValuationSpec) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let v = inputs.stepfn("v")?;
    if !op(u.has_disjoint_support(v))? {
        return fail("inputs do not have disjoint support", "disjoint supports");
    }
    let tol = spec_truncation(spec) * rat_int(2);
    let sum = ev(spec, &op(u.add(v))?)?.value;
    let parts = ev(spec, u)?.value + ev(spec, v)?.value;
    if (&sum - &parts).abs() > tol {
        return fail(
            format!("mu(u+v) = {sum} but mu(u)+mu(v) = {parts}"),
            format!("additivity on disjoint supports within {tol}"),
        );
    }
    Ok(())
}

fn check_vanish(inputs: &SampleInputs, spec: &ValuationSpec) -> CheckResult {
    let u = inputs.stepfn("u")?;
    if !u.has_compact_support() {
        return fail("input does not have compact support", "compact support");
    }
    let tol = spec_truncation(spec);
    let val = ev(spec, u)?.value;
    if val.abs() > tol {
        return fail(
            format!("mu(u) = {val}"),
            format!("0 (within {tol}) on compact support"),
        );
    }
    Ok(())
}

fn check_prolongation(inputs: &SampleInputs, spec: &ValuationSpec) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let n = inputs.rat("n")?;
    let pro = op(u.prolong_periodic(n))?;
    let lhs = op(u.add(&pro.translate(n)))?;
    if !op(lhs.eq_ae(&pro))? {
        return fail(
            "u + translate(prolongation, n) differs from the prolongation",
            "the prolongation identity holds a.e.",
        );
    }
    let tol = spec_truncation(spec);
    let val = ev(spec, u)?.value;
    if val.abs() > tol {
        return fail(
            format!("mu(u) = {val}"),
            "0 via the prolongation identity chain",
        );
    }
    Ok(())
}

fn check_tail_decomposition(inputs: &SampleInputs, spec: &ValuationSpec) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let tol = spec_truncation(spec) * rat_int(2);
    let full = ev(spec, u)?.value;
    let right = ev(&ValuationSpec::RightTail(Box::new(spec.clone())), u)?.value;
    let left = ev(&ValuationSpec::LeftTail(Box::new(spec.clone())), u)?.value;
    let split = &right + &left;
    if (&full - &split).abs() > tol {
        return fail(
            format!("mu(u) = {full} but right+left = {split}"),
            format!("mu = right tail + left tail within {tol}"),
        );
    }
    Ok(())
}

fn check_blim_linearity(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let v = inputs.stepfn("v")?;
    let alpha = inputs.rat("alpha")?;
    let beta = inputs.rat("beta")?;
    let combo = op(u.scale(alpha).add(&v.scale(beta)))?;
    for tag in both_tags() {
        let lhs = banach_limit(&combo, &tag);
        let rhs = alpha * banach_limit(u, &tag) + beta * banach_limit(v, &tag);
        if lhs != rhs {
            return fail(
                format!("blim(au+bv) = {lhs}, a blim(u) + b blim(v) = {rhs}"),
                "exact linearity",
            );
        }
    }
    Ok(())
}

fn check_blim_positivity(inputs: &SampleInputs) -> CheckResult {
    let u = op(inputs.stepfn("u")?.join(&StepFn::zero()))?;
    for tag in both_tags() {
        let val = banach_limit(&u, &tag);
        if val.is_negative() {
            return fail(format!("blim = {val} for u >= 0"), "non-negative value");
        }
    }
    Ok(())
}

fn check_blim_extension(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let l = has_limit_right(u).ok_or_else(|| {
        Failure::new("input has no right limit", "a right tail that is a.e.-constant")
    })?;
    let got = banach_limit(u, &UltrafilterTag::right());
    if got != l {
        return fail(
            format!("blim(u) = {got} but lim at +inf = {l}"),
            "the Banach limit extends the limit operator",
        );
    }
    let v = inputs.stepfn("v")?;
    let l = has_limit_left(v).ok_or_else(|| {
        Failure::new("input has no left limit", "a left tail that is a.e.-constant")
    })?;
    let got = banach_limit(v, &UltrafilterTag::left());
    if got != l {
        return fail(
            format!("left blim(v) = {got} but lim at -inf = {l}"),
            "the left Banach limit extends the limit operator",
        );
    }
    Ok(())
}

fn check_blim_translation(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let t = inputs.rat("t")?;
    let shifted = u.translate(t);
    for tag in both_tags() {
        let a = banach_limit(u, &tag);
        let b = banach_limit(&shifted, &tag);
        if a != b {
            return fail(
                format!("blim(u) = {a}, blim(translate(u, {t})) = {b}"),
                "exact translation invariance",
            );
        }
    }
    Ok(())
}

fn check_blim_norm(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let norm = u.ess_sup_norm();
    for tag in both_tags() {
        let val = banach_limit(u, &tag);
        if val.abs() > norm {
            return fail(
                format!("|blim(u)| = {} > {norm}", val.abs()),
                "|blim(u)| <= ess sup norm",
            );
        }
    }
    Ok(())
}

fn check_cesaro_positivity(inputs: &SampleInputs) -> CheckResult {
    let u = op(inputs.stepfn("u")?.join(&StepFn::zero()))?;
    for x in [
        inputs.rat("x_pos")?.clone(),
        inputs.rat("x_neg")?.clone(),
        Rational::zero(),
    ] {
        let val = cesaro_eval(&u, &x);
        if val.is_negative() {
            return fail(
                format!("average at {x} is {val} for u >= 0"),
                "non-negative averages",
            );
        }
    }
    Ok(())
}

fn check_cesaro_bounded(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let norm = u.ess_sup_norm();
    for x in [
        inputs.rat("x_pos")?.clone(),
        inputs.rat("x_neg")?.clone(),
        Rational::zero(),
    ] {
        let val = cesaro_eval(u, &x);
        if val.abs() > norm {
            return fail(
                format!("|average at {x}| = {} > {norm}", val.abs()),
                "averages bounded by the norm",
            );
        }
    }
    Ok(())
}

fn check_cesaro_limit(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let lim = cesaro_limit_right(u);
    // The a.e.-constant-tail case must reproduce the plain limit exactly.
    if let Some(l) = has_limit_right(u) {
        if lim.mean != l {
            return fail(
                format!("cesaro limit {} but tail limit {l}", lim.mean),
                "the average converges to the plain limit",
            );
        }
    }
    let period = u.right_tail().period().clone();
    let x0 = lim.valid_from.clone().max(rat(1, 2));
    let far = rat_int(1000) * &period;
    for x in [
        x0.clone(),
        &x0 + &period,
        &x0 + rat_int(7) * &period,
        x0.clone().max(far),
    ] {
        let bound = match lim.bound_at(&x) {
            Some(b) => b,
            None => {
                return fail(
                    format!("certificate does not apply at x = {x}"),
                    "a certificate valid from the core end onward",
                )
            }
        };
        let err = (cesaro_eval(u, &x) - &lim.mean).abs();
        if err > bound {
            return fail(
                format!("|average({x}) - mean| = {err} > certificate {bound}"),
                "the certified bound dominates the true deviation",
            );
        }
    }
    Ok(())
}

fn check_cesaro_telescoping(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let t = inputs.rat("t")?;
    let x = inputs.rat("x")?;
    if !x.is_positive() {
        return fail("nonpositive sample point", "x > 0");
    }
    let shifted = u.translate(t);
    let lhs = (cesaro_eval(u, x) - cesaro_eval(&shifted, x)).abs();
    let bound = rat_int(2) * t.abs() * u.ess_sup_norm() / x;
    if lhs > bound {
        return fail(
            format!("|avg(u)({x}) - avg(Tu)({x})| = {lhs} > {bound}"),
            "the 2|t| m / x telescoping bound",
        );
    }
    Ok(())
}

fn check_valuation_identity(inputs: &SampleInputs, spec: &ValuationSpec) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let v = inputs.stepfn("v")?;
    let tol = spec_truncation(spec) * rat_int(2);
    let join = ev(spec, &op(u.join(v))?)?.value;
    let meet = ev(spec, &op(u.meet(v))?)?.value;
    let lhs = join + meet;
    let rhs = ev(spec, u)?.value + ev(spec, v)?.value;
    if (&lhs - &rhs).abs() > tol {
        return fail(
            format!("mu(uvv) + mu(u^v) = {lhs} but mu(u) + mu(v) = {rhs}"),
            format!("the valuation identity within {tol}"),
        );
    }
    Ok(())
}

fn check_monotonicity(inputs: &SampleInputs, spec: &ValuationSpec) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let v = op(u.join(inputs.stepfn("v")?))?;
    debug_assert!(op(u.le_ae(&v))?);
    let tol = spec_truncation(spec) * rat_int(2);
    let a = ev(spec, u)?.value;
    let b = ev(spec, &v)?.value;
    if a > &b + &tol {
        return fail(
            format!("mu(u) = {a} > mu(v) = {b} although u <= v"),
            format!("monotonicity within {tol}"),
        );
    }
    Ok(())
}

fn check_series_interval(inputs: &SampleInputs) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let norm = u.ess_sup_norm();
    let spec = ValuationSpec::geometric_series(20, norm);
    let evn = ev(&spec, u)?;
    // The geometric family sums to the plain Banach limit, which is the
    // analytically forced value of the full series.
    let truth = banach_limit(u, &UltrafilterTag::right());
    if (&truth - &evn.value).abs() > evn.truncation_error {
        return fail(
            format!(
                "partial sum {} misses the true value {truth} by more than {}",
                evn.value, evn.truncation_error
            ),
            "certified interval contains the true series value",
        );
    }
    Ok(())
}

fn check_continuity(inputs: &SampleInputs, spec: &ValuationSpec) -> CheckResult {
    let u = inputs.stepfn("u")?;
    let d = inputs.stepfn("d")?;
    let delta = inputs.rat("delta")?;
    let v = op(u.add(&d.scale(delta)))?;
    let m = u.ess_sup_norm().max(v.ess_sup_norm());
    let lip = match spec_lipschitz(spec, &m) {
        Some(l) => l,
        None => {
            return fail(
                "spec carries no Lipschitz certificate",
                "a Lipschitz bound on the working range",
            )
        }
    };
    let gap = op(u.sub(&v))?.ess_sup_norm();
    let tol = spec_truncation(spec) * rat_int(2);
    let a = ev(spec, u)?.value;
    let b = ev(spec, &v)?.value;
    if (&a - &b).abs() > &lip * &gap + tol {
        return fail(
            format!("|mu(u) - mu(v)| = {} exceeds L*||u-v|| = {}", (&a - &b).abs(), &lip * &gap),
            "the Lipschitz continuity bound",
        );
    }
    Ok(())
}

/// Default functional when a suite is run without an explicit spec.
pub fn default_spec() -> ValuationSpec {
    ValuationSpec::blim(ValueMap::identity())
}
