//! Brute-force verification of every closed form and bound over finite grids.
//!
//! Each grid point is evaluated independently (in parallel) and folded into one
//! aggregate [`VerificationRecord`] per (anchor, variant). The fold is
//! commutative, so the result does not depend on scheduling.

mod grid;
mod ledger;
mod oracle;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::exact::big;
use crate::norms::SpectralOptions;
use crate::recurrence::{
    evaluate, evaluate_in, window, Family, IdentityId, RecurrenceSpec, SeqKind, Variant,
};
use crate::theorems::{self, BoundCheck, Observed, Shape, TheoremId, Verdict};

pub use grid::{general_sample, BoundGrid, GridPreset, IdentityGrid, Seeds};
pub use ledger::{
    emit_ledger, golden_ledger, ErrataLedger, LedgerEntry, LedgerStatus, VariantSummary,
};
pub use oracle::{oracle_identity, oracle_sum, oracle_sum_in, OracleSum};

/// A formula that gets its own ledger entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    Identity(IdentityId),
    Theorem(TheoremId),
    /// The theorem's identity-substituted sum of squares against the direct sum.
    Display(TheoremId),
    /// Circulant spectral bracket.
    Bracket(TheoremId),
}

impl Anchor {
    /// Every anchor in ledger order.
    pub fn registry() -> Vec<Anchor> {
        let mut out: Vec<Anchor> = IdentityId::ALL.into_iter().map(Anchor::Identity).collect();
        for t in TheoremId::ALL {
            out.push(Anchor::Theorem(t));
            if t.has_display() {
                out.push(Anchor::Display(t));
            }
            if t.shape == Shape::Circ {
                out.push(Anchor::Bracket(t));
            }
        }
        out
    }

    pub fn name(self) -> String {
        match self {
            Anchor::Identity(id) => id.as_str().to_string(),
            Anchor::Theorem(t) => t.as_str().to_string(),
            Anchor::Display(t) => format!("{t}:display"),
            Anchor::Bracket(t) => format!("{t}:bracket"),
        }
    }

    pub fn variants(self) -> &'static [Variant] {
        match self {
            Anchor::Identity(id) => id.variants(),
            Anchor::Theorem(t) => t.variants(),
            Anchor::Display(t) if t.kind == SeqKind::PellPadovan => {
                &[Variant::AsPrinted, Variant::Corrected]
            }
            Anchor::Display(_) | Anchor::Bracket(_) => &[Variant::AsPrinted],
        }
    }

    /// Exact anchors compare rationals; the others compare a float norm with bounds.
    pub fn exact(self) -> bool {
        match self {
            Anchor::Identity(_) | Anchor::Display(_) => true,
            Anchor::Theorem(t) => !matches!(t.shape, Shape::RcircBounds | Shape::HankelSpec),
            Anchor::Bracket(_) => false,
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Anchor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub family: Family,
    pub coeffs: (i64, i64, i64),
    pub seeds: Seeds,
    pub n: usize,
    #[serde(
        with = "crate::exact::opt_rational_str",
        skip_serializing_if = "Option::is_none"
    )]
    pub r: Option<BigRational>,
}

impl GridPoint {
    fn new(spec: &RecurrenceSpec, n: usize, r: Option<BigRational>) -> Self {
        GridPoint {
            family: spec.family(),
            coeffs: spec.coeffs(),
            seeds: spec.seeds(),
            n,
            r,
        }
    }

    /// Minimality order for counterexamples.
    fn key(&self) -> (usize, Seeds, (i64, i64, i64), Option<&BigRational>) {
        (self.n, self.seeds, self.coeffs, self.r.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RecordValue {
    Exact(#[serde(with = "crate::exact::rational_str")] BigRational),
    Bounds { lower: f64, upper: f64 },
    Norm(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub point: GridPoint,
    pub closed: RecordValue,
    pub oracle: RecordValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RecordVerdict {
    Match,
    Mismatch,
    Holds,
    Violated,
    OutOfHypothesis,
    NonConverged,
}

impl RecordVerdict {
    pub fn passed(self) -> bool {
        matches!(self, RecordVerdict::Match | RecordVerdict::Holds)
    }
}

/// All grid points of one (anchor, variant).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub anchor: Anchor,
    pub variant: Variant,
    pub points: usize,
    pub failures: usize,
    pub out_of_hypothesis: usize,
    pub non_converged: usize,
    pub verdict: RecordVerdict,
    /// Smallest failing point by (n, seeds, coefficients, r).
    pub counterexample: Option<Counterexample>,
}

impl VerificationRecord {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

enum Outcome {
    Pass,
    Fail(RecordValue, RecordValue),
    OutOfHypothesis,
    NonConverged,
}

#[derive(Default)]
struct Acc {
    points: usize,
    failures: usize,
    out_of_hypothesis: usize,
    non_converged: usize,
    counterexample: Option<Counterexample>,
}

impl Acc {
    fn merge(&mut self, other: Acc) {
        self.points += other.points;
        self.failures += other.failures;
        self.out_of_hypothesis += other.out_of_hypothesis;
        self.non_converged += other.non_converged;
        if let Some(cx) = other.counterexample {
            self.offer(cx);
        }
    }

    fn offer(&mut self, cx: Counterexample) {
        match &self.counterexample {
            Some(cur) if cur.point.key() <= cx.point.key() => {}
            _ => self.counterexample = Some(cx),
        }
    }
}

#[derive(Default)]
struct Sink(BTreeMap<(Anchor, Variant), Acc>);

impl Sink {
    fn add(&mut self, anchor: Anchor, variant: Variant, point: &GridPoint, outcome: Outcome) {
        let acc = self.0.entry((anchor, variant)).or_default();
        acc.points += 1;
        match outcome {
            Outcome::Pass => {}
            Outcome::Fail(closed, oracle) => {
                acc.failures += 1;
                acc.offer(Counterexample {
                    point: point.clone(),
                    closed,
                    oracle,
                });
            }
            Outcome::OutOfHypothesis => acc.out_of_hypothesis += 1,
            Outcome::NonConverged => acc.non_converged += 1,
        }
    }

    fn merge(mut self, other: Sink) -> Sink {
        for (k, acc) in other.0 {
            self.0.entry(k).or_default().merge(acc);
        }
        self
    }

    fn into_records(self) -> Vec<VerificationRecord> {
        let order = Anchor::registry();
        let pos = |a: &Anchor| order.iter().position(|x| x == a).unwrap_or(usize::MAX);
        let mut out: Vec<VerificationRecord> = self
            .0
            .into_iter()
            .map(|((anchor, variant), acc)| {
                let verdict = if acc.failures > 0 {
                    if anchor.exact() {
                        RecordVerdict::Mismatch
                    } else {
                        RecordVerdict::Violated
                    }
                } else if acc.non_converged > 0 {
                    RecordVerdict::NonConverged
                } else if acc.out_of_hypothesis == acc.points {
                    RecordVerdict::OutOfHypothesis
                } else if anchor.exact() {
                    RecordVerdict::Match
                } else {
                    RecordVerdict::Holds
                };
                VerificationRecord {
                    anchor,
                    variant,
                    points: acc.points,
                    failures: acc.failures,
                    out_of_hypothesis: acc.out_of_hypothesis,
                    non_converged: acc.non_converged,
                    verdict,
                    counterexample: acc.counterexample,
                }
            })
            .collect();
        out.sort_by_key(|r| (pos(&r.anchor), r.variant));
        out
    }
}

fn spec_for(kind: SeqKind, (a, b, c): Seeds) -> RecurrenceSpec {
    match kind {
        SeqKind::PellPadovan => RecurrenceSpec::pell_padovan(a, b, c),
        _ => RecurrenceSpec::generalized_tribonacci(a, b, c),
    }
}

fn exact_outcome(closed: &BigRational, oracle: &BigRational) -> Outcome {
    if closed == oracle {
        Outcome::Pass
    } else {
        Outcome::Fail(
            RecordValue::Exact(closed.clone()),
            RecordValue::Exact(oracle.clone()),
        )
    }
}

fn identity_task(spec: &RecurrenceSpec, n_max: usize) -> Sink {
    let mut sink = Sink::default();
    let ids: Vec<IdentityId> = IdentityId::ALL
        .into_iter()
        .filter(|id| id.kind() == spec.kind())
        .collect();
    let Some(lo) = ids.iter().map(|id| id.required_range(n_max).0).min() else {
        return sink;
    };
    let hi = ids
        .iter()
        .map(|id| id.required_range(n_max).1)
        .max()
        .unwrap_or(lo);
    let w = window(spec, lo, hi);
    for n in 1..=n_max {
        let point = GridPoint::new(spec, n, None);
        for &id in &ids {
            let anchor = Anchor::Identity(id);
            let Ok(w) = &w else {
                for &v in id.variants() {
                    sink.add(anchor, v, &point, Outcome::OutOfHypothesis);
                }
                continue;
            };
            let oracle = big(&oracle_sum_in(OracleSum::for_identity(id), w, n));
            for &v in id.variants() {
                let outcome = match evaluate_in(id, w, n, v) {
                    Ok(val) => exact_outcome(&val.value, &oracle),
                    Err(_) => Outcome::OutOfHypothesis,
                };
                sink.add(anchor, v, &point, outcome);
            }
        }
    }
    sink
}

/// Every identity x variant x grid point against its literal sum.
pub fn run_identity_grid(grid: &IdentityGrid) -> Vec<VerificationRecord> {
    let mut tasks: Vec<(RecurrenceSpec, usize)> = Vec::new();
    for &kind in &grid.kinds {
        for &seeds in &grid.seeds {
            tasks.push((spec_for(kind, seeds), grid.n_max));
        }
    }
    for spec in &grid.general_specs {
        tasks.push((spec.clone(), grid.general_n_max));
    }
    tasks
        .par_iter()
        .map(|(spec, n_max)| identity_task(spec, *n_max))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Sink::default(), Sink::merge)
        .into_records()
}

/// Runs `f` once more with ten times the iteration budget when the spectral
/// part did not converge.
fn with_retry(f: impl Fn(SpectralOptions) -> Result<BoundCheck>) -> Result<BoundCheck> {
    let opts = SpectralOptions::default();
    let check = f(opts)?;
    let stalled = check.verdict == Verdict::NonConverged
        || check.bracket_verdict == Some(Verdict::NonConverged);
    if stalled {
        f(SpectralOptions {
            max_iters: opts.max_iters * 10,
            ..opts
        })
    } else {
        Ok(check)
    }
}

fn verdict_outcome(
    verdict: Verdict,
    closed: impl FnOnce() -> RecordValue,
    oracle: impl FnOnce() -> RecordValue,
) -> Outcome {
    match verdict {
        Verdict::Holds | Verdict::ExactMatch => Outcome::Pass,
        Verdict::NonConverged => Outcome::NonConverged,
        Verdict::Violated | Verdict::ExactMismatch => Outcome::Fail(closed(), oracle()),
    }
}

fn bounds_of(c: &BoundCheck) -> RecordValue {
    RecordValue::Bounds {
        lower: c.lower.unwrap_or(f64::NAN),
        upper: c.upper.unwrap_or(f64::NAN),
    }
}

fn main_outcome(c: &BoundCheck) -> Outcome {
    let closed = || match &c.closed_form {
        Some(q) => RecordValue::Exact(q.clone()),
        None => bounds_of(c),
    };
    let oracle = || match &c.observed {
        Observed::Exact(q) => RecordValue::Exact(q.clone()),
        Observed::Norm(x) => RecordValue::Norm(*x),
    };
    verdict_outcome(c.verdict, closed, oracle)
}

fn add_displays(sink: &mut Sink, t: TheoremId, c: &BoundCheck, point: &GridPoint) {
    for d in &c.displays {
        sink.add(
            Anchor::Display(t),
            d.variant,
            point,
            exact_outcome(&d.display, &d.direct),
        );
    }
}

fn bound_task(kind: SeqKind, seeds: Seeds, n: usize, rs: &[BigRational]) -> Sink {
    let mut sink = Sink::default();
    let spec = spec_for(kind, seeds);
    let point = GridPoint::new(&spec, n, None);
    for t in TheoremId::ALL.into_iter().filter(|t| t.kind == kind) {
        let main = Anchor::Theorem(t);
        match t.shape {
            Shape::RcircBounds => {
                for (i, r) in rs.iter().enumerate() {
                    let p = GridPoint::new(&spec, n, Some(r.clone()));
                    match with_retry(|o| theorems::rcirc_bounds_with(&spec, n, r, o)) {
                        Ok(c) => {
                            sink.add(main, Variant::AsPrinted, &p, main_outcome(&c));
                            if i == 0 {
                                add_displays(&mut sink, t, &c, &point);
                            }
                        }
                        Err(_) => sink.add(main, Variant::AsPrinted, &p, Outcome::OutOfHypothesis),
                    }
                }
            }
            Shape::Circ => match with_retry(|o| theorems::circulant_report_with(&spec, n, o)) {
                Ok(c) => {
                    sink.add(main, Variant::AsPrinted, &point, main_outcome(&c));
                    let bracket = c.bracket_verdict.unwrap_or(Verdict::NonConverged);
                    let norm = RecordValue::Norm(c.spectral.map_or(f64::NAN, |s| s.estimate));
                    let outcome = verdict_outcome(bracket, || bounds_of(&c), || norm);
                    sink.add(Anchor::Bracket(t), Variant::AsPrinted, &point, outcome);
                    add_displays(&mut sink, t, &c, &point);
                }
                Err(_) => {
                    sink.add(main, Variant::AsPrinted, &point, Outcome::OutOfHypothesis);
                    sink.add(
                        Anchor::Bracket(t),
                        Variant::AsPrinted,
                        &point,
                        Outcome::OutOfHypothesis,
                    );
                }
            },
            Shape::Semicirc | Shape::HankelFrob | Shape::HankelSpec | Shape::HankelOneInf => {
                for &v in t.variants() {
                    let res = match t.shape {
                        Shape::Semicirc => theorems::semicirculant_frobenius(&spec, n, v),
                        Shape::HankelFrob => theorems::hankel_frobenius(&spec, n, v),
                        Shape::HankelSpec => {
                            with_retry(|o| theorems::hankel_spectral_bounds_with(&spec, n, v, o))
                        }
                        _ => theorems::hankel_one_inf(&spec, n),
                    };
                    match res {
                        Ok(c) => {
                            sink.add(main, v, &point, main_outcome(&c));
                            if v == Variant::AsPrinted {
                                add_displays(&mut sink, t, &c, &point);
                            }
                        }
                        Err(_) => sink.add(main, v, &point, Outcome::OutOfHypothesis),
                    }
                }
            }
        }
    }
    sink
}

/// Every theorem x variant over families x seeds x orders (x scalars for the
/// r-circulant bounds), including identity-substituted displays.
pub fn run_bound_grid(grid: &BoundGrid) -> Vec<VerificationRecord> {
    let mut tasks = Vec::new();
    for &kind in &grid.kinds {
        for &seeds in &grid.seeds {
            for &n in &grid.ns {
                tasks.push((kind, seeds, n));
            }
        }
    }
    tasks
        .par_iter()
        .map(|&(kind, seeds, n)| bound_task(kind, seeds, n, &grid.rs))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Sink::default(), Sink::merge)
        .into_records()
}

/// Both grids of `preset` and the resulting ledger.
pub fn run_preset(preset: GridPreset) -> Result<(Vec<VerificationRecord>, ErrataLedger)> {
    let mut records = run_identity_grid(&preset.identity_grid());
    records.extend(run_bound_grid(&preset.bound_grid()));
    let ledger = emit_ledger(&records)?;
    Ok((records, ledger))
}

/// One closed-form evaluation next to its literal sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity_id: IdentityId,
    pub variant: Variant,
    pub spec: RecurrenceSpec,
    pub n: usize,
    #[serde(with = "crate::exact::rational_str")]
    pub closed: BigRational,
    #[serde(with = "crate::exact::rational_str")]
    pub oracle: BigRational,
    pub verdict: RecordVerdict,
}

pub fn check_identity(
    id: IdentityId,
    spec: &RecurrenceSpec,
    n: usize,
    variant: Variant,
) -> Result<IdentityCheck> {
    let value = evaluate(id, spec, n, variant)?;
    let oracle = big(&oracle_identity(id, spec, n)?);
    let verdict = if value.value == oracle {
        RecordVerdict::Match
    } else {
        RecordVerdict::Mismatch
    };
    Ok(IdentityCheck {
        identity_id: id,
        variant: value.variant,
        spec: spec.clone(),
        n,
        closed: value.value,
        oracle,
        verdict,
    })
}
