//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqmat::exact::{big, int, ratio, sum_squares};
use seqmat::norms::{
    frobenius_sq, hadamard_bound_check, op_one_inf, spectral, summary, SpectralOptions,
};
use seqmat::recurrence::{evaluate, term, window};
use seqmat::structmat::{circulant, hankel, left_circulant, r_circulant, semi_circulant, toeplitz};
use seqmat::theorems::Observed;
use seqmat::theorems::{self, Verdict};
use seqmat::verify::{
    golden_ledger, run_bound_grid, run_identity_grid, RecordValue, RecordVerdict,
    VerificationRecord,
};
use seqmat::{BigRational, GridPreset, IdentityId, RecurrenceSpec, StructuredMatrix, Variant};

/// Spectral accuracy against closed forms.
const SPECTRAL_ABS_TOL: f64 = 1e-9;
/// Sandwich slack, relative to `max(1, frobenius)`.
const SANDWICH_REL_SLACK: f64 = 1e-9;
/// Relative slack of the Hadamard product bound.
const HADAMARD_REL_SLACK: f64 = 1e-9;
/// Tolerance on the printed Hankel upper bound (2.0) and its observed norm.
const HANKEL_EXAMPLE_TOL: f64 = 1e-9;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn seeds() -> impl Iterator<Item = (i64, i64, i64)> {
    (0..4).flat_map(|a| (0..4).flat_map(move |b| (0..4).map(move |c| (a, b, c))))
}

fn families(s: (i64, i64, i64)) -> [RecurrenceSpec; 2] {
    [
        RecurrenceSpec::generalized_tribonacci(s.0, s.1, s.2),
        RecurrenceSpec::pell_padovan(s.0, s.1, s.2),
    ]
}

fn record<'a>(
    records: &'a [VerificationRecord],
    anchor: &str,
    v: Variant,
) -> &'a VerificationRecord {
    records
        .iter()
        .find(|r| r.anchor.name() == anchor && r.variant == v)
        .unwrap_or_else(|| panic!("{anchor} {v}"))
}

fn show(v: &RecordValue) -> String {
    match v {
        RecordValue::Exact(q) => q.to_string(),
        RecordValue::Bounds { lower, upper } => format!("[{lower}, {upper}]"),
        RecordValue::Norm(x) => x.to_string(),
    }
}

fn show_observed(v: &Observed) -> String {
    match v {
        Observed::Exact(q) => q.to_string(),
        Observed::Norm(x) => x.to_string(),
    }
}

fn describe_failure(r: &VerificationRecord) -> String {
    match &r.counterexample {
        Some(cx) => format!(
            "{} {}: {}/{} points fail, first at seeds {:?} n={} ({} vs oracle {})",
            r.anchor,
            r.variant,
            r.failures,
            r.points,
            cx.point.seeds,
            cx.point.n,
            show(&cx.closed),
            show(&cx.oracle)
        ),
        None => format!("{} {}: verdict {:?}", r.anchor, r.variant, r.verdict),
    }
}

fn require(
    records: &[VerificationRecord],
    wanted: &[(&str, Variant, RecordVerdict)],
) -> Vec<String> {
    wanted
        .iter()
        .filter_map(|&(anchor, v, verdict)| {
            let r = record(records, anchor, v);
            (r.verdict != verdict).then(|| describe_failure(r))
        })
        .collect()
}

fn verdict(problems: Vec<String>, ok: String) -> Check {
    if problems.is_empty() {
        Ok(ok)
    } else {
        Err(problems.join("; "))
    }
}

/// Criterion 1: Recurrence closure on [-20, 60] and seed recovery from the backward terms.
fn recurrence_engine() -> Check {
    let mut checked = 0;
    for s in seeds() {
        for spec in families(s) {
            let (p, q, r) = spec.coeffs();
            let w = window(&spec, -23, 60).map_err(|e| e.to_string())?;
            for n in -20..=60i64 {
                let lhs = w.get(n).unwrap();
                let rhs = p * w.get(n - 1).unwrap()
                    + q * w.get(n - 2).unwrap()
                    + r * w.get(n - 3).unwrap();
                if *lhs != rhs {
                    return Err(format!(
                        "{:?} seeds {s:?}: recurrence fails at n={n}",
                        spec.family()
                    ));
                }
                if term(&spec, n).map_err(|e| e.to_string())? != *lhs {
                    return Err(format!(
                        "{:?} seeds {s:?}: term({n}) disagrees with the window",
                        spec.family()
                    ));
                }
                checked += 1;
            }
            let mut fwd: Vec<_> = (-20..=-18).map(|i| w.get(i).unwrap().clone()).collect();
            while fwd.len() < 23 {
                let k = fwd.len();
                fwd.push(p * &fwd[k - 1] + q * &fwd[k - 2] + r * &fwd[k - 3]);
            }
            let back = (fwd[20].clone(), fwd[21].clone(), fwd[22].clone());
            if back != (s.0.into(), s.1.into(), s.2.into()) {
                return Err(format!(
                    "{:?} seeds {s:?}: forward pass from index -20 gives {back:?}",
                    spec.family()
                ));
            }
        }
    }
    Ok(format!(
        "{checked} terms satisfy the recurrence; seeds recovered for 128 specs"
    ))
}

/// Criterion 2: Identities whose printed (or proof) form should match on the full grid.
fn confirmed_identities(records: &[VerificationRecord]) -> Check {
    use RecordVerdict::Match;
    let wanted = [
        ("TRIB_SQUARE_SUM", Variant::AsPrinted, Match),
        ("TRIB_LAG2_PRODUCT", Variant::Corrected, Match),
        ("PP_SUM", Variant::AsPrinted, Match),
        ("PP_SQUARE_SUM", Variant::AsPrinted, Match),
        ("PP_DOUBLE_SUM", Variant::AsPrinted, Match),
        ("GEN_SUM", Variant::AsPrinted, Match),
    ];
    let gen = record(records, "GEN_SUM", Variant::AsPrinted).points;
    verdict(
        require(records, &wanted),
        format!("6 identity forms match the oracle exactly ({gen} general-sum points)"),
    )
}

/// Criterion 3: Printed-form counterexamples and corrected forms on the full grid.
fn errata_detection(records: &[VerificationRecord]) -> Check {
    let trib = RecurrenceSpec::tribonacci();
    let mut problems = Vec::new();
    let expect = [
        (IdentityId::TribSumClosed, 1, ratio(1, 2), int(1)),
        (IdentityId::TribAdjProduct, 1, int(2), int(1)),
        (IdentityId::TribDoubleSum, 2, ratio(7, 2), int(3)),
        (IdentityId::TribLag2Product, 3, int(6), int(2)),
    ];
    for (id, n, closed, oracle) in expect {
        let got = evaluate(id, &trib, n, Variant::AsPrinted)
            .map_err(|e| e.to_string())?
            .value;
        let truth = big(&seqmat::verify::oracle_identity(id, &trib, n).map_err(|e| e.to_string())?);
        if got != closed || truth != oracle {
            problems.push(format!(
                "{id:?} n={n}: printed {got} vs oracle {truth}, expected {closed} vs {oracle}"
            ));
        }
    }
    use RecordVerdict::Match;
    let wanted = [
        ("TRIB_SUM_CLOSED", Variant::Corrected, Match),
        ("TRIB_ADJ_PRODUCT", Variant::Corrected, Match),
        ("TRIB_DOUBLE_SUM", Variant::Corrected, Match),
        ("TRIB_LAG2_PRODUCT", Variant::Corrected, Match),
    ];
    problems.extend(require(records, &wanted));
    verdict(
        problems,
        "4 printed counterexamples reproduced; corrected forms match on the full grid".into(),
    )
}

/// Criterion 4: Exact norm theorems for n in [1, 32] over the nonnegative seed grid.
fn exact_norm_theorems() -> Check {
    let mut problems = Vec::new();
    let mut note = |what: String| {
        if problems.len() < 6 {
            problems.push(what);
        }
    };
    let mut points = 0;
    for s in seeds() {
        for spec in families(s) {
            let name = if spec.kind() == seqmat::SeqKind::PellPadovan {
                "PP"
            } else {
                "TRIB"
            };
            let variant = if name == "PP" {
                Variant::AsPrinted
            } else {
                Variant::Corrected
            };
            for n in 1..=32usize {
                points += 1;
                let w = window(&spec, 0, n as i64 - 1).map_err(|e| e.to_string())?;
                let row: Vec<BigRational> = w.terms.iter().map(big).collect();
                let circ = frobenius_sq(&circulant(&row).map_err(|e| e.to_string())?);
                if circ != BigRational::from_integer(n.into()) * sum_squares(&row) {
                    note(format!("{name} circulant seeds {s:?} n={n}"));
                }
                let checks = [
                    (
                        "semi-circulant",
                        theorems::semicirculant_frobenius(&spec, n, variant),
                    ),
                    (
                        "Hankel Frobenius",
                        theorems::hankel_frobenius(&spec, n, variant),
                    ),
                    ("Hankel 1/inf", theorems::hankel_one_inf(&spec, n)),
                ];
                for (what, c) in checks {
                    let c = c.map_err(|e| e.to_string())?;
                    if c.verdict != Verdict::ExactMatch {
                        note(format!(
                            "{name} {what} seeds {s:?} n={n}: closed {} vs direct {}",
                            c.closed_form
                                .as_ref()
                                .map(ToString::to_string)
                                .unwrap_or_default(),
                            show_observed(&c.observed)
                        ));
                    }
                }
                let hw = window(&spec, 1, 2 * n as i64 - 1).map_err(|e| e.to_string())?;
                let (one, inf) = op_one_inf(&hankel(&hw, n).map_err(|e| e.to_string())?);
                if one != inf {
                    note(format!(
                        "{name} Hankel seeds {s:?} n={n}: op-1 {one} != op-inf {inf}"
                    ));
                }
            }
        }
    }
    verdict(
        problems,
        format!("{points} (family, seeds, n) points: all exact norm identities hold"),
    )
}

fn sandwich_violation(a: &StructuredMatrix) -> Option<String> {
    let s = summary(a).ok()?;
    let n = a.n() as f64;
    let slack = SANDWICH_REL_SLACK * s.frobenius.max(1.0);
    let ok = s.frobenius / n.sqrt() - slack <= s.spectral_estimate
        && s.spectral_estimate <= s.frobenius + slack
        && s.spectral_lower_witness <= s.spectral_estimate;
    (!ok).then(|| {
        format!(
            "n={} frobenius {} spectral {}",
            a.n(),
            s.frobenius,
            s.spectral_estimate
        )
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> StructuredMatrix {
    StructuredMatrix::from_rows(
        (0..n)
            .map(|_| (0..n).map(|_| int(rng.random_range(-9..=9))).collect())
            .collect(),
    )
    .expect("square")
}

/// Criterion 5: Spectral accuracy on closed forms and the Frobenius sandwich everywhere.
fn spectral_accuracy() -> Check {
    let opts = SpectralOptions::default();
    let sigma = |m: &StructuredMatrix| {
        spectral(m, opts)
            .map(|s| s.estimate)
            .map_err(|e| e.to_string())
    };
    let sym =
        StructuredMatrix::from_rows(vec![vec![int(1), int(1)], vec![int(1), int(2)]]).unwrap();
    let want = (3.0 + 5f64.sqrt()) / 2.0;
    let got = sigma(&sym)?;
    if (got - want).abs() > SPECTRAL_ABS_TOL {
        return Err(format!("[[1,1],[1,2]]: {got} vs {want}"));
    }
    for n in 1..=16 {
        let id = sigma(&StructuredMatrix::identity(n))?;
        let ones = sigma(&StructuredMatrix::ones(n))?;
        if (id - 1.0).abs() > SPECTRAL_ABS_TOL || (ones - n as f64).abs() > SPECTRAL_ABS_TOL {
            return Err(format!("n={n}: identity {id}, all-ones {ones}"));
        }
    }
    let mut count = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.random_range(1..=8);
        let m = random_matrix(&mut rng, n);
        count += 1;
        if let Some(v) = sandwich_violation(&m) {
            return Err(format!("random matrix: {v}"));
        }
    }
    for s in seeds() {
        for spec in families(s) {
            for n in [1usize, 2, 3, 5, 8, 13] {
                let w = window(&spec, -(n as i64), 2 * n as i64).map_err(|e| e.to_string())?;
                let row: Vec<BigRational> = (0..n as i64).map(|i| big(w.get(i).unwrap())).collect();
                let ms = [
                    r_circulant(&row, &ratio(-1, 2)),
                    r_circulant(&row, &int(3)),
                    circulant(&row),
                    left_circulant(&row),
                    semi_circulant(&w, n),
                    hankel(&w, n),
                    toeplitz(&w, n),
                ];
                for m in ms {
                    let m = m.map_err(|e| e.to_string())?;
                    count += 1;
                    if let Some(v) = sandwich_violation(&m) {
                        return Err(format!("{:?} seeds {s:?}: {v}", m.kind()));
                    }
                }
            }
        }
    }
    Ok(format!(
        "closed forms within {SPECTRAL_ABS_TOL:e}; sandwich holds on {count} matrices"
    ))
}

/// Criterion 6: Bound theorems: r-circulant and repaired Hankel bounds hold; the printed
/// Hankel upper bound fails at n = 2.
fn bound_theorems(records: &[VerificationRecord]) -> Check {
    use RecordVerdict::Holds;
    let mut problems = require(
        records,
        &[
            ("TRIB_RCIRC_BOUNDS", Variant::AsPrinted, Holds),
            ("PP_RCIRC_BOUNDS", Variant::AsPrinted, Holds),
            ("TRIB_HANKEL_SPEC", Variant::Repaired, Holds),
            ("PP_HANKEL_SPEC", Variant::Repaired, Holds),
        ],
    );
    let golden = (3.0 + 5f64.sqrt()) / 2.0;
    for spec in [
        RecurrenceSpec::tribonacci(),
        RecurrenceSpec::pell_padovan(1, 1, 1),
    ] {
        let c = theorems::hankel_spectral_bounds(&spec, 2, Variant::AsPrinted)
            .map_err(|e| e.to_string())?;
        let observed = c.spectral.map_or(f64::NAN, |s| s.estimate);
        let upper = c.upper.unwrap_or(f64::NAN);
        if c.verdict != Verdict::Violated
            || (upper - 2.0).abs() > HANKEL_EXAMPLE_TOL
            || (observed - golden).abs() > HANKEL_EXAMPLE_TOL
        {
            problems.push(format!(
                "{:?} n=2: {:?}, upper {upper}, observed {observed}",
                spec.family(),
                c.verdict
            ));
        }
    }
    for anchor in ["TRIB_HANKEL_SPEC", "PP_HANKEL_SPEC"] {
        let r = record(records, anchor, Variant::AsPrinted);
        if r.verdict != RecordVerdict::Violated
            || r.counterexample.as_ref().map(|c| c.point.n) != Some(2)
        {
            problems.push(format!("{anchor} printed: {}", describe_failure(r)));
        }
    }
    let rc = record(records, "TRIB_RCIRC_BOUNDS", Variant::AsPrinted).points
        + record(records, "PP_RCIRC_BOUNDS", Variant::AsPrinted).points;
    verdict(
        problems,
        format!("{rc} r-circulant points hold; printed Hankel upper fails at n=2; repaired holds"),
    )
}

/// Criterion 7: Hadamard product bound on seeded random integer matrices.
fn hadamard_property() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = Vec::new();
    for i in 0..1000 {
        let n = rng.random_range(1..=8);
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        let h = hadamard_bound_check(&a, &b).map_err(|e| e.to_string())?;
        if h.lhs > h.rhs * (1.0 + HADAMARD_REL_SLACK) {
            violations.push(format!("pair {i} (n={n}): {} > {}", h.lhs, h.rhs));
        }
    }
    verdict(violations, "1000 pairs, zero violations".into())
}

/// Criterion 8: Two CLI runs of the default preset agree byte for byte with the golden ledger.
fn determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_seqmat"))
            .args(["verify", "--grid-preset", "default", "--format", "json"])
            .env_remove("SEQMAT_MAX_INDEX")
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    let golden = golden_ledger(GridPreset::Default).as_bytes();
    match (first.status.code(), second.status.code()) {
        (Some(0), Some(0)) if first.stdout == second.stdout && first.stdout == golden => {
            Ok(format!(
                "two runs identical to the golden ledger ({} bytes)",
                golden.len()
            ))
        }
        (a, b) => Err(format!(
            "exit codes {a:?}/{b:?}, runs equal: {}, matches golden: {}",
            first.stdout == second.stdout,
            first.stdout == golden
        )),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let identity_records = run_identity_grid(&GridPreset::Default.identity_grid());
    let bound_records = run_bound_grid(&GridPreset::Default.bound_grid());
    let criteria: [Criterion; 8] = [
        ("recurrence engine", Box::new(recurrence_engine)),
        (
            "confirmed identities",
            Box::new(|| confirmed_identities(&identity_records)),
        ),
        (
            "errata detection",
            Box::new(|| errata_detection(&identity_records)),
        ),
        ("exact norm theorems", Box::new(exact_norm_theorems)),
        ("spectral estimator accuracy", Box::new(spectral_accuracy)),
        (
            "bound theorems",
            Box::new(|| bound_theorems(&bound_records)),
        ),
        ("Hadamard bound property", Box::new(hadamard_property)),
        ("ledger determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of 8 passed in {:.1}s",
        8 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
