use std::fmt::Write as _;

use serde::Serialize;

use super::{Anchor, Counterexample, GridPreset, RecordValue, RecordVerdict, VerificationRecord};
use crate::error::{Error, Result};
use crate::exact::format_rational;
use crate::recurrence::{IdentityId, SeqKind, Variant};
use crate::theorems::Shape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LedgerStatus {
    Confirmed,
    TypoCorrected,
    Invalid,
}

impl LedgerStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LedgerStatus::Confirmed => "Confirmed",
            LedgerStatus::TypoCorrected => "TypoCorrected",
            LedgerStatus::Invalid => "Invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub variant: Variant,
    pub verdict: RecordVerdict,
    pub points: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub anchor: Anchor,
    pub status: LedgerStatus,
    /// Smallest failing point of the printed form.
    pub counterexample: Option<Counterexample>,
    /// The form that passes in place of the printed one.
    pub corrected_ref: Option<String>,
    pub description: String,
    pub variants: Vec<VariantSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ErrataLedger {
    pub entries: Vec<LedgerEntry>,
}

fn describe(anchor: Anchor) -> String {
    let seq = |k: SeqKind| if k == SeqKind::PellPadovan { "Z" } else { "R" };
    match anchor {
        Anchor::Identity(id) => match id {
            IdentityId::GenSum => "Q[1] + ... + Q[n] for a general third-order recurrence".into(),
            IdentityId::TribSumClosed | IdentityId::PpSum => {
                format!("closed form of sum {0}[k], k = 1..n", seq(id.kind()))
            }
            IdentityId::TribSquareSum | IdentityId::PpSquareSum => {
                format!("closed form of sum {0}[k]^2, k = 1..n", seq(id.kind()))
            }
            IdentityId::TribLag2Product => "closed form of sum R[k] R[k-2], k = 1..n".into(),
            IdentityId::TribAdjProduct => "closed form of sum R[k] R[k+1], k = 1..n".into(),
            IdentityId::TribDoubleSum | IdentityId::PpDoubleSum => {
                format!(
                    "closed form of sum over m = 1..n of sum {0}[k]^2, k = 1..m",
                    seq(id.kind())
                )
            }
        },
        Anchor::Theorem(t) => match t.shape {
            Shape::RcircBounds => "spectral norm bounds for the r-circulant matrix".into(),
            Shape::Circ => "Frobenius norm of the circulant matrix".into(),
            Shape::Semicirc => "Frobenius norm of the semi-circulant matrix".into(),
            Shape::HankelFrob => "Frobenius norm of the Hankel matrix".into(),
            Shape::HankelSpec => "spectral norm bounds for the Hankel matrix".into(),
            Shape::HankelOneInf => "operator 1- and inf-norms of the Hankel matrix".into(),
        },
        Anchor::Display(t) => {
            format!("sum of squares inside the {} statement, written through the square-sum closed form", t.as_str())
        }
        Anchor::Bracket(_) => "spectral norm bracket for the circulant matrix".into(),
    }
}

fn corrected_ref(anchor: Anchor) -> &'static str {
    match anchor.name().as_str() {
        "TRIB_SUM_CLOSED" => "(R[n+3] - R[n+1] - R[2] - R[0]) / 2",
        "TRIB_LAG2_PRODUCT" => "((R[n+1] - R[n-1])^2 - (R[-2] + R[0])^2) / 4",
        "TRIB_ADJ_PRODUCT" => {
            "(B[n] - H[n] + R[n]^2 + R[n-1]^2 + R[n-2]^2 + R[n-2](R[n-3] + 2R[n-1] - R[n]) \
             + 2R[n](R[n-1] + R[n+1]) + b(b - c) - ac) / 2, with A read as H (square sum)"
        }
        "TRIB_DOUBLE_SUM" => {
            "(4C[n] - 2H[n] + 2B[n] - 4nab - a^2 + b^2 - 2bR[-1] + R[n]^2 + n(R[-2] + a)^2 \
             - R[n+1]^2 + 2R[n+1]R[n-1]) / 4, with A read as H and corrected B, C"
        }
        "TRIB_SEMICIRC" | "TRIB_HANKEL_FROB" => "corrected double-sum closed form",
        "TRIB_HANKEL_SPEC" | "PP_HANKEL_SPEC" => {
            "upper bound r1(M) c1(N) from the split A = M o N (M: i <= j, N: i > j)"
        }
        _ => "constant T = 2a(a - c) + (b - c)^2",
    }
}

/// Rolls records up into one entry per anchor: printed form passes ->
/// Confirmed; a Corrected form passes -> TypoCorrected; only a Repaired bound
/// passes, or nothing passes -> Invalid.
pub fn emit_ledger(records: &[VerificationRecord]) -> Result<ErrataLedger> {
    let mut entries = Vec::new();
    for anchor in Anchor::registry() {
        let mut found = Vec::new();
        for &v in anchor.variants() {
            let rec = records
                .iter()
                .find(|r| r.anchor == anchor && r.variant == v)
                .ok_or_else(|| Error::IncompleteCoverage(format!("{anchor} ({v})")))?;
            found.push(rec);
        }
        let printed = found[0];
        let alt = found.get(1).copied();
        let (status, corrected) = if printed.passed() {
            (LedgerStatus::Confirmed, None)
        } else {
            match alt {
                Some(r) if r.passed() && r.variant == Variant::Corrected => (
                    LedgerStatus::TypoCorrected,
                    Some(corrected_ref(anchor).to_string()),
                ),
                Some(r) if r.passed() => (
                    LedgerStatus::Invalid,
                    Some(corrected_ref(anchor).to_string()),
                ),
                _ => (LedgerStatus::Invalid, None),
            }
        };
        entries.push(LedgerEntry {
            anchor,
            status,
            counterexample: if printed.passed() {
                None
            } else {
                printed.counterexample.clone()
            },
            corrected_ref: corrected,
            description: describe(anchor),
            variants: found
                .iter()
                .map(|r| VariantSummary {
                    variant: r.variant,
                    verdict: r.verdict,
                    points: r.points,
                    failures: r.failures,
                })
                .collect(),
        });
    }
    Ok(ErrataLedger { entries })
}

fn value_text(v: &RecordValue) -> String {
    match v {
        RecordValue::Exact(q) => format_rational(q),
        RecordValue::Bounds { lower, upper } => format!("[{lower}, {upper}]"),
        RecordValue::Norm(x) => x.to_string(),
    }
}

fn point_text(cx: &Counterexample) -> String {
    let p = &cx.point;
    let (a, b, c) = p.seeds;
    let mut s = format!("{} seeds ({a},{b},{c}) n={}", p.family, p.n);
    if let Some(r) = &p.r {
        let _ = write!(s, " r={}", format_rational(r));
    }
    s
}

impl ErrataLedger {
    pub fn entry(&self, anchor: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.anchor.name() == anchor)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("ledger serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Serde(e.to_string());
        w.write_record([
            "anchor",
            "status",
            "counterexample",
            "closed",
            "oracle",
            "corrected_ref",
        ])
        .map_err(io)?;
        for e in &self.entries {
            let (point, closed, oracle) = match &e.counterexample {
                Some(cx) => (
                    point_text(cx),
                    value_text(&cx.closed),
                    value_text(&cx.oracle),
                ),
                None => Default::default(),
            };
            let name = e.anchor.name();
            let fields = [
                name.as_str(),
                e.status.as_str(),
                &point,
                &closed,
                &oracle,
                e.corrected_ref.as_deref().unwrap_or(""),
            ];
            w.write_record(fields).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serde(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| anchor | status | counterexample (closed vs oracle) | corrected form |\n|---|---|---|---|\n");
        for e in &self.entries {
            let cx = e
                .counterexample
                .as_ref()
                .map(|cx| {
                    format!(
                        "{}: {} vs {}",
                        point_text(cx),
                        value_text(&cx.closed),
                        value_text(&cx.oracle)
                    )
                })
                .unwrap_or_default();
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                e.anchor,
                e.status.as_str(),
                cx,
                e.corrected_ref.as_deref().unwrap_or("").replace('|', "\\|")
            );
        }
        s.push_str(
            "\nNotes:\n\n\
             - Confirmation is over a finite grid and is not a proof. Whether the corrected \
             adjacent-product and double-sum forms hold for every n is open.\n\
             - The left-circulant construction uses row i = u[(i + j) mod n]; the printed display \
             agrees with this rule on its first two rows only.\n",
        );
        s
    }
}

/// Committed ledger for `preset`.
pub fn golden_ledger(preset: GridPreset) -> &'static str {
    match preset {
        GridPreset::Default => include_str!("../../golden/ledger-default.json"),
        GridPreset::Smoke => include_str!("../../golden/ledger-smoke.json"),
    }
}
