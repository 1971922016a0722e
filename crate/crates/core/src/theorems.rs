//! Norm theorems for r-circulant, circulant, semi-circulant and Hankel
//! matrices built on generalized tribonacci and Pell-Padovan sequences.
//!
//! Each function builds the matrix, computes the quantity the theorem talks
//! about directly, and compares it with the theorem's closed form or bounds.
//! Where a theorem writes a sum of squares through a closed-form identity, the substituted
//! display is checked against the direct sum as well (`BoundCheck::displays`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{big, sqrt_f64, to_f64};
use crate::norms::{
    frobenius_sq, op_one_inf, row_col_length_sq, spectral, SpectralEstimate, SpectralOptions,
};
use crate::recurrence::identities::{pp_square_sum_int, pp_t};
use crate::recurrence::{
    evaluate_in, window, Family, IdentityId, RecurrenceSpec, SeqKind, SequenceWindow, Variant,
};
use crate::structmat::{
    circulant, hankel, r_circulant, semi_circulant, MatrixKind, StructuredMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    RcircBounds,
    Circ,
    Semicirc,
    HankelFrob,
    HankelSpec,
    HankelOneInf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TheoremId {
    pub kind: SeqKind,
    pub shape: Shape,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = {
        const fn t(kind: SeqKind, shape: Shape) -> TheoremId {
            TheoremId { kind, shape }
        }
        use SeqKind::{PellPadovan as P, Tribonacci as T};
        use Shape::*;
        [
            t(T, RcircBounds),
            t(T, Circ),
            t(T, Semicirc),
            t(T, HankelFrob),
            t(T, HankelSpec),
            t(T, HankelOneInf),
            t(P, RcircBounds),
            t(P, Circ),
            t(P, Semicirc),
            t(P, HankelFrob),
            t(P, HankelSpec),
            t(P, HankelOneInf),
        ]
    };

    pub fn as_str(self) -> &'static str {
        use Shape::*;
        match (self.kind, self.shape) {
            (SeqKind::PellPadovan, RcircBounds) => "PP_RCIRC_BOUNDS",
            (SeqKind::PellPadovan, Circ) => "PP_CIRC",
            (SeqKind::PellPadovan, Semicirc) => "PP_SEMICIRC",
            (SeqKind::PellPadovan, HankelFrob) => "PP_HANKEL_FROB",
            (SeqKind::PellPadovan, HankelSpec) => "PP_HANKEL_SPEC",
            (SeqKind::PellPadovan, HankelOneInf) => "PP_HANKEL_ONEINF",
            (_, RcircBounds) => "TRIB_RCIRC_BOUNDS",
            (_, Circ) => "TRIB_CIRC",
            (_, Semicirc) => "TRIB_SEMICIRC",
            (_, HankelFrob) => "TRIB_HANKEL_FROB",
            (_, HankelSpec) => "TRIB_HANKEL_SPEC",
            (_, HankelOneInf) => "TRIB_HANKEL_ONEINF",
        }
    }

    pub fn variants(self) -> &'static [Variant] {
        match self.shape {
            Shape::Semicirc | Shape::HankelFrob => &[Variant::AsPrinted, Variant::Corrected],
            Shape::HankelSpec => &[Variant::AsPrinted, Variant::Repaired],
            _ => &[Variant::AsPrinted],
        }
    }

    /// Any non-printed request maps to the theorem's alternative form, if it has one.
    pub fn resolve(self, v: Variant) -> Variant {
        match (v, self.variants()) {
            (Variant::AsPrinted, _) | (_, [_]) => Variant::AsPrinted,
            (_, [_, alt]) => *alt,
            _ => unreachable!("at most two variants"),
        }
    }

    /// Whether the theorem's statement writes a sum of squares through a closed-form identity.
    pub fn has_display(self) -> bool {
        match self.shape {
            Shape::RcircBounds | Shape::Circ => true,
            Shape::HankelSpec => self.kind == SeqKind::PellPadovan,
            _ => false,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    Holds,
    Violated,
    ExactMatch,
    ExactMismatch,
    NonConverged,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::ExactMatch)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Observed {
    Norm(f64),
    Exact(#[serde(with = "crate::exact::rational_str")] BigRational),
}

/// A identity-substituted sum compared with the same sum taken term by term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplayCheck {
    pub variant: Variant,
    #[serde(with = "crate::exact::rational_str")]
    pub display: BigRational,
    #[serde(with = "crate::exact::rational_str")]
    pub direct: BigRational,
}

impl DisplayCheck {
    pub fn agrees(&self) -> bool {
        self.display == self.direct
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub theorem_id: TheoremId,
    pub variant: Variant,
    pub family: Family,
    pub seeds: (i64, i64, i64),
    pub n: usize,
    #[serde(with = "crate::exact::opt_rational_str")]
    pub scalar_r: Option<BigRational>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    #[serde(with = "crate::exact::opt_rational_str")]
    pub closed_form: Option<BigRational>,
    pub observed: Observed,
    pub verdict: Verdict,
    pub margin: f64,
    pub spectral: Option<SpectralEstimate>,
    /// Circulant only: the spectral bracket verdict next to the exact Frobenius one.
    pub bracket_verdict: Option<Verdict>,
    pub displays: Vec<DisplayCheck>,
}

/// `slack = 1e-9 * max(1, upper)`; a violation needs the certified lower witness
/// above the upper bound when iteration did not converge.
pub fn bound_verdict(lower: f64, upper: f64, sp: &SpectralEstimate) -> (Verdict, f64) {
    let slack = 1e-9 * upper.max(1.0);
    let obs = sp.estimate;
    let margin = (obs - lower).min(upper - obs);
    let verdict = if !sp.converged {
        if sp.lower_witness > upper + slack {
            Verdict::Violated
        } else {
            Verdict::NonConverged
        }
    } else if lower - slack <= obs && obs <= upper + slack {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    (verdict, margin)
}

fn exact_verdict(closed: &BigRational, observed: &BigRational) -> (Verdict, f64) {
    if closed == observed {
        (Verdict::ExactMatch, 0.0)
    } else {
        (Verdict::ExactMismatch, -to_f64(&(closed - observed).abs()))
    }
}

/// Terms of `spec` on the widest index range any theorem reads at order `n`.
fn terms(spec: &RecurrenceSpec, shape: Shape, n: usize) -> Result<(TheoremId, SequenceWindow)> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let kind = spec.kind();
    if kind == SeqKind::General {
        return Err(Error::UnsupportedFamily {
            what: "theorems".into(),
            family: spec.family().to_string(),
        });
    }
    let w = window(spec, -4, 2 * n as i64 + 5)?;
    Ok((TheoremId { kind, shape }, w))
}

fn r(w: &SequenceWindow, i: i64) -> BigRational {
    big(w.at(i))
}

fn sum_sq(w: &SequenceWindow, lo: i64, hi: i64) -> BigRational {
    (lo..=hi).fold(BigRational::zero(), |s, i| s + r(w, i) * r(w, i))
}

fn generating_row(w: &SequenceWindow, n: usize) -> Vec<BigRational> {
    (0..n as i64).map(|i| r(w, i)).collect()
}

fn sqrt_mul(x: &BigRational, y: &BigRational) -> f64 {
    sqrt_f64(x) * sqrt_f64(y)
}

/// Identity-substituted forms of `sum_{k=0}^{n-1} u_k^2` as the r-circulant and
/// circulant statements write them.
fn prefix_displays(id: TheoremId, w: &SequenceWindow, n: usize) -> Vec<DisplayCheck> {
    let direct = sum_sq(w, 0, n as i64 - 1);
    let n = n as i64;
    let t = |i: i64| w.at(i);
    match id.kind {
        SeqKind::PellPadovan => [Variant::AsPrinted, Variant::Corrected]
            .into_iter()
            .map(|v| {
                let display =
                    t(n + 1) * t(n + 1) - t(n - 2) * t(n - 2) - t(n - 4) * t(n - 4) + pp_t(w, v);
                DisplayCheck {
                    variant: v,
                    display: big(&display),
                    direct: direct.clone(),
                }
            })
            .collect(),
        _ => {
            let (a, b) = (t(0), t(1));
            let d = t(n) - t(n - 2);
            let e = t(-2) + a;
            let num = 4 * t(n - 1) * t(n) - 4 * a * b - &d * &d + &e * &e + 4 * a * a;
            let display = BigRational::new(num, BigInt::from(4));
            vec![DisplayCheck {
                variant: Variant::AsPrinted,
                display,
                direct,
            }]
        }
    }
}

fn base_check(
    id: TheoremId,
    variant: Variant,
    spec: &RecurrenceSpec,
    n: usize,
    observed: Observed,
) -> BoundCheck {
    BoundCheck {
        theorem_id: id,
        variant,
        family: spec.family(),
        seeds: spec.seeds(),
        n,
        scalar_r: None,
        lower: None,
        upper: None,
        closed_form: None,
        observed,
        verdict: Verdict::ExactMismatch,
        margin: 0.0,
        spectral: None,
        bracket_verdict: None,
        displays: Vec::new(),
    }
}

pub fn rcirc_bounds(spec: &RecurrenceSpec, n: usize, scalar_r: &BigRational) -> Result<BoundCheck> {
    rcirc_bounds_with(spec, n, scalar_r, SpectralOptions::default())
}

/// Spectral bounds for the r-circulant on `u_0, ..., u_{n-1}`. The `|r| >= 1`
/// branch is used for `|r| = 1`.
pub fn rcirc_bounds_with(
    spec: &RecurrenceSpec,
    n: usize,
    scalar_r: &BigRational,
    opts: SpectralOptions,
) -> Result<BoundCheck> {
    let (id, w) = terms(spec, Shape::RcircBounds, n)?;
    let a = r_circulant(&generating_row(&w, n), scalar_r)?;
    let all = sum_sq(&w, 0, n as i64 - 1);
    let tail = sum_sq(&w, 1, n as i64 - 1);
    let abs_r = scalar_r.abs();
    let (lower, upper) = if abs_r >= BigRational::one() {
        let head = r(&w, 0) * r(&w, 0) + &abs_r * &abs_r * &tail;
        (
            sqrt_f64(&all),
            sqrt_mul(&head, &(BigRational::one() + &tail)),
        )
    } else {
        (
            to_f64(&abs_r) * sqrt_f64(&all),
            sqrt_mul(&BigRational::from_integer(n.into()), &all),
        )
    };
    let sp = spectral(&a, opts)?;
    let (verdict, margin) = bound_verdict(lower, upper, &sp);
    Ok(BoundCheck {
        scalar_r: Some(scalar_r.clone()),
        lower: Some(lower),
        upper: Some(upper),
        verdict,
        margin,
        spectral: Some(sp),
        displays: prefix_displays(id, &w, n),
        ..base_check(id, Variant::AsPrinted, spec, n, Observed::Norm(sp.estimate))
    })
}

pub fn circulant_report(spec: &RecurrenceSpec, n: usize) -> Result<BoundCheck> {
    circulant_report_with(spec, n, SpectralOptions::default())
}

/// Exact `||A||_E^2 = n * sum u_k^2` plus the spectral bracket.
pub fn circulant_report_with(
    spec: &RecurrenceSpec,
    n: usize,
    opts: SpectralOptions,
) -> Result<BoundCheck> {
    let (id, w) = terms(spec, Shape::Circ, n)?;
    let a = circulant(&generating_row(&w, n))?;
    let all = sum_sq(&w, 0, n as i64 - 1);
    let tail = sum_sq(&w, 1, n as i64 - 1);
    let observed = frobenius_sq(&a);
    let closed = BigRational::from_integer(n.into()) * &all;
    let (verdict, margin) = exact_verdict(&closed, &observed);
    let lower = sqrt_f64(&all);
    let upper = sqrt_mul(&all, &(BigRational::one() + &tail));
    let sp = spectral(&a, opts)?;
    let (bracket, _) = bound_verdict(lower, upper, &sp);
    Ok(BoundCheck {
        lower: Some(lower),
        upper: Some(upper),
        closed_form: Some(closed),
        verdict,
        margin,
        spectral: Some(sp),
        bracket_verdict: Some(bracket),
        displays: prefix_displays(id, &w, n),
        ..base_check(id, Variant::AsPrinted, spec, n, Observed::Exact(observed))
    })
}

/// `sum_{m=1}^{n} sum_{k=1}^{m} u_k^2` in the requested variant, with the
/// empty double sum at `n = 0`.
fn double_sum(id: TheoremId, w: &SequenceWindow, n: usize, v: Variant) -> Result<BigRational> {
    if n == 0 {
        return Ok(BigRational::zero());
    }
    let ident = match id.kind {
        SeqKind::PellPadovan => IdentityId::PpDoubleSum,
        _ => IdentityId::TribDoubleSum,
    };
    Ok(evaluate_in(ident, w, n, v)?.value)
}

/// Exact `||A||_E^2` of the semi-circulant against the double-sum identity.
pub fn semicirculant_frobenius(
    spec: &RecurrenceSpec,
    n: usize,
    variant: Variant,
) -> Result<BoundCheck> {
    let (id, w) = terms(spec, Shape::Semicirc, n)?;
    let variant = id.resolve(variant);
    let observed = frobenius_sq(&semi_circulant(&w, n)?);
    let closed = double_sum(id, &w, n, variant)?;
    let (verdict, margin) = exact_verdict(&closed, &observed);
    Ok(BoundCheck {
        closed_form: Some(closed),
        verdict,
        margin,
        ..base_check(id, variant, spec, n, Observed::Exact(observed))
    })
}

/// Exact `||A||_E^2` of the Hankel matrix `h_ij = u_{i+j-1}`.
pub fn hankel_frobenius(spec: &RecurrenceSpec, n: usize, variant: Variant) -> Result<BoundCheck> {
    let (id, w) = terms(spec, Shape::HankelFrob, n)?;
    let variant = id.resolve(variant);
    let observed = frobenius_sq(&hankel(&w, n)?);
    let closed = match id.kind {
        SeqKind::PellPadovan => {
            let z2 = |i: i64| w.at(i) * w.at(i);
            let (n, m) = (n as i64, 2 * n as i64);
            let a2 = z2(0);
            let s = z2(-2) + z2(-1) + z2(1) + z2(2) + 2 * &a2 + 2 * (pp_t(&w, variant) - &a2);
            let f = z2(m) + 2 * z2(m - 1) + 2 * z2(m - 2) + z2(m - 3) + z2(m - 4)
                - 2 * z2(n)
                - 4 * z2(n - 1)
                - 4 * z2(n - 2)
                - 2 * z2(n - 3)
                - 2 * z2(n - 4)
                + s;
            big(&f)
        }
        _ => {
            let two = BigRational::from_integer(2.into());
            double_sum(id, &w, 2 * n - 1, variant)? - two * double_sum(id, &w, n - 1, variant)?
        }
    };
    let (verdict, margin) = exact_verdict(&closed, &observed);
    Ok(BoundCheck {
        closed_form: Some(closed),
        verdict,
        margin,
        ..base_check(id, variant, spec, n, Observed::Exact(observed))
    })
}

pub fn hankel_spectral_bounds(
    spec: &RecurrenceSpec,
    n: usize,
    variant: Variant,
) -> Result<BoundCheck> {
    hankel_spectral_bounds_with(spec, n, variant, SpectralOptions::default())
}

/// `||A||_E / sqrt(n) <= ||A||_2 <= upper`, where the printed upper bound is
/// `sqrt((sum_{1}^{n} u_i^2)(1 + sum_{2}^{n} u_i^2))` and the repaired one is
/// `r1(M) c1(N)` for the actual split `A = M o N`.
pub fn hankel_spectral_bounds_with(
    spec: &RecurrenceSpec,
    n: usize,
    variant: Variant,
    opts: SpectralOptions,
) -> Result<BoundCheck> {
    let (id, w) = terms(spec, Shape::HankelSpec, n)?;
    let variant = id.resolve(variant);
    let a = hankel(&w, n)?;
    let lower = sqrt_f64(&frobenius_sq(&a)) / (n as f64).sqrt();
    let upper = match variant {
        Variant::AsPrinted => {
            let first = sum_sq(&w, 1, n as i64);
            let rest = sum_sq(&w, 2, n as i64);
            sqrt_mul(&first, &(BigRational::one() + rest))
        }
        _ => {
            let (m, nn) = splits::hankel(&w, n);
            let (r1, _) = row_col_length_sq(&m);
            let (_, c1) = row_col_length_sq(&nn);
            sqrt_mul(&r1, &c1)
        }
    };
    let sp = spectral(&a, opts)?;
    let (verdict, margin) = bound_verdict(lower, upper, &sp);
    let displays = if id.has_display() {
        let direct = sum_sq(&w, 1, n as i64);
        [Variant::AsPrinted, Variant::Corrected]
            .into_iter()
            .map(|v| DisplayCheck {
                variant: v,
                display: big(&pp_square_sum_int(&w, n as i64, v)),
                direct: direct.clone(),
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(BoundCheck {
        lower: Some(lower),
        upper: Some(upper),
        verdict,
        margin,
        spectral: Some(sp),
        displays,
        ..base_check(id, variant, spec, n, Observed::Norm(sp.estimate))
    })
}

/// Operator 1- and inf-norms of the Hankel matrix against the telescoped sum.
/// Needs nonnegative Hankel entries.
pub fn hankel_one_inf(spec: &RecurrenceSpec, n: usize) -> Result<BoundCheck> {
    let (id, w) = terms(spec, Shape::HankelOneInf, n)?;
    if let Some(index) = (1..2 * n as i64).find(|&i| w.at(i).is_negative()) {
        return Err(Error::NegativeEntries { index });
    }
    let (one, inf) = op_one_inf(&hankel(&w, n)?);
    let n = n as i64;
    let t = |i: i64| w.at(i);
    let closed = match id.kind {
        SeqKind::PellPadovan => big(&(t(2 * n + 4) - t(n + 4))),
        _ => BigRational::new(t(2 * n + 2) - t(2 * n) - t(n + 2) + t(n), BigInt::from(2)),
    };
    let (mut verdict, mut margin) = exact_verdict(&closed, &one);
    if verdict.passed() && inf != closed {
        (verdict, margin) = exact_verdict(&closed, &inf);
    }
    Ok(BoundCheck {
        closed_form: Some(closed),
        verdict,
        margin,
        ..base_check(
            id,
            Variant::AsPrinted,
            spec,
            n as usize,
            Observed::Exact(one),
        )
    })
}

/// Hadamard factorizations used by the bound arguments.
pub mod splits {
    use super::*;

    fn dense(n: usize, f: impl Fn(usize, usize) -> BigRational) -> StructuredMatrix {
        StructuredMatrix::from_fn(n, MatrixKind::Dense, f)
    }

    /// `|r| >= 1`: `C` carries the r-circulant on and below the diagonal,
    /// `D` carries it strictly above; the other slots are 1.
    pub fn rcirc_large(
        row: &[BigRational],
        scalar_r: &BigRational,
    ) -> Result<(StructuredMatrix, StructuredMatrix)> {
        let a = r_circulant(row, scalar_r)?;
        let one = BigRational::one;
        let c = dense(
            a.n(),
            |i, j| if i >= j { a.entry(i, j).clone() } else { one() },
        );
        let d = dense(
            a.n(),
            |i, j| if i < j { a.entry(i, j).clone() } else { one() },
        );
        Ok((c, d))
    }

    /// `|r| < 1`: `C'` is 1 on and above the diagonal and `r` below; `D'` is the
    /// plain circulant.
    pub fn rcirc_small(
        row: &[BigRational],
        scalar_r: &BigRational,
    ) -> Result<(StructuredMatrix, StructuredMatrix)> {
        let d = crate::structmat::circulant(row)?;
        let c = dense(d.n(), |i, j| {
            if i <= j {
                BigRational::one()
            } else {
                scalar_r.clone()
            }
        });
        Ok((c, d))
    }

    /// `B` holds `u_{(j-i) mod n}` for `i >= j`, `C` holds it for `i < j`.
    pub fn circulant(row: &[BigRational]) -> Result<(StructuredMatrix, StructuredMatrix)> {
        let a = crate::structmat::circulant(row)?;
        let b = dense(a.n(), |i, j| {
            if i >= j {
                a.entry(i, j).clone()
            } else {
                BigRational::one()
            }
        });
        let c = dense(a.n(), |i, j| {
            if i < j {
                a.entry(i, j).clone()
            } else {
                BigRational::one()
            }
        });
        Ok((b, c))
    }

    /// `M` holds `u_{i+j-1}` for `i <= j`, `N` holds it for `i > j` (1-based).
    pub fn hankel(w: &SequenceWindow, n: usize) -> (StructuredMatrix, StructuredMatrix) {
        let u = |i: usize, j: usize| big(w.at((i + j + 1) as i64));
        let m = dense(n, |i, j| if i <= j { u(i, j) } else { BigRational::one() });
        let nn = dense(n, |i, j| if i > j { u(i, j) } else { BigRational::one() });
        (m, nn)
    }
}
