//! Closed-form sum identities for the generalized tribonacci and Pell-Padovan
//! sequences, each kept in its printed form and, where the printed form is
//! wrong, a corrected form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{window, RecurrenceSpec, SeqKind, SequenceWindow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    AsPrinted,
    Corrected,
    /// A replacement bound built from a valid argument rather than a typo fix.
    Repaired,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::AsPrinted => "as-printed",
            Variant::Corrected => "corrected",
            Variant::Repaired => "repaired",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-printed" => Ok(Variant::AsPrinted),
            "corrected" => Ok(Variant::Corrected),
            "repaired" => Ok(Variant::Repaired),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    #[serde(rename = "GEN_SUM")]
    GenSum,
    #[serde(rename = "TRIB_SUM_CLOSED")]
    TribSumClosed,
    #[serde(rename = "TRIB_SQUARE_SUM")]
    TribSquareSum,
    #[serde(rename = "TRIB_LAG2_PRODUCT")]
    TribLag2Product,
    #[serde(rename = "TRIB_ADJ_PRODUCT")]
    TribAdjProduct,
    #[serde(rename = "TRIB_DOUBLE_SUM")]
    TribDoubleSum,
    #[serde(rename = "PP_SUM")]
    PpSum,
    #[serde(rename = "PP_SQUARE_SUM")]
    PpSquareSum,
    #[serde(rename = "PP_DOUBLE_SUM")]
    PpDoubleSum,
}

impl IdentityId {
    pub const ALL: [IdentityId; 9] = [
        IdentityId::GenSum,
        IdentityId::TribSumClosed,
        IdentityId::TribSquareSum,
        IdentityId::TribLag2Product,
        IdentityId::TribAdjProduct,
        IdentityId::TribDoubleSum,
        IdentityId::PpSum,
        IdentityId::PpSquareSum,
        IdentityId::PpDoubleSum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::GenSum => "GEN_SUM",
            IdentityId::TribSumClosed => "TRIB_SUM_CLOSED",
            IdentityId::TribSquareSum => "TRIB_SQUARE_SUM",
            IdentityId::TribLag2Product => "TRIB_LAG2_PRODUCT",
            IdentityId::TribAdjProduct => "TRIB_ADJ_PRODUCT",
            IdentityId::TribDoubleSum => "TRIB_DOUBLE_SUM",
            IdentityId::PpSum => "PP_SUM",
            IdentityId::PpSquareSum => "PP_SQUARE_SUM",
            IdentityId::PpDoubleSum => "PP_DOUBLE_SUM",
        }
    }

    /// Sequence shape the identity is stated for.
    pub fn kind(self) -> SeqKind {
        match self {
            IdentityId::GenSum => SeqKind::General,
            IdentityId::PpSum | IdentityId::PpSquareSum | IdentityId::PpDoubleSum => {
                SeqKind::PellPadovan
            }
            _ => SeqKind::Tribonacci,
        }
    }

    pub fn variants(self) -> &'static [Variant] {
        match self {
            IdentityId::GenSum | IdentityId::TribSquareSum | IdentityId::PpSum => {
                &[Variant::AsPrinted]
            }
            _ => &[Variant::AsPrinted, Variant::Corrected],
        }
    }

    /// Maps a requested variant onto one this identity has: single-form
    /// identities evaluate their printed form for any request.
    pub fn resolve(self, v: Variant) -> Variant {
        if self.variants().contains(&v) {
            v
        } else if v != Variant::AsPrinted && self.variants().contains(&Variant::Corrected) {
            Variant::Corrected
        } else {
            Variant::AsPrinted
        }
    }

    /// Inclusive index range the closed form reads at order `n`.
    pub fn required_range(self, n: usize) -> (i64, i64) {
        let n = n as i64;
        match self {
            IdentityId::GenSum => (0, n + 3),
            _ => (-4, n + 5),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityValue {
    pub identity_id: IdentityId,
    pub variant: Variant,
    #[serde(with = "crate::exact::rational_str")]
    pub value: BigRational,
}

fn check_kind(id: IdentityId, spec: &RecurrenceSpec) -> Result<()> {
    let ok = match id.kind() {
        SeqKind::General => true,
        k => spec.kind() == k,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedFamily {
            what: id.as_str().to_string(),
            family: spec.family().to_string(),
        })
    }
}

/// Evaluates identity `id` at order `n` for `spec`.
pub fn evaluate(
    id: IdentityId,
    spec: &RecurrenceSpec,
    n: usize,
    variant: Variant,
) -> Result<IdentityValue> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    check_kind(id, spec)?;
    let (lo, hi) = id.required_range(n);
    evaluate_in(id, &window(spec, lo, hi)?, n, variant)
}

/// Same as [`evaluate`], reading terms from a caller-supplied window.
pub fn evaluate_in(
    id: IdentityId,
    w: &SequenceWindow,
    n: usize,
    variant: Variant,
) -> Result<IdentityValue> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    check_kind(id, &w.spec)?;
    let (lo, hi) = id.required_range(n);
    if w.lo > lo {
        return Err(Error::MissingIndex(lo));
    }
    if w.hi() < hi {
        return Err(Error::MissingIndex(w.hi() + 1));
    }
    let variant = id.resolve(variant);
    let value = match id {
        IdentityId::GenSum => general_sum_in(w, n)?,
        IdentityId::TribSumClosed => trib_sum(w, n, variant),
        IdentityId::TribSquareSum => trib_h(w, n),
        IdentityId::TribLag2Product => trib_b(w, n, variant),
        IdentityId::TribAdjProduct => trib_c(w, n, variant),
        IdentityId::TribDoubleSum => trib_m(w, n, variant),
        IdentityId::PpSum => pp_sum(w, n),
        IdentityId::PpSquareSum => pp_square_sum(w, n, variant),
        IdentityId::PpDoubleSum => pp_double_sum(w, n, variant),
    };
    Ok(IdentityValue {
        identity_id: id,
        variant,
        value,
    })
}

fn for_kind(
    spec: &RecurrenceSpec,
    what: &str,
    trib: Option<IdentityId>,
    pp: Option<IdentityId>,
) -> Result<IdentityId> {
    match spec.kind() {
        SeqKind::Tribonacci => trib,
        SeqKind::PellPadovan => pp,
        SeqKind::General => None,
    }
    .ok_or_else(|| Error::UnsupportedFamily {
        what: what.to_string(),
        family: spec.family().to_string(),
    })
}

/// General third-order sum `Q[1] + ... + Q[n]`; undefined when `p + q + r = 1`.
pub fn sum_general(spec: &RecurrenceSpec, n: usize) -> Result<BigRational> {
    Ok(evaluate(IdentityId::GenSum, spec, n, Variant::AsPrinted)?.value)
}

pub fn closed_sum(spec: &RecurrenceSpec, n: usize, variant: Variant) -> Result<IdentityValue> {
    let id = for_kind(
        spec,
        "closed_sum",
        Some(IdentityId::TribSumClosed),
        Some(IdentityId::PpSum),
    )?;
    evaluate(id, spec, n, variant)
}

pub fn square_sum(spec: &RecurrenceSpec, n: usize, variant: Variant) -> Result<IdentityValue> {
    let id = for_kind(
        spec,
        "square_sum",
        Some(IdentityId::TribSquareSum),
        Some(IdentityId::PpSquareSum),
    )?;
    evaluate(id, spec, n, variant)
}

pub fn lag2_product_sum(
    spec: &RecurrenceSpec,
    n: usize,
    variant: Variant,
) -> Result<IdentityValue> {
    let id = for_kind(
        spec,
        "lag2_product_sum",
        Some(IdentityId::TribLag2Product),
        None,
    )?;
    evaluate(id, spec, n, variant)
}

pub fn adjacent_product_sum(
    spec: &RecurrenceSpec,
    n: usize,
    variant: Variant,
) -> Result<IdentityValue> {
    let id = for_kind(
        spec,
        "adjacent_product_sum",
        Some(IdentityId::TribAdjProduct),
        None,
    )?;
    evaluate(id, spec, n, variant)
}

pub fn prefix_square_double_sum(
    spec: &RecurrenceSpec,
    n: usize,
    variant: Variant,
) -> Result<IdentityValue> {
    let id = for_kind(
        spec,
        "prefix_square_double_sum",
        Some(IdentityId::TribDoubleSum),
        Some(IdentityId::PpDoubleSum),
    )?;
    evaluate(id, spec, n, variant)
}

fn frac(num: BigInt, den: i64) -> BigRational {
    BigRational::new(num, BigInt::from(den))
}

fn sq(x: &BigInt) -> BigInt {
    x * x
}

fn general_sum_in(w: &SequenceWindow, n: usize) -> Result<BigRational> {
    let (p, q, r) = w.spec.coeffs();
    let den = p + q + r - 1;
    if den == 0 {
        return Err(Error::DegenerateDenominator);
    }
    let n = n as i64;
    let t = |i: i64| w.at(i);
    let (p, q, r) = (BigInt::from(p), BigInt::from(q), BigInt::from(r));
    let one = BigInt::from(1);
    let num = (&one - &p) * (t(n + 1) + t(n + 2) - t(2) - t(1)) - (&p * t(2) + &r * t(0))
        + t(n + 3)
        - &q * t(n + 1);
    Ok(frac(num, den))
}

fn trib_sum(w: &SequenceWindow, n: usize, v: Variant) -> BigRational {
    let n = n as i64;
    let t = |i: i64| w.at(i);
    let last = if v == Variant::AsPrinted { t(1) } else { t(0) };
    frac(t(n + 3) - t(n + 1) - t(2) - last, 2)
}

fn trib_h_int(w: &SequenceWindow, n: i64) -> BigRational {
    let t = |i: i64| w.at(i);
    let num =
        4 * t(n) * t(n + 1) - 4 * t(0) * t(1) - sq(&(t(n + 1) - t(n - 1))) + sq(&(t(-2) + t(0)));
    frac(num, 4)
}

fn trib_h(w: &SequenceWindow, n: usize) -> BigRational {
    trib_h_int(w, n as i64)
}

fn trib_b(w: &SequenceWindow, n: usize, v: Variant) -> BigRational {
    let n = n as i64;
    let t = |i: i64| w.at(i);
    let head = if v == Variant::AsPrinted {
        t(n + 1) + t(n - 1)
    } else {
        t(n + 1) - t(n - 1)
    };
    frac(sq(&head) - sq(&(t(-2) + t(0))), 4)
}

fn trib_c(w: &SequenceWindow, n: usize, v: Variant) -> BigRational {
    let b_n = trib_b(w, n, Variant::Corrected);
    let h_n = trib_h(w, n);
    let n = n as i64;
    let t = |i: i64| w.at(i);
    let (a, b, c) = (t(0), t(1), t(2));
    let mut num =
        sq(t(n)) + sq(t(n - 1)) + sq(t(n - 2)) + t(n - 2) * (t(n - 3) + 2 * t(n - 1) - t(n));
    match v {
        Variant::AsPrinted => {
            num += 2 * t(n) * (t(n - 1) + 2 * t(n + 1));
            num += a * (t(-1) + c - 2 * b);
        }
        _ => {
            num += 2 * t(n) * (t(n - 1) + t(n + 1));
            num += b * (b - c) - a * c;
        }
    }
    (b_n - h_n + BigRational::from_integer(num)) / BigRational::from_integer(BigInt::from(2))
}

fn trib_m(w: &SequenceWindow, n: usize, v: Variant) -> BigRational {
    let c_n = trib_c(w, n, Variant::Corrected);
    let h_n = trib_h(w, n);
    let b_n = trib_b(w, n, Variant::Corrected);
    let n = n as i64;
    let t = |i: i64| w.at(i);
    let (a, b) = (t(0), t(1));
    let mut num = -4 * BigInt::from(n) * a * b - sq(a) + sq(b) - 2 * b * t(-1)
        + sq(t(n))
        + BigInt::from(n) * sq(&(t(-2) + a));
    match v {
        Variant::AsPrinted => num -= t(n + 1) * (1 - 2 * t(n - 1)),
        _ => num += -sq(t(n + 1)) + 2 * t(n + 1) * t(n - 1),
    }
    let four = BigRational::from_integer(BigInt::from(4));
    let two = BigRational::from_integer(BigInt::from(2));
    (&four * c_n - &two * h_n + &two * b_n + BigRational::from_integer(num)) / four
}

/// Pell-Padovan constant: printed `2a(a-c) - (b-c)^2`, corrected `2a(a-c) + (b-c)^2`.
pub(crate) fn pp_t(w: &SequenceWindow, v: Variant) -> BigInt {
    let (a, b, c) = (w.at(0), w.at(1), w.at(2));
    let head = 2 * a * (a - c);
    let tail = sq(&(b - c));
    if v == Variant::AsPrinted {
        head - tail
    } else {
        head + tail
    }
}

fn pp_sum(w: &SequenceWindow, n: usize) -> BigRational {
    let n = n as i64;
    BigRational::from_integer(w.at(n + 5) - w.at(4) - w.at(0))
}

/// `Z[n+2]^2 - Z[n-1]^2 - Z[n-3]^2 + T - Z[0]^2`, valid for any `n >= 0` once
/// the constant is right.
pub(crate) fn pp_square_sum_int(w: &SequenceWindow, n: i64, v: Variant) -> BigInt {
    let t = |i: i64| w.at(i);
    sq(t(n + 2)) - sq(t(n - 1)) - sq(t(n - 3)) + pp_t(w, v) - sq(t(0))
}

fn pp_square_sum(w: &SequenceWindow, n: usize, v: Variant) -> BigRational {
    BigRational::from_integer(pp_square_sum_int(w, n as i64, v))
}

pub(crate) fn pp_double_sum_int(w: &SequenceWindow, n: i64, v: Variant) -> BigInt {
    let t = |i: i64| w.at(i);
    let (a, b, c) = (t(0), t(1), t(2));
    sq(t(n + 1)) + 2 * sq(t(n)) + 2 * sq(t(n - 1)) + sq(t(n - 2)) + sq(t(n - 3))
        - sq(t(-2))
        - sq(t(-1))
        - sq(b)
        - sq(c)
        - 2 * sq(a)
        + BigInt::from(n - 1) * (pp_t(w, v) - sq(a))
}

fn pp_double_sum(w: &SequenceWindow, n: usize, v: Variant) -> BigRational {
    BigRational::from_integer(pp_double_sum_int(w, n as i64, v))
}
