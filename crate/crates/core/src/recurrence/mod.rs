//! Third-order linear recurrences `Q[n] = p Q[n-1] + q Q[n-2] + r Q[n-3]`
//! over arbitrary-precision integers, in both index directions.

pub(crate) mod identities;

pub use identities::{
    adjacent_product_sum, closed_sum, evaluate, evaluate_in, lag2_product_sum,
    prefix_square_double_sum, square_sum, sum_general, IdentityId, IdentityValue, Variant,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_INDEX_CAP: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    GeneralThirdOrder,
    GeneralizedTribonacci,
    Tribonacci,
    GeneralizedPellPadovan,
}

/// The two sequence shapes the closed forms are written for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeqKind {
    General,
    Tribonacci,
    PellPadovan,
}

impl Family {
    pub fn kind(self) -> SeqKind {
        match self {
            Family::GeneralThirdOrder => SeqKind::General,
            Family::GeneralizedTribonacci | Family::Tribonacci => SeqKind::Tribonacci,
            Family::GeneralizedPellPadovan => SeqKind::PellPadovan,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::GeneralThirdOrder => "GeneralThirdOrder",
            Family::GeneralizedTribonacci => "GeneralizedTribonacci",
            Family::Tribonacci => "Tribonacci",
            Family::GeneralizedPellPadovan => "GeneralizedPellPadovan",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficients `(p, q, r)`, seeds `(a, b, c) = (Q0, Q1, Q2)` and the family tag.
///
/// Construction validates the family constraints, so a `RecurrenceSpec` in hand
/// is always well formed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct RecurrenceSpec {
    family: Family,
    coeffs: (i64, i64, i64),
    seeds: (i64, i64, i64),
    index_cap: u32,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    family: Family,
    p: i64,
    q: i64,
    r: i64,
    a: i64,
    b: i64,
    c: i64,
    #[serde(default = "default_cap")]
    index_cap: u32,
}

fn default_cap() -> u32 {
    DEFAULT_INDEX_CAP
}

impl TryFrom<RawSpec> for RecurrenceSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        Ok(
            RecurrenceSpec::new(raw.family, (raw.p, raw.q, raw.r), (raw.a, raw.b, raw.c))?
                .with_index_cap(raw.index_cap),
        )
    }
}

impl From<RecurrenceSpec> for RawSpec {
    fn from(s: RecurrenceSpec) -> Self {
        let (p, q, r) = s.coeffs;
        let (a, b, c) = s.seeds;
        RawSpec {
            family: s.family,
            p,
            q,
            r,
            a,
            b,
            c,
            index_cap: s.index_cap,
        }
    }
}

impl RecurrenceSpec {
    pub fn new(family: Family, coeffs: (i64, i64, i64), seeds: (i64, i64, i64)) -> Result<Self> {
        let invalid = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        match family {
            Family::GeneralizedTribonacci | Family::Tribonacci if coeffs != (1, 1, 1) => {
                return invalid("tribonacci families require (p, q, r) = (1, 1, 1)")
            }
            Family::GeneralizedPellPadovan if coeffs != (0, 1, 1) => {
                return invalid("Pell-Padovan requires (p, q, r) = (0, 1, 1)")
            }
            _ => {}
        }
        if family == Family::Tribonacci && seeds != (0, 1, 1) {
            return invalid("Tribonacci requires seeds (0, 1, 1)");
        }
        if coeffs.2 == 0 {
            return invalid("r must be nonzero");
        }
        Ok(RecurrenceSpec {
            family,
            coeffs,
            seeds,
            index_cap: DEFAULT_INDEX_CAP,
        })
    }

    pub fn tribonacci() -> Self {
        Self::new(Family::Tribonacci, (1, 1, 1), (0, 1, 1)).expect("valid")
    }

    pub fn generalized_tribonacci(a: i64, b: i64, c: i64) -> Self {
        Self::new(Family::GeneralizedTribonacci, (1, 1, 1), (a, b, c)).expect("valid")
    }

    pub fn pell_padovan(a: i64, b: i64, c: i64) -> Self {
        Self::new(Family::GeneralizedPellPadovan, (0, 1, 1), (a, b, c)).expect("valid")
    }

    pub fn general(p: i64, q: i64, r: i64, a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(Family::GeneralThirdOrder, (p, q, r), (a, b, c))
    }

    pub fn with_index_cap(mut self, cap: u32) -> Self {
        self.index_cap = cap;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn kind(&self) -> SeqKind {
        self.family.kind()
    }

    pub fn coeffs(&self) -> (i64, i64, i64) {
        self.coeffs
    }

    pub fn seeds(&self) -> (i64, i64, i64) {
        self.seeds
    }

    pub fn index_cap(&self) -> u32 {
        self.index_cap
    }

    fn check_index(&self, index: i64) -> Result<()> {
        if index.unsigned_abs() > u64::from(self.index_cap) {
            Err(Error::IndexCapExceeded {
                index,
                cap: self.index_cap,
            })
        } else {
            Ok(())
        }
    }
}

/// Terms `Q[lo..=hi]` of one sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceWindow {
    pub spec: RecurrenceSpec,
    pub lo: i64,
    #[serde(with = "crate::exact::bigint_vec_str")]
    pub terms: Vec<BigInt>,
}

impl SequenceWindow {
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn get(&self, index: i64) -> Option<&BigInt> {
        if index < self.lo {
            return None;
        }
        self.terms.get((index - self.lo) as usize)
    }

    /// Like `get`, for callers that sized the window themselves.
    pub(crate) fn at(&self, index: i64) -> &BigInt {
        self.get(index)
            .unwrap_or_else(|| panic!("index {index} outside window [{}, {}]", self.lo, self.hi()))
    }
}

/// `Q[n]` for any signed `n` within the index cap.
pub fn term(spec: &RecurrenceSpec, n: i64) -> Result<BigInt> {
    Ok(window(spec, n, n)?.terms.pop().expect("one term"))
}

/// `Q[lo..=hi]`, computed in one forward and one backward sweep from the seeds.
pub fn window(spec: &RecurrenceSpec, lo: i64, hi: i64) -> Result<SequenceWindow> {
    if lo > hi {
        return Err(Error::EmptyWindow { lo, hi });
    }
    spec.check_index(lo)?;
    spec.check_index(hi)?;
    let (p, q, r) = spec.coeffs;
    let (p, q, r) = (BigInt::from(p), BigInt::from(q), BigInt::from(r));
    let (a, b, c) = spec.seeds;

    let mut forward = vec![BigInt::from(a), BigInt::from(b), BigInt::from(c)];
    for k in 3..=hi.max(2) as usize {
        let next = &p * &forward[k - 1] + &q * &forward[k - 2] + &r * &forward[k - 3];
        forward.push(next);
    }

    // backward[k] holds Q[-(k+1)]
    let mut backward: Vec<BigInt> = Vec::new();
    let depth = (-lo).max(0) as usize;
    for k in 0..depth {
        let m = -(k as i64) + 2; // Q[m] is the newest known term; produce Q[m-3]
        let get = |i: i64| -> &BigInt {
            if i >= 0 {
                &forward[i as usize]
            } else {
                &backward[(-i - 1) as usize]
            }
        };
        let numerator = get(m) - &p * get(m - 1) - &q * get(m - 2);
        let (quot, rem) = numerator.div_rem(&r);
        if !rem.is_zero() {
            return Err(Error::BackwardNotExact {
                index: m - 3,
                numerator: numerator.to_string(),
                r: spec.coeffs.2,
            });
        }
        backward.push(quot);
    }

    let terms = (lo..=hi)
        .map(|i| {
            if i >= 0 {
                forward[i as usize].clone()
            } else {
                backward[(-i - 1) as usize].clone()
            }
        })
        .collect();
    Ok(SequenceWindow {
        spec: spec.clone(),
        lo,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn tribonacci_terms() {
        let t = RecurrenceSpec::tribonacci();
        assert_eq!(term(&t, 6).unwrap(), BigInt::from(13));
        assert_eq!(term(&t, -2).unwrap(), BigInt::from(1));
        assert_eq!(window(&t, 0, 5).unwrap().terms, ints(&[0, 1, 1, 2, 4, 7]));
    }

    #[test]
    fn tribonacci_negative_indices() {
        // R[-1] = R[2] - R[1] - R[0], and so on down.
        let w = window(&RecurrenceSpec::tribonacci(), -6, 2).unwrap();
        assert_eq!(w.terms, ints(&[-3, 2, 0, -1, 1, 0, 0, 1, 1]));
    }

    #[test]
    fn pell_padovan_window() {
        let z = RecurrenceSpec::pell_padovan(1, 1, 1);
        assert_eq!(
            window(&z, 0, 6).unwrap().terms,
            ints(&[1, 1, 1, 2, 2, 3, 4])
        );
    }

    #[test]
    fn zero_seeds_give_zero() {
        let s = RecurrenceSpec::general(3, -2, 5, 0, 0, 0).unwrap();
        assert_eq!(term(&s, 9).unwrap(), BigInt::zero());
    }

    #[test]
    fn seed_readback() {
        let s = RecurrenceSpec::general(2, 1, 1, 4, 5, 6).unwrap();
        assert_eq!(window(&s, 2, 2).unwrap().terms, ints(&[6]));
        assert_eq!(window(&s, 0, 1).unwrap().terms, ints(&[4, 5]));
    }

    #[test]
    fn window_entirely_negative() {
        let t = RecurrenceSpec::tribonacci();
        let w = window(&t, -4, -3).unwrap();
        assert_eq!(w.lo, -4);
        assert_eq!(w.terms, ints(&[0, -1]));
        assert_eq!(w.hi(), -3);
        assert_eq!(w.get(-5), None);
        assert_eq!(w.get(-2), None);
    }

    #[test]
    fn backward_not_exact() {
        let s = RecurrenceSpec::general(1, 1, 2, 0, 1, 1).unwrap();
        // Q[-1] = (1 - 1 - 0) / 2 = 0, Q[-2] = (1 - 0 - 0) / 2
        assert_eq!(term(&s, -1).unwrap(), BigInt::zero());
        assert!(matches!(
            term(&s, -2),
            Err(Error::BackwardNotExact { index: -2, .. })
        ));
    }

    #[test]
    fn index_cap() {
        let t = RecurrenceSpec::tribonacci();
        assert!(term(&t, 10_000).is_ok());
        assert_eq!(
            term(&t, 10_001),
            Err(Error::IndexCapExceeded {
                index: 10_001,
                cap: 10_000
            })
        );
        let small = t.with_index_cap(5);
        assert!(term(&small, -5).is_ok());
        assert!(matches!(
            term(&small, -6),
            Err(Error::IndexCapExceeded { .. })
        ));
    }

    #[test]
    fn empty_window_rejected() {
        let t = RecurrenceSpec::tribonacci();
        assert_eq!(
            window(&t, 3, 2).unwrap_err(),
            Error::EmptyWindow { lo: 3, hi: 2 }
        );
    }

    #[test]
    fn family_constraints() {
        assert!(RecurrenceSpec::new(Family::Tribonacci, (1, 1, 1), (1, 1, 1)).is_err());
        assert!(RecurrenceSpec::new(Family::GeneralizedTribonacci, (1, 1, 2), (0, 1, 1)).is_err());
        assert!(RecurrenceSpec::new(Family::GeneralizedPellPadovan, (1, 1, 1), (1, 1, 1)).is_err());
        assert!(RecurrenceSpec::general(1, 1, 0, 0, 1, 1).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let s = RecurrenceSpec::pell_padovan(1, 2, 3).with_index_cap(77);
        let text = serde_json::to_string(&s).unwrap();
        let back: RecurrenceSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let bad = text.replace("\"q\":1", "\"q\":5");
        assert!(serde_json::from_str::<RecurrenceSpec>(&bad).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closure_both_directions(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5, pp in any::<bool>()) {
            let spec = if pp {
                RecurrenceSpec::pell_padovan(a, b, c)
            } else {
                RecurrenceSpec::generalized_tribonacci(a, b, c)
            };
            let (p, q, r) = spec.coeffs();
            let w = window(&spec, -20, 60).unwrap();
            for n in -17..=60 {
                let lhs = w.get(n).unwrap().clone();
                let rhs = p * w.get(n - 1).unwrap() + q * w.get(n - 2).unwrap() + r * w.get(n - 3).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
            prop_assert_eq!(w.get(0).unwrap(), &BigInt::from(a));
            prop_assert_eq!(w.get(2).unwrap(), &BigInt::from(c));
        }

        #[test]
        fn window_agrees_with_term(lo in -30i64..30, len in 0i64..20) {
            let t = RecurrenceSpec::generalized_tribonacci(2, -1, 3);
            let w = window(&t, lo, lo + len).unwrap();
            for i in lo..=lo + len {
                prop_assert_eq!(w.get(i).unwrap(), &term(&t, i).unwrap());
            }
        }
    }
}
