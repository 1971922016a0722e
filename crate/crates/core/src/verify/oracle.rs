//! Literal term-by-term sums. Nothing here uses a closed form.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::recurrence::{window, IdentityId, RecurrenceSpec, SequenceWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OracleSum {
    /// `sum_{k=1}^{n} u_k`
    Sum,
    /// `sum_{k=1}^{n} u_k^2`
    SumSquares,
    /// `sum_{k=1}^{n} u_k u_{k-2}`
    Lag2Product,
    /// `sum_{k=1}^{n} u_k u_{k+1}`
    AdjProduct,
    /// `sum_{m=1}^{n} sum_{k=1}^{m} u_k^2`
    DoubleSumSquares,
}

impl OracleSum {
    pub fn for_identity(id: IdentityId) -> OracleSum {
        match id {
            IdentityId::GenSum | IdentityId::TribSumClosed | IdentityId::PpSum => OracleSum::Sum,
            IdentityId::TribSquareSum | IdentityId::PpSquareSum => OracleSum::SumSquares,
            IdentityId::TribLag2Product => OracleSum::Lag2Product,
            IdentityId::TribAdjProduct => OracleSum::AdjProduct,
            IdentityId::TribDoubleSum | IdentityId::PpDoubleSum => OracleSum::DoubleSumSquares,
        }
    }

    fn range(self, n: usize) -> (i64, i64) {
        let n = n as i64;
        match self {
            OracleSum::Lag2Product => (-1, n),
            OracleSum::AdjProduct => (0, n + 1),
            _ => (0, n),
        }
    }
}

pub fn oracle_identity(id: IdentityId, spec: &RecurrenceSpec, n: usize) -> Result<BigInt> {
    oracle_sum(OracleSum::for_identity(id), spec, n)
}

pub fn oracle_sum(kind: OracleSum, spec: &RecurrenceSpec, n: usize) -> Result<BigInt> {
    let (lo, hi) = kind.range(n);
    Ok(oracle_sum_in(kind, &window(spec, lo, hi)?, n))
}

/// Panics if `w` does not cover the indices the sum reads.
pub fn oracle_sum_in(kind: OracleSum, w: &SequenceWindow, n: usize) -> BigInt {
    let u = |k: usize| w.get(k as i64).expect("window covers the oracle range");
    let back2 = |k: usize| w.get(k as i64 - 2).expect("window covers the oracle range");
    let mut total = BigInt::zero();
    for k in 1..=n {
        match kind {
            OracleSum::Sum => total += u(k),
            OracleSum::SumSquares => total += u(k) * u(k),
            OracleSum::Lag2Product => total += u(k) * back2(k),
            OracleSum::AdjProduct => total += u(k) * u(k + 1),
            OracleSum::DoubleSumSquares => {
                for j in 1..=k {
                    total += u(j) * u(j);
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        let t = RecurrenceSpec::tribonacci();
        assert_eq!(
            oracle_sum(OracleSum::SumSquares, &t, 3).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            oracle_sum(OracleSum::AdjProduct, &t, 3).unwrap(),
            BigInt::from(11)
        );
        assert_eq!(
            oracle_sum(OracleSum::Lag2Product, &t, 3).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            oracle_sum(OracleSum::DoubleSumSquares, &t, 2).unwrap(),
            BigInt::from(3)
        );
        let zero = RecurrenceSpec::pell_padovan(0, 0, 0);
        for id in IdentityId::ALL {
            if id != IdentityId::TribLag2Product {
                assert_eq!(oracle_identity(id, &zero, 10).unwrap(), BigInt::zero());
            }
        }
        let zero = RecurrenceSpec::generalized_tribonacci(0, 0, 0);
        assert_eq!(
            oracle_identity(IdentityId::TribLag2Product, &zero, 10).unwrap(),
            BigInt::zero()
        );
    }
}
