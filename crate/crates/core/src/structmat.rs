//! Dense square matrices over exact rationals, tagged with the structure they
//! were built from.
//!
//! Index conventions follow the usual 1-based textbook definitions
//! (`h[i][j] = U[i+j-1]` and so on); storage is 0-based.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrence::SequenceWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixKind {
    Circulant,
    RCirculant,
    LeftCirculant,
    SemiCirculant,
    Hankel,
    Toeplitz,
    Dense,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct StructuredMatrix {
    n: usize,
    kind: MatrixKind,
    scalar_r: Option<BigRational>,
    entries: Vec<Vec<BigRational>>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    n: usize,
    kind: MatrixKind,
    #[serde(with = "crate::exact::opt_rational_str")]
    scalar_r: Option<BigRational>,
    #[serde(with = "crate::exact::matrix_str")]
    entries: Vec<Vec<BigRational>>,
}

impl TryFrom<RawMatrix> for StructuredMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        if raw.entries.len() != raw.n {
            return Err(Error::DimensionMismatch(raw.entries.len(), raw.n));
        }
        let m = StructuredMatrix::from_rows(raw.entries)?;
        let m = StructuredMatrix {
            kind: raw.kind,
            scalar_r: raw.scalar_r,
            ..m
        };
        m.validate()?;
        Ok(m)
    }
}

impl From<StructuredMatrix> for RawMatrix {
    fn from(m: StructuredMatrix) -> Self {
        RawMatrix {
            n: m.n,
            kind: m.kind,
            scalar_r: m.scalar_r,
            entries: m.entries,
        }
    }
}

impl StructuredMatrix {
    /// A `Dense` matrix from explicit rows.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(StructuredMatrix {
            n,
            kind: MatrixKind::Dense,
            scalar_r: None,
            entries: rows,
        })
    }

    pub fn from_fn(n: usize, kind: MatrixKind, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let entries = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        StructuredMatrix {
            n,
            kind,
            scalar_r: None,
            entries,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, MatrixKind::Dense, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, MatrixKind::Dense, |_, _| BigRational::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn scalar_r(&self) -> Option<&BigRational> {
        self.scalar_r.as_ref()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// `alpha * self`; structure tags survive scaling.
    pub fn scaled(&self, alpha: &BigRational) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x * alpha).collect())
            .collect();
        StructuredMatrix {
            entries,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serializes")
    }

    /// Parses and validates; structural problems keep their own error variant.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawMatrix = serde_json::from_str(text)?;
        StructuredMatrix::try_from(raw)
    }

    /// Checks the entries against the invariant of `kind`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let e = &self.entries;
        let fail = || Err(Error::KindViolation(self.kind.to_string()));
        let all = |pred: &dyn Fn(usize, usize) -> bool| (0..n).all(|i| (0..n).all(|j| pred(i, j)));
        let ok = match self.kind {
            MatrixKind::Dense => true,
            MatrixKind::Circulant => all(&|i, j| e[i][j] == e[0][(j + n - i) % n]),
            MatrixKind::RCirculant => {
                let Some(r) = &self.scalar_r else {
                    return fail();
                };
                all(&|i, j| {
                    if j >= i {
                        e[i][j] == e[0][j - i]
                    } else {
                        e[i][j] == r * &e[0][n + j - i]
                    }
                })
            }
            MatrixKind::LeftCirculant => all(&|i, j| e[i][j] == e[0][(i + j) % n]),
            MatrixKind::SemiCirculant => all(&|i, j| {
                if i > j {
                    e[i][j].is_zero()
                } else {
                    e[i][j] == e[0][j - i]
                }
            }),
            MatrixKind::Hankel => all(&|i, j| {
                let s = i + j;
                if s < n {
                    e[i][j] == e[0][s]
                } else {
                    e[i][j] == e[s - (n - 1)][n - 1]
                }
            }),
            MatrixKind::Toeplitz => all(&|i, j| {
                if i >= j {
                    e[i][j] == e[i - j][0]
                } else {
                    e[i][j] == e[0][j - i]
                }
            }),
        };
        if ok {
            Ok(())
        } else {
            fail()
        }
    }
}

/// `entry(i,j) = row[j-i]` on and above the diagonal, `r * row[n+j-i]` below.
/// `r = 1` gives a plain circulant.
pub fn r_circulant(row: &[BigRational], scalar_r: &BigRational) -> Result<StructuredMatrix> {
    if row.is_empty() {
        return Err(Error::EmptyRow);
    }
    let n = row.len();
    let mut m = StructuredMatrix::from_fn(n, MatrixKind::RCirculant, |i, j| {
        if j >= i {
            row[j - i].clone()
        } else {
            scalar_r * &row[n + j - i]
        }
    });
    if scalar_r.is_one() {
        m.kind = MatrixKind::Circulant;
    } else {
        m.scalar_r = Some(scalar_r.clone());
    }
    Ok(m)
}

pub fn circulant(row: &[BigRational]) -> Result<StructuredMatrix> {
    r_circulant(row, &BigRational::one())
}

/// Row `k` is row `k-1` shifted cyclically one place to the left.
pub fn left_circulant(row: &[BigRational]) -> Result<StructuredMatrix> {
    if row.is_empty() {
        return Err(Error::EmptyRow);
    }
    let n = row.len();
    Ok(StructuredMatrix::from_fn(
        n,
        MatrixKind::LeftCirculant,
        |i, j| row[(i + j) % n].clone(),
    ))
}

fn lookup(seq: &SequenceWindow, indices: impl Iterator<Item = i64>) -> Result<()> {
    for i in indices {
        if seq.get(i).is_none() {
            return Err(Error::MissingIndex(i));
        }
    }
    Ok(())
}

fn value(seq: &SequenceWindow, i: i64) -> BigRational {
    BigRational::from_integer(seq.get(i).cloned().unwrap_or_else(BigInt::zero))
}

/// `a[i][j] = U[j-i+1]` for `i <= j`, zero below the diagonal.
pub fn semi_circulant(seq: &SequenceWindow, n: usize) -> Result<StructuredMatrix> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    lookup(seq, 1..=n as i64)?;
    Ok(StructuredMatrix::from_fn(
        n,
        MatrixKind::SemiCirculant,
        |i, j| {
            if i <= j {
                value(seq, (j - i + 1) as i64)
            } else {
                BigRational::zero()
            }
        },
    ))
}

/// `h[i][j] = U[i+j-1]` (1-based).
pub fn hankel(seq: &SequenceWindow, n: usize) -> Result<StructuredMatrix> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    lookup(seq, 1..=(2 * n - 1) as i64)?;
    Ok(StructuredMatrix::from_fn(n, MatrixKind::Hankel, |i, j| {
        value(seq, (i + j + 1) as i64)
    }))
}

/// `a[i][j] = U[i-j]`.
pub fn toeplitz(seq: &SequenceWindow, n: usize) -> Result<StructuredMatrix> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let m = n as i64 - 1;
    lookup(seq, -m..=m)?;
    Ok(StructuredMatrix::from_fn(
        n,
        MatrixKind::Toeplitz,
        |i, j| value(seq, i as i64 - j as i64),
    ))
}

/// Entrywise product.
pub fn hadamard(a: &StructuredMatrix, b: &StructuredMatrix) -> Result<StructuredMatrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    Ok(StructuredMatrix::from_fn(a.n, MatrixKind::Dense, |i, j| {
        &a.entries[i][j] * &b.entries[i][j]
    }))
}
