//! Matrix norms: exact Frobenius², max-abs and operator 1/inf norms, float
//! entrywise p-norms and row/column lengths, and a power-iteration spectral
//! norm estimate with an explicit lower witness.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{sqrt_f64, sum_abs, sum_squares, to_f64_scaled};
use crate::structmat::{hadamard, StructuredMatrix};

pub fn frobenius_sq(a: &StructuredMatrix) -> BigRational {
    sum_squares(a.rows().iter().flatten())
}

/// Power of two within a factor two of `max_abs(a)`; dividing by it keeps
/// every entry in `[-2, 2]`.
fn scale_shift(max: &BigRational) -> i64 {
    max.numer().bits() as i64 - max.denom().bits() as i64
}

/// `(sum |a_ij|^p)^(1/p)`, evaluated on the max-abs-scaled matrix to stay finite.
pub fn entrywise_lp(a: &StructuredMatrix, p: u32) -> f64 {
    assert!(p >= 1, "p must be at least 1");
    let scale = max_abs(a);
    if scale.is_zero() {
        return 0.0;
    }
    let shift = scale_shift(&scale);
    let total: f64 = a
        .rows()
        .iter()
        .flatten()
        .map(|x| to_f64_scaled(x, shift).abs().powi(p as i32))
        .sum();
    to_f64_scaled(&BigRational::from_integer(1.into()), -shift) * total.powf(1.0 / p as f64)
}

pub fn max_abs(a: &StructuredMatrix) -> BigRational {
    a.rows()
        .iter()
        .flatten()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            tol: 1e-12,
            max_iters: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub estimate: f64,
    /// `||A v|| / ||v||` for the final iterate `v`.
    pub lower_witness: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn mat_vec(b: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    b.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

struct Run {
    rq: f64,
    v: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn power(gram: &[Vec<f64>], mut v: Vec<f64>, opts: SpectralOptions) -> Run {
    let unit = norm2(&v);
    v.iter_mut().for_each(|x| *x /= unit);
    let mut rq = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        iterations += 1;
        let w = mat_vec(gram, &v);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let next: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>() / vv;
        let wn = norm2(&w);
        if wn == 0.0 {
            rq = next;
            converged = true;
            break;
        }
        v = w.into_iter().map(|x| x / wn).collect();
        let done = iterations > 1 && (next - rq).abs() <= opts.tol * next.abs();
        rq = next;
        if done {
            converged = true;
            break;
        }
    }
    Run {
        rq,
        v,
        iterations,
        converged,
    }
}

/// Power iteration on `B^T B`, where `B = A / 2^k` and `2^k` is within a
/// factor two of `max_abs(A)`.
///
/// Starts from the all-ones vector; if its image vanishes, from the first
/// standard basis vector with a nonzero image. All-ones can also sit in a
/// smaller eigenspace, so a second run starts from the centered ramp
/// `k - (n - 1) / 2` (orthogonal to all-ones) and the larger quotient wins.
/// `converged` requires both runs to converge.
pub fn spectral(a: &StructuredMatrix, opts: SpectralOptions) -> Result<SpectralEstimate> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidTolerance(opts.tol));
    }
    let scale = max_abs(a);
    if scale.is_zero() {
        return Ok(SpectralEstimate {
            estimate: 0.0,
            lower_witness: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let n = a.n();
    let shift = scale_shift(&scale);
    let b: Vec<Vec<f64>> = a
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| to_f64_scaled(x, shift)).collect())
        .collect();
    let mut gram = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            let s: f64 = (0..n).map(|k| b[k][i] * b[k][j]).sum();
            gram[i][j] = s;
            gram[j][i] = s;
        }
    }

    let vanishes = |v: &[f64]| norm2(&mat_vec(&b, v)) <= 1e-12 * norm2(v);
    let mut start = vec![1.0; n];
    if vanishes(&start) {
        start = (0..n)
            .map(|k| {
                let mut e = vec![0.0; n];
                e[k] = 1.0;
                e
            })
            .find(|e| !vanishes(e))
            .expect("nonzero matrix has a column with nonzero image");
    }
    let mut runs = vec![power(&gram, start, opts)];
    let ramp: Vec<f64> = (0..n).map(|k| k as f64 - (n as f64 - 1.0) / 2.0).collect();
    if n > 1 && !vanishes(&ramp) {
        runs.push(power(&gram, ramp, opts));
    }

    let s = to_f64_scaled(&BigRational::from_integer(1.into()), -shift);
    let witness = |v: &[f64]| norm2(&mat_vec(&b, v)) / norm2(v) * s;
    let lower_witness = runs.iter().map(|r| witness(&r.v)).fold(0.0, f64::max);
    let rq = runs.iter().map(|r| r.rq).fold(0.0, f64::max);
    Ok(SpectralEstimate {
        estimate: (rq.sqrt() * s).max(lower_witness),
        lower_witness,
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: runs.iter().all(|r| r.converged),
    })
}

/// Largest row length `r1` and largest column length `c1`; the squared maxima
/// are exact and only the final square root is inexact.
pub fn row_col_length(a: &StructuredMatrix) -> (f64, f64) {
    let (r2, c2) = row_col_length_sq(a);
    (sqrt_f64(&r2), sqrt_f64(&c2))
}

pub fn row_col_length_sq(a: &StructuredMatrix) -> (BigRational, BigRational) {
    let n = a.n();
    let rows = (0..n).map(|i| sum_squares((0..n).map(|j| a.entry(i, j))));
    let cols = (0..n).map(|j| sum_squares((0..n).map(|i| a.entry(i, j))));
    (
        rows.max().unwrap_or_else(BigRational::zero),
        cols.max().unwrap_or_else(BigRational::zero),
    )
}

/// Operator 1-norm (max column abs-sum) and inf-norm (max row abs-sum).
pub fn op_one_inf(a: &StructuredMatrix) -> (BigRational, BigRational) {
    let n = a.n();
    let one = (0..n).map(|j| sum_abs((0..n).map(|i| a.entry(i, j)))).max();
    let inf = (0..n).map(|i| sum_abs((0..n).map(|j| a.entry(i, j)))).max();
    (
        one.unwrap_or_else(BigRational::zero),
        inf.unwrap_or_else(BigRational::zero),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HadamardBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `||A o B||_2 <= r1(A) c1(B)`, with the left side taken from the spectral
/// lower witness so a reported violation is not a rounding artifact.
pub fn hadamard_bound_check(a: &StructuredMatrix, b: &StructuredMatrix) -> Result<HadamardBound> {
    let c = hadamard(a, b)?;
    let lhs = spectral(&c, SpectralOptions::default())?.lower_witness;
    let (r1, _) = row_col_length(a);
    let (_, c1) = row_col_length(b);
    let rhs = r1 * c1;
    Ok(HadamardBound {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-9),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSummary {
    #[serde(with = "crate::exact::rational_str")]
    pub frobenius_sq: BigRational,
    pub frobenius: f64,
    pub spectral_estimate: f64,
    pub spectral_lower_witness: f64,
    pub spectral_iterations: usize,
    pub spectral_converged: bool,
    #[serde(with = "crate::exact::rational_str")]
    pub max_abs: BigRational,
    #[serde(with = "crate::exact::rational_str")]
    pub op_one: BigRational,
    #[serde(with = "crate::exact::rational_str")]
    pub op_inf: BigRational,
    pub r1: f64,
    pub c1: f64,
}

pub fn summary(a: &StructuredMatrix) -> Result<NormSummary> {
    let frobenius_sq = frobenius_sq(a);
    let sp = spectral(a, SpectralOptions::default())?;
    let (op_one, op_inf) = op_one_inf(a);
    let (r1, c1) = row_col_length(a);
    Ok(NormSummary {
        frobenius: sqrt_f64(&frobenius_sq),
        frobenius_sq,
        spectral_estimate: sp.estimate,
        spectral_lower_witness: sp.lower_witness,
        spectral_iterations: sp.iterations,
        spectral_converged: sp.converged,
        max_abs: max_abs(a),
        op_one,
        op_inf,
        r1,
        c1,
    })
}
