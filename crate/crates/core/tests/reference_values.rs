//! Values computed once by an independent implementation (Python integers and
//! numpy's SVD-based 2-norm) and frozen here.

use seqmat::exact::{big, int, ratio};
use seqmat::norms::{frobenius_sq, op_one_inf, spectral, SpectralOptions};
use seqmat::recurrence::{evaluate, term, window};
use seqmat::structmat::{circulant, hankel, r_circulant, semi_circulant, toeplitz};
use seqmat::{BigInt, BigRational, IdentityId, RecurrenceSpec, StructuredMatrix, Variant};

const SPECTRAL_TOL: f64 = 1e-9;

fn row(spec: &RecurrenceSpec, n: usize) -> Vec<BigRational> {
    window(spec, 0, n as i64 - 1)
        .unwrap()
        .terms
        .iter()
        .map(big)
        .collect()
}

fn sigma(m: &StructuredMatrix) -> f64 {
    spectral(m, SpectralOptions::default()).unwrap().estimate
}

fn close(got: f64, want: f64) {
    assert!(
        (got - want).abs() <= SPECTRAL_TOL * want.max(1.0),
        "got {got}, want {want}"
    );
}

#[test]
fn terms() {
    let pp = RecurrenceSpec::pell_padovan(1, 2, 3);
    let w = window(&pp, -4, 8).unwrap();
    let want: Vec<BigInt> = [1, 1, 0, 2, 1, 2, 3, 3, 5, 6, 8, 11, 14]
        .into_iter()
        .map(BigInt::from)
        .collect();
    assert_eq!(w.terms, want);
    let t100: BigInt = "98079530178586034536500564".parse().unwrap();
    assert_eq!(term(&RecurrenceSpec::tribonacci(), 100).unwrap(), t100);
}

#[test]
fn spectral_norms() {
    let trib = RecurrenceSpec::tribonacci();
    close(
        sigma(&r_circulant(&row(&trib, 6), &ratio(-1, 2)).unwrap()),
        10.428010385416446,
    );
    close(sigma(&circulant(&row(&trib, 7)).unwrap()), 28.0);
    let w = window(&trib, -4, 4).unwrap();
    close(sigma(&toeplitz(&w, 5).unwrap()), 5.505039724619893);

    let pp = RecurrenceSpec::pell_padovan(1, 2, 3);
    close(
        sigma(&hankel(&window(&pp, 1, 9).unwrap(), 5).unwrap()),
        41.21906308754197,
    );
    let g = RecurrenceSpec::generalized_tribonacci(1, 2, 3);
    close(
        sigma(&semi_circulant(&window(&g, 1, 6).unwrap(), 6).unwrap()),
        52.336781723497275,
    );
}

#[test]
fn exact_norms() {
    let g = RecurrenceSpec::generalized_tribonacci(1, 2, 3);
    assert_eq!(
        frobenius_sq(&hankel(&window(&g, 1, 19).unwrap(), 10).unwrap()),
        int(20927604554)
    );
    let pp = RecurrenceSpec::pell_padovan(2, 0, 1);
    assert_eq!(
        frobenius_sq(&semi_circulant(&window(&pp, 1, 12).unwrap(), 12).unwrap()),
        int(1594)
    );
    let pp = RecurrenceSpec::pell_padovan(1, 1, 1);
    assert_eq!(
        op_one_inf(&hankel(&window(&pp, 1, 17).unwrap(), 9).unwrap()),
        (int(323), int(323))
    );
}

#[test]
fn corrected_identities() {
    let cases = [
        (
            IdentityId::TribDoubleSum,
            RecurrenceSpec::generalized_tribonacci(3, 1, 2),
            20,
            51878716357i64,
        ),
        (
            IdentityId::PpSquareSum,
            RecurrenceSpec::pell_padovan(2, 3, 1),
            30,
            114205098,
        ),
        (
            IdentityId::TribAdjProduct,
            RecurrenceSpec::generalized_tribonacci(2, 2, 3),
            15,
            252361632,
        ),
    ];
    for (id, spec, n, want) in cases {
        assert_eq!(
            evaluate(id, &spec, n, Variant::Corrected).unwrap().value,
            int(want),
            "{id:?}"
        );
    }
}
