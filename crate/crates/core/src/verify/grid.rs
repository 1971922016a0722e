use std::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exact::{int, ratio};
use crate::recurrence::{RecurrenceSpec, SeqKind};

pub type Seeds = (i64, i64, i64);

/// Seeds x orders for the tribonacci / Pell-Padovan identities, plus a sample
/// of general third-order specs for the general sum.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityGrid {
    pub kinds: Vec<SeqKind>,
    pub seeds: Vec<Seeds>,
    pub n_max: usize,
    pub general_specs: Vec<RecurrenceSpec>,
    pub general_n_max: usize,
}

/// Families x seeds x orders x scalars for the theorems. `rs` is only used by
/// the r-circulant bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundGrid {
    pub kinds: Vec<SeqKind>,
    pub seeds: Vec<Seeds>,
    pub ns: Vec<usize>,
    pub rs: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridPreset {
    Default,
    Smoke,
}

impl FromStr for GridPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "default" => Ok(GridPreset::Default),
            "smoke" => Ok(GridPreset::Smoke),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

fn cube(values: &[i64]) -> Vec<Seeds> {
    let mut out = Vec::new();
    for &a in values {
        for &b in values {
            for &c in values {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// `count` general specs with coefficients and seeds in `[-3, 3]`, `r != 0`
/// and `p + q + r != 1`, from a fixed stream.
pub fn general_sample(count: usize) -> Vec<RecurrenceSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x05ee_d3a7);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut draw = || rng.random_range(-3i64..=3);
        let (p, q, r, a, b, c) = (draw(), draw(), draw(), draw(), draw(), draw());
        if r == 0 || p + q + r == 1 {
            continue;
        }
        out.push(RecurrenceSpec::general(p, q, r, a, b, c).expect("r != 0"));
    }
    out
}

impl IdentityGrid {
    pub fn empty() -> Self {
        IdentityGrid {
            kinds: Vec::new(),
            seeds: Vec::new(),
            n_max: 0,
            general_specs: Vec::new(),
            general_n_max: 0,
        }
    }
}

impl GridPreset {
    pub fn name(self) -> &'static str {
        match self {
            GridPreset::Default => "default",
            GridPreset::Smoke => "smoke",
        }
    }

    pub fn identity_grid(self) -> IdentityGrid {
        let kinds = vec![SeqKind::Tribonacci, SeqKind::PellPadovan];
        match self {
            GridPreset::Default => IdentityGrid {
                kinds,
                seeds: cube(&[0, 1, 2, 3]),
                n_max: 64,
                general_specs: general_sample(20),
                general_n_max: 40,
            },
            GridPreset::Smoke => IdentityGrid {
                kinds,
                seeds: cube(&[0, 1, 2]),
                n_max: 12,
                general_specs: general_sample(5),
                general_n_max: 12,
            },
        }
    }

    pub fn bound_grid(self) -> BoundGrid {
        let kinds = vec![SeqKind::Tribonacci, SeqKind::PellPadovan];
        match self {
            GridPreset::Default => BoundGrid {
                kinds,
                seeds: vec![(0, 1, 1), (1, 1, 1), (1, 2, 3), (2, 0, 1)],
                ns: vec![1, 2, 3, 4, 8, 16, 32, 64, 128],
                rs: vec![
                    int(-2),
                    int(-1),
                    ratio(-1, 2),
                    ratio(1, 2),
                    int(1),
                    int(2),
                    int(3),
                ],
            },
            GridPreset::Smoke => BoundGrid {
                kinds,
                seeds: vec![(0, 1, 1), (1, 1, 1), (1, 2, 3)],
                ns: vec![1, 2, 3, 4, 8],
                rs: vec![ratio(-1, 2), int(1), int(2)],
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_sample_is_stable_and_valid() {
        let a = general_sample(20);
        assert_eq!(a, general_sample(20));
        assert_eq!(a.len(), 20);
        for s in &a {
            let (p, q, r) = s.coeffs();
            assert!(r != 0 && p + q + r != 1);
        }
    }

    #[test]
    fn default_sizes() {
        let g = GridPreset::Default.identity_grid();
        assert_eq!((g.seeds.len(), g.n_max), (64, 64));
        let b = GridPreset::Default.bound_grid();
        assert_eq!((b.seeds.len(), b.ns.len(), b.rs.len()), (4, 9, 7));
        assert_eq!("smoke".parse::<GridPreset>().unwrap(), GridPreset::Smoke);
        assert!("huge".parse::<GridPreset>().is_err());
    }
}
