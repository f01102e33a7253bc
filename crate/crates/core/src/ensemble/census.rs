//! Exhaustive ensemble oracle: visits all `2^(nm)` parity-check matrices and
//! accumulates exact sums of `A_w` and `A_w1 * A_w2`.
//!
//! Matrix `k` is [`BitMatrix::from_index`]`(m, n, k)`. The index range is cut
//! into fixed shards; shard totals are exact integers, so the merged census
//! does not depend on the worker count.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use super::{EnsembleParams, MomentReport};
use crate::error::{Error, Result};
use crate::functionals::LinearFunctional;
use crate::gf2::{syndrome_weight_counts, weight_counts, BitMatrix, EnumerationLimit};
use crate::numeric::compensated_sum;

/// Largest `n * m` accepted by the exhaustive oracle.
pub const BRUTE_FORCE_CAP: usize = 20;

const SHARD_BITS: u32 = 12;

/// Exact sums over the whole ensemble.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleCensus {
    params: EnsembleParams,
    matrices: u64,
    // sums[w] = sum_H A_w(H)
    sums: Vec<u128>,
    // products[w1 * (n + 1) + w2] = sum_H A_w1(H) A_w2(H)
    products: Vec<u128>,
}

/// Which per-matrix counter is cheaper for this shape.
fn prefer_syndrome_table(n: usize, m: usize) -> bool {
    if m > 16 {
        return false;
    }
    let table_cost = (n * n) << m;
    let walk_cost = (2usize << n.saturating_sub(m)) + n * m * 4;
    table_cost <= walk_cost
}

impl EnsembleCensus {
    pub fn enumerate(params: EnsembleParams) -> Result<Self> {
        let (n, m) = (params.n, params.m);
        let nm = n * m;
        if nm > BRUTE_FORCE_CAP {
            return Err(Error::TooLarge {
                nm,
                cap: BRUTE_FORCE_CAP,
            });
        }
        let matrices = 1u64 << nm;
        let shard = 1u64 << SHARD_BITS.min(nm as u32);
        let use_table = prefer_syndrome_table(n, m);
        let empty = || Self {
            params,
            matrices: 0,
            sums: vec![0; n + 1],
            products: vec![0; (n + 1) * (n + 1)],
        };
        let census = (0..matrices / shard)
            .into_par_iter()
            .map(|s| {
                let mut acc = empty();
                for idx in s * shard..(s + 1) * shard {
                    let h = BitMatrix::from_index(m, n, idx);
                    let counts = if use_table {
                        syndrome_weight_counts(&h)
                    } else {
                        weight_counts(&h, EnumerationLimit::DEFAULT).expect("n <= 20 fits the default limit")
                    };
                    acc.record(&counts);
                }
                acc
            })
            .reduce(empty, Self::merge);
        debug_assert_eq!(census.matrices, matrices);
        Ok(census)
    }

    fn record(&mut self, counts: &[u64]) {
        let n1 = self.params.n + 1;
        self.matrices += 1;
        for (w1, &a) in counts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            self.sums[w1] += u128::from(a);
            let row = &mut self.products[w1 * n1..(w1 + 1) * n1];
            for (slot, &b) in row.iter_mut().zip(counts) {
                *slot += u128::from(a) * u128::from(b);
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.matrices += other.matrices;
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
        for (a, b) in self.products.iter_mut().zip(&other.products) {
            *a += b;
        }
        self
    }

    pub fn params(&self) -> EnsembleParams {
        self.params
    }

    pub fn matrices(&self) -> u64 {
        self.matrices
    }

    fn ratio(&self, total: u128) -> BigRational {
        BigRational::new(BigInt::from(total), BigInt::from(self.matrices))
    }

    /// Sum of `A_w(H)` over all matrices.
    pub fn sum(&self, w: usize) -> BigUint {
        BigUint::from(self.sums[w])
    }

    /// `E[A_w]` for `0 <= w <= n`.
    pub fn mean(&self, w: usize) -> BigRational {
        self.ratio(self.sums[w])
    }

    /// `E[A_w1 A_w2]`.
    pub fn second_moment(&self, w1: usize, w2: usize) -> BigRational {
        self.ratio(self.products[w1 * (self.params.n + 1) + w2])
    }

    pub fn covariance(&self, w1: usize, w2: usize) -> BigRational {
        self.second_moment(w1, w2) - self.mean(w1) * self.mean(w2)
    }

    /// Mean and variance of `F(H) = sum_w Phi_w A_w(H)` from the exact sums.
    pub fn functional_moments(&self, f: &LinearFunctional) -> Result<(f64, f64)> {
        let n = self.params.n;
        if f.n() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: f.n(),
            });
        }
        let phi = &f.coefficients();
        let total = self.matrices as f64;
        let mean = compensated_sum((1..=n).map(|w| phi[w - 1] * self.sums[w] as f64)) / total;
        let second =
            compensated_sum((1..=n).flat_map(|w1| {
                (1..=n).map(move |w2| phi[w1 - 1] * phi[w2 - 1] * self.products[w1 * (n + 1) + w2] as f64)
            })) / total;
        Ok((mean, (second - mean * mean).max(0.0)))
    }
}

/// Exact moments of `(A_w1, A_w2)` by enumerating every matrix (`n m <= 20`).
pub fn brute_force_moments(params: EnsembleParams, w1: usize, w2: usize) -> Result<MomentReport<BigRational>> {
    params.check_weight(w1)?;
    params.check_weight(w2)?;
    let census = EnsembleCensus::enumerate(params)?;
    Ok(MomentReport {
        mean: census.mean(w1),
        second_moment: census.second_moment(w1, w2),
        variance: census.covariance(w1, w1),
        covariance: census.covariance(w1, w2),
        sample_count: 0,
        confidence_halfwidth: None,
    })
}
