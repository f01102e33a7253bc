//! Moments of weight distributions over the random linear code ensemble:
//! every `m x n` binary matrix, each with probability `2^(-nm)`.
//!
//! Exact formulas live here; [`census`] holds the exhaustive oracle that
//! enumerates every matrix, and [`sampling`] the seeded Monte Carlo sampler.
//!
//! Vectors `x, y` are codeword candidates (columns) and `h` is a matrix row,
//! so the parity condition reads `h . x = 0`.

pub mod census;
pub mod sampling;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::numeric::binomial;

pub use census::{brute_force_moments, EnsembleCensus, BRUTE_FORCE_CAP};
pub use sampling::{
    monte_carlo_functional, sample_matrix, stream_rng, ConcentrationReport, DeviationFrequency, CONFIDENCE_SIGMAS,
};

/// Block length `n` and number of parity checks `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub m: usize,
}

impl EnsembleParams {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParams(format!(
                "need n >= 1 and m >= 1, got n={n}, m={m}"
            )));
        }
        Ok(Self { n, m })
    }

    /// `m = round((1 - rate) n)`, clamped to at least one check.
    pub fn from_rate(n: usize, rate: f64) -> Result<Self> {
        crate::error::check_domain("rate", rate, rate > 0.0 && rate < 1.0)?;
        let m = ((1.0 - rate) * n as f64).round().max(1.0) as usize;
        Self::new(n, m)
    }

    /// Design rate `1 - m/n`.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.m as f64 / self.n as f64
    }

    fn check_weight(&self, w: usize) -> Result<()> {
        if w == 0 || w > self.n {
            Err(Error::WeightOutOfRange { weight: w, n: self.n })
        } else {
            Ok(())
        }
    }
}

fn pow2_rational(e: usize) -> BigRational {
    BigRational::from_integer((BigUint::one() << e).into())
}

/// `E[A_w] = C(n, w) 2^(-m)`.
pub fn expected_weight(params: EnsembleParams, w: usize) -> Result<BigRational> {
    params.check_weight(w)?;
    Ok(BigRational::from_integer(binomial(params.n, w).into()) / pow2_rational(params.m))
}

/// `COV[A_w1, A_w2]`: zero off the diagonal, `(1 - 2^-m) 2^-m C(n, w)` on it.
pub fn covariance_weights(params: EnsembleParams, w1: usize, w2: usize) -> Result<BigRational> {
    params.check_weight(w1)?;
    params.check_weight(w2)?;
    if w1 != w2 {
        return Ok(BigRational::zero());
    }
    let p = BigRational::one() / pow2_rational(params.m);
    Ok((BigRational::one() - &p) * p * BigRational::from_integer(binomial(params.n, w1).into()))
}

/// How the supports of a pair `(x, y)` relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OverlapCase {
    /// Supports overlap and neither contains the other.
    Partial,
    /// Supports are disjoint.
    Disjoint,
    /// One support strictly contains the other.
    Nested,
    /// `x = y`.
    Equal,
}

impl OverlapCase {
    pub const ALL: [OverlapCase; 4] = [Self::Partial, Self::Disjoint, Self::Nested, Self::Equal];

    pub fn label(self) -> &'static str {
        match self {
            Self::Partial => "i",
            Self::Disjoint => "ii",
            Self::Nested => "iii",
            Self::Equal => "x=y",
        }
    }
}

/// Sizes of the four index classes of a pair `(x, y)`:
/// `i1 = |x=1,y=0|`, `i2 = |x=1,y=1|`, `i3 = |x=0,y=1|`, `i4 = |x=0,y=0|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairOverlapProfile {
    pub i1: usize,
    pub i2: usize,
    pub i3: usize,
    pub i4: usize,
}

impl PairOverlapProfile {
    pub fn of(x: &BitVector, y: &BitVector) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        let (mut i1, mut i2, mut i3) = (0, 0, 0);
        for (a, b) in x.words().iter().zip(y.words()) {
            i1 += (a & !b).count_ones() as usize;
            i2 += (a & b).count_ones() as usize;
            i3 += (!a & b).count_ones() as usize;
        }
        Ok(Self {
            i1,
            i2,
            i3,
            i4: x.len() - i1 - i2 - i3,
        })
    }

    /// Profile for weights `(w1, w2)` with overlap `i2`; checks
    /// `max(w1 + w2 - n, 0) <= i2 <= min(w1, w2)`.
    pub fn from_weights(n: usize, w1: usize, w2: usize, i2: usize) -> Result<Self> {
        let lo = (w1 + w2).saturating_sub(n);
        if w1 > n || w2 > n || i2 < lo || i2 > w1.min(w2) {
            return Err(Error::InvalidParams(format!(
                "overlap {i2} impossible for n={n}, w1={w1}, w2={w2}"
            )));
        }
        Ok(Self {
            i1: w1 - i2,
            i2,
            i3: w2 - i2,
            i4: n - (w1 + w2 - i2),
        })
    }

    pub fn n(&self) -> usize {
        self.i1 + self.i2 + self.i3 + self.i4
    }

    pub fn weights(&self) -> (usize, usize) {
        (self.i1 + self.i2, self.i2 + self.i3)
    }

    pub fn case(&self) -> OverlapCase {
        match (self.i1, self.i2, self.i3) {
            (0, _, 0) => OverlapCase::Equal,
            (_, 0, _) => OverlapCase::Disjoint,
            (0, _, _) | (_, _, 0) => OverlapCase::Nested,
            _ => OverlapCase::Partial,
        }
    }

    /// `log2 #{h : h.x = 0, h.y = 0}` assembled class by class.
    ///
    /// The parity of `h` restricted to each nonempty constrained class is
    /// forced (both even, or all odd in the partial case), each such class
    /// contributing `2^(i_k - 1)`; the free class contributes `2^i4`.
    fn orthogonal_log2_count(&self) -> Result<usize> {
        let (w1, w2) = self.weights();
        if w1 == 0 || w2 == 0 {
            return Err(Error::ZeroVector);
        }
        // orient so the lighter vector comes first
        let (i1, i3) = if w1 <= w2 {
            (self.i1, self.i3)
        } else {
            (self.i3, self.i1)
        };
        let (i2, i4) = (self.i2, self.i4);
        Ok(match self.case() {
            OverlapCase::Partial => 1 + (i1 - 1) + (i2 - 1) + (i3 - 1) + i4,
            OverlapCase::Disjoint => (i1 - 1) + (i3 - 1) + i4,
            OverlapCase::Nested => (i2 - 1) + (i3 - 1) + i4,
            OverlapCase::Equal => (i2 - 1) + i4,
        })
    }
}

/// Largest `n` for the exhaustive row count.
pub const ORTHOGONAL_BRUTE_FORCE_MAX_N: usize = 24;

/// `#{h in F_2^n : h.x = 0, h.y = 0}` for nonzero `x, y`: `2^(n-2)` when
/// `x != y` and `2^(n-1)` when `x = y`, computed from the overlap profile.
///
/// Debug builds cross-check against [`count_orthogonal_rows_brute`] for `n <= 20`.
pub fn count_orthogonal_rows(x: &BitVector, y: &BitVector) -> Result<BigUint> {
    let profile = PairOverlapProfile::of(x, y)?;
    let count = BigUint::one() << profile.orthogonal_log2_count()?;
    #[cfg(debug_assertions)]
    if x.len() <= 20 {
        debug_assert_eq!(count, count_orthogonal_rows_brute(x, y).expect("n <= 20"));
    }
    Ok(count)
}

/// The same count by trying all `2^n` rows.
pub fn count_orthogonal_rows_brute(x: &BitVector, y: &BitVector) -> Result<BigUint> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if n > ORTHOGONAL_BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            nm: n,
            cap: ORTHOGONAL_BRUTE_FORCE_MAX_N,
        });
    }
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroVector);
    }
    let (xb, yb) = (x.as_u64(), y.as_u64());
    let count = (0..1u64 << n)
        .filter(|h| (h & xb).count_ones() % 2 == 0 && (h & yb).count_ones() % 2 == 0)
        .count();
    Ok(BigUint::from(count))
}

/// First and second moments of a statistic over the ensemble.
///
/// Exact reports (from the census) use rationals and have
/// `sample_count == 0`; Monte Carlo reports use floats and carry a
/// confidence halfwidth for the mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport<T> {
    pub mean: T,
    pub second_moment: T,
    pub variance: T,
    pub covariance: T,
    pub sample_count: u64,
    pub confidence_halfwidth: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    fn v(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn expected_weight_examples() {
        let p = EnsembleParams::new(4, 2).unwrap();
        assert_eq!(expected_weight(p, 2).unwrap(), q(3, 2));
        assert_eq!(expected_weight(p, 4).unwrap(), q(1, 4));
        assert_eq!(expected_weight(EnsembleParams::new(1, 1).unwrap(), 1).unwrap(), q(1, 2));
        assert_eq!(expected_weight(p, 0), Err(Error::WeightOutOfRange { weight: 0, n: 4 }));
        assert!(expected_weight(p, 5).is_err());
    }

    #[test]
    fn covariance_examples() {
        let p = EnsembleParams::new(4, 2).unwrap();
        assert_eq!(covariance_weights(p, 1, 2).unwrap(), q(0, 1));
        assert_eq!(covariance_weights(p, 2, 2).unwrap(), q(9, 8));
        let p = EnsembleParams::new(3, 1).unwrap();
        assert_eq!(covariance_weights(p, 3, 3).unwrap(), q(1, 4));
        assert!(covariance_weights(p, 0, 1).is_err());
    }

    #[test]
    fn diagonal_covariance_is_shrunk_mean() {
        for (n, m) in [(5, 2), (8, 3), (12, 7)] {
            let p = EnsembleParams::new(n, m).unwrap();
            let shrink = BigRational::one() - BigRational::one() / pow2_rational(m);
            for w in 1..=n {
                let mean = expected_weight(p, w).unwrap();
                let cov = covariance_weights(p, w, w).unwrap();
                assert_eq!(cov, &shrink * &mean);
                assert!(cov < mean);
            }
        }
    }

    #[test]
    fn orthogonal_row_examples() {
        assert_eq!(
            count_orthogonal_rows(&v("100"), &v("010")).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            count_orthogonal_rows(&v("110"), &v("110")).unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(
            count_orthogonal_rows(&v("1100"), &v("1110")).unwrap(),
            BigUint::from(4u32)
        );
        assert_eq!(count_orthogonal_rows(&v("000"), &v("010")), Err(Error::ZeroVector));
        assert!(count_orthogonal_rows(&v("10"), &v("010")).is_err());
    }

    #[test]
    fn overlap_cases() {
        let case = |a: &str, b: &str| PairOverlapProfile::of(&v(a), &v(b)).unwrap().case();
        assert_eq!(case("1100", "0110"), OverlapCase::Partial);
        assert_eq!(case("1100", "0011"), OverlapCase::Disjoint);
        assert_eq!(case("1100", "1110"), OverlapCase::Nested);
        assert_eq!(case("1110", "1100"), OverlapCase::Nested);
        assert_eq!(case("1010", "1010"), OverlapCase::Equal);
    }

    #[test]
    fn profile_from_weights_respects_overlap_range() {
        let p = PairOverlapProfile::from_weights(5, 3, 4, 2).unwrap();
        assert_eq!((p.i1, p.i2, p.i3, p.i4), (1, 2, 2, 0));
        assert_eq!(p.n(), 5);
        assert!(PairOverlapProfile::from_weights(5, 3, 4, 1).is_err());
        assert!(PairOverlapProfile::from_weights(5, 3, 4, 4).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(EnsembleParams::new(0, 1).is_err());
        assert!(EnsembleParams::new(3, 0).is_err());
        let p = EnsembleParams::from_rate(20, 0.5).unwrap();
        assert_eq!((p.n, p.m), (20, 10));
        assert!((p.design_rate() - 0.5).abs() < 1e-15);
        assert!(EnsembleParams::from_rate(20, 1.0).is_err());
    }
}
