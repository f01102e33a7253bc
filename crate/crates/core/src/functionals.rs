//! Linear functionals of the weight distribution, `F(H) = sum_{w=1}^n Phi_w A_w(H)`.
//!
//! The zero-weight term never contributes. Exponential families
//! `Phi_w = K1^w K2^(n-w)` are kept as `(log2 K1, log2 K2)` so that
//! coefficients and closed-form moments stay finite for large `n`.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::ensemble::EnsembleParams;
use crate::error::{check_domain, Error, Result};
use crate::exponents::ExtReal;
use crate::gf2::WeightDistribution;
use crate::numeric::{binomial_f64, compensated_sum, log2_one_minus_exp2};

/// Coefficient family of a functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Family {
    /// `Phi_1..Phi_n` given directly.
    Explicit(Vec<f64>),
    /// `Phi_w = K1^w K2^(n-w)`, stored as base-2 logarithms.
    ExponentialFamily { log2_k1: f64, log2_k2: f64 },
    /// `Phi_w = 1`: the number of nonzero codewords.
    CodewordCount,
    /// `Phi_w = eps^w (1-eps)^(n-w)`: undetected error probability on a BSC.
    UndetectedError { epsilon: f64 },
    /// `Phi_w = D^w` with `D = 2 sqrt(eps (1-eps))`: the Bhattacharyya bound.
    Bhattacharyya { epsilon: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearFunctional {
    n: usize,
    family: Family,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParams("functional needs n >= 1".into()))
    } else {
        Ok(())
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    check_domain("epsilon", epsilon, epsilon > 0.0 && epsilon < 1.0)
}

/// `log2(2^a + 2^b)`.
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

impl LinearFunctional {
    pub fn explicit(coefficients: Vec<f64>) -> Result<Self> {
        check_n(coefficients.len())?;
        if let Some(bad) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::OutOfDomain {
                what: "coefficient",
                value: *bad,
            });
        }
        Ok(Self {
            n: coefficients.len(),
            family: Family::Explicit(coefficients),
        })
    }

    pub fn exponential_family(n: usize, k1: f64, k2: f64) -> Result<Self> {
        check_n(n)?;
        check_domain("K1", k1, k1 > 0.0 && k1.is_finite())?;
        check_domain("K2", k2, k2 > 0.0 && k2.is_finite())?;
        Ok(Self {
            n,
            family: Family::ExponentialFamily {
                log2_k1: k1.log2(),
                log2_k2: k2.log2(),
            },
        })
    }

    pub fn codeword_count(n: usize) -> Self {
        check_n(n).expect("n >= 1");
        Self {
            n,
            family: Family::CodewordCount,
        }
    }

    pub fn undetected_error(n: usize, epsilon: f64) -> Result<Self> {
        check_n(n)?;
        check_epsilon(epsilon)?;
        Ok(Self {
            n,
            family: Family::UndetectedError { epsilon },
        })
    }

    pub fn bhattacharyya(n: usize, epsilon: f64) -> Result<Self> {
        check_n(n)?;
        check_epsilon(epsilon)?;
        Ok(Self {
            n,
            family: Family::Bhattacharyya { epsilon },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `(log2 K1, log2 K2)` when the coefficients form an exponential family.
    pub fn exponential_form(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::Explicit(_) => None,
            Family::ExponentialFamily { log2_k1, log2_k2 } => Some((log2_k1, log2_k2)),
            Family::CodewordCount => Some((0.0, 0.0)),
            Family::UndetectedError { epsilon } => Some((epsilon.log2(), (1.0 - epsilon).log2())),
            Family::Bhattacharyya { epsilon } => Some((
                crate::exponents::bhattacharyya_parameter(epsilon)
                    .expect("validated")
                    .log2(),
                0.0,
            )),
        }
    }

    /// `Phi_w` for `1 <= w <= n`.
    pub fn coefficient(&self, w: usize) -> f64 {
        assert!(w >= 1 && w <= self.n, "weight {w} outside 1..={}", self.n);
        match (&self.family, self.exponential_form()) {
            (Family::Explicit(c), _) => c[w - 1],
            (_, Some((a, b))) => (w as f64 * a + (self.n - w) as f64 * b).exp2(),
            _ => unreachable!(),
        }
    }

    /// `Phi_1..Phi_n`.
    pub fn coefficients(&self) -> Vec<f64> {
        (1..=self.n).map(|w| self.coefficient(w)).collect()
    }

    /// `F(H)` from the weight distribution of `C(H)`.
    pub fn evaluate(&self, wd: &WeightDistribution) -> Result<f64> {
        if wd.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: wd.n(),
            });
        }
        Ok(compensated_sum((1..=self.n).filter_map(|w| {
            let a = wd.count(w).to_f64().unwrap_or(f64::INFINITY);
            (a != 0.0).then(|| self.coefficient(w) * a)
        })))
    }

    fn check_params(&self, params: EnsembleParams) {
        assert_eq!(params.n, self.n, "ensemble block length must match the functional");
    }

    /// `E[F] = 2^-m sum_w Phi_w C(n, w)`, summed term by term.
    pub fn termwise_expectation(&self, params: EnsembleParams) -> f64 {
        self.check_params(params);
        let scale = (-(params.m as f64)).exp2();
        compensated_sum((1..=self.n).map(|w| self.coefficient(w) * binomial_f64(self.n, w))) * scale
    }

    /// `VAR[F] = (1 - 2^-m) 2^-m sum_w Phi_w^2 C(n, w)`; cross terms vanish
    /// because distinct weights are uncorrelated.
    pub fn termwise_variance(&self, params: EnsembleParams) -> f64 {
        self.check_params(params);
        let p = (-(params.m as f64)).exp2();
        compensated_sum((1..=self.n).map(|w| self.coefficient(w).powi(2) * binomial_f64(self.n, w))) * p * (1.0 - p)
    }

    /// `log2 E[F]` over the ensemble. Exponential families use
    /// `E[F] = 2^-m ((K1+K2)^n - K2^n)` in the log domain.
    pub fn log2_expectation(&self, params: EnsembleParams) -> Result<ExtReal> {
        self.check_params(params);
        match self.exponential_form() {
            Some((a, b)) => {
                let n = self.n as f64;
                let s = log2_add(a, b);
                Ok(ExtReal::Finite(
                    -(params.m as f64) + n * s + log2_one_minus_exp2(n * (b - s)),
                ))
            }
            None => log2_of_moment(self.termwise_expectation(params)),
        }
    }

    /// `log2 VAR[F]`; exponential families use
    /// `VAR[F] = (1 - 2^-m) 2^-m ((K1^2+K2^2)^n - K2^(2n))`.
    pub fn log2_variance(&self, params: EnsembleParams) -> Result<ExtReal> {
        self.check_params(params);
        match self.exponential_form() {
            Some((a, b)) => {
                let n = self.n as f64;
                let m = params.m as f64;
                let s = log2_add(2.0 * a, 2.0 * b);
                Ok(ExtReal::Finite(
                    log2_one_minus_exp2(-m) - m + n * s + log2_one_minus_exp2(n * (2.0 * b - s)),
                ))
            }
            None => log2_of_moment(self.termwise_variance(params)),
        }
    }

    /// `(K1, K2)` in the linear domain, taken from the family parameters directly.
    fn factors(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::Explicit(_) => None,
            Family::ExponentialFamily { log2_k1, log2_k2 } => Some((log2_k1.exp2(), log2_k2.exp2())),
            Family::CodewordCount => Some((1.0, 1.0)),
            Family::UndetectedError { epsilon } => Some((epsilon, 1.0 - epsilon)),
            Family::Bhattacharyya { epsilon } => Some((
                crate::exponents::bhattacharyya_parameter(epsilon).expect("validated"),
                1.0,
            )),
        }
    }

    /// `2^-m (s^n - t^n)` evaluated directly, when both powers are normal
    /// floats and `t^n <= s^n / 2` keeps the subtraction well conditioned.
    fn direct_difference(&self, s: f64, t: f64, m: usize) -> Option<f64> {
        let n = i32::try_from(self.n).ok()?;
        let (sn, tn) = (s.powi(n), t.powi(n));
        let normal = |x: f64| x.is_finite() && x >= f64::MIN_POSITIVE;
        (normal(sn) && normal(tn) && tn <= 0.5 * sn).then(|| (sn - tn) * (-(m as f64)).exp2())
    }

    /// Exact `E[F]`: closed form for exponential families, term sum otherwise.
    ///
    /// Small cases evaluate `2^-m ((K1+K2)^n - K2^n)` directly; the log-domain
    /// form covers the rest.
    pub fn exact_expectation(&self, params: EnsembleParams) -> f64 {
        self.check_params(params);
        match self.factors() {
            None => self.termwise_expectation(params),
            Some((k1, k2)) => self
                .direct_difference(k1 + k2, k2, params.m)
                .unwrap_or_else(|| self.log2_expectation(params).expect("positive family").to_f64().exp2()),
        }
    }

    /// Exact `VAR[F]`: closed form for exponential families, term sum otherwise.
    pub fn exact_variance(&self, params: EnsembleParams) -> f64 {
        self.check_params(params);
        match self.factors() {
            None => self.termwise_variance(params),
            Some((k1, k2)) => self
                .direct_difference(k1 * k1 + k2 * k2, k2 * k2, params.m)
                .map(|d| d * (1.0 - (-(params.m as f64)).exp2()))
                .unwrap_or_else(|| self.log2_variance(params).expect("positive family").to_f64().exp2()),
        }
    }

    /// Coefficient exponent `phi(theta) = lim (1/n) log2 Phi_(theta n)`.
    pub fn phi_exponent(&self, theta: f64) -> Result<ExtReal> {
        check_domain("theta", theta, theta > 0.0 && theta <= 1.0)?;
        let (a, b) = self.exponential_form().ok_or(Error::NoAsymptoticForm)?;
        Ok(ExtReal::Finite(theta * a + (1.0 - theta) * b))
    }

    /// `phi` as a closure over `(0, 1]`, for the rate optimizers.
    pub fn phi(&self) -> Result<impl Fn(f64) -> ExtReal + Send + Sync> {
        let (a, b) = self.exponential_form().ok_or(Error::NoAsymptoticForm)?;
        Ok(move |theta: f64| ExtReal::Finite(theta * a + (1.0 - theta) * b))
    }
}

fn log2_of_moment(value: f64) -> Result<ExtReal> {
    if value > 0.0 {
        Ok(ExtReal::Finite(value.log2()))
    } else if value == 0.0 {
        Ok(ExtReal::NegInf)
    } else {
        Err(Error::NonpositiveMean(value))
    }
}

/// Block-length-independent description of a functional, as written on the
/// command line: `count`, `undetected:EPS`, `bhattacharyya:EPS`,
/// `expfam:K1:K2`, or `explicit:PHI1,PHI2,...`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FunctionalSpec {
    Count,
    Undetected(f64),
    Bhattacharyya(f64),
    ExpFamily(f64, f64),
    Explicit(Vec<f64>),
}

impl FunctionalSpec {
    pub fn build(&self, n: usize) -> Result<LinearFunctional> {
        match self {
            Self::Count => {
                check_n(n)?;
                Ok(LinearFunctional::codeword_count(n))
            }
            Self::Undetected(e) => LinearFunctional::undetected_error(n, *e),
            Self::Bhattacharyya(e) => LinearFunctional::bhattacharyya(n, *e),
            Self::ExpFamily(k1, k2) => LinearFunctional::exponential_family(n, *k1, *k2),
            Self::Explicit(c) if c.len() != n => Err(Error::LengthMismatch {
                expected: n,
                found: c.len(),
            }),
            Self::Explicit(c) => LinearFunctional::explicit(c.clone()),
        }
    }

    /// `(log2 K1, log2 K2)` independent of `n`, if any.
    pub fn exponential_form(&self) -> Option<(f64, f64)> {
        match self {
            Self::Explicit(_) => None,
            _ => self.build(1).ok()?.exponential_form(),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

impl FromStr for FunctionalSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(':').collect()
        };
        let spec = match (kind, args.as_slice()) {
            ("count", []) => Self::Count,
            ("undetected", [e]) => Self::Undetected(parse_f64(e)?),
            ("bhattacharyya", [e]) => Self::Bhattacharyya(parse_f64(e)?),
            ("expfam", [k1, k2]) => Self::ExpFamily(parse_f64(k1)?, parse_f64(k2)?),
            ("explicit", [list]) => Self::Explicit(
                list.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(parse_f64)
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(Error::Parse(format!("unknown functional spec {s:?}"))),
        };
        // validate parameters eagerly
        match &spec {
            Self::Undetected(e) | Self::Bhattacharyya(e) => check_epsilon(*e)?,
            Self::ExpFamily(k1, k2) => {
                LinearFunctional::exponential_family(1, *k1, *k2)?;
            }
            Self::Explicit(c) => {
                LinearFunctional::explicit(c.clone())?;
            }
            Self::Count => {}
        }
        Ok(spec)
    }
}

impl fmt::Display for FunctionalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Count => f.write_str("count"),
            Self::Undetected(e) => write!(f, "undetected:{e}"),
            Self::Bhattacharyya(e) => write!(f, "bhattacharyya:{e}"),
            Self::ExpFamily(k1, k2) => write!(f, "expfam:{k1}:{k2}"),
            Self::Explicit(c) => {
                f.write_str("explicit:")?;
                for (i, v) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}
