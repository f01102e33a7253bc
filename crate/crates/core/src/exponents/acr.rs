//! Asymptotic concentration rates `eta = lim (1/n) log2(VAR[F] / E[F]^2)`.
//!
//! For an ensemble with `E[A_(theta n)] ~ 2^(n (H(theta) + q(theta)))` and
//! `COV[A_(theta1 n), A_(theta2 n)] ~ 2^(n gamma(theta1, theta2))`, the rate of
//! `F = sum Phi_w A_w` with coefficient exponent `phi` is
//!
//! ```text
//! eta = sup_{t1,t2} [phi(t1) + phi(t2) + gamma(t1,t2)] - 2 sup_t [phi(t) + H(t) + q(t)]
//! ```

use serde::Serialize;

use super::optimize::{sup_unit_interval, sup_unit_square, SupOptions};
use super::{binary_entropy, check_rate, gv_distance, ExtReal};
use crate::error::{check_domain, Error, Result};

type Profile1 = Box<dyn Fn(f64) -> ExtReal + Send + Sync>;
type Profile2 = Box<dyn Fn(f64, f64) -> ExtReal + Send + Sync>;

/// Grid used for the off-diagonal part of a two-dimensional covariance sup.
const SQUARE_GRID_MAX: usize = 512;

/// First- and second-order exponents of an ensemble: `q(theta)` and
/// `gamma(theta1, theta2)`, split into its diagonal and off-diagonal parts.
pub struct ExponentProfile {
    q: Profile1,
    gamma_diag: Profile1,
    gamma_off: Option<Profile2>,
}

impl ExponentProfile {
    /// A profile from closures. `gamma_off = None` means `gamma = -inf` off the
    /// diagonal; a given `gamma_off` is symmetrized by always evaluating it
    /// with its arguments in increasing order.
    pub fn new(q: Profile1, gamma_diag: Profile1, gamma_off: Option<Profile2>) -> Self {
        Self {
            q,
            gamma_diag,
            gamma_off,
        }
    }

    /// Random linear code ensemble at design rate `rate`:
    /// `q = -(1-R)`, `gamma = H(theta) - (1-R)` on the diagonal and `-inf` off it.
    pub fn random(rate: f64) -> Result<Self> {
        check_rate(rate)?;
        let r = 1.0 - rate;
        Ok(Self::new(
            Box::new(move |_| ExtReal::Finite(-r)),
            Box::new(move |t| ExtReal::Finite(binary_entropy(t).expect("theta in (0,1]") - r)),
            None,
        ))
    }

    /// Expurgated ensemble: as [`ExponentProfile::random`] on
    /// `[theta_GV, 1 - theta_GV]`, `-inf` for both exponents outside it.
    pub fn expurgated(rate: f64) -> Result<Self> {
        check_rate(rate)?;
        let r = 1.0 - rate;
        let gv = gv_distance(rate)?;
        let inside = move |t: f64| t >= gv && t <= 1.0 - gv;
        Ok(Self::new(
            Box::new(move |t| {
                if inside(t) {
                    ExtReal::Finite(-r)
                } else {
                    ExtReal::NegInf
                }
            }),
            Box::new(move |t| {
                if inside(t) {
                    ExtReal::Finite(binary_entropy(t).expect("theta in (0,1]") - r)
                } else {
                    ExtReal::NegInf
                }
            }),
            None,
        ))
    }

    pub fn q(&self, theta: f64) -> ExtReal {
        (self.q)(theta)
    }

    pub fn gamma_diag(&self, theta: f64) -> ExtReal {
        (self.gamma_diag)(theta)
    }

    pub fn gamma(&self, theta1: f64, theta2: f64) -> ExtReal {
        if theta1 == theta2 {
            return (self.gamma_diag)(theta1);
        }
        match &self.gamma_off {
            None => ExtReal::NegInf,
            Some(g) => g(theta1.min(theta2), theta1.max(theta2)),
        }
    }

    pub fn has_off_diagonal(&self) -> bool {
        self.gamma_off.is_some()
    }
}

/// Outcome of an ACR computation; `eta = variance_exponent - 2 expectation_exponent`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcrResult {
    pub eta: ExtReal,
    pub variance_exponent: ExtReal,
    pub expectation_exponent: ExtReal,
    pub expectation_argmax: f64,
    pub variance_argmax: (f64, f64),
    pub grid: usize,
    /// Largest change made by the final refinement pass of either sup.
    pub refinement_delta: f64,
}

fn check_grid(opts: SupOptions) -> Result<()> {
    check_domain("grid", opts.grid as f64, opts.grid >= SupOptions::MIN_GRID)
}

fn assemble(variance: ExtReal, expectation: ExtReal) -> Result<ExtReal> {
    if expectation.is_neg_inf() {
        return Err(Error::DegenerateProfile);
    }
    Ok(variance
        .checked_sub(expectation.scale(2.0))
        .expect("finite expectation"))
}

/// ACR for an arbitrary exponent profile.
///
/// Without off-diagonal covariance the double sup reduces to a scan of
/// `2 phi(theta) + gamma(theta, theta)` along the diagonal.
pub fn acr_general<P>(phi: &P, profile: &ExponentProfile, opts: SupOptions) -> Result<AcrResult>
where
    P: Fn(f64) -> ExtReal + Sync + ?Sized,
{
    check_grid(opts)?;
    let expectation = sup_unit_interval(
        &|t| phi(t) + ExtReal::Finite(binary_entropy(t).expect("theta")) + profile.q(t),
        opts,
    );
    let diagonal = sup_unit_interval(&|t| phi(t) + phi(t) + profile.gamma_diag(t), opts);
    let mut variance = (diagonal.value, (diagonal.argmax, diagonal.argmax));
    if let Some(off) = &profile.gamma_off {
        let grid = opts.grid.min(SQUARE_GRID_MAX);
        let square = sup_unit_square(
            &|a, b| {
                if a == b {
                    ExtReal::NegInf
                } else {
                    phi(a) + phi(b) + off(a.min(b), a.max(b))
                }
            },
            grid,
        );
        if square.0 > variance.0 {
            variance = square;
        }
    }
    Ok(AcrResult {
        eta: assemble(variance.0, expectation.value)?,
        variance_exponent: variance.0,
        expectation_exponent: expectation.value,
        expectation_argmax: expectation.argmax,
        variance_argmax: variance.1,
        grid: opts.grid,
        refinement_delta: expectation.refinement_delta.abs().max(diagonal.refinement_delta.abs()),
    })
}

/// ACR over the random ensemble from two one-dimensional sups:
/// `eta = sup[2 phi + H] - sup[2 phi + 2 H] + 1 - R`.
pub fn acr_random<P>(phi: &P, rate: f64, opts: SupOptions) -> Result<AcrResult>
where
    P: Fn(f64) -> ExtReal + Sync + ?Sized,
{
    check_rate(rate)?;
    check_grid(opts)?;
    let entropy = |t: f64| ExtReal::Finite(binary_entropy(t).expect("theta"));
    let first = sup_unit_interval(&|t| phi(t) + phi(t) + entropy(t), opts);
    let second = sup_unit_interval(&|t| phi(t) + phi(t) + entropy(t) + entropy(t), opts);
    if second.value.is_neg_inf() {
        return Err(Error::DegenerateProfile);
    }
    let eta = first.value.checked_sub(second.value).expect("finite second sup") + (1.0 - rate);
    Ok(AcrResult {
        eta,
        variance_exponent: first.value + -(1.0 - rate),
        expectation_exponent: second.value.scale(0.5) + -(1.0 - rate),
        expectation_argmax: second.argmax,
        variance_argmax: (first.argmax, first.argmax),
        grid: opts.grid,
        refinement_delta: first.refinement_delta.abs().max(second.refinement_delta.abs()),
    })
}

/// Closed-form ACR over the random ensemble for `Phi_w = K1^w K2^(n-w)`:
/// `eta = log2((K1^2 + K2^2) / (K1 + K2)^2) + 1 - R`.
pub fn acr_exponential_family(k1: f64, k2: f64, rate: f64) -> Result<f64> {
    check_domain("K1", k1, k1 > 0.0 && k1.is_finite())?;
    check_domain("K2", k2, k2 > 0.0 && k2.is_finite())?;
    check_rate(rate)?;
    // (K1^2 + K2^2) / (K1 + K2)^2 = t^2 + (1-t)^2 with t = K1 / (K1 + K2)
    let t = k1 / (k1 + k2);
    let u = k2 / (k1 + k2);
    Ok((t * t + u * u).log2() + 1.0 - rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expfam_phi(k1: f64, k2: f64) -> impl Fn(f64) -> ExtReal + Sync {
        let (a, b) = (k1.log2(), k2.log2());
        move |t| ExtReal::Finite(t * a + (1.0 - t) * b)
    }

    #[test]
    fn codeword_count_rate_is_minus_r() {
        let zero = |_: f64| ExtReal::ZERO;
        for rate in [0.25, 0.5, 0.75] {
            let g = acr_general(&zero, &ExponentProfile::random(rate).unwrap(), SupOptions::default()).unwrap();
            assert!((g.eta.finite().unwrap() + rate).abs() < 1e-9, "{g:?}");
            let r = acr_random(&zero, rate, SupOptions::default()).unwrap();
            assert!((r.eta.finite().unwrap() + rate).abs() < 1e-9);
            assert!((r.expectation_exponent.finite().unwrap() - rate).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_phi() {
        let none = |_: f64| ExtReal::NegInf;
        assert_eq!(
            acr_random(&none, 0.5, SupOptions::default()),
            Err(Error::DegenerateProfile)
        );
        let p = ExponentProfile::random(0.5).unwrap();
        assert_eq!(
            acr_general(&none, &p, SupOptions::default()),
            Err(Error::DegenerateProfile)
        );
    }

    #[test]
    fn small_grid_is_rejected() {
        let zero = |_: f64| ExtReal::ZERO;
        assert!(acr_random(&zero, 0.5, SupOptions::with_grid(32)).is_err());
    }

    #[test]
    fn exponential_family_examples() {
        for rate in [0.1, 0.5, 0.9] {
            assert_eq!(acr_exponential_family(1.0, 1.0, rate).unwrap(), -rate);
            assert_eq!(acr_exponential_family(3.7, 3.7, rate).unwrap(), -rate);
        }
        let eta = acr_exponential_family(2.0, 0.5, 0.4).unwrap();
        let direct = ((4.0 + 0.25) / (2.5f64 * 2.5)).log2() + 0.6;
        assert!((eta - direct).abs() < 1e-15);
        assert!(acr_exponential_family(0.0, 1.0, 0.5).is_err());
        assert!(acr_exponential_family(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn random_matches_closed_form() {
        for (k1, k2, rate) in [(0.3, 0.7, 0.5), (2.0, 1.0, 0.2), (0.05, 3.0, 0.8)] {
            let r = acr_random(&expfam_phi(k1, k2), rate, SupOptions::default()).unwrap();
            let c = acr_exponential_family(k1, k2, rate).unwrap();
            assert!((r.eta.finite().unwrap() - c).abs() < 1e-9, "{k1} {k2} {rate}");
        }
    }

    #[test]
    fn off_diagonal_profile_takes_two_dimensional_path() {
        // a made-up ensemble whose covariance exponent peaks off the diagonal
        let profile = ExponentProfile::new(
            Box::new(|_| ExtReal::Finite(-0.5)),
            Box::new(|_| ExtReal::Finite(-2.0)),
            Some(Box::new(|a, b| ExtReal::Finite(-(a - 0.2).powi(2) - (b - 0.6).powi(2)))),
        );
        assert!(profile.has_off_diagonal());
        assert_eq!(profile.gamma(0.6, 0.2), profile.gamma(0.2, 0.6));
        let zero = |_: f64| ExtReal::ZERO;
        let g = acr_general(&zero, &profile, SupOptions::default()).unwrap();
        assert!(g.variance_exponent.finite().unwrap().abs() < 1e-9);
        let (a, b) = g.variance_argmax;
        assert!((a.min(b) - 0.2).abs() < 1e-5 && (a.max(b) - 0.6).abs() < 1e-5);
        // expectation exponent: sup H - 0.5 = 0.5
        assert!((g.eta.finite().unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_profile_is_symmetric() {
        let p = ExponentProfile::random(0.3).unwrap();
        assert_eq!(p.gamma(0.2, 0.4), ExtReal::NegInf);
        assert_eq!(p.gamma(0.4, 0.2), ExtReal::NegInf);
        assert!((p.gamma(0.5, 0.5).finite().unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(p.q(0.9), ExtReal::Finite(-0.7));
    }
}
