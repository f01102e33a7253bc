//! Asymptotic exponents for the random linear code ensemble at design rate
//! `R`, with all logarithms base 2.
//!
//! Covers the binary entropy, the weight-distribution exponent and its
//! concentration rate, the relative Gilbert-Varshamov distance, concentration
//! rates of linear functionals ([`acr`]), and Bhattacharyya-bound error
//! exponents for a BSC with crossover probability `eps`, both for the plain
//! and the expurgated ensemble.

pub mod acr;
mod extreal;
pub mod optimize;

pub use acr::{acr_exponential_family, acr_general, acr_random, AcrResult, ExponentProfile};
pub use extreal::ExtReal;
pub use optimize::{SupEstimate, SupOptions};

use crate::error::{check_domain, Error, Result};
use optimize::{bisect, sup_unit_interval};

const ROOT_TOL: f64 = 1e-15;

pub(crate) fn check_rate(rate: f64) -> Result<()> {
    check_domain("rate", rate, rate > 0.0 && rate < 1.0)
}

fn check_theta(theta: f64) -> Result<()> {
    check_domain("theta", theta, theta > 0.0 && theta <= 1.0)
}

/// `H(x) = -x log2 x - (1-x) log2(1-x)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_domain("x", x, (0.0..=1.0).contains(&x))?;
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Growth exponent of `E[A_(theta n)]`: `H(theta) - (1-R)`.
pub fn weight_exponent(theta: f64, rate: f64) -> Result<f64> {
    check_theta(theta)?;
    check_rate(rate)?;
    Ok(binary_entropy(theta)? - (1.0 - rate))
}

/// Concentration rate of `A_(theta n)`: `1 - R - H(theta)`.
pub fn weight_distribution_acr(theta: f64, rate: f64) -> Result<f64> {
    check_theta(theta)?;
    check_rate(rate)?;
    Ok(1.0 - rate - binary_entropy(theta)?)
}

/// Relative Gilbert-Varshamov distance: the root of `1 - R - H(theta) = 0` in `(0, 1/2)`.
pub fn gv_distance(rate: f64) -> Result<f64> {
    check_rate(rate)?;
    Ok(bisect(
        |t| 1.0 - rate - binary_entropy(t).expect("t in [0, 1/2]"),
        0.0,
        0.5,
        ROOT_TOL,
    ))
}

/// Crossover probability `eps'` in `(0, 1/2)` solving `log2(eps^2 + (1-eps)^2) + 1 - R = 0`.
///
/// Above it the undetected error probability concentrates.
pub fn undetected_threshold(rate: f64) -> Result<f64> {
    check_rate(rate)?;
    Ok(bisect(
        |e| (e * e + (1.0 - e) * (1.0 - e)).log2() + 1.0 - rate,
        0.0,
        0.5,
        ROOT_TOL,
    ))
}

/// Bhattacharyya parameter `D = 2 sqrt(eps (1-eps))`.
pub fn bhattacharyya_parameter(epsilon: f64) -> Result<f64> {
    check_domain("epsilon", epsilon, (0.0..=1.0).contains(&epsilon))?;
    Ok(2.0 * (epsilon * (1.0 - epsilon)).sqrt())
}

fn check_half_open(epsilon: f64) -> Result<()> {
    check_domain("epsilon", epsilon, epsilon > 0.0 && epsilon <= 0.5)
}

/// Error exponent of the averaged Bhattacharyya bound, `1 - R - log2(1 + D)`.
pub fn bhattacharyya_error_exponent(rate: f64, epsilon: f64) -> Result<f64> {
    check_rate(rate)?;
    check_half_open(epsilon)?;
    Ok(1.0 - rate - (1.0 + bhattacharyya_parameter(epsilon)?).log2())
}

/// Concentration rate of the Bhattacharyya bound `B(H) = sum A_w D^w`:
/// `log2((D^2 + 1) / (D + 1)^2) + 1 - R`.
///
/// The closed form sometimes appears with numerator `4 eps (eps - 1) + 1`;
/// that equals `(1 - 2 eps)^2`, not `D^2 + 1 = 4 eps (1 - eps) + 1`, and
/// disagrees with setting `K1 = D, K2 = 1` in [`acr_exponential_family`].
/// The `D^2 + 1` form is the one used here.
pub fn bhattacharyya_acr(rate: f64, epsilon: f64) -> Result<f64> {
    check_rate(rate)?;
    check_domain("epsilon", epsilon, epsilon > 0.0 && epsilon < 1.0)?;
    let d = bhattacharyya_parameter(epsilon)?;
    Ok(((d * d + 1.0) / ((d + 1.0) * (d + 1.0))).log2() + 1.0 - rate)
}

/// `theta_crit = D / (1 + D)`, the minimizer of `1 - R - H(theta) - theta log2 D`.
pub fn theta_crit(epsilon: f64) -> Result<f64> {
    check_domain("epsilon", epsilon, epsilon > 0.0 && epsilon < 1.0)?;
    let d = bhattacharyya_parameter(epsilon)?;
    Ok(d / (1.0 + d))
}

/// Bhattacharyya error exponent over the expurgated ensemble,
/// `min over [theta_GV, 1 - theta_GV] of 1 - R - H(theta) - theta log2 D`.
///
/// The objective is convex with its minimum at `theta_crit`; when that lies
/// below `theta_GV` the constrained minimum sits at `theta_GV` and equals
/// `-theta_GV log2 D`.
pub fn expurgated_error_exponent(rate: f64, epsilon: f64) -> Result<f64> {
    check_rate(rate)?;
    check_half_open(epsilon)?;
    let gv = gv_distance(rate)?;
    if theta_crit(epsilon)? >= gv {
        bhattacharyya_error_exponent(rate, epsilon)
    } else {
        Ok(-gv * bhattacharyya_parameter(epsilon)?.log2())
    }
}

/// The same minimum found numerically: grid scan plus golden refinement of
/// the objective restricted to `[theta_GV, 1 - theta_GV]`.
pub fn expurgated_error_exponent_search(rate: f64, epsilon: f64, opts: SupOptions) -> Result<f64> {
    check_rate(rate)?;
    check_half_open(epsilon)?;
    let gv = gv_distance(rate)?;
    let log_d = bhattacharyya_parameter(epsilon)?.log2();
    let negated = |t: f64| {
        if t < gv || t > 1.0 - gv {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(-(1.0 - rate - binary_entropy(t).expect("theta") - t * log_d))
        }
    };
    // also probe the exact endpoints, which the grid can straddle
    let best = sup_unit_interval(&negated, opts)
        .value
        .max(negated(gv))
        .max(negated(1.0 - gv));
    Ok(-best.finite().expect("nonempty interval"))
}

/// Concentration rate of the Bhattacharyya bound over the expurgated ensemble.
///
/// Exactly `0` when `theta_crit < theta_GV`; otherwise the general rate with
/// the expurgated profile and `phi(theta) = theta log2 D`.
pub fn expurgated_acr(rate: f64, epsilon: f64, opts: SupOptions) -> Result<ExtReal> {
    check_rate(rate)?;
    check_half_open(epsilon)?;
    if theta_crit(epsilon)? < gv_distance(rate)? {
        return Ok(ExtReal::ZERO);
    }
    let log_d = bhattacharyya_parameter(epsilon)?.log2();
    let phi = move |t: f64| ExtReal::Finite(t * log_d);
    Ok(acr_general(&phi, &ExponentProfile::expurgated(rate)?, opts)?.eta)
}

/// Chebyshev bound on `Pr[F / E[F] outside (1 - alpha, 1 + alpha)]`:
/// `min(1, VAR / (alpha^2 E^2))`.
pub fn chebyshev_deviation_bound(mean: f64, variance: f64, alpha: f64) -> Result<f64> {
    if mean.is_nan() || mean <= 0.0 {
        return Err(Error::NonpositiveMean(mean));
    }
    check_domain("variance", variance, variance >= 0.0)?;
    check_domain("alpha", alpha, alpha > 0.0)?;
    Ok((variance / (alpha * alpha * mean * mean)).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        close(binary_entropy(0.11).unwrap(), 0.49991, 1e-5);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn weight_exponent_examples() {
        close(weight_exponent(0.5, 0.5).unwrap(), 0.5, 1e-15);
        close(weight_exponent(gv_distance(0.5).unwrap(), 0.5).unwrap(), 0.0, 1e-12);
        close(weight_exponent(1.0, 0.5).unwrap(), -0.5, 1e-15);
        assert!(weight_exponent(0.0, 0.5).is_err());
    }

    #[test]
    fn weight_acr_examples() {
        close(weight_distribution_acr(0.5, 0.5).unwrap(), -0.5, 1e-15);
        close(
            weight_distribution_acr(gv_distance(0.3).unwrap(), 0.3).unwrap(),
            0.0,
            1e-12,
        );
        let v = weight_distribution_acr(0.11, 0.5).unwrap();
        close(v, 0.5 - binary_entropy(0.11).unwrap(), 1e-15);
        assert!(v > 0.0 && v < 2e-4);
    }

    #[test]
    fn gv_examples() {
        close(gv_distance(1e-12).unwrap(), 0.5, 1e-5);
        close(gv_distance(0.5).unwrap(), 0.110028, 1e-5);
        close(gv_distance(0.9).unwrap(), 0.012987, 1e-5);
        assert!(gv_distance(0.0).is_err());
        assert!(gv_distance(1.0).is_err());
    }

    #[test]
    fn bsc_quantities() {
        assert_eq!(bhattacharyya_parameter(0.5).unwrap(), 1.0);
        assert_eq!(bhattacharyya_parameter(0.0).unwrap(), 0.0);
        close(bhattacharyya_parameter(0.11).unwrap(), 0.62578, 1e-5);
        assert!(bhattacharyya_parameter(1.1).is_err());

        close(bhattacharyya_error_exponent(0.3, 1e-15).unwrap(), 0.7, 1e-6);
        close(bhattacharyya_error_exponent(0.3, 0.5).unwrap(), -0.3, 1e-15);
        close(bhattacharyya_error_exponent(0.5, 0.11).unwrap(), -0.20118, 1e-4);
        assert!(bhattacharyya_error_exponent(0.5, 0.6).is_err());

        close(theta_crit(0.5).unwrap(), 0.5, 1e-15);
        close(theta_crit(0.001).unwrap(), 0.059455, 1e-5);
        close(theta_crit(0.11).unwrap(), 0.38491, 1e-4);
    }

    #[test]
    fn bhattacharyya_acr_examples() {
        for rate in [0.2, 0.5] {
            close(bhattacharyya_acr(rate, 0.5).unwrap(), -rate, 1e-15);
            close(bhattacharyya_acr(rate, 1e-15).unwrap(), 1.0 - rate, 1e-6);
        }
        let d = bhattacharyya_parameter(0.2).unwrap();
        close(
            bhattacharyya_acr(0.4, 0.2).unwrap(),
            acr_exponential_family(d, 1.0, 0.4).unwrap(),
            1e-12,
        );
    }

    #[test]
    fn thresholds_reproduce_table() {
        close(undetected_threshold(0.1).unwrap(), 0.366047, 1e-6);
        close(undetected_threshold(0.5).unwrap(), 0.178203, 1e-6);
        close(undetected_threshold(0.9).unwrap(), 0.034687, 1e-6);
        for rate in [0.2, 0.6] {
            let e = undetected_threshold(rate).unwrap();
            close(acr_exponential_family(e, 1.0 - e, rate).unwrap(), 0.0, 1e-9);
        }
    }

    #[test]
    fn expurgated_examples() {
        close(expurgated_error_exponent(0.5, 0.001).unwrap(), 0.43828, 1e-3);
        let search = expurgated_error_exponent_search(0.5, 0.001, SupOptions::default()).unwrap();
        close(search, expurgated_error_exponent(0.5, 0.001).unwrap(), 1e-6);
        close(expurgated_error_exponent(0.5, 0.5).unwrap(), -0.5, 1e-15);
        close(
            expurgated_error_exponent_search(0.5, 0.5, SupOptions::default()).unwrap(),
            -0.5,
            1e-6,
        );
        assert_eq!(
            expurgated_acr(0.5, 0.001, SupOptions::default()).unwrap(),
            ExtReal::ZERO
        );
    }

    #[test]
    fn expurgated_rate_matches_random_when_peaks_are_interior() {
        // theta_crit(0.11) ~ 0.385 and D^2/(1+D^2) ~ 0.281 both exceed theta_GV(0.5)
        let eta = expurgated_acr(0.5, 0.11, SupOptions::default()).unwrap();
        close(eta.finite().unwrap(), bhattacharyya_acr(0.5, 0.11).unwrap(), 1e-9);
    }

    #[test]
    fn chebyshev_examples() {
        close(chebyshev_deviation_bound(10.0, 1.0, 0.5).unwrap(), 0.04, 1e-15);
        assert_eq!(chebyshev_deviation_bound(10.0, 0.0, 0.5).unwrap(), 0.0);
        assert_eq!(chebyshev_deviation_bound(1.0, 10.0, 0.5).unwrap(), 1.0);
        assert_eq!(
            chebyshev_deviation_bound(0.0, 1.0, 0.5),
            Err(Error::NonpositiveMean(0.0))
        );
        assert!(chebyshev_deviation_bound(1.0, 1.0, 0.0).is_err());
    }
}
