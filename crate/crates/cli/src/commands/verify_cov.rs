//! Exhaustive check of the weight-count mean and covariance formulas.

use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;
use wdconc::ensemble::{covariance_weights, expected_weight, EnsembleCensus, BRUTE_FORCE_CAP};
use wdconc::EnsembleParams;

use super::{pass_label, rational};
use crate::report::{Outcome, Report};

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyCovArgs {
    /// Check every shape with n * m up to this many matrix bits (at most 20)
    #[arg(long, default_value_t = 12)]
    pub max_nm: usize,
}

/// Shapes `(n, m)` with `n m <= max_nm`, by `n` then `m`.
pub fn shapes(max_nm: usize) -> Vec<(usize, usize)> {
    (1..=max_nm)
        .flat_map(|n| (1..=max_nm / n).map(move |m| (n, m)))
        .collect()
}

pub fn run(args: &VerifyCovArgs) -> Result<Report> {
    if args.max_nm > BRUTE_FORCE_CAP {
        bail!(wdconc::Error::TooLarge {
            nm: args.max_nm,
            cap: BRUTE_FORCE_CAP
        });
    }
    let mut report = Report::new(
        "verify-cov",
        serde_json::to_value(args)?,
        &["n", "m", "quantity", "w1", "w2", "brute_force", "closed_form", "status"],
    );
    let (mut checked, mut failed) = (0usize, 0usize);
    for (n, m) in shapes(args.max_nm) {
        let p = EnsembleParams::new(n, m)?;
        let census = EnsembleCensus::enumerate(p)?;
        let mut record = |quantity: &str, w1: usize, w2: usize, brute, closed| {
            let ok = brute == closed;
            checked += 1;
            if !ok {
                failed += 1;
            }
            report.push(vec![
                n.into(),
                m.into(),
                quantity.into(),
                w1.into(),
                w2.into(),
                rational(&brute).into(),
                rational(&closed).into(),
                pass_label(ok).into(),
            ]);
        };
        for w in 1..=n {
            record("mean", w, w, census.mean(w), expected_weight(p, w)?);
        }
        for w1 in 1..=n {
            for w2 in 1..=n {
                record("cov", w1, w2, census.covariance(w1, w2), covariance_weights(p, w1, w2)?);
            }
        }
    }
    report.summarize("checked", checked);
    report.summarize("failed", failed);
    if failed > 0 {
        report.mark(Outcome::Fail);
    }
    Ok(report)
}
