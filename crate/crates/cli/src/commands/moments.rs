//! Exact weight-count moments for one ensemble, plus functional moments,
//! an optional exhaustive cross-check and an optional single matrix.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use wdconc::ensemble::{covariance_weights, expected_weight, monte_carlo_functional, EnsembleCensus, BRUTE_FORCE_CAP};
use wdconc::gf2::{rank, weight_distribution_with_limit};
use wdconc::{BitMatrix, EnsembleParams, EnumerationLimit, ExtReal};

use super::{pass_label, rational, resolve_functional};
use crate::report::{Cell, Outcome, Report};

#[derive(Debug, Clone, Args, Serialize)]
pub struct MomentsArgs {
    /// Block length (taken from --matrix when omitted)
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of parity checks
    #[arg(long, conflicts_with = "rate")]
    pub m: Option<usize>,
    /// Design rate; m = round((1 - R) n)
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long, default_value = "count")]
    pub functional: String,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Parity-check matrix file: a line "m n", then m lines of n characters 0/1
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Enumerate the whole ensemble when n * m is at most this (0 disables; at most 20)
    #[arg(long, default_value_t = 16)]
    pub max_nm: usize,
    /// Monte Carlo samples of the functional (0 skips sampling)
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn ext(x: ExtReal) -> Cell {
    Cell::Float(x.to_f64())
}

fn resolve_params(args: &MomentsArgs, matrix: Option<&BitMatrix>) -> Result<EnsembleParams> {
    if let Some(h) = matrix {
        let from_file = EnsembleParams::new(h.cols(), h.rows())?;
        let n_ok = args.n.map_or(true, |n| n == from_file.n);
        let m_ok = args.m.map_or(true, |m| m == from_file.m);
        if !n_ok || !m_ok || args.rate.is_some() {
            bail!(
                "--n/--m/--rate disagree with the {} x {} matrix file",
                from_file.m,
                from_file.n
            );
        }
        return Ok(from_file);
    }
    let Some(n) = args.n else {
        bail!("--n is required without --matrix");
    };
    Ok(match (args.m, args.rate) {
        (Some(m), _) => EnsembleParams::new(n, m)?,
        (None, Some(r)) => EnsembleParams::from_rate(n, r)?,
        (None, None) => bail!("give --m or --rate"),
    })
}

pub fn run(args: &MomentsArgs) -> Result<Report> {
    if args.max_nm > BRUTE_FORCE_CAP {
        bail!(wdconc::Error::TooLarge {
            nm: args.max_nm,
            cap: BRUTE_FORCE_CAP
        });
    }
    let matrix = match &args.matrix {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(
                text.parse::<BitMatrix>()
                    .with_context(|| format!("parsing {}", path.display()))?,
            )
        }
        None => None,
    };
    let params = resolve_params(args, matrix.as_ref())?;
    let (n, m) = (params.n, params.m);
    let spec = resolve_functional(&args.functional, args.epsilon)?;
    let f = spec.build(n)?;
    let census = if n * m <= args.max_nm {
        Some(EnsembleCensus::enumerate(params)?)
    } else {
        None
    };
    let distribution = match &matrix {
        Some(h) => Some(weight_distribution_with_limit(h, EnumerationLimit::DEFAULT)?),
        None => None,
    };

    let mut config = serde_json::to_value(args)?;
    config["functional"] = spec.to_string().into();
    config["n"] = n.into();
    config["m"] = m.into();
    let mut report = Report::new(
        "moments",
        config,
        &[
            "w",
            "mean",
            "variance",
            "mean_f64",
            "variance_f64",
            "brute_force_mean",
            "brute_force_variance",
            "status",
            "matrix_count",
        ],
    );
    for w in 1..=n {
        let mean = expected_weight(params, w)?;
        let var = covariance_weights(params, w, w)?;
        let (brute_mean, brute_var, status) = match &census {
            Some(c) => {
                let (bm, bv) = (c.mean(w), c.covariance(w, w));
                let ok = bm == mean && bv == var;
                if !ok {
                    report.mark(Outcome::Fail);
                }
                (
                    Cell::from(rational(&bm)),
                    Cell::from(rational(&bv)),
                    Cell::from(pass_label(ok)),
                )
            }
            None => (Cell::Empty, Cell::Empty, Cell::Empty),
        };
        report.push(vec![
            w.into(),
            rational(&mean).into(),
            rational(&var).into(),
            num_traits::ToPrimitive::to_f64(&mean).unwrap_or(f64::NAN).into(),
            num_traits::ToPrimitive::to_f64(&var).unwrap_or(f64::NAN).into(),
            brute_mean,
            brute_var,
            status,
            distribution
                .as_ref()
                .map_or(Cell::Empty, |d| Cell::text(d.count(w).to_string())),
        ]);
    }

    report.summarize("functional", spec.to_string());
    report.summarize("functional_mean", f.exact_expectation(params));
    report.summarize("functional_variance", f.exact_variance(params));
    report.summarize("functional_mean_termwise", f.termwise_expectation(params));
    report.summarize("functional_variance_termwise", f.termwise_variance(params));
    report.summarize("functional_log2_mean", ext(f.log2_expectation(params)?));
    report.summarize("functional_log2_variance", ext(f.log2_variance(params)?));
    match &census {
        Some(c) => {
            let (bm, bv) = c.functional_moments(&f)?;
            report.summarize("functional_mean_brute_force", bm);
            report.summarize("functional_variance_brute_force", bv);
        }
        None => {
            report.summarize("functional_mean_brute_force", Cell::Empty);
            report.summarize("functional_variance_brute_force", Cell::Empty);
        }
    }
    if let (Some(h), Some(d)) = (&matrix, &distribution) {
        report.summarize("matrix_rank", rank(h));
        report.summarize("matrix_functional", f.evaluate(d)?);
    }
    if args.samples > 0 {
        let r = monte_carlo_functional(params, &f, args.samples, args.seed, &[], EnumerationLimit::DEFAULT)?;
        report.summarize("sample_mean", r.moments.mean);
        report.summarize("sample_mean_halfwidth", Cell::opt_float(r.moments.confidence_halfwidth));
        report.summarize("sample_variance", r.moments.variance);
        report.summarize("sample_variance_halfwidth", r.variance_halfwidth);
    }
    Ok(report)
}
