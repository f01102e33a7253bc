//! Finite-n concentration of a functional: exact ratios, predicted rate and
//! Monte Carlo estimates, one row per block length.

use anyhow::Result;
use clap::Args;
use serde::Serialize;
use wdconc::ensemble::monte_carlo_functional;
use wdconc::exponents::{acr_exponential_family, chebyshev_deviation_bound};
use wdconc::{EnsembleParams, EnumerationLimit, ExtReal};

use super::{parse_lengths, resolve_functional};
use crate::report::{Cell, Report};

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConcentrateArgs {
    /// count | undetected:EPS | bhattacharyya:EPS | expfam:K1:K2 | explicit:PHI,... | explicit:@FILE
    #[arg(long, default_value = "count")]
    pub functional: String,
    /// Crossover probability for `undetected` / `bhattacharyya` given without one
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Block lengths: a list `10,12` and/or inclusive ranges `10:24:2`
    #[arg(long)]
    pub n: String,
    /// Fixed number of parity checks for every n
    #[arg(long, conflicts_with = "rate")]
    pub m: Option<usize>,
    /// Design rate; m = round((1 - R) n) [default: 0.5]
    #[arg(long)]
    pub rate: Option<f64>,
    /// Monte Carlo samples per n; 0 reports exact values only
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Deviation levels for the Chebyshev bound and empirical frequencies
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5")]
    pub alpha: Vec<f64>,
    /// Largest code dimension enumerated per sampled matrix
    #[arg(long, default_value_t = EnumerationLimit::DEFAULT.max_dimension())]
    pub max_dimension: u32,
}

fn log_ratio(var: ExtReal, mean: ExtReal, n: usize) -> Option<f64> {
    match (var, mean) {
        (ExtReal::Finite(v), ExtReal::Finite(e)) => Some((v - 2.0 * e) / n as f64),
        _ => None,
    }
}

pub fn run(args: &ConcentrateArgs) -> Result<Report> {
    let spec = resolve_functional(&args.functional, args.epsilon)?;
    let lengths = parse_lengths(&args.n)?;
    let sampled = args.samples > 0;
    let mut columns: Vec<String> = [
        "n",
        "m",
        "design_rate",
        "exact_mean",
        "exact_variance",
        "exact_ratio",
        "exact_log_ratio",
        "predicted_eta",
    ]
    .map(String::from)
    .to_vec();
    if sampled {
        columns.extend(
            [
                "empirical_mean",
                "mean_halfwidth",
                "empirical_variance",
                "variance_halfwidth",
                "empirical_ratio",
                "ratio_halfwidth",
                "empirical_log_ratio",
            ]
            .map(String::from),
        );
    }
    for a in &args.alpha {
        columns.push(format!("chebyshev_a{a}"));
        if sampled {
            columns.push(format!("deviation_a{a}"));
            columns.push(format!("deviation_halfwidth_a{a}"));
        }
    }
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut config = serde_json::to_value(args)?;
    config["functional"] = spec.to_string().into();
    let mut report = Report::new("concentrate", config, &column_refs);

    for n in lengths {
        let params = match args.m {
            Some(m) => EnsembleParams::new(n, m)?,
            None => EnsembleParams::from_rate(n, args.rate.unwrap_or(0.5))?,
        };
        let rate = args.rate.unwrap_or_else(|| params.design_rate());
        let f = spec.build(n)?;
        let (log_mean, log_var) = (f.log2_expectation(params)?, f.log2_variance(params)?);
        let (mean, var) = (f.exact_expectation(params), f.exact_variance(params));
        let positive = mean > 0.0;
        let predicted = match spec.exponential_form() {
            Some((a, b)) if rate > 0.0 && rate < 1.0 => Some(acr_exponential_family(a.exp2(), b.exp2(), rate)?),
            _ => None,
        };
        let mut row: Vec<Cell> = vec![
            n.into(),
            params.m.into(),
            params.design_rate().into(),
            mean.into(),
            var.into(),
            Cell::opt_float(positive.then(|| var / (mean * mean))),
            Cell::opt_float(if positive {
                log_ratio(log_var, log_mean, n)
            } else {
                None
            }),
            Cell::opt_float(predicted),
        ];
        let mc = if sampled {
            let limit = EnumerationLimit::new(args.max_dimension);
            let r = monte_carlo_functional(params, &f, args.samples, args.seed, &args.alpha, limit)?;
            let has_ratio = r.moments.mean != 0.0;
            row.extend([
                r.moments.mean.into(),
                Cell::opt_float(r.moments.confidence_halfwidth),
                r.moments.variance.into(),
                r.variance_halfwidth.into(),
                Cell::opt_float(has_ratio.then_some(r.ratio)),
                Cell::opt_float(has_ratio.then_some(r.ratio_halfwidth)),
                Cell::opt_float((has_ratio && r.ratio > 0.0).then(|| r.ratio.log2() / n as f64)),
            ]);
            Some(r)
        } else {
            None
        };
        for (i, &alpha) in args.alpha.iter().enumerate() {
            let bound = if positive {
                Some(chebyshev_deviation_bound(mean, var, alpha)?)
            } else {
                None
            };
            row.push(Cell::opt_float(bound));
            if let Some(r) = &mc {
                let d = r.deviations.get(i);
                row.push(Cell::opt_float(d.map(|d| d.frequency)));
                row.push(Cell::opt_float(d.map(|d| d.halfwidth)));
            }
        }
        report.push(row);
    }
    Ok(report)
}
