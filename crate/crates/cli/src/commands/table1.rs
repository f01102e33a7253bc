//! Crossover thresholds above which the undetected error probability concentrates.

use clap::Args;
use serde::Serialize;
use wdconc::exponents::undetected_threshold;

use crate::report::{Cell, Outcome, Report};

/// Published six-decimal thresholds for rates 0.1 through 0.9.
pub const REFERENCE_THRESHOLDS: [(f64, f64); 9] = [
    (0.1, 0.366047),
    (0.2, 0.307193),
    (0.3, 0.259613),
    (0.4, 0.217375),
    (0.5, 0.178203),
    (0.6, 0.140933),
    (0.7, 0.104872),
    (0.8, 0.069564),
    (0.9, 0.034687),
];

#[derive(Debug, Clone, Args, Serialize)]
pub struct Table1Args {
    /// Design rates to tabulate (default 0.1, 0.2, ..., 0.9)
    #[arg(long = "rate", value_delimiter = ',')]
    pub rates: Vec<f64>,
    /// Allowed distance from a published reference value
    #[arg(long, default_value_t = 5e-7)]
    pub tol: f64,
}

pub fn run(args: &Table1Args) -> Report {
    let rates: Vec<f64> = if args.rates.is_empty() {
        (1..=9).map(|i| i as f64 / 10.0).collect()
    } else {
        args.rates.clone()
    };
    let config = serde_json::json!({ "rates": rates, "tol": args.tol });
    let mut report = Report::new(
        "table1",
        config,
        &[
            "rate",
            "threshold",
            "threshold_6dp",
            "reference",
            "abs_error",
            "status",
            "error",
        ],
    );
    for rate in rates {
        match undetected_threshold(rate) {
            Ok(t) => {
                let reference = REFERENCE_THRESHOLDS.iter().find(|(r, _)| *r == rate).map(|&(_, v)| v);
                let error = reference.map(|v| (t - v).abs());
                let status = match error {
                    Some(e) if e <= args.tol => "PASS",
                    Some(_) => {
                        report.mark(Outcome::Fail);
                        "FAIL"
                    }
                    None => "",
                };
                report.push(vec![
                    rate.into(),
                    t.into(),
                    format!("{t:.6}").into(),
                    Cell::opt_float(reference),
                    Cell::opt_float(error),
                    status.into(),
                    Cell::Empty,
                ]);
            }
            Err(e) => {
                report.mark(Outcome::DomainError);
                report.push(vec![
                    rate.into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    "ERROR".into(),
                    e.to_string().into(),
                ]);
            }
        }
    }
    report
}
