//! Concentration rate of a functional by every applicable formula.

use anyhow::{bail, Result};
use clap::Args;
use serde::Serialize;
use wdconc::exponents::{
    acr_exponential_family, acr_general, acr_random, bhattacharyya_acr, bhattacharyya_error_exponent,
    bhattacharyya_parameter, expurgated_acr, expurgated_error_exponent, expurgated_error_exponent_search, gv_distance,
    theta_crit, undetected_threshold,
};
use wdconc::{AcrResult, Error, ExponentProfile, ExtReal, FunctionalSpec, SupOptions};

use super::resolve_functional;
use crate::report::{Cell, Report};

#[derive(Debug, Clone, Args, Serialize)]
pub struct AcrArgs {
    /// count | undetected:EPS | bhattacharyya:EPS | expfam:K1:K2
    #[arg(long, default_value = "count")]
    pub functional: String,
    /// Crossover probability for `undetected` / `bhattacharyya` given without one
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub rate: f64,
    /// Use the expurgated ensemble (no codewords of relative weight below theta_GV or above 1 - theta_GV)
    #[arg(long)]
    pub expurgated: bool,
    /// Grid points for the numerical suprema (at least 64)
    #[arg(long, default_value_t = SupOptions::default().grid)]
    pub grid: usize,
}

fn ext(x: ExtReal) -> Cell {
    match x {
        ExtReal::NegInf => Cell::Float(f64::NEG_INFINITY),
        ExtReal::Finite(v) => Cell::Float(v),
    }
}

struct Path {
    name: &'static str,
    eta: ExtReal,
    detail: Option<AcrResult>,
}

impl Path {
    fn closed(name: &'static str, eta: f64) -> Self {
        Self {
            name,
            eta: ExtReal::Finite(eta),
            detail: None,
        }
    }

    fn numeric(name: &'static str, r: AcrResult) -> Self {
        Self {
            name,
            eta: r.eta,
            detail: Some(r),
        }
    }
}

pub fn run(args: &AcrArgs) -> Result<Report> {
    let spec = resolve_functional(&args.functional, args.epsilon)?;
    let (log_k1, log_k2) = spec.exponential_form().ok_or(Error::NoAsymptoticForm)?;
    let phi = move |t: f64| ExtReal::Finite(t * log_k1 + (1.0 - t) * log_k2);
    let opts = SupOptions::with_grid(args.grid);
    let rate = args.rate;

    // exact paths first: the first path's rate is the reported one
    let mut paths = Vec::new();
    if args.expurgated {
        if let FunctionalSpec::Bhattacharyya(eps) = spec {
            paths.push(Path {
                name: "bhattacharyya_expurgated",
                eta: expurgated_acr(rate, eps, opts)?,
                detail: None,
            });
        }
        paths.push(Path::numeric(
            "general_expurgated",
            acr_general(&phi, &ExponentProfile::expurgated(rate)?, opts)?,
        ));
    } else {
        paths.push(Path::closed(
            "closed_form",
            acr_exponential_family(log_k1.exp2(), log_k2.exp2(), rate)?,
        ));
        paths.push(Path::numeric("random", acr_random(&phi, rate, opts)?));
        paths.push(Path::numeric(
            "general",
            acr_general(&phi, &ExponentProfile::random(rate)?, opts)?,
        ));
        if let FunctionalSpec::Bhattacharyya(eps) = spec {
            paths.push(Path::closed("bhattacharyya", bhattacharyya_acr(rate, eps)?));
        }
    }

    let mut config = serde_json::to_value(args)?;
    config["functional"] = spec.to_string().into();
    let mut report = Report::new(
        "acr",
        config,
        &[
            "path",
            "eta",
            "expectation_exponent",
            "variance_exponent",
            "expectation_argmax",
            "variance_argmax",
            "refinement_delta",
        ],
    );
    for p in &paths {
        let d = p.detail.as_ref();
        report.push(vec![
            p.name.into(),
            ext(p.eta),
            d.map_or(Cell::Empty, |d| ext(d.expectation_exponent)),
            d.map_or(Cell::Empty, |d| ext(d.variance_exponent)),
            Cell::opt_float(d.map(|d| d.expectation_argmax)),
            Cell::opt_float(d.map(|d| d.variance_argmax.0)),
            Cell::opt_float(d.map(|d| d.refinement_delta)),
        ]);
    }

    let mut discrepancy = 0.0f64;
    for (i, a) in paths.iter().enumerate() {
        for b in &paths[i + 1..] {
            let gap = match (a.eta, b.eta) {
                (ExtReal::Finite(x), ExtReal::Finite(y)) => (x - y).abs(),
                (ExtReal::NegInf, ExtReal::NegInf) => 0.0,
                _ => f64::INFINITY,
            };
            discrepancy = discrepancy.max(gap);
        }
    }
    let Some(eta) = paths.first().map(|p| p.eta) else {
        bail!("no applicable formula");
    };
    report.summarize("max_discrepancy", discrepancy);
    report.summarize("concentrates", eta < ExtReal::ZERO);
    report.summarize("theta_gv", gv_distance(rate)?);
    match spec {
        FunctionalSpec::Bhattacharyya(eps) => {
            report.summarize("bhattacharyya_parameter", bhattacharyya_parameter(eps)?);
            report.summarize("theta_crit", theta_crit(eps)?);
            let exponent = match (eps <= 0.5, args.expurgated) {
                (false, _) => None,
                (true, false) => Some(bhattacharyya_error_exponent(rate, eps)?),
                (true, true) => Some(expurgated_error_exponent(rate, eps)?),
            };
            report.summarize("error_exponent", Cell::opt_float(exponent));
            if args.expurgated && eps <= 0.5 {
                report.summarize(
                    "error_exponent_search",
                    expurgated_error_exponent_search(rate, eps, opts)?,
                );
            }
        }
        FunctionalSpec::Undetected(_) => {
            report.summarize("undetected_threshold", undetected_threshold(rate)?);
        }
        _ => {}
    }
    Ok(report)
}
