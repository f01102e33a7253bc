pub mod acr;
pub mod concentrate;
pub mod lemma;
pub mod moments;
pub mod table1;
pub mod verify_cov;

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use wdconc::FunctionalSpec;

/// Parses a functional spec, filling a missing crossover probability from
/// `--epsilon` and reading `explicit:@FILE` coefficient lists from disk.
pub fn resolve_functional(spec: &str, epsilon: Option<f64>) -> Result<FunctionalSpec> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix("explicit:@") {
        return Ok(FunctionalSpec::Explicit(read_coefficients(Path::new(path))?));
    }
    let spec = match (spec, epsilon) {
        ("undetected" | "bhattacharyya", Some(e)) => format!("{spec}:{e}"),
        ("undetected" | "bhattacharyya", None) => {
            bail!("functional {spec:?} needs a crossover probability (--epsilon)")
        }
        (s, _) => s.to_owned(),
    };
    let parsed: FunctionalSpec = spec.parse()?;
    if let (Some(e), FunctionalSpec::Undetected(own) | FunctionalSpec::Bhattacharyya(own)) = (epsilon, &parsed) {
        if e != *own {
            bail!("--epsilon {e} contradicts the functional spec {spec:?}");
        }
    }
    Ok(parsed)
}

/// Coefficients `Phi_1..Phi_n` from a CSV file: every field of every record, in order.
fn read_coefficients(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        for field in record?.iter().filter(|f| !f.is_empty()) {
            out.push(
                field
                    .parse()
                    .with_context(|| format!("coefficient {field:?} in {}", path.display()))?,
            );
        }
    }
    Ok(out)
}

/// Block lengths from `"10,12,16"` or inclusive ranges `"10:24:2"` (`"a:b"` steps by 1).
pub fn parse_lengths(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<usize> = item
            .split(':')
            .map(|p| p.trim().parse().with_context(|| format!("bad block length {p:?}")))
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            [n] => out.push(*n),
            [a, b] => out.extend(*a..=*b),
            [a, b, step] if *step > 0 => out.extend((*a..=*b).step_by(*step)),
            _ => bail!("bad block length range {item:?}"),
        }
    }
    if out.is_empty() {
        bail!("no block lengths given");
    }
    Ok(out)
}

pub fn rational(q: &BigRational) -> String {
    q.to_string()
}

pub fn pass_label(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
