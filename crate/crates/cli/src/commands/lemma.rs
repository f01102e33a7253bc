//! Row counts `#{h : h.x = 0, h.y = 0}` against brute force, tallied by overlap case.

use anyhow::{bail, Result};
use clap::Args;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use wdconc::ensemble::{count_orthogonal_rows, count_orthogonal_rows_brute, OverlapCase, PairOverlapProfile};
use wdconc::BitVector;

use super::pass_label;
use crate::report::{Outcome, Report};

/// Largest block length swept exhaustively.
pub const MAX_EXHAUSTIVE_N: usize = 12;

#[derive(Debug, Clone, Args, Serialize)]
pub struct LemmaArgs {
    /// Sweep all nonzero pairs for every n up to this length (at most 12)
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// Check a single pair instead, given as a bit string (needs --y)
    #[arg(long, requires = "y")]
    pub x: Option<String>,
    #[arg(long, requires = "x")]
    pub y: Option<String>,
}

pub fn run(args: &LemmaArgs) -> Result<Report> {
    match (&args.x, &args.y) {
        (Some(x), Some(y)) => single_pair(args, &x.parse()?, &y.parse()?),
        _ => sweep(args),
    }
}

fn expected(n: usize, equal: bool) -> BigUint {
    BigUint::from(1u32) << if equal { n - 1 } else { n - 2 }
}

fn single_pair(args: &LemmaArgs, x: &BitVector, y: &BitVector) -> Result<Report> {
    let mut report = Report::new(
        "lemma",
        serde_json::to_value(args)?,
        &["n", "x", "y", "case", "formula", "brute_force", "expected", "status"],
    );
    let profile = PairOverlapProfile::of(x, y)?;
    let formula = count_orthogonal_rows(x, y)?;
    let brute = count_orthogonal_rows_brute(x, y)?;
    let expect = expected(x.len(), x == y);
    let ok = formula == brute && brute == expect;
    report.push(vec![
        x.len().into(),
        x.to_string().into(),
        y.to_string().into(),
        profile.case().label().into(),
        formula.to_string().into(),
        brute.to_string().into(),
        expect.to_string().into(),
        pass_label(ok).into(),
    ]);
    if !ok {
        report.mark(Outcome::Fail);
    }
    Ok(report)
}

/// `zero[x]` has bit `h` set when `h . x = 0`, for every `h` in `F_2^n`.
fn orthogonality_sets(n: usize) -> Vec<Vec<u64>> {
    let words = (1usize << n).div_ceil(64);
    (0u64..1 << n)
        .map(|x| {
            let mut set = vec![0u64; words];
            for h in 0u64..1 << n {
                if (h & x).count_ones() % 2 == 0 {
                    set[(h / 64) as usize] |= 1 << (h % 64);
                }
            }
            set
        })
        .collect()
}

#[derive(Default, Clone, Copy)]
struct Tally {
    pairs: u64,
    passed: u64,
}

fn case_index(c: OverlapCase) -> usize {
    OverlapCase::ALL.iter().position(|&k| k == c).expect("listed case")
}

fn sweep(args: &LemmaArgs) -> Result<Report> {
    if args.n_max > MAX_EXHAUSTIVE_N {
        bail!("--n-max {} exceeds the exhaustive limit {MAX_EXHAUSTIVE_N}", args.n_max);
    }
    let mut report = Report::new(
        "lemma",
        serde_json::to_value(args)?,
        &["n", "case", "label", "pairs", "passed", "status"],
    );
    let (mut total, mut passed) = (0u64, 0u64);
    for n in 1..=args.n_max {
        let sets = orthogonality_sets(n);
        let tallies = (1u64..1 << n)
            .into_par_iter()
            .map(|x| {
                let mut t = [Tally::default(); 4];
                let bx = BitVector::from_u64(n, x);
                for y in 1u64..1 << n {
                    let by = BitVector::from_u64(n, y);
                    let brute: u64 = sets[x as usize]
                        .iter()
                        .zip(&sets[y as usize])
                        .map(|(a, b)| (a & b).count_ones() as u64)
                        .sum();
                    let formula = count_orthogonal_rows(&bx, &by).expect("nonzero pair");
                    let brute = BigUint::from(brute);
                    let slot = &mut t[case_index(PairOverlapProfile::of(&bx, &by).expect("same length").case())];
                    slot.pairs += 1;
                    if formula == brute && brute == expected(n, x == y) {
                        slot.passed += 1;
                    }
                }
                t
            })
            .reduce(
                || [Tally::default(); 4],
                |mut a, b| {
                    for (s, o) in a.iter_mut().zip(b) {
                        s.pairs += o.pairs;
                        s.passed += o.passed;
                    }
                    a
                },
            );
        for (case, t) in OverlapCase::ALL.iter().zip(tallies) {
            total += t.pairs;
            passed += t.passed;
            let status = if t.pairs == 0 {
                "NONE"
            } else {
                pass_label(t.passed == t.pairs)
            };
            report.push(vec![
                n.into(),
                format!("{case:?}").to_lowercase().into(),
                case.label().into(),
                t.pairs.into(),
                t.passed.into(),
                status.into(),
            ]);
        }
    }
    report.summarize("total_pairs", total);
    report.summarize("total_passed", passed);
    if passed != total {
        report.mark(Outcome::Fail);
    }
    Ok(report)
}
