use std::path::PathBuf;

use serde::Serialize;
use tamagawa_core::quadfield::{make_field, mainterm_sf, IdealK, SquarefreeCensus};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_csv};

pub const SFCOUNT_HEADER: [&str; 8] = ["X", "class", "q", "d", "brute_count", "main_term", "gap", "normalized_gap"];

/// One line of `sfcount.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SfRow {
    #[serde(rename = "X")]
    pub x: u64,
    /// The minimal-norm representative of the class, as `p:idx` tokens.
    pub class: String,
    pub q: String,
    pub d: String,
    pub brute_count: u64,
    pub main_term: f64,
    pub gap: f64,
    /// `gap / (√X · 3^{ω(q)})`.
    pub normalized_gap: f64,
}

/// Squarefree divisors of `q`, ordered by norm.
fn squarefree_divisors(q: &IdealK) -> Vec<IdealK> {
    let primes: Vec<_> = q.factors().iter().map(|(p, _)| *p).collect();
    let mut out: Vec<IdealK> = (0u32..1 << primes.len())
        .map(|mask| {
            let chosen: Vec<_> = (0..primes.len()).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).collect();
            IdealK::from_primes(&chosen)
        })
        .collect();
    out.sort();
    out
}

/// Writes `sfcount.csv`: one row per `X`, class and divisor `d`.
pub fn cmd_ideal_count(config: &RunConfig) -> CliResult<(Vec<SfRow>, PathBuf)> {
    config.validate()?;
    let m = config.field.ok_or_else(|| CliError::Config("ideal-count needs a quadratic field (--m)".into()))?;
    let field = make_field(m)?;
    let q = IdealK::from_spec(&field, &config.q)?;
    if q.omega() > 20 {
        return Err(CliError::Config("q has too many prime factors".into()));
    }
    let ds = match &config.d {
        Some(d) => vec![IdealK::from_spec(&field, d)?],
        None => squarefree_divisors(&q),
    };
    let limit = *config.x.iter().max().expect("validated");
    let census = SquarefreeCensus::new(&field, limit);
    let reps = field.class_data().representatives();
    let three = 3f64.powi(q.omega() as i32);
    let mut rows = Vec::new();
    for &x in &config.x {
        for d in &ds {
            for (class, rep) in reps.iter().enumerate() {
                let brute = census.count(x, class, &q, d)?;
                let main = mainterm_sf(&field, x as f64, rep, &q, d)?;
                let gap = brute as f64 - main;
                rows.push(SfRow {
                    x,
                    class: rep.to_string(),
                    q: q.to_string(),
                    d: d.to_string(),
                    brute_count: brute,
                    main_term: main,
                    gap,
                    normalized_gap: gap / ((x as f64).sqrt() * three),
                });
            }
        }
    }
    ensure_dir(&config.output)?;
    let path = write_csv(&config.output, "sfcount.csv", &SFCOUNT_HEADER, &rows)?;
    Ok((rows, path))
}
