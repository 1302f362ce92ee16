use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use tamagawa_core::ekstats::{distribution_report, sigma_g, sigma_g_predicted, tail_fraction_of, Grid};

use super::{pair_of, Curve};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_csv, write_json, SCHEMA_VERSION};
use crate::scan::{ineligibility, scan_rows, TwistRow};

pub const TWISTS_HEADER: [&str; 7] = ["d", "g_chi", "correction", "ord2T", "dim_selphi", "dim_selphihat", "d2_lower_bound"];

#[derive(Debug, Clone, Serialize)]
pub struct TailFraction {
    pub r: i32,
    pub fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Normalization {
    /// Empirical mean of `ord₂T`.
    pub center: f64,
    /// `√(½ log log X)`; absent when `log log X ≤ 0`.
    pub scale: Option<f64>,
    /// `σ_g(X)` from the symbol sum over primes.
    pub sigma_g_exact: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub schema_version: u32,
    pub command: &'static str,
    curve: Curve,
    #[serde(rename = "X")]
    pub x: u64,
    pub twists: usize,
    #[serde(rename = "ord2T_counts")]
    pub ord2t_counts: BTreeMap<i32, u64>,
    pub correction_values: Vec<i32>,
    pub tail_fractions: Vec<TailFraction>,
    pub normalization: Normalization,
    /// Distance to the Gaussian on the half-integer grid, when a scale exists.
    pub ks: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub rows: Vec<TwistRow>,
    pub summary: ScanSummary,
    pub files: Vec<PathBuf>,
}

/// Writes `twists.csv` and `summary.json` for every squarefree `0 < |d| < X`.
pub fn cmd_scan(config: &RunConfig) -> CliResult<ScanOutcome> {
    config.validate()?;
    let x = config.single_x()?;
    let pair = pair_of(config)?;
    if let Some(why) = ineligibility(&pair) {
        return Err(CliError::Config(format!("{why}; scans need an eligible curve")));
    }
    let rows = scan_rows(&pair, x)?;
    for row in &rows {
        if row.ord2t != row.g_chi + row.correction {
            return Err(CliError::Identity(format!("d = {}: ord2T ≠ g + correction", row.d)));
        }
    }
    let ord2t: Vec<i32> = rows.iter().map(|r| r.ord2t).collect();
    let mut counts = BTreeMap::new();
    for &t in &ord2t {
        *counts.entry(t).or_insert(0u64) += 1;
    }
    let mut corrections: Vec<i32> = rows.iter().map(|r| r.correction).collect();
    corrections.sort_unstable();
    corrections.dedup();
    let tail_fractions = config
        .r_list
        .iter()
        .map(|&r| Ok(TailFraction { r, fraction: tail_fraction_of(&ord2t, r)? }))
        .collect::<CliResult<Vec<_>>>()?;
    let values: Vec<f64> = ord2t.iter().map(|&t| t as f64).collect();
    let center = values.iter().sum::<f64>() / values.len() as f64;
    let scale = sigma_g_predicted(x as f64).ok();
    let ks = match scale {
        Some(s) => Some(distribution_report(&values, center, s, Grid::INTEGER)?.ks),
        None => None,
    };
    let summary = ScanSummary {
        schema_version: SCHEMA_VERSION,
        command: "scan",
        curve: Curve::from(&pair),
        x,
        twists: rows.len(),
        ord2t_counts: counts,
        correction_values: corrections,
        tail_fractions,
        normalization: Normalization { center, scale, sigma_g_exact: sigma_g(&pair, x) },
        ks,
    };
    ensure_dir(&config.output)?;
    let files = vec![
        write_csv(&config.output, "twists.csv", &TWISTS_HEADER, &rows)?,
        write_json(&config.output, "summary.json", &summary)?,
    ];
    Ok(ScanOutcome { rows, summary, files })
}
