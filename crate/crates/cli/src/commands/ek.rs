use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use tamagawa_core::characters::BaseField;
use tamagawa_core::ekstats::{
    additive_values, distribution_report, empirical_moment, mu_f, sigma_f, AdditiveFunctionSpec, DistributionReport, Grid,
    MomentReport,
};

use super::pair_of;
use crate::config::{FunctionKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{cdf_svg, ensure_dir, write_csv, write_json, write_text, SCHEMA_VERSION};

#[derive(Debug, Clone, Serialize)]
pub struct MomentJson {
    #[serde(rename = "X")]
    pub x: u64,
    pub z: f64,
    pub k: u32,
    pub sigma_z: f64,
    pub empirical: f64,
    pub predicted: f64,
    pub ratio: f64,
    pub outside_uniform_range: bool,
    pub characters: usize,
}

impl From<&MomentReport> for MomentJson {
    fn from(m: &MomentReport) -> Self {
        MomentJson {
            x: m.x,
            z: m.z,
            k: m.k,
            sigma_z: m.sigma_z,
            empirical: m.empirical,
            predicted: m.predicted,
            ratio: m.ratio,
            outside_uniform_range: m.outside_uniform_range,
            characters: m.characters,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionJson {
    #[serde(rename = "X")]
    pub x: u64,
    pub n: usize,
    pub center: f64,
    pub scale: f64,
    pub ks: f64,
}

/// KS distance of a seeded Gaussian sample of the same size: the sampling
/// noise floor against which the reported distances can be read.
#[derive(Debug, Clone, Serialize)]
pub struct Reference {
    pub seed: u64,
    pub n: usize,
    pub ks: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentsFile {
    pub schema_version: u32,
    pub command: &'static str,
    pub field: String,
    pub function: String,
    pub moments: Vec<MomentJson>,
    /// Why moments were skipped, if they were.
    pub moments_note: Option<String>,
    pub distributions: Vec<DistributionJson>,
    pub reference: Reference,
}

#[derive(Debug, Clone)]
pub struct EkOutcome {
    pub reports: Vec<DistributionReport>,
    pub moments: MomentsFile,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct CdfRow {
    #[serde(rename = "X")]
    x: u64,
    grid: f64,
    empirical: f64,
    gaussian: f64,
}

fn function_of(config: &RunConfig) -> CliResult<AdditiveFunctionSpec> {
    let field = match config.field {
        None => BaseField::Rational,
        Some(m) => BaseField::quadratic(m)?,
    };
    Ok(match config.function {
        FunctionKind::Omega => AdditiveFunctionSpec::omega(field),
        FunctionKind::CurveG => AdditiveFunctionSpec::curve_g(field, pair_of(config)?),
    })
}

/// Writes `moments.json`, `cdf.csv` and (unless disabled) `cdf.svg`.
pub fn cmd_ek(config: &RunConfig) -> CliResult<EkOutcome> {
    config.validate()?;
    let f = function_of(config)?;
    let mut reports = Vec::new();
    for &x in &config.x {
        let values = additive_values(&f, x)?;
        let (center, scale) = (mu_f(&f, x), sigma_f(&f, x));
        if scale <= 0.0 {
            return Err(CliError::Config(format!("σ_f({x}) = 0: nothing to normalize by")));
        }
        let mut report = distribution_report(&values, center, scale, Grid::INTEGER)?;
        report.x = Some(x);
        reports.push(report);
    }
    let (moments, moments_note) = if f.bounded_01 {
        let mut out = Vec::new();
        for &x in &config.x {
            for &k in &config.k_list {
                out.push(MomentJson::from(&empirical_moment(&f, x, k, None)?));
            }
        }
        (out, None)
    } else {
        (Vec::new(), Some(format!("{} takes values outside [0, 1]; moments are not defined for it", config.function)))
    };
    let largest = reports.iter().max_by_key(|r| r.x).expect("at least one X");
    let mut rng = StdRng::seed_from_u64(config.seed);
    let sample: Vec<f64> = (0..largest.n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let reference = Reference { seed: config.seed, n: largest.n, ks: distribution_report(&sample, 0.0, 1.0, Grid::Sample)?.ks };

    let file = MomentsFile {
        schema_version: SCHEMA_VERSION,
        command: "ek",
        field: f.field.to_string(),
        function: config.function.to_string(),
        moments,
        moments_note,
        distributions: reports
            .iter()
            .map(|r| DistributionJson { x: r.x.unwrap_or(0), n: r.n, center: r.center, scale: r.scale, ks: r.ks })
            .collect(),
        reference,
    };
    let rows: Vec<CdfRow> = reports
        .iter()
        .flat_map(|r| {
            (0..r.grid.len()).map(move |i| CdfRow {
                x: r.x.unwrap_or(0),
                grid: r.grid[i],
                empirical: r.empirical_cdf[i],
                gaussian: r.gaussian_cdf[i],
            })
        })
        .collect();
    ensure_dir(&config.output)?;
    let mut files = vec![
        write_json(&config.output, "moments.json", &file)?,
        write_csv(&config.output, "cdf.csv", &["X", "grid", "empirical", "gaussian"], &rows)?,
    ];
    if config.svg {
        let title = format!("{} over {}, X = {}", config.function, f.field, largest.x.unwrap_or(0));
        files.push(write_text(&config.output, "cdf.svg", &cdf_svg(largest, &title))?);
    }
    Ok(EkOutcome { reports, moments: file, files })
}
