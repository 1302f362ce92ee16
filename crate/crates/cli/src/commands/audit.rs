use serde::Serialize;
use tamagawa_core::selmer::DescentEngine;

use super::{pair_of, Curve};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::scan::{check_identities, scan_map};

#[derive(Debug, Clone, Copy, Default)]
pub struct AuditOptions {
    /// Fault injection: run with a deliberately wrong Legendre table.
    pub corrupt_legendre_table: bool,
}

/// What a passing audit checked.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub status: &'static str,
    curve: Curve,
    #[serde(rename = "X")]
    pub x: u64,
    pub twists: usize,
    pub checks: &'static [&'static str],
}

const CHECKS: &[&str] = &[
    "local images are subgroups",
    "local duality: dim im phi + dim im phihat = dim of square classes",
    "product formula: dim Sel_phi - dim Sel_phihat = sum_v (dim - 1)",
    "ord2T = g + correction",
    "Legendre table = torsor dimension at good ramified primes",
];

/// Runs every exact identity over all squarefree `0 < |d| < X`. The first
/// failure in enumeration order is reported as [`CliError::Identity`].
pub fn cmd_audit(config: &RunConfig, options: AuditOptions) -> CliResult<AuditReport> {
    config.validate()?;
    let x = config.single_x()?;
    let pair = pair_of(config)?;
    let mut engine = DescentEngine::new(pair.clone())?;
    if options.corrupt_legendre_table {
        engine.corrupt_legendre_table();
    }
    let failures = scan_map(&engine, x, |d, r| match r {
        Ok(r) => check_identities(&pair, &r).err().map(|e| e.to_string()),
        Err(e) => Some(format!("d = {d}: {e}")),
    })?;
    let twists = failures.len();
    if let Some(first) = failures.into_iter().flatten().next() {
        return Err(CliError::Identity(first));
    }
    Ok(AuditReport {
        status: "pass",
        curve: Curve::from(&pair),
        x,
        twists,
        checks: CHECKS,
    })
}
