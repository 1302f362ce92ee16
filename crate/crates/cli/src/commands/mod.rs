//! The four subcommands. Each takes a validated [`RunConfig`](crate::config::RunConfig)
//! and writes its files serially once the parallel work has been merged in order.

mod audit;
mod ek;
mod ideal_count;
mod scan;

pub use audit::{cmd_audit, AuditOptions, AuditReport};
pub use ek::{cmd_ek, EkOutcome};
pub use ideal_count::{cmd_ideal_count, SfRow};
pub use scan::{cmd_scan, ScanOutcome, ScanSummary};

use tamagawa_core::selmer::{make_pair, IsogenyPair};

use crate::config::RunConfig;
use crate::error::CliResult;

fn pair_of(config: &RunConfig) -> CliResult<IsogenyPair> {
    Ok(make_pair(config.curve.0, config.curve.1)?)
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
struct Curve {
    a: i64,
    b: i64,
}

impl From<&IsogenyPair> for Curve {
    fn from(p: &IsogenyPair) -> Self {
        Curve { a: p.a(), b: p.b() }
    }
}
