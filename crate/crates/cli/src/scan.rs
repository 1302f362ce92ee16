//! Parallel twist scans with results in enumeration order.

use rayon::prelude::*;
use serde::Serialize;
use tamagawa_core::arith::{sieve_squarefree, FactorSieve, Place, SquarefreeInt};
use tamagawa_core::selmer::{local_dim_good_ramified, selmer2_lower_bound, DescentEngine, IsogenyPair, SelmerDescentResult};

use crate::error::{CliError, CliResult};

/// Twists handed to one worker at a time.
const CHUNK: usize = 2048;

/// One line of `twists.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwistRow {
    pub d: i64,
    pub g_chi: i32,
    pub correction: i32,
    #[serde(rename = "ord2T")]
    pub ord2t: i32,
    pub dim_selphi: u32,
    pub dim_selphihat: u32,
    pub d2_lower_bound: i32,
}

impl From<&SelmerDescentResult> for TwistRow {
    fn from(r: &SelmerDescentResult) -> Self {
        TwistRow {
            d: r.d.get(),
            g_chi: r.g_chi,
            correction: r.correction,
            ord2t: r.ord2t(),
            dim_selphi: r.dim_selphi,
            dim_selphihat: r.dim_selphihat,
            d2_lower_bound: selmer2_lower_bound(r),
        }
    }
}

/// Runs `visit` on the descent of every squarefree `0 < |d| < x`, in parallel,
/// and returns the outputs in the order `1, −1, 2, −2, 3, …`. Descent errors
/// are handed to `visit` rather than short-circuiting, so what a caller reports
/// first does not depend on scheduling.
pub fn scan_map<T, F>(engine: &DescentEngine, x: u64, visit: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(SquarefreeInt, tamagawa_core::Result<SelmerDescentResult>) -> T + Sync,
{
    let ds: Vec<SquarefreeInt> = sieve_squarefree(x)?;
    let sieve = FactorSieve::new(x);
    let chunks: Vec<Vec<T>> = ds
        .par_chunks(CHUNK)
        .map_init(
            || engine.clone(),
            |engine, chunk| chunk.iter().map(|&d| visit(d, engine.descend_sieved(d, &sieve))).collect(),
        )
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// [`TwistRow`]s for every squarefree `0 < |d| < x`.
pub fn scan_rows(pair: &IsogenyPair, x: u64) -> CliResult<Vec<TwistRow>> {
    let engine = DescentEngine::new(pair.clone())?;
    scan_map(&engine, x, |_, r| r.map(|r| TwistRow::from(&r)))?
        .into_iter()
        .collect::<tamagawa_core::Result<Vec<_>>>()
        .map_err(CliError::from)
}

/// Why a pair is outside the family the distribution results cover, if it is.
pub fn ineligibility(pair: &IsogenyPair) -> Option<String> {
    if pair.full_two_torsion() {
        Some(format!(
            "curve ({}, {}) has full rational 2-torsion (a² − 4b = {} is a square)",
            pair.a(),
            pair.b(),
            pair.b_prime()
        ))
    } else if pair.square_delta_product() {
        Some(format!(
            "curve ({}, {}) has b(a² − 4b) = {} a square, so the twisted Tamagawa ratios do not spread",
            pair.a(),
            pair.b(),
            pair.b() as i128 * pair.b_prime() as i128
        ))
    } else {
        None
    }
}

/// Every exact identity the audit checks on one descent.
pub fn check_identities(pair: &IsogenyPair, r: &SelmerDescentResult) -> CliResult<()> {
    let fail = |what: String| Err(CliError::Identity(format!("d = {}: {what}", r.d)));
    if r.ord2t_product != r.ord2t_ratio {
        return fail(format!("dim Sel_φ − dim Sel_φ̂ = {} but Σ_v (dim − 1) = {}", r.ord2t_ratio, r.ord2t_product));
    }
    if r.ord2t() != r.g_chi + r.correction {
        return fail(format!("ord₂T = {} but g + correction = {} + {}", r.ord2t(), r.g_chi, r.correction));
    }
    for &(v, dim) in &r.local_dims {
        if let Place::Finite(p) = v {
            if p != 2 && pair.bad_primes().binary_search(&p).is_err() {
                let table = local_dim_good_ramified(pair, p)?;
                if table != dim {
                    return fail(format!("at {p}: Legendre table {table}, torsor dimension {dim}"));
                }
            }
        }
    }
    Ok(())
}
