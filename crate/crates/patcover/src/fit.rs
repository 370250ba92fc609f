//! Empirical calibration of the coverage exponent constant.
//!
//! The per-run success probability of the randomized Long Path driver decays
//! like `2^{-c * k^{1-1/(1+δ)} log₂² k}`. The constant is never hard-coded:
//! this module measures per-trial success frequencies on planted instances
//! across a range of `k`, regresses `-log₂ p̂` against the exponent scale
//! through the origin, and reports the slope `ĉ` with its fit diagnostics.
//! [`crate::cover::trial_budget`] then inverts the fitted model.
//!
//! Planted full-pipeline *pattern* coverage (a fixed connected set
//! surviving chop and sparsify) is far too rare to measure at desk scales,
//! so the driver's own per-trial success — the covered subgraph containing
//! *some* k-vertex path — is the calibrated quantity; it is exactly the
//! probability the budget needs to invert.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::ChopParams;
use crate::cover::{cover_once_with, exponent_scale};
use crate::error::{Error, Result};
use crate::gen::generate_grid;
use crate::graph::{Graph, VertexSet};
use crate::growth::GrowthBound;
use crate::longpath::dp_long_path;
use crate::rng::Substream;

/// Instance family parameters for calibration runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitOptions {
    pub delta: usize,
    pub growth_c: f64,
    pub side: usize,
    pub delete_prob: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub instances_per_k: usize,
    /// Stop sampling a k once this many successes were seen.
    pub target_successes: u64,
    /// Hard per-k trial ceiling.
    pub max_trials: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            delta: 2,
            growth_c: 4.0,
            side: 30,
            delete_prob: 0.2,
            k_min: 4,
            k_max: 12,
            instances_per_k: 4,
            target_successes: 64,
            max_trials: 400_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitRow {
    pub k: usize,
    pub scale: f64,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub neg_log2_p: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitReport {
    pub rows: Vec<FitRow>,
    pub c_hat: f64,
    /// Through-origin coefficient of determination,
    /// `1 - Σ(y - ĉx)² / Σy²`.
    pub r_squared: f64,
}

/// Generates a connected subgraph of a grid with a planted `k`-vertex path:
/// a self-avoiding walk is chosen first, then every off-path vertex is
/// deleted independently. Returns the instance and the planted path.
pub fn planted_path_instance<R: Rng>(
    delta: usize,
    side: usize,
    delete_prob: f64,
    k: usize,
    rng: &mut R,
) -> Result<(Graph, Vec<usize>)> {
    let (full, emb) = generate_grid(delta, side)?;
    if k > full.n() {
        return Err(Error::invalid("k larger than the grid"));
    }
    // Self-avoiding walk with restarts.
    let walk = loop {
        let mut walk = vec![rng.gen_range(0..full.n())];
        let mut used = VertexSet::from([walk[0]]);
        while walk.len() < k {
            let head = *walk.last().unwrap();
            let options: Vec<usize> =
                full.neighbors(head).filter(|w| !used.contains(w)).collect();
            if options.is_empty() {
                break;
            }
            let next = options[rng.gen_range(0..options.len())];
            used.insert(next);
            walk.push(next);
        }
        if walk.len() == k {
            break walk;
        }
    };
    let on_path: VertexSet = walk.iter().copied().collect();
    let keep: Vec<bool> = (0..full.n())
        .map(|v| on_path.contains(&v) || !rng.gen_bool(delete_prob))
        .collect();
    let (g, _) = crate::gen::induce_subgraph(&full, &emb, &keep);
    // Renumber the planted walk to the new ids.
    let mut new_id = vec![usize::MAX; full.n()];
    let mut next = 0;
    for v in 0..full.n() {
        if keep[v] {
            new_id[v] = next;
            next += 1;
        }
    }
    let planted: Vec<usize> = walk.into_iter().map(|v| new_id[v]).collect();
    Ok((g, planted))
}

/// Measured per-trial success probability of one cover-and-solve run on a
/// planted instance, pooled over several instances.
fn measure_k(k: usize, opts: &FitOptions, stream: &Substream) -> Result<FitRow> {
    let growth = GrowthBound::new(opts.growth_c, opts.delta)?;
    let mut total_trials = 0u64;
    let mut total_successes = 0u64;
    let per_instance_target = (opts.target_successes / opts.instances_per_k as u64).max(1);
    for inst in 0..opts.instances_per_k {
        let inst_stream = stream.child_idx("instance", inst as u64);
        let mut gen_rng = inst_stream.child("gen").rng();
        let (g, planted) =
            planted_path_instance(opts.delta, opts.side, opts.delete_prob, k, &mut gen_rng)?;
        debug_assert!(crate::graph::is_valid_path(&g, &planted, k, None));
        let chop_params = ChopParams::new(k, &growth)?;

        let batch: u64 = 2_048;
        let mut trials = 0u64;
        let mut successes = 0u64;
        while successes < per_instance_target && trials < opts.max_trials {
            let n = batch.min(opts.max_trials - trials);
            let hits: u64 = (trials..trials + n)
                .into_par_iter()
                .map(|t| {
                    let trial = inst_stream.child_idx("trial", t);
                    let res = cover_once_with(&g, k, &growth, &chop_params, &trial)
                        .expect("parameters validated");
                    matches!(dp_long_path(&g, &res.forest, k), Ok(Some(_))) as u64
                })
                .sum();
            successes += hits;
            trials += n;
        }
        total_trials += trials;
        total_successes += successes;
    }
    // Continuity-corrected frequency so a zero count stays finite; a zero
    // here means the scale is beyond what Monte Carlo can see.
    let p_hat = if total_successes == 0 {
        0.5 / total_trials as f64
    } else {
        total_successes as f64 / total_trials as f64
    };
    Ok(FitRow {
        k,
        scale: exponent_scale(k, opts.delta),
        trials: total_trials,
        successes: total_successes,
        p_hat,
        neg_log2_p: -p_hat.log2(),
    })
}

/// Runs the calibration sweep and the through-origin regression.
pub fn fit_constant(opts: &FitOptions, stream: &Substream) -> Result<FitReport> {
    if opts.k_min < 4 || opts.k_max < opts.k_min {
        return Err(Error::invalid("fit requires 4 <= k_min <= k_max"));
    }
    let mut rows = Vec::new();
    for k in opts.k_min..=opts.k_max {
        rows.push(measure_k(k, opts, &stream.child_idx("k", k as u64))?);
    }
    let (c_hat, r_squared) = regress_through_origin(&rows);
    Ok(FitReport {
        rows,
        c_hat,
        r_squared,
    })
}

fn regress_through_origin(rows: &[FitRow]) -> (f64, f64) {
    let sxy: f64 = rows.iter().map(|r| r.scale * r.neg_log2_p).sum();
    let sxx: f64 = rows.iter().map(|r| r.scale * r.scale).sum();
    let c_hat = sxy / sxx;
    let ss_res: f64 = rows
        .iter()
        .map(|r| (r.neg_log2_p - c_hat * r.scale).powi(2))
        .sum();
    let ss_tot: f64 = rows.iter().map(|r| r.neg_log2_p.powi(2)).sum();
    (c_hat, 1.0 - ss_res / ss_tot)
}
