use serde::{Deserialize, Serialize};

use crate::cdsvd::{self, CdsvdOptions};
use crate::error::{Error, Result};
use crate::matrix::{DualMatrix, Entry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankRecoveryOptions {
    /// Denominators are clamped to this fraction of the largest value.
    pub floor_rel: f64,
    /// Gap ratios below this are indistinguishable from noise.
    pub significance: f64,
    pub cdsvd: CdsvdOptions,
}

impl Default for RankRecoveryOptions {
    fn default() -> Self {
        Self {
            floor_rel: 1e-3,
            significance: 1.25,
            cdsvd: CdsvdOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRecoveryReport {
    pub standard_sv: Vec<f64>,
    pub infinitesimal_sv: Vec<f64>,
    /// Rank read off the infinitesimal parts; 0 when the gap is not significant.
    pub estimated_rank: usize,
    pub gap_ratio: f64,
    pub low_confidence: bool,
    /// Same statistic applied to the standard parts alone.
    pub classical_rank: usize,
    pub classical_gap_ratio: f64,
    pub classical_low_confidence: bool,
    /// Candidate ranks scanned: `1..=window`.
    pub window: usize,
    /// Whether `A_i` had to be projected onto the feasible set first.
    pub projected: bool,
    /// Existence residual before projection.
    pub projection_residual: f64,
    pub true_rank: Option<usize>,
}

/// Largest ratio between consecutive sorted magnitudes.
///
/// With `s` the magnitudes sorted nonincreasing, returns the `j ∈ 1..=window`
/// maximizing `s[j−1] / max(s[j], floor)`, where `floor = floor_rel · s[0]`
/// and a missing `s[j]` counts as the floor. Returns `(0, 0.0)` for empty or
/// all-zero input.
pub fn gap_statistic(values: &[f64], window: usize, floor_rel: f64) -> (usize, f64) {
    let mut s: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let Some(&top) = s.first() else { return (0, 0.0) };
    if top == 0.0 {
        return (0, 0.0);
    }
    let floor = floor_rel * top;
    let mut best = (0, 0.0);
    for j in 1..=window.min(s.len()) {
        let den = s.get(j).copied().unwrap_or(0.0).max(floor);
        let ratio = s[j - 1] / den;
        if ratio > best.1 {
            best = (j, ratio);
        }
    }
    best
}

/// Estimates the number of signal components from the infinitesimal parts
/// of the dual singular values.
pub fn rank_recovery<T: Entry>(
    true_rank: Option<usize>,
    a: &DualMatrix<T>,
    opts: &RankRecoveryOptions,
) -> Result<RankRecoveryReport> {
    if !(opts.floor_rel > 0.0 && opts.floor_rel < 1.0) || !(opts.significance >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rank recovery needs 0 < floor_rel < 1 and significance ≥ 1, got {} and {}",
            opts.floor_rel, opts.significance
        )));
    }
    let cert = cdsvd::cdsvd_exists_with(a, &opts.cdsvd);
    let feasible;
    let input = if cert.exists {
        a
    } else {
        feasible = cdsvd::project_to_feasible_with(a, &opts.cdsvd);
        &feasible
    };
    let res = cdsvd::compute_cdsvd_with(input, &opts.cdsvd)?;
    let standard_sv = res.standard_singular_values();
    let infinitesimal_sv = res.infinitesimal_singular_values();
    let (m, n) = a.shape();
    let window = res.rank().min(m.min(n).div_ceil(2));

    let decide = |values: &[f64]| {
        let (j, ratio) = gap_statistic(values, window, opts.floor_rel);
        let significant = ratio >= opts.significance;
        (if significant { j } else { 0 }, ratio, !significant)
    };
    let (estimated_rank, gap_ratio, low_confidence) = decide(&infinitesimal_sv);
    let (classical_rank, classical_gap_ratio, classical_low_confidence) = decide(&standard_sv);
    Ok(RankRecoveryReport {
        standard_sv,
        infinitesimal_sv,
        estimated_rank,
        gap_ratio,
        low_confidence,
        classical_rank,
        classical_gap_ratio,
        classical_low_confidence,
        window,
        projected: !cert.exists,
        projection_residual: cert.residual,
        true_rank,
    })
}
