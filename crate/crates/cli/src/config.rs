use clap::Args;
use dualsvd_core::waves::SimilarityThresholds;
use dualsvd_core::CdsvdOptions;
use serde::Serialize;

use crate::failure::Failure;

pub const THREADS_VAR: &str = "DUALSVD_THREADS";

#[derive(Args, Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Singular values below rank_tol * max(m,n) * eps * σ₁ count as zero
    #[arg(long, global = true, default_value_t = 1.0)]
    pub rank_tol: f64,

    /// Relative gap below which singular values are treated as equal
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_group: f64,

    /// Existence test passes when the residual is at most this times ‖A_i‖_F
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub existence_rel_tol: f64,

    /// Existence threshold used when A_i is zero
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub existence_abs_tol: f64,

    /// Component pairs need both coupling coefficients above this fraction
    /// of the largest Gram entry
    #[arg(long, global = true, default_value_t = 0.5)]
    pub pair_threshold: f64,

    /// Components coupling below this fraction of the largest Gram entry
    /// are standing
    #[arg(long, global = true, default_value_t = 0.1)]
    pub standing_threshold: f64,

    /// Master seed for every random stream
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

/// Echoed into every JSON report.
#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub argv: Vec<String>,
    pub flags: serde_json::Value,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub version: &'static str,
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), Failure> {
        let named = [
            ("--rank-tol", self.rank_tol),
            ("--tol-group", self.tol_group),
            ("--existence-rel-tol", self.existence_rel_tol),
            ("--existence-abs-tol", self.existence_abs_tol),
            ("--pair-threshold", self.pair_threshold),
            ("--standing-threshold", self.standing_threshold),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        self.similarity().validate()?;
        Ok(())
    }

    pub fn cdsvd(&self) -> CdsvdOptions {
        CdsvdOptions {
            tol_group: self.tol_group,
            rank_tol_factor: self.rank_tol,
            existence_rel_tol: self.existence_rel_tol,
            existence_abs_tol: self.existence_abs_tol,
        }
    }

    pub fn similarity(&self) -> SimilarityThresholds {
        SimilarityThresholds {
            pair_rel: self.pair_threshold,
            standing_rel: self.standing_threshold,
            ..SimilarityThresholds::default()
        }
    }

    pub fn record<A: Serialize>(&self, command: &str, argv: &[String], args: &A) -> Result<RunConfig, Failure> {
        Ok(RunConfig {
            command: command.into(),
            argv: argv.to_vec(),
            flags: serde_json::to_value(args).map_err(|e| Failure::Usage(e.to_string()))?,
            tolerances: self.clone(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION"),
        })
    }
}

/// Sizes the global thread pool from `DUALSVD_THREADS`.
pub fn init_threads() -> Result<(), Failure> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("{THREADS_VAR} must be a nonnegative integer, got {v:?}")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size the thread pool: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> Tolerances {
        Tolerances {
            rank_tol: 1.0,
            tol_group: 1e-8,
            existence_rel_tol: 1e-10,
            existence_abs_tol: 1e-12,
            pair_threshold: 0.5,
            standing_threshold: 0.1,
            seed: 0,
        }
    }

    #[test]
    fn defaults_match_the_library() {
        let t = defaults();
        assert_eq!(t.cdsvd(), CdsvdOptions::default());
        assert_eq!(t.similarity(), SimilarityThresholds::default());
        assert!(t.validate().is_ok());
    }

    #[test]
    fn nonpositive_tolerances_are_usage_errors() {
        let t = Tolerances {
            tol_group: 0.0,
            ..defaults()
        };
        assert!(matches!(t.validate(), Err(Failure::Usage(_))));
    }
}
