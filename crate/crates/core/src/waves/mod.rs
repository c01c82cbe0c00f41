//! Standing and traveling waves in spatiotemporal data.
//!
//! A data matrix has one row per spatial site and one column per time step.
//! Its dual form pairs the samples with their time derivative; traveling
//! waves then show up as pairs of components whose infinitesimal singular
//! vectors point along each other's standard ones.

pub mod rank;
pub mod series;
pub mod similarity;
pub mod synth;

pub use rank::{gap_statistic, rank_recovery, RankRecoveryOptions, RankRecoveryReport};
pub use series::{build_dual_from_series, DerivativeScheme};
pub use similarity::{
    detect_waves, extract_traveling_wave, similarity_analysis, ComponentClass, Peak, SimilarityReport,
    SimilarityThresholds, StandingWave, TravelingWave, WavePair, WaveReport,
};
pub use synth::{
    add_noise_at_snr, gaussian_bump, synthesize_gaussian_grid_wave, synthesize_wave, uniform_times, Scene,
    StandingSpec, TravelingSpec, WaveParams,
};
