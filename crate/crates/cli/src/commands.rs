use std::fs;
use std::path::{Path, PathBuf};

use dualsvd_core::io::{
    open_container, read_matrix, serialize_container, write_matrix, AnyDualMatrix, AnyMatrix, Dtype, MatrixContainer,
    INFINITESIMAL_SUFFIX, STANDARD_SUFFIX,
};
use dualsvd_core::waves::{
    build_dual_from_series, detect_waves, extract_traveling_wave, rank_recovery, DerivativeScheme,
    RankRecoveryOptions, RankRecoveryReport, Scene, WaveReport,
};
use dualsvd_core::{
    cdsvd_exists_with, compute_cdsvd_with, dmpgi_with, penrose_residuals, project_to_feasible_with,
    rank_k_approx_with, DualMatrix, DualScalar, Entry,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::failure::Failure;
use crate::{CdsvdArgs, DetectArgs, LowrankArgs, PinvArgs, RankArgs, SeriesInput, SimulateArgs};

/// Runs `$body` with `$a` bound to the concrete dual matrix.
macro_rules! with_matrix {
    ($m:expr, $a:ident => $body:expr) => {
        match $m {
            AnyDualMatrix::Real($a) => $body,
            AnyDualMatrix::Complex($a) => $body,
        }
    };
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn dual_list(values: &[DualScalar]) -> String {
    values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", ")
}

#[derive(Serialize)]
struct CdsvdReport<'a> {
    config: &'a RunConfig,
    input: &'a MatrixContainer,
    rank: usize,
    distinct_values: Vec<f64>,
    multiplicities: Vec<usize>,
    singular_values: Vec<DualScalar>,
    existence_residual: f64,
    existence_threshold: f64,
    sigma_offdiag_mass: f64,
    grouping_spread: f64,
    tolerances: dualsvd_core::CdsvdOptions,
    u: MatrixContainer,
    sigma: MatrixContainer,
    v: MatrixContainer,
}

pub fn cdsvd(args: &CdsvdArgs, config: &RunConfig) -> Result<(), Failure> {
    let (input, m) = open_container(&args.input)?;
    let opts = config.tolerances.cdsvd();
    with_matrix!(m, a => {
        let res = compute_cdsvd_with(&a, &opts)?;
        fs::create_dir_all(&args.output)?;
        let report = CdsvdReport {
            config,
            input: &input,
            rank: res.rank(),
            distinct_values: res.blocks.distinct_values.clone(),
            multiplicities: res.blocks.multiplicities.clone(),
            singular_values: res.dual_singular_values(),
            existence_residual: res.existence.residual,
            existence_threshold: res.existence.threshold,
            sigma_offdiag_mass: res.sigma_offdiag_mass,
            grouping_spread: res.grouping_spread,
            tolerances: opts,
            u: serialize_container(&res.u, &args.output.join("U"))?,
            sigma: serialize_container(&res.sigma, &args.output.join("Sigma"))?,
            v: serialize_container(&res.v, &args.output.join("V"))?,
        };
        write_json(&args.output.join("cdsvd.json"), &report)?;
        println!("rank {}; existence residual {:e}", report.rank, report.existence_residual);
        println!("dual singular values: {}", dual_list(&report.singular_values));
        Ok(())
    })
}

#[derive(Serialize)]
struct LowrankReport<'a> {
    config: &'a RunConfig,
    input: &'a MatrixContainer,
    k: usize,
    standard_error: f64,
    infinitesimal_error: f64,
    distance: DualScalar,
    output: MatrixContainer,
}

pub fn lowrank(args: &LowrankArgs, config: &RunConfig) -> Result<(), Failure> {
    let (input, m) = open_container(&args.input)?;
    let opts = config.tolerances.cdsvd();
    with_matrix!(m, a => {
        let r = rank_k_approx_with(&a, args.k, &opts)?;
        let report = LowrankReport {
            config,
            input: &input,
            k: r.k,
            standard_error: r.standard_error,
            infinitesimal_error: r.infinitesimal_error,
            distance: a.quasi_metric(&r.approx)?,
            output: serialize_container(&r.approx, &args.output)?,
        };
        write_json(&with_suffix(&args.output, ".json"), &report)?;
        println!(
            "rank-{} approximation: standard error {:e}, infinitesimal error {:e}",
            report.k, report.standard_error, report.infinitesimal_error
        );
        Ok(())
    })
}

#[derive(Serialize)]
struct PinvReport<'a> {
    config: &'a RunConfig,
    input: &'a MatrixContainer,
    existence_residual: f64,
    existence_threshold: f64,
    penrose_residuals: [f64; 4],
    output: MatrixContainer,
}

pub fn pinv(args: &PinvArgs, config: &RunConfig) -> Result<(), Failure> {
    let (input, m) = open_container(&args.input)?;
    let opts = config.tolerances.cdsvd();
    with_matrix!(m, a => {
        let r = dmpgi_with(&a, &opts)?;
        let report = PinvReport {
            config,
            input: &input,
            existence_residual: r.existence_residual,
            existence_threshold: opts.existence_threshold(a.infinitesimal().norm()),
            penrose_residuals: penrose_residuals(&a, &r.pinv)?,
            output: serialize_container(&r.pinv, &args.output)?,
        };
        write_json(&with_suffix(&args.output, ".json"), &report)?;
        println!("existence residual: {}", report.existence_residual);
        println!("Penrose residuals: {:?}", report.penrose_residuals);
        Ok(())
    })
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    config: &'a RunConfig,
    scene: &'a Scene,
    /// Row-major pixel index of pixel `(r, c)` is `r * width + c`.
    ground_truth_peaks: Vec<(f64, f64)>,
    output_kind: &'static str,
    files: Vec<PathBuf>,
    shape: (usize, usize),
}

fn is_raw_csv(path: &Path) -> bool {
    let s = path.to_string_lossy();
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        && !s.ends_with(STANDARD_SUFFIX)
        && !s.ends_with(INFINITESIMAL_SUFFIX)
}

pub fn simulate(args: &SimulateArgs, config: &RunConfig) -> Result<(), Failure> {
    if args.standing.is_empty() && args.traveling.is_empty() {
        return Err(Failure::Usage("give at least one --standing or --traveling wave".into()));
    }
    if args.frames == 0 {
        return Err(Failure::Usage("--frames must be positive".into()));
    }
    let scene = Scene {
        grid: args.grid,
        frames: args.frames,
        dt: args.dt,
        gamma: args.gamma,
        standing: args.standing.clone(),
        traveling: args.traveling.clone(),
        noise_snr: args.noise_snr,
        seed: config.seed,
    };
    let x = scene.synthesize()?;
    let (kind, files, shape, sidecar) = if is_raw_csv(&args.output) {
        write_matrix(&x, &args.output)?;
        (
            "series",
            vec![args.output.clone()],
            x.shape(),
            args.output.with_extension("json"),
        )
    } else {
        let a = build_dual_from_series(&x, args.derive, args.dt)?;
        let c = serialize_container(&a, &args.output)?;
        (
            "container",
            vec![c.standard_path, c.infinitesimal_path],
            c.shape,
            with_suffix(&args.output, ".json"),
        )
    };
    let report = SimulateReport {
        config,
        scene: &scene,
        ground_truth_peaks: scene.ground_truth_peaks(),
        output_kind: kind,
        files,
        shape,
    };
    write_json(&sidecar, &report)?;
    println!(
        "{} standing + {} traveling waves on a {}x{} grid, {} frames -> {} ({}x{})",
        scene.standing.len(),
        scene.traveling.len(),
        scene.grid.0,
        scene.grid.1,
        scene.frames,
        kind,
        shape.0,
        shape.1
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct InputInfo {
    path: PathBuf,
    kind: &'static str,
    dtype: Dtype,
    shape: (usize, usize),
    derive: Option<DerivativeScheme>,
    dt: Option<f64>,
}

fn load_series(s: &SeriesInput) -> Result<(AnyDualMatrix, InputInfo), Failure> {
    if s.input.is_file() && is_raw_csv(&s.input) {
        let a = match read_matrix(&s.input)? {
            AnyMatrix::Real(x) => AnyDualMatrix::Real(build_dual_from_series(&x, s.derive, s.dt)?),
            AnyMatrix::Complex(x) => AnyDualMatrix::Complex(build_dual_from_series(&x, s.derive, s.dt)?),
        };
        let info = InputInfo {
            path: s.input.clone(),
            kind: "series",
            dtype: a.dtype(),
            shape: a.shape(),
            derive: Some(s.derive),
            dt: Some(s.dt),
        };
        Ok((a, info))
    } else {
        let (c, a) = open_container(&s.input)?;
        let info = InputInfo {
            path: s.input.clone(),
            kind: "container",
            dtype: c.dtype,
            shape: c.shape,
            derive: None,
            dt: None,
        };
        Ok((a, info))
    }
}

/// Replaces `A_i` by its feasible projection when no compact dual SVD
/// exists, returning the residual it had.
fn feasible<T: Entry>(a: DualMatrix<T>, config: &RunConfig) -> (DualMatrix<T>, Option<f64>) {
    let opts = config.tolerances.cdsvd();
    let cert = cdsvd_exists_with(&a, &opts);
    if cert.exists {
        (a, None)
    } else {
        (project_to_feasible_with(&a, &opts), Some(cert.residual))
    }
}

#[derive(Serialize)]
struct Movie {
    pair: (usize, usize),
    path: PathBuf,
}

#[derive(Serialize)]
struct DetectReport<'a> {
    config: &'a RunConfig,
    input: InputInfo,
    projected: bool,
    projection_residual: Option<f64>,
    rank: usize,
    components: usize,
    waves: WaveReport,
    movie: Option<Movie>,
}

pub fn detect(args: &DetectArgs, config: &RunConfig) -> Result<(), Failure> {
    let (m, input) = load_series(&args.series)?;
    with_matrix!(m, a => {
        let (a, residual) = feasible(a, config);
        let res = compute_cdsvd_with(&a, &config.tolerances.cdsvd())?;
        let k = args.k.unwrap_or(res.rank());
        let grid = args.grid.unwrap_or((a.nrows(), 1));
        let waves = detect_waves(&res, k, &config.tolerances.similarity(), grid)?;
        let movie = match (args.extract_pair, &args.movie) {
            (Some(pair), Some(prefix)) => {
                let path = with_suffix(prefix, ".csv");
                write_matrix(&extract_traveling_wave(&res, pair)?, &path)?;
                Some(Movie { pair, path })
            }
            _ => None,
        };
        let report = DetectReport {
            config,
            input,
            projected: residual.is_some(),
            projection_residual: residual,
            rank: res.rank(),
            components: k,
            waves,
            movie,
        };
        write_json(&args.report, &report)?;
        if let Some(r) = residual {
            println!("input projected onto the feasible set (existence residual {r:e})");
        }
        let standing: Vec<String> = report
            .waves
            .standing
            .iter()
            .map(|s| format!("{} at ({}, {})", s.component, s.peak.row, s.peak.col))
            .collect();
        println!("rank {}; {} components analysed", report.rank, k);
        println!("standing: {}", if standing.is_empty() { "none".into() } else { standing.join("; ") });
        for t in &report.waves.traveling {
            let [p, q] = t.peaks;
            println!(
                "traveling pair ({}, {}): alpha {:.4}, beta {:.4}, peaks ({}, {}) and ({}, {})",
                t.pair.x, t.pair.y, t.pair.alpha, t.pair.beta, p.row, p.col, q.row, q.col
            );
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct RankReport<'a> {
    config: &'a RunConfig,
    input: InputInfo,
    recovery: RankRecoveryReport,
}

pub fn rank(args: &RankArgs, config: &RunConfig) -> Result<(), Failure> {
    let (m, input) = load_series(&args.series)?;
    let opts = RankRecoveryOptions {
        floor_rel: args.floor,
        significance: args.significance,
        cdsvd: config.tolerances.cdsvd(),
    };
    let recovery = with_matrix!(m, a => rank_recovery(args.true_rank, &a, &opts)?);
    if recovery.projected {
        println!("input projected onto the feasible set (existence residual {:e})", recovery.projection_residual);
    }
    println!(
        "estimated rank {} (gap ratio {:.3}{}); standard parts alone: {} (gap ratio {:.3})",
        recovery.estimated_rank,
        recovery.gap_ratio,
        if recovery.low_confidence { ", low confidence" } else { "" },
        recovery.classical_rank,
        recovery.classical_gap_ratio
    );
    write_json(&args.report, &RankReport { config, input, recovery })
}
