use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// `x(t) = 2 e^{γt} [cos(ωt) c − sin(ωt) d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveParams {
    pub gamma: f64,
    pub omega: f64,
    pub c: DVector<f64>,
    pub d: DVector<f64>,
}

impl WaveParams {
    pub fn new(gamma: f64, omega: f64, c: DVector<f64>, d: DVector<f64>) -> Result<Self> {
        if c.len() != d.len() {
            return Err(Error::DimensionMismatch {
                op: "wave modes",
                left: (c.len(), 1),
                right: (d.len(), 1),
            });
        }
        if c.norm() == 0.0 || d.norm() == 0.0 {
            return Err(Error::InvalidParameter("wave modes must be nonzero".into()));
        }
        Ok(Self { gamma, omega, c, d })
    }

    /// Rank-one pattern oscillating in place.
    pub fn standing(gamma: f64, omega: f64, c: DVector<f64>) -> Result<Self> {
        Self::new(gamma, omega, c.clone(), c)
    }
}

pub fn synthesize_wave(params: &WaveParams, times: &[f64]) -> DMatrix<f64> {
    let m = params.c.len();
    let mut x = DMatrix::zeros(m, times.len());
    for (j, &t) in times.iter().enumerate() {
        let amp = 2.0 * (params.gamma * t).exp();
        let (s, c) = (params.omega * t).sin_cos();
        x.column_mut(j).copy_from(&(&params.c * (amp * c) - &params.d * (amp * s)));
    }
    x
}

/// `n` samples `0, h, 2h, …`.
pub fn uniform_times(n: usize, h: f64) -> Vec<f64> {
    (0..n).map(|j| j as f64 * h).collect()
}

/// Unit-height Gaussian bump on an `H × W` grid, flattened row-major
/// (pixel `(r, c)` lives at index `r·W + c`).
pub fn gaussian_bump(grid: (usize, usize), center: (f64, f64), sigma: f64) -> Result<DVector<f64>> {
    let (h, w) = grid;
    let (r0, c0) = center;
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!("Gaussian width must be positive, got {sigma}")));
    }
    let inside = |x: f64, n: usize| x.is_finite() && x >= 0.0 && x <= n as f64 - 1.0;
    if !inside(r0, h) || !inside(c0, w) {
        return Err(Error::OutsideGrid {
            row: r0,
            col: c0,
            height: h,
            width: w,
        });
    }
    let s2 = 2.0 * sigma * sigma;
    Ok(DVector::from_fn(h * w, |k, _| {
        let (r, c) = ((k / w) as f64, (k % w) as f64);
        (-((r - r0).powi(2) + (c - c0).powi(2)) / s2).exp()
    }))
}

/// One center gives a standing wave (`c = d`), two give a traveling wave
/// oscillating between them.
#[allow(clippy::too_many_arguments)]
pub fn synthesize_gaussian_grid_wave(
    grid: (usize, usize),
    centers: &[(f64, f64)],
    sigma: f64,
    gamma: f64,
    omega: f64,
    weight: f64,
    times: &[f64],
) -> Result<DMatrix<f64>> {
    let params = match centers {
        [p] => WaveParams::standing(gamma, omega, gaussian_bump(grid, *p, sigma)? * weight)?,
        [p, q] => WaveParams::new(
            gamma,
            omega,
            gaussian_bump(grid, *p, sigma)? * weight,
            gaussian_bump(grid, *q, sigma)? * weight,
        )?,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "a grid wave needs one or two centers, got {}",
                centers.len()
            )))
        }
    };
    Ok(synthesize_wave(&params, times))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandingSpec {
    pub center: (f64, f64),
    pub sigma: f64,
    pub omega: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelingSpec {
    pub centers: [(f64, f64); 2],
    pub sigma: f64,
    pub omega: f64,
    pub weight: f64,
}

/// A superposition of Gaussian grid waves sampled at `frames` uniform times,
/// optionally with white noise at a fixed power ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub grid: (usize, usize),
    pub frames: usize,
    pub dt: f64,
    pub gamma: f64,
    pub standing: Vec<StandingSpec>,
    pub traveling: Vec<TravelingSpec>,
    /// `‖signal‖²_F / ‖noise‖²_F`; `None` for clean data.
    pub noise_snr: Option<f64>,
    pub seed: u64,
}

impl Scene {
    pub fn times(&self) -> Vec<f64> {
        uniform_times(self.frames, self.dt)
    }

    /// Noise-free `(H·W) × frames` data.
    pub fn signal(&self) -> Result<DMatrix<f64>> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {}", self.dt)));
        }
        let times = self.times();
        let parts: Vec<Result<DMatrix<f64>>> = self
            .standing
            .par_iter()
            .map(|s| synthesize_gaussian_grid_wave(self.grid, &[s.center], s.sigma, self.gamma, s.omega, s.weight, &times))
            .chain(self.traveling.par_iter().map(|s| {
                synthesize_gaussian_grid_wave(self.grid, &s.centers, s.sigma, self.gamma, s.omega, s.weight, &times)
            }))
            .collect();
        // summed in declaration order so the result does not depend on threads
        let mut x = DMatrix::zeros(self.grid.0 * self.grid.1, self.frames);
        for p in parts {
            x += p?;
        }
        Ok(x)
    }

    pub fn synthesize(&self) -> Result<DMatrix<f64>> {
        let x = self.signal()?;
        match self.noise_snr {
            None => Ok(x),
            Some(snr) => add_noise_at_snr(&x, snr, &mut rng::stream(self.seed, rng::NOISE_STREAM)),
        }
    }

    /// Peak pixels: one per standing wave, then two per traveling wave.
    pub fn ground_truth_peaks(&self) -> Vec<(f64, f64)> {
        self.standing
            .iter()
            .map(|s| s.center)
            .chain(self.traveling.iter().flat_map(|s| s.centers))
            .collect()
    }
}

/// Adds i.i.d. Gaussian noise rescaled so that `‖x‖² / ‖noise‖² = snr`.
pub fn add_noise_at_snr<R: Rng + ?Sized>(x: &DMatrix<f64>, snr: f64, rng: &mut R) -> Result<DMatrix<f64>> {
    if !(snr.is_finite() && snr > 0.0) {
        return Err(Error::InvalidParameter(format!("SNR must be positive, got {snr}")));
    }
    let noise = DMatrix::<f64>::from_fn(x.nrows(), x.ncols(), |_, _| rng.sample(StandardNormal));
    let nn = noise.norm();
    if nn == 0.0 || x.norm() == 0.0 {
        return Ok(x.clone());
    }
    let scale = x.norm() / (snr.sqrt() * nn);
    Ok(x + noise * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn numerical_rank(x: &DMatrix<f64>) -> usize {
        let s = x.clone().svd(false, false).singular_values;
        let cut = 1e-10 * s.max();
        s.iter().filter(|&&v| v > cut).count()
    }

    #[test]
    fn equal_modes_give_rank_one() {
        let p = WaveParams::standing(0.0, 0.7, dvector![1.0, 2.0, -1.0]).unwrap();
        let x = synthesize_wave(&p, &uniform_times(20, 0.3));
        assert_eq!(numerical_rank(&x), 1);
        assert_eq!(x.column(0), (p.c * 2.0).column(0));
    }

    #[test]
    fn orthogonal_modes_give_rank_two() {
        let p = WaveParams::new(0.0, 0.7, dvector![1.0, 0.0, 1.0], dvector![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(numerical_rank(&synthesize_wave(&p, &uniform_times(20, 0.3))), 2);
    }

    #[test]
    fn zero_mode_rejected() {
        assert!(WaveParams::new(0.0, 1.0, dvector![0.0, 0.0], dvector![1.0, 0.0]).is_err());
        assert!(WaveParams::new(0.0, 1.0, dvector![1.0], dvector![1.0, 0.0]).is_err());
    }

    #[test]
    fn grid_standing_wave_peaks_at_center() {
        let x = synthesize_gaussian_grid_wave((50, 100), &[(25.0, 50.0)], 3.0, 0.0, 0.5, 1.0, &uniform_times(10, 1.0))
            .unwrap();
        assert_eq!(x.nrows(), 5000);
        let k = x.column(0).iamax();
        assert_eq!((k / 100, k % 100), (25, 50));
        assert_eq!(numerical_rank(&x), 1);
    }

    #[test]
    fn grid_traveling_wave_has_two_peaks() {
        let times = uniform_times(40, 0.25);
        let x = synthesize_gaussian_grid_wave((50, 100), &[(25.0, 20.0), (25.0, 80.0)], 3.0, 0.0, 1.0, 1.0, &times)
            .unwrap();
        assert_eq!(numerical_rank(&x), 2);
        let k0 = x.column(0).iamax();
        assert_eq!((k0 / 100, k0 % 100), (25, 20));
        // a quarter period later the second bump dominates
        let j = (std::f64::consts::FRAC_PI_2 / 0.25).round() as usize;
        let k1 = x.column(j).iamax();
        assert_eq!((k1 / 100, k1 % 100), (25, 80));
    }

    #[test]
    fn narrow_bump_peaks_exactly_on_center() {
        let b = gaussian_bump((7, 9), (3.0, 4.0), 1e-3).unwrap();
        assert_eq!(b.iamax(), 3 * 9 + 4);
        assert!(matches!(
            gaussian_bump((7, 9), (7.0, 4.0), 1.0),
            Err(Error::OutsideGrid { .. })
        ));
    }

    #[test]
    fn noise_hits_requested_power_ratio() {
        let x = DMatrix::from_fn(30, 40, |i, j| ((i * j) as f64).sin());
        let y = add_noise_at_snr(&x, 0.16, &mut rng::stream(1, 2)).unwrap();
        let noise = &y - &x;
        let snr = x.norm_squared() / noise.norm_squared();
        assert!((snr - 0.16).abs() < 1e-12);
    }

    #[test]
    fn scene_is_reproducible() {
        let scene = Scene {
            grid: (20, 30),
            frames: 12,
            dt: 0.5,
            gamma: 0.0,
            standing: vec![StandingSpec {
                center: (5.0, 5.0),
                sigma: 1.5,
                omega: 0.4,
                weight: 2.0,
            }],
            traveling: vec![TravelingSpec {
                centers: [(10.0, 5.0), (10.0, 25.0)],
                sigma: 1.5,
                omega: 0.9,
                weight: 1.0,
            }],
            noise_snr: Some(4.0),
            seed: 7,
        };
        let a = scene.synthesize().unwrap();
        assert_eq!(a, scene.synthesize().unwrap());
        let other = Scene { seed: 8, ..scene.clone() };
        assert_ne!(a, other.synthesize().unwrap());
        assert_eq!(scene.ground_truth_peaks().len(), 3);
    }
}
