use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cdsvd::CdsvdResult;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Entry;
use crate::scalar::DualScalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityThresholds {
    /// Minimum coupling for a traveling pair, relative to `max |G|`.
    pub pair_rel: f64,
    /// Row and column coupling below which a component is standing, relative
    /// to `max |G|`.
    pub standing_rel: f64,
    /// Absolute floor for both thresholds. Couplings below it are rounding
    /// noise, so a Gram matrix that small marks every component standing.
    pub abs_floor: f64,
}

impl Default for SimilarityThresholds {
    fn default() -> Self {
        Self {
            pair_rel: 0.5,
            standing_rel: 0.1,
            abs_floor: 1e-9,
        }
    }
}

impl SimilarityThresholds {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pair_rel", self.pair_rel),
            ("standing_rel", self.standing_rel),
            ("abs_floor", self.abs_floor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentClass {
    Standing,
    Traveling { partner: usize },
    Unclassified,
}

/// Two coupled components with `x < y`, `α = G(y,x)` and `β = G(x,y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePair {
    pub x: usize,
    pub y: usize,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub components: usize,
    /// `G(x,y) = Re⟨U_s(:,x), U_i(:,y)⟩`, row-major.
    pub gram: Vec<Vec<f64>>,
    /// `G(x,y) / ‖U_i(:,y)‖`, a cosine in `[−1, 1]`.
    pub gram_normalized: Vec<Vec<f64>>,
    pub pairs: Vec<WavePair>,
    pub classes: Vec<ComponentClass>,
    pub tau_pair: f64,
    pub tau_standing: f64,
    /// Set when the factors were complex and real parts of inner products
    /// were used.
    pub complex_extension: bool,
}

impl SimilarityReport {
    pub fn standing(&self) -> Vec<usize> {
        (0..self.components)
            .filter(|&x| self.classes[x] == ComponentClass::Standing)
            .collect()
    }
}

pub fn similarity_analysis<T: Entry>(
    result: &CdsvdResult<T>,
    k: usize,
    thresholds: &SimilarityThresholds,
) -> Result<SimilarityReport> {
    thresholds.validate()?;
    if k > result.rank() {
        return Err(Error::RankOutOfRange { k, rank: result.rank() });
    }
    let us = result.u.standard().columns(0, k);
    let ui = result.u.infinitesimal().columns(0, k);
    let g: DMatrix<f64> = (us.adjoint() * ui).map(|z| z.real());
    let gmax = g.amax();
    let tau_pair = (thresholds.pair_rel * gmax).max(thresholds.abs_floor);
    let tau_standing = (thresholds.standing_rel * gmax).max(thresholds.abs_floor);

    let mut candidates = Vec::new();
    for x in 0..k {
        for y in x + 1..k {
            let (alpha, beta) = (g[(y, x)], g[(x, y)]);
            let strength = alpha.abs().min(beta.abs());
            if alpha * beta < 0.0 && strength >= tau_pair {
                candidates.push((strength, WavePair { x, y, alpha, beta }));
            }
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1.x, a.1.y).cmp(&(b.1.x, b.1.y))));

    let mut classes = vec![ComponentClass::Unclassified; k];
    let mut pairs = Vec::new();
    for (_, p) in candidates {
        if classes[p.x] == ComponentClass::Unclassified && classes[p.y] == ComponentClass::Unclassified {
            classes[p.x] = ComponentClass::Traveling { partner: p.y };
            classes[p.y] = ComponentClass::Traveling { partner: p.x };
            pairs.push(p);
        }
    }
    pairs.sort_by_key(|p| (p.x, p.y));
    for (x, class) in classes.iter_mut().enumerate() {
        if *class != ComponentClass::Unclassified {
            continue;
        }
        let coupling = (0..k)
            .filter(|&y| y != x)
            .map(|y| g[(x, y)].abs().max(g[(y, x)].abs()))
            .fold(0.0, f64::max);
        if coupling < tau_standing {
            *class = ComponentClass::Standing;
        }
    }

    let col_norms: Vec<f64> = (0..k).map(|y| ui.column(y).norm()).collect();
    let rows = |m: &DMatrix<f64>| (0..k).map(|x| m.row(x).iter().copied().collect()).collect();
    let gn = DMatrix::from_fn(k, k, |x, y| if col_norms[y] > 0.0 { g[(x, y)] / col_norms[y] } else { 0.0 });
    Ok(SimilarityReport {
        components: k,
        gram: rows(&g),
        gram_normalized: rows(&gn),
        pairs,
        classes,
        tau_pair,
        tau_standing,
        complex_extension: T::IS_COMPLEX,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peak {
    pub row: usize,
    pub col: usize,
}

impl Peak {
    pub fn from_index(index: usize, width: usize) -> Self {
        Self {
            row: index / width,
            col: index % width,
        }
    }

    pub fn distance(&self, row: f64, col: f64) -> f64 {
        (self.row as f64 - row).hypot(self.col as f64 - col)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandingWave {
    pub component: usize,
    pub peak: Peak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TravelingWave {
    pub pair: WavePair,
    pub peaks: [Peak; 2],
}

/// Classification of the leading components into standing and traveling
/// waves with their peak pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveReport {
    pub grid: (usize, usize),
    pub singular_values: Vec<DualScalar>,
    pub similarity: SimilarityReport,
    pub standing: Vec<StandingWave>,
    pub traveling: Vec<TravelingWave>,
}

/// Pixels within this distance of the first traveling peak are ignored when
/// looking for the second.
pub const PEAK_SUPPRESSION_RADIUS: f64 = 5.0;

/// Runs [`similarity_analysis`] and locates peaks on an `H × W` grid whose
/// pixels were flattened row-major into the rows of `A`.
pub fn detect_waves<T: Entry>(
    result: &CdsvdResult<T>,
    k: usize,
    thresholds: &SimilarityThresholds,
    grid: (usize, usize),
) -> Result<WaveReport> {
    let m = result.u.nrows();
    if grid.0 * grid.1 != m {
        return Err(Error::InvalidParameter(format!(
            "grid {}x{} does not match {m} spatial rows",
            grid.0, grid.1
        )));
    }
    let similarity = similarity_analysis(result, k, thresholds)?;
    let us = result.u.standard();
    let width = grid.1;

    let standing = similarity
        .standing()
        .into_iter()
        .map(|x| StandingWave {
            component: x,
            peak: Peak::from_index(linalg::argmax_modulus(us.column(x).iter().copied()), width),
        })
        .collect();

    let traveling = similarity
        .pairs
        .iter()
        .map(|&pair| {
            let energy: Vec<f64> = us
                .column(pair.x)
                .iter()
                .zip(us.column(pair.y).iter())
                .map(|(a, b)| a.modulus_squared() + b.modulus_squared())
                .collect();
            let first = Peak::from_index(argmax(&energy), width);
            let masked: Vec<f64> = energy
                .iter()
                .enumerate()
                .map(|(i, &e)| {
                    let p = Peak::from_index(i, width);
                    if p.distance(first.row as f64, first.col as f64) <= PEAK_SUPPRESSION_RADIUS {
                        f64::NEG_INFINITY
                    } else {
                        e
                    }
                })
                .collect();
            let second = Peak::from_index(argmax(&masked), width);
            TravelingWave {
                pair,
                peaks: [first, second],
            }
        })
        .collect();

    Ok(WaveReport {
        grid,
        singular_values: result.dual_singular_values(),
        similarity,
        standing,
        traveling,
    })
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Standard part of `σ_x U(:,x) V(:,x)* + σ_y U(:,y) V(:,y)*`: the
/// spatiotemporal movie carried by one component pair.
pub fn extract_traveling_wave<T: Entry>(result: &CdsvdResult<T>, pair: (usize, usize)) -> Result<DMatrix<T>> {
    let (x, y) = pair;
    let r = result.rank();
    if x == y || x >= r || y >= r {
        return Err(Error::InvalidPair(x, y, r));
    }
    let us = result.u.standard();
    let vs = result.v.standard();
    let sv = result.standard_singular_values();
    let mut out = DMatrix::zeros(us.nrows(), vs.nrows());
    for j in [x, y] {
        out += (us.column(j) * vs.column(j).adjoint()).scale(sv[j]);
    }
    Ok(out)
}
