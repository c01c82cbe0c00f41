//! Compact dual SVD `A = U Σ V*`.

use std::ops::Range;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ThinSvd};
use crate::matrix::{DualMatrix, Entry};
use crate::scalar::DualScalar;

/// Distinct positive singular values with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularBlockStructure {
    pub distinct_values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub rank: usize,
}

impl SingularBlockStructure {
    pub fn empty() -> Self {
        Self {
            distinct_values: Vec::new(),
            multiplicities: Vec::new(),
            rank: 0,
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.distinct_values.len()
    }

    pub fn all_simple(&self) -> bool {
        self.multiplicities.iter().all(|&r| r == 1)
    }

    /// Column ranges of each block.
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.multiplicities
            .iter()
            .map(|&r| {
                let range = start..start + r;
                start += r;
                range
            })
            .collect()
    }

    /// Block index of every column.
    pub fn block_index(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .enumerate()
            .flat_map(|(t, &r)| std::iter::repeat_n(t, r))
            .collect()
    }

    /// `σ̃_t` repeated `r_t` times.
    pub fn expanded_values(&self) -> Vec<f64> {
        self.distinct_values
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&s, &r)| std::iter::repeat_n(s, r))
            .collect()
    }
}

/// Clusters a nonincreasing list of singular values into blocks.
///
/// Values at or below `len · eps · σ₁` are dropped. Consecutive values whose
/// gap relative to `σ₁` is at most `tol_group` share a block, whose value is
/// the block mean.
pub fn group_singular_values(sigma: &[f64], tol_group: f64) -> SingularBlockStructure {
    let rank = linalg::numerical_rank(sigma, sigma.len(), 0, 1.0);
    let kept = &sigma[..rank];
    let mut out = SingularBlockStructure::empty();
    out.rank = rank;
    if rank == 0 {
        return out;
    }
    let s1 = kept[0];
    let mut start = 0;
    for j in 1..=rank {
        if j == rank || (kept[j - 1] - kept[j]) / s1 > tol_group {
            let block = &kept[start..j];
            out.distinct_values.push(block.iter().sum::<f64>() / block.len() as f64);
            out.multiplicities.push(block.len());
            start = j;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdsvdOptions {
    /// Relative gap below which neighbouring singular values are merged.
    pub tol_group: f64,
    /// Multiplier on the rank cut `max(m,n) · eps · σ₁`.
    pub rank_tol_factor: f64,
    /// Existence threshold relative to `‖A_i‖_F`.
    pub existence_rel_tol: f64,
    /// Existence threshold used when `A_i = 0`.
    pub existence_abs_tol: f64,
}

impl Default for CdsvdOptions {
    fn default() -> Self {
        Self {
            tol_group: 1e-8,
            rank_tol_factor: 1.0,
            existence_rel_tol: 1e-10,
            existence_abs_tol: 1e-12,
        }
    }
}

impl CdsvdOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_group", self.tol_group),
            ("rank_tol_factor", self.rank_tol_factor),
            ("existence_rel_tol", self.existence_rel_tol),
            ("existence_abs_tol", self.existence_abs_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn existence_threshold(&self, infinitesimal_norm: f64) -> f64 {
        if infinitesimal_norm > 0.0 {
            self.existence_rel_tol * infinitesimal_norm
        } else {
            self.existence_abs_tol
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExistenceCertificate {
    pub exists: bool,
    pub residual: f64,
    pub threshold: f64,
}

impl ExistenceCertificate {
    fn new(residual: f64, threshold: f64) -> Self {
        Self {
            exists: residual <= threshold,
            residual,
            threshold,
        }
    }

    pub fn into_result(self) -> Result<Self> {
        if self.exists {
            Ok(self)
        } else {
            Err(Error::Infeasible {
                residual: self.residual,
                threshold: self.threshold,
            })
        }
    }
}

/// Compact SVD of `A_s` cut at the numerical rank.
pub(crate) fn compact_svd<T: Entry>(a: &DMatrix<T>, opts: &CdsvdOptions) -> ThinSvd<T> {
    let (m, n) = a.shape();
    let svd = linalg::thin_svd(a);
    let r = linalg::numerical_rank(&svd.s, m, n, opts.rank_tol_factor);
    svd.truncate(r)
}

pub(crate) fn certificate<T: Entry>(svd: &ThinSvd<T>, a: &DualMatrix<T>, opts: &CdsvdOptions) -> ExistenceCertificate {
    let residual = linalg::doubly_projected(&svd.u, a.infinitesimal(), &svd.v).norm();
    ExistenceCertificate::new(residual, opts.existence_threshold(a.infinitesimal().norm()))
}

pub fn cdsvd_exists<T: Entry>(a: &DualMatrix<T>) -> ExistenceCertificate {
    cdsvd_exists_with(a, &CdsvdOptions::default())
}

pub fn cdsvd_exists_with<T: Entry>(a: &DualMatrix<T>, opts: &CdsvdOptions) -> ExistenceCertificate {
    certificate(&compact_svd(a.standard(), opts), a, opts)
}

/// Removes the doubly projected component of `A_i`, leaving `A_s` untouched.
pub fn project_to_feasible<T: Entry>(a: &DualMatrix<T>) -> DualMatrix<T> {
    project_to_feasible_with(a, &CdsvdOptions::default())
}

pub fn project_to_feasible_with<T: Entry>(a: &DualMatrix<T>, opts: &CdsvdOptions) -> DualMatrix<T> {
    let svd = compact_svd(a.standard(), opts);
    let off = linalg::doubly_projected(&svd.u, a.infinitesimal(), &svd.v);
    DualMatrix::from_parts(a.standard().clone(), a.infinitesimal() - off)
}

#[derive(Debug, Clone)]
pub struct CdsvdResult<T: Entry = f64> {
    /// `m × r`, dual unitary columns.
    pub u: DualMatrix<T>,
    /// `r × r` diagonal; standard part positive, infinitesimal part real.
    pub sigma: DualMatrix<T>,
    /// `n × r`, dual unitary columns.
    pub v: DualMatrix<T>,
    pub blocks: SingularBlockStructure,
    pub existence: ExistenceCertificate,
    /// Frobenius mass of the within-block off-diagonal Hermitian part of
    /// `U_s* A_i V_s` left after the gauge rotation.
    pub sigma_offdiag_mass: f64,
    /// Largest distance between a computed singular value of `A_s` and the
    /// value of the block it was merged into.
    pub grouping_spread: f64,
}

impl<T: Entry> CdsvdResult<T> {
    pub fn rank(&self) -> usize {
        self.blocks.rank
    }

    pub fn dual_singular_values(&self) -> Vec<DualScalar> {
        (0..self.rank())
            .map(|j| DualScalar::new(self.sigma.standard()[(j, j)].real(), self.sigma.infinitesimal()[(j, j)].real()))
            .collect()
    }

    pub fn standard_singular_values(&self) -> Vec<f64> {
        self.dual_singular_values().iter().map(|d| d.standard).collect()
    }

    pub fn infinitesimal_singular_values(&self) -> Vec<f64> {
        self.dual_singular_values().iter().map(|d| d.infinitesimal).collect()
    }

    /// `U Σ V*`.
    pub fn reconstruct(&self) -> DualMatrix<T> {
        self.truncated(self.rank())
    }

    /// Sum of the first `k` dual rank-one terms.
    pub fn truncated(&self, k: usize) -> DualMatrix<T> {
        let u = self.u.columns(0, k);
        let v = self.v.columns(0, k);
        let s = self.sigma.view((0, 0), (k, k));
        u.mul(&s)
            .and_then(|us| us.mul(&v.conj_transpose()))
            .expect("factor shapes agree")
    }

    fn swap_sides(self) -> Self {
        Self {
            u: self.v,
            v: self.u,
            ..self
        }
    }
}

pub fn compute_cdsvd<T: Entry>(a: &DualMatrix<T>) -> Result<CdsvdResult<T>> {
    compute_cdsvd_with(a, &CdsvdOptions::default())
}

pub fn compute_cdsvd_with<T: Entry>(a: &DualMatrix<T>, opts: &CdsvdOptions) -> Result<CdsvdResult<T>> {
    opts.validate()?;
    if a.nrows() < a.ncols() {
        return compute_tall(&a.conj_transpose(), opts).map(CdsvdResult::swap_sides);
    }
    compute_tall(a, opts)
}

fn compute_tall<T: Entry>(a: &DualMatrix<T>, opts: &CdsvdOptions) -> Result<CdsvdResult<T>> {
    let (m, n) = a.shape();
    let svd = compact_svd(a.standard(), opts);
    let existence = certificate(&svd, a, opts).into_result()?;
    let r = svd.s.len();
    if r == 0 {
        return Ok(CdsvdResult {
            u: DualMatrix::zeros(m, 0),
            sigma: DualMatrix::zeros(0, 0),
            v: DualMatrix::zeros(n, 0),
            blocks: SingularBlockStructure::empty(),
            existence,
            sigma_offdiag_mass: 0.0,
            grouping_spread: 0.0,
        });
    }

    let blocks = group_singular_values(&svd.s, opts.tol_group);
    let r = blocks.rank;
    let sv = &blocks.distinct_values;
    let s1sq = sv[0] * sv[0];
    for t in 1..sv.len() {
        let gap = sv[t - 1] * sv[t - 1] - sv[t] * sv[t];
        if gap < 1e3 * f64::EPSILON * s1sq {
            return Err(Error::DegenerateGap {
                first: t - 1,
                second: t,
                gap,
            });
        }
    }

    let ai = a.infinitesimal();
    let u0 = svd.u.columns(0, r).into_owned();
    let v0 = svd.v.columns(0, r).into_owned();
    let ai_v0 = ai * &v0;
    let r0 = u0.adjoint() * &ai_v0;

    // Block-diagonal rotation that diagonalizes the Hermitian part of each
    // diagonal block of R.
    let ranges = blocks.ranges();
    let mut x = DMatrix::<T>::zeros(r, r);
    for range in &ranges {
        let len = range.len();
        let rtt = r0.view((range.start, range.start), (len, len)).into_owned();
        let (_, xt) = linalg::hermitian_eigen_desc(&(&rtt + rtt.adjoint()).unscale(2.0));
        x.view_mut((range.start, range.start), (len, len)).copy_from(&xt);
    }
    let us = &u0 * &x;
    let vs = &v0 * &x;
    let ai_vs = &ai_v0 * &x;
    let rr = x.adjoint() * &r0 * &x;

    let mut offdiag = 0.0;
    for range in &ranges {
        for i in range.clone() {
            for j in range.clone() {
                if i != j {
                    offdiag += ((rr[(i, j)] + rr[(j, i)].conjugate()).unscale(2.0)).modulus_squared();
                }
            }
        }
    }

    let sig = blocks.expanded_values();
    let grouping_spread = sig.iter().zip(&svd.s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let block_of = blocks.block_index();
    let mut p = DMatrix::<T>::zeros(r, r);
    let mut q = DMatrix::<T>::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let rij = rr[(i, j)];
            let rji_c = rr[(j, i)].conjugate();
            if block_of[i] == block_of[j] {
                p[(i, j)] = (rij - rji_c).unscale(2.0 * sig[i]);
            } else {
                let den = sig[j] * sig[j] - sig[i] * sig[i];
                p[(i, j)] = (rij.scale(sig[j]) + rji_c.scale(sig[i])).unscale(den);
                q[(i, j)] = (rij.scale(sig[i]) + rji_c.scale(sig[j])).unscale(den);
            }
        }
    }

    let inv: Vec<f64> = sig.iter().map(|s| 1.0 / s).collect();
    let ui = &us * &p + linalg::diag_scale_columns(&(&ai_vs - &us * &rr), &inv);
    let ai_h_us = ai.adjoint() * &us;
    let vi = &vs * &q + linalg::diag_scale_columns(&(ai_h_us - &vs * rr.adjoint()), &inv);
    let sigma_i: Vec<f64> = (0..r).map(|j| rr[(j, j)].real()).collect();

    Ok(CdsvdResult {
        u: DualMatrix::from_parts(us, ui),
        sigma: DualMatrix::from_parts(linalg::real_diag(&sig), linalg::real_diag(&sigma_i)),
        v: DualMatrix::from_parts(vs, vi),
        blocks,
        existence,
        sigma_offdiag_mass: offdiag.sqrt(),
        grouping_spread,
    })
}

/// Fixes the remaining diagonal gauge so that, for each column `t`, the
/// largest-magnitude entry of `V_s(:,t)` is real positive and the matching
/// entry of `V_i(:,t)` is real.
pub fn normalize_gauge<T: Entry>(result: &CdsvdResult<T>) -> Result<CdsvdResult<T>> {
    if let Some(t) = result.blocks.multiplicities.iter().position(|&r| r > 1) {
        return Err(Error::RepeatedSingularValue {
            block: t,
            multiplicity: result.blocks.multiplicities[t],
        });
    }
    let (mut us, mut ui) = result.u.clone().into_parts();
    let (mut vs, mut vi) = result.v.clone().into_parts();
    for t in 0..result.rank() {
        let phase = linalg::leading_phase(vs.column(t).iter().copied());
        for mat in [&mut us, &mut ui, &mut vs, &mut vi] {
            for z in mat.column_mut(t).iter_mut() {
                *z *= phase;
            }
        }
        let l = linalg::argmax_modulus(vs.column(t).iter().copied());
        let anchor = vs[(l, t)].real();
        if anchor == 0.0 {
            continue;
        }
        let omega = -vi[(l, t)].imaginary() / anchor;
        let shift = T::from_complex(nalgebra::Complex::new(0.0, omega));
        let us_t = us.column(t).into_owned();
        let vs_t = vs.column(t).into_owned();
        ui.column_mut(t).axpy(shift, &us_t, T::one());
        vi.column_mut(t).axpy(shift, &vs_t, T::one());
    }
    Ok(CdsvdResult {
        u: DualMatrix::from_parts(us, ui),
        v: DualMatrix::from_parts(vs, vi),
        sigma: result.sigma.clone(),
        blocks: result.blocks.clone(),
        existence: result.existence,
        sigma_offdiag_mass: result.sigma_offdiag_mass,
        grouping_spread: result.grouping_spread,
    })
}
