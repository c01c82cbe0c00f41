//! Quasi-metric optimal low-rank approximation and the dual Moore-Penrose
//! inverse.

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::cdsvd::{self, CdsvdOptions};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{random_matrix, DualMatrix, Entry};
use crate::random;
use crate::scalar::DualScalar;

#[derive(Debug, Clone)]
pub struct RankKApproximation<T: Entry = f64> {
    pub approx: DualMatrix<T>,
    pub k: usize,
    /// `‖A_s − A_s^(k)‖_F`.
    pub standard_error: f64,
    /// `‖A_i − A_i^(k)‖_F`.
    pub infinitesimal_error: f64,
}

/// Leading-`k` factors of the thin SVD of `A_s`.
struct LeadingFactors<T: Entry> {
    u: DMatrix<T>,
    s: Vec<f64>,
    v: DMatrix<T>,
}

fn leading_factors<T: Entry>(a: &DualMatrix<T>, k: usize, opts: &CdsvdOptions) -> Result<LeadingFactors<T>> {
    let svd = cdsvd::compact_svd(a.standard(), opts);
    let rank = svd.s.len();
    if k == 0 || k > rank {
        return Err(Error::RankOutOfRange { k, rank });
    }
    let svd = svd.truncate(k);
    Ok(LeadingFactors {
        u: svd.u,
        s: svd.s,
        v: svd.v,
    })
}

pub fn rank_k_approx<T: Entry>(a: &DualMatrix<T>, k: usize) -> Result<RankKApproximation<T>> {
    rank_k_approx_with(a, k, &CdsvdOptions::default())
}

pub fn rank_k_approx_with<T: Entry>(a: &DualMatrix<T>, k: usize, opts: &CdsvdOptions) -> Result<RankKApproximation<T>> {
    let f = leading_factors(a, k, opts)?;
    let standard = linalg::diag_scale_columns(&f.u, &f.s) * f.v.adjoint();
    let residual = linalg::doubly_projected(&f.u, a.infinitesimal(), &f.v);
    let infinitesimal = a.infinitesimal() - &residual;
    Ok(RankKApproximation {
        standard_error: (a.standard() - &standard).norm(),
        infinitesimal_error: residual.norm(),
        approx: DualMatrix::from_parts(standard, infinitesimal),
        k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationComparison {
    pub k: usize,
    pub truncated_distance: DualScalar,
    pub optimal_distance: DualScalar,
    /// Optimal distance is at most the truncated one under the total order,
    /// up to rounding.
    pub optimal_not_worse: bool,
}

/// Compares the first `k` CDSVD terms with the quasi-metric optimum.
pub fn truncated_cdsvd_vs_optimal<T: Entry>(a: &DualMatrix<T>, k: usize) -> Result<TruncationComparison> {
    let res = cdsvd::compute_cdsvd(a)?;
    if k == 0 || k > res.rank() {
        return Err(Error::RankOutOfRange { k, rank: res.rank() });
    }
    let truncated = res.truncated(k);
    let optimal = rank_k_approx(a, k)?;
    let truncated_distance = a.quasi_metric(&truncated)?;
    let optimal_distance = a.quasi_metric(&optimal.approx)?;
    let tol = 1e-9 * (1.0 + a.frobenius_norm().standard + a.infinitesimal().norm().powi(2));
    Ok(TruncationComparison {
        k,
        truncated_distance,
        optimal_distance,
        optimal_not_worse: optimal_distance.le_with_tol(truncated_distance, tol),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub optimal_distance: DualScalar,
    pub candidates: usize,
    /// Candidates strictly closer to `A` than the optimum, with their distance.
    pub violations: Vec<(usize, DualScalar)>,
}

/// Random feasible rank-`k` candidates around the optimum.
///
/// Steps cycle through `{1e-3, 1e-1, 1}`. Even-numbered candidates perturb
/// the standard factors (orthonormalized) together with random infinitesimal
/// factors; odd-numbered ones keep the optimal standard part and perturb only
/// the infinitesimal part, which is where ties in the standard part are
/// decided.
pub fn optimality_probe<T: Entry, R: Rng + ?Sized>(
    a: &DualMatrix<T>,
    k: usize,
    candidates: usize,
    rng: &mut R,
) -> Result<ProbeReport> {
    const STEPS: [f64; 3] = [1e-3, 1e-1, 1.0];
    let opts = CdsvdOptions::default();
    let f = leading_factors(a, k, &opts)?;
    let best = rank_k_approx_with(a, k, &opts)?;
    let optimal_distance = a.quasi_metric(&best.approx)?;
    let (m, n) = a.shape();
    let scale = 1.0 + a.standard().norm();
    let tol = 1e-9 * scale * (1.0 + optimal_distance.infinitesimal.abs());

    let mut violations = Vec::new();
    for c in 0..candidates {
        let step = STEPS[c % STEPS.len()];
        let candidate = if c % 2 == 0 {
            let us = (&f.u + random_matrix::<T, _>(m, k, rng).scale(step)).qr().q();
            let vs = (&f.v + random_matrix::<T, _>(n, k, rng).scale(step)).qr().q();
            let s: Vec<f64> = f.s.iter().map(|&x| x * (1.0 + step * rng.random_range(-0.5..0.5))).collect();
            feasible_rank_k(&us, &s, &vs, step, rng)
        } else {
            // With the standard part fixed, feasible infinitesimal parts form
            // a linear space, so offsetting the optimum stays feasible.
            let d = feasible_rank_k(&f.u, &f.s, &f.v, step, rng);
            DualMatrix::from_parts(
                best.approx.standard().clone(),
                best.approx.infinitesimal() + d.infinitesimal(),
            )
        };
        let dist = a.quasi_metric(&candidate)?;
        if !optimal_distance.le_with_tol(dist, tol) {
            violations.push((c, dist));
        }
    }
    Ok(ProbeReport {
        optimal_distance,
        candidates,
        violations,
    })
}

/// `U Σ V*` with the given standard factors and random infinitesimal factors
/// of size `step` that keep `U`, `V` dual unitary.
fn feasible_rank_k<T: Entry, R: Rng + ?Sized>(
    us: &DMatrix<T>,
    s: &[f64],
    vs: &DMatrix<T>,
    step: f64,
    rng: &mut R,
) -> DualMatrix<T> {
    let (m, k) = us.shape();
    let n = vs.nrows();
    let ui = infinitesimal_factor(us, step, rng);
    let vi = infinitesimal_factor(vs, step, rng);
    let si: Vec<f64> = (0..k).map(|_| step * rng.random_range(-1.0..1.0)).collect();
    let u = DualMatrix::from_parts(us.clone(), ui);
    let v = DualMatrix::from_parts(vs.clone(), vi);
    let sigma = DualMatrix::from_parts(linalg::real_diag(s), linalg::real_diag(&si));
    let out = u.mul(&sigma).and_then(|x| x.mul(&v.conj_transpose())).expect("conformable");
    debug_assert_eq!(out.shape(), (m, n));
    out
}

/// `B_s K + (I − B_s B_s*) G` with `K` skew-Hermitian.
fn infinitesimal_factor<T: Entry, R: Rng + ?Sized>(bs: &DMatrix<T>, step: f64, rng: &mut R) -> DMatrix<T> {
    let (m, k) = bs.shape();
    let skew = random::skew_hermitian::<T, _>(k, rng);
    let g = random_matrix::<T, _>(m, k, rng);
    let perp = &g - bs * (bs.adjoint() * &g);
    (bs * skew + perp).scale(step)
}

#[derive(Debug, Clone)]
pub struct DmpgiResult<T: Entry = f64> {
    pub pinv: DualMatrix<T>,
    pub existence_residual: f64,
}

pub fn dmpgi<T: Entry>(a: &DualMatrix<T>) -> Result<DmpgiResult<T>> {
    dmpgi_with(a, &CdsvdOptions::default())
}

/// Closed-form dual Moore-Penrose inverse. Fails with
/// [`Error::Infeasible`] exactly when no compact dual SVD exists.
pub fn dmpgi_with<T: Entry>(a: &DualMatrix<T>, opts: &CdsvdOptions) -> Result<DmpgiResult<T>> {
    opts.validate()?;
    let (m, n) = a.shape();
    let svd = cdsvd::compact_svd(a.standard(), opts);
    let cert = cdsvd::certificate(&svd, a, opts).into_result()?;
    let (u, v) = (&svd.u, &svd.v);
    let inv: Vec<f64> = svd.s.iter().map(|s| 1.0 / s).collect();
    let inv2: Vec<f64> = inv.iter().map(|x| x * x).collect();

    // V Σ⁻¹ U*
    let v_inv = linalg::diag_scale_columns(v, &inv);
    let standard = &v_inv * u.adjoint();

    let b = a.infinitesimal().adjoint();
    let bu = &b * u;
    let vt_b = v.adjoint() * &b;
    let vt_bu = &vt_b * u;
    // (I − VV*) A_i* U Σ⁻² U*
    let t1 = linalg::diag_scale_columns(&(&bu - v * &vt_bu), &inv2) * u.adjoint();
    // V Σ⁻² V* A_i* (I − UU*)
    let t2 = v * linalg::diag_scale_rows(&(&vt_b - &vt_bu * u.adjoint()), &inv2);
    // V Σ⁻¹ U* A_i V Σ⁻¹ U*
    let core = linalg::diag_scale_rows(&linalg::diag_scale_columns(&vt_bu.adjoint(), &inv), &inv);
    let t3 = v * core * u.adjoint();
    let infinitesimal = t1 + t2 - t3;
    debug_assert_eq!(standard.shape(), (n, m));
    Ok(DmpgiResult {
        pinv: DualMatrix::from_parts(standard, infinitesimal),
        existence_residual: cert.residual,
    })
}

/// Residuals of the four Penrose conditions, measured as Frobenius norms of
/// the representative forms of `AXA − A`, `XAX − X`, `(AX)* − AX`,
/// `(XA)* − XA`.
pub fn penrose_residuals<T: Entry>(a: &DualMatrix<T>, x: &DualMatrix<T>) -> Result<[f64; 4]> {
    let ax = a.mul(x)?;
    let xa = x.mul(a)?;
    let r = |d: DualMatrix<T>| d.representative_form().norm();
    Ok([
        r(ax.mul(a)?.sub(a)?),
        r(xa.mul(x)?.sub(x)?),
        r(ax.conj_transpose().sub(&ax)?),
        r(xa.conj_transpose().sub(&xa)?),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyReport {
    pub k: usize,
    pub trials: usize,
    /// Standard part of the squared Frobenius distance for each trial.
    pub standard_values: Vec<f64>,
    /// Infinitesimal part of the squared Frobenius distance for each trial.
    pub infinitesimal_values: Vec<f64>,
    /// `max − min` of the infinitesimal parts.
    pub spread: f64,
}

/// Squared dual Frobenius distance from `A` to rank-`k` matrices that share
/// the optimal standard factors but have random infinitesimal factors.
pub fn frobenius_rank_k_degeneracy_demo<T: Entry, R: Rng + ?Sized>(
    a: &DualMatrix<T>,
    k: usize,
    trials: usize,
    rng: &mut R,
) -> Result<DegeneracyReport> {
    let f = leading_factors(a, k, &CdsvdOptions::default())?;
    let mut standard_values = Vec::with_capacity(trials);
    let mut infinitesimal_values = Vec::with_capacity(trials);
    for _ in 0..trials {
        let b = feasible_rank_k(&f.u, &f.s, &f.v, 1.0, rng);
        let d = a.sub(&b)?.frobenius_norm().square();
        standard_values.push(d.standard);
        infinitesimal_values.push(d.infinitesimal);
    }
    let (lo, hi) = infinitesimal_values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    Ok(DegeneracyReport {
        k,
        trials,
        standard_values,
        infinitesimal_values,
        spread: if trials == 0 { 0.0 } else { hi - lo },
    })
}
