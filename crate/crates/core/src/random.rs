//! Random dual matrices with prescribed structure, for tests and benchmarks.

use nalgebra::DMatrix;
use rand::Rng;

use crate::linalg;
use crate::matrix::{random_matrix, DualMatrix, Entry};

/// `m × r` matrix with orthonormal columns, Haar-like.
pub fn unitary_columns<T: Entry, R: Rng + ?Sized>(m: usize, r: usize, rng: &mut R) -> DMatrix<T> {
    assert!(r <= m, "cannot fit {r} orthonormal columns in dimension {m}");
    let g = random_matrix::<T, _>(m, r, rng);
    g.qr().q()
}

pub fn skew_hermitian<T: Entry, R: Rng + ?Sized>(r: usize, rng: &mut R) -> DMatrix<T> {
    let g = random_matrix::<T, _>(r, r, rng);
    (&g - g.adjoint()).unscale(2.0)
}

/// Standard part `U diag(s) V*` with random orthonormal `U`, `V`, and
/// infinitesimal part `U G V* + U H + K V*` with Gaussian `G`, `H`, `K`.
/// Such matrices always admit a compact dual SVD.
pub fn feasible<T: Entry, R: Rng + ?Sized>(m: usize, n: usize, singular_values: &[f64], rng: &mut R) -> DualMatrix<T> {
    let r = singular_values.len();
    let u = unitary_columns::<T, _>(m, r, rng);
    let v = unitary_columns::<T, _>(n, r, rng);
    let standard = linalg::diag_scale_columns(&u, singular_values) * v.adjoint();
    let g = random_matrix::<T, _>(r, r, rng);
    let h = random_matrix::<T, _>(r, n, rng);
    let k = random_matrix::<T, _>(m, r, rng);
    let infinitesimal = &u * g * v.adjoint() + &u * h + k * v.adjoint();
    DualMatrix::new(standard, infinitesimal).expect("finite by construction")
}

/// A feasible matrix plus a doubly projected perturbation of Frobenius norm
/// `violation`. Needs `rank < min(m, n)`.
pub fn infeasible<T: Entry, R: Rng + ?Sized>(
    m: usize,
    n: usize,
    singular_values: &[f64],
    violation: f64,
    rng: &mut R,
) -> DualMatrix<T> {
    let a = feasible::<T, _>(m, n, singular_values, rng);
    let svd = linalg::thin_svd(a.standard()).truncate(singular_values.len());
    let noise = random_matrix::<T, _>(m, n, rng);
    let off = linalg::doubly_projected(&svd.u, &noise, &svd.v);
    let norm = off.norm();
    assert!(norm > 0.0, "no room outside the range for rank {}", singular_values.len());
    let infinitesimal = a.infinitesimal() + off.scale(violation / norm);
    DualMatrix::new(a.standard().clone(), infinitesimal).expect("finite by construction")
}
