//! Dense kernels shared by the decompositions.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::matrix::Entry;

/// Thin SVD with singular values sorted nonincreasing.
#[derive(Debug, Clone)]
pub(crate) struct ThinSvd<T: Entry> {
    pub u: DMatrix<T>,
    pub s: Vec<f64>,
    pub v: DMatrix<T>,
}

impl<T: Entry> ThinSvd<T> {
    pub fn truncate(mut self, r: usize) -> Self {
        self.u = self.u.columns(0, r).into_owned();
        self.v = self.v.columns(0, r).into_owned();
        self.s.truncate(r);
        self
    }
}

pub(crate) fn thin_svd<T: Entry>(a: &DMatrix<T>) -> ThinSvd<T> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return ThinSvd {
            u: DMatrix::zeros(m, 0),
            s: Vec::new(),
            v: DMatrix::zeros(n, 0),
        };
    }
    let svd = faer::Mat::<T>::from_fn(m, n, |i, j| a[(i, j)])
        .thin_svd()
        .expect("SVD iteration converges on finite input");
    let (u, v) = (svd.U(), svd.V());
    let k = u.ncols();
    let s = svd.S().column_vector();
    ThinSvd {
        u: DMatrix::from_fn(m, k, |i, j| u[(i, j)]),
        s: (0..k).map(|j| s[j].to_complex().re).collect(),
        v: DMatrix::from_fn(n, k, |i, j| v[(i, j)]),
    }
}

/// Number of singular values above `factor · max(m,n) · eps · σ₁`.
pub(crate) fn numerical_rank(s: &[f64], m: usize, n: usize, factor: f64) -> usize {
    let Some(&s1) = s.first() else { return 0 };
    let cut = factor * m.max(n) as f64 * f64::EPSILON * s1;
    s.iter().take_while(|&&x| x > cut && x > 0.0).count()
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues nonincreasing
/// and each eigenvector's largest-magnitude component made real positive.
pub(crate) fn hermitian_eigen_desc<T: Entry>(h: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let n = h.nrows();
    if n == 1 {
        return (vec![h[(0, 0)].real()], DMatrix::identity(1, 1));
    }
    let sym = (h + h.adjoint()).unscale(2.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut x = eig.eigenvectors.select_columns(&order);
    for mut col in x.column_iter_mut() {
        let phase = leading_phase(col.iter().copied());
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
    (order.iter().map(|&i| eig.eigenvalues[i]).collect(), x)
}

/// Unit factor that turns the largest-magnitude entry real positive.
/// The first entry wins ties.
pub(crate) fn leading_phase<T: Entry>(col: impl Iterator<Item = T>) -> T {
    let mut best = T::one();
    let mut best_mod = 0.0;
    for z in col {
        let m = z.modulus();
        if m > best_mod {
            best_mod = m;
            best = z;
        }
    }
    if best_mod == 0.0 {
        T::one()
    } else {
        best.conjugate().unscale(best_mod)
    }
}

/// Index of the largest-magnitude entry, first wins ties.
pub(crate) fn argmax_modulus<T: Entry>(col: impl Iterator<Item = T>) -> usize {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (k, z) in col.enumerate() {
        let m = z.modulus();
        if m > best_mod {
            best_mod = m;
            best = k;
        }
    }
    best
}

/// `(I − UU*) A (I − VV*)` for orthonormal `U`, `V`.
pub(crate) fn doubly_projected<T: Entry>(u: &DMatrix<T>, a: &DMatrix<T>, v: &DMatrix<T>) -> DMatrix<T> {
    let left = a - u * (u.adjoint() * a);
    let right = &left * v;
    left - right * v.adjoint()
}

pub(crate) fn diag_scale_columns<T: Entry>(a: &DMatrix<T>, d: &[f64]) -> DMatrix<T> {
    let mut out = a.clone();
    for (mut col, &s) in out.column_iter_mut().zip(d) {
        col.scale_mut(s);
    }
    out
}

pub(crate) fn diag_scale_rows<T: Entry>(a: &DMatrix<T>, d: &[f64]) -> DMatrix<T> {
    let mut out = a.clone();
    for (mut row, &s) in out.row_iter_mut().zip(d) {
        row.scale_mut(s);
    }
    out
}

pub(crate) fn real_diag<T: Entry>(d: &[f64]) -> DMatrix<T> {
    DMatrix::from_fn(d.len(), d.len(), |i, j| if i == j { T::from_real(d[i]) } else { T::zero() })
}
