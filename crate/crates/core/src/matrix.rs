//! Dense dual matrices `A_s + A_i ε` over real or complex entries.

use std::fmt::Debug;

use nalgebra::{Complex, ComplexField, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::DualScalar;

pub type Complex64 = Complex<f64>;

/// Entry type of a dual matrix: `f64` or `Complex<f64>`.
pub trait Entry:
    ComplexField<RealField = f64> + faer::traits::ComplexField + Copy + Debug + Send + Sync + 'static {
    const IS_COMPLEX: bool;

    fn to_complex(self) -> Complex64;

    /// Drops the imaginary part when `Self` is real.
    fn from_complex(z: Complex64) -> Self;

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn is_finite_entry(self) -> bool {
        let z = self.to_complex();
        z.re.is_finite() && z.im.is_finite()
    }
}

impl Entry for f64 {
    const IS_COMPLEX: bool = false;

    fn to_complex(self) -> Complex64 {
        Complex::new(self, 0.0)
    }

    fn from_complex(z: Complex64) -> Self {
        z.re
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Entry for Complex64 {
    const IS_COMPLEX: bool = true;

    fn to_complex(self) -> Complex64 {
        self
    }

    fn from_complex(z: Complex64) -> Self {
        z
    }

    fn sample_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Dual norms and distances are dual numbers.
pub type DualNormValue = DualScalar;

/// Relative threshold deciding whether two standard parts differ.
pub const BRANCH_TOL: f64 = 1e-12;

/// A dual matrix. Both parts always have the same shape and finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMatrix<T: Entry = f64> {
    standard: DMatrix<T>,
    infinitesimal: DMatrix<T>,
}

pub type DualRealMatrix = DualMatrix<f64>;
pub type DualComplexMatrix = DualMatrix<Complex64>;

impl<T: Entry> DualMatrix<T> {
    pub fn new(standard: DMatrix<T>, infinitesimal: DMatrix<T>) -> Result<Self> {
        if standard.shape() != infinitesimal.shape() {
            return Err(Error::DimensionMismatch {
                op: "dual matrix parts",
                left: standard.shape(),
                right: infinitesimal.shape(),
            });
        }
        for m in [&standard, &infinitesimal] {
            check_finite(m)?;
        }
        Ok(Self {
            standard,
            infinitesimal,
        })
    }

    /// Skips the finiteness scan; shapes are still checked in debug builds.
    pub(crate) fn from_parts(standard: DMatrix<T>, infinitesimal: DMatrix<T>) -> Self {
        debug_assert_eq!(standard.shape(), infinitesimal.shape());
        Self {
            standard,
            infinitesimal,
        }
    }

    pub fn from_standard(standard: DMatrix<T>) -> Result<Self> {
        let (m, n) = standard.shape();
        Self::new(standard, DMatrix::zeros(m, n))
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self::from_parts(DMatrix::zeros(m, n), DMatrix::zeros(m, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts(DMatrix::identity(n, n), DMatrix::zeros(n, n))
    }

    pub fn standard(&self) -> &DMatrix<T> {
        &self.standard
    }

    pub fn infinitesimal(&self) -> &DMatrix<T> {
        &self.infinitesimal
    }

    pub fn into_parts(self) -> (DMatrix<T>, DMatrix<T>) {
        (self.standard, self.infinitesimal)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.standard.shape()
    }

    pub fn nrows(&self) -> usize {
        self.standard.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.standard.ncols()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::DimensionMismatch {
                op: "dual matrix product",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let standard = &self.standard * &rhs.standard;
        let infinitesimal = &self.standard * &rhs.infinitesimal + &self.infinitesimal * &rhs.standard;
        Ok(Self::from_parts(standard, infinitesimal))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape("dual matrix sum", rhs)?;
        Ok(Self::from_parts(
            &self.standard + &rhs.standard,
            &self.infinitesimal + &rhs.infinitesimal,
        ))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape("dual matrix difference", rhs)?;
        Ok(Self::from_parts(
            &self.standard - &rhs.standard,
            &self.infinitesimal - &rhs.infinitesimal,
        ))
    }

    /// Multiplies both parts by a real dual scalar `c = c_s + c_i ε`.
    pub fn scale(&self, c: DualScalar) -> Self {
        Self::from_parts(
            &self.standard * T::from_real(c.standard),
            &self.infinitesimal * T::from_real(c.standard) + &self.standard * T::from_real(c.infinitesimal),
        )
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_parts(self.standard.adjoint(), self.infinitesimal.adjoint())
    }

    /// `C_s⁻¹ − C_s⁻¹ C_i C_s⁻¹ ε`.
    pub fn dual_inverse(&self) -> Result<Self> {
        let (m, n) = self.shape();
        if m != n {
            return Err(Error::DimensionMismatch {
                op: "dual inverse",
                left: (m, n),
                right: (n, m),
            });
        }
        if n == 0 {
            return Ok(Self::zeros(0, 0));
        }
        let svd = linalg::thin_svd(&self.standard);
        let (smax, smin) = (svd.s[0], svd.s[n - 1]);
        let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
        if smax == 0.0 || smin <= n as f64 * f64::EPSILON * smax {
            return Err(Error::SingularStandardPart { ratio });
        }
        let inv = self
            .standard
            .clone()
            .lu()
            .try_inverse()
            .ok_or(Error::SingularStandardPart { ratio })?;
        let inf = -(&inv * &self.infinitesimal * &inv);
        Ok(Self::from_parts(inv, inf))
    }

    /// `‖B_s*B_s − I‖_F ≤ tol` and `‖B_s*B_i + B_i*B_s‖_F ≤ tol`.
    pub fn has_unitary_columns(&self, tol: f64) -> bool {
        let (s_res, i_res) = self.unitarity_residuals();
        s_res <= tol && i_res <= tol
    }

    /// The two residuals tested by [`DualMatrix::has_unitary_columns`].
    pub fn unitarity_residuals(&self) -> (f64, f64) {
        let p = self.ncols();
        let gram = self.standard.adjoint() * &self.standard;
        let s_res = (gram - DMatrix::<T>::identity(p, p)).norm();
        let cross = self.standard.adjoint() * &self.infinitesimal;
        let i_res = (&cross + cross.adjoint()).norm();
        (s_res, i_res)
    }

    /// `[[A_s, 0], [A_i, A_s]]`.
    pub fn representative_form(&self) -> DMatrix<T> {
        let (m, n) = self.shape();
        let mut r = DMatrix::zeros(2 * m, 2 * n);
        r.view_mut((0, 0), (m, n)).copy_from(&self.standard);
        r.view_mut((m, 0), (m, n)).copy_from(&self.infinitesimal);
        r.view_mut((m, n), (m, n)).copy_from(&self.standard);
        r
    }

    pub fn frobenius_norm(&self) -> DualNormValue {
        let ns = self.standard.norm();
        if ns > BRANCH_TOL {
            let inner = inner_product(&self.standard, &self.infinitesimal);
            DualScalar::new(ns, inner / ns)
        } else {
            DualScalar::new(0.0, self.infinitesimal.norm())
        }
    }

    /// The quasi-metric `d*(self, other)`.
    pub fn quasi_metric(&self, other: &Self) -> Result<DualNormValue> {
        self.same_shape("quasi-metric", other)?;
        let ds = (&self.standard - &other.standard).norm();
        let di = (&self.infinitesimal - &other.infinitesimal).norm();
        let scale = 1f64.max(self.standard.norm()).max(other.standard.norm());
        if ds > BRANCH_TOL * scale {
            Ok(DualScalar::new(ds, di * di / (2.0 * ds)))
        } else {
            Ok(DualScalar::new(0.0, di))
        }
    }

    /// Columns `range` of both parts.
    pub fn columns(&self, start: usize, count: usize) -> Self {
        Self::from_parts(
            self.standard.columns(start, count).into_owned(),
            self.infinitesimal.columns(start, count).into_owned(),
        )
    }

    pub fn view(&self, (i, j): (usize, usize), (m, n): (usize, usize)) -> Self {
        Self::from_parts(
            self.standard.view((i, j), (m, n)).into_owned(),
            self.infinitesimal.view((i, j), (m, n)).into_owned(),
        )
    }

    pub fn map_entries<S: Entry>(&self, f: impl Fn(T) -> S) -> DualMatrix<S> {
        DualMatrix::from_parts(self.standard.map(&f), self.infinitesimal.map(&f))
    }

    pub fn to_complex(&self) -> DualComplexMatrix {
        self.map_entries(T::to_complex)
    }

    /// Both parts filled with independent standard normal entries.
    pub fn random_normal<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Self {
        Self::from_parts(random_matrix(m, n, rng), random_matrix(m, n, rng))
    }

    fn same_shape(&self, op: &'static str, rhs: &Self) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(())
    }
}

/// `Re tr(X* Y)`.
pub fn inner_product<T: Entry>(x: &DMatrix<T>, y: &DMatrix<T>) -> f64 {
    x.dotc(y).real()
}

pub fn random_matrix<T: Entry, R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> DMatrix<T> {
    DMatrix::from_fn(m, n, |_, _| T::sample_normal(rng))
}

fn check_finite<T: Entry>(m: &DMatrix<T>) -> Result<()> {
    // column-major iteration
    for (k, v) in m.iter().enumerate() {
        if !v.is_finite_entry() {
            return Err(Error::NonFinite {
                row: k % m.nrows(),
                col: k / m.nrows(),
            });
        }
    }
    Ok(())
}
