use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DualMatrix, Entry};

/// How the infinitesimal part is estimated from consecutive time samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeScheme {
    /// `(x_{j+1} − x_j) / h`.
    #[default]
    FirstDiff,
    /// `(−3x_j + 4x_{j+1} − x_{j+2}) / (2h)`, exact on quadratics.
    OneSided2nd,
}

impl DerivativeScheme {
    pub fn min_columns(self) -> usize {
        match self {
            Self::FirstDiff => 2,
            Self::OneSided2nd => 3,
        }
    }
}

impl fmt::Display for DerivativeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FirstDiff => "first-diff",
            Self::OneSided2nd => "one-sided-2nd",
        })
    }
}

impl FromStr for DerivativeScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-diff" => Ok(Self::FirstDiff),
            "one-sided-2nd" => Ok(Self::OneSided2nd),
            other => Err(Error::InvalidParameter(format!(
                "unknown derivative scheme {other:?} (expected first-diff or one-sided-2nd)"
            ))),
        }
    }
}

/// Dual matrix whose standard part holds the samples and whose infinitesimal
/// part holds their time derivative. Columns of `x` are time steps `h` apart.
pub fn build_dual_from_series<T: Entry>(x: &DMatrix<T>, scheme: DerivativeScheme, h: f64) -> Result<DualMatrix<T>> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {h}")));
    }
    let t = x.ncols();
    let needed = scheme.min_columns();
    if t < needed {
        return Err(Error::TooFewColumns { needed, got: t });
    }
    let keep = t + 1 - needed;
    let standard = x.columns(0, keep).into_owned();
    let infinitesimal = match scheme {
        DerivativeScheme::FirstDiff => (x.columns(1, keep) - &standard).unscale(h),
        DerivativeScheme::OneSided2nd => {
            (x.columns(1, keep).scale(4.0) - standard.scale(3.0) - x.columns(2, keep)).unscale(2.0 * h)
        }
    };
    DualMatrix::new(standard, infinitesimal)
}
