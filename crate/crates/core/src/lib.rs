//! Dual complex matrices: compact dual SVD, quasi-metric optimal low-rank
//! approximation, the dual Moore-Penrose inverse, and wave identification in
//! spatiotemporal data.

pub mod approx_inverse;
pub mod cdsvd;
pub mod error;
pub mod io;
mod linalg;
pub mod matrix;
pub mod random;
pub mod rng;
pub mod scalar;
pub mod waves;

pub use approx_inverse::{
    dmpgi, dmpgi_with, frobenius_rank_k_degeneracy_demo, optimality_probe, penrose_residuals, rank_k_approx,
    rank_k_approx_with, truncated_cdsvd_vs_optimal, DmpgiResult, RankKApproximation,
};
pub use cdsvd::{
    cdsvd_exists, cdsvd_exists_with, compute_cdsvd, compute_cdsvd_with, group_singular_values, normalize_gauge,
    project_to_feasible, project_to_feasible_with, CdsvdOptions, CdsvdResult, ExistenceCertificate,
    SingularBlockStructure,
};
pub use error::{Error, Result};
pub use matrix::{Complex64, DualComplexMatrix, DualMatrix, DualNormValue, DualRealMatrix, Entry};
pub use scalar::{DualComplex, DualScalar};
